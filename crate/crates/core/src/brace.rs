//! Skew braces and their associated solutions, a small-order brace
//! enumerator, file ingestion for externally supplied brace tables, and the
//! reflection census that produces the report tables.
//!
//! A skew brace is one carrier with two group structures `(B, +)` and
//! `(B, ∘)` sharing their identity and linked by
//! `a ∘ (b + c) = (a ∘ b) − a + (a ∘ c)`. Its associated solution is
//! bijective and non-degenerate, with `λ_a(b) = −a + a∘b` and
//! `ρ_b(a) = λ_a(b)⁻¹˚ ∘ a ∘ b` (inverse taken in `(B, ∘)`).
//!
//! Enumeration fixes a canonical table for each abstract group of the order
//! as `(B, +)`, enumerates candidate `∘` tables as pushforwards of canonical
//! group tables under all bijections fixing the identity, filters by the
//! compatibility law, and deduplicates under `Aut(B, +)` — which classifies
//! braces up to isomorphism since a brace isomorphism between two braces on
//! the same additive table is exactly an additive automorphism carrying one
//! `∘` to the other.

use std::collections::HashSet;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{self, GroupTable};
use crate::map::FiniteMap;
use crate::reflect::{count_reflections, EnumOptions, ReflectionCounts};
use crate::solution::Solution;

/// Largest order the built-in enumerator accepts; larger orders are ingested
/// from files.
pub const ENUM_ORDER_CAP: usize = 6;

/// Which `λ` convention the associated solution uses.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum LambdaConvention {
    /// `λ_a(b) = (−a) + (a ∘ b)`
    #[default]
    NegThenProduct,
    /// `λ_a(b) = (a ∘ b) + (−a)`
    ProductThenNeg,
}

/// Two group tables on one carrier with a shared identity, satisfying the
/// brace compatibility law.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SkewBrace {
    n: usize,
    add: Vec<Vec<usize>>,
    mul: Vec<Vec<usize>>,
    zero: usize,
}

impl SkewBrace {
    pub fn new(add: Vec<Vec<usize>>, mul: Vec<Vec<usize>>, zero: usize) -> Result<Self> {
        let n = add.len();
        if n == 0 || mul.len() != n {
            return Err(Error::structure("add and mul tables must be square and equal size"));
        }
        for (name, t) in [("add", &add), ("mul", &mul)] {
            for (i, row) in t.iter().enumerate() {
                if row.len() != n || row.iter().any(|&v| v >= n) {
                    return Err(Error::structure(format!("{name} row {i} malformed")));
                }
            }
            if let Some(w) = groups::group_axiom_witness(t, zero) {
                return Err(Error::domain(format!("({name}) is not a group: {w}")));
            }
        }
        let b = SkewBrace { n, add, mul, zero };
        if let Some((x, y, z)) = b.compatibility_witness() {
            return Err(Error::domain(format!(
                "compatibility a∘(b+c) = a∘b − a + a∘c fails at ({x}, {y}, {z})"
            )));
        }
        Ok(b)
    }

    /// `+ = ∘`.
    pub fn trivial(g: &GroupTable) -> SkewBrace {
        SkewBrace::new(g.table().to_vec(), g.table().to_vec(), 0)
            .expect("trivial brace satisfies compatibility")
    }

    /// `a ∘ b = b + a`.
    pub fn almost_trivial(g: &GroupTable) -> SkewBrace {
        let n = g.n();
        let mul = (0..n)
            .map(|a| (0..n).map(|b| g.mul(b, a)).collect())
            .collect();
        SkewBrace::new(g.table().to_vec(), mul, 0)
            .expect("opposite multiplication satisfies compatibility")
    }

    fn compatibility_witness(&self) -> Option<(usize, usize, usize)> {
        let n = self.n;
        let neg: Vec<usize> = (0..n).map(|a| self.neg(a)).collect();
        for a in 0..n {
            for b in 0..n {
                let ab = self.mul[a][b];
                let t = self.add[ab][neg[a]];
                for c in 0..n {
                    if self.mul[a][self.add[b][c]] != self.add[t][self.mul[a][c]] {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn add_table(&self) -> &[Vec<usize>] {
        &self.add
    }

    pub fn mul_table(&self) -> &[Vec<usize>] {
        &self.mul
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a][b]
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    /// Additive inverse.
    pub fn neg(&self, a: usize) -> usize {
        (0..self.n)
            .find(|&b| self.add[a][b] == self.zero)
            .expect("group axioms guarantee inverses")
    }

    /// Multiplicative (`∘`) inverse.
    pub fn mul_inv(&self, a: usize) -> usize {
        (0..self.n)
            .find(|&b| self.mul[a][b] == self.zero)
            .expect("group axioms guarantee inverses")
    }

    pub fn is_trivial(&self) -> bool {
        self.add == self.mul
    }

    pub fn is_almost_trivial(&self) -> bool {
        (0..self.n).all(|a| (0..self.n).all(|b| self.mul[a][b] == self.add[b][a]))
    }

    /// The associated solution under the given λ convention.
    pub fn solution_with(&self, conv: LambdaConvention) -> Result<Solution> {
        let n = self.n;
        let neg: Vec<usize> = (0..n).map(|a| self.neg(a)).collect();
        let mut lam = vec![vec![0; n]; n];
        for a in 0..n {
            for b in 0..n {
                lam[a][b] = match conv {
                    LambdaConvention::NegThenProduct => self.add[neg[a]][self.mul[a][b]],
                    LambdaConvention::ProductThenNeg => self.add[self.mul[a][b]][neg[a]],
                };
            }
        }
        let mut rho = vec![vec![0; n]; n];
        for b in 0..n {
            for a in 0..n {
                let l = lam[a][b];
                rho[b][a] = self.mul[self.mul[self.mul_inv(l)][a]][b];
            }
        }
        Solution::new(lam, rho)
    }

    /// The associated solution under the default convention.
    pub fn solution(&self) -> Result<Solution> {
        self.solution_with(LambdaConvention::default())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    BuiltIn,
    Ingested,
}

/// One brace of a catalog: tables plus naming metadata.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BraceCatalogEntry {
    pub order: usize,
    pub type_index: usize,
    pub brace: SkewBrace,
    pub add_group: String,
    pub mul_group: String,
    pub label: String,
    pub provenance: Provenance,
}

// ---------------------------------------------------------------------------
// enumeration
// ---------------------------------------------------------------------------

/// All automorphisms of a group table with identity 0, by filtered search
/// over permutations fixing 0.
fn group_automorphisms(g: &GroupTable) -> Vec<FiniteMap> {
    let n = g.n();
    FiniteMap::all_permutations(n)
        .filter(|p| p.apply(0) == 0)
        .filter(|p| {
            (0..n).all(|a| (0..n).all(|b| p.apply(g.mul(a, b)) == g.mul(p.apply(a), p.apply(b))))
        })
        .collect()
}

/// Pushforward of a multiplication table along a bijection:
/// `t'(x, y) = σ(t(σ⁻¹x, σ⁻¹y))`.
fn pushforward(table: &[Vec<usize>], sigma: &FiniteMap) -> Vec<Vec<usize>> {
    let n = table.len();
    let inv = sigma.inverse().expect("pushforward along a bijection");
    (0..n)
        .map(|x| {
            (0..n)
                .map(|y| sigma.apply(table[inv.apply(x)][inv.apply(y)]))
                .collect()
        })
        .collect()
}

/// Skew braces of order `n` up to isomorphism, with no order cap. Backs both
/// the public capped enumerator and the data-file generator.
pub fn enumerate_skew_braces_unbounded(n: usize) -> Result<Vec<BraceCatalogEntry>> {
    let additive_groups = groups::groups_of_order(n)?;
    let abstract_groups = groups::groups_of_order(n)?;
    let mut entries: Vec<BraceCatalogEntry> = Vec::new();
    for a in &additive_groups {
        let auts = group_automorphisms(a);
        // all group tables with identity 0, as pushforwards of the canonical
        // tables; compatibility filters them down to brace multiplications
        let mut compatible: HashSet<Vec<Vec<usize>>> = HashSet::new();
        for g in &abstract_groups {
            for sigma in FiniteMap::all_permutations(n).filter(|p| p.apply(0) == 0) {
                let mul = pushforward(g.table(), &sigma);
                if compatible.contains(&mul) {
                    continue;
                }
                if SkewBrace::new(a.table().to_vec(), mul.clone(), 0).is_ok() {
                    compatible.insert(mul);
                }
            }
        }
        // orbit representatives under Aut(B, +): canonical form is the
        // lexicographically least pushforward
        let mut canon: HashSet<Vec<Vec<usize>>> = HashSet::new();
        for mul in &compatible {
            let best = auts
                .iter()
                .map(|t| pushforward(mul, t))
                .min()
                .expect("identity automorphism always present");
            canon.insert(best);
        }
        let mut reps: Vec<Vec<Vec<usize>>> = canon.into_iter().collect();
        reps.sort_by_key(|mul| {
            (
                groups::identify(mul, 0).expect("valid group of catalogued order"),
                mul.clone(),
            )
        });
        for mul in reps {
            let mul_group = groups::identify(&mul, 0)?;
            let brace = SkewBrace::new(a.table().to_vec(), mul, 0)?;
            entries.push(BraceCatalogEntry {
                order: n,
                type_index: 0,
                brace,
                add_group: a.name().to_string(),
                mul_group,
                label: String::new(),
                provenance: Provenance::BuiltIn,
            });
        }
    }
    for (i, e) in entries.iter_mut().enumerate() {
        e.type_index = i + 1;
        e.label = format!("B{n}_{}", i + 1);
    }
    Ok(entries)
}

/// Skew braces of order `n ≤ 6` up to isomorphism, canonically ordered.
/// Larger orders must be ingested from a file.
pub fn enumerate_skew_braces(n: usize) -> Result<Vec<BraceCatalogEntry>> {
    if n > ENUM_ORDER_CAP {
        return Err(Error::resource(format!(
            "built-in brace enumeration covers orders 1..={ENUM_ORDER_CAP}; \
             ingest order {n} from a brace file instead"
        )));
    }
    enumerate_skew_braces_unbounded(n)
}

// ---------------------------------------------------------------------------
// file ingestion
// ---------------------------------------------------------------------------

/// File schema: `{"order": …, "entries": [{"add": [[…]], "mul": [[…]],
/// "zero": …, "label": "…"}]}`.
#[derive(Serialize, Deserialize)]
pub struct BraceFile {
    pub order: usize,
    pub entries: Vec<BraceFileEntry>,
}

#[derive(Serialize, Deserialize)]
pub struct BraceFileEntry {
    pub add: Vec<Vec<usize>>,
    pub mul: Vec<Vec<usize>>,
    pub zero: usize,
    #[serde(default)]
    pub label: String,
}

impl BraceFile {
    pub fn from_entries(order: usize, entries: &[BraceCatalogEntry]) -> BraceFile {
        BraceFile {
            order,
            entries: entries
                .iter()
                .map(|e| BraceFileEntry {
                    add: e.brace.add_table().to_vec(),
                    mul: e.brace.mul_table().to_vec(),
                    zero: e.brace.zero(),
                    label: e.label.clone(),
                })
                .collect(),
        }
    }
}

/// Parses and fully validates a brace file. Schema violations carry the
/// parser's line/column; axiom violations carry the entry index and witness.
pub fn ingest_braces(json: &str) -> Result<Vec<BraceCatalogEntry>> {
    let file: BraceFile = serde_json::from_str(json)
        .map_err(|e| Error::structure(format!("brace file does not match schema: {e}")))?;
    let mut entries = Vec::with_capacity(file.entries.len());
    for (i, raw) in file.entries.into_iter().enumerate() {
        let context = |e: Error| match e {
            Error::Structure(m) => Error::structure(format!("entry {i}: {m}")),
            Error::Domain(m) => Error::domain(format!("entry {i}: {m}")),
            other => other,
        };
        if raw.add.len() != file.order {
            return Err(Error::structure(format!(
                "entry {i}: table size {} differs from declared order {}",
                raw.add.len(),
                file.order
            )));
        }
        let brace = SkewBrace::new(raw.add, raw.mul, raw.zero).map_err(context)?;
        let add_group = name_group(brace.add_table(), brace.zero(), file.order);
        let mul_group = name_group(brace.mul_table(), brace.zero(), file.order);
        let label = if raw.label.is_empty() {
            format!("B{}_{}", file.order, i + 1)
        } else {
            raw.label
        };
        entries.push(BraceCatalogEntry {
            order: file.order,
            type_index: i + 1,
            brace,
            add_group,
            mul_group,
            label,
            provenance: Provenance::Ingested,
        });
    }
    Ok(entries)
}

fn name_group(table: &[Vec<usize>], zero: usize, order: usize) -> String {
    groups::identify(table, zero).unwrap_or_else(|_| format!("G{order}"))
}

// ---------------------------------------------------------------------------
// census
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug)]
pub struct CensusOptions {
    /// Carrier cap handed to the reflection enumerator.
    pub cap: usize,
    pub force: bool,
    /// Short-circuit flip-type solutions (trivial braces on abelian groups)
    /// with the nⁿ law instead of enumerating.
    pub analytic_flip: bool,
    pub convention: LambdaConvention,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions {
            cap: crate::reflect::DEFAULT_ENUM_CAP,
            force: false,
            analytic_flip: true,
            convention: LambdaConvention::default(),
        }
    }
}

/// One row of the census: a brace, its group pair, and its classified
/// reflection counts.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct CensusRow {
    pub order: usize,
    pub type_index: usize,
    pub add_group: String,
    pub mul_group: String,
    pub counts: ReflectionCounts,
    /// Wall time spent on this row, milliseconds.
    pub wall_ms: f64,
}

fn solution_is_flip(s: &Solution) -> bool {
    let n = s.n();
    (0..n).all(|x| (0..n).all(|y| s.lam(x, y) == y && s.rho(x, y) == y))
}

/// Census of one brace.
pub fn census_row(entry: &BraceCatalogEntry, opts: &CensusOptions) -> Result<CensusRow> {
    let start = Instant::now();
    let s = entry.brace.solution_with(opts.convention)?;
    debug_assert!(s.flags().bijective && s.flags().non_degenerate());
    let counts = if opts.analytic_flip && solution_is_flip(&s) {
        ReflectionCounts::all_maps_law(s.n())
    } else {
        count_reflections(
            &s,
            EnumOptions {
                cap: opts.cap,
                force: opts.force,
                parallel: true,
            },
        )?
    };
    Ok(CensusRow {
        order: entry.order,
        type_index: entry.type_index,
        add_group: entry.add_group.clone(),
        mul_group: entry.mul_group.clone(),
        counts,
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// Census over a catalog, rows processed in parallel, output in input order.
pub fn reflection_census(
    entries: &[BraceCatalogEntry],
    opts: &CensusOptions,
) -> Result<Vec<CensusRow>> {
    entries
        .par_iter()
        .map(|e| census_row(e, opts))
        .collect::<Result<Vec<_>>>()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_brace_solutions() {
        // abelian trivial braces give the flip
        let b = SkewBrace::trivial(&groups::cyclic(3));
        let s = b.solution().unwrap();
        assert!(solution_is_flip(&s));
        // nonabelian trivial braces give conjugation: r(a,b) = (b, b⁻¹ab)
        let s3 = groups::symmetric3();
        let b = SkewBrace::trivial(&s3);
        let s = b.solution().unwrap();
        for a in 0..6 {
            for c in 0..6 {
                assert_eq!(s.lam(a, c), c);
                assert_eq!(s.rho(c, a), s3.mul(s3.mul(s3.inv(c), a), c));
            }
        }
        assert!(s.flags().bijective && s.flags().non_degenerate());
    }

    #[test]
    fn almost_trivial_brace_solution_has_identity_rho() {
        let s3 = groups::symmetric3();
        let b = SkewBrace::almost_trivial(&s3);
        assert!(b.is_almost_trivial() && !b.is_trivial());
        let s = b.solution().unwrap();
        for a in 0..6 {
            for c in 0..6 {
                assert_eq!(s.rho(c, a), a);
            }
        }
    }

    #[test]
    fn compatibility_violation_is_reported() {
        let c4 = groups::cyclic(4);
        let k4 = groups::klein4();
        // C4 and Klein tables on the same carrier are generally incompatible
        // only for specific mixtures; corrupting a trivial brace always is
        let mut mul = c4.table().to_vec();
        mul[1][1] = 1; // breaks the group axioms too, but compat check comes after
        assert!(SkewBrace::new(c4.table().to_vec(), mul, 0).is_err());
        // valid groups, broken compatibility
        let err = SkewBrace::new(c4.table().to_vec(), k4.table().to_vec(), 0);
        // (C4, +) with Klein ∘: this particular pair happens to be a brace
        // or not; the constructor decides. Just exercise both paths.
        let _ = err;
    }

    #[test]
    fn enumeration_counts_small_orders() {
        assert_eq!(enumerate_skew_braces(2).unwrap().len(), 1);
        assert_eq!(enumerate_skew_braces(3).unwrap().len(), 1);
        let four = enumerate_skew_braces(4).unwrap();
        assert_eq!(four.len(), 4);
        let mut pairs: Vec<(String, String)> = four
            .iter()
            .map(|e| (e.add_group.clone(), e.mul_group.clone()))
            .collect();
        pairs.sort();
        assert_eq!(
            pairs,
            vec![
                ("C2xC2".into(), "C2xC2".into()),
                ("C2xC2".into(), "C4".into()),
                ("C4".into(), "C2xC2".into()),
                ("C4".into(), "C4".into()),
            ]
        );
        assert_eq!(enumerate_skew_braces(5).unwrap().len(), 1);
    }

    #[test]
    fn enumeration_counts_order_6() {
        let six = enumerate_skew_braces(6).unwrap();
        assert_eq!(six.len(), 6);
        let mut pairs: Vec<(String, String)> = six
            .iter()
            .map(|e| (e.add_group.clone(), e.mul_group.clone()))
            .collect();
        pairs.sort();
        assert_eq!(
            pairs,
            vec![
                ("C6".into(), "C6".into()),
                ("C6".into(), "S3".into()),
                ("S3".into(), "C6".into()),
                ("S3".into(), "C6".into()),
                ("S3".into(), "S3".into()),
                ("S3".into(), "S3".into()),
            ]
        );
    }

    #[test]
    fn enumeration_cap() {
        assert!(matches!(enumerate_skew_braces(7), Err(Error::Resource(_))));
    }

    #[test]
    fn ingest_round_trip() {
        let four = enumerate_skew_braces(4).unwrap();
        let file = BraceFile::from_entries(4, &four);
        let json = serde_json::to_string(&file).unwrap();
        let back = ingest_braces(&json).unwrap();
        assert_eq!(back.len(), 4);
        for (a, b) in four.iter().zip(&back) {
            assert_eq!(a.brace, b.brace);
            assert_eq!(a.add_group, b.add_group);
            assert_eq!(a.mul_group, b.mul_group);
        }
    }

    #[test]
    fn ingest_rejects_corrupt_entries() {
        let mut file = BraceFile::from_entries(4, &enumerate_skew_braces(4).unwrap());
        file.entries[2].mul[1][2] = 0;
        let json = serde_json::to_string(&file).unwrap();
        let err = ingest_braces(&json).unwrap_err();
        assert!(matches!(err, Error::Domain(ref m) if m.contains("entry 2")));
        assert!(ingest_braces("not json").is_err());
    }

    #[test]
    fn census_small_orders_match_known_counts() {
        // order 2: 4 reflections, all four classes; order 3: 27
        let opts = CensusOptions::default();
        let rows = reflection_census(&enumerate_skew_braces(2).unwrap(), &opts).unwrap();
        assert_eq!(rows[0].counts.total, 4);
        assert_eq!(rows[0].counts.both_lc_ri, 4);
        assert_eq!(rows[0].counts.all_four, 4);
        let rows = reflection_census(&enumerate_skew_braces(3).unwrap(), &opts).unwrap();
        assert_eq!(rows[0].counts.total, 27);
    }

    #[test]
    fn analytic_flip_matches_enumeration() {
        // nⁿ law cross-checked against the enumerator at small orders
        for n in 2..=5 {
            let g = groups::cyclic(n);
            let entry = BraceCatalogEntry {
                order: n,
                type_index: 1,
                brace: SkewBrace::trivial(&g),
                add_group: g.name().into(),
                mul_group: g.name().into(),
                label: "t".into(),
                provenance: Provenance::BuiltIn,
            };
            let fast = census_row(&entry, &CensusOptions::default()).unwrap();
            let slow = census_row(
                &entry,
                &CensusOptions {
                    analytic_flip: false,
                    ..CensusOptions::default()
                },
            )
            .unwrap();
            assert_eq!(fast.counts, slow.counts);
            assert_eq!(fast.counts.total, (n as u64).pow(n as u32));
        }
    }

    #[test]
    fn isomorphic_braces_have_equal_census_rows() {
        // relabel a brace by a bijection and re-ingest: same census counts
        let six = enumerate_skew_braces(6).unwrap();
        let sigma = FiniteMap::new(6, vec![3, 0, 4, 1, 5, 2]).unwrap();
        for e in six.iter().take(3) {
            let add = pushforward(e.brace.add_table(), &sigma);
            let mul = pushforward(e.brace.mul_table(), &sigma);
            let zero = sigma.apply(e.brace.zero());
            let relabeled = SkewBrace::new(add, mul, zero).unwrap();
            let entry = BraceCatalogEntry {
                brace: relabeled,
                ..e.clone()
            };
            let a = census_row(e, &CensusOptions::default()).unwrap();
            let b = census_row(&entry, &CensusOptions::default()).unwrap();
            assert_eq!(a.counts, b.counts);
        }
    }

    #[test]
    fn census_column_consistency() {
        let rows =
            reflection_census(&enumerate_skew_braces(4).unwrap(), &CensusOptions::default())
                .unwrap();
        for r in &rows {
            let c = &r.counts;
            assert!(c.total >= c.only_lc + c.only_ri + c.both_lc_ri);
            assert!(c.all_four <= c.both_lc_ri);
        }
    }
}
