//! Set-theoretic solutions of the Yang-Baxter equation on a finite carrier.
//!
//! A solution is stored through its two component tables: `lam[x][y] = λ_x(y)`
//! and `rho[b][a] = ρ_b(a)` (row index = subscript, uniformly). The braid
//! identity on triples is equivalent to the three axioms
//!
//! ```text
//! (Y1)  λ_x λ_y(z)                 = λ_{λ_x(y)} λ_{ρ_y(x)}(z)
//! (Y2)  λ_{ρ_{λ_y(z)}(x)} ρ_z(y)   = ρ_{λ_{ρ_y(x)}(z)} λ_x(y)
//! (Y3)  ρ_z ρ_y(x)                 = ρ_{ρ_z(y)} ρ_{λ_y(z)}(x)
//! ```
//!
//! for all triples `(x, y, z)`, and [`check_ybe`] verifies exactly these.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::map::{FiniteMap, PairMap};

/// Which of the three component axioms a triple violates.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum YbeAxiom {
    Y1,
    Y2,
    Y3,
}

/// First violating triple in lexicographic order, with the axiom that failed.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct YbeWitness {
    pub axiom: YbeAxiom,
    pub x: usize,
    pub y: usize,
    pub z: usize,
}

/// Outcome of the YBE scan: `ok` with no witness, or the first failure.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct YbeReport {
    pub ok: bool,
    pub witness: Option<YbeWitness>,
}

/// Cached structural properties of a solution.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct SolutionFlags {
    pub bijective: bool,
    pub involutive: bool,
    pub idempotent: bool,
    pub left_nd: bool,
    pub right_nd: bool,
}

impl SolutionFlags {
    pub fn non_degenerate(&self) -> bool {
        self.left_nd && self.right_nd
    }
}

/// A finite set-theoretic solution `r(x, y) = (λ_x(y), ρ_y(x))`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Solution {
    n: usize,
    lam: Vec<Vec<usize>>,
    rho: Vec<Vec<usize>>,
    flags: SolutionFlags,
}

/// Validates table shape: `n×n` with entries in `{0..n-1}`.
fn check_table(name: &str, table: &[Vec<usize>], n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::structure("carrier size must be positive"));
    }
    if table.len() != n {
        return Err(Error::structure(format!(
            "{name} table has {} rows, expected {n}",
            table.len()
        )));
    }
    for (i, row) in table.iter().enumerate() {
        if row.len() != n {
            return Err(Error::structure(format!(
                "{name} row {i} has {} entries, expected {n}",
                row.len()
            )));
        }
        if let Some(&v) = row.iter().find(|&&v| v >= n) {
            return Err(Error::structure(format!(
                "{name}[{i}] contains out-of-range entry {v}"
            )));
        }
    }
    Ok(())
}

/// Scans all triples in lexicographic order `(x, y, z)`, testing Y1, Y2, Y3
/// at each, and reports the first failure. Malformed tables are a structural
/// error, distinct from a clean `ok = false`.
pub fn check_ybe(lam: &[Vec<usize>], rho: &[Vec<usize>]) -> Result<YbeReport> {
    let n = lam.len();
    check_table("lambda", lam, n)?;
    check_table("rho", rho, if rho.len() == n { n } else { rho.len().max(1) })?;
    if rho.len() != n {
        return Err(Error::structure("lambda and rho tables differ in size"));
    }
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let axiom = violated_axiom(lam, rho, x, y, z);
                if let Some(axiom) = axiom {
                    return Ok(YbeReport {
                        ok: false,
                        witness: Some(YbeWitness { axiom, x, y, z }),
                    });
                }
            }
        }
    }
    Ok(YbeReport { ok: true, witness: None })
}

fn violated_axiom(
    lam: &[Vec<usize>],
    rho: &[Vec<usize>],
    x: usize,
    y: usize,
    z: usize,
) -> Option<YbeAxiom> {
    // (Y1)
    let lhs = lam[x][lam[y][z]];
    let rhs = lam[lam[x][y]][lam[rho[y][x]][z]];
    if lhs != rhs {
        return Some(YbeAxiom::Y1);
    }
    // (Y2)
    let lhs = lam[rho[lam[y][z]][x]][rho[z][y]];
    let rhs = rho[lam[rho[y][x]][z]][lam[x][y]];
    if lhs != rhs {
        return Some(YbeAxiom::Y2);
    }
    // (Y3)
    let lhs = rho[z][rho[y][x]];
    let rhs = rho[rho[z][y]][rho[lam[y][z]][x]];
    if lhs != rhs {
        return Some(YbeAxiom::Y3);
    }
    None
}

impl Solution {
    /// Validating constructor: structural checks, the full YBE scan, then
    /// flag computation. Fails with the YBE witness on a non-solution.
    pub fn new(lam: Vec<Vec<usize>>, rho: Vec<Vec<usize>>) -> Result<Self> {
        let report = check_ybe(&lam, &rho)?;
        if let Some(w) = report.witness {
            return Err(Error::domain(format!(
                "tables violate ({:?}) at triple ({}, {}, {})",
                w.axiom, w.x, w.y, w.z
            )));
        }
        Ok(Self::new_unchecked(lam, rho))
    }

    /// Constructor for enumeration inner loops that have already established
    /// validity; the YBE scan is skipped (asserted in debug builds), flags
    /// are still computed.
    pub fn new_unchecked(lam: Vec<Vec<usize>>, rho: Vec<Vec<usize>>) -> Self {
        debug_assert!(matches!(check_ybe(&lam, &rho), Ok(YbeReport { ok: true, .. })));
        let n = lam.len();
        let mut sol = Solution {
            n,
            lam,
            rho,
            flags: SolutionFlags::default(),
        };
        sol.flags = sol.compute_flags();
        sol
    }

    fn compute_flags(&self) -> SolutionFlags {
        let p = self.as_pair_map();
        let p2 = p.compose(&p);
        SolutionFlags {
            bijective: p.is_bijective(),
            involutive: p2.is_identity(),
            idempotent: p2 == p,
            left_nd: self.lam.iter().all(|row| row_is_permutation(row)),
            right_nd: self.rho.iter().all(|row| row_is_permutation(row)),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn flags(&self) -> SolutionFlags {
        self.flags
    }

    /// `λ_x(y)`.
    #[inline]
    pub fn lam(&self, x: usize, y: usize) -> usize {
        self.lam[x][y]
    }

    /// `ρ_b(a)`; the row index is the subscript.
    #[inline]
    pub fn rho(&self, b: usize, a: usize) -> usize {
        self.rho[b][a]
    }

    /// `r(x, y) = (λ_x(y), ρ_y(x))`.
    #[inline]
    pub fn r(&self, x: usize, y: usize) -> (usize, usize) {
        (self.lam[x][y], self.rho[y][x])
    }

    pub fn lam_table(&self) -> &[Vec<usize>] {
        &self.lam
    }

    pub fn rho_table(&self) -> &[Vec<usize>] {
        &self.rho
    }

    pub fn lam_map(&self, x: usize) -> FiniteMap {
        FiniteMap::new(self.n, self.lam[x].clone()).expect("row validated at construction")
    }

    pub fn rho_map(&self, b: usize) -> FiniteMap {
        FiniteMap::new(self.n, self.rho[b].clone()).expect("row validated at construction")
    }

    /// Recomputes the cached flags from scratch.
    pub fn classify(&self) -> SolutionFlags {
        self.compute_flags()
    }

    /// Encodes `r` as a single map on pair indices:
    /// `table[x·n + y] = λ_x(y)·n + ρ_y(x)`.
    pub fn as_pair_map(&self) -> PairMap {
        let n = self.n;
        let mut table = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                table.push(self.lam[x][y] * n + self.rho[y][x]);
            }
        }
        PairMap::new(n, table).expect("entries in range by construction")
    }

    /// Decodes a pair map back into component tables and validates the result.
    pub fn from_pair_map(p: &PairMap) -> Result<Self> {
        let n = p.n();
        let mut lam = vec![vec![0; n]; n];
        let mut rho = vec![vec![0; n]; n];
        for x in 0..n {
            for y in 0..n {
                let (a, b) = p.apply(x, y);
                lam[x][y] = a;
                rho[y][x] = b;
            }
        }
        Solution::new(lam, rho)
    }

    /// The inverse solution `(X, r⁻¹)` of a bijective solution.
    pub fn inverse_solution(&self) -> Result<Solution> {
        if !self.flags.bijective {
            return Err(Error::domain("inverse requires a bijective solution"));
        }
        let inv = self
            .as_pair_map()
            .inverse()
            .expect("bijective flag guarantees invertibility");
        Solution::from_pair_map(&inv)
    }

    /// Whether `φ` intertwines the two solutions: `(φ×φ) r = s (φ×φ)`.
    pub fn equivalent_via(&self, other: &Solution, phi: &FiniteMap) -> Result<bool> {
        if self.n != other.n || phi.n() != self.n {
            return Err(Error::structure("carrier sizes differ"));
        }
        if !phi.is_bijective() {
            return Err(Error::domain("equivalence requires a bijective map"));
        }
        for x in 0..self.n {
            for y in 0..self.n {
                let (a, b) = self.r(x, y);
                let lhs = (phi.apply(a), phi.apply(b));
                let rhs = other.r(phi.apply(x), phi.apply(y));
                if lhs != rhs {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// The flip `r(x, y) = (y, x)`.
    pub fn flip(n: usize) -> Solution {
        let lam: Vec<Vec<usize>> = (0..n).map(|_| (0..n).collect()).collect();
        let rho = lam.clone();
        Solution::new_unchecked(lam, rho)
    }

    /// The identity solution `r = id`, i.e. `λ_x ≡ x` and `ρ_y ≡ y`.
    pub fn identity(n: usize) -> Solution {
        let lam: Vec<Vec<usize>> = (0..n).map(|x| vec![x; n]).collect();
        let rho: Vec<Vec<usize>> = (0..n).map(|y| vec![y; n]).collect();
        Solution::new_unchecked(lam, rho)
    }
}

fn row_is_permutation(row: &[usize]) -> bool {
    let mut seen = vec![false; row.len()];
    for &v in row {
        if seen[v] {
            return false;
        }
        seen[v] = true;
    }
    true
}

/// Serialized form: `{"n": …, "lambda": [[…]], "rho": [[…]]}` with
/// `lambda[x][y] = λ_x(y)` and `rho[b][a] = ρ_b(a)`, all 0-based.
#[derive(Serialize, Deserialize)]
pub struct SolutionJson {
    pub n: usize,
    pub lambda: Vec<Vec<usize>>,
    pub rho: Vec<Vec<usize>>,
}

impl Serialize for Solution {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        SolutionJson {
            n: self.n,
            lambda: self.lam.clone(),
            rho: self.rho.clone(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for Solution {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let raw = SolutionJson::deserialize(de)?;
        if raw.lambda.len() != raw.n {
            return Err(serde::de::Error::custom("lambda table size differs from n"));
        }
        Solution::new(raw.lambda, raw.rho).map_err(serde::de::Error::custom)
    }
}
