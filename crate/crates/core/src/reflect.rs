//! Reflections of a solution: the boundary analogue of the YBE.
//!
//! A map `κ` is a reflection for `(X, r)` when
//! `r (id×κ) r (id×κ) = (id×κ) r (id×κ) r`, which over the component maps is
//! equivalent to the two families of identities
//!
//! ```text
//! (T)  t(x, κ(y)) = t(x, y)        t(x, y) := λ_{λ_x(y)} κ ρ_y(x)
//! (Q)  q(x, κ(y)) = κ(q(x, y))     q(x, y) := ρ_{κ ρ_y(x)} λ_x(y)
//! ```
//!
//! for all `x, y`. [`is_reflection`] checks these directly; the enumerator
//! assigns `κ(0), κ(1), …` depth-first and tests every (T)/(Q) instance the
//! moment all of its κ-arguments are determined, which prunes the `nⁿ`
//! space hard enough to enumerate all reflections of the eight-point
//! solutions appearing in the census. A plain full scan
//! ([`enumerate_reflections_brute`]) is kept as the independent oracle.
//!
//! Classification sorts reflections into the λ-centralizing
//! (`λ_x κ = κ λ_x`), ρ-invariant (`ρ_{κ(x)} = ρ_x`), λ-invariant and
//! ρ-centralizing classes; the census tables count these exclusively
//! ("only λ-centralizing" excludes the ρ-invariant ones and so on).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::map::FiniteMap;
use crate::shelf::{derived_left_shelf, derived_right_shelf};
use crate::solution::Solution;

/// Default carrier-size cap for exhaustive enumeration.
pub const DEFAULT_ENUM_CAP: usize = 8;

/// Classification of a single map against a fixed solution.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct ReflectionFlags {
    pub lambda_centralizing: bool,
    pub rho_invariant: bool,
    pub lambda_invariant: bool,
    pub rho_centralizing: bool,
    pub bijective: bool,
    pub involutive: bool,
    pub idempotent: bool,
}

/// A reflection together with its classification.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ReflectionRecord {
    pub kappa: FiniteMap,
    pub flags: ReflectionFlags,
}

/// Exclusive class counts matching the census table semantics.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct ReflectionCounts {
    pub total: u64,
    pub only_lc: u64,
    pub only_ri: u64,
    pub both_lc_ri: u64,
    pub only_li: u64,
    pub only_rc: u64,
    pub all_four: u64,
}

impl ReflectionCounts {
    pub fn add(&mut self, f: &ReflectionFlags) {
        self.total += 1;
        match (f.lambda_centralizing, f.rho_invariant) {
            (true, true) => self.both_lc_ri += 1,
            (true, false) => self.only_lc += 1,
            (false, true) => self.only_ri += 1,
            (false, false) => {}
        }
        // the λ-invariant / ρ-centralizing columns are exclusive across all
        // four classes: a reflection counts only when it lies in that single
        // class and none of the other three
        if f.lambda_invariant && !(f.lambda_centralizing || f.rho_invariant || f.rho_centralizing)
        {
            self.only_li += 1;
        }
        if f.rho_centralizing && !(f.lambda_centralizing || f.rho_invariant || f.lambda_invariant)
        {
            self.only_rc += 1;
        }
        if f.lambda_centralizing && f.rho_invariant && f.lambda_invariant && f.rho_centralizing {
            self.all_four += 1;
        }
    }

    pub fn merge(&mut self, other: &ReflectionCounts) {
        self.total += other.total;
        self.only_lc += other.only_lc;
        self.only_ri += other.only_ri;
        self.both_lc_ri += other.both_lc_ri;
        self.only_li += other.only_li;
        self.only_rc += other.only_rc;
        self.all_four += other.all_four;
    }

    /// Counts for the flip-type solution (`λ_x = ρ_x = id`): every one of the
    /// `nⁿ` maps is a reflection lying in all four classes.
    pub fn all_maps_law(n: usize) -> ReflectionCounts {
        let total = (n as u64).pow(n as u32);
        ReflectionCounts {
            total,
            both_lc_ri: total,
            all_four: total,
            ..ReflectionCounts::default()
        }
    }
}

/// The complete reflection set of one solution, fully classified.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ReflectionSet {
    pub solution: Solution,
    pub records: Vec<ReflectionRecord>,
    pub counts: ReflectionCounts,
}

impl ReflectionSet {
    pub fn from_records(solution: Solution, mut records: Vec<ReflectionRecord>) -> Self {
        records.sort_by(|a, b| a.kappa.cmp(&b.kappa));
        let mut counts = ReflectionCounts::default();
        for r in &records {
            counts.add(&r.flags);
        }
        ReflectionSet {
            solution,
            records,
            counts,
        }
    }

    pub fn contains(&self, kappa: &FiniteMap) -> bool {
        self.records.binary_search_by(|r| r.kappa.cmp(kappa)).is_ok()
    }

    pub fn record(&self, kappa: &FiniteMap) -> Option<&ReflectionRecord> {
        self.records
            .binary_search_by(|r| r.kappa.cmp(kappa))
            .ok()
            .map(|i| &self.records[i])
    }

    /// 1-based display strings of all reflections, in enumeration order.
    pub fn one_based_strings(&self) -> Vec<String> {
        self.records
            .iter()
            .map(|r| r.kappa.to_one_based_string())
            .collect()
    }
}

// ---------------------------------------------------------------------------
// direct checker and classification
// ---------------------------------------------------------------------------

/// Direct check of (T) and (Q) on all pairs.
pub fn is_reflection(s: &Solution, kappa: &FiniteMap) -> Result<bool> {
    if kappa.n() != s.n() {
        return Err(Error::structure("map and solution carrier sizes differ"));
    }
    let n = s.n();
    let k = kappa.img();
    for x in 0..n {
        for y in 0..n {
            // (T): λ_{λ_x(κy)} κ ρ_{κy}(x)  =  λ_{λ_x(y)} κ ρ_y(x)
            let k1 = k[y];
            let lhs_t = s.lam(s.lam(x, k1), k[s.rho(k1, x)]);
            let rhs_t = s.lam(s.lam(x, y), k[s.rho(y, x)]);
            if lhs_t != rhs_t {
                return Ok(false);
            }
            // (Q): ρ_{κ ρ_{κy}(x)} λ_x(κy)  =  κ ρ_{κ ρ_y(x)} λ_x(y)
            let lhs_q = s.rho(k[s.rho(k1, x)], s.lam(x, k1));
            let rhs_q = k[s.rho(k[s.rho(y, x)], s.lam(x, y))];
            if lhs_q != rhs_q {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Computes all seven classification flags by table comparison. Does not
/// require (and does not check) that `kappa` is a reflection, so arbitrary
/// candidate maps can be classified.
pub fn classify_reflection(s: &Solution, kappa: &FiniteMap) -> ReflectionRecord {
    assert_eq!(kappa.n(), s.n(), "map and solution carrier sizes differ");
    let n = s.n();
    let k = kappa.img();
    let lambda_centralizing =
        (0..n).all(|x| (0..n).all(|y| s.lam(x, k[y]) == k[s.lam(x, y)]));
    let rho_centralizing = (0..n).all(|x| (0..n).all(|y| s.rho(x, k[y]) == k[s.rho(x, y)]));
    let rho_invariant = (0..n).all(|x| (0..n).all(|a| s.rho(k[x], a) == s.rho(x, a)));
    let lambda_invariant = (0..n).all(|x| (0..n).all(|a| s.lam(k[x], a) == s.lam(x, a)));
    ReflectionRecord {
        flags: ReflectionFlags {
            lambda_centralizing,
            rho_invariant,
            lambda_invariant,
            rho_centralizing,
            bijective: kappa.is_bijective(),
            involutive: kappa.is_involutive(),
            idempotent: kappa.is_idempotent(),
        },
        kappa: kappa.clone(),
    }
}

// ---------------------------------------------------------------------------
// enumeration
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug)]
pub struct EnumOptions {
    /// Largest carrier enumerated without `force`.
    pub cap: usize,
    /// Ignore the cap.
    pub force: bool,
    /// Partition the search on κ(0) across threads.
    pub parallel: bool,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions {
            cap: DEFAULT_ENUM_CAP,
            force: false,
            parallel: true,
        }
    }
}

const UNSET: usize = usize::MAX;
const PASSED: usize = usize::MAX;

/// Flattened tables plus the per-pair constants used by the instance checks;
/// built once per enumeration so the inner loop is pure table lookups.
struct SearchCtx {
    n: usize,
    lam: Vec<usize>,
    rho: Vec<usize>,
}

enum Eval {
    Pass,
    Fail,
    /// Blocked on κ at this index.
    Wait(usize),
}

impl SearchCtx {
    fn new(s: &Solution) -> SearchCtx {
        let n = s.n();
        let mut lam = Vec::with_capacity(n * n);
        let mut rho = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                lam.push(s.lam(i, j));
                rho.push(s.rho(i, j));
            }
        }
        SearchCtx { n, lam, rho }
    }

    /// Instance ids are `2·(x·n + y) + tag`, tag 0 for (T) and 1 for (Q).
    #[inline]
    fn eval(&self, id: u32, kappa: &[usize]) -> Eval {
        let tag = id & 1;
        let p = (id >> 1) as usize;
        let n = self.n;
        let (x, y) = (p / n, p % n);
        let k1 = kappa[y];
        if k1 == UNSET {
            return Eval::Wait(y);
        }
        let a = self.rho[k1 * n + x];
        let k2 = kappa[a];
        if k2 == UNSET {
            return Eval::Wait(a);
        }
        let b = self.rho[y * n + x];
        let k3 = kappa[b];
        if k3 == UNSET {
            return Eval::Wait(b);
        }
        if tag == 0 {
            let lhs = self.lam[self.lam[x * n + k1] * n + k2];
            let rhs = self.lam[self.lam[x * n + y] * n + k3];
            if lhs == rhs {
                Eval::Pass
            } else {
                Eval::Fail
            }
        } else {
            let lhs = self.rho[k2 * n + self.lam[x * n + k1]];
            let m = self.rho[k3 * n + self.lam[x * n + y]];
            let k4 = kappa[m];
            if k4 == UNSET {
                return Eval::Wait(m);
            }
            if lhs == k4 {
                Eval::Pass
            } else {
                Eval::Fail
            }
        }
    }

    /// Every instance parked at the bucket of the first κ-index it needs.
    fn initial_buckets(&self) -> Vec<Vec<u32>> {
        let n = self.n;
        let mut buckets = vec![Vec::new(); n];
        for x in 0..n {
            for y in 0..n {
                let p = (x * n + y) as u32;
                buckets[y].push(2 * p);
                buckets[y].push(2 * p + 1);
            }
        }
        buckets
    }

    /// Explores assignments of `κ(d..n)`; instances waiting on κ(j) sit in
    /// `buckets[j]` and are (re)tested exactly when κ(j) is set. State is
    /// restored on backtrack, so the caller can reuse `kappa`/`buckets`.
    fn dfs(&self, kappa: &mut [usize], buckets: &mut [Vec<u32>], d: usize, visit: &mut impl FnMut(&[usize])) {
        let n = self.n;
        for v in 0..n {
            kappa[d] = v;
            let taken = std::mem::take(&mut buckets[d]);
            // journal of (instance, destination bucket or PASSED) for undo
            let mut journal: Vec<(u32, usize)> = Vec::new();
            let mut failed = false;
            for &id in &taken {
                match self.eval(id, kappa) {
                    Eval::Pass => journal.push((id, PASSED)),
                    Eval::Wait(j) => {
                        debug_assert!(j > d);
                        buckets[j].push(id);
                        journal.push((id, j));
                    }
                    Eval::Fail => {
                        failed = true;
                        break;
                    }
                }
            }
            if !failed {
                if d + 1 == n {
                    visit(kappa);
                } else {
                    self.dfs(kappa, buckets, d + 1, visit);
                }
            }
            for &(id, dest) in journal.iter().rev() {
                if dest != PASSED {
                    let popped = buckets[dest].pop();
                    debug_assert_eq!(popped, Some(id));
                }
            }
            buckets[d] = taken;
        }
        kappa[d] = UNSET;
    }
}

fn check_cap(s: &Solution, opts: &EnumOptions) -> Result<()> {
    if s.n() > opts.cap && !opts.force {
        return Err(Error::resource(format!(
            "carrier size {} exceeds the enumeration cap {} (use force to override)",
            s.n(),
            opts.cap
        )));
    }
    Ok(())
}

/// Runs the backtracking search, handing every reflection image to `visit`.
/// Parallel runs partition on κ(0) into independent branches; the visit
/// order within a branch is lexicographic.
fn search<R: Default + Send>(
    s: &Solution,
    parallel: bool,
    visit: impl Fn(&mut R, &[usize]) + Sync + Send,
) -> Vec<R> {
    let ctx = SearchCtx::new(s);
    let n = s.n();
    let run_branch = |v0: usize| {
        let mut acc = R::default();
        let mut kappa = vec![UNSET; n];
        let mut buckets = ctx.initial_buckets();
        if n == 1 {
            // single carrier point: κ = [0] and every instance is trivial
            kappa[0] = 0;
            let ok = (0..buckets[0].len()).all(|i| matches!(ctx.eval(buckets[0][i], &kappa), Eval::Pass));
            if ok && v0 == 0 {
                visit(&mut acc, &kappa);
            }
            return acc;
        }
        kappa[0] = v0;
        let taken = std::mem::take(&mut buckets[0]);
        let mut ok = true;
        for &id in &taken {
            match ctx.eval(id, &kappa) {
                Eval::Pass => {}
                Eval::Wait(j) => buckets[j].push(id),
                Eval::Fail => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            ctx.dfs(&mut kappa, &mut buckets, 1, &mut |img| visit(&mut acc, img));
        }
        acc
    };
    if parallel && n > 1 {
        (0..n).into_par_iter().map(run_branch).collect()
    } else {
        (0..n).map(run_branch).collect()
    }
}

/// All reflections of `s`, classified, via the backtracking enumerator.
pub fn enumerate_reflections(s: &Solution, opts: EnumOptions) -> Result<ReflectionSet> {
    check_cap(s, &opts)?;
    let branches = search(s, opts.parallel, |acc: &mut Vec<Vec<usize>>, img| {
        acc.push(img.to_vec())
    });
    let records = branches
        .into_iter()
        .flatten()
        .map(|img| {
            let kappa = FiniteMap::new(s.n(), img).expect("search yields valid maps");
            classify_reflection(s, &kappa)
        })
        .collect();
    Ok(ReflectionSet::from_records(s.clone(), records))
}

/// Classified counts only, without materializing the records. Used by the
/// census over larger reflection sets.
pub fn count_reflections(s: &Solution, opts: EnumOptions) -> Result<ReflectionCounts> {
    check_cap(s, &opts)?;
    let branches = search(s, opts.parallel, |acc: &mut ReflectionCounts, img| {
        let kappa = FiniteMap::new(s.n(), img.to_vec()).expect("search yields valid maps");
        acc.add(&classify_reflection(s, &kappa).flags);
    });
    let mut total = ReflectionCounts::default();
    for b in &branches {
        total.merge(b);
    }
    Ok(total)
}

/// Reference enumerator: the full `nⁿ` scan of all maps through
/// [`is_reflection`]. Independent of the backtracking path; kept as the
/// oracle it is tested against.
pub fn enumerate_reflections_brute(s: &Solution) -> ReflectionSet {
    let records = FiniteMap::all_maps(s.n())
        .filter(|k| is_reflection(s, k).expect("sizes match"))
        .map(|k| classify_reflection(s, &k))
        .collect();
    ReflectionSet::from_records(s.clone(), records)
}

// ---------------------------------------------------------------------------
// fast paths from the structure theory
// ---------------------------------------------------------------------------

/// For a left non-degenerate solution and a λ-centralizing `κ`, reflectionhood
/// reduces to two identities over the derived left shelf:
/// `κ L_x = κ L_{κ(x)}` and `κ L_{L_x(y)}(x) = L_{κ L_x(y)} κ(x)`.
pub fn fastpath_lnd_lambda_centralizing(s: &Solution, kappa: &FiniteMap) -> Result<bool> {
    if !s.flags().left_nd {
        return Err(Error::domain("fast path requires a left non-degenerate solution"));
    }
    if !classify_reflection(s, kappa).flags.lambda_centralizing {
        return Err(Error::domain("fast path requires a λ-centralizing map"));
    }
    let sh = derived_left_shelf(s)?;
    let n = s.n();
    let k = kappa.img();
    let cond1 = (0..n).all(|x| (0..n).all(|y| k[sh.op(x, y)] == k[sh.op(k[x], y)]));
    let cond2 =
        (0..n).all(|x| (0..n).all(|y| k[sh.op(sh.op(x, y), x)] == sh.op(k[sh.op(x, y)], k[x])));
    Ok(cond1 && cond2)
}

/// For a right non-degenerate solution and a ρ-invariant `κ`, reflectionhood
/// is exactly commutation with every right multiplication of the derived
/// right shelf.
pub fn fastpath_rnd_rho_invariant(s: &Solution, kappa: &FiniteMap) -> Result<bool> {
    if !s.flags().right_nd {
        return Err(Error::domain("fast path requires a right non-degenerate solution"));
    }
    if !classify_reflection(s, kappa).flags.rho_invariant {
        return Err(Error::domain("fast path requires a ρ-invariant map"));
    }
    let sh = derived_right_shelf(s)?;
    let n = s.n();
    let k = kappa.img();
    Ok((0..n).all(|x| (0..n).all(|y| k[sh.op(y, x)] == sh.op(k[y], x))))
}

/// For involutive solutions a single family suffices: (T) alone in the left
/// non-degenerate case, (Q) alone in the right non-degenerate case.
pub fn fastpath_involutive(s: &Solution, kappa: &FiniteMap) -> Result<bool> {
    if !s.flags().involutive {
        return Err(Error::domain("fast path requires an involutive solution"));
    }
    if kappa.n() != s.n() {
        return Err(Error::structure("map and solution carrier sizes differ"));
    }
    let n = s.n();
    let k = kappa.img();
    if s.flags().left_nd {
        Ok((0..n).all(|x| {
            (0..n).all(|y| {
                let k1 = k[y];
                s.lam(s.lam(x, k1), k[s.rho(k1, x)]) == s.lam(s.lam(x, y), k[s.rho(y, x)])
            })
        }))
    } else if s.flags().right_nd {
        Ok((0..n).all(|x| {
            (0..n).all(|y| {
                let k1 = k[y];
                s.rho(k[s.rho(k1, x)], s.lam(x, k1)) == k[s.rho(k[s.rho(y, x)], s.lam(x, y))]
            })
        }))
    } else {
        Err(Error::domain("fast path requires left or right non-degeneracy"))
    }
}

/// Sufficient condition producing ρ-invariant reflections of an involutive
/// solution: `λ_{λ_x κ(y)} = λ_{λ_x(y)}` in the left non-degenerate case,
/// `ρ_{ρ_x κ(y)} = ρ_{ρ_x(y)}` in the right non-degenerate case. `true`
/// implies reflectionhood plus ρ-invariance, not conversely.
pub fn sufficient_involutive_lambda(s: &Solution, kappa: &FiniteMap) -> Result<bool> {
    if !s.flags().involutive {
        return Err(Error::domain("condition applies to involutive solutions"));
    }
    if kappa.n() != s.n() {
        return Err(Error::structure("map and solution carrier sizes differ"));
    }
    let n = s.n();
    let k = kappa.img();
    if s.flags().left_nd {
        Ok((0..n).all(|x| (0..n).all(|y| s.lam_table()[s.lam(x, k[y])] == s.lam_table()[s.lam(x, y)])))
    } else if s.flags().right_nd {
        Ok((0..n).all(|x| (0..n).all(|y| s.rho_table()[s.rho(x, k[y])] == s.rho_table()[s.rho(x, y)])))
    } else {
        Err(Error::domain("condition requires left or right non-degeneracy"))
    }
}

/// `ω := φ κ ψ` for a reflection `κ` and maps `φ, ψ` that are λ-centralizing,
/// ρ-centralizing, λ-invariant and ρ-invariant; the result is again a
/// reflection.
pub fn sandwich(
    s: &Solution,
    phi: &FiniteMap,
    kappa: &FiniteMap,
    psi: &FiniteMap,
) -> Result<FiniteMap> {
    if !is_reflection(s, kappa)? {
        return Err(Error::domain("κ is not a reflection"));
    }
    for (name, f) in [("φ", phi), ("ψ", psi)] {
        let flags = classify_reflection(s, f).flags;
        let missing = [
            (flags.lambda_centralizing, "λ-centralizing"),
            (flags.rho_centralizing, "ρ-centralizing"),
            (flags.lambda_invariant, "λ-invariant"),
            (flags.rho_invariant, "ρ-invariant"),
        ]
        .iter()
        .find(|(ok, _)| !ok)
        .map(|(_, what)| *what);
        if let Some(what) = missing {
            return Err(Error::domain(format!("{name} is not {what}")));
        }
    }
    let omega = phi.compose(kappa).compose(psi);
    debug_assert!(is_reflection(s, &omega).unwrap());
    Ok(omega)
}

// ---------------------------------------------------------------------------
// retraction
// ---------------------------------------------------------------------------

/// λ-equality classes in first-occurrence order; `class_of[x]` is the class
/// index of `x`.
fn lambda_classes(s: &Solution) -> (Vec<usize>, Vec<Vec<usize>>) {
    let n = s.n();
    let mut class_of = vec![usize::MAX; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for x in 0..n {
        let found = classes
            .iter()
            .position(|c| s.lam_table()[c[0]] == s.lam_table()[x]);
        match found {
            Some(i) => {
                class_of[x] = i;
                classes[i].push(x);
            }
            None => {
                class_of[x] = classes.len();
                classes.push(vec![x]);
            }
        }
    }
    (class_of, classes)
}

/// The retract of an involutive non-degenerate solution: the induced solution
/// on the quotient by `x ∼ y ⇔ λ_x = λ_y`. Returns the quotient and the class
/// map `x ↦ [x]` (as a vector of class indices, surjective onto `0..m`).
pub fn retract_solution(s: &Solution) -> Result<(Solution, Vec<usize>)> {
    let f = s.flags();
    if !f.involutive || !f.non_degenerate() {
        return Err(Error::domain(
            "retract requires an involutive non-degenerate solution",
        ));
    }
    let (class_of, classes) = lambda_classes(s);
    let m = classes.len();
    let mut lam = vec![vec![usize::MAX; m]; m];
    let mut rho = vec![vec![usize::MAX; m]; m];
    for x in 0..s.n() {
        for y in 0..s.n() {
            let (cx, cy) = (class_of[x], class_of[y]);
            let l = class_of[s.lam(x, y)];
            let r = class_of[s.rho(y, x)];
            // well-definedness across representatives is a theorem for valid
            // input; a clash here means the input was corrupted
            if lam[cx][cy] == usize::MAX {
                lam[cx][cy] = l;
            } else if lam[cx][cy] != l {
                return Err(Error::structure("retract λ-table ill-defined"));
            }
            if rho[cy][cx] == usize::MAX {
                rho[cy][cx] = r;
            } else if rho[cy][cx] != r {
                return Err(Error::structure("retract ρ-table ill-defined"));
            }
        }
    }
    let quotient = Solution::new(lam, rho)?;
    Ok((quotient, class_of))
}

/// The ρ-invariant reflections of an involutive non-degenerate solution,
/// generated directly as the class-preserving maps `κ(x) ∈ [x]` (bypassing
/// the (T)/(Q) scan entirely).
pub fn class_preserving_reflections(s: &Solution) -> Result<ReflectionSet> {
    let f = s.flags();
    if !f.involutive || !f.non_degenerate() {
        return Err(Error::domain(
            "class-preserving construction requires an involutive non-degenerate solution",
        ));
    }
    let n = s.n();
    let (class_of, classes) = lambda_classes(s);
    // odometer over per-position choices within each class
    let mut choice = vec![0usize; n];
    let mut records = Vec::new();
    loop {
        let img: Vec<usize> = (0..n).map(|x| classes[class_of[x]][choice[x]]).collect();
        let kappa = FiniteMap::new(n, img).expect("class members are in range");
        records.push(classify_reflection(s, &kappa));
        let mut pos = n;
        loop {
            if pos == 0 {
                return Ok(ReflectionSet::from_records(s.clone(), records));
            }
            pos -= 1;
            if choice[pos] + 1 < classes[class_of[pos]].len() {
                choice[pos] += 1;
                choice[pos + 1..].fill(0);
                break;
            }
        }
    }
}

// ---------------------------------------------------------------------------
// serde for ReflectionSet
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct RecordJson {
    img: Vec<usize>,
    flags: ReflectionFlags,
}

#[derive(Serialize, Deserialize)]
struct ReflectionSetJson {
    solution: Solution,
    total: u64,
    only_lambda_centralizing: u64,
    only_rho_invariant: u64,
    both: u64,
    only_lambda_invariant: u64,
    only_rho_centralizing: u64,
    all_four: u64,
    reflections: Vec<RecordJson>,
}

impl Serialize for ReflectionSet {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ReflectionSetJson {
            solution: self.solution.clone(),
            total: self.counts.total,
            only_lambda_centralizing: self.counts.only_lc,
            only_rho_invariant: self.counts.only_ri,
            both: self.counts.both_lc_ri,
            only_lambda_invariant: self.counts.only_li,
            only_rho_centralizing: self.counts.only_rc,
            all_four: self.counts.all_four,
            reflections: self
                .records
                .iter()
                .map(|r| RecordJson {
                    img: r.kappa.img().to_vec(),
                    flags: r.flags,
                })
                .collect(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for ReflectionSet {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let raw = ReflectionSetJson::deserialize(de)?;
        let n = raw.solution.n();
        let records = raw
            .reflections
            .into_iter()
            .map(|r| {
                Ok(ReflectionRecord {
                    kappa: FiniteMap::new(n, r.img).map_err(serde::de::Error::custom)?,
                    flags: r.flags,
                })
            })
            .collect::<std::result::Result<Vec<_>, D::Error>>()?;
        let set = ReflectionSet::from_records(raw.solution, records);
        if set.counts.total != raw.total {
            return Err(serde::de::Error::custom("stored counts disagree with records"));
        }
        Ok(set)
    }
}
