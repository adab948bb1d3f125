//! Combinators building new solutions (and reflections for them) out of
//! known ones: the matched product of two solutions, the strong semilattice
//! of a family of solutions, the twisted union of two solutions, and the
//! deformation `r_κ` of a rack solution by a bijective reflection. All
//! system constructors validate their compatibility conditions and name the
//! first violated one.
//!
//! Carrier layout is fixed so serialized outputs are reproducible: a product
//! `S × T` is flattened as `(a, u) ↦ a·|T| + u`, and a disjoint union
//! `X ⊔ Y` indexes `X` first, then `Y` shifted by `|X|`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::map::FiniteMap;
use crate::permgroup::{centralizer, multiplication_group};
use crate::reflect::is_reflection;
use crate::shelf::{Shelf, Side};
use crate::solution::Solution;

// ---------------------------------------------------------------------------
// matched product
// ---------------------------------------------------------------------------

/// A matched product system `(r_S, r_T, α, β)`: families of bijections
/// `α_u` on `S` (one per `u ∈ T`) and `β_a` on `T` (one per `a ∈ S`)
/// satisfying the six compatibility conditions (s1)–(s6).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatchedSystem {
    pub s: Solution,
    pub t: Solution,
    pub alpha: Vec<FiniteMap>,
    pub beta: Vec<FiniteMap>,
}

impl MatchedSystem {
    pub fn new(
        s: Solution,
        t: Solution,
        alpha: Vec<FiniteMap>,
        beta: Vec<FiniteMap>,
    ) -> Result<Self> {
        let (ns, nt) = (s.n(), t.n());
        if alpha.len() != nt || beta.len() != ns {
            return Err(Error::structure(
                "alpha must have one map per element of T, beta one per element of S",
            ));
        }
        for (u, a) in alpha.iter().enumerate() {
            if a.n() != ns || !a.is_bijective() {
                return Err(Error::domain(format!("alpha[{u}] is not a bijection of S")));
            }
        }
        for (a, b) in beta.iter().enumerate() {
            if b.n() != nt || !b.is_bijective() {
                return Err(Error::domain(format!("beta[{a}] is not a bijection of T")));
            }
        }
        let sys = MatchedSystem { s, t, alpha, beta };
        sys.check_conditions()?;
        Ok(sys)
    }

    fn alpha_inv(&self, u: usize) -> FiniteMap {
        self.alpha[u].inverse().expect("validated bijective")
    }

    fn beta_inv(&self, a: usize) -> FiniteMap {
        self.beta[a].inverse().expect("validated bijective")
    }

    fn check_conditions(&self) -> Result<()> {
        let (ns, nt) = (self.s.n(), self.t.n());
        let ai: Vec<FiniteMap> = (0..nt).map(|u| self.alpha_inv(u)).collect();
        let bi: Vec<FiniteMap> = (0..ns).map(|a| self.beta_inv(a)).collect();
        let s = &self.s;
        let t = &self.t;
        // (s1) α_u α_v = α_{λ_u(v)} α_{ρ_v(u)}
        for u in 0..nt {
            for v in 0..nt {
                let lhs = self.alpha[u].compose(&self.alpha[v]);
                let rhs = self.alpha[t.lam(u, v)].compose(&self.alpha[t.rho(v, u)]);
                if lhs != rhs {
                    return Err(Error::domain(format!("(s1) fails at u={u}, v={v}")));
                }
            }
        }
        // (s2) β_a β_b = β_{λ_a(b)} β_{ρ_b(a)}
        for a in 0..ns {
            for b in 0..ns {
                let lhs = self.beta[a].compose(&self.beta[b]);
                let rhs = self.beta[s.lam(a, b)].compose(&self.beta[s.rho(b, a)]);
                if lhs != rhs {
                    return Err(Error::domain(format!("(s2) fails at a={a}, b={b}")));
                }
            }
        }
        // (s3) ρ_{α_u⁻¹(b)} α⁻¹_{β_a(u)}(a) = α⁻¹_{β_{ρ_b(a)} β_b⁻¹(u)} ρ_b(a)
        for a in 0..ns {
            for b in 0..ns {
                for u in 0..nt {
                    let lhs = s.rho(ai[u].apply(b), ai[self.beta[a].apply(u)].apply(a));
                    let rba = s.rho(b, a);
                    let sub = self.beta[rba].apply(bi[b].apply(u));
                    let rhs = ai[sub].apply(rba);
                    if lhs != rhs {
                        return Err(Error::domain(format!("(s3) fails at a={a}, b={b}, u={u}")));
                    }
                }
            }
        }
        // (s4) ρ_{β_a⁻¹(v)} β⁻¹_{α_u(a)}(u) = β⁻¹_{α_{ρ_v(u)} α_v⁻¹(a)} ρ_v(u)
        for u in 0..nt {
            for v in 0..nt {
                for a in 0..ns {
                    let lhs = t.rho(bi[a].apply(v), bi[self.alpha[u].apply(a)].apply(u));
                    let rvu = t.rho(v, u);
                    let sub = self.alpha[rvu].apply(ai[v].apply(a));
                    let rhs = bi[sub].apply(rvu);
                    if lhs != rhs {
                        return Err(Error::domain(format!("(s4) fails at u={u}, v={v}, a={a}")));
                    }
                }
            }
        }
        // (s5) λ_a α_{β_a⁻¹(u)} = α_u λ_{α_u⁻¹(a)}
        for a in 0..ns {
            for u in 0..nt {
                let lhs = s.lam_map(a).compose(&self.alpha[bi[a].apply(u)]);
                let rhs = self.alpha[u].compose(&s.lam_map(ai[u].apply(a)));
                if lhs != rhs {
                    return Err(Error::domain(format!("(s5) fails at a={a}, u={u}")));
                }
            }
        }
        // (s6) λ_u β_{α_u⁻¹(a)} = β_a λ_{β_a⁻¹(u)}
        for a in 0..ns {
            for u in 0..nt {
                let lhs = t.lam_map(u).compose(&self.beta[ai[u].apply(a)]);
                let rhs = self.beta[a].compose(&t.lam_map(bi[a].apply(u)));
                if lhs != rhs {
                    return Err(Error::domain(format!("(s6) fails at a={a}, u={u}")));
                }
            }
        }
        Ok(())
    }

    /// Pair index of `(a, u)` in the flattened product carrier.
    pub fn index(&self, a: usize, u: usize) -> usize {
        a * self.t.n() + u
    }
}

/// The matched product `r_S ⋈ r_T` on the flattened carrier `S × T`:
///
/// ```text
/// r((a,u),(b,v)) = ((α_u λ_ā(b), β_a λ_ū(v)), (α⁻¹_Ū ρ_{α_ū(b)}(a), β⁻¹_Ā ρ_{β_ā(v)}(u)))
/// ā = α_u⁻¹(a)   ū = β_a⁻¹(u)   A = α_u λ_ā(b)   U = β_a λ_ū(v)   Ā = α_U⁻¹(A)   Ū = β_A⁻¹(U)
/// ```
pub fn matched_product(m: &MatchedSystem) -> Result<Solution> {
    let (ns, nt) = (m.s.n(), m.t.n());
    let n = ns * nt;
    let ai: Vec<FiniteMap> = (0..nt).map(|u| m.alpha_inv(u)).collect();
    let bi: Vec<FiniteMap> = (0..ns).map(|a| m.beta_inv(a)).collect();
    let mut lam = vec![vec![0; n]; n];
    let mut rho = vec![vec![0; n]; n];
    for a in 0..ns {
        for u in 0..nt {
            let abar = ai[u].apply(a);
            let ubar = bi[a].apply(u);
            for b in 0..ns {
                for v in 0..nt {
                    let big_a = m.alpha[u].apply(m.s.lam(abar, b));
                    let big_u = m.beta[a].apply(m.t.lam(ubar, v));
                    let abarbar = ai[big_u].apply(big_a);
                    let ubarbar = bi[big_a].apply(big_u);
                    let first = ai[ubarbar].apply(m.s.rho(m.alpha[ubar].apply(b), a));
                    let second = bi[abarbar].apply(m.t.rho(m.beta[abar].apply(v), u));
                    let p = m.index(a, u);
                    let q = m.index(b, v);
                    lam[p][q] = m.index(big_a, big_u);
                    rho[q][p] = m.index(first, second);
                }
            }
        }
    }
    Solution::new(lam, rho)
}

/// The product reflection `κ × ω` under condition (M): `α_u κ = κ α_u` and
/// `β_a ω = ω β_a` for all `u`, `a`.
pub fn matched_reflection(
    m: &MatchedSystem,
    kappa: &FiniteMap,
    omega: &FiniteMap,
) -> Result<FiniteMap> {
    if kappa.n() != m.s.n() || omega.n() != m.t.n() {
        return Err(Error::structure("component maps on wrong carriers"));
    }
    for (u, a) in m.alpha.iter().enumerate() {
        if !a.commutes_with(kappa) {
            return Err(Error::domain(format!("(M) fails: alpha[{u}] does not commute with κ")));
        }
    }
    for (a, b) in m.beta.iter().enumerate() {
        if !b.commutes_with(omega) {
            return Err(Error::domain(format!("(M) fails: beta[{a}] does not commute with ω")));
        }
    }
    let nt = m.t.n();
    let n = m.s.n() * nt;
    let img = (0..n)
        .map(|p| kappa.apply(p / nt) * nt + omega.apply(p % nt))
        .collect();
    FiniteMap::new(n, img)
}

// ---------------------------------------------------------------------------
// strong semilattice
// ---------------------------------------------------------------------------

/// A strong semilattice system: a finite meet-semilattice `Y`, one solution
/// per index, and transition maps `φ_{α,β}: X_α → X_β` for `α ≥ β`
/// (where `α ≥ β ⇔ α∧β = β`) satisfying
/// `φ_{α,α} = id`, `φ_{β,γ} φ_{α,β} = φ_{α,γ}`, and
/// `(φ×φ) r_α = r_β (φ×φ)`.
#[derive(Clone, Debug)]
pub struct SemilatticeSystem {
    meet: Vec<Vec<usize>>,
    parts: Vec<Solution>,
    /// `phi[a][b]` defined exactly when `a ≥ b`; images into `X_b`.
    phi: Vec<Vec<Option<Vec<usize>>>>,
    offsets: Vec<usize>,
}

impl SemilatticeSystem {
    pub fn new(
        meet: Vec<Vec<usize>>,
        parts: Vec<Solution>,
        phi_list: Vec<(usize, usize, Vec<usize>)>,
    ) -> Result<Self> {
        let k = meet.len();
        if k == 0 || parts.len() != k {
            return Err(Error::structure("one solution is required per semilattice index"));
        }
        for (i, row) in meet.iter().enumerate() {
            if row.len() != k || row.iter().any(|&v| v >= k) {
                return Err(Error::structure(format!("meet row {i} malformed")));
            }
        }
        // semilattice laws
        for a in 0..k {
            if meet[a][a] != a {
                return Err(Error::domain(format!("meet not idempotent at {a}")));
            }
            for b in 0..k {
                if meet[a][b] != meet[b][a] {
                    return Err(Error::domain(format!("meet not commutative at ({a}, {b})")));
                }
                for c in 0..k {
                    if meet[meet[a][b]][c] != meet[a][meet[b][c]] {
                        return Err(Error::domain(format!(
                            "meet not associative at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        let ge = |a: usize, b: usize| meet[a][b] == b;
        let mut phi: Vec<Vec<Option<Vec<usize>>>> = vec![vec![None; k]; k];
        for a in 0..k {
            phi[a][a] = Some((0..parts[a].n()).collect());
        }
        for (a, b, img) in phi_list {
            if a >= k || b >= k {
                return Err(Error::structure("phi index out of range"));
            }
            if !ge(a, b) {
                return Err(Error::domain(format!("phi[{a}->{b}] given but {a} ≱ {b}")));
            }
            if img.len() != parts[a].n() || img.iter().any(|&v| v >= parts[b].n()) {
                return Err(Error::structure(format!("phi[{a}->{b}] malformed")));
            }
            if a == b && img.iter().enumerate().any(|(x, &v)| x != v) {
                return Err(Error::domain(format!("phi[{a}->{a}] must be the identity")));
            }
            phi[a][b] = Some(img);
        }
        for a in 0..k {
            for b in 0..k {
                if ge(a, b) && phi[a][b].is_none() {
                    return Err(Error::structure(format!("missing transition map {a} -> {b}")));
                }
            }
        }
        // composition law φ_{β,γ} φ_{α,β} = φ_{α,γ} for α ≥ β ≥ γ
        for a in 0..k {
            for b in 0..k {
                if !ge(a, b) {
                    continue;
                }
                for c in 0..k {
                    if !ge(b, c) {
                        continue;
                    }
                    let pab = phi[a][b].as_ref().unwrap();
                    let pbc = phi[b][c].as_ref().unwrap();
                    let pac = phi[a][c].as_ref().unwrap();
                    if (0..parts[a].n()).any(|x| pbc[pab[x]] != pac[x]) {
                        return Err(Error::domain(format!(
                            "transition maps do not compose: {a} -> {b} -> {c}"
                        )));
                    }
                }
            }
        }
        // intertwining (φ×φ) r_α = r_β (φ×φ) for α ≥ β
        for a in 0..k {
            for b in 0..k {
                if !ge(a, b) || a == b {
                    continue;
                }
                let p = phi[a][b].as_ref().unwrap();
                for x in 0..parts[a].n() {
                    for y in 0..parts[a].n() {
                        let (l, r) = parts[a].r(x, y);
                        let lhs = (p[l], p[r]);
                        let rhs = parts[b].r(p[x], p[y]);
                        if lhs != rhs {
                            return Err(Error::domain(format!(
                                "(φ×φ) r_{a} ≠ r_{b} (φ×φ) at ({x}, {y})"
                            )));
                        }
                    }
                }
            }
        }
        let mut offsets = Vec::with_capacity(k);
        let mut acc = 0;
        for p in &parts {
            offsets.push(acc);
            acc += p.n();
        }
        Ok(SemilatticeSystem {
            meet,
            parts,
            phi,
            offsets,
        })
    }

    pub fn indices(&self) -> usize {
        self.meet.len()
    }

    pub fn part(&self, a: usize) -> &Solution {
        &self.parts[a]
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a][b]
    }

    pub fn offset(&self, a: usize) -> usize {
        self.offsets[a]
    }

    pub fn total_size(&self) -> usize {
        self.offsets.last().unwrap() + self.parts.last().unwrap().n()
    }

    fn locate(&self, g: usize) -> (usize, usize) {
        let a = self
            .offsets
            .iter()
            .rposition(|&off| off <= g)
            .expect("offsets start at 0");
        (a, g - self.offsets[a])
    }

    fn phi_apply(&self, a: usize, b: usize, x: usize) -> usize {
        self.phi[a][b].as_ref().expect("validated comparable pair")[x]
    }
}

/// The strong semilattice solution:
/// `r(x, y) = r_{αβ}(φ_{α,αβ}(x), φ_{β,αβ}(y))` for `x ∈ X_α`, `y ∈ X_β`.
pub fn strong_semilattice(sys: &SemilatticeSystem) -> Result<Solution> {
    let n = sys.total_size();
    let mut lam = vec![vec![0; n]; n];
    let mut rho = vec![vec![0; n]; n];
    for gx in 0..n {
        let (a, x) = sys.locate(gx);
        for gy in 0..n {
            let (b, y) = sys.locate(gy);
            let m = sys.meet(a, b);
            let (l, r) = sys
                .part(m)
                .r(sys.phi_apply(a, m, x), sys.phi_apply(b, m, y));
            lam[gx][gy] = sys.offset(m) + l;
            rho[gy][gx] = sys.offset(m) + r;
        }
    }
    Solution::new(lam, rho)
}

/// Glues per-part reflections `κ_α` into a reflection of the semilattice
/// solution. Requires each `κ_α ∈ K(X_α)` and condition (S)
/// `φ_{β,αβ} κ_β = κ_{αβ} φ_{β,αβ}`, which is checked for **all** pairs
/// `(α, β)` through their meet, not only comparable ones: the comparable
/// case is trivially true (`φ_{β,β} = id`) and the product formula mixes
/// arbitrary pairs.
pub fn semilattice_reflection(
    sys: &SemilatticeSystem,
    kappas: &[FiniteMap],
) -> Result<FiniteMap> {
    let k = sys.indices();
    if kappas.len() != k {
        return Err(Error::structure("one reflection per semilattice index required"));
    }
    for (a, kap) in kappas.iter().enumerate() {
        if kap.n() != sys.part(a).n() {
            return Err(Error::structure(format!("kappa[{a}] on wrong carrier")));
        }
        if !is_reflection(sys.part(a), kap)? {
            return Err(Error::domain(format!("kappa[{a}] is not a reflection of its part")));
        }
    }
    for a in 0..k {
        for b in 0..k {
            let m = sys.meet(a, b);
            for x in 0..sys.part(b).n() {
                if sys.phi_apply(b, m, kappas[b].apply(x))
                    != kappas[m].apply(sys.phi_apply(b, m, x))
                {
                    return Err(Error::domain(format!(
                        "(S) fails for pair ({a}, {b}) at {x}"
                    )));
                }
            }
        }
    }
    let n = sys.total_size();
    let img = (0..n)
        .map(|g| {
            let (a, x) = sys.locate(g);
            sys.offset(a) + kappas[a].apply(x)
        })
        .collect();
    FiniteMap::new(n, img)
}

// ---------------------------------------------------------------------------
// twisted union
// ---------------------------------------------------------------------------

/// Which of the ten twisted-union compatibility identities failed.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TwistedCondition {
    AlphaFCommute,
    GBetaCommute,
    FIntertwinesU,
    GIntertwinesV,
    AlphaIntertwinesU,
    BetaIntertwinesV,
    AlphaLambdaF,
    BetaRhoG,
    FRhoAlpha,
    GLambdaBeta,
}

/// A twisted-union system: solutions `(X, u)`, `(Y, v)` and connecting maps
/// `f, α` on `X`, `g, β` on `Y` satisfying the ten compatibility identities.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TwistedSystem {
    pub u: Solution,
    pub v: Solution,
    pub f: FiniteMap,
    pub alpha: FiniteMap,
    pub g: FiniteMap,
    pub beta: FiniteMap,
}

impl TwistedSystem {
    pub fn new(
        u: Solution,
        v: Solution,
        f: FiniteMap,
        alpha: FiniteMap,
        g: FiniteMap,
        beta: FiniteMap,
    ) -> Result<Self> {
        if f.n() != u.n() || alpha.n() != u.n() || g.n() != v.n() || beta.n() != v.n() {
            return Err(Error::structure("connecting maps on wrong carriers"));
        }
        let sys = TwistedSystem {
            u,
            v,
            f,
            alpha,
            g,
            beta,
        };
        if let Some(cond) = sys.violated_condition() {
            return Err(Error::domain(format!(
                "twisted-union condition {cond:?} fails"
            )));
        }
        Ok(sys)
    }

    fn violated_condition(&self) -> Option<TwistedCondition> {
        use TwistedCondition::*;
        let (u, v) = (&self.u, &self.v);
        let (f, alpha, g, beta) = (&self.f, &self.alpha, &self.g, &self.beta);
        if !alpha.commutes_with(f) {
            return Some(AlphaFCommute);
        }
        if !g.commutes_with(beta) {
            return Some(GBetaCommute);
        }
        let intertwines = |m: &FiniteMap, s: &Solution| {
            (0..s.n()).all(|x| {
                (0..s.n()).all(|y| {
                    let (l, r) = s.r(x, y);
                    (m.apply(l), m.apply(r)) == s.r(m.apply(x), m.apply(y))
                })
            })
        };
        if !intertwines(f, u) {
            return Some(FIntertwinesU);
        }
        if !intertwines(g, v) {
            return Some(GIntertwinesV);
        }
        if !intertwines(alpha, u) {
            return Some(AlphaIntertwinesU);
        }
        if !intertwines(beta, v) {
            return Some(BetaIntertwinesV);
        }
        // α λ_{f(x)} = λ_x α on X
        let nx = u.n();
        if !(0..nx).all(|x| {
            (0..nx).all(|y| alpha.apply(u.lam(f.apply(x), y)) == u.lam(x, alpha.apply(y)))
        }) {
            return Some(AlphaLambdaF);
        }
        // β ρ_{g(y)} = ρ_y β on Y
        let ny = v.n();
        if !(0..ny).all(|y| {
            (0..ny).all(|z| beta.apply(v.rho(g.apply(y), z)) == v.rho(y, beta.apply(z)))
        }) {
            return Some(BetaRhoG);
        }
        // f ρ_{α(x)} = ρ_x f on X
        if !(0..nx).all(|x| {
            (0..nx).all(|y| f.apply(u.rho(alpha.apply(x), y)) == u.rho(x, f.apply(y)))
        }) {
            return Some(FRhoAlpha);
        }
        // g λ_{β(y)} = λ_y g on Y
        if !(0..ny).all(|y| {
            (0..ny).all(|z| g.apply(v.lam(beta.apply(y), z)) == v.lam(y, g.apply(z)))
        }) {
            return Some(GLambdaBeta);
        }
        None
    }
}

/// The twisted union on `X ⊔ Y` (X first):
///
/// ```text
/// r(a,b) = u(a,b)            a, b ∈ X
///        = v(a,b)            a, b ∈ Y
///        = (g(b), f(a))      a ∈ X, b ∈ Y
///        = (α(b), β(a))      a ∈ Y, b ∈ X
/// ```
pub fn twisted_union(sys: &TwistedSystem) -> Result<Solution> {
    let (nx, ny) = (sys.u.n(), sys.v.n());
    let n = nx + ny;
    let mut lam = vec![vec![0; n]; n];
    let mut rho = vec![vec![0; n]; n];
    for a in 0..n {
        for b in 0..n {
            let (l, r) = match (a < nx, b < nx) {
                (true, true) => sys.u.r(a, b),
                (false, false) => {
                    let (l, r) = sys.v.r(a - nx, b - nx);
                    (l + nx, r + nx)
                }
                // a ∈ X, b ∈ Y
                (true, false) => (sys.g.apply(b - nx) + nx, sys.f.apply(a)),
                // a ∈ Y, b ∈ X
                (false, true) => (sys.alpha.apply(b), sys.beta.apply(a - nx) + nx),
            };
            lam[a][b] = l;
            rho[b][a] = r;
        }
    }
    Solution::new(lam, rho)
}

/// Glues `κ ∈ K(X, u)` and `κ' ∈ K(Y, v)` to a map on the union. The glued
/// map is a reflection of the twisted union exactly when `κ` commutes with
/// `f∘α` and `κ'` with `g∘β` (checked by the caller via `is_reflection`,
/// not here: both directions of that equivalence are meaningful).
pub fn twisted_reflection(
    sys: &TwistedSystem,
    kappa: &FiniteMap,
    kappa2: &FiniteMap,
) -> Result<FiniteMap> {
    if kappa.n() != sys.u.n() || kappa2.n() != sys.v.n() {
        return Err(Error::structure("component maps on wrong carriers"));
    }
    if !is_reflection(&sys.u, kappa)? {
        return Err(Error::domain("κ is not a reflection of (X, u)"));
    }
    if !is_reflection(&sys.v, kappa2)? {
        return Err(Error::domain("κ' is not a reflection of (Y, v)"));
    }
    let nx = sys.u.n();
    let n = nx + sys.v.n();
    let img = (0..n)
        .map(|a| {
            if a < nx {
                kappa.apply(a)
            } else {
                kappa2.apply(a - nx) + nx
            }
        })
        .collect();
    FiniteMap::new(n, img)
}

// ---------------------------------------------------------------------------
// rack deformation r_κ
// ---------------------------------------------------------------------------

/// The deformation `r_κ(x, y) = (κ(y), κ⁻¹(y ▷ x))` of the solution of a
/// left rack by a bijective reflection `κ` of `r_▷`. Membership
/// `κ ∈ K_bij(r_▷)` is checked through the centralizer characterization:
/// `κ` must be a shelf endomorphism commuting with every left
/// multiplication.
pub fn r_kappa(sh: &Shelf, kappa: &FiniteMap) -> Result<Solution> {
    if sh.side() != Side::Left || !sh.is_rack() {
        return Err(Error::domain("r_κ is defined over a left rack"));
    }
    if kappa.n() != sh.n() {
        return Err(Error::structure("map and rack carrier sizes differ"));
    }
    if !kappa.is_bijective() {
        return Err(Error::domain("κ must be bijective"));
    }
    let lmlt = multiplication_group(sh)?;
    let in_centralizer = centralizer(std::slice::from_ref(kappa), &lmlt).len() == 1;
    let endo = (0..sh.n()).all(|x| {
        (0..sh.n()).all(|y| kappa.apply(sh.op(x, y)) == sh.op(kappa.apply(x), kappa.apply(y)))
    });
    if !endo || !in_centralizer {
        return Err(Error::domain(
            "κ is not a bijective reflection of the rack solution (not in C_Aut(LMlt))",
        ));
    }
    let n = sh.n();
    let ki = kappa.inverse().expect("checked bijective");
    let lam: Vec<Vec<usize>> = (0..n).map(|_| kappa.img().to_vec()).collect();
    let rho: Vec<Vec<usize>> = (0..n)
        .map(|y| (0..n).map(|x| ki.apply(sh.op(y, x))).collect())
        .collect();
    Solution::new(lam, rho)
}

// ---------------------------------------------------------------------------
// named families
// ---------------------------------------------------------------------------

/// A named structure from the example library, selectable by the CLI.
#[derive(Clone, Debug)]
pub enum FamilySpec {
    Lyubashenko { f: FiniteMap, g: FiniteMap },
    PermutationRack { f: FiniteMap },
    CyclicRack { n: usize },
    DihedralQuandle { n: usize },
    RightDihedralQuandle { n: usize },
    TrivialRack { n: usize },
    ConjugationQuandle { group: String },
    ConstantShelf { n: usize, a: usize },
    IdempotentMapShelf { f: FiniteMap },
    Shelf2x2yMod6,
    Example13,
    Order8,
    Flip { n: usize },
    IdentitySolution { n: usize },
    LeftProjection { n: usize },
    RightProjection { n: usize },
    ConstantSolution { n: usize, c: usize },
}

/// Either kind of structure a family can produce.
#[derive(Clone, Debug)]
pub enum FamilyValue {
    Solution(Solution),
    Shelf(Shelf),
}

/// Instantiates a named family, validating its parameters.
pub fn family(spec: &FamilySpec) -> Result<FamilyValue> {
    use FamilySpec::*;
    Ok(match spec {
        Lyubashenko { f, g } => FamilyValue::Solution(crate::families::lyubashenko(f, g)?),
        PermutationRack { f } => FamilyValue::Shelf(Shelf::permutation_rack(f)?),
        CyclicRack { n } => FamilyValue::Shelf(Shelf::cyclic_rack(positive(*n)?)),
        DihedralQuandle { n } => FamilyValue::Shelf(Shelf::dihedral_quandle(positive(*n)?)),
        RightDihedralQuandle { n } => {
            FamilyValue::Shelf(Shelf::right_dihedral_quandle(positive(*n)?))
        }
        TrivialRack { n } => FamilyValue::Shelf(Shelf::trivial_rack(positive(*n)?)),
        ConjugationQuandle { group } => {
            FamilyValue::Shelf(Shelf::conjugation_quandle(&crate::groups::by_name(group)?))
        }
        ConstantShelf { n, a } => FamilyValue::Shelf(Shelf::constant_shelf(positive(*n)?, *a)?),
        IdempotentMapShelf { f } => FamilyValue::Shelf(Shelf::idempotent_map_shelf(f)?),
        Shelf2x2yMod6 => FamilyValue::Shelf(Shelf::mod6_shelf()),
        Example13 => FamilyValue::Solution(crate::families::example_1_3()),
        Order8 => FamilyValue::Solution(crate::families::order8_example()),
        Flip { n } => FamilyValue::Solution(Solution::flip(positive(*n)?)),
        IdentitySolution { n } => FamilyValue::Solution(Solution::identity(positive(*n)?)),
        LeftProjection { n } => FamilyValue::Solution(crate::families::left_projection(positive(*n)?)),
        RightProjection { n } => {
            FamilyValue::Solution(crate::families::right_projection(positive(*n)?))
        }
        ConstantSolution { n, c } => {
            FamilyValue::Solution(crate::families::constant_solution(positive(*n)?, *c)?)
        }
    })
}

fn positive(n: usize) -> Result<usize> {
    if n == 0 {
        Err(Error::structure("carrier size must be positive"))
    } else {
        Ok(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::reflect::{enumerate_reflections_brute, EnumOptions};

    fn id_family(n: usize, size: usize) -> Vec<FiniteMap> {
        (0..size).map(|_| FiniteMap::identity(n)).collect()
    }

    #[test]
    fn matched_product_of_flips_is_flip() {
        let s = Solution::flip(2);
        let t = Solution::flip(2);
        let m = MatchedSystem::new(s, t, id_family(2, 2), id_family(2, 2)).unwrap();
        let p = matched_product(&m).unwrap();
        assert_eq!(p, Solution::flip(4));
    }

    #[test]
    fn matched_with_lambda_twists() {
        // involutive left-nd solutions with α_u = λ_u and β_a = λ_a always
        // form a matched product system
        let s = families::example_1_3();
        let t = families::example_1_3();
        let alpha: Vec<FiniteMap> = (0..3).map(|u| t.lam_map(u)).collect();
        let beta: Vec<FiniteMap> = (0..3).map(|a| s.lam_map(a)).collect();
        let m = MatchedSystem::new(s.clone(), t.clone(), alpha, beta).unwrap();
        let p = matched_product(&m).unwrap();
        assert_eq!(p.n(), 9);
        assert!(p.flags().left_nd);
        assert!(p.flags().bijective);
    }

    #[test]
    fn matched_rejects_bad_system() {
        // β = id, α_u a fixed transposition not compatible with the S-side
        // structure: the constructor reports the first violated condition
        let s = families::example_1_3();
        let t = Solution::flip(2);
        let swap = FiniteMap::from_cycles(3, &[vec![0, 2]]).unwrap();
        let alpha = vec![swap.clone(), swap.clone()];
        let beta = id_family(2, 3);
        let err = MatchedSystem::new(s, t, alpha, beta).unwrap_err();
        assert!(matches!(err, Error::Domain(ref m) if m.contains("(s")));
    }

    #[test]
    fn matched_reflection_condition_m() {
        let s = Solution::flip(2);
        let t = Solution::flip(3);
        let m = MatchedSystem::new(s.clone(), t.clone(), id_family(2, 3), id_family(3, 2)).unwrap();
        let id2 = FiniteMap::identity(2);
        let id3 = FiniteMap::identity(3);
        let glued = matched_reflection(&m, &id2, &id3).unwrap();
        assert!(glued.is_identity());
        let p = matched_product(&m).unwrap();
        assert!(is_reflection(&p, &glued).unwrap());
    }

    #[test]
    fn semidirect_style_system() {
        // trivial solutions, β_a = id, α_u pairwise-commuting bijections
        let s = Solution::flip(3);
        let t = Solution::flip(2);
        let rot = FiniteMap::from_cycles(3, &[vec![0, 1, 2]]).unwrap();
        let alpha = vec![FiniteMap::identity(3), rot.clone()];
        let beta = id_family(2, 3);
        let m = MatchedSystem::new(s, t, alpha, beta).unwrap();
        let p = matched_product(&m).unwrap();
        assert_eq!(p.n(), 6);
        // κ × ω with κ = id: ρ-invariant iff α_u = α_{ω(u)}
        let id3 = FiniteMap::identity(3);
        for omega in FiniteMap::all_maps(2) {
            if !m.beta.iter().all(|b| b.commutes_with(&omega)) {
                continue;
            }
            let glued = matched_reflection(&m, &id3, &omega).unwrap();
            let flags = crate::reflect::classify_reflection(&p, &glued).flags;
            let alpha_fixed = (0..2).all(|u| m.alpha[u] == m.alpha[omega.apply(u)]);
            assert_eq!(flags.rho_invariant, alpha_fixed, "{omega}");
        }
    }

    #[test]
    fn semilattice_single_part_is_identity_construction() {
        let s = families::example_1_3();
        let sys = SemilatticeSystem::new(vec![vec![0]], vec![s.clone()], vec![]).unwrap();
        assert_eq!(strong_semilattice(&sys).unwrap(), s);
    }

    #[test]
    fn semilattice_two_chain_of_flips() {
        // Y = {1 > 0}, both parts flips, φ the constant map
        let top = Solution::flip(2);
        let bottom = Solution::flip(2);
        let meet = vec![vec![0, 0], vec![0, 1]];
        let sys = SemilatticeSystem::new(
            meet,
            vec![bottom, top],
            vec![(1, 0, vec![0, 0])],
        )
        .unwrap();
        let s = strong_semilattice(&sys).unwrap();
        assert_eq!(s.n(), 4);
        // with |Y| > 1 the result is degenerate and non-bijective
        assert!(!s.flags().bijective);
        assert!(!s.flags().left_nd || !s.flags().right_nd);
    }

    #[test]
    fn semilattice_transition_must_intertwine() {
        // constant φ into the cyclic-rack part: r_0(0,0) = (0,1) ≠ (φ×φ)r_1
        let top = Solution::flip(2);
        let bottom = Shelf::cyclic_rack(2).to_solution().unwrap();
        let meet = vec![vec![0, 0], vec![0, 1]];
        let err = SemilatticeSystem::new(
            meet,
            vec![bottom, top],
            vec![(1, 0, vec![0, 0])],
        )
        .unwrap_err();
        assert!(matches!(err, Error::Domain(ref m) if m.contains("(φ×φ)")));
    }

    #[test]
    fn semilattice_reflection_glues() {
        let part = Solution::flip(2);
        let meet = vec![vec![0, 0], vec![0, 1]];
        let sys = SemilatticeSystem::new(
            meet,
            vec![part.clone(), part.clone()],
            vec![(1, 0, vec![0, 1])],
        )
        .unwrap();
        let glued_sol = strong_semilattice(&sys).unwrap();
        // identical parts, φ = id: equal reflections glue
        let swap = FiniteMap::from_cycles(2, &[vec![0, 1]]).unwrap();
        let glued = semilattice_reflection(&sys, &[swap.clone(), swap.clone()]).unwrap();
        assert!(is_reflection(&glued_sol, &glued).unwrap());
        // (S) violated: κ_top = swap, κ_bottom = id
        let err =
            semilattice_reflection(&sys, &[FiniteMap::identity(2), swap.clone()]).unwrap_err();
        assert!(matches!(err, Error::Domain(ref m) if m.contains("(S)")));
        // and indeed the naive gluing is not a reflection
        let bad = FiniteMap::new(4, vec![0, 1, 3, 2]).unwrap();
        assert!(!is_reflection(&glued_sol, &bad).unwrap());
    }

    #[test]
    fn twisted_union_classical_involutive() {
        // involutive parts with α = f⁻¹, β = g⁻¹ give an involutive union
        let x = families::example_1_3();
        let y = Solution::flip(2);
        let f = FiniteMap::from_cycles(3, &[vec![0, 1]]).unwrap();
        let g = FiniteMap::from_cycles(2, &[vec![0, 1]]).unwrap();
        let sys = TwistedSystem::new(
            x,
            y,
            f.clone(),
            f.inverse().unwrap(),
            g.clone(),
            g.inverse().unwrap(),
        )
        .unwrap();
        let z = twisted_union(&sys).unwrap();
        assert_eq!(z.n(), 5);
        assert!(z.flags().involutive);
    }

    #[test]
    fn twisted_union_of_flips_non_involutive() {
        // flips with f = α = κ a 3-cycle: the union is not involutive
        let x = Solution::flip(3);
        let y = Solution::flip(2);
        let kappa = FiniteMap::from_cycles(3, &[vec![0, 1, 2]]).unwrap();
        let omega = FiniteMap::identity(2);
        let sys = TwistedSystem::new(x, y, kappa.clone(), kappa, omega.clone(), omega).unwrap();
        let z = twisted_union(&sys).unwrap();
        assert!(z.flags().bijective);
        assert!(!z.flags().involutive);
    }

    #[test]
    fn twisted_union_names_failed_condition() {
        let x = families::example_1_3();
        let y = Solution::flip(2);
        // f not intertwining u: a transposition that is not an automorphism
        let f = FiniteMap::from_cycles(3, &[vec![0, 2]]).unwrap();
        let id2 = FiniteMap::identity(2);
        let err = TwistedSystem::new(x, y, f.clone(), f, id2.clone(), id2).unwrap_err();
        assert!(matches!(err, Error::Domain(ref m) if m.contains("FIntertwinesU")));
    }

    #[test]
    fn twisted_union_rack_example() {
        // left-rack derived u, right-rack derived v, f = α ∈ C_End(LMlt),
        // g = β = R_y: bijective non-degenerate output
        let left = Shelf::cyclic_rack(3);
        let right = Shelf::cyclic_rack(2).opposite();
        let u = left.to_solution().unwrap();
        let v = right.to_solution().unwrap();
        let kappa = left.multiplication(0); // translation, central in LMlt
        let ry = right.multiplication(0);
        let sys = TwistedSystem::new(u, v, kappa.clone(), kappa, ry.clone(), ry).unwrap();
        let z = twisted_union(&sys).unwrap();
        assert!(z.flags().bijective && z.flags().non_degenerate());
    }

    #[test]
    fn twisted_reflection_biconditional_small() {
        let x = Solution::flip(2);
        let y = Solution::flip(2);
        let swap = FiniteMap::from_cycles(2, &[vec![0, 1]]).unwrap();
        let id2 = FiniteMap::identity(2);
        let sys = TwistedSystem::new(x.clone(), y.clone(), swap.clone(), id2.clone(), id2.clone(), id2.clone())
            .unwrap();
        let z = twisted_union(&sys).unwrap();
        let fa = sys.f.compose(&sys.alpha);
        let gb = sys.g.compose(&sys.beta);
        for kappa in FiniteMap::all_maps(2) {
            if !is_reflection(&x, &kappa).unwrap() {
                continue;
            }
            for kappa2 in FiniteMap::all_maps(2) {
                if !is_reflection(&y, &kappa2).unwrap() {
                    continue;
                }
                let glued = twisted_reflection(&sys, &kappa, &kappa2).unwrap();
                let expect = kappa.commutes_with(&fa) && kappa2.commutes_with(&gb);
                assert_eq!(is_reflection(&z, &glued).unwrap(), expect);
            }
        }
    }

    #[test]
    fn r_kappa_identity_is_derived_solution() {
        let sh = Shelf::dihedral_quandle(4);
        let s = r_kappa(&sh, &FiniteMap::identity(4)).unwrap();
        assert_eq!(s, sh.to_solution().unwrap());
    }

    #[test]
    fn r_kappa_cyclic_rack_translation() {
        // κ = L_0 = (y ↦ y+1) on the cyclic rack Z_3: r_κ(x, y) = (y+1, x)
        let sh = Shelf::cyclic_rack(3);
        let kappa = sh.multiplication(0);
        let s = r_kappa(&sh, &kappa).unwrap();
        for x in 0..3 {
            for y in 0..3 {
                assert_eq!(s.r(x, y), ((y + 1) % 3, x));
            }
        }
        assert!(s.flags().bijective && s.flags().non_degenerate());
        // the deformation keeps the rack
        assert_eq!(crate::shelf::derived_left_shelf(&s).unwrap(), sh);
    }

    #[test]
    fn r_kappa_dihedral_shift() {
        // κ = x + 2 on the dihedral quandle Z_4 is a bijective reflection
        let sh = Shelf::dihedral_quandle(4);
        let kappa = FiniteMap::new(4, vec![2, 3, 0, 1]).unwrap();
        let s = r_kappa(&sh, &kappa).unwrap();
        assert!(s.flags().bijective && s.flags().non_degenerate());
        assert_eq!(crate::shelf::derived_left_shelf(&s).unwrap(), sh);
        // non-reflections are rejected: x ↦ 1 - x is an automorphism of the
        // dihedral quandle Z_3 but not a reflection
        let sh3 = Shelf::dihedral_quandle(3);
        let bad = FiniteMap::new(3, vec![1, 0, 2]).unwrap();
        assert!(matches!(r_kappa(&sh3, &bad), Err(Error::Domain(_))));
    }

    #[test]
    fn r_kappa_reflections_commute_with_kappa_within_base_reflections() {
        // ω ∈ K(r_▷) with ωκ = κω is a reflection of r_κ
        let sh = Shelf::cyclic_rack(3);
        let kappa = sh.multiplication(0);
        let s = r_kappa(&sh, &kappa).unwrap();
        let base = enumerate_reflections_brute(&sh.to_solution().unwrap());
        for r in &base.records {
            if r.kappa.commutes_with(&kappa) {
                assert!(is_reflection(&s, &r.kappa).unwrap());
            }
        }
    }

    #[test]
    fn family_dispatch() {
        let out = family(&FamilySpec::Lyubashenko {
            f: FiniteMap::from_cycles(3, &[vec![0, 1, 2]]).unwrap(),
            g: FiniteMap::from_cycles(3, &[vec![0, 2, 1]]).unwrap(),
        })
        .unwrap();
        let FamilyValue::Solution(s) = out else {
            panic!("expected a solution")
        };
        assert!(s.flags().involutive);
        // every map is a reflection of an involutive permutation solution
        assert_eq!(enumerate_reflections_brute(&s).counts.total, 27);

        let out = family(&FamilySpec::Shelf2x2yMod6).unwrap();
        let FamilyValue::Shelf(sh) = out else {
            panic!("expected a shelf")
        };
        assert_eq!(sh.n(), 6);
        assert!(!sh.is_rack());

        assert!(family(&FamilySpec::Lyubashenko {
            f: FiniteMap::from_cycles(3, &[vec![0, 1]]).unwrap(),
            g: FiniteMap::from_cycles(3, &[vec![1, 2]]).unwrap(),
        })
        .is_err());
    }

    #[test]
    fn dihedral_family_bijective_reflection_count() {
        // |K_bij| = gcd(n, 4) for the left-derived dihedral solution
        let FamilyValue::Shelf(sh) = family(&FamilySpec::DihedralQuandle { n: 6 }).unwrap() else {
            panic!()
        };
        let s = sh.to_solution().unwrap();
        let set = crate::reflect::enumerate_reflections(&s, EnumOptions::default()).unwrap();
        let bij = set.records.iter().filter(|r| r.flags.bijective).count();
        assert_eq!(bij, 2); // gcd(6, 4)
    }
}
