//! Left and right shelves, racks and quandles, and their interplay with
//! solutions.
//!
//! A left shelf stores `op[x][y] = x ▷ y` and satisfies
//! `x ▷ (y ▷ z) = (x ▷ y) ▷ (x ▷ z)`; a right shelf stores `op[x][y] = x ◁ y`
//! and satisfies `(x ◁ y) ◁ z = (x ◁ z) ◁ (y ◁ z)`. Every left shelf yields
//! the left non-degenerate solution `r_▷(x, y) = (y, y ▷ x)`, and every left
//! non-degenerate solution has an associated left shelf
//! `x ▷_r y = λ_x ρ_{λ_y⁻¹(x)}(y)`; dually on the right with
//! `x ◁_r y = ρ_y λ_{ρ_x⁻¹(y)}(x)` and `r_◁(x, y) = (y ◁ x, x)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::GroupTable;
use crate::map::FiniteMap;
use crate::solution::Solution;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// A set with one self-distributive binary operation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Shelf {
    n: usize,
    side: Side,
    op: Vec<Vec<usize>>,
    is_rack: bool,
    is_quandle: bool,
}

impl Shelf {
    /// Validates self-distributivity for the given side and computes the
    /// rack/quandle flags.
    pub fn new(side: Side, op: Vec<Vec<usize>>) -> Result<Self> {
        let n = op.len();
        if n == 0 {
            return Err(Error::structure("carrier size must be positive"));
        }
        for (i, row) in op.iter().enumerate() {
            if row.len() != n {
                return Err(Error::structure(format!(
                    "op row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            if row.iter().any(|&v| v >= n) {
                return Err(Error::structure(format!("op row {i} has out-of-range entry")));
            }
        }
        if let Some((x, y, z)) = self_distributivity_witness(side, &op) {
            return Err(Error::domain(format!(
                "self-distributivity fails at ({x}, {y}, {z})"
            )));
        }
        let is_rack = match side {
            // L_x is the row x ↦ op[x][·]; R_x is the column y ↦ op[·][x].
            Side::Left => (0..n).all(|x| is_perm(op[x].iter().copied())),
            Side::Right => (0..n).all(|x| is_perm((0..n).map(|y| op[y][x]))),
        };
        let is_quandle = is_rack && (0..n).all(|x| op[x][x] == x);
        Ok(Shelf {
            n,
            side,
            op,
            is_rack,
            is_quandle,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn op_table(&self) -> &[Vec<usize>] {
        &self.op
    }

    #[inline]
    pub fn op(&self, x: usize, y: usize) -> usize {
        self.op[x][y]
    }

    pub fn is_rack(&self) -> bool {
        self.is_rack
    }

    pub fn is_quandle(&self) -> bool {
        self.is_quandle
    }

    /// The multiplication by `x`: `L_x(y) = x ▷ y` on the left side,
    /// `R_x(y) = y ◁ x` on the right side.
    pub fn multiplication(&self, x: usize) -> FiniteMap {
        let img = match self.side {
            Side::Left => self.op[x].clone(),
            Side::Right => (0..self.n).map(|y| self.op[y][x]).collect(),
        };
        FiniteMap::new(self.n, img).expect("validated at construction")
    }

    /// The solution associated with the shelf: `r_▷(x, y) = (y, y ▷ x)` for a
    /// left shelf, `r_◁(x, y) = (y ◁ x, x)` for a right one.
    pub fn to_solution(&self) -> Result<Solution> {
        let n = self.n;
        let (lam, rho): (Vec<Vec<usize>>, Vec<Vec<usize>>) = match self.side {
            Side::Left => (
                (0..n).map(|_| (0..n).collect()).collect(),
                (0..n).map(|y| (0..n).map(|x| self.op[y][x]).collect()).collect(),
            ),
            Side::Right => (
                (0..n).map(|x| (0..n).map(|y| self.op[y][x]).collect()).collect(),
                (0..n).map(|_| (0..n).collect()).collect(),
            ),
        };
        Solution::new(lam, rho)
    }

    /// The same operation with swapped arguments, on the opposite side.
    pub fn opposite(&self) -> Shelf {
        let n = self.n;
        let op = (0..n)
            .map(|x| (0..n).map(|y| self.op[y][x]).collect())
            .collect();
        let side = match self.side {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        };
        Shelf::new(side, op).expect("mirror image of a valid shelf")
    }

    // ----- named families -------------------------------------------------

    /// `x ▷ y = y`.
    pub fn trivial_rack(n: usize) -> Shelf {
        Shelf::new(Side::Left, (0..n).map(|_| (0..n).collect()).collect())
            .expect("trivial rack is self-distributive")
    }

    /// `x ▷ y = f(y)` for a permutation `f`.
    pub fn permutation_rack(f: &FiniteMap) -> Result<Shelf> {
        if !f.is_bijective() {
            return Err(Error::domain("permutation rack requires a bijection"));
        }
        let n = f.n();
        Shelf::new(Side::Left, (0..n).map(|_| f.img().to_vec()).collect())
    }

    /// `x ▷ y = y + 1 (mod n)`.
    pub fn cyclic_rack(n: usize) -> Shelf {
        Shelf::new(
            Side::Left,
            (0..n).map(|_| (0..n).map(|y| (y + 1) % n).collect()).collect(),
        )
        .expect("cyclic rack is self-distributive")
    }

    /// `i ▷ j = 2i − j (mod n)`.
    pub fn dihedral_quandle(n: usize) -> Shelf {
        Shelf::new(
            Side::Left,
            (0..n)
                .map(|i| (0..n).map(|j| (2 * i + n - j) % n).collect())
                .collect(),
        )
        .expect("dihedral quandle is self-distributive")
    }

    /// Right-handed dihedral quandle `i ◁ j = 2j − i (mod n)`.
    pub fn right_dihedral_quandle(n: usize) -> Shelf {
        Shelf::new(
            Side::Right,
            (0..n)
                .map(|i| (0..n).map(|j| (2 * j + n - i) % n).collect())
                .collect(),
        )
        .expect("right dihedral quandle is self-distributive")
    }

    /// `x ▷ y = x⁻¹ y x` in the given group.
    pub fn conjugation_quandle(g: &GroupTable) -> Shelf {
        let n = g.n();
        Shelf::new(
            Side::Left,
            (0..n)
                .map(|x| {
                    let xi = g.inv(x);
                    (0..n).map(|y| g.mul(g.mul(xi, y), x)).collect()
                })
                .collect(),
        )
        .expect("conjugation is self-distributive")
    }

    /// `x ▷ y = a` for a fixed element `a`.
    pub fn constant_shelf(n: usize, a: usize) -> Result<Shelf> {
        if a >= n {
            return Err(Error::structure("constant out of range"));
        }
        Shelf::new(Side::Left, vec![vec![a; n]; n])
    }

    /// `x ▷ y = f(x)` for an idempotent map `f`.
    pub fn idempotent_map_shelf(f: &FiniteMap) -> Result<Shelf> {
        if !f.is_idempotent() {
            return Err(Error::domain("shelf x ▷ y = f(x) requires f² = f"));
        }
        let n = f.n();
        Shelf::new(Side::Left, (0..n).map(|x| vec![f.apply(x); n]).collect())
    }

    /// `x ▷ y = 2x + 2y (mod 6)`.
    pub fn mod6_shelf() -> Shelf {
        Shelf::new(
            Side::Left,
            (0..6)
                .map(|x| (0..6).map(|y| (2 * x + 2 * y) % 6).collect())
                .collect(),
        )
        .expect("2x+2y mod 6 is self-distributive")
    }
}

/// Serialized form: `{"n": …, "side": "left"|"right", "op": [[…]]}`.
#[derive(Serialize, Deserialize)]
struct ShelfJson {
    n: usize,
    side: Side,
    op: Vec<Vec<usize>>,
}

impl Serialize for Shelf {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ShelfJson {
            n: self.n,
            side: self.side,
            op: self.op.clone(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for Shelf {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let raw = ShelfJson::deserialize(de)?;
        if raw.op.len() != raw.n {
            return Err(serde::de::Error::custom("op table size differs from n"));
        }
        Shelf::new(raw.side, raw.op).map_err(serde::de::Error::custom)
    }
}

fn is_perm(vals: impl Iterator<Item = usize>) -> bool {
    let mut seen = Vec::new();
    for v in vals {
        if seen.len() <= v {
            seen.resize(v + 1, false);
        }
        if seen[v] {
            return false;
        }
        seen[v] = true;
    }
    true
}

fn self_distributivity_witness(side: Side, op: &[Vec<usize>]) -> Option<(usize, usize, usize)> {
    let n = op.len();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let ok = match side {
                    Side::Left => op[x][op[y][z]] == op[op[x][y]][op[x][z]],
                    Side::Right => op[op[x][y]][z] == op[op[x][z]][op[y][z]],
                };
                if !ok {
                    return Some((x, y, z));
                }
            }
        }
    }
    None
}

/// The left shelf `x ▷_r y = λ_x ρ_{λ_y⁻¹(x)}(y)` of a left non-degenerate
/// solution. Bijective solutions yield racks.
pub fn derived_left_shelf(s: &Solution) -> Result<Shelf> {
    if !s.flags().left_nd {
        return Err(Error::domain(
            "derived left shelf requires a left non-degenerate solution",
        ));
    }
    let n = s.n();
    let lam_inv: Vec<FiniteMap> = (0..n)
        .map(|x| s.lam_map(x).inverse().expect("left non-degenerate"))
        .collect();
    let op = (0..n)
        .map(|x| {
            (0..n)
                .map(|y| {
                    let w = lam_inv[y].apply(x);
                    s.lam(x, s.rho(w, y))
                })
                .collect()
        })
        .collect();
    Shelf::new(Side::Left, op)
}

/// The right shelf `x ◁_r y = ρ_y λ_{ρ_x⁻¹(y)}(x)` of a right non-degenerate
/// solution.
pub fn derived_right_shelf(s: &Solution) -> Result<Shelf> {
    if !s.flags().right_nd {
        return Err(Error::domain(
            "derived right shelf requires a right non-degenerate solution",
        ));
    }
    let n = s.n();
    let rho_inv: Vec<FiniteMap> = (0..n)
        .map(|x| s.rho_map(x).inverse().expect("right non-degenerate"))
        .collect();
    let op = (0..n)
        .map(|x| {
            (0..n)
                .map(|y| {
                    let w = rho_inv[x].apply(y);
                    s.rho(y, s.lam(w, x))
                })
                .collect()
        })
        .collect();
    Shelf::new(Side::Right, op)
}

/// The left derived solution `r_▷` of a left non-degenerate solution: the
/// solution associated with its derived left shelf.
pub fn left_derived_solution(s: &Solution) -> Result<Solution> {
    derived_left_shelf(s)?.to_solution()
}

/// Rebuilds the ρ table from a family of shelf automorphisms via
/// `ρ_y(x) = λ⁻¹_{λ_x(y)}(λ_x(y) ▷ x)`.
///
/// Every row of `lam` must be an automorphism of `sh`; the rows must in
/// addition satisfy (Y1) over the shelf for the assembled pair of tables to
/// be a solution, which the caller checks by constructing a [`Solution`].
pub fn reconstruct_rho(lam: &[Vec<usize>], sh: &Shelf) -> Result<Vec<Vec<usize>>> {
    let n = sh.n();
    if lam.len() != n || lam.iter().any(|r| r.len() != n || r.iter().any(|&v| v >= n)) {
        return Err(Error::structure("lambda table malformed"));
    }
    let mut lam_inv = Vec::with_capacity(n);
    for (x, row) in lam.iter().enumerate() {
        let f = FiniteMap::new(n, row.clone())?;
        if !f.is_bijective() {
            return Err(Error::domain(format!("lambda row {x} is not a bijection")));
        }
        let endo = (0..n).all(|a| (0..n).all(|b| row[sh.op(a, b)] == sh.op(row[a], row[b])));
        if !endo {
            return Err(Error::domain(format!(
                "lambda row {x} is not a shelf automorphism"
            )));
        }
        lam_inv.push(f.inverse().expect("checked bijective"));
    }
    let mut rho = vec![vec![0; n]; n];
    for y in 0..n {
        for x in 0..n {
            let u = lam[x][y];
            rho[y][x] = lam_inv[u].apply(sh.op(u, x));
        }
    }
    Ok(rho)
}

const UNSET: usize = usize::MAX;

/// All shelf endomorphisms `κ(x op y) = κ(x) op κ(y)`, found by depth-first
/// assignment of `κ(0), κ(1), …` with immediate propagation of every
/// constraint instance whose arguments are determined. Output is sorted
/// lexicographically by image.
///
/// The search is exact for any carrier size but is only exercised up to
/// n = 12 here; pathological shelves with few early constraints can degrade
/// towards the nⁿ scan.
pub fn endomorphisms(sh: &Shelf) -> Vec<FiniteMap> {
    let n = sh.n();
    let mut kappa = vec![UNSET; n];
    let mut out = Vec::new();
    endo_dfs(sh.op_table(), &mut kappa, &mut out);
    out.sort_unstable();
    out.into_iter()
        .map(|img| FiniteMap::new(n, img).expect("entries forced in range"))
        .collect()
}

/// Bijective shelf endomorphisms.
pub fn automorphisms(sh: &Shelf) -> Vec<FiniteMap> {
    endomorphisms(sh)
        .into_iter()
        .filter(|f| f.is_bijective())
        .collect()
}

fn endo_dfs(op: &[Vec<usize>], kappa: &mut [usize], out: &mut Vec<Vec<usize>>) {
    let Some(d) = kappa.iter().position(|&v| v == UNSET) else {
        out.push(kappa.to_vec());
        return;
    };
    let n = op.len();
    for v in 0..n {
        let mut trail = Vec::new();
        if endo_propagate(op, kappa, d, v, &mut trail) {
            endo_dfs(op, kappa, out);
        }
        for i in trail {
            kappa[i] = UNSET;
        }
    }
}

/// Assigns `κ(i0) = v0` and chases forced values `κ(x op y) = κ(x) op κ(y)`.
/// Returns false on contradiction; `trail` collects the indices set.
fn endo_propagate(
    op: &[Vec<usize>],
    kappa: &mut [usize],
    i0: usize,
    v0: usize,
    trail: &mut Vec<usize>,
) -> bool {
    let n = op.len();
    let mut queue = vec![(i0, v0)];
    while let Some((i, v)) = queue.pop() {
        if kappa[i] != UNSET {
            if kappa[i] != v {
                return false;
            }
            continue;
        }
        kappa[i] = v;
        trail.push(i);
        for y in 0..n {
            if kappa[y] == UNSET {
                continue;
            }
            queue.push((op[i][y], op[v][kappa[y]]));
            queue.push((op[y][i], op[kappa[y]][v]));
        }
    }
    true
}

/// The bijection `T(x) = ρ_x⁻¹(x)` that anti-isomorphically relates the left
/// and the right structure rack: `T(x ▷_r y) = T(y) ◁_r T(x)`, equivalently
/// `L_x = T⁻¹ R_{T(x)} T`, with `T⁻¹(x) = λ_x⁻¹(x ▷_r x)`.
pub fn t_map(s: &Solution) -> Result<FiniteMap> {
    let f = s.flags();
    if !f.bijective || !f.non_degenerate() {
        return Err(Error::domain("T is defined for bijective non-degenerate solutions"));
    }
    let n = s.n();
    let img = (0..n)
        .map(|x| {
            s.rho_map(x)
                .inverse()
                .expect("right non-degenerate")
                .apply(x)
        })
        .collect();
    let t = FiniteMap::new(n, img)?;
    debug_assert!(t.is_bijective());
    Ok(t)
}
