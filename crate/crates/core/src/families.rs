//! A library of named solutions used across examples and tests: the
//! permutation-pair (Lyubashenko) solutions, the projection and constant
//! idempotent solutions, the three-point involutive solution with component
//! maps `(id, id, (1 2))`, and the eight-point bijective non-degenerate
//! solution whose reflections realize all four classification patterns.

use crate::error::{Error, Result};
use crate::map::FiniteMap;
use crate::solution::Solution;

/// `r(x, y) = (f(y), g(x))` for commuting bijections `f, g`.
pub fn lyubashenko(f: &FiniteMap, g: &FiniteMap) -> Result<Solution> {
    if f.n() != g.n() {
        return Err(Error::structure("f and g act on different carriers"));
    }
    if !f.is_bijective() || !g.is_bijective() {
        return Err(Error::domain("f and g must be bijections"));
    }
    if !f.commutes_with(g) {
        return Err(Error::domain("f and g must commute"));
    }
    let n = f.n();
    Solution::new(
        (0..n).map(|_| f.img().to_vec()).collect(),
        (0..n).map(|_| g.img().to_vec()).collect(),
    )
}

/// Builds the involutive solution with the given λ-family via
/// `ρ_y(x) = λ⁻¹_{λ_x(y)}(x)`. The family must actually produce a solution;
/// the constructor verifies it.
pub fn involutive_from_lambda(lams: &[FiniteMap]) -> Result<Solution> {
    let n = lams.len();
    let mut lam = Vec::with_capacity(n);
    let mut lam_inv = Vec::with_capacity(n);
    for f in lams {
        if f.n() != n {
            return Err(Error::structure("lambda family size mismatch"));
        }
        lam_inv.push(
            f.inverse()
                .ok_or_else(|| Error::domain("lambda maps must be bijections"))?,
        );
        lam.push(f.img().to_vec());
    }
    let mut rho = vec![vec![0; n]; n];
    for y in 0..n {
        for x in 0..n {
            rho[y][x] = lam_inv[lam[x][y]].apply(x);
        }
    }
    let s = Solution::new(lam, rho)?;
    if !s.flags().involutive {
        return Err(Error::domain("lambda family does not yield an involutive solution"));
    }
    Ok(s)
}

/// The three-point involutive non-degenerate solution with λ-maps
/// `(id, id, (1 2))` (1-based); it has exactly five reflections.
pub fn example_1_3() -> Solution {
    let id = FiniteMap::identity(3);
    let swap = FiniteMap::from_cycles(3, &[vec![0, 1]]).expect("transposition");
    involutive_from_lambda(&[id.clone(), id, swap]).expect("known solution")
}

/// Idempotent left non-degenerate `r(x, y) = (y, y)`.
pub fn left_projection(n: usize) -> Solution {
    let lam = (0..n).map(|_| (0..n).collect()).collect();
    let rho = (0..n).map(|y| vec![y; n]).collect();
    Solution::new_unchecked(lam, rho)
}

/// Idempotent right non-degenerate `r(x, y) = (x, x)`.
pub fn right_projection(n: usize) -> Solution {
    let lam = (0..n).map(|x| vec![x; n]).collect();
    let rho = (0..n).map(|_| (0..n).collect()).collect();
    Solution::new_unchecked(lam, rho)
}

/// Idempotent `r(x, y) = (c, c)`.
pub fn constant_solution(n: usize, c: usize) -> Result<Solution> {
    if c >= n {
        return Err(Error::structure("constant out of range"));
    }
    Solution::new(vec![vec![c; n]; n], vec![vec![c; n]; n])
}

/// The eight-point bijective non-degenerate solution with
///
/// ```text
/// λ_1 = λ_2 = λ_7 = λ_8 = id,          λ_3 = λ_4 = λ_5 = λ_6 = (35)(46)(78),
/// ρ_1 = ρ_2 = id,   ρ_3 = ρ_4 = (3645),   ρ_5 = ρ_6 = (3546),   ρ_7 = ρ_8 = (34)(56)
/// ```
///
/// (1-based cycles). It admits 128 reflections.
pub fn order8_example() -> Solution {
    let n = 8;
    let id = FiniteMap::identity(n);
    let p = FiniteMap::from_cycles(n, &[vec![2, 4], vec![3, 5], vec![6, 7]]).unwrap();
    let c1 = FiniteMap::from_cycles(n, &[vec![2, 5, 3, 4]]).unwrap();
    let c2 = FiniteMap::from_cycles(n, &[vec![2, 4, 3, 5]]).unwrap();
    let e = FiniteMap::from_cycles(n, &[vec![2, 3], vec![4, 5]]).unwrap();
    let lam_rows = [&id, &id, &p, &p, &p, &p, &id, &id];
    let rho_rows = [&id, &id, &c1, &c1, &c2, &c2, &e, &e];
    Solution::new(
        lam_rows.iter().map(|f| f.img().to_vec()).collect(),
        rho_rows.iter().map(|f| f.img().to_vec()).collect(),
    )
    .expect("known solution")
}
