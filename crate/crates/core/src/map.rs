//! Total functions on the finite carrier `{0..n-1}`.
//!
//! [`FiniteMap`] is the universal currency of the crate: reflections,
//! the component maps λ_x and ρ_x of a solution, shelf multiplications,
//! endomorphisms and group elements are all values of this one type.
//! [`PairMap`] encodes a function on the square `X × X` (row-major pair
//! index `x·n + y`) and is used to manipulate a solution `r` as a single
//! map for composition and inversion.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A total function `{0..n-1} -> {0..n-1}`, stored by its image vector.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FiniteMap {
    n: usize,
    img: Vec<usize>,
}

impl FiniteMap {
    /// Builds a map from its image vector, validating that every entry
    /// lies in `{0..n-1}` and that the vector has length `n`.
    pub fn new(n: usize, img: Vec<usize>) -> Result<Self> {
        if n == 0 {
            return Err(Error::structure("carrier size must be positive"));
        }
        if img.len() != n {
            return Err(Error::structure(format!(
                "image vector has length {}, expected {n}",
                img.len()
            )));
        }
        if let Some((x, &v)) = img.iter().enumerate().find(|(_, &v)| v >= n) {
            return Err(Error::structure(format!(
                "entry img[{x}] = {v} out of range for carrier of size {n}"
            )));
        }
        Ok(FiniteMap { n, img })
    }

    pub fn identity(n: usize) -> Self {
        FiniteMap {
            n,
            img: (0..n).collect(),
        }
    }

    pub fn constant(n: usize, c: usize) -> Result<Self> {
        FiniteMap::new(n, vec![c; n])
    }

    /// Builds the permutation given by a list of cycles, e.g. `&[vec![0, 1, 2]]`
    /// for the 3-cycle `(0 1 2)`. Unmentioned points are fixed.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut img: Vec<usize> = (0..n).collect();
        for cyc in cycles {
            for (i, &x) in cyc.iter().enumerate() {
                if x >= n {
                    return Err(Error::structure(format!("cycle point {x} out of range")));
                }
                img[x] = cyc[(i + 1) % cyc.len()];
            }
        }
        let map = FiniteMap { n, img };
        if !map.is_bijective() {
            return Err(Error::structure("cycles overlap: result is not a permutation"));
        }
        Ok(map)
    }

    /// Parses the paper-style 1-based image string, e.g. `"113"` for the map
    /// sending 1↦1, 2↦1, 3↦3 on three points (stored 0-based).
    /// Only usable for carriers of size at most 9.
    pub fn from_one_based_str(s: &str) -> Result<Self> {
        let digits: Vec<usize> = s
            .chars()
            .map(|c| {
                c.to_digit(10)
                    .map(|d| d as usize)
                    .ok_or_else(|| Error::structure(format!("invalid digit {c:?} in map string")))
            })
            .collect::<Result<_>>()?;
        let n = digits.len();
        if n == 0 || n > 9 {
            return Err(Error::structure(
                "one-based map strings cover carriers of size 1..=9",
            ));
        }
        let img = digits
            .into_iter()
            .map(|d| {
                if d == 0 || d > n {
                    Err(Error::structure(format!("value {d} out of range 1..={n}")))
                } else {
                    Ok(d - 1)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        FiniteMap::new(n, img)
    }

    /// The 1-based display string used throughout for small carriers:
    /// `κ(1)κ(2)…κ(n)` when n ≤ 9, otherwise a comma-separated list.
    pub fn to_one_based_string(&self) -> String {
        if self.n <= 9 {
            self.img.iter().map(|v| (v + 1).to_string()).collect()
        } else {
            self.img
                .iter()
                .map(|v| (v + 1).to_string())
                .collect::<Vec<_>>()
                .join(",")
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn img(&self) -> &[usize] {
        &self.img
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.img[x]
    }

    pub fn is_identity(&self) -> bool {
        self.img.iter().enumerate().all(|(x, &v)| x == v)
    }

    pub fn is_bijective(&self) -> bool {
        let mut seen = vec![false; self.n];
        for &v in &self.img {
            if seen[v] {
                return false;
            }
            seen[v] = true;
        }
        true
    }

    /// κ² = id.
    pub fn is_involutive(&self) -> bool {
        (0..self.n).all(|x| self.img[self.img[x]] == x)
    }

    /// κ² = κ.
    pub fn is_idempotent(&self) -> bool {
        (0..self.n).all(|x| self.img[self.img[x]] == self.img[x])
    }

    /// Function composition `(self ∘ g)(x) = self(g(x))`.
    pub fn compose(&self, g: &FiniteMap) -> FiniteMap {
        assert_eq!(self.n, g.n, "composing maps on different carriers");
        FiniteMap {
            n: self.n,
            img: g.img.iter().map(|&v| self.img[v]).collect(),
        }
    }

    /// Two-sided inverse, if the map is a permutation.
    pub fn inverse(&self) -> Option<FiniteMap> {
        let mut inv = vec![usize::MAX; self.n];
        for (x, &v) in self.img.iter().enumerate() {
            if inv[v] != usize::MAX {
                return None;
            }
            inv[v] = x;
        }
        Some(FiniteMap { n: self.n, img: inv })
    }

    pub fn commutes_with(&self, other: &FiniteMap) -> bool {
        assert_eq!(self.n, other.n);
        (0..self.n).all(|x| self.img[other.img[x]] == other.img[self.img[x]])
    }

    /// Iterator over all `n^n` maps on `n` points, in lexicographic image order.
    pub fn all_maps(n: usize) -> AllMaps {
        AllMaps {
            n,
            next: Some(vec![0; n]),
        }
    }

    /// Iterator over all `n!` permutations of `n` points, in lexicographic order.
    pub fn all_permutations(n: usize) -> impl Iterator<Item = FiniteMap> {
        let mut perms = Vec::new();
        let mut cur: Vec<usize> = (0..n).collect();
        loop {
            perms.push(FiniteMap { n, img: cur.clone() });
            if !next_permutation(&mut cur) {
                break;
            }
        }
        perms.into_iter()
    }
}

impl fmt::Debug for FiniteMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteMap({})", self.to_one_based_string())
    }
}

impl fmt::Display for FiniteMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_one_based_string())
    }
}

/// Odometer over image vectors; yields every map on `n` points.
pub struct AllMaps {
    n: usize,
    next: Option<Vec<usize>>,
}

impl Iterator for AllMaps {
    type Item = FiniteMap;

    fn next(&mut self) -> Option<FiniteMap> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        let mut i = self.n;
        loop {
            if i == 0 {
                self.next = None;
                break;
            }
            i -= 1;
            if succ[i] + 1 < self.n {
                succ[i] += 1;
                succ[i + 1..].fill(0);
                self.next = Some(succ);
                break;
            }
        }
        Some(FiniteMap { n: self.n, img: cur })
    }
}

fn next_permutation(arr: &mut [usize]) -> bool {
    if arr.len() < 2 {
        return false;
    }
    let mut i = arr.len() - 1;
    while i > 0 && arr[i - 1] >= arr[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = arr.len() - 1;
    while arr[j] <= arr[i - 1] {
        j -= 1;
    }
    arr.swap(i - 1, j);
    arr[i..].reverse();
    true
}

/// A function on ordered pairs, `table[x·n + y]` holding the pair index of
/// the image of `(x, y)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PairMap {
    n: usize,
    table: Vec<usize>,
}

impl PairMap {
    pub fn new(n: usize, table: Vec<usize>) -> Result<Self> {
        if table.len() != n * n {
            return Err(Error::structure(format!(
                "pair table has {} entries, expected {}",
                table.len(),
                n * n
            )));
        }
        if table.iter().any(|&v| v >= n * n) {
            return Err(Error::structure("pair table entry out of range"));
        }
        Ok(PairMap { n, table })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    #[inline]
    pub fn apply(&self, x: usize, y: usize) -> (usize, usize) {
        let v = self.table[x * self.n + y];
        (v / self.n, v % self.n)
    }

    pub fn is_identity(&self) -> bool {
        self.table.iter().enumerate().all(|(p, &v)| p == v)
    }

    pub fn is_bijective(&self) -> bool {
        let mut seen = vec![false; self.table.len()];
        for &v in &self.table {
            if seen[v] {
                return false;
            }
            seen[v] = true;
        }
        true
    }

    pub fn compose(&self, g: &PairMap) -> PairMap {
        assert_eq!(self.n, g.n);
        PairMap {
            n: self.n,
            table: g.table.iter().map(|&v| self.table[v]).collect(),
        }
    }

    pub fn inverse(&self) -> Option<PairMap> {
        let mut inv = vec![usize::MAX; self.table.len()];
        for (p, &v) in self.table.iter().enumerate() {
            if inv[v] != usize::MAX {
                return None;
            }
            inv[v] = p;
        }
        Some(PairMap { n: self.n, table: inv })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_based_round_trip() {
        let k = FiniteMap::from_one_based_str("113").unwrap();
        assert_eq!(k.img(), &[0, 0, 2]);
        assert_eq!(k.to_one_based_string(), "113");
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(FiniteMap::new(3, vec![0, 1, 3]).is_err());
        assert!(FiniteMap::new(3, vec![0, 1]).is_err());
        assert!(FiniteMap::from_one_based_str("140").is_err());
    }

    #[test]
    fn compose_and_inverse() {
        let f = FiniteMap::from_cycles(3, &[vec![0, 1, 2]]).unwrap();
        let g = f.inverse().unwrap();
        assert!(f.compose(&g).is_identity());
        assert!(g.compose(&f).is_identity());
        // compose(f, g).img[x] = f.img[g.img[x]]
        let h = FiniteMap::new(3, vec![2, 2, 0]).unwrap();
        let fh = f.compose(&h);
        for x in 0..3 {
            assert_eq!(fh.apply(x), f.apply(h.apply(x)));
        }
        assert!(h.inverse().is_none());
    }

    #[test]
    fn map_predicates() {
        let id = FiniteMap::identity(4);
        assert!(id.is_bijective() && id.is_involutive() && id.is_idempotent());
        let swap = FiniteMap::from_cycles(4, &[vec![0, 1]]).unwrap();
        assert!(swap.is_involutive() && !swap.is_idempotent());
        let proj = FiniteMap::new(4, vec![0, 0, 2, 2]).unwrap();
        assert!(proj.is_idempotent() && !proj.is_bijective());
    }

    #[test]
    fn all_maps_count() {
        assert_eq!(FiniteMap::all_maps(3).count(), 27);
        assert_eq!(FiniteMap::all_permutations(4).count(), 24);
        let maps: Vec<_> = FiniteMap::all_maps(2).collect();
        assert_eq!(maps[0].img(), &[0, 0]);
        assert_eq!(maps[3].img(), &[1, 1]);
    }

    #[test]
    fn pair_map_inverse() {
        let flip = PairMap::new(2, vec![0, 2, 1, 3]).unwrap();
        assert!(flip.compose(&flip).is_identity());
        assert_eq!(flip.inverse().unwrap(), flip);
    }
}
