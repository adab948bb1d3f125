//! Permutation groups as explicit element sets, built by closure from
//! generators. Groups arising here (multiplication groups of racks,
//! automorphism groups of small shelves) have at most `n! ≤ 40320`
//! elements, so breadth-first closure is entirely adequate.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::map::FiniteMap;
use crate::shelf::Shelf;

/// A group of permutations of `{0..n-1}`, stored element-wise.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PermGroup {
    n: usize,
    generators: Vec<FiniteMap>,
    elements: Vec<FiniteMap>,
}

impl PermGroup {
    /// Closure of the generators under composition. Every generator must be
    /// a bijection; the identity is always included.
    pub fn generate(n: usize, generators: Vec<FiniteMap>) -> Result<Self> {
        for g in &generators {
            if g.n() != n {
                return Err(Error::structure("generator on wrong carrier"));
            }
            if !g.is_bijective() {
                return Err(Error::domain(format!("generator {g} is not a bijection")));
            }
        }
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        seen.insert(FiniteMap::identity(n).img().to_vec());
        let mut frontier: Vec<FiniteMap> = vec![FiniteMap::identity(n)];
        while let Some(cur) = frontier.pop() {
            for g in &generators {
                let next = g.compose(&cur);
                if seen.insert(next.img().to_vec()) {
                    frontier.push(next);
                }
            }
        }
        let elements = seen
            .into_iter()
            .map(|img| FiniteMap::new(n, img).expect("closure of bijections"))
            .collect();
        Ok(PermGroup {
            n,
            generators,
            elements,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Elements in lexicographic image order.
    pub fn elements(&self) -> &[FiniteMap] {
        &self.elements
    }

    pub fn generators(&self) -> &[FiniteMap] {
        &self.generators
    }

    pub fn contains(&self, f: &FiniteMap) -> bool {
        self.elements.binary_search(f).is_ok()
    }

    /// Elements commuting with the whole group (equivalently, with every
    /// generator).
    pub fn center(&self) -> Vec<FiniteMap> {
        centralizer(&self.elements, self)
    }

    pub fn is_abelian(&self) -> bool {
        self.generators
            .iter()
            .all(|g| self.generators.iter().all(|h| g.commutes_with(h)))
    }
}

/// `LMlt(X, ▷) = ⟨L_x⟩` for a left rack, `RMlt(X, ◁) = ⟨R_x⟩` for a right one.
pub fn multiplication_group(sh: &Shelf) -> Result<PermGroup> {
    if !sh.is_rack() {
        return Err(Error::domain(
            "multiplication group requires a rack (bijective multiplications)",
        ));
    }
    let gens = (0..sh.n()).map(|x| sh.multiplication(x)).collect();
    PermGroup::generate(sh.n(), gens)
}

/// The members of `maps` commuting with every generator of `group` (hence
/// with every element).
pub fn centralizer(maps: &[FiniteMap], group: &PermGroup) -> Vec<FiniteMap> {
    maps.iter()
        .filter(|f| group.generators().iter().all(|g| f.commutes_with(g)))
        .cloned()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shelf::Shelf;

    #[test]
    fn trivial_rack_group_is_trivial() {
        let g = multiplication_group(&Shelf::trivial_rack(4)).unwrap();
        assert_eq!(g.order(), 1);
    }

    #[test]
    fn cyclic_rack_group_is_cyclic() {
        for n in 1..=6 {
            let g = multiplication_group(&Shelf::cyclic_rack(n)).unwrap();
            assert_eq!(g.order(), n);
            assert!(g.is_abelian());
        }
    }

    #[test]
    fn dihedral3_group_is_sym3() {
        // closure of {j ↦ 2i - j} on three points is all of Sym_3
        let g = multiplication_group(&Shelf::dihedral_quandle(3)).unwrap();
        assert_eq!(g.order(), 6);
    }

    #[test]
    fn closure_invariants() {
        let g = multiplication_group(&Shelf::dihedral_quandle(4)).unwrap();
        for a in g.elements() {
            assert!(g.contains(&a.inverse().unwrap()));
            for b in g.elements() {
                assert!(g.contains(&a.compose(b)));
            }
        }
    }

    #[test]
    fn non_rack_rejected() {
        let sh = Shelf::constant_shelf(3, 0).unwrap();
        assert!(multiplication_group(&sh).is_err());
    }

    #[test]
    fn centralizer_of_everything_in_trivial_group() {
        let triv = PermGroup::generate(3, vec![]).unwrap();
        let all: Vec<_> = FiniteMap::all_maps(3).collect();
        assert_eq!(centralizer(&all, &triv).len(), 27);
    }
}
