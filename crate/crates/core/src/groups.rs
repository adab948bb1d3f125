//! Multiplication tables for the groups of order at most 8, plus
//! table validation and isomorphism-type identification.
//!
//! Tables always place the identity at index 0. Identification uses the
//! multiset of element orders, which separates all groups of order ≤ 8.

use crate::error::{Error, Result};

/// A finite group given by its full multiplication table.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GroupTable {
    n: usize,
    table: Vec<Vec<usize>>,
    name: String,
}

impl GroupTable {
    /// Validates the group axioms: two-sided identity at `0`, associativity,
    /// and bijective left multiplications (which, with associativity and an
    /// identity, forces inverses).
    pub fn new(table: Vec<Vec<usize>>, name: impl Into<String>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::structure("group table must be non-empty"));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n || row.iter().any(|&v| v >= n) {
                return Err(Error::structure(format!("group table row {i} malformed")));
            }
        }
        if let Some(w) = group_axiom_witness(&table, 0) {
            return Err(Error::domain(w));
        }
        Ok(GroupTable {
            n,
            table,
            name: name.into(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        (0..self.n)
            .find(|&b| self.table[a][b] == 0)
            .expect("group axioms guarantee inverses")
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut p = a;
        let mut k = 1;
        while p != 0 {
            p = self.mul(p, a);
            k += 1;
        }
        k
    }

    /// Sorted multiset of element orders; a complete isomorphism invariant
    /// for groups of order ≤ 8.
    pub fn order_profile(&self) -> Vec<usize> {
        let mut prof: Vec<usize> = (0..self.n).map(|a| self.element_order(a)).collect();
        prof.sort_unstable();
        prof
    }
}

/// Returns a description of the first violated axiom, if any. `zero` is the
/// claimed identity element.
pub fn group_axiom_witness(table: &[Vec<usize>], zero: usize) -> Option<String> {
    let n = table.len();
    if zero >= n {
        return Some("identity index out of range".into());
    }
    for a in 0..n {
        if table[zero][a] != a || table[a][zero] != a {
            return Some(format!("element {zero} is not a two-sided identity at {a}"));
        }
    }
    for a in 0..n {
        let mut seen = vec![false; n];
        for b in 0..n {
            if seen[table[a][b]] {
                return Some(format!("left multiplication by {a} is not bijective"));
            }
            seen[table[a][b]] = true;
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if table[table[a][b]][c] != table[a][table[b][c]] {
                    return Some(format!("associativity fails at ({a}, {b}, {c})"));
                }
            }
        }
    }
    None
}

pub fn cyclic(n: usize) -> GroupTable {
    GroupTable::new(
        (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect(),
        format!("C{n}"),
    )
    .expect("cyclic table is a group")
}

pub fn direct_product(g: &GroupTable, h: &GroupTable) -> GroupTable {
    let (n1, n2) = (g.n(), h.n());
    let n = n1 * n2;
    let table = (0..n)
        .map(|x| {
            let (a1, b1) = (x / n2, x % n2);
            (0..n)
                .map(|y| {
                    let (a2, b2) = (y / n2, y % n2);
                    g.mul(a1, a2) * n2 + h.mul(b1, b2)
                })
                .collect()
        })
        .collect();
    GroupTable::new(table, format!("{}x{}", g.name(), h.name()))
        .expect("product of groups is a group")
}

/// Dihedral group of order `2m`: element `i + m·j` is the rotation `r^i`
/// when `j = 0` and the reflection `r^i s` when `j = 1`.
pub fn dihedral(m: usize) -> GroupTable {
    let n = 2 * m;
    let idx = |i: usize, j: usize| i % m + m * (j % 2);
    let table = (0..n)
        .map(|x| {
            let (i1, j1) = (x % m, x / m);
            (0..n)
                .map(|y| {
                    let (i2, j2) = (y % m, y / m);
                    // r^{i1} s^{j1} · r^{i2} s^{j2} = r^{i1 + (-1)^{j1} i2} s^{j1+j2}
                    let i = if j1 == 0 { (i1 + i2) % m } else { (i1 + m - i2) % m };
                    idx(i, j1 + j2)
                })
                .collect()
        })
        .collect();
    let name = if m == 3 { "S3".to_string() } else { format!("D{n}") };
    GroupTable::new(table, name).expect("dihedral table is a group")
}

pub fn symmetric3() -> GroupTable {
    dihedral(3)
}

pub fn klein4() -> GroupTable {
    let g = direct_product(&cyclic(2), &cyclic(2));
    GroupTable::new(g.table().to_vec(), "C2xC2").expect("klein four-group")
}

/// Quaternion group of order 8: index `2·basis + sign` over bases `1, i, j, k`.
pub fn quaternion8() -> GroupTable {
    let mul = |x: usize, y: usize| -> usize {
        let (b1, s1) = (x / 2, x % 2);
        let (b2, s2) = (y / 2, y % 2);
        if b1 == 0 {
            return 2 * b2 + (s1 ^ s2);
        }
        if b2 == 0 {
            return 2 * b1 + (s1 ^ s2);
        }
        if b1 == b2 {
            // i·i = j·j = k·k = -1
            return s1 ^ s2 ^ 1;
        }
        // i·j = k and cyclic; anti-cyclic pairs pick up a sign
        let b3 = 6 - b1 - b2;
        let cyclic_pair = matches!((b1, b2), (1, 2) | (2, 3) | (3, 1));
        2 * b3 + (s1 ^ s2 ^ if cyclic_pair { 0 } else { 1 })
    };
    let table = (0..8).map(|x| (0..8).map(|y| mul(x, y)).collect()).collect();
    GroupTable::new(table, "Q8").expect("quaternion table is a group")
}

/// All groups of order `n` up to isomorphism, for `n ≤ 8`.
pub fn groups_of_order(n: usize) -> Result<Vec<GroupTable>> {
    let groups = match n {
        1 => vec![cyclic(1)],
        2 => vec![cyclic(2)],
        3 => vec![cyclic(3)],
        4 => vec![cyclic(4), klein4()],
        5 => vec![cyclic(5)],
        6 => vec![cyclic(6), symmetric3()],
        7 => vec![cyclic(7)],
        8 => {
            let c4xc2 = {
                let g = direct_product(&cyclic(4), &cyclic(2));
                GroupTable::new(g.table().to_vec(), "C4xC2").unwrap()
            };
            let c2cube = {
                let g = direct_product(&klein4(), &cyclic(2));
                GroupTable::new(g.table().to_vec(), "C2xC2xC2").unwrap()
            };
            vec![cyclic(8), c4xc2, c2cube, dihedral(4), quaternion8()]
        }
        _ => {
            return Err(Error::resource(format!(
                "group catalog covers orders 1..=8, requested {n}"
            )))
        }
    };
    Ok(groups)
}

/// Looks up a group by catalog name, case-insensitively.
pub fn by_name(name: &str) -> Result<GroupTable> {
    let want = name.to_ascii_lowercase();
    for n in 1..=8 {
        for g in groups_of_order(n)? {
            if g.name().to_ascii_lowercase() == want {
                return Ok(g);
            }
        }
    }
    Err(Error::domain(format!("unknown group name {name:?}")))
}

/// Isomorphism type of an arbitrary order ≤ 8 group table, by order profile.
pub fn identify(table: &[Vec<usize>], zero: usize) -> Result<String> {
    if let Some(w) = group_axiom_witness(table, zero) {
        return Err(Error::domain(w));
    }
    let n = table.len();
    let probe = GroupTable {
        n,
        table: table.to_vec(),
        name: String::new(),
    };
    let prof = relabeled_profile(&probe, zero);
    for g in groups_of_order(n)? {
        if g.order_profile() == prof {
            return Ok(g.name().to_string());
        }
    }
    Err(Error::domain(format!("no group of order {n} matches the table")))
}

// Order profile computed against an arbitrary identity position.
fn relabeled_profile(g: &GroupTable, zero: usize) -> Vec<usize> {
    let mut prof: Vec<usize> = (0..g.n)
        .map(|a| {
            let mut p = a;
            let mut k = 1;
            while p != zero {
                p = g.table[p][a];
                k += 1;
            }
            k
        })
        .collect();
    prof.sort_unstable();
    prof
}
