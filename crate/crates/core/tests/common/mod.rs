//! Shared corpus machinery for the integration suites: exhaustive small
//! shelves and racks, commuting permutation pairs, and a deduplicated
//! collection of valid solutions on at most four points drawn from every
//! family plus seeded random relabelings.

use std::collections::HashSet;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use ybre::brace::{enumerate_skew_braces, SkewBrace};
use ybre::construct::{matched_product, twisted_union, MatchedSystem, TwistedSystem};
use ybre::families;
use ybre::groups;
use ybre::map::FiniteMap;
use ybre::shelf::Shelf;
use ybre::solution::Solution;
use ybre::Side;

/// Every left shelf on `n` points (full table scan; keep `n ≤ 3`).
pub fn all_left_shelves(n: usize) -> Vec<Shelf> {
    let mut out = Vec::new();
    let mut table = vec![0usize; n * n];
    loop {
        let op: Vec<Vec<usize>> = (0..n).map(|x| table[x * n..(x + 1) * n].to_vec()).collect();
        if let Ok(sh) = Shelf::new(Side::Left, op) {
            out.push(sh);
        }
        let mut i = n * n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if table[i] + 1 < n {
                table[i] += 1;
                table[i + 1..].fill(0);
                break;
            }
        }
    }
}

/// Every left rack on `n` points: rows range over permutations, filtered by
/// self-distributivity (keep `n ≤ 4`).
pub fn all_left_racks(n: usize) -> Vec<Shelf> {
    let perms: Vec<Vec<usize>> = FiniteMap::all_permutations(n)
        .map(|p| p.img().to_vec())
        .collect();
    let mut out = Vec::new();
    let mut pick = vec![0usize; n];
    loop {
        let op: Vec<Vec<usize>> = pick.iter().map(|&i| perms[i].clone()).collect();
        if let Ok(sh) = Shelf::new(Side::Left, op) {
            if sh.is_rack() {
                out.push(sh);
            }
        }
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if pick[i] + 1 < perms.len() {
                pick[i] += 1;
                pick[i + 1..].fill(0);
                break;
            }
        }
    }
}

/// All ordered pairs of commuting permutations of `n` points.
pub fn commuting_pairs(n: usize) -> Vec<(FiniteMap, FiniteMap)> {
    let perms: Vec<FiniteMap> = FiniteMap::all_permutations(n).collect();
    let mut out = Vec::new();
    for f in &perms {
        for g in &perms {
            if f.commutes_with(g) {
                out.push((f.clone(), g.clone()));
            }
        }
    }
    out
}

/// Relabels a solution along a bijection; the result is an equivalent (hence
/// valid) solution with different tables.
pub fn relabel(s: &Solution, sigma: &FiniteMap) -> Solution {
    let n = s.n();
    let inv = sigma.inverse().expect("relabeling needs a bijection");
    let mut lam = vec![vec![0; n]; n];
    let mut rho = vec![vec![0; n]; n];
    for x in 0..n {
        for y in 0..n {
            let (l, r) = s.r(inv.apply(x), inv.apply(y));
            lam[x][y] = sigma.apply(l);
            rho[y][x] = sigma.apply(r);
        }
    }
    Solution::new(lam, rho).expect("relabeling preserves the YBE")
}

fn push(seen: &mut HashSet<(Vec<Vec<usize>>, Vec<Vec<usize>>)>, out: &mut Vec<Solution>, s: Solution) {
    if seen.insert((s.lam_table().to_vec(), s.rho_table().to_vec())) {
        out.push(s);
    }
}

/// The fixed corpus driving the oracle-equivalence and theorem suites:
/// all families on at most `4` points, derived solutions of every shelf of
/// size ≤ 3 and every rack of size 4, brace solutions of orders 2–4, a few
/// product/union constructions, and seeded random relabelings.
pub fn solution_corpus(seed: u64) -> Vec<Solution> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let push = &mut |out: &mut Vec<Solution>, seen: &mut HashSet<_>, s: Solution| {
        if seen.insert((s.lam_table().to_vec(), s.rho_table().to_vec())) {
            out.push(s);
        }
    };

    for n in 1..=4 {
        push(&mut out, &mut seen, Solution::flip(n));
        push(&mut out, &mut seen, Solution::identity(n));
        push(&mut out, &mut seen, families::left_projection(n));
        push(&mut out, &mut seen, families::right_projection(n));
        for c in 0..n {
            push(&mut out, &mut seen, families::constant_solution(n, c).unwrap());
        }
    }
    push(&mut out, &mut seen, families::example_1_3());

    // permutation-pair solutions from every commuting pair
    for n in 2..=4 {
        for (f, g) in commuting_pairs(n) {
            push(&mut out, &mut seen, families::lyubashenko(&f, &g).unwrap());
        }
    }

    // derived solutions of all small shelves and racks, both handednesses
    for n in 1..=3 {
        for sh in all_left_shelves(n) {
            push(&mut out, &mut seen, sh.to_solution().unwrap());
            push(&mut out, &mut seen, sh.opposite().to_solution().unwrap());
        }
    }
    for sh in all_left_racks(4) {
        push(&mut out, &mut seen, sh.to_solution().unwrap());
        push(&mut out, &mut seen, sh.opposite().to_solution().unwrap());
    }

    // brace solutions of small orders
    for n in 2..=4 {
        for e in enumerate_skew_braces(n).unwrap() {
            push(&mut out, &mut seen, e.brace.solution().unwrap());
        }
    }
    push(
        &mut out,
        &mut seen,
        SkewBrace::almost_trivial(&groups::klein4()).solution().unwrap(),
    );

    // a matched product and a twisted union on four points
    let ids = |n: usize, k: usize| (0..k).map(|_| FiniteMap::identity(n)).collect::<Vec<_>>();
    let m = MatchedSystem::new(Solution::flip(2), Solution::flip(2), ids(2, 2), ids(2, 2)).unwrap();
    push(&mut out, &mut seen, matched_product(&m).unwrap());
    let swap = FiniteMap::from_cycles(2, &[vec![0, 1]]).unwrap();
    let tw = TwistedSystem::new(
        Solution::flip(2),
        Solution::flip(2),
        swap.clone(),
        swap.clone(),
        FiniteMap::identity(2),
        FiniteMap::identity(2),
    )
    .unwrap();
    push(&mut out, &mut seen, twisted_union(&tw).unwrap());

    // seeded random relabelings for fresh table layouts
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = out.len();
    for _ in 0..48 {
        let s = &out[rng.gen_range(0..base)];
        let n = s.n();
        let mut img: Vec<usize> = (0..n).collect();
        img.shuffle(&mut rng);
        let sigma = FiniteMap::new(n, img).unwrap();
        let t = relabel(s, &sigma);
        push(&mut out, &mut seen, t);
    }
    out
}

/// Solutions on five points for the randomized end of the theorem suites.
pub fn five_point_solutions(seed: u64) -> Vec<Solution> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut add = |s: Solution, out: &mut Vec<Solution>, seen: &mut HashSet<_>| {
        if seen.insert((s.lam_table().to_vec(), s.rho_table().to_vec())) {
            out.push(s);
        }
    };
    add(Solution::flip(5), &mut out, &mut seen);
    add(families::left_projection(5), &mut out, &mut seen);
    add(families::right_projection(5), &mut out, &mut seen);
    add(
        Shelf::dihedral_quandle(5).to_solution().unwrap(),
        &mut out,
        &mut seen,
    );
    add(
        Shelf::right_dihedral_quandle(5).to_solution().unwrap(),
        &mut out,
        &mut seen,
    );
    add(Shelf::cyclic_rack(5).to_solution().unwrap(), &mut out, &mut seen);
    for e in enumerate_skew_braces(5).unwrap() {
        add(e.brace.solution().unwrap(), &mut out, &mut seen);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let perms: Vec<FiniteMap> = FiniteMap::all_permutations(5).collect();
    // commuting pairs sampled as (f, f^k)
    for _ in 0..10 {
        let f = perms[rng.gen_range(0..perms.len())].clone();
        let mut g = FiniteMap::identity(5);
        for _ in 0..rng.gen_range(0..5) {
            g = g.compose(&f);
        }
        add(families::lyubashenko(&f, &g).unwrap(), &mut out, &mut seen);
    }
    for sh in [Shelf::cyclic_rack(5), Shelf::dihedral_quandle(5)] {
        for _ in 0..4 {
            let mut img: Vec<usize> = (0..5).collect();
            img.shuffle(&mut rng);
            let sigma = FiniteMap::new(5, img).unwrap();
            let s = relabel(&sh.to_solution().unwrap(), &sigma);
            add(s, &mut out, &mut seen);
        }
    }
    out
}

/// Random maps on `n` points.
pub fn random_maps(n: usize, count: usize, rng: &mut ChaCha8Rng) -> Vec<FiniteMap> {
    (0..count)
        .map(|_| {
            let img = (0..n).map(|_| rng.gen_range(0..n)).collect();
            FiniteMap::new(n, img).unwrap()
        })
        .collect()
}
