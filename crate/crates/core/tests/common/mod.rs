//! Shared corpus and brute-force oracles for the integration tests.
#![allow(dead_code)]

use latin_plex::{Cell, LatinSquare};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Generated squares up to `max` plus seeded random isotopes and random
/// squares filled by backtracking.
pub fn corpus(max: usize) -> Vec<(String, LatinSquare)> {
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in 1..=max {
        out.push((format!("cyclic:{n}"), LatinSquare::cyclic(n)));
        for m in 2..n {
            if n % m == 0 && n / m >= 2 {
                out.push((format!("qstep:{m},{}", n / m), LatinSquare::qstep(m, n / m)));
            }
        }
        if n >= 4 && n.is_power_of_two() {
            let k = n.trailing_zeros();
            out.push((
                format!("twostep:{k}"),
                LatinSquare::two_step_pow2(k).unwrap(),
            ));
        }
        if n >= 3 {
            for i in 0..2 {
                let iso = LatinSquare::cyclic(n).random_isotope(&mut rng);
                out.push((format!("isotope{i}:{n}"), iso));
                out.push((format!("random{i}:{n}"), random_square(n, &mut rng)));
            }
        }
    }
    out
}

/// A random Latin square by randomized backtracking, row by row.
pub fn random_square(n: usize, rng: &mut impl Rng) -> LatinSquare {
    fn fill(g: &mut Vec<Vec<usize>>, pos: usize, n: usize, rng: &mut dyn rand::RngCore) -> bool {
        if pos == n * n {
            return true;
        }
        let (r, c) = (pos / n, pos % n);
        let mut syms: Vec<usize> = (1..=n).collect();
        syms.shuffle(rng);
        for s in syms {
            if (0..c).any(|j| g[r][j] == s) || (0..r).any(|i| g[i][c] == s) {
                continue;
            }
            g[r][c] = s;
            if fill(g, pos + 1, n, rng) {
                return true;
            }
        }
        g[r][c] = 0;
        false
    }
    let mut g = vec![vec![0; n]; n];
    assert!(fill(&mut g, 0, n, rng));
    LatinSquare::validate(&g).unwrap()
}

/// Calls `f` with every permutation of `0..n` (Heap's algorithm).
pub fn each_permutation(n: usize, mut f: impl FnMut(&[usize])) {
    let mut p: Vec<usize> = (0..n).collect();
    let mut c = vec![0; n];
    f(&p);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                p.swap(0, i);
            } else {
                p.swap(c[i], i);
            }
            f(&p);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// Transversal count as the number of permutation diagonals with distinct symbols.
pub fn brute_transversals(l: &LatinSquare) -> u64 {
    let n = l.order();
    let mut count = 0;
    each_permutation(n, |p| {
        let mut seen = vec![false; n];
        if p.iter()
            .enumerate()
            .all(|(r, &c)| !std::mem::replace(&mut seen[l.get(r, c)], true))
        {
            count += 1;
        }
    });
    count
}

/// Neighbors of `v` in `set`, straight from the adjacency rule.
pub fn brute_dominators(l: &LatinSquare, set: &[Cell], v: Cell) -> usize {
    set.iter()
        .filter(|&&u| {
            u != v
                && (u.row == v.row || u.col == v.col || l.get(u.row, u.col) == l.get(v.row, v.col))
        })
        .count()
}

pub fn brute_k_dominating(l: &LatinSquare, set: &[Cell], k: usize) -> bool {
    let n = l.order();
    (0..n)
        .flat_map(|r| (0..n).map(move |c| Cell::new(r, c)))
        .filter(|v| !set.contains(v))
        .all(|v| brute_dominators(l, set, v) >= k)
}

pub fn all_cells(n: usize) -> Vec<Cell> {
    (0..n)
        .flat_map(|r| (0..n).map(move |c| Cell::new(r, c)))
        .collect()
}

/// `size` distinct random cells.
pub fn random_cells(n: usize, size: usize, rng: &mut impl Rng) -> Vec<Cell> {
    let mut all = all_cells(n);
    all.shuffle(rng);
    all.truncate(size);
    all
}
