//! Maximum disjoint families of equal-size cell sets: the transversal number,
//! orthogonal mates, and the quasi-transversal number on small orders.

use crate::cells::{CellBits, CellSet};
use crate::error::{Error, Result};
use crate::latin::LatinSquare;
use crate::plexes::search::{all_transversals, ensure_order, enumerate_quasi_transversals};

/// Largest order for exact transversal packing.
pub const MAX_PACKING_ORDER: usize = 8;
/// Candidate list size above which packing refuses to run.
pub const MAX_PACKING_CANDIDATES: usize = 100_000;

/// Maximum number of pairwise-disjoint sets, each of `set_size` cells, drawn
/// from `sets` over a universe of `universe` cells. Returns indices of a
/// witness family (first found in branch order among the maximum ones).
///
/// Branches on the lowest cell that is neither used nor given up: either some
/// candidate through it is taken or the cell stays uncovered.
pub fn max_disjoint_packing(
    sets: &[CellBits],
    set_size: usize,
    universe: usize,
    upper: usize,
) -> Vec<usize> {
    assert!(set_size > 0);
    let mut through: Vec<Vec<usize>> = vec![Vec::new(); universe];
    for (i, s) in sets.iter().enumerate() {
        for c in s.iter() {
            through[c].push(i);
        }
    }
    let mut p = Packer {
        sets,
        through,
        set_size,
        upper: upper.min(universe / set_size),
        chosen: Vec::new(),
        best: Vec::new(),
    };
    let live = CellBits::from_indices(0..universe);
    p.go(live);
    p.best
}

struct Packer<'a> {
    sets: &'a [CellBits],
    through: Vec<Vec<usize>>,
    set_size: usize,
    upper: usize,
    chosen: Vec<usize>,
    best: Vec<usize>,
}

impl Packer<'_> {
    fn go(&mut self, live: CellBits) -> bool {
        if self.chosen.len() > self.best.len() {
            self.best = self.chosen.clone();
            if self.best.len() >= self.upper {
                return true;
            }
        }
        if self.chosen.len() + live.len() / self.set_size <= self.best.len() {
            return false;
        }
        let Some(x) = live.first() else {
            return false;
        };
        for k in 0..self.through[x].len() {
            let i = self.through[x][k];
            let s = self.sets[i];
            if s.difference(&live).is_empty() {
                self.chosen.push(i);
                let stop = self.go(live.difference(&s));
                self.chosen.pop();
                if stop {
                    return true;
                }
            }
        }
        let mut rest = live;
        rest.remove(x);
        self.go(rest)
    }
}

/// Transversal number with a witness family of that many disjoint transversals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransversalNumber {
    pub tau: usize,
    pub family: Vec<CellSet>,
    /// Total number of transversals the packing chose from.
    pub candidates: usize,
}

pub fn max_disjoint_transversals(l: &LatinSquare) -> Result<TransversalNumber> {
    ensure_order(l, MAX_PACKING_ORDER)?;
    let n = l.order();
    let all = all_transversals(l, MAX_PACKING_CANDIDATES)?;
    let bits: Vec<CellBits> = all.iter().map(CellSet::bits).collect();
    let pick = max_disjoint_packing(&bits, n, n * n, n);
    Ok(TransversalNumber {
        tau: pick.len(),
        family: pick.iter().map(|&i| all[i].clone()).collect(),
        candidates: all.len(),
    })
}

/// Maximum number of disjoint quasi-transversals (orders up to 6).
pub fn max_disjoint_quasi_transversals(l: &LatinSquare) -> Result<(usize, Vec<CellSet>)> {
    ensure_order(l, 6)?;
    let n = l.order();
    let census = enumerate_quasi_transversals(l, MAX_PACKING_CANDIDATES)?;
    if census.truncated {
        return Err(Error::TooManyCandidates {
            count: census.count as usize,
            limit: MAX_PACKING_CANDIDATES,
        });
    }
    let bits: Vec<CellBits> = census.witnesses.iter().map(CellSet::bits).collect();
    let pick = max_disjoint_packing(&bits, n + 1, n * n, n * n);
    Ok((
        pick.len(),
        pick.iter().map(|&i| census.witnesses[i].clone()).collect(),
    ))
}

/// Orthogonal mate read off a full decomposition into disjoint transversals:
/// the mate holds `t + 1` on every cell of the `t`-th transversal.
pub fn find_orthogonal_mate(l: &LatinSquare) -> Result<Option<LatinSquare>> {
    let tn = max_disjoint_transversals(l)?;
    Ok(mate_from_decomposition(l, &tn.family))
}

pub fn mate_from_decomposition(l: &LatinSquare, family: &[CellSet]) -> Option<LatinSquare> {
    let n = l.order();
    if family.len() != n {
        return None;
    }
    let mut cells = vec![u16::MAX; n * n];
    for (t, set) in family.iter().enumerate() {
        for c in set.cells() {
            cells[c.index(n)] = t as u16;
        }
    }
    LatinSquare::from_zero_based(n, cells).ok()
}

/// The superimposed pairs `(l(i,j), m(i,j))` are pairwise distinct.
pub fn are_orthogonal(a: &LatinSquare, b: &LatinSquare) -> bool {
    let n = a.order();
    if b.order() != n {
        return false;
    }
    let mut seen = vec![false; n * n];
    (0..n)
        .all(|i| (0..n).all(|j| !std::mem::replace(&mut seen[a.get(i, j) * n + b.get(i, j)], true)))
}
