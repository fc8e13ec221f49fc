//! Exhaustive and randomized search engines.
//!
//! All exhaustive engines branch row by row in increasing column order, so
//! witnesses come out in lexicographic order of their sorted cell lists. The
//! parallel variants split on the first-row choices and merge in that order.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cells::{Cell, CellSet, PlexKind};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::latin::{LatinSquare, MAX_EXHAUSTIVE_ORDER};

/// Largest order the exhaustive k-plex, near- and quasi-transversal finders accept.
pub const MAX_FIND_ORDER: usize = 12;

/// Result of an exhaustive count, with up to `cap` witnesses in emission order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlexCensus {
    #[serde(serialize_with = "kind_name")]
    pub kind: PlexKind,
    pub order: usize,
    pub count: u64,
    pub truncated: bool,
    pub witnesses: Vec<CellSet>,
}

fn kind_name<S: serde::Serializer>(k: &PlexKind, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(k.name())
}

/// Outcome of a budgeted randomized search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Heuristic<T> {
    Found(T),
    Inconclusive,
}

pub(crate) fn ensure_order(l: &LatinSquare, max: usize) -> Result<()> {
    if l.order() > max {
        Err(Error::OrderTooLarge {
            order: l.order(),
            max,
        })
    } else {
        Ok(())
    }
}

fn symbols_u8(l: &LatinSquare) -> Vec<u8> {
    let n = l.order();
    (0..n * n).map(|i| l.get(i / n, i % n) as u8).collect()
}

fn to_cellset(n: usize, kind: PlexKind, cells: Vec<Cell>) -> CellSet {
    CellSet::new(n, kind, cells).expect("search engines emit well-formed cell sets")
}

// ---------------------------------------------------------------------------
// Transversals

struct TransversalEnum<'a> {
    n: usize,
    sym: &'a [u8],
    /// Preset column per row, for completion of partial transversals.
    fixed: &'a [Option<u8>],
    path: Vec<u8>,
    count: u64,
    cap: usize,
    stop_after: Option<u64>,
    found: Vec<Vec<u8>>,
}

impl TransversalEnum<'_> {
    fn done(&self) -> bool {
        self.stop_after.is_some_and(|s| self.count >= s)
    }

    fn go(&mut self, row: usize, cols: u32, syms: u32) {
        if row == self.n {
            self.count += 1;
            if self.found.len() < self.cap {
                self.found.push(self.path.clone());
            }
            return;
        }
        let base = row * self.n;
        if let Some(c) = self.fixed[row] {
            self.path.push(c);
            self.go(row + 1, cols, syms);
            self.path.pop();
            return;
        }
        let mut m = cols;
        while m != 0 {
            let c = m.trailing_zeros();
            m &= m - 1;
            let s = self.sym[base + c as usize];
            if syms >> s & 1 == 1 {
                self.path.push(c as u8);
                self.go(row + 1, cols & !(1 << c), syms & !(1 << s));
                self.path.pop();
                if self.done() {
                    return;
                }
            }
        }
    }
}

fn transversal_cells(path: &[u8]) -> Vec<Cell> {
    path.iter()
        .enumerate()
        .map(|(r, &c)| Cell::new(r, c as usize))
        .collect()
}

/// Counts every transversal and keeps the first `cap` in lexicographic order.
pub fn enumerate_transversals(l: &LatinSquare, cap: usize) -> Result<PlexCensus> {
    enumerate_transversals_with(l, cap, Exec::default())
}

pub fn enumerate_transversals_with(l: &LatinSquare, cap: usize, exec: Exec) -> Result<PlexCensus> {
    ensure_order(l, MAX_EXHAUSTIVE_ORDER)?;
    let n = l.order();
    let sym = symbols_u8(l);
    let fixed = vec![None; n];
    let full = ((1u64 << n) - 1) as u32;
    let branches: Vec<usize> = (0..n).collect();
    let parts = exec.map(&branches, |&c| {
        let mut e = TransversalEnum {
            n,
            sym: &sym,
            fixed: &fixed,
            path: vec![c as u8],
            count: 0,
            cap,
            stop_after: None,
            found: Vec::new(),
        };
        let s = sym[c];
        e.go(1, full & !(1 << c), full & !(1 << s));
        (e.count, e.found)
    });
    let mut count = 0;
    let mut witnesses = Vec::new();
    for (c, found) in parts {
        count += c;
        for p in found {
            if witnesses.len() < cap {
                witnesses.push(to_cellset(n, PlexKind::Transversal, transversal_cells(&p)));
            }
        }
    }
    Ok(PlexCensus {
        kind: PlexKind::Transversal,
        order: n,
        count,
        truncated: (witnesses.len() as u64) < count,
        witnesses,
    })
}

/// All transversals, refusing when there are more than `limit`.
pub fn all_transversals(l: &LatinSquare, limit: usize) -> Result<Vec<CellSet>> {
    let census = enumerate_transversals(l, limit)?;
    if census.count > limit as u64 {
        return Err(Error::TooManyCandidates {
            count: census.count as usize,
            limit,
        });
    }
    Ok(census.witnesses)
}

pub fn find_transversal(l: &LatinSquare) -> Result<Option<CellSet>> {
    ensure_order(l, MAX_EXHAUSTIVE_ORDER)?;
    Ok(complete_partial(l, &[]))
}

/// Lexicographically first transversal containing `partial`, which must be a
/// valid partial transversal of a square of order at most 16.
pub fn complete_partial(l: &LatinSquare, partial: &[Cell]) -> Option<CellSet> {
    let n = l.order();
    assert!(n <= MAX_EXHAUSTIVE_ORDER);
    let sym = symbols_u8(l);
    let full = ((1u64 << n) - 1) as u32;
    let mut fixed = vec![None; n];
    let (mut cols, mut syms) = (full, full);
    for c in partial {
        fixed[c.row] = Some(c.col as u8);
        cols &= !(1 << c.col);
        syms &= !(1 << l.get(c.row, c.col));
    }
    let mut e = TransversalEnum {
        n,
        sym: &sym,
        fixed: &fixed,
        path: Vec::with_capacity(n),
        count: 0,
        cap: 1,
        stop_after: Some(1),
        found: Vec::new(),
    };
    e.go(0, cols, syms);
    e.found
        .pop()
        .map(|p| to_cellset(n, PlexKind::Transversal, transversal_cells(&p)))
}

// ---------------------------------------------------------------------------
// k-plexes

#[derive(Clone, Copy, PartialEq, Eq)]
enum Step {
    Found,
    Exhausted,
    OutOfBudget,
}

struct KPlexSearch<'a> {
    n: usize,
    k: u8,
    sym: &'a [u8],
    order: &'a [Vec<u8>],
    col_cnt: Vec<u8>,
    sym_cnt: Vec<u8>,
    path: Vec<Cell>,
    nodes: u64,
    budget: Option<u64>,
}

impl KPlexSearch<'_> {
    fn new<'a>(
        n: usize,
        k: usize,
        sym: &'a [u8],
        order: &'a [Vec<u8>],
        budget: Option<u64>,
    ) -> KPlexSearch<'a> {
        KPlexSearch {
            n,
            k: k as u8,
            sym,
            order,
            col_cnt: vec![0; n],
            sym_cnt: vec![0; n],
            path: Vec::with_capacity(n * k),
            nodes: 0,
            budget,
        }
    }

    fn push(&mut self, r: usize, c: usize) {
        self.col_cnt[c] += 1;
        self.sym_cnt[self.sym[r * self.n + c] as usize] += 1;
        self.path.push(Cell::new(r, c));
    }

    fn pop(&mut self) {
        let cell = self.path.pop().expect("non-empty path");
        self.col_cnt[cell.col] -= 1;
        self.sym_cnt[self.sym[cell.row * self.n + cell.col] as usize] -= 1;
    }

    /// Every column and symbol deficit must fit in the rows still to fill.
    fn feasible(&self, rows_left: usize) -> bool {
        let k = self.k as usize;
        self.col_cnt.iter().all(|&c| k - c as usize <= rows_left)
            && self.sym_cnt.iter().all(|&c| k - c as usize <= rows_left)
    }

    fn row(&mut self, r: usize) -> Step {
        if r == self.n {
            return Step::Found;
        }
        self.pick(r, 0, self.k as usize)
    }

    fn pick(&mut self, r: usize, start: usize, need: usize) -> Step {
        if need == 0 {
            if !self.feasible(self.n - r - 1) {
                return Step::Exhausted;
            }
            return self.row(r + 1);
        }
        self.nodes += 1;
        if self.budget.is_some_and(|b| self.nodes > b) {
            return Step::OutOfBudget;
        }
        for idx in start..=self.n - need {
            let c = self.order[r][idx] as usize;
            let s = self.sym[r * self.n + c] as usize;
            if self.col_cnt[c] < self.k && self.sym_cnt[s] < self.k {
                self.push(r, c);
                match self.pick(r, idx + 1, need - 1) {
                    Step::Exhausted => {}
                    other => return other,
                }
                self.pop();
            }
        }
        Step::Exhausted
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<u8>> {
    fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for c in start..=n - (k - cur.len()) {
            cur.push(c as u8);
            rec(n, k, c + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, k, 0, &mut Vec::new(), &mut out);
    out
}

fn identity_orders(n: usize) -> Vec<Vec<u8>> {
    vec![(0..n as u8).collect(); n]
}

/// Lexicographically first k-plex, or `None` once the tree is exhausted.
pub fn find_kplex(l: &LatinSquare, k: usize) -> Result<Option<CellSet>> {
    find_kplex_with(l, k, Exec::default())
}

pub fn find_kplex_with(l: &LatinSquare, k: usize, exec: Exec) -> Result<Option<CellSet>> {
    ensure_order(l, MAX_FIND_ORDER)?;
    let n = l.order();
    if k == 0 || k > n {
        return Err(Error::InvalidParameters(format!("k = {k} outside 1..={n}")));
    }
    let sym = symbols_u8(l);
    let order = identity_orders(n);
    let first_rows = combinations(n, k);
    Ok(exec.find_map_first(&first_rows, |combo| {
        let mut s = KPlexSearch::new(n, k, &sym, &order, None);
        for &c in combo {
            s.push(0, c as usize);
        }
        if !s.feasible(n - 1) {
            return None;
        }
        (s.row(1) == Step::Found).then(|| to_cellset(n, PlexKind::KPlex(k), s.path))
    }))
}

fn shuffled_orders(n: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<u8>> {
    (0..n)
        .map(|_| {
            let mut v: Vec<u8> = (0..n as u8).collect();
            v.shuffle(rng);
            v
        })
        .collect()
}

/// Randomized-restart k-plex search for orders beyond the exhaustive limit.
/// `Inconclusive` never means nonexistence.
pub fn randomized_kplex(
    l: &LatinSquare,
    k: usize,
    seed: u64,
    budget: u64,
    restarts: usize,
) -> Heuristic<CellSet> {
    let n = l.order();
    if k == 0 || k > n || n > u8::MAX as usize {
        return Heuristic::Inconclusive;
    }
    let sym = symbols_u8(l);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..restarts {
        let order = shuffled_orders(n, &mut rng);
        let mut s = KPlexSearch::new(n, k, &sym, &order, Some(budget));
        if s.row(0) == Step::Found {
            return Heuristic::Found(to_cellset(n, PlexKind::KPlex(k), s.path));
        }
    }
    Heuristic::Inconclusive
}

// ---------------------------------------------------------------------------
// Near- and quasi-transversals

/// Shared state for the one-or-two-per-line engines.
struct LineSearch<'a> {
    n: usize,
    sym: &'a [u8],
    order: &'a [Vec<u8>],
    col_cnt: Vec<u8>,
    sym_cnt: Vec<u8>,
    col_dbl: bool,
    sym_dbl: bool,
    /// A row holds two cells (quasi) or a row was skipped (near).
    row_flag: bool,
    path: Vec<Cell>,
    nodes: u64,
    budget: Option<u64>,
    cap: usize,
    stop_after: Option<u64>,
    count: u64,
    found: Vec<Vec<Cell>>,
}

impl<'a> LineSearch<'a> {
    fn new(n: usize, sym: &'a [u8], order: &'a [Vec<u8>]) -> Self {
        LineSearch {
            n,
            sym,
            order,
            col_cnt: vec![0; n],
            sym_cnt: vec![0; n],
            col_dbl: false,
            sym_dbl: false,
            row_flag: false,
            path: Vec::with_capacity(n + 1),
            nodes: 0,
            budget: None,
            cap: 0,
            stop_after: None,
            count: 0,
            found: Vec::new(),
        }
    }

    fn sym_at(&self, r: usize, c: usize) -> usize {
        self.sym[r * self.n + c] as usize
    }

    fn record(&mut self) -> Step {
        self.count += 1;
        if self.found.len() < self.cap {
            self.found.push(self.path.clone());
        }
        if self.stop_after.is_some_and(|s| self.count >= s) {
            Step::Found
        } else {
            Step::Exhausted
        }
    }

    fn tick(&mut self) -> bool {
        self.nodes += 1;
        self.budget.is_some_and(|b| self.nodes > b)
    }

    fn zero_count(v: &[u8]) -> usize {
        v.iter().filter(|&&c| c == 0).count()
    }

    // --- quasi: each line at most twice, exactly one doubled per axis

    fn quasi_can_add(&self, r: usize, c: usize) -> bool {
        let s = self.sym_at(r, c);
        let ok = |cnt: u8, dbl: bool| cnt == 0 || (cnt == 1 && !dbl);
        ok(self.col_cnt[c], self.col_dbl) && ok(self.sym_cnt[s], self.sym_dbl)
    }

    fn quasi_add(&mut self, r: usize, c: usize) {
        let s = self.sym_at(r, c);
        if self.col_cnt[c] == 1 {
            self.col_dbl = true;
        }
        if self.sym_cnt[s] == 1 {
            self.sym_dbl = true;
        }
        self.col_cnt[c] += 1;
        self.sym_cnt[s] += 1;
        self.path.push(Cell::new(r, c));
    }

    fn quasi_remove(&mut self) {
        let cell = self.path.pop().expect("non-empty path");
        let s = self.sym_at(cell.row, cell.col);
        self.col_cnt[cell.col] -= 1;
        self.sym_cnt[s] -= 1;
        if self.col_cnt[cell.col] == 1 {
            self.col_dbl = false;
        }
        if self.sym_cnt[s] == 1 {
            self.sym_dbl = false;
        }
    }

    fn quasi_row(&mut self, r: usize) -> Step {
        if r == self.n {
            return if self.row_flag {
                self.record()
            } else {
                Step::Exhausted
            };
        }
        if self.tick() {
            return Step::OutOfBudget;
        }
        let capacity = self.n - r + usize::from(!self.row_flag);
        if Self::zero_count(&self.col_cnt) > capacity || Self::zero_count(&self.sym_cnt) > capacity
        {
            return Step::Exhausted;
        }
        for i in 0..self.n {
            let c1 = self.order[r][i] as usize;
            if !self.quasi_can_add(r, c1) {
                continue;
            }
            self.quasi_add(r, c1);
            if !self.row_flag {
                self.row_flag = true;
                for j in i + 1..self.n {
                    let c2 = self.order[r][j] as usize;
                    if self.quasi_can_add(r, c2) {
                        self.quasi_add(r, c2);
                        let st = self.quasi_row(r + 1);
                        self.quasi_remove();
                        if st != Step::Exhausted {
                            self.quasi_remove();
                            self.row_flag = false;
                            return st;
                        }
                    }
                }
                self.row_flag = false;
            }
            let st = self.quasi_row(r + 1);
            self.quasi_remove();
            if st != Step::Exhausted {
                return st;
            }
        }
        Step::Exhausted
    }

    // --- near: distinct lines, exactly one row skipped

    fn near_row(&mut self, r: usize) -> Step {
        if r == self.n {
            return if self.row_flag {
                self.record()
            } else {
                Step::Exhausted
            };
        }
        if self.tick() {
            return Step::OutOfBudget;
        }
        let capacity = self.n - r + 1;
        if Self::zero_count(&self.col_cnt) > capacity || Self::zero_count(&self.sym_cnt) > capacity
        {
            return Step::Exhausted;
        }
        for i in 0..self.n {
            let c = self.order[r][i] as usize;
            let s = self.sym_at(r, c);
            if self.col_cnt[c] == 0 && self.sym_cnt[s] == 0 {
                self.col_cnt[c] = 1;
                self.sym_cnt[s] = 1;
                self.path.push(Cell::new(r, c));
                let st = self.near_row(r + 1);
                self.path.pop();
                self.col_cnt[c] = 0;
                self.sym_cnt[s] = 0;
                if st != Step::Exhausted {
                    return st;
                }
            }
        }
        if !self.row_flag {
            self.row_flag = true;
            let st = self.near_row(r + 1);
            self.row_flag = false;
            return st;
        }
        Step::Exhausted
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum LineKind {
    Near,
    Quasi,
}

/// First-row choices in lexicographic order: `(cells of row 0, row flag)`.
fn line_branches(n: usize, kind: LineKind) -> Vec<(Vec<u8>, bool)> {
    let mut out = Vec::new();
    for c1 in 0..n as u8 {
        if kind == LineKind::Quasi {
            for c2 in c1 + 1..n as u8 {
                out.push((vec![c1, c2], true));
            }
        }
        out.push((vec![c1], false));
    }
    if kind == LineKind::Near {
        out.push((vec![], true));
    }
    out
}

fn line_enumerate(
    l: &LatinSquare,
    kind: LineKind,
    cap: usize,
    stop_after: Option<u64>,
    exec: Exec,
) -> (u64, Vec<Vec<Cell>>) {
    let n = l.order();
    let sym = symbols_u8(l);
    let order = identity_orders(n);
    let branches = line_branches(n, kind);
    let run = |(cells, flag): &(Vec<u8>, bool)| {
        let mut s = LineSearch::new(n, &sym, &order);
        s.cap = cap;
        s.stop_after = stop_after;
        s.row_flag = *flag;
        for &c in cells {
            s.quasi_add(0, c as usize);
        }
        let st = match kind {
            LineKind::Near => s.near_row(1),
            LineKind::Quasi => s.quasi_row(1),
        };
        debug_assert!(st != Step::OutOfBudget);
        (s.count, s.found)
    };
    if stop_after.is_some() {
        // first hit in branch order
        return exec
            .find_map_first(&branches, |b| {
                let (c, f) = run(b);
                (c > 0).then_some((c, f))
            })
            .unwrap_or((0, Vec::new()));
    }
    let mut count = 0;
    let mut found = Vec::new();
    for (c, f) in exec.map(&branches, run) {
        count += c;
        found.extend(f.into_iter().take(cap.saturating_sub(found.len())));
    }
    (count, found)
}

fn line_census(l: &LatinSquare, kind: LineKind, cap: usize) -> Result<PlexCensus> {
    ensure_order(l, MAX_FIND_ORDER)?;
    let n = l.order();
    let plex = match kind {
        LineKind::Near => PlexKind::NearTransversal,
        LineKind::Quasi => PlexKind::QuasiTransversal,
    };
    let (count, found) = line_enumerate(l, kind, cap, None, Exec::default());
    let witnesses: Vec<CellSet> = found.into_iter().map(|c| to_cellset(n, plex, c)).collect();
    Ok(PlexCensus {
        kind: plex,
        order: n,
        count,
        truncated: (witnesses.len() as u64) < count,
        witnesses,
    })
}

pub fn enumerate_near_transversals(l: &LatinSquare, cap: usize) -> Result<PlexCensus> {
    line_census(l, LineKind::Near, cap)
}

pub fn enumerate_quasi_transversals(l: &LatinSquare, cap: usize) -> Result<PlexCensus> {
    line_census(l, LineKind::Quasi, cap)
}

pub fn find_near_transversal(l: &LatinSquare) -> Result<Option<CellSet>> {
    find_line(l, LineKind::Near, Exec::default())
}

pub fn find_quasi_transversal(l: &LatinSquare) -> Result<Option<CellSet>> {
    find_line(l, LineKind::Quasi, Exec::default())
}

pub fn find_near_transversal_with(l: &LatinSquare, exec: Exec) -> Result<Option<CellSet>> {
    find_line(l, LineKind::Near, exec)
}

pub fn find_quasi_transversal_with(l: &LatinSquare, exec: Exec) -> Result<Option<CellSet>> {
    find_line(l, LineKind::Quasi, exec)
}

fn find_line(l: &LatinSquare, kind: LineKind, exec: Exec) -> Result<Option<CellSet>> {
    ensure_order(l, MAX_FIND_ORDER)?;
    let n = l.order();
    let plex = match kind {
        LineKind::Near => PlexKind::NearTransversal,
        LineKind::Quasi => PlexKind::QuasiTransversal,
    };
    let (_, mut found) = line_enumerate(l, kind, 1, Some(1), exec);
    Ok(found.pop().map(|c| to_cellset(n, plex, c)))
}

/// Randomized-restart quasi-transversal search for large orders.
pub fn randomized_quasi(
    l: &LatinSquare,
    seed: u64,
    budget: u64,
    restarts: usize,
) -> Heuristic<CellSet> {
    let n = l.order();
    if n > u8::MAX as usize {
        return Heuristic::Inconclusive;
    }
    let sym = symbols_u8(l);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..restarts {
        let order = shuffled_orders(n, &mut rng);
        let mut s = LineSearch::new(n, &sym, &order);
        s.cap = 1;
        s.stop_after = Some(1);
        s.budget = Some(budget);
        if s.quasi_row(0) == Step::Found {
            if let Some(cells) = s.found.pop() {
                return Heuristic::Found(to_cellset(n, PlexKind::QuasiTransversal, cells));
            }
        }
    }
    Heuristic::Inconclusive
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plexes::validate::*;

    #[test]
    fn small_transversal_counts() {
        assert_eq!(
            enumerate_transversals(&LatinSquare::cyclic(1), 10)
                .unwrap()
                .count,
            1
        );
        assert_eq!(
            enumerate_transversals(&LatinSquare::cyclic(2), 10)
                .unwrap()
                .count,
            0
        );
        let c3 = enumerate_transversals(&LatinSquare::cyclic(3), 10).unwrap();
        assert_eq!(c3.count, 3);
        assert!(!c3.truncated);
        let capped = enumerate_transversals(&LatinSquare::cyclic(5), 2).unwrap();
        assert_eq!(capped.witnesses.len(), 2);
        assert!(capped.truncated);
    }

    #[test]
    fn witnesses_are_lexicographic_and_sequential_matches_parallel() {
        let l = LatinSquare::cyclic(7);
        let par = enumerate_transversals_with(&l, 1000, Exec::Parallel).unwrap();
        let seq = enumerate_transversals_with(&l, 1000, Exec::Sequential).unwrap();
        assert_eq!(par, seq);
        let keys: Vec<Vec<Cell>> = par.witnesses.iter().map(|w| w.cells().to_vec()).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }

    #[test]
    fn kplex_cases() {
        let c4 = LatinSquare::cyclic(4);
        let two = find_kplex(&c4, 2).unwrap().expect("2-plex in cyclic 4");
        assert!(check_kplex(&c4, two.cells(), 2).is_ok());
        assert_eq!(find_kplex(&c4, 1).unwrap(), None);
        assert_eq!(find_kplex(&c4, 3).unwrap(), None);
        assert!(find_kplex(&c4, 0).is_err());
        assert!(find_kplex(&LatinSquare::cyclic(13), 2).is_err());
    }

    #[test]
    fn kplex_exec_independent() {
        let l = LatinSquare::cyclic(6);
        assert_eq!(
            find_kplex_with(&l, 2, Exec::Parallel).unwrap(),
            find_kplex_with(&l, 2, Exec::Sequential).unwrap()
        );
    }

    #[test]
    fn near_and_quasi_finders() {
        for n in 1..=7 {
            let l = LatinSquare::cyclic(n);
            let near = find_near_transversal(&l).unwrap().unwrap();
            assert!(check_near_transversal(&l, near.cells()).is_ok());
            let quasi = find_quasi_transversal(&l).unwrap();
            if n == 1 {
                assert!(quasi.is_none());
            } else {
                assert!(check_quasi_transversal(&l, quasi.unwrap().cells()).is_ok());
            }
        }
    }

    #[test]
    fn quasi_finder_returns_first_enumerated() {
        let l = LatinSquare::cyclic(4);
        let census = enumerate_quasi_transversals(&l, 1000).unwrap();
        assert_eq!(census.count, 96);
        assert_eq!(
            Some(census.witnesses[0].clone()),
            find_quasi_transversal(&l).unwrap()
        );
        let mut sorted = census.witnesses.clone();
        sorted.sort_by(|a, b| a.cells().cmp(b.cells()));
        assert_eq!(sorted, census.witnesses);
    }

    #[test]
    fn completion() {
        let c3 = LatinSquare::cyclic(3);
        let t = complete_partial(&c3, &[Cell::new(1, 1)]).unwrap();
        assert!(t.contains(Cell::new(1, 1)));
        assert!(complete_partial(&LatinSquare::cyclic(4), &[]).is_none());
    }

    #[test]
    fn randomized_engines_find_witnesses() {
        let l = LatinSquare::qstep(4, 5);
        match randomized_kplex(&l, 2, 0, 200_000, 20) {
            Heuristic::Found(p) => assert!(check_kplex(&l, p.cells(), 2).is_ok()),
            Heuristic::Inconclusive => panic!("no 2-plex found"),
        }
        match randomized_quasi(&l, 0, 200_000, 20) {
            Heuristic::Found(q) => assert!(check_quasi_transversal(&l, q.cells()).is_ok()),
            Heuristic::Inconclusive => panic!("no quasi-transversal found"),
        }
    }
}
