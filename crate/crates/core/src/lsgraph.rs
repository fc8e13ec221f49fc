//! The Latin square graph: cells are vertices, two distinct cells are adjacent
//! when they share a row, a column or a symbol. Domination checks, exact
//! k-domination numbers on small orders, domatic partition verification and
//! the transversal equivalences.

use serde::ser::SerializeTuple;
use serde::{Serialize, Serializer};

use crate::cells::{Cell, CellBits, CellSet};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::latin::{LatinSquare, MAX_EXHAUSTIVE_ORDER};
use crate::plexes::packing::find_orthogonal_mate;
use crate::plexes::validate::{check_quasi_transversal, check_transversal};

/// Largest order for [`gamma_k_exact`].
pub const MAX_GAMMA_ORDER: usize = 6;
/// Largest order for the exhaustive scan in [`quasi_3ds_correspondence`].
pub const MAX_SCAN_ORDER: usize = 5;

pub struct LatinSquareGraph<'a> {
    square: &'a LatinSquare,
    n: usize,
    /// One bitset row per vertex, present for orders up to 16.
    adj: Option<Vec<CellBits>>,
}

/// Materialized graph. Fails above order 16.
pub fn build_graph(l: &LatinSquare) -> Result<LatinSquareGraph<'_>> {
    let n = l.order();
    if n > MAX_EXHAUSTIVE_ORDER {
        return Err(Error::OrderTooLarge {
            order: n,
            max: MAX_EXHAUSTIVE_ORDER,
        });
    }
    let mut g = LatinSquareGraph::implicit(l);
    let adj = (0..n * n)
        .map(|u| CellBits::from_indices((0..n * n).filter(|&v| g.adjacent_idx(u, v))))
        .collect();
    g.adj = Some(adj);
    Ok(g)
}

impl<'a> LatinSquareGraph<'a> {
    /// Adjacency answered from the rule on demand; works at any order.
    pub fn implicit(l: &'a LatinSquare) -> Self {
        LatinSquareGraph {
            square: l,
            n: l.order(),
            adj: None,
        }
    }

    pub fn square(&self) -> &LatinSquare {
        self.square
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn vertex_count(&self) -> usize {
        self.n * self.n
    }

    pub fn is_materialized(&self) -> bool {
        self.adj.is_some()
    }

    fn cell(&self, v: usize) -> Cell {
        Cell::new(v / self.n, v % self.n)
    }

    fn adjacent_idx(&self, u: usize, v: usize) -> bool {
        if u == v {
            return false;
        }
        let (a, b) = (self.cell(u), self.cell(v));
        a.row == b.row
            || a.col == b.col
            || self.square.get(a.row, a.col) == self.square.get(b.row, b.col)
    }

    pub fn adjacent(&self, u: Cell, v: Cell) -> bool {
        let (ui, vi) = (u.index(self.n), v.index(self.n));
        match &self.adj {
            Some(rows) => rows[ui].contains(vi),
            None => self.adjacent_idx(ui, vi),
        }
    }

    /// Open neighborhood in row-major order.
    pub fn neighbors(&self, v: Cell) -> Vec<Cell> {
        let vi = v.index(self.n);
        match &self.adj {
            Some(rows) => rows[vi].iter().map(|u| self.cell(u)).collect(),
            None => (0..self.vertex_count())
                .filter(|&u| self.adjacent_idx(u, vi))
                .map(|u| self.cell(u))
                .collect(),
        }
    }

    pub fn degree(&self, v: Cell) -> usize {
        match &self.adj {
            Some(rows) => rows[v.index(self.n)].len(),
            None => self.neighbors(v).len(),
        }
    }

    pub fn max_degree(&self) -> usize {
        self.cells().map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        self.cells().map(|v| self.degree(v)).min().unwrap_or(0)
    }

    pub fn common_neighbors(&self, u: Cell, v: Cell) -> usize {
        match &self.adj {
            Some(rows) => rows[u.index(self.n)]
                .intersection(&rows[v.index(self.n)])
                .len(),
            None => self
                .cells()
                .filter(|&w| self.adjacent(u, w) && self.adjacent(v, w))
                .count(),
        }
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        (0..self.vertex_count()).map(|v| self.cell(v))
    }

    fn check_cells(&self, set: &[Cell]) -> Result<Vec<Cell>> {
        let mut out = set.to_vec();
        for c in &out {
            if c.row >= self.n || c.col >= self.n {
                return Err(Error::CellOutOfRange {
                    row: c.row + 1,
                    col: c.col + 1,
                    order: self.n,
                });
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}

/// Row, column and symbol tallies of a cell set; the number of set members
/// adjacent to an outside cell is the sum of the three tallies at that cell.
struct Tally {
    rows: Vec<usize>,
    cols: Vec<usize>,
    syms: Vec<usize>,
}

impl Tally {
    fn new(l: &LatinSquare, set: &[Cell]) -> Self {
        let n = l.order();
        let mut t = Tally {
            rows: vec![0; n],
            cols: vec![0; n],
            syms: vec![0; n],
        };
        for c in set {
            t.rows[c.row] += 1;
            t.cols[c.col] += 1;
            t.syms[l.get(c.row, c.col)] += 1;
        }
        t
    }

    fn hits(&self, l: &LatinSquare, c: Cell) -> usize {
        self.rows[c.row] + self.cols[c.col] + self.syms[l.get(c.row, c.col)]
    }
}

/// A vertex with a count: dominators for an outside vertex, induced degree
/// for a member. Serialized as a 1-based `[i, j, count]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VertexCount {
    pub cell: Cell,
    pub count: usize,
}

impl Serialize for VertexCount {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut t = s.serialize_tuple(3)?;
        t.serialize_element(&(self.cell.row + 1))?;
        t.serialize_element(&(self.cell.col + 1))?;
        t.serialize_element(&self.count)?;
        t.end()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DominationCertificate {
    pub k: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ell: Option<usize>,
    pub set: Vec<Cell>,
    pub verdict: bool,
    /// Outside vertices with fewer than `k` neighbors in the set.
    pub deficient: Vec<VertexCount>,
    /// Members whose induced degree exceeds `ell - 1`.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub overloaded: Vec<VertexCount>,
}

pub fn is_k_dominating(
    g: &LatinSquareGraph<'_>,
    set: &[Cell],
    k: usize,
) -> Result<DominationCertificate> {
    let set = g.check_cells(set)?;
    let l = g.square();
    let tally = Tally::new(l, &set);
    let deficient: Vec<VertexCount> = g
        .cells()
        .filter(|c| set.binary_search(c).is_err())
        .map(|cell| VertexCount {
            cell,
            count: tally.hits(l, cell),
        })
        .filter(|v| v.count < k)
        .collect();
    Ok(DominationCertificate {
        k,
        ell: None,
        verdict: deficient.is_empty(),
        set,
        deficient,
        overloaded: Vec::new(),
    })
}

/// `k`-dominating and every member has at most `ell - 1` neighbors inside the set.
pub fn is_lk_independent_dominating(
    g: &LatinSquareGraph<'_>,
    set: &[Cell],
    ell: usize,
    k: usize,
) -> Result<DominationCertificate> {
    let mut cert = is_k_dominating(g, set, k)?;
    let l = g.square();
    let tally = Tally::new(l, &cert.set);
    // a member meets itself once in each of the three tallies
    cert.overloaded = cert
        .set
        .iter()
        .map(|&cell| VertexCount {
            cell,
            count: tally.hits(l, cell) - 3,
        })
        .filter(|v| v.count + 1 > ell)
        .collect();
    cert.ell = Some(ell);
    cert.verdict = cert.deficient.is_empty() && cert.overloaded.is_empty();
    Ok(cert)
}

/// `ceil(k * v / (k + max_degree))` for a graph on `v` vertices.
pub fn gamma_lower_bound(vertices: usize, max_degree: usize, k: usize) -> usize {
    (k * vertices).div_ceil(k + max_degree)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GammaResult {
    pub k: usize,
    pub gamma: usize,
    pub lower_bound: usize,
    pub witness: Vec<Cell>,
}

/// Exact `k`-domination number by branch and bound, for orders up to 6.
///
/// Sizes are tried upward from the degree bound. A known `k`-dominating set
/// passed as `upper_hint` caps the search: if nothing smaller exists, it is
/// returned as the witness.
pub fn gamma_k_exact(
    g: &LatinSquareGraph<'_>,
    k: usize,
    upper_hint: Option<&[Cell]>,
) -> Result<GammaResult> {
    gamma_k_exact_with(g, k, upper_hint, Exec::default())
}

pub fn gamma_k_exact_with(
    g: &LatinSquareGraph<'_>,
    k: usize,
    upper_hint: Option<&[Cell]>,
    exec: Exec,
) -> Result<GammaResult> {
    let n = g.order();
    if n > MAX_GAMMA_ORDER {
        return Err(Error::OrderTooLarge {
            order: n,
            max: MAX_GAMMA_ORDER,
        });
    }
    let v = n * n;
    let lower_bound = gamma_lower_bound(v, g.max_degree(), k).min(v);
    let hint = match upper_hint {
        Some(h) => {
            let cert = is_k_dominating(g, h, k)?;
            if !cert.verdict {
                return Err(Error::InvalidParameters(
                    "upper hint is not k-dominating".into(),
                ));
            }
            Some(cert.set)
        }
        None => None,
    };
    let top = hint.as_ref().map_or(v, |h| h.len());
    let search = DomSearch::new(g, k);
    for size in lower_bound..top {
        if let Some(witness) = search.find(size, exec) {
            return Ok(GammaResult {
                k,
                gamma: size,
                lower_bound,
                witness,
            });
        }
    }
    let witness = match hint {
        Some(h) => h,
        None => search
            .find(v, exec)
            .expect("the whole vertex set is k-dominating"),
    };
    Ok(GammaResult {
        k,
        gamma: witness.len(),
        lower_bound,
        witness,
    })
}

struct DomSearch {
    n: usize,
    k: usize,
    /// Closed neighborhoods as vertex lists.
    closed: Vec<Vec<usize>>,
    open: Vec<Vec<usize>>,
    max_gain: usize,
}

#[derive(Clone)]
struct DomState {
    chosen: Vec<usize>,
    in_set: CellBits,
    banned: CellBits,
    cover: Vec<usize>,
}

impl DomSearch {
    fn new(g: &LatinSquareGraph<'_>, k: usize) -> Self {
        let n = g.order();
        let open: Vec<Vec<usize>> = g
            .cells()
            .map(|c| g.neighbors(c).iter().map(|u| u.index(n)).collect())
            .collect();
        let closed = open
            .iter()
            .enumerate()
            .map(|(v, nb)| {
                let mut c = nb.clone();
                c.push(v);
                c.sort_unstable();
                c
            })
            .collect();
        let max_gain = g.max_degree() + k;
        DomSearch {
            n,
            k,
            closed,
            open,
            max_gain,
        }
    }

    fn need(&self, s: &DomState, v: usize) -> usize {
        if s.in_set.contains(v) {
            0
        } else {
            self.k.saturating_sub(s.cover[v])
        }
    }

    fn include(&self, s: &mut DomState, x: usize) {
        s.chosen.push(x);
        s.in_set.insert(x);
        for &u in &self.open[x] {
            s.cover[u] += 1;
        }
    }

    /// Most constrained unsatisfied vertex and its candidate dominators, or
    /// `Ok(None)` when everything is satisfied; `Err(())` on a dead end.
    fn pick(&self, s: &DomState, budget: usize) -> std::result::Result<Option<Vec<usize>>, ()> {
        let mut deficit = 0;
        let mut best: Option<(usize, Vec<usize>)> = None;
        for v in 0..self.n * self.n {
            let need = self.need(s, v);
            if need == 0 {
                continue;
            }
            deficit += need;
            let cands: Vec<usize> = self.closed[v]
                .iter()
                .copied()
                .filter(|&u| !s.in_set.contains(u) && !s.banned.contains(u))
                .collect();
            let open_cands = cands.iter().filter(|&&u| u != v).count();
            if !cands.contains(&v) && (open_cands < need || need > budget) {
                return Err(());
            }
            if best.as_ref().is_none_or(|(len, _)| cands.len() < *len) {
                best = Some((cands.len(), cands));
            }
        }
        if deficit > budget * self.max_gain {
            return Err(());
        }
        Ok(best.map(|(_, c)| c))
    }

    fn go(&self, s: &mut DomState, size: usize) -> Option<Vec<usize>> {
        let budget = size - s.chosen.len();
        let cands = match self.pick(s, budget) {
            Err(()) => return None,
            Ok(None) => return Some(s.chosen.clone()),
            Ok(Some(c)) => c,
        };
        if budget == 0 {
            return None;
        }
        let saved = s.banned;
        for &x in &cands {
            let mut next = s.clone();
            self.include(&mut next, x);
            if let Some(w) = self.go(&mut next, size) {
                s.banned = saved;
                return Some(w);
            }
            s.banned.insert(x);
        }
        s.banned = saved;
        None
    }

    /// A `k`-dominating set of at most `size` vertices, as 0-based cells.
    fn find(&self, size: usize, exec: Exec) -> Option<Vec<Cell>> {
        let root = DomState {
            chosen: Vec::new(),
            in_set: CellBits::default(),
            banned: CellBits::default(),
            cover: vec![0; self.n * self.n],
        };
        let cands = match self.pick(&root, size) {
            Err(()) => return None,
            Ok(None) => Some(Vec::new()),
            Ok(Some(c)) => {
                if size == 0 {
                    return None;
                }
                // branch i takes candidate i and bans the earlier ones
                let branches: Vec<usize> = (0..c.len()).collect();
                exec.find_map_first(&branches, |&i| {
                    let mut s = root.clone();
                    for &b in &c[..i] {
                        s.banned.insert(b);
                    }
                    self.include(&mut s, c[i]);
                    self.go(&mut s, size)
                })
            }
        }?;
        let mut out: Vec<Cell> = cands
            .into_iter()
            .map(|v| Cell::new(v / self.n, v % self.n))
            .collect();
        out.sort();
        Some(out)
    }
}

/// The three statements tied together for an `n`-cell set: it is a
/// 3-dominating set, it is a (1,3)-independent dominating set, and it is a
/// transversal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    pub three_dominating: bool,
    pub independent_dominating: bool,
    pub transversal: bool,
    pub agree: bool,
}

pub fn transversal_equivalence_check(
    g: &LatinSquareGraph<'_>,
    set: &[Cell],
) -> Result<EquivalenceReport> {
    let n = g.order();
    let sized = {
        let mut s = set.to_vec();
        s.sort();
        s.dedup();
        s.len() == n
    };
    let three_dominating = sized && is_k_dominating(g, set, 3)?.verdict;
    let independent_dominating = sized && is_lk_independent_dominating(g, set, 1, 3)?.verdict;
    let transversal = check_transversal(g.square(), set).is_ok();
    Ok(EquivalenceReport {
        three_dominating,
        independent_dominating,
        transversal,
        agree: three_dominating == independent_dominating && independent_dominating == transversal,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DomaticReport {
    pub k: usize,
    pub parts: usize,
    pub disjoint: bool,
    pub covers_all: bool,
    /// Per-part `k`-domination verdicts.
    pub dominating: Vec<bool>,
    pub verdict: bool,
    /// A valid family of `p` disjoint `k`-dominating sets gives `d_k >= p`.
    pub lower_bound: Option<usize>,
    /// `floor(n^2 / gamma_k)` when `gamma_k` was supplied.
    pub upper_bound: Option<usize>,
}

/// Checks a family of vertex sets for pairwise disjointness and
/// `k`-domination. In strict mode the family must also cover every vertex,
/// otherwise [`Error::NotAPartition`] is returned.
pub fn verify_domatic_partition(
    g: &LatinSquareGraph<'_>,
    parts: &[Vec<Cell>],
    k: usize,
    strict: bool,
    gamma: Option<usize>,
) -> Result<DomaticReport> {
    let v = g.vertex_count();
    let mut seen = vec![0usize; v];
    let mut dominating = Vec::with_capacity(parts.len());
    let mut disjoint = true;
    for part in parts {
        let cells = g.check_cells(part)?;
        if cells.len() != part.len() {
            disjoint = false;
        }
        for c in &cells {
            let i = c.index(g.order());
            seen[i] += 1;
            if seen[i] > 1 {
                disjoint = false;
            }
        }
        dominating.push(is_k_dominating(g, &cells, k)?.verdict);
    }
    let covers_all = seen.iter().all(|&x| x > 0);
    if strict && !(disjoint && covers_all) {
        let reason = if !disjoint {
            "parts overlap".to_string()
        } else {
            let missing = seen.iter().filter(|&&x| x == 0).count();
            format!("{missing} vertices are not covered")
        };
        return Err(Error::NotAPartition(reason));
    }
    let verdict = disjoint && dominating.iter().all(|&d| d);
    Ok(DomaticReport {
        k,
        parts: parts.len(),
        disjoint,
        covers_all,
        dominating,
        verdict,
        lower_bound: verdict.then_some(parts.len()),
        upper_bound: gamma.filter(|&g| g > 0).map(|g| v / g),
    })
}

/// A proper `n`-coloring exists iff the square has an orthogonal mate; the
/// mate's symbol classes are the color classes. Orders up to 8.
pub fn has_mate_coloring(l: &LatinSquare) -> Result<Option<LatinSquare>> {
    find_orthogonal_mate(l)
}

/// Whether `colors[v]` (row-major, any labels) is a proper coloring.
pub fn is_proper_coloring(g: &LatinSquareGraph<'_>, colors: &[usize]) -> bool {
    let n = g.order();
    colors.len() == n * n
        && g.cells().all(|u| {
            g.neighbors(u)
                .iter()
                .all(|w| colors[u.index(n)] != colors[w.index(n)])
        })
}

/// Proper coloring with `colors` colors by direct backtracking over cells,
/// without going through transversals. Orders up to 8.
pub fn find_proper_coloring(g: &LatinSquareGraph<'_>, colors: usize) -> Result<Option<Vec<usize>>> {
    let n = g.order();
    if n > 8 {
        return Err(Error::OrderTooLarge { order: n, max: 8 });
    }
    if colors > 64 {
        return Err(Error::InvalidParameters("at most 64 colors".into()));
    }
    let l = g.square();
    let mut row = vec![0u64; n];
    let mut col = vec![0u64; n];
    let mut sym = vec![0u64; n];
    let mut out = vec![usize::MAX; n * n];

    #[allow(clippy::too_many_arguments)]
    fn go(
        v: usize,
        used: usize,
        n: usize,
        colors: usize,
        l: &LatinSquare,
        row: &mut [u64],
        col: &mut [u64],
        sym: &mut [u64],
        out: &mut [usize],
    ) -> bool {
        if v == n * n {
            return true;
        }
        let (r, c) = (v / n, v % n);
        let s = l.get(r, c);
        let blocked = row[r] | col[c] | sym[s];
        // a fresh color is interchangeable with any other fresh one
        for x in 0..colors.min(used + 1) {
            if blocked >> x & 1 == 1 {
                continue;
            }
            let bit = 1u64 << x;
            row[r] |= bit;
            col[c] |= bit;
            sym[s] |= bit;
            out[v] = x;
            if go(v + 1, used.max(x + 1), n, colors, l, row, col, sym, out) {
                return true;
            }
            row[r] &= !bit;
            col[c] &= !bit;
            sym[s] &= !bit;
        }
        false
    }

    Ok(go(0, 0, n, colors, l, &mut row, &mut col, &mut sym, &mut out).then_some(out))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuasiCorrespondence {
    pub is_quasi: bool,
    pub is_three_dominating: bool,
    /// Quasi-transversal implies 3-dominating.
    pub forward_holds: bool,
}

/// Forward direction on one set: a quasi-transversal is a 3-dominating set of size `n + 1`.
pub fn quasi_3ds_correspondence(
    g: &LatinSquareGraph<'_>,
    set: &CellSet,
) -> Result<QuasiCorrespondence> {
    let is_quasi = check_quasi_transversal(g.square(), set.cells()).is_ok();
    let is_three_dominating =
        set.len() == g.order() + 1 && is_k_dominating(g, set.cells(), 3)?.verdict;
    Ok(QuasiCorrespondence {
        is_quasi,
        is_three_dominating,
        forward_holds: !is_quasi || is_three_dominating,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorrespondenceScan {
    pub order: usize,
    pub subsets: u64,
    pub quasi: u64,
    pub three_dominating: u64,
    pub quasi_not_dominating: u64,
    pub dominating_not_quasi: u64,
    /// First disagreeing set in lexicographic order, if any.
    pub first_disagreement: Option<Vec<Cell>>,
}

/// Every `(n + 1)`-subset of cells, classified as quasi-transversal and as
/// 3-dominating set. Orders 3 to 5.
pub fn scan_quasi_3ds(g: &LatinSquareGraph<'_>) -> Result<CorrespondenceScan> {
    let n = g.order();
    if n > MAX_SCAN_ORDER {
        return Err(Error::OrderTooLarge {
            order: n,
            max: MAX_SCAN_ORDER,
        });
    }
    if n < 3 {
        return Err(Error::OrderTooSmall { order: n, min: 3 });
    }
    let l = g.square();
    let cells: Vec<Cell> = g.cells().collect();
    let mut scan = CorrespondenceScan {
        order: n,
        subsets: 0,
        quasi: 0,
        three_dominating: 0,
        quasi_not_dominating: 0,
        dominating_not_quasi: 0,
        first_disagreement: None,
    };
    let mut idx: Vec<usize> = (0..=n).collect();
    let total = cells.len();
    loop {
        let set: Vec<Cell> = idx.iter().map(|&i| cells[i]).collect();
        let q = check_quasi_transversal(l, &set).is_ok();
        let tally = Tally::new(l, &set);
        let d = cells
            .iter()
            .filter(|c| !set.contains(c))
            .all(|&c| tally.hits(l, c) >= 3);
        scan.subsets += 1;
        scan.quasi += q as u64;
        scan.three_dominating += d as u64;
        if q != d {
            if q {
                scan.quasi_not_dominating += 1;
            } else {
                scan.dominating_not_quasi += 1;
            }
            scan.first_disagreement.get_or_insert(set);
        }
        // next combination
        let Some(pos) = (0..idx.len())
            .rev()
            .find(|&p| idx[p] < total - idx.len() + p)
        else {
            break;
        };
        idx[pos] += 1;
        for p in pos + 1..idx.len() {
            idx[p] = idx[p - 1] + 1;
        }
    }
    Ok(scan)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plexes::search::{all_transversals, enumerate_quasi_transversals};

    fn diag(n: usize) -> Vec<Cell> {
        (0..n).map(|i| Cell::new(i, i)).collect()
    }

    #[test]
    fn small_graphs() {
        let one = LatinSquare::cyclic(1);
        let g = build_graph(&one).unwrap();
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.max_degree(), 0);
        let two = LatinSquare::cyclic(2);
        let g = build_graph(&two).unwrap();
        // complete graph on four vertices
        assert!(g.cells().all(|v| g.degree(v) == 3));
        let c4 = LatinSquare::cyclic(4);
        let g = build_graph(&c4).unwrap();
        assert!(g.cells().all(|v| g.degree(v) == 9));
        assert_eq!(g.common_neighbors(Cell::new(0, 0), Cell::new(0, 1)), 4);
        let imp = LatinSquareGraph::implicit(&c4);
        assert_eq!(imp.common_neighbors(Cell::new(0, 0), Cell::new(0, 1)), 4);
        assert!(build_graph(&LatinSquare::cyclic(17)).is_err());
        assert_eq!(
            LatinSquareGraph::implicit(&LatinSquare::cyclic(17)).degree(Cell::new(3, 3)),
            48
        );
    }

    #[test]
    fn domination_checks() {
        let c4 = LatinSquare::cyclic(4);
        let g = build_graph(&c4).unwrap();
        let all: Vec<Cell> = g.cells().collect();
        assert!(is_k_dominating(&g, &all, 7).unwrap().verdict);
        let d = is_k_dominating(&g, &diag(4), 3).unwrap();
        assert!(!d.verdict);
        assert!(d.deficient.iter().all(|v| v.count <= 2));
        let row = [Cell::new(0, 0), Cell::new(0, 1)];
        let c = is_lk_independent_dominating(&g, &row, 1, 0).unwrap();
        assert!(!c.verdict);
        assert_eq!(c.overloaded.len(), 2);

        let two = LatinSquare::two_step_pow2(2).unwrap();
        let g2 = build_graph(&two).unwrap();
        for t in all_transversals(&two, 100).unwrap() {
            assert!(is_k_dominating(&g2, t.cells(), 3).unwrap().verdict);
            assert!(
                is_lk_independent_dominating(&g2, t.cells(), 1, 3)
                    .unwrap()
                    .verdict
            );
        }
    }

    #[test]
    fn certificate_json_shape() {
        let c3 = LatinSquare::cyclic(3);
        let g = build_graph(&c3).unwrap();
        let cert = is_k_dominating(&g, &[Cell::new(0, 0)], 3).unwrap();
        let v = serde_json::to_value(&cert).unwrap();
        assert_eq!(v["k"], 3);
        assert!(v.get("ell").is_none());
        assert_eq!(v["set"], serde_json::json!([[1, 1]]));
        assert_eq!(v["verdict"], false);
        assert_eq!(v["deficient"][0].as_array().unwrap().len(), 3);
    }

    #[test]
    fn gamma_small() {
        let c3 = LatinSquare::cyclic(3);
        assert_eq!(
            gamma_k_exact(&build_graph(&c3).unwrap(), 3, None)
                .unwrap()
                .gamma,
            3
        );
        let c4 = LatinSquare::cyclic(4);
        let g = build_graph(&c4).unwrap();
        let r = gamma_k_exact(&g, 3, None).unwrap();
        assert_eq!(r.gamma, 5);
        assert_eq!(r.lower_bound, 4);
        assert!(is_k_dominating(&g, &r.witness, 3).unwrap().verdict);
        let seq = gamma_k_exact_with(&g, 3, None, Exec::Sequential).unwrap();
        assert_eq!(seq, r);
        let two = LatinSquare::two_step_pow2(2).unwrap();
        assert_eq!(
            gamma_k_exact(&build_graph(&two).unwrap(), 3, None)
                .unwrap()
                .gamma,
            4
        );
        let g1 = gamma_k_exact(&g, 1, None).unwrap();
        assert!(is_k_dominating(&g, &g1.witness, 1).unwrap().verdict);
        assert!(gamma_k_exact(&build_graph(&LatinSquare::cyclic(7)).unwrap(), 3, None).is_err());
    }

    #[test]
    fn gamma_cyclic_six() {
        let c6 = LatinSquare::cyclic(6);
        let g = build_graph(&c6).unwrap();
        let r = gamma_k_exact(&g, 3, None).unwrap();
        assert_eq!(r.gamma, 7);
        assert_eq!(r.lower_bound, 6);
    }

    #[test]
    fn equivalence_on_cyclic_five() {
        let c5 = LatinSquare::cyclic(5);
        let g = build_graph(&c5).unwrap();
        for t in all_transversals(&c5, 1000).unwrap() {
            let r = transversal_equivalence_check(&g, t.cells()).unwrap();
            assert!(r.agree && r.transversal);
        }
        let c4 = LatinSquare::cyclic(4);
        let r = transversal_equivalence_check(&build_graph(&c4).unwrap(), &diag(4)).unwrap();
        assert!(r.agree && !r.transversal && !r.three_dominating);
    }

    #[test]
    fn domatic_checks() {
        let c4 = LatinSquare::cyclic(4);
        let g = build_graph(&c4).unwrap();
        let all: Vec<Cell> = g.cells().collect();
        let r = verify_domatic_partition(&g, std::slice::from_ref(&all), 3, true, None).unwrap();
        assert!(r.verdict && r.covers_all);
        let half = vec![all[..8].to_vec()];
        assert!(matches!(
            verify_domatic_partition(&g, &half, 3, true, None),
            Err(Error::NotAPartition(_))
        ));
        let overlap = vec![all.clone(), all[..1].to_vec()];
        let r = verify_domatic_partition(&g, &overlap, 3, false, Some(5)).unwrap();
        assert!(!r.disjoint && !r.verdict);
        assert_eq!(r.upper_bound, Some(3));
    }

    #[test]
    fn colorings() {
        let two = LatinSquare::two_step_pow2(2).unwrap();
        let g = build_graph(&two).unwrap();
        let colors = find_proper_coloring(&g, 4).unwrap().unwrap();
        assert!(is_proper_coloring(&g, &colors));
        assert!(has_mate_coloring(&two).unwrap().is_some());
        let c4 = LatinSquare::cyclic(4);
        let g4 = build_graph(&c4).unwrap();
        assert!(find_proper_coloring(&g4, 4).unwrap().is_none());
        // colour classes have at most 3 cells here, so 5 colours cannot cover 16 cells
        assert!(find_proper_coloring(&g4, 5).unwrap().is_none());
        assert!(has_mate_coloring(&c4).unwrap().is_none());
        assert!(has_mate_coloring(&LatinSquare::cyclic(1))
            .unwrap()
            .is_some());
    }

    #[test]
    fn quasi_and_three_domination() {
        let c4 = LatinSquare::cyclic(4);
        let g = build_graph(&c4).unwrap();
        for q in enumerate_quasi_transversals(&c4, 1000).unwrap().witnesses {
            assert!(quasi_3ds_correspondence(&g, &q).unwrap().forward_holds);
        }
        let scan = scan_quasi_3ds(&g).unwrap();
        assert_eq!(scan.subsets, 4368);
        assert_eq!(scan.quasi, 96);
        assert_eq!(scan.quasi_not_dominating, 0);
        let c3 = LatinSquare::cyclic(3);
        let s3 = scan_quasi_3ds(&build_graph(&c3).unwrap()).unwrap();
        assert!(s3.quasi > 0 && s3.quasi_not_dominating == 0);
    }
}
