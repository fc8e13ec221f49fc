//! Explicit constructions on cyclic, q-step and two-step squares, each wrapped
//! in a self-contained certificate that re-validates from its JSON form.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cells::{Cell, CellSet, PlexKind};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::latin::{Generator, LatinSquare, SquareJson, StepTypeSpec};
use crate::lsgraph::{is_k_dominating, LatinSquareGraph};
use crate::plexes::extend::complement_plex;
use crate::plexes::search::{
    enumerate_near_transversals, find_kplex_with, find_quasi_transversal_with, find_transversal,
    randomized_kplex, randomized_quasi, Heuristic, MAX_FIND_ORDER,
};
use crate::plexes::validate::{
    check_kplex, check_near_transversal, check_partial_transversal, check_quasi_transversal,
    check_transversal, near_missing, quasi_doubled, Verdict,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Claim {
    #[serde(rename = "two-step-decomposition")]
    TwoStepDecomposition,
    #[serde(rename = "case1-3ds")]
    Case1Dominating,
    #[serde(rename = "case2-3ds")]
    Case2Dominating,
    #[serde(rename = "cyclic-domatic-partition")]
    CyclicDomaticPartition,
    #[serde(rename = "rodney-2plex-case1")]
    TwoPlexCyclic,
    #[serde(rename = "rodney-2plex-case2")]
    TwoPlexTwoBlocks,
    #[serde(rename = "rodney-2plex-case3")]
    TwoPlexGeneral,
    #[serde(rename = "qt-nt-transforms")]
    QuasiNearTransforms,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    PaperFormula,
    SearchFallback,
}

/// Generator name with parameters, or the rows themselves.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SquareDescriptor {
    Generated {
        generator: String,
        params: BTreeMap<String, usize>,
    },
    Inline(SquareJson),
}

impl SquareDescriptor {
    pub fn generated(g: Generator) -> Self {
        SquareDescriptor::Generated {
            generator: g.name().to_string(),
            params: g
                .params()
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect(),
        }
    }

    pub fn to_square(&self) -> Result<LatinSquare> {
        match self {
            SquareDescriptor::Generated { generator, params } => {
                Generator::from_parts(generator, params)?.build()
            }
            SquareDescriptor::Inline(js) => js.clone().into_square(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Witness {
    Single(CellSet),
    Family(Vec<CellSet>),
}

impl Witness {
    pub fn sets(&self) -> Vec<&CellSet> {
        match self {
            Witness::Single(s) => vec![s],
            Witness::Family(f) => f.iter().collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessCertificate {
    pub claim: Claim,
    pub square: SquareDescriptor,
    pub provenance: Provenance,
    pub witness: Witness,
    pub verdict: bool,
    pub notes: Vec<String>,
}

impl WitnessCertificate {
    /// Re-checks the witness against the claim using only the certificate's
    /// own fields. Returns the list of problems found; empty means accepted.
    pub fn revalidate(&self) -> Result<Vec<String>> {
        let l = self.square.to_square()?;
        let mut problems = claim_problems(self.claim, &l, &self.witness);
        if !self.verdict {
            problems.push("certificate carries a false verdict".into());
        }
        Ok(problems)
    }

    pub fn is_accepted(&self) -> bool {
        self.revalidate().is_ok_and(|p| p.is_empty())
    }
}

/// Fallback search settings.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BuildOptions {
    pub seed: u64,
    pub exec: Exec,
    /// Node budget per randomized restart.
    pub budget: u64,
    pub restarts: usize,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            seed: 0,
            exec: Exec::default(),
            budget: 2_000_000,
            restarts: 64,
        }
    }
}

fn check_by_kind(l: &LatinSquare, set: &CellSet) -> Verdict {
    match set.kind() {
        PlexKind::Transversal => check_transversal(l, set.cells()),
        PlexKind::PartialTransversal(_) => check_partial_transversal(l, set.cells()),
        PlexKind::NearTransversal => check_near_transversal(l, set.cells()),
        PlexKind::QuasiTransversal => check_quasi_transversal(l, set.cells()),
        PlexKind::KPlex(k) => check_kplex(l, set.cells(), k),
        PlexKind::VertexSet(_) => Ok(()),
    }
}

fn three_dominating(l: &LatinSquare, cells: &[Cell]) -> bool {
    let g = LatinSquareGraph::implicit(l);
    is_k_dominating(&g, cells, 3).is_ok_and(|c| c.verdict)
}

fn subset(a: &CellSet, b: &CellSet) -> bool {
    a.cells().iter().all(|&c| b.contains(c))
}

fn pairwise_disjoint(sets: &[&CellSet]) -> bool {
    let mut seen = std::collections::BTreeSet::new();
    sets.iter().flat_map(|s| s.cells()).all(|c| seen.insert(*c))
}

fn claim_problems(claim: Claim, l: &LatinSquare, witness: &Witness) -> Vec<String> {
    let n = l.order();
    let mut out = Vec::new();
    let sets = witness.sets();
    for (i, s) in sets.iter().enumerate() {
        if s.order() != n {
            out.push(format!(
                "set {} has order {}, square has order {n}",
                i + 1,
                s.order()
            ));
            return out;
        }
    }
    match (claim, witness) {
        (Claim::TwoStepDecomposition, Witness::Family(f)) => {
            for (i, s) in f.iter().enumerate() {
                need_kind(&mut out, l, i, s, PlexKind::Transversal);
            }
            if f.len() != n {
                out.push(format!("{} transversals, expected {n}", f.len()));
            }
            if !pairwise_disjoint(&sets) {
                out.push("transversals overlap".into());
            }
        }
        (Claim::Case1Dominating | Claim::Case2Dominating, Witness::Single(s)) => {
            need_kind(&mut out, l, 0, s, PlexKind::QuasiTransversal);
            if !three_dominating(l, s.cells()) {
                out.push("set is not 3-dominating".into());
            }
        }
        (Claim::CyclicDomaticPartition, Witness::Family(f)) => {
            if n < 2 || f.len() != n - 1 {
                out.push(format!(
                    "{} parts, expected {}",
                    f.len(),
                    n.saturating_sub(1)
                ));
            }
            if !pairwise_disjoint(&sets) {
                out.push("parts overlap".into());
            }
            for (i, s) in f.iter().enumerate() {
                if !three_dominating(l, s.cells()) {
                    out.push(format!("part {} is not 3-dominating", i + 1));
                }
            }
        }
        (
            Claim::TwoPlexCyclic | Claim::TwoPlexTwoBlocks | Claim::TwoPlexGeneral,
            Witness::Family(f),
        ) if f.len() == 2 => {
            need_kind(&mut out, l, 0, &f[0], PlexKind::QuasiTransversal);
            need_kind(&mut out, l, 1, &f[1], PlexKind::NearTransversal);
            if !f[0].is_disjoint(&f[1]) {
                out.push("quasi- and near-transversal overlap".into());
            }
            let union: Vec<Cell> = f[0].cells().iter().chain(f[1].cells()).copied().collect();
            check_two_plex(l, union, &mut out);
        }
        (
            Claim::TwoPlexCyclic | Claim::TwoPlexTwoBlocks | Claim::TwoPlexGeneral,
            Witness::Single(s),
        ) => {
            need_kind(&mut out, l, 0, s, PlexKind::KPlex(2));
            check_two_plex(l, s.cells().to_vec(), &mut out);
        }
        (Claim::QuasiNearTransforms, Witness::Family(f)) if !f.is_empty() && f.len() % 2 == 0 => {
            // (smaller set, quasi-transversal containing it) pairs
            for (p, pair) in f.chunks(2).enumerate() {
                let small = pair[0].kind();
                if !matches!(small, PlexKind::NearTransversal | PlexKind::Transversal) {
                    out.push(format!("pair {} starts with a {small}", p + 1));
                } else {
                    need_kind(&mut out, l, 2 * p, &pair[0], small);
                }
                need_kind(&mut out, l, 2 * p + 1, &pair[1], PlexKind::QuasiTransversal);
                if !subset(&pair[0], &pair[1]) {
                    out.push(format!(
                        "pair {}: first set is not inside the quasi-transversal",
                        p + 1
                    ));
                }
            }
        }
        (claim, _) => out.push(format!("witness shape does not fit claim {claim:?}")),
    }
    out
}

fn need_kind(out: &mut Vec<String>, l: &LatinSquare, i: usize, s: &CellSet, kind: PlexKind) {
    if s.kind() != kind {
        out.push(format!(
            "set {} is tagged {}, expected {kind}",
            i + 1,
            s.kind()
        ));
    } else if let Err(v) = check_by_kind(l, s) {
        out.push(format!("set {} is not a valid {kind}: {v}", i + 1));
    }
}

fn check_two_plex(l: &LatinSquare, union: Vec<Cell>, out: &mut Vec<String>) {
    let n = l.order();
    if let Err(v) = check_kplex(l, &union, 2) {
        out.push(format!("union is not a 2-plex: {v}"));
        return;
    }
    let comp = CellSet::new(n, PlexKind::KPlex(2), union)
        .and_then(|p| complement_plex(l, &p))
        .map(|c| check_kplex(l, c.cells(), n - 2));
    if !matches!(comp, Ok(Ok(()))) {
        out.push(format!("complement is not a {}-plex", n - 2));
    }
}

/// 1-based formula coordinates reduced into `0..n`.
fn wrap(r: i64, c: i64, n: usize) -> Cell {
    let n = n as i64;
    Cell::new(
        (r - 1).rem_euclid(n) as usize,
        (c - 1).rem_euclid(n) as usize,
    )
}

/// `0..=hi` as `i64`, empty when `hi < 0`.
fn upto(hi: i64) -> impl Iterator<Item = i64> + Clone {
    0..hi + 1
}

fn collect_cells(n: usize, pts: impl IntoIterator<Item = (i64, i64)>) -> Vec<Cell> {
    pts.into_iter().map(|(r, c)| wrap(r, c, n)).collect()
}

fn duplicates(cells: &[Cell]) -> Vec<Cell> {
    let mut sorted = cells.to_vec();
    sorted.sort();
    let mut d: Vec<Cell> = sorted
        .windows(2)
        .filter(|w| w[0] == w[1])
        .map(|w| w[0])
        .collect();
    d.dedup();
    d
}

fn fmt_cells(cells: &[Cell]) -> String {
    cells
        .iter()
        .map(Cell::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

// ---------------------------------------------------------------------------
// formula cell lists, all for the canonical generator layouts

fn cyclic_quasi_cells(n: usize) -> Vec<Cell> {
    let (ni, h) = (n as i64, n as i64 / 2);
    let mut pts: Vec<(i64, i64)> = (1..=h).map(|i| (i, i)).collect();
    pts.extend((h + 1..=ni).map(|i| (i, i + 1)));
    pts.push((h + 1, h + 1));
    collect_cells(n, pts)
}

/// The shared first four families of the q-step quasi-transversal.
fn qstep_quasi_core(m: i64, q: i64) -> Vec<(i64, i64)> {
    let h = m * q / 2;
    let blocks = |hi: i64| 0..hi;
    let mut pts = Vec::new();
    for i in upto((q - 1) / 2) {
        for j in blocks(m / 2) {
            pts.push((q * j + 2 * i + 1, q * j + 2 * i + 1));
        }
    }
    for i in upto((q - 1) / 2) {
        for j in blocks(m / 2 - 1) {
            pts.push((q * j + 2 * i + 1 + h, q * (j + 1) + 2 * i + 1 + h));
        }
    }
    for i in upto((q - 3) / 2) {
        for j in blocks(m / 2 - 1) {
            pts.push((q * j + 2 * i + 2, q * (j + 1) + 2 * i + 2));
        }
    }
    for i in upto((q - 3) / 2) {
        for j in blocks(m / 2) {
            pts.push((q * j + 2 * i + 2 + h, q * j + 2 * i + 2 + h));
        }
    }
    pts
}

fn qstep_quasi_cells(m: usize, q: usize) -> Vec<Cell> {
    let (mi, qi) = (m as i64, q as i64);
    let n = mi * qi;
    let h = n / 2;
    let mut pts = qstep_quasi_core(mi, qi);
    pts.extend(upto((qi - 3) / 2).map(|i| (2 * i + 2 - qi + h, 2 * i + 1 + h)));
    // the range below is empty for q = 3
    pts.extend(upto((qi - 5).div_euclid(2)).map(|i| (2 * i + 1 - qi + n, 2 * i + 4)));
    pts.extend([(h - 1, h + qi), (n - 2, 2), (n, 1)]);
    collect_cells(m * q, pts)
}

fn two_plex_cyclic_cells(n: usize) -> (Vec<Cell>, Vec<Cell>) {
    let (ni, h) = (n as i64, n as i64 / 2);
    let mut near: Vec<(i64, i64)> = (1..=h).map(|i| (i, i + 1)).collect();
    near.extend((h + 2..=ni).map(|i| (i, i)));
    (cyclic_quasi_cells(n), collect_cells(n, near))
}

fn two_plex_two_block_cells(q: usize) -> (Vec<Cell>, Vec<Cell>) {
    let qi = q as i64;
    let n = 2 * qi;
    let h = qi;
    let mut quasi: Vec<(i64, i64)> = (0..qi).map(|i| (2 * i + 1, 2 * i + 1)).collect();
    quasi.extend(upto((qi - 3) / 2).map(|i| (2 * i + 2, 2 * i + 3 + h)));
    quasi.extend(upto((qi - 3) / 2).map(|i| (2 * i + 1 + h, 2 * i + 2)));
    quasi.extend([(h, h + 1), (n, 1)]);
    let mut near: Vec<(i64, i64)> = (0..qi).map(|i| (2 * i + 2, 2 * i + 2)).collect();
    near.extend(upto((qi - 3) / 2).map(|i| (2 * i + 1, 2 * i + 2 + h)));
    near.extend(upto((qi - 3) / 2).map(|i| (2 * i + 2 + h, 2 * i + 3)));
    (collect_cells(2 * q, quasi), collect_cells(2 * q, near))
}

fn two_plex_general_cells(m: usize, q: usize) -> (Vec<Cell>, Vec<Cell>) {
    let (mi, qi) = (m as i64, q as i64);
    let n = mi * qi;
    let h = n / 2;
    let mut quasi = qstep_quasi_core(mi, qi);
    quasi.extend(upto((qi - 3) / 2).map(|i| (2 * i + 2 + h - qi, 2 * i + 1 + h)));
    quasi.extend(upto((qi - 3) / 2).map(|i| (n - 2 * i, qi - (2 * i + 1))));
    quasi.extend([(h + 1 - qi, h + qi), (n - qi + 1, qi)]);
    let mut near = Vec::new();
    for i in upto((qi - 3) / 2) {
        for j in 0..mi / 2 {
            near.push((qi * j + 2 * i + 2, qi * j + 2 * i + 2));
        }
    }
    for i in upto((qi - 1) / 2) {
        for j in 0..mi / 2 {
            near.push((qi * j + 2 * i + 1 + h, qi * j + 2 * i + 1 + h));
        }
    }
    for i in upto((qi - 1) / 2) {
        for j in 0..mi / 2 - 1 {
            near.push((qi * j + 2 * i + 1, qi * (j + 1) + 2 * i + 1));
        }
    }
    for i in upto((qi - 3) / 2) {
        for j in 0..mi / 2 - 1 {
            near.push((qi * j + 2 * i + 2 + h, qi * (j + 1) + 2 * i + 2 + h));
        }
    }
    near.extend(upto((qi - 3) / 2).map(|i| (2 * i + 3 - qi + h, 2 * i + 2 + h)));
    near.extend(upto((qi - 3) / 2).map(|i| (n - (2 * i + 1), qi - (2 * i + 2))));
    (collect_cells(m * q, quasi), collect_cells(m * q, near))
}

/// The `n - 1` sets of the cyclic domatic family as given, before repair.
fn domatic_family(n: usize) -> Vec<Vec<Cell>> {
    let (ni, h) = (n as i64, n as i64 / 2);
    (1..ni)
        .map(|j| {
            let mut pts: Vec<(i64, i64)> = (1..=h).map(|i| (i, i + j - 1)).collect();
            pts.extend((1..=h).map(|i| (i + h, i + h + j)));
            if j <= h {
                pts.push((j + h, j + h));
            } else if j < ni - 1 {
                pts.push((j + h + 1, j + h));
            } else {
                pts.extend([(h, h - 1), (1, h)]);
            }
            collect_cells(n, pts)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// parameter checks

fn even_order(n: usize) -> Result<()> {
    if n < 4 || !n.is_multiple_of(2) {
        return Err(Error::InvalidParameters(format!(
            "n = {n} must be even and at least 4"
        )));
    }
    Ok(())
}

fn even_m_odd_q(m: usize, q: usize, min_m: usize) -> Result<()> {
    if m < min_m || !m.is_multiple_of(2) {
        return Err(Error::InvalidParameters(format!(
            "m = {m} must be even and at least {min_m}"
        )));
    }
    if q < 3 || q.is_multiple_of(2) {
        return Err(Error::InvalidParameters(format!(
            "q = {q} must be odd and at least 3"
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// 3-dominating sets of size n + 1

/// Validates a formula quasi-transversal as a 3-dominating set, falling back
/// to search when it fails.
fn finish_3ds(
    claim: Claim,
    g: Generator,
    formula: Vec<Cell>,
    opts: &BuildOptions,
) -> Result<WitnessCertificate> {
    let l = g.build()?;
    let n = l.order();
    let mut notes = Vec::new();
    let formula_ok = duplicates(&formula).is_empty()
        && check_quasi_transversal(&l, &formula).is_ok()
        && three_dominating(&l, &formula);
    let (provenance, cells) = if formula_ok {
        (Provenance::PaperFormula, formula)
    } else {
        notes.push(formula_failure(&l, &formula, 3));
        let found = quasi_by_search(&l, opts)?;
        if !three_dominating(&l, found.cells()) {
            return Err(Error::NoWitnessFound(
                "searched quasi-transversal is not 3-dominating".into(),
            ));
        }
        notes.push(format!("witness found by search (seed {})", opts.seed));
        (Provenance::SearchFallback, found.cells().to_vec())
    };
    let set = CellSet::new(n, PlexKind::QuasiTransversal, cells)?;
    notes.push(format!(
        "3-dominating set of size {}; gamma_3 >= {n} for any square of order {n}",
        n + 1
    ));
    Ok(certify(
        claim,
        SquareDescriptor::generated(g),
        provenance,
        Witness::Single(set),
        notes,
        &l,
    ))
}

fn formula_failure(l: &LatinSquare, cells: &[Cell], k: usize) -> String {
    let dup = duplicates(cells);
    if !dup.is_empty() {
        return format!("formula repeats cells {}", fmt_cells(&dup));
    }
    if let Err(v) = check_quasi_transversal(l, cells) {
        return format!("formula set is not a quasi-transversal: {v}");
    }
    format!("formula set is not {k}-dominating")
}

fn quasi_by_search(l: &LatinSquare, opts: &BuildOptions) -> Result<CellSet> {
    if l.order() <= MAX_FIND_ORDER {
        find_quasi_transversal_with(l, opts.exec)?.ok_or_else(|| {
            Error::NoWitnessFound("exhaustive search found no quasi-transversal".into())
        })
    } else {
        match randomized_quasi(l, opts.seed, opts.budget, opts.restarts) {
            Heuristic::Found(s) => Ok(s),
            Heuristic::Inconclusive => Err(Error::NoWitnessFound(
                "randomized search inconclusive (not a proof of nonexistence)".into(),
            )),
        }
    }
}

fn certify(
    claim: Claim,
    square: SquareDescriptor,
    provenance: Provenance,
    witness: Witness,
    notes: Vec<String>,
    l: &LatinSquare,
) -> WitnessCertificate {
    let problems = claim_problems(claim, l, &witness);
    let mut notes = notes;
    notes.extend(problems.iter().map(|p| format!("rejected: {p}")));
    WitnessCertificate {
        claim,
        square,
        provenance,
        witness,
        verdict: problems.is_empty(),
        notes,
    }
}

/// Size `n + 1` 3-dominating set of the cyclic square of even order `n`.
pub fn build_3ds_q1(n: usize, opts: &BuildOptions) -> Result<WitnessCertificate> {
    even_order(n)?;
    finish_3ds(
        Claim::Case1Dominating,
        Generator::Cyclic { n },
        cyclic_quasi_cells(n),
        opts,
    )
}

/// Size `n + 1` 3-dominating set of `qstep(m, q)`, `m` even, `q` odd.
pub fn build_3ds_qgen(m: usize, q: usize, opts: &BuildOptions) -> Result<WitnessCertificate> {
    even_m_odd_q(m, q, 2)?;
    finish_3ds(
        Claim::Case2Dominating,
        Generator::Qstep { m, q },
        qstep_quasi_cells(m, q),
        opts,
    )
}

// ---------------------------------------------------------------------------
// domatic partition

/// `n - 1` disjoint 3-dominating sets of the cyclic square of even order `n`.
///
/// The family as written assigns cell `(1, n/2)` to two sets and leaves
/// `(1, n)` unused; the repeated cell is kept only in the earlier set and the
/// unused cells go to the last set. Both adjustments are listed in the notes.
pub fn build_domatic_partition_cyclic(n: usize) -> Result<WitnessCertificate> {
    even_order(n)?;
    let l = LatinSquare::cyclic(n);
    let mut parts = domatic_family(n);
    let mut notes = Vec::new();
    let mut owner: BTreeMap<Cell, usize> = BTreeMap::new();
    for (j, part) in parts.iter_mut().enumerate() {
        part.sort();
        part.dedup();
        let mut removed = Vec::new();
        part.retain(|c| {
            if let Some(&first) = owner.get(c) {
                removed.push((*c, first));
                false
            } else {
                owner.insert(*c, j);
                true
            }
        });
        for (c, first) in removed {
            notes.push(format!(
                "cell {c} appears in sets {} and {}; kept in set {}",
                first + 1,
                j + 1,
                first + 1
            ));
        }
    }
    let unused: Vec<Cell> = (0..n)
        .flat_map(|r| (0..n).map(move |c| Cell::new(r, c)))
        .filter(|c| !owner.contains_key(c))
        .collect();
    if !unused.is_empty() {
        notes.push(format!(
            "uncovered cells {} added to set {}",
            fmt_cells(&unused),
            n - 1
        ));
        parts.last_mut().expect("n >= 4").extend(unused);
    }
    let g = LatinSquareGraph::implicit(&l);
    for (j, p) in parts.iter().enumerate() {
        if !is_k_dominating(&g, p, 3)?.verdict {
            return Err(Error::ValidationFailure(format!(
                "set {} is not 3-dominating",
                j + 1
            )));
        }
    }
    notes.push(format!(
        "d_3 >= {} from this partition and d_3 <= floor({}/{}) = {}",
        n - 1,
        n * n,
        n + 1,
        n * n / (n + 1)
    ));
    let witness = Witness::Family(
        parts
            .into_iter()
            .map(|p| CellSet::vertex_set(n, p))
            .collect::<Result<_>>()?,
    );
    Ok(certify(
        Claim::CyclicDomaticPartition,
        SquareDescriptor::generated(Generator::Cyclic { n }),
        Provenance::PaperFormula,
        witness,
        notes,
        &l,
    ))
}

// ---------------------------------------------------------------------------
// 2-plexes as a quasi-transversal plus a disjoint near-transversal

fn finish_2plex(
    claim: Claim,
    g: Generator,
    (quasi, near): (Vec<Cell>, Vec<Cell>),
    opts: &BuildOptions,
) -> Result<WitnessCertificate> {
    let l = g.build()?;
    let n = l.order();
    let mut notes = Vec::new();
    let ok = duplicates(&quasi).is_empty()
        && duplicates(&near).is_empty()
        && check_quasi_transversal(&l, &quasi).is_ok()
        && check_near_transversal(&l, &near).is_ok();
    let (provenance, witness) = if ok {
        let q = CellSet::new(n, PlexKind::QuasiTransversal, quasi)?;
        let nt = CellSet::new(n, PlexKind::NearTransversal, near)?;
        let w = Witness::Family(vec![q, nt]);
        if claim_problems(claim, &l, &w).is_empty() {
            if let Some((_, _, s)) = quasi_doubled(&l, w.sets()[0].cells()) {
                notes.push(format!("quasi-transversal doubles symbol {}", s + 1));
            }
            if let Some((_, _, s)) = near_missing(&l, w.sets()[1].cells()) {
                notes.push(format!("near-transversal misses symbol {}", s + 1));
            }
            (Provenance::PaperFormula, Some(w))
        } else {
            notes.push("formula parts do not combine into a 2-plex".into());
            (Provenance::SearchFallback, None)
        }
    } else {
        let dq = duplicates(&quasi);
        let dn = duplicates(&near);
        notes.push(if !dq.is_empty() || !dn.is_empty() {
            format!("formula repeats cells {}", fmt_cells(&[dq, dn].concat()))
        } else if let Err(v) = check_quasi_transversal(&l, &quasi) {
            format!("formula quasi-transversal invalid: {v}")
        } else {
            format!(
                "formula near-transversal invalid: {}",
                check_near_transversal(&l, &near)
                    .err()
                    .map(|v| v.to_string())
                    .unwrap_or_default()
            )
        });
        (Provenance::SearchFallback, None)
    };
    let witness = match witness {
        Some(w) => w,
        None => {
            let plex =
                if n <= MAX_FIND_ORDER {
                    find_kplex_with(&l, 2, opts.exec)?.ok_or_else(|| {
                        Error::NoWitnessFound("exhaustive search found no 2-plex".into())
                    })?
                } else {
                    match randomized_kplex(&l, 2, opts.seed, opts.budget, opts.restarts) {
                        Heuristic::Found(p) => p,
                        Heuristic::Inconclusive => return Err(Error::NoWitnessFound(
                            "randomized 2-plex search inconclusive (not a proof of nonexistence)"
                                .into(),
                        )),
                    }
                };
            notes.push(format!("2-plex found by search (seed {})", opts.seed));
            Witness::Single(plex)
        }
    };
    Ok(certify(
        claim,
        SquareDescriptor::generated(g),
        provenance,
        witness,
        notes,
        &l,
    ))
}

/// 2-plex of the cyclic square of even order `n`.
pub fn build_2plex_q1(n: usize, opts: &BuildOptions) -> Result<WitnessCertificate> {
    even_order(n)?;
    finish_2plex(
        Claim::TwoPlexCyclic,
        Generator::Cyclic { n },
        two_plex_cyclic_cells(n),
        opts,
    )
}

/// 2-plex of `qstep(2, q)`, `q` odd.
pub fn build_2plex_m2(q: usize, opts: &BuildOptions) -> Result<WitnessCertificate> {
    even_m_odd_q(2, q, 2)?;
    finish_2plex(
        Claim::TwoPlexTwoBlocks,
        Generator::Qstep { m: 2, q },
        two_plex_two_block_cells(q),
        opts,
    )
}

/// 2-plex of `qstep(m, q)`, `m >= 4` even, `q` odd.
pub fn build_2plex_general(m: usize, q: usize, opts: &BuildOptions) -> Result<WitnessCertificate> {
    even_m_odd_q(m, q, 4)?;
    finish_2plex(
        Claim::TwoPlexGeneral,
        Generator::Qstep { m, q },
        two_plex_general_cells(m, q),
        opts,
    )
}

// ---------------------------------------------------------------------------
// two-step decomposition

/// Four disjoint transversals of the Klein four-group table, as the column
/// used in each row. Derived by exhaustive packing; see the tests.
const BASE_DECOMPOSITION: [[usize; 4]; 4] =
    [[0, 2, 3, 1], [1, 3, 2, 0], [2, 0, 1, 3], [3, 1, 0, 2]];

/// Checks `[[A, A + h], [A + h, A]]` down to the order-4 base.
fn check_doubling(l: &LatinSquare) -> Result<()> {
    let mut size = l.order();
    while size > 4 {
        let h = size / 2;
        for i in 0..size {
            for j in 0..size {
                let a = l.get(i % h, j % h);
                let want = if (i < h) != (j < h) { a + h } else { a };
                if a >= h || l.get(i, j) != want {
                    return Err(Error::StructureMismatch(format!(
                        "order-{size} block doubling fails at ({},{})",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        size = h;
    }
    let base = LatinSquare::klein_four();
    if (0..4).any(|i| (0..4).any(|j| l.get(i, j) != base.get(i, j))) {
        return Err(Error::StructureMismatch(
            "top-left order-4 block is not the Klein four-group table".into(),
        ));
    }
    Ok(())
}

/// Splits a transversal of the order-`h` top-left block into two
/// transversals of the order-`2h` square.
fn lift(cols: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let h = cols.len();
    let hh = h / 2;
    let mut t1 = vec![0; 2 * h];
    let mut t2 = vec![0; 2 * h];
    for (r, &c) in cols.iter().enumerate() {
        if r < hh {
            t1[r] = c;
            t1[r + hh] = c + h;
            t2[r + h] = c + h;
            t2[r + hh + h] = c;
        } else {
            t1[r - hh + h] = c;
            t1[r + h] = c + h;
            t2[r] = c;
            t2[r - hh] = c + h;
        }
    }
    (t1, t2)
}

/// `n` disjoint transversals of a two-step square of order `n = 2^k`.
pub fn decompose_two_step(l: &LatinSquare) -> Result<Vec<CellSet>> {
    let n = l.order();
    if n < 4 || !n.is_power_of_two() {
        return Err(Error::StructureMismatch(format!(
            "order {n} is not a power of two >= 4"
        )));
    }
    let step = l.is_qstep_type(StepTypeSpec::new(2, n / 2))?;
    if !step.holds {
        return Err(Error::StructureMismatch(format!(
            "not of {}-step type with two block classes",
            n / 2
        )));
    }
    check_doubling(l)?;
    let mut family: Vec<Vec<usize>> = BASE_DECOMPOSITION.iter().map(|t| t.to_vec()).collect();
    while family[0].len() < n {
        family = family
            .iter()
            .flat_map(|t| {
                let (a, b) = lift(t);
                [a, b]
            })
            .collect();
    }
    let sets = family
        .into_iter()
        .map(|cols| {
            let cells = cols
                .iter()
                .enumerate()
                .map(|(r, &c)| Cell::new(r, c))
                .collect();
            CellSet::new(n, PlexKind::Transversal, cells)
        })
        .collect::<Result<Vec<_>>>()?;
    for (i, s) in sets.iter().enumerate() {
        check_transversal(l, s.cells())
            .map_err(|v| Error::ValidationFailure(format!("lifted set {}: {v}", i + 1)))?;
    }
    if !pairwise_disjoint(&sets.iter().collect::<Vec<_>>()) {
        return Err(Error::ValidationFailure(
            "lifted transversals overlap".into(),
        ));
    }
    Ok(sets)
}

pub fn build_two_step_decomposition(k: u32) -> Result<WitnessCertificate> {
    let g = Generator::TwoStep { k };
    let l = g.build()?;
    let sets = decompose_two_step(&l)?;
    let notes = vec![format!(
        "{} disjoint transversals, so tau = {} and an orthogonal mate exists",
        sets.len(),
        sets.len()
    )];
    Ok(certify(
        Claim::TwoStepDecomposition,
        SquareDescriptor::generated(g),
        Provenance::PaperFormula,
        Witness::Family(sets),
        notes,
        &l,
    ))
}

// ---------------------------------------------------------------------------
// transforms between transversals, near- and quasi-transversals

fn require(l: &LatinSquare, set: &CellSet, kind: PlexKind, expected: &str) -> Result<()> {
    if set.order() != l.order() {
        return Err(Error::DimensionMismatch(format!(
            "cell set of order {} for square of order {}",
            set.order(),
            l.order()
        )));
    }
    let v = match kind {
        PlexKind::Transversal => check_transversal(l, set.cells()),
        PlexKind::NearTransversal => check_near_transversal(l, set.cells()),
        _ => check_quasi_transversal(l, set.cells()),
    };
    v.map_err(|v| Error::InvalidInputPlex {
        expected: expected.into(),
        reason: v.to_string(),
    })
}

/// A transversal plus the lexicographically least cell that keeps it a
/// quasi-transversal.
pub fn quasi_from_transversal(l: &LatinSquare, t: &CellSet) -> Result<CellSet> {
    require(l, t, PlexKind::Transversal, "transversal")?;
    let n = l.order();
    (0..n)
        .flat_map(|r| (0..n).map(move |c| Cell::new(r, c)))
        .filter(|c| !t.contains(*c))
        .map(|c| [t.cells(), &[c]].concat())
        .find(|cells| check_quasi_transversal(l, cells).is_ok())
        .map(|cells| CellSet::new(n, PlexKind::QuasiTransversal, cells))
        .unwrap_or_else(|| {
            Err(Error::NotConstructible(
                "no cell outside the transversal".into(),
            ))
        })
}

/// Drops two cells, at least one carrying the doubled symbol, so that a
/// near-transversal remains. Pairs are tried in lexicographic order.
pub fn near_from_quasi(l: &LatinSquare, q: &CellSet) -> Result<CellSet> {
    require(l, q, PlexKind::QuasiTransversal, "quasi-transversal")?;
    let n = l.order();
    let (dr, dc, ds) = quasi_doubled(l, q.cells()).expect("validated above");
    let cells = q.cells();
    for a in 0..cells.len() {
        for b in a + 1..cells.len() {
            let (x, y) = (cells[a], cells[b]);
            if l.get(x.row, x.col) != ds && l.get(y.row, y.col) != ds {
                continue;
            }
            let rest: Vec<Cell> = cells
                .iter()
                .copied()
                .filter(|&c| c != x && c != y)
                .collect();
            if check_near_transversal(l, &rest).is_ok() {
                return CellSet::new(n, PlexKind::NearTransversal, rest);
            }
        }
    }
    Err(Error::NotConstructible(format!(
        "no two cells of this quasi-transversal (doubled row {}, column {}, symbol {}) leave a near-transversal",
        dr + 1,
        dc + 1,
        ds + 1
    )))
}

/// Adds the missing symbol twice: once in the unused row and once in the
/// unused column.
pub fn quasi_from_near(l: &LatinSquare, near: &CellSet) -> Result<CellSet> {
    require(l, near, PlexKind::NearTransversal, "near-transversal")?;
    let n = l.order();
    let (r0, c0, s0) = near_missing(l, near.cells()).expect("validated above");
    let in_row = (0..n)
        .map(|c| Cell::new(r0, c))
        .find(|c| l.get(c.row, c.col) == s0);
    let in_col = (0..n)
        .map(|r| Cell::new(r, c0))
        .find(|c| l.get(c.row, c.col) == s0);
    let (a, b) = (in_row.expect("Latin row"), in_col.expect("Latin column"));
    if a == b {
        return Err(Error::NotConstructible(format!(
            "near-transversal is completable at this cell {a}"
        )));
    }
    let cells = [near.cells(), &[a, b]].concat();
    check_quasi_transversal(l, &cells).map_err(|v| Error::ValidationFailure(v.to_string()))?;
    CellSet::new(n, PlexKind::QuasiTransversal, cells)
}

/// A transversal contained in the quasi-transversal, if any.
pub fn transversal_in_quasi(l: &LatinSquare, q: &CellSet) -> Result<Option<CellSet>> {
    require(l, q, PlexKind::QuasiTransversal, "quasi-transversal")?;
    let n = l.order();
    for &x in q.cells() {
        let rest: Vec<Cell> = q.cells().iter().copied().filter(|&c| c != x).collect();
        if check_transversal(l, &rest).is_ok() {
            return CellSet::new(n, PlexKind::Transversal, rest).map(Some);
        }
    }
    Ok(None)
}

/// Largest order for [`build_transforms`].
pub const MAX_TRANSFORM_ORDER: usize = 8;

/// Near-transversal, the quasi-transversal built from it, and the
/// near-transversal recovered from that; plus a transversal and its
/// quasi-transversal extension when the square has a transversal.
pub fn build_transforms(g: Generator, opts: &BuildOptions) -> Result<WitnessCertificate> {
    let l = g.build()?;
    let n = l.order();
    if n < 2 {
        return Err(Error::OrderTooSmall { order: n, min: 2 });
    }
    if n > MAX_TRANSFORM_ORDER {
        return Err(Error::OrderTooLarge {
            order: n,
            max: MAX_TRANSFORM_ORDER,
        });
    }
    let mut notes = Vec::new();
    let mut family = Vec::new();
    let nears = enumerate_near_transversals(&l, 4096)?.witnesses;
    match nears
        .iter()
        .find_map(|nt| quasi_from_near(&l, nt).ok().map(|q| (nt, q)))
    {
        Some((nt, q)) => {
            notes.push("pair 1: quasi-transversal built from a near-transversal".into());
            family.extend([nt.clone(), q]);
        }
        None => notes.push(
            "every near-transversal is completable; no quasi-transversal built from one".into(),
        ),
    }
    let quasis = match family.get(1) {
        Some(q) => vec![q.clone()],
        None => vec![find_quasi_transversal_with(&l, opts.exec)?
            .ok_or_else(|| Error::NoWitnessFound("no quasi-transversal".into()))?],
    };
    match quasis
        .iter()
        .find_map(|q| near_from_quasi(&l, q).ok().map(|nt| (nt, q)))
    {
        Some((nt, q)) => {
            notes.push(format!(
                "pair {}: near-transversal cut from a quasi-transversal",
                family.len() / 2 + 1
            ));
            family.extend([nt, q.clone()]);
        }
        None => notes.push("no near-transversal inside the quasi-transversal examined".into()),
    }
    match find_transversal(&l)? {
        Some(t) => {
            let qt = quasi_from_transversal(&l, &t)?;
            let inner = transversal_in_quasi(&l, &qt)?;
            notes.push(format!(
                "pair {}: transversal extended by one cell; recovered: {}",
                family.len() / 2 + 1,
                inner.is_some()
            ));
            family.extend([t, qt]);
        }
        None => notes.push("square has no transversal".into()),
    }
    if family.is_empty() {
        return Err(Error::NotConstructible(
            "no transform applies to this square".into(),
        ));
    }
    Ok(certify(
        Claim::QuasiNearTransforms,
        SquareDescriptor::generated(g),
        Provenance::PaperFormula,
        Witness::Family(family),
        notes,
        &l,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lsgraph::build_graph;
    use crate::plexes::packing::max_disjoint_transversals;
    use crate::plexes::search::enumerate_quasi_transversals;

    fn opts() -> BuildOptions {
        BuildOptions::default()
    }

    #[test]
    fn base_decomposition_matches_packing() {
        let base = LatinSquare::klein_four();
        let t = max_disjoint_transversals(&base).unwrap();
        let derived: Vec<Vec<usize>> = t
            .family
            .iter()
            .map(|s| s.cells().iter().map(|c| c.col).collect())
            .collect();
        let embedded: Vec<Vec<usize>> = BASE_DECOMPOSITION.iter().map(|t| t.to_vec()).collect();
        assert_eq!(derived, embedded);
    }

    #[test]
    fn two_step_orders() {
        for k in 2..=4 {
            let l = LatinSquare::two_step_pow2(k).unwrap();
            let sets = decompose_two_step(&l).unwrap();
            assert_eq!(sets.len(), 1 << k);
            let cert = build_two_step_decomposition(k).unwrap();
            assert!(cert.verdict, "{:?}", cert.notes);
        }
        assert!(matches!(
            decompose_two_step(&LatinSquare::cyclic(4)),
            Err(Error::StructureMismatch(_))
        ));
        assert!(decompose_two_step(&LatinSquare::qstep(4, 2)).is_err());
    }

    #[test]
    fn cyclic_quasi_cells_at_four() {
        let want: Vec<Cell> = [(1, 1), (2, 2), (3, 4), (4, 1), (3, 3)]
            .iter()
            .map(|&(r, c)| Cell::one_based(r, c))
            .collect();
        assert_eq!(cyclic_quasi_cells(4), want);
        for n in [4, 6, 8, 10] {
            let c = build_3ds_q1(n, &opts()).unwrap();
            assert!(c.verdict);
            assert_eq!(c.provenance, Provenance::PaperFormula);
        }
        assert!(build_3ds_q1(5, &opts()).is_err());
    }

    #[test]
    fn case2_formula() {
        for (m, q) in [(2, 3), (4, 3), (2, 5), (6, 3)] {
            let c = build_3ds_qgen(m, q, &opts()).unwrap();
            assert!(c.verdict, "{m},{q}: {:?}", c.notes);
            assert_eq!(c.provenance, Provenance::PaperFormula);
            assert_eq!(c.witness.sets()[0].len(), m * q + 1);
        }
        assert!(build_3ds_qgen(3, 3, &opts()).is_err());
    }

    #[test]
    fn broken_formula_uses_search() {
        let g = Generator::Cyclic { n: 4 };
        let bogus = (0..5).map(|i| Cell::new(i % 4, 0)).collect();
        let c = finish_3ds(Claim::Case1Dominating, g, bogus, &opts()).unwrap();
        assert!(c.verdict);
        assert_eq!(c.provenance, Provenance::SearchFallback);
        assert!(c.notes[0].contains("repeats"));
        let c = finish_2plex(Claim::TwoPlexCyclic, g, (vec![], vec![]), &opts()).unwrap();
        assert!(c.verdict);
        assert_eq!(c.provenance, Provenance::SearchFallback);
    }

    #[test]
    fn domatic_partitions() {
        for n in [4, 6, 8, 10] {
            let c = build_domatic_partition_cyclic(n).unwrap();
            assert!(c.verdict, "{:?}", c.notes);
            let sets = c.witness.sets();
            assert_eq!(sets.len(), n - 1);
            assert_eq!(sets.iter().map(|s| s.len()).sum::<usize>(), n * n);
            assert!(c.notes.iter().any(|x| x.contains("appears in sets")));
        }
    }

    #[test]
    fn two_plexes() {
        for n in [4, 6, 10] {
            let c = build_2plex_q1(n, &opts()).unwrap();
            assert!(c.verdict);
            assert_eq!(c.provenance, Provenance::PaperFormula);
        }
        for q in [3, 5] {
            let c = build_2plex_m2(q, &opts()).unwrap();
            assert!(c.verdict);
            assert!(c
                .notes
                .iter()
                .any(|x| x == &format!("quasi-transversal doubles symbol {}", 2 * q)));
        }
        for (m, q) in [(4, 3), (6, 3), (4, 5)] {
            let c = build_2plex_general(m, q, &opts()).unwrap();
            assert!(c.verdict);
            assert_eq!(c.provenance, Provenance::PaperFormula);
        }
    }

    #[test]
    fn certificates_round_trip() {
        let c = build_2plex_general(4, 3, &opts()).unwrap();
        let text = serde_json::to_string(&c).unwrap();
        let back: WitnessCertificate = serde_json::from_str(&text).unwrap();
        assert_eq!(back, c);
        assert!(back.revalidate().unwrap().is_empty());
        let mut bad = back.clone();
        if let Witness::Family(f) = &mut bad.witness {
            let mut cells = f[1].cells().to_vec();
            cells[0] = Cell::new(cells[0].row, (cells[0].col + 1) % 12);
            if let Ok(s) = CellSet::new(12, PlexKind::NearTransversal, cells) {
                f[1] = s;
            }
        }
        assert!(!bad.revalidate().unwrap().is_empty());
    }

    #[test]
    fn transforms() {
        let c3 = LatinSquare::cyclic(3);
        for t in crate::plexes::search::all_transversals(&c3, 10).unwrap() {
            let q = quasi_from_transversal(&c3, &t).unwrap();
            assert_eq!(q.len(), 4);
            assert_eq!(transversal_in_quasi(&c3, &q).unwrap(), Some(t));
        }
        let c4 = LatinSquare::cyclic(4);
        for q in enumerate_quasi_transversals(&c4, 1000).unwrap().witnesses {
            let near = near_from_quasi(&c4, &q).unwrap();
            assert!(subset(&near, &q));
            let again = quasi_from_near(&c4, &near).unwrap();
            assert!(subset(&near, &again));
            assert_eq!(transversal_in_quasi(&c4, &q).unwrap(), None);
        }
        for near in enumerate_near_transversals(&c4, 1000).unwrap().witnesses {
            let q = quasi_from_near(&c4, &near).unwrap();
            let (_, _, s) = quasi_doubled(&c4, q.cells()).unwrap();
            assert_eq!(Some(s), near_missing(&c4, near.cells()).map(|m| m.2));
        }
        // some quasi-transversals of the cyclic square of order 5 contain no near-transversal
        let c5 = LatinSquare::cyclic(5);
        let qs = enumerate_quasi_transversals(&c5, 1000).unwrap().witnesses;
        let failures = qs
            .iter()
            .filter(|q| near_from_quasi(&c5, q).is_err())
            .count();
        assert_eq!(qs.len(), 400);
        assert_eq!(failures, 100);
        for g in [
            Generator::Cyclic { n: 5 },
            Generator::Cyclic { n: 6 },
            Generator::Qstep { m: 2, q: 3 },
        ] {
            assert!(build_transforms(g, &opts()).unwrap().verdict);
        }
    }

    #[test]
    fn quasi_certificates_are_three_dominating() {
        let c6 = LatinSquare::cyclic(6);
        let g = build_graph(&c6).unwrap();
        let cert = build_3ds_q1(6, &opts()).unwrap();
        assert!(
            is_k_dominating(&g, cert.witness.sets()[0].cells(), 3)
                .unwrap()
                .verdict
        );
    }
}
