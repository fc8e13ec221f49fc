//! Existence sweep for near-transversals, quasi-transversals and 2-plexes
//! over generated squares and random isotopes of them.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cells::CellSet;
use crate::error::Result;
use crate::exec::Exec;
use crate::latin::{Generator, LatinSquare, SquareJson};
use crate::plexes::search::{
    find_kplex_with, find_near_transversal_with, find_quasi_transversal_with, MAX_FIND_ORDER,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SweepFamily {
    Cyclic,
    /// `qstep(m, q)` with `m, q >= 2`.
    Qstep,
    TwoStep,
    /// Random isotopes of the other enabled families' squares.
    Isotopes,
}

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub min_order: usize,
    pub max_order: usize,
    pub families: Vec<SweepFamily>,
    pub isotopes_per_order: usize,
    pub seed: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            min_order: 1,
            max_order: 8,
            families: vec![
                SweepFamily::Cyclic,
                SweepFamily::Qstep,
                SweepFamily::Isotopes,
            ],
            isotopes_per_order: 20,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    pub label: String,
    pub order: usize,
    /// `None` where the notion is vacuous at this order.
    pub near: Option<bool>,
    pub quasi: Option<bool>,
    pub two_plex: Option<bool>,
}

impl SweepRow {
    pub fn is_counterexample(&self) -> bool {
        [self.near, self.quasi, self.two_plex].contains(&Some(false))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub label: String,
    pub square: SquareJson,
    pub missing: Vec<&'static str>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    pub counterexample: Option<Counterexample>,
}

struct Entry {
    label: String,
    square: LatinSquare,
}

fn entries(cfg: &SweepConfig) -> Vec<Entry> {
    let mut out = Vec::new();
    let max = cfg.max_order.min(MAX_FIND_ORDER);
    for n in cfg.min_order.max(1)..=max {
        let mut bases = Vec::new();
        if cfg.families.contains(&SweepFamily::Cyclic) {
            bases.push(Generator::Cyclic { n });
        }
        if cfg.families.contains(&SweepFamily::Qstep) {
            for m in 2..n {
                if n % m == 0 && n / m >= 2 {
                    bases.push(Generator::Qstep { m, q: n / m });
                }
            }
        }
        if cfg.families.contains(&SweepFamily::TwoStep) && n >= 4 && n.is_power_of_two() {
            bases.push(Generator::TwoStep {
                k: n.trailing_zeros(),
            });
        }
        let built: Vec<(Generator, LatinSquare)> = bases
            .iter()
            .map(|&g| (g, g.build().expect("sweep generators are well-formed")))
            .collect();
        for (g, sq) in &built {
            out.push(Entry {
                label: g.to_string(),
                square: sq.clone(),
            });
        }
        if cfg.families.contains(&SweepFamily::Isotopes) {
            // isotopes of cyclic(n) when no other base is enabled
            let pool = if built.is_empty() {
                vec![(Generator::Cyclic { n }, LatinSquare::cyclic(n))]
            } else {
                built
            };
            let mut rng = ChaCha8Rng::seed_from_u64(
                cfg.seed ^ (n as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15),
            );
            for i in 0..cfg.isotopes_per_order {
                let (g, sq) = &pool[i % pool.len()];
                out.push(Entry {
                    label: format!("isotope#{i}({g})"),
                    square: sq.random_isotope(&mut rng),
                });
            }
        }
    }
    out
}

/// Searches each square for a near-transversal, a quasi-transversal and a
/// 2-plex. Rows stop at the first counterexample.
pub fn conjecture_sweep(cfg: &SweepConfig) -> Result<SweepReport> {
    conjecture_sweep_with(cfg, Exec::default())
}

pub fn conjecture_sweep_with(cfg: &SweepConfig, exec: Exec) -> Result<SweepReport> {
    let list = entries(cfg);
    // parallelism is across squares; each inner search runs sequentially
    let rows = exec.map(&list, |e| sweep_one(e).map(|(row, _)| row));
    let mut report = SweepReport {
        rows: Vec::new(),
        counterexample: None,
    };
    for (entry, row) in list.iter().zip(rows) {
        let row = row?;
        let bad = row.is_counterexample();
        if bad {
            let missing = [
                ("near", row.near),
                ("quasi", row.quasi),
                ("2-plex", row.two_plex),
            ]
            .into_iter()
            .filter(|(_, v)| *v == Some(false))
            .map(|(k, _)| k)
            .collect();
            report.counterexample = Some(Counterexample {
                label: row.label.clone(),
                square: entry.square.to_json_value(),
                missing,
            });
        }
        report.rows.push(row);
        if bad {
            break;
        }
    }
    Ok(report)
}

type Witnesses = (Option<CellSet>, Option<CellSet>, Option<CellSet>);

fn sweep_one(e: &Entry) -> Result<(SweepRow, Witnesses)> {
    let n = e.square.order();
    let near = find_near_transversal_with(&e.square, Exec::Sequential)?;
    let quasi = if n >= 2 {
        Some(find_quasi_transversal_with(&e.square, Exec::Sequential)?)
    } else {
        None
    };
    let plex = if n >= 2 {
        Some(find_kplex_with(&e.square, 2, Exec::Sequential)?)
    } else {
        None
    };
    let row = SweepRow {
        label: e.label.clone(),
        order: n,
        near: Some(near.is_some()),
        quasi: quasi.as_ref().map(Option::is_some),
        two_plex: plex.as_ref().map(Option::is_some),
    };
    Ok((row, (near, quasi.flatten(), plex.flatten())))
}

/// Same as [`conjecture_sweep`] but also returns the witnesses per row.
pub fn conjecture_sweep_witnesses(
    cfg: &SweepConfig,
) -> Result<Vec<(SweepRow, LatinSquare, Witnesses)>> {
    entries(cfg)
        .into_iter()
        .map(|e| {
            let (row, w) = sweep_one(&e)?;
            Ok((row, e.square, w))
        })
        .collect()
}
