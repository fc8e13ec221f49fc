use serde::Serialize;

use crate::cells::{Cell, CellSet, PlexKind};
use crate::error::{Error, Result};
use crate::latin::LatinSquare;
use crate::plexes::search::{complete_partial, ensure_order};
use crate::plexes::validate::{check_kplex, check_partial_transversal};

/// The `(n - k)`-plex made of every cell outside a `k`-plex.
pub fn complement_plex(l: &LatinSquare, plex: &CellSet) -> Result<CellSet> {
    let n = l.order();
    let k = match plex.kind() {
        PlexKind::KPlex(k) => k,
        PlexKind::Transversal => 1,
        other => {
            return Err(Error::InvalidInputPlex {
                expected: "k-plex".into(),
                reason: format!("got {other}"),
            })
        }
    };
    if plex.order() != n {
        return Err(Error::DimensionMismatch(format!(
            "cell set of order {} for square of order {n}",
            plex.order()
        )));
    }
    check_kplex(l, plex.cells(), k).map_err(|v| Error::InvalidInputPlex {
        expected: format!("{k}-plex"),
        reason: v.to_string(),
    })?;
    let rest = (0..n)
        .flat_map(|r| (0..n).map(move |c| Cell::new(r, c)))
        .filter(|c| !plex.contains(*c))
        .collect();
    CellSet::new(n, PlexKind::KPlex(n - k), rest)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "class", rename_all = "kebab-case")]
pub enum Extendibility {
    /// Contained in the given transversal.
    Completable { transversal: CellSet },
    /// Not completable, but some single cell extends it.
    Extendible { extension: Cell },
    /// No single cell extends it.
    NonExtendible,
}

/// Largest order for [`extendibility_report`].
pub const MAX_EXTEND_ORDER: usize = 8;

pub fn extendibility_report(l: &LatinSquare, partial: &[Cell]) -> Result<Extendibility> {
    ensure_order(l, MAX_EXTEND_ORDER)?;
    check_partial_transversal(l, partial).map_err(|v| Error::InvalidPartial(v.to_string()))?;
    if let Some(t) = complete_partial(l, partial) {
        return Ok(Extendibility::Completable { transversal: t });
    }
    let n = l.order();
    let used = |f: &dyn Fn(&Cell) -> usize| {
        let mut v = vec![false; n];
        partial.iter().for_each(|c| v[f(c)] = true);
        v
    };
    let rows = used(&|c| c.row);
    let cols = used(&|c| c.col);
    let syms = used(&|c| l.get(c.row, c.col));
    let ext = (0..n)
        .filter(|&r| !rows[r])
        .flat_map(|r| (0..n).map(move |c| Cell::new(r, c)))
        .find(|c| !cols[c.col] && !syms[l.get(c.row, c.col)]);
    Ok(match ext {
        Some(extension) => Extendibility::Extendible { extension },
        None => Extendibility::NonExtendible,
    })
}
