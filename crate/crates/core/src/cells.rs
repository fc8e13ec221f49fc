//! Cells, cell sets tagged with their intended kind, and a fixed-width cell
//! bitset for orders up to 16.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A 0-based cell. Serialized as a 1-based `[row, col]` pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell {
    pub row: usize,
    pub col: usize,
}

impl Cell {
    pub const fn new(row: usize, col: usize) -> Self {
        Cell { row, col }
    }

    /// From 1-based coordinates.
    pub fn one_based(row: usize, col: usize) -> Self {
        assert!(row >= 1 && col >= 1, "1-based coordinates must be positive");
        Cell {
            row: row - 1,
            col: col - 1,
        }
    }

    #[inline]
    pub fn index(self, n: usize) -> usize {
        self.row * n + self.col
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row + 1, self.col + 1)
    }
}

impl Serialize for Cell {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.row + 1, self.col + 1].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cell {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [r, c] = <[usize; 2]>::deserialize(d)?;
        if r == 0 || c == 0 {
            return Err(serde::de::Error::custom("cells are 1-based"));
        }
        Ok(Cell::new(r - 1, c - 1))
    }
}

/// 256-bit cell set indexed by `row * n + col`.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellBits([u64; 4]);

impl fmt::Debug for CellBits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl CellBits {
    pub const CAPACITY: usize = 256;

    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Self {
        let mut b = CellBits::default();
        for i in it {
            b.insert(i);
        }
        b
    }

    pub fn from_cells(cells: &[Cell], n: usize) -> Self {
        Self::from_indices(cells.iter().map(|c| c.index(n)))
    }

    /// All `n * n` cells.
    pub fn full(n: usize) -> Self {
        Self::from_indices(0..n * n)
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        self.0[i >> 6] |= 1 << (i & 63);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        self.0[i >> 6] &= !(1 << (i & 63));
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        self.0[i >> 6] >> (i & 63) & 1 == 1
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & b == 0)
    }

    #[inline]
    pub fn union(&self, other: &Self) -> Self {
        let mut out = *self;
        out.0.iter_mut().zip(&other.0).for_each(|(a, b)| *a |= b);
        out
    }

    #[inline]
    pub fn intersection(&self, other: &Self) -> Self {
        let mut out = *self;
        out.0.iter_mut().zip(&other.0).for_each(|(a, b)| *a &= b);
        out
    }

    #[inline]
    pub fn difference(&self, other: &Self) -> Self {
        let mut out = *self;
        out.0.iter_mut().zip(&other.0).for_each(|(a, b)| *a &= !b);
        out
    }

    /// Lowest set index.
    pub fn first(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(k * 64 + b)
            })
        })
    }
}

/// What a cell set claims to be.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PlexKind {
    Transversal,
    PartialTransversal(usize),
    NearTransversal,
    QuasiTransversal,
    KPlex(usize),
    /// Any set of cells of the given size, with no structure claimed.
    VertexSet(usize),
}

impl PlexKind {
    /// Cardinality required in a square of order `n`.
    pub fn expected_len(self, n: usize) -> usize {
        match self {
            PlexKind::Transversal => n,
            PlexKind::PartialTransversal(len) => len,
            PlexKind::NearTransversal => n.saturating_sub(1),
            PlexKind::QuasiTransversal => n + 1,
            PlexKind::KPlex(k) => n * k,
            PlexKind::VertexSet(len) => len,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PlexKind::Transversal => "transversal",
            PlexKind::PartialTransversal(_) => "partial",
            PlexKind::NearTransversal => "near",
            PlexKind::QuasiTransversal => "quasi",
            PlexKind::KPlex(_) => "kplex",
            PlexKind::VertexSet(_) => "set",
        }
    }
}

impl fmt::Display for PlexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlexKind::PartialTransversal(len) => write!(f, "partial transversal of length {len}"),
            PlexKind::KPlex(k) => write!(f, "{k}-plex"),
            PlexKind::VertexSet(len) => write!(f, "set of {len} cells"),
            other => f.write_str(match other {
                PlexKind::Transversal => "transversal",
                PlexKind::NearTransversal => "near-transversal",
                _ => "quasi-transversal",
            }),
        }
    }
}

/// Distinct in-range cells of a square of order `order`, kept sorted, whose
/// count matches `kind`. Membership in the kind itself is checked by the
/// validators in [`crate::plexes`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "CellSetWire", into = "CellSetWire")]
pub struct CellSet {
    order: usize,
    kind: PlexKind,
    cells: Vec<Cell>,
}

impl CellSet {
    pub fn new(order: usize, kind: PlexKind, mut cells: Vec<Cell>) -> Result<Self> {
        if let Some(c) = cells.iter().find(|c| c.row >= order || c.col >= order) {
            return Err(Error::CellOutOfRange {
                row: c.row + 1,
                col: c.col + 1,
                order,
            });
        }
        cells.sort_unstable();
        if let Some(w) = cells.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidInputPlex {
                expected: kind.to_string(),
                reason: format!("duplicate cell {}", w[0]),
            });
        }
        let want = kind.expected_len(order);
        if cells.len() != want {
            return Err(Error::InvalidInputPlex {
                expected: kind.to_string(),
                reason: format!("{} cells, expected {want}", cells.len()),
            });
        }
        Ok(CellSet { order, kind, cells })
    }

    pub fn partial(order: usize, cells: Vec<Cell>) -> Result<Self> {
        let len = cells.len();
        Self::new(order, PlexKind::PartialTransversal(len), cells)
    }

    pub fn vertex_set(order: usize, cells: Vec<Cell>) -> Result<Self> {
        let len = cells.len();
        Self::new(order, PlexKind::VertexSet(len), cells)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn kind(&self) -> PlexKind {
        self.kind
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains(&self, cell: Cell) -> bool {
        self.cells.binary_search(&cell).is_ok()
    }

    /// Requires `order <= 16`.
    pub fn bits(&self) -> CellBits {
        CellBits::from_cells(&self.cells, self.order)
    }

    pub fn is_disjoint(&self, other: &CellSet) -> bool {
        self.cells.iter().all(|c| !other.contains(*c))
    }
}

#[derive(Serialize, Deserialize)]
struct CellSetWire {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    k: Option<usize>,
    order: usize,
    cells: Vec<Cell>,
}

impl From<CellSet> for CellSetWire {
    fn from(s: CellSet) -> Self {
        let k = match s.kind {
            PlexKind::KPlex(k) => Some(k),
            _ => None,
        };
        CellSetWire {
            kind: s.kind.name().to_string(),
            k,
            order: s.order,
            cells: s.cells,
        }
    }
}

impl TryFrom<CellSetWire> for CellSet {
    type Error = Error;

    fn try_from(w: CellSetWire) -> Result<Self> {
        let kind = match (w.kind.as_str(), w.k) {
            ("transversal", _) => PlexKind::Transversal,
            ("partial", _) => PlexKind::PartialTransversal(w.cells.len()),
            ("near", _) => PlexKind::NearTransversal,
            ("quasi", _) => PlexKind::QuasiTransversal,
            ("set", _) => PlexKind::VertexSet(w.cells.len()),
            ("kplex", Some(k)) => PlexKind::KPlex(k),
            ("kplex", None) => {
                return Err(Error::InvalidInputPlex {
                    expected: "kplex".into(),
                    reason: "missing k".into(),
                })
            }
            (other, _) => {
                return Err(Error::InvalidInputPlex {
                    expected: "known kind".into(),
                    reason: format!("unknown kind {other:?}"),
                })
            }
        };
        CellSet::new(w.order, kind, w.cells)
    }
}
