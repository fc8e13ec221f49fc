//! Latin squares, Latin rectangles, step-type layouts, orthogonal arrays and
//! isotopies.
//!
//! Symbols are stored 0-based. Every constructor that accepts user data and
//! every serialized form uses 1-based rows, columns and symbols.

use std::collections::BTreeSet;
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest order accepted by the exhaustive engines.
pub const MAX_EXHAUSTIVE_ORDER: usize = 16;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LatinSquare {
    n: usize,
    cells: Vec<u16>,
}

impl fmt::Debug for LatinSquare {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LatinSquare")
            .field("order", &self.n)
            .field("rows", &self.rows())
            .finish()
    }
}

impl fmt::Display for LatinSquare {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_ls_text())
    }
}

impl LatinSquare {
    /// Validates a grid of 1-based symbols.
    ///
    /// Rows are scanned before columns; the first offending line is reported.
    pub fn validate(grid: &[Vec<usize>]) -> Result<Self> {
        let n = grid.len();
        if n == 0 {
            return Err(Error::NotSquare {
                order: 0,
                row: 0,
                len: 0,
            });
        }
        let mut cells = Vec::with_capacity(n * n);
        for (i, row) in grid.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotSquare {
                    order: n,
                    row: i + 1,
                    len: row.len(),
                });
            }
            for (j, &s) in row.iter().enumerate() {
                if s < 1 || s > n {
                    return Err(Error::SymbolOutOfRange {
                        row: i + 1,
                        col: j + 1,
                        symbol: s,
                        order: n,
                    });
                }
                cells.push((s - 1) as u16);
            }
        }
        let sq = LatinSquare { n, cells };
        sq.check_latin()?;
        Ok(sq)
    }

    /// Builds from 0-based symbols, still checking the Latin property.
    pub fn from_zero_based(n: usize, cells: Vec<u16>) -> Result<Self> {
        if cells.len() != n * n {
            return Err(Error::DimensionMismatch(format!(
                "{} cells for order {n}",
                cells.len()
            )));
        }
        if let Some(pos) = cells.iter().position(|&s| s as usize >= n) {
            return Err(Error::SymbolOutOfRange {
                row: pos / n + 1,
                col: pos % n + 1,
                symbol: cells[pos] as usize + 1,
                order: n,
            });
        }
        let sq = LatinSquare { n, cells };
        sq.check_latin()?;
        Ok(sq)
    }

    fn check_latin(&self) -> Result<()> {
        let n = self.n;
        let mut seen = vec![false; n];
        for i in 0..n {
            seen.iter_mut().for_each(|b| *b = false);
            for j in 0..n {
                let s = self.get(i, j);
                if std::mem::replace(&mut seen[s], true) {
                    return Err(Error::RowRepeat(i + 1, s + 1));
                }
            }
        }
        for j in 0..n {
            seen.iter_mut().for_each(|b| *b = false);
            for i in 0..n {
                let s = self.get(i, j);
                if std::mem::replace(&mut seen[s], true) {
                    return Err(Error::ColumnRepeat(j + 1, s + 1));
                }
            }
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.n
    }

    /// 0-based symbol at 0-based `(row, col)`.
    #[inline]
    pub fn get(&self, row: usize, col: usize) -> usize {
        self.cells[row * self.n + col] as usize
    }

    /// 1-based rows of 1-based symbols.
    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.cells
            .chunks(self.n)
            .map(|r| r.iter().map(|&s| s as usize + 1).collect())
            .collect()
    }

    /// `col_of[row * n + symbol]` is the column holding `symbol` in `row`.
    pub fn column_index(&self) -> Vec<u16> {
        let n = self.n;
        let mut out = vec![0u16; n * n];
        for i in 0..n {
            for j in 0..n {
                out[i * n + self.get(i, j)] = j as u16;
            }
        }
        out
    }

    /// Canonical cyclic square, `l(i,j) = ((i + j - 2) mod n) + 1` in 1-based terms.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1, "order must be positive");
        let cells = (0..n)
            .flat_map(|i| (0..n).map(move |j| ((i + j) % n) as u16))
            .collect();
        LatinSquare { n, cells }
    }

    /// Canonical q-step type square of order `m * q` with cyclic `q x q` blocks.
    ///
    /// Block `(i, j)` holds symbols `K*q + 1 ..= K*q + q` with `K = (i + j) mod m`.
    pub fn qstep(m: usize, q: usize) -> Self {
        assert!(m >= 1 && q >= 1, "m and q must be positive");
        let n = m * q;
        let mut cells = Vec::with_capacity(n * n);
        for r in 0..n {
            let (bi, s) = (r / q, r % q);
            for c in 0..n {
                let (bj, t) = (c / q, c % q);
                cells.push((((bi + bj) % m) * q + (s + t) % q) as u16);
            }
        }
        LatinSquare { n, cells }
    }

    /// Order `2^k` square built by repeated block doubling
    /// `[[A, s(A)], [s(A), A]]` with `s(x) = x + 2^(k-1)`, starting from the
    /// Cayley table of the Klein four-group.
    pub fn two_step_pow2(k: u32) -> Result<Self> {
        if k < 2 {
            return Err(Error::OrderTooSmall {
                order: 1usize << k,
                min: 4,
            });
        }
        let mut sq = Self::klein_four();
        for _ in 2..k {
            sq = sq.doubled();
        }
        Ok(sq)
    }

    /// Rows `[1,2,3,4],[2,1,4,3],[3,4,1,2],[4,3,2,1]`.
    pub fn klein_four() -> Self {
        let cells = (0..4u16)
            .flat_map(|i| (0..4u16).map(move |j| i ^ j))
            .collect();
        LatinSquare { n: 4, cells }
    }

    fn doubled(&self) -> Self {
        let h = self.n;
        let n = 2 * h;
        let mut cells = vec![0u16; n * n];
        for i in 0..n {
            for j in 0..n {
                let base = self.get(i % h, j % h) as u16;
                let shift = if (i < h) != (j < h) { h as u16 } else { 0 };
                cells[i * n + j] = base + shift;
            }
        }
        LatinSquare { n, cells }
    }

    /// The `size x size` subgrid at 0-based `(row0, col0)`, symbols kept as is.
    pub fn block(&self, row0: usize, col0: usize, size: usize) -> Vec<Vec<usize>> {
        (row0..row0 + size)
            .map(|i| (col0..col0 + size).map(|j| self.get(i, j)).collect())
            .collect()
    }

    /// Rows `start..start+len` as a Latin rectangle.
    pub fn row_band(&self, start: usize, len: usize) -> Result<LatinRectangle> {
        if start + len > self.n {
            return Err(Error::DimensionMismatch(format!(
                "band {start}+{len} exceeds order {}",
                self.n
            )));
        }
        Ok(LatinRectangle {
            rows: len,
            width: self.n,
            cells: self.cells[start * self.n..(start + len) * self.n].to_vec(),
        })
    }

    pub fn is_qstep_type(&self, spec: StepTypeSpec) -> Result<StepTypeReport> {
        let StepTypeSpec { m, q } = spec;
        if m == 0 || q == 0 || m * q != self.n {
            return Err(Error::DimensionMismatch(format!(
                "m*q = {m}*{q} does not match order {}",
                self.n
            )));
        }
        let mut sets: Vec<Vec<usize>> = Vec::with_capacity(m * m);
        for bi in 0..m {
            for bj in 0..m {
                let set: BTreeSet<usize> = (0..q)
                    .flat_map(|s| (0..q).map(move |t| (s, t)))
                    .map(|(s, t)| self.get(bi * q + s, bj * q + t))
                    .collect();
                if set.len() != q {
                    return Ok(StepTypeReport {
                        holds: false,
                        violation: Some(StepTypeViolation::NotLatinBlock {
                            block: (bi + 1, bj + 1),
                            distinct_symbols: set.len(),
                        }),
                    });
                }
                sets.push(set.into_iter().collect());
            }
        }
        for a in 0..m * m {
            for b in a + 1..m * m {
                let (ai, aj) = (a / m, a % m);
                let (bi, bj) = (b / m, b % m);
                let same_residue = (ai + aj) % m == (bi + bj) % m;
                let same_set = sets[a] == sets[b];
                if same_residue != same_set {
                    return Ok(StepTypeReport {
                        holds: false,
                        violation: Some(StepTypeViolation::SymbolSetRule {
                            first: (ai + 1, aj + 1),
                            second: (bi + 1, bj + 1),
                            same_residue,
                            same_set,
                        }),
                    });
                }
            }
        }
        Ok(StepTypeReport {
            holds: true,
            violation: None,
        })
    }

    /// Triples `(i, j, l(i,j))`, 1-based, in row-major order.
    pub fn to_oa(&self) -> OrthogonalArray3 {
        let n = self.n;
        let triples = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| [i + 1, j + 1, self.get(i, j) + 1])
            .collect();
        OrthogonalArray3 { order: n, triples }
    }

    pub fn from_oa(oa: &OrthogonalArray3) -> Result<Self> {
        oa.validate()?;
        let n = oa.order;
        let mut cells = vec![0u16; n * n];
        for t in &oa.triples {
            cells[(t[0] - 1) * n + (t[1] - 1)] = (t[2] - 1) as u16;
        }
        Self::from_zero_based(n, cells)
    }

    /// `M[f(i)][g(j)] = h(L[i][j])`.
    pub fn apply_isotopy(&self, iso: &Isotopy) -> Result<Self> {
        if iso.order() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "isotopy of order {} applied to square of order {}",
                iso.order(),
                self.n
            )));
        }
        let n = self.n;
        let mut cells = vec![0u16; n * n];
        for i in 0..n {
            for j in 0..n {
                cells[iso.rows[i] * n + iso.cols[j]] = iso.symbols[self.get(i, j)] as u16;
            }
        }
        Self::from_zero_based(n, cells)
    }

    pub fn random_isotope<R: Rng + ?Sized>(&self, rng: &mut R) -> Self {
        let iso = Isotopy::random(self.n, rng);
        self.apply_isotopy(&iso)
            .expect("isotopy of matching order preserves the Latin property")
    }

    /// `.ls` text: the order on the first line, then one line per row.
    pub fn to_ls_text(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for row in self.rows() {
            let line: Vec<String> = row.iter().map(|s| s.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn parse_ls_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (_, first) = lines.next().ok_or(Error::Parse {
            line: 1,
            reason: "empty input".into(),
        })?;
        let n: usize = first.trim().parse().map_err(|_| Error::Parse {
            line: 1,
            reason: format!("expected order, found {first:?}"),
        })?;
        if n == 0 {
            return Err(Error::Parse {
                line: 1,
                reason: "order must be positive".into(),
            });
        }
        let mut grid = Vec::with_capacity(n);
        for _ in 0..n {
            let (idx, line) = lines.next().ok_or(Error::Parse {
                line: grid.len() + 2,
                reason: "missing row".into(),
            })?;
            let row = line
                .split_whitespace()
                .map(|t| t.parse::<usize>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::Parse {
                    line: idx + 1,
                    reason: e.to_string(),
                })?;
            if row.len() != n {
                return Err(Error::Parse {
                    line: idx + 1,
                    reason: format!("expected {n} entries, found {}", row.len()),
                });
            }
            grid.push(row);
        }
        if let Some((idx, extra)) = lines.find(|(_, l)| !l.trim().is_empty()) {
            return Err(Error::Parse {
                line: idx + 1,
                reason: format!("trailing content {extra:?}"),
            });
        }
        Self::validate(&grid)
    }

    pub fn to_json_value(&self) -> SquareJson {
        SquareJson {
            order: self.n,
            rows: self.rows(),
        }
    }

    /// Accepts either the JSON object form or `.ls` text.
    pub fn parse_any(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            let js: SquareJson = serde_json::from_str(text)?;
            js.into_square()
        } else {
            Self::parse_ls_text(text)
        }
    }
}

/// JSON form of a square: `{"order": n, "rows": [[...], ...]}` with 1-based symbols.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquareJson {
    pub order: usize,
    pub rows: Vec<Vec<usize>>,
}

impl SquareJson {
    pub fn into_square(self) -> Result<LatinSquare> {
        if self.rows.len() != self.order {
            return Err(Error::DimensionMismatch(format!(
                "declared order {} but {} rows",
                self.order,
                self.rows.len()
            )));
        }
        LatinSquare::validate(&self.rows)
    }
}

/// `rows x width` array over `width` symbols, no repeats in any row or column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatinRectangle {
    rows: usize,
    width: usize,
    cells: Vec<u16>,
}

impl LatinRectangle {
    pub fn validate(grid: &[Vec<usize>], width: usize) -> Result<Self> {
        let rows = grid.len();
        if rows > width {
            return Err(Error::DimensionMismatch(format!(
                "{rows} rows exceed width {width}"
            )));
        }
        let mut cells = Vec::with_capacity(rows * width);
        for (i, row) in grid.iter().enumerate() {
            if row.len() != width {
                return Err(Error::NotSquare {
                    order: width,
                    row: i + 1,
                    len: row.len(),
                });
            }
            let mut seen = vec![false; width];
            for (j, &s) in row.iter().enumerate() {
                if s < 1 || s > width {
                    return Err(Error::SymbolOutOfRange {
                        row: i + 1,
                        col: j + 1,
                        symbol: s,
                        order: width,
                    });
                }
                if std::mem::replace(&mut seen[s - 1], true) {
                    return Err(Error::RowRepeat(i + 1, s));
                }
                cells.push((s - 1) as u16);
            }
        }
        for j in 0..width {
            let mut seen = vec![false; width];
            for i in 0..rows {
                let s = cells[i * width + j] as usize;
                if std::mem::replace(&mut seen[s], true) {
                    return Err(Error::ColumnRepeat(j + 1, s + 1));
                }
            }
        }
        Ok(LatinRectangle { rows, width, cells })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn get(&self, row: usize, col: usize) -> usize {
        self.cells[row * self.width + col] as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepTypeSpec {
    pub m: usize,
    pub q: usize,
}

impl StepTypeSpec {
    pub fn new(m: usize, q: usize) -> Self {
        StepTypeSpec { m, q }
    }

    pub fn order(&self) -> usize {
        self.m * self.q
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepTypeReport {
    pub holds: bool,
    pub violation: Option<StepTypeViolation>,
}

/// First reason a square fails to be of the requested step type. Block
/// coordinates are 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepTypeViolation {
    NotLatinBlock {
        block: (usize, usize),
        distinct_symbols: usize,
    },
    SymbolSetRule {
        first: (usize, usize),
        second: (usize, usize),
        same_residue: bool,
        same_set: bool,
    },
}

/// OA(n,3) as a list of 1-based `(row, column, symbol)` triples.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrthogonalArray3 {
    pub order: usize,
    pub triples: Vec<[usize; 3]>,
}

impl OrthogonalArray3 {
    pub fn validate(&self) -> Result<()> {
        let n = self.order;
        if n == 0 || self.triples.len() != n * n {
            return Err(Error::InvalidOa(format!(
                "expected {} triples, found {}",
                n * n,
                self.triples.len()
            )));
        }
        if let Some(t) = self
            .triples
            .iter()
            .find(|t| t.iter().any(|&x| x < 1 || x > n))
        {
            return Err(Error::InvalidOa(format!("entry out of range in {t:?}")));
        }
        for (a, b) in [(0usize, 1usize), (0, 2), (1, 2)] {
            let mut seen = vec![false; n * n];
            for t in &self.triples {
                let key = (t[a] - 1) * n + (t[b] - 1);
                if std::mem::replace(&mut seen[key], true) {
                    return Err(Error::InvalidOa(format!(
                        "pair ({}, {}) repeats in coordinates {}/{}",
                        t[a],
                        t[b],
                        a + 1,
                        b + 1
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Row, column and symbol permutations, stored 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Isotopy {
    rows: Vec<usize>,
    cols: Vec<usize>,
    symbols: Vec<usize>,
}

fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    p.iter()
        .all(|&x| x < p.len() && !std::mem::replace(&mut seen[x], true))
}

impl Isotopy {
    pub fn new(rows: Vec<usize>, cols: Vec<usize>, symbols: Vec<usize>) -> Result<Self> {
        if rows.len() != cols.len() || rows.len() != symbols.len() {
            return Err(Error::DimensionMismatch(
                "isotopy components differ in length".into(),
            ));
        }
        for (name, p) in [
            ("row map", &rows),
            ("column map", &cols),
            ("symbol map", &symbols),
        ] {
            if !is_permutation(p) {
                return Err(Error::NotAPermutation(name));
            }
        }
        Ok(Isotopy {
            rows,
            cols,
            symbols,
        })
    }

    /// Same as [`Isotopy::new`] but with 1-based images.
    pub fn from_one_based(rows: &[usize], cols: &[usize], symbols: &[usize]) -> Result<Self> {
        let dec = |v: &[usize], name| {
            v.iter()
                .map(|&x| x.checked_sub(1).ok_or(Error::NotAPermutation(name)))
                .collect::<Result<Vec<_>>>()
        };
        Self::new(
            dec(rows, "row map")?,
            dec(cols, "column map")?,
            dec(symbols, "symbol map")?,
        )
    }

    pub fn identity(n: usize) -> Self {
        let id: Vec<usize> = (0..n).collect();
        Isotopy {
            rows: id.clone(),
            cols: id.clone(),
            symbols: id,
        }
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut perm = || {
            let mut p: Vec<usize> = (0..n).collect();
            p.shuffle(rng);
            p
        };
        Isotopy {
            rows: perm(),
            cols: perm(),
            symbols: perm(),
        }
    }

    pub fn order(&self) -> usize {
        self.rows.len()
    }
}

/// A named generator with its parameters, e.g. `cyclic:5`, `qstep:4,9`, `twostep:3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    Cyclic { n: usize },
    Qstep { m: usize, q: usize },
    TwoStep { k: u32 },
}

impl Generator {
    pub fn build(self) -> Result<LatinSquare> {
        match self {
            Generator::Cyclic { n } if n >= 1 => Ok(LatinSquare::cyclic(n)),
            Generator::Qstep { m, q } if m >= 1 && q >= 1 => Ok(LatinSquare::qstep(m, q)),
            Generator::TwoStep { k } => LatinSquare::two_step_pow2(k),
            other => Err(Error::InvalidParameters(format!(
                "{other} needs positive parameters"
            ))),
        }
    }

    pub fn order(self) -> usize {
        match self {
            Generator::Cyclic { n } => n,
            Generator::Qstep { m, q } => m * q,
            Generator::TwoStep { k } => 1usize << k,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Generator::Cyclic { .. } => "cyclic",
            Generator::Qstep { .. } => "qstep",
            Generator::TwoStep { .. } => "twostep",
        }
    }

    /// Parameter names and values, in a fixed order.
    pub fn params(self) -> Vec<(&'static str, usize)> {
        match self {
            Generator::Cyclic { n } => vec![("n", n)],
            Generator::Qstep { m, q } => vec![("m", m), ("q", q)],
            Generator::TwoStep { k } => vec![("k", k as usize)],
        }
    }

    pub fn from_parts(
        name: &str,
        params: &std::collections::BTreeMap<String, usize>,
    ) -> Result<Self> {
        let get = |key: &str| {
            params
                .get(key)
                .copied()
                .ok_or_else(|| Error::InvalidParameters(format!("{name} needs parameter {key}")))
        };
        match name {
            "cyclic" => Ok(Generator::Cyclic { n: get("n")? }),
            "qstep" => Ok(Generator::Qstep {
                m: get("m")?,
                q: get("q")?,
            }),
            "twostep" => Ok(Generator::TwoStep {
                k: get("k")? as u32,
            }),
            other => Err(Error::InvalidParameters(format!(
                "unknown generator {other:?}"
            ))),
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Cyclic { n } => write!(f, "cyclic:{n}"),
            Generator::Qstep { m, q } => write!(f, "qstep:{m},{q}"),
            Generator::TwoStep { k } => write!(f, "twostep:{k}"),
        }
    }
}

impl std::str::FromStr for Generator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameters(format!("cannot parse generator {s:?}"));
        let (name, args) = s.split_once(':').ok_or_else(bad)?;
        let nums = args
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        match (name, nums.as_slice()) {
            ("cyclic", [n]) => Ok(Generator::Cyclic { n: *n }),
            ("qstep", [m, q]) => Ok(Generator::Qstep { m: *m, q: *q }),
            ("twostep", [k]) => Ok(Generator::TwoStep { k: *k as u32 }),
            _ => Err(bad()),
        }
    }
}
