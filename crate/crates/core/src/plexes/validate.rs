//! Definitional validators. Each takes raw cells (duplicates allowed) and
//! reports the first violation found.

use std::fmt;

use crate::cells::Cell;
use crate::latin::LatinSquare;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    OutOfRange(Cell),
    DuplicateCell(Cell),
    WrongCardinality {
        found: usize,
        expected: usize,
    },
    RowCount {
        row: usize,
        count: usize,
    },
    ColumnCount {
        col: usize,
        count: usize,
    },
    SymbolCount {
        symbol: usize,
        count: usize,
    },
    /// Quasi-transversal multiplicity pattern broken on one axis.
    DoubledCount {
        axis: Axis,
        doubled: usize,
    },
    InvalidK {
        k: usize,
        order: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    Row,
    Column,
    Symbol,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::OutOfRange(c) => write!(f, "cell {c} out of range"),
            Violation::DuplicateCell(c) => write!(f, "duplicate cell {c}"),
            Violation::WrongCardinality { found, expected } => {
                write!(f, "{found} cells, expected {expected}")
            }
            Violation::RowCount { row, count } => write!(f, "row {} used {count} times", row + 1),
            Violation::ColumnCount { col, count } => {
                write!(f, "column {} used {count} times", col + 1)
            }
            Violation::SymbolCount { symbol, count } => {
                write!(f, "symbol {} occurs {count} times", symbol + 1)
            }
            Violation::DoubledCount { axis, doubled } => {
                write!(f, "{doubled} doubled {axis:?} lines, expected exactly one")
            }
            Violation::InvalidK { k, order } => write!(f, "k = {k} outside 0..={order}"),
        }
    }
}

/// Outcome of a validator: `Ok(())` or the first violation.
pub type Verdict = Result<(), Violation>;

fn range_and_duplicates(l: &LatinSquare, cells: &[Cell]) -> Verdict {
    let n = l.order();
    let mut seen = vec![false; n * n];
    for &c in cells {
        if c.row >= n || c.col >= n {
            return Err(Violation::OutOfRange(c));
        }
        if std::mem::replace(&mut seen[c.index(n)], true) {
            return Err(Violation::DuplicateCell(c));
        }
    }
    Ok(())
}

fn cardinality(found: usize, expected: usize) -> Verdict {
    if found == expected {
        Ok(())
    } else {
        Err(Violation::WrongCardinality { found, expected })
    }
}

/// Per-row, per-column and per-symbol multiplicities.
fn tallies(l: &LatinSquare, cells: &[Cell]) -> [Vec<usize>; 3] {
    let n = l.order();
    let mut t = [vec![0; n], vec![0; n], vec![0; n]];
    for &c in cells {
        t[0][c.row] += 1;
        t[1][c.col] += 1;
        t[2][l.get(c.row, c.col)] += 1;
    }
    t
}

/// One cell per row, per column and per symbol.
pub fn check_transversal(l: &LatinSquare, cells: &[Cell]) -> Verdict {
    let n = l.order();
    range_and_duplicates(l, cells)?;
    cardinality(cells.len(), n)?;
    let (mut rows, mut cols, mut syms) = (vec![false; n], vec![false; n], vec![false; n]);
    for &c in cells {
        if std::mem::replace(&mut rows[c.row], true) {
            return Err(Violation::RowCount {
                row: c.row,
                count: 2,
            });
        }
        if std::mem::replace(&mut cols[c.col], true) {
            return Err(Violation::ColumnCount {
                col: c.col,
                count: 2,
            });
        }
        let s = l.get(c.row, c.col);
        if std::mem::replace(&mut syms[s], true) {
            return Err(Violation::SymbolCount {
                symbol: s,
                count: 2,
            });
        }
    }
    Ok(())
}

/// Exactly `k` cells per row, per column and per symbol.
pub fn check_kplex(l: &LatinSquare, cells: &[Cell], k: usize) -> Verdict {
    let n = l.order();
    if k > n {
        return Err(Violation::InvalidK { k, order: n });
    }
    range_and_duplicates(l, cells)?;
    cardinality(cells.len(), n * k)?;
    let [rows, cols, syms] = tallies(l, cells);
    if let Some((row, &count)) = rows.iter().enumerate().find(|(_, &c)| c != k) {
        return Err(Violation::RowCount { row, count });
    }
    if let Some((col, &count)) = cols.iter().enumerate().find(|(_, &c)| c != k) {
        return Err(Violation::ColumnCount { col, count });
    }
    if let Some((symbol, &count)) = syms.iter().enumerate().find(|(_, &c)| c != k) {
        return Err(Violation::SymbolCount { symbol, count });
    }
    Ok(())
}

/// Distinct rows, columns and symbols (any length).
pub fn check_partial_transversal(l: &LatinSquare, cells: &[Cell]) -> Verdict {
    range_and_duplicates(l, cells)?;
    let [rows, cols, syms] = tallies(l, cells);
    if let Some((row, &count)) = rows.iter().enumerate().find(|(_, &c)| c > 1) {
        return Err(Violation::RowCount { row, count });
    }
    if let Some((col, &count)) = cols.iter().enumerate().find(|(_, &c)| c > 1) {
        return Err(Violation::ColumnCount { col, count });
    }
    if let Some((symbol, &count)) = syms.iter().enumerate().find(|(_, &c)| c > 1) {
        return Err(Violation::SymbolCount { symbol, count });
    }
    Ok(())
}

/// Partial transversal of length `n - 1`.
pub fn check_near_transversal(l: &LatinSquare, cells: &[Cell]) -> Verdict {
    cardinality(cells.len(), l.order().saturating_sub(1))?;
    check_partial_transversal(l, cells)
}

/// `n + 1` cells: one row, one column and one symbol used twice, every other
/// row, column and symbol exactly once.
pub fn check_quasi_transversal(l: &LatinSquare, cells: &[Cell]) -> Verdict {
    let n = l.order();
    range_and_duplicates(l, cells)?;
    cardinality(cells.len(), n + 1)?;
    let tallies = tallies(l, cells);
    for (axis, counts) in [Axis::Row, Axis::Column, Axis::Symbol]
        .into_iter()
        .zip(&tallies)
    {
        if let Some((idx, &count)) = counts.iter().enumerate().find(|(_, &c)| c == 0 || c > 2) {
            return Err(match axis {
                Axis::Row => Violation::RowCount { row: idx, count },
                Axis::Column => Violation::ColumnCount { col: idx, count },
                Axis::Symbol => Violation::SymbolCount { symbol: idx, count },
            });
        }
        let doubled = counts.iter().filter(|&&c| c == 2).count();
        if doubled != 1 {
            return Err(Violation::DoubledCount { axis, doubled });
        }
    }
    Ok(())
}

/// Row, column and symbol that a valid quasi-transversal doubles.
pub fn quasi_doubled(l: &LatinSquare, cells: &[Cell]) -> Option<(usize, usize, usize)> {
    check_quasi_transversal(l, cells).ok()?;
    let [rows, cols, syms] = tallies(l, cells);
    let pos = |v: &Vec<usize>| v.iter().position(|&c| c == 2);
    Some((pos(&rows)?, pos(&cols)?, pos(&syms)?))
}

/// Unused row, column and symbol of a valid near-transversal.
pub fn near_missing(l: &LatinSquare, cells: &[Cell]) -> Option<(usize, usize, usize)> {
    check_near_transversal(l, cells).ok()?;
    let [rows, cols, syms] = tallies(l, cells);
    let pos = |v: &Vec<usize>| v.iter().position(|&c| c == 0);
    Some((pos(&rows)?, pos(&cols)?, pos(&syms)?))
}
