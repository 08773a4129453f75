//! Two-party communication matrices, certificate complexity, exact
//! rectangle covers and partitions, gadget lifting, and the conflict-graph
//! pipeline that turns a communication matrix into a graph with a small
//! biclique partition and large chromatic number.

mod ass;
mod cert;
mod cover;
mod lift;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

pub use ass::{ass_conflict_graph, ass_pipeline, ceil_sqrt, AssBranch, AssOutput, AssReport};
pub use cert::{cert_complexity, uc_complexity, validate_family, Certificate, CertificateFamily, Unambiguity};
pub use cover::{cover_number, validate_rectangles, CoverMode};
pub use lift::{certificates_to_partition, gadgets, lift, GadgetPartitions};

use crate::{Error, Result};

/// A total Boolean matrix `rows x cols`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommMatrix {
    rows: usize,
    cols: usize,
    cells: Vec<bool>,
    pub row_labels: Option<Vec<String>>,
    pub col_labels: Option<Vec<String>>,
}

impl CommMatrix {
    pub fn new(rows: usize, cols: usize, cells: Vec<bool>) -> Result<Self> {
        if cells.len() != rows * cols {
            return Err(Error::ShapeMismatch {
                expected: rows * cols,
                found: cells.len(),
            });
        }
        Ok(CommMatrix {
            rows,
            cols,
            cells,
            row_labels: None,
            col_labels: None,
        })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let cells = (0..rows)
            .flat_map(|r| (0..cols).map(move |c| (r, c)))
            .map(|(r, c)| f(r, c))
            .collect();
        CommMatrix {
            rows,
            cols,
            cells,
            row_labels: None,
            col_labels: None,
        }
    }

    /// Parses rows of `0`/`1` characters.
    pub fn parse_rows<S: AsRef<str>>(rows: &[S]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut cells = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(Error::ShapeMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            for ch in row.chars() {
                cells.push(match ch {
                    '0' => false,
                    '1' => true,
                    _ => return Err(Error::Invalid(alloc::format!("bad cell character {ch:?}"))),
                });
            }
        }
        CommMatrix::new(rows.len(), cols, cells)
    }

    pub fn identity(n: usize) -> Self {
        CommMatrix::from_fn(n, n, |r, c| r == c)
    }

    pub fn constant(rows: usize, cols: usize, value: bool) -> Self {
        CommMatrix::from_fn(rows, cols, |_, _| value)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.cells[r * self.cols + c]
    }

    /// Cells equal to `b`, in row-major order.
    pub fn cells_equal(&self, b: bool) -> Vec<(usize, usize)> {
        (0..self.rows)
            .flat_map(|r| (0..self.cols).map(move |c| (r, c)))
            .filter(|&(r, c)| self.get(r, c) == b)
            .collect()
    }

    pub fn count(&self, b: bool) -> usize {
        self.cells.iter().filter(|&&x| x == b).count()
    }
}

impl fmt::Display for CommMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            for c in 0..self.cols {
                f.write_str(if self.get(r, c) { "1" } else { "0" })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// A combinatorial rectangle `rows x cols`, both sorted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rectangle {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl Rectangle {
    pub fn new(mut rows: Vec<usize>, mut cols: Vec<usize>) -> Self {
        rows.sort_unstable();
        rows.dedup();
        cols.sort_unstable();
        cols.dedup();
        Rectangle { rows, cols }
    }

    pub fn size(&self) -> usize {
        self.rows.len() * self.cols.len()
    }

    pub fn contains(&self, r: usize, c: usize) -> bool {
        self.rows.binary_search(&r).is_ok() && self.cols.binary_search(&c).is_ok()
    }

    pub fn is_monochromatic(&self, h: &CommMatrix, b: bool) -> bool {
        self.rows.iter().all(|&r| self.cols.iter().all(|&c| h.get(r, c) == b))
    }
}

/// A Boolean function on `n` bits given by its truth table.
///
/// Input `x = (x_1, ..., x_n)` sits at index `sum x_i 2^(n-i)`, so `x_1` is
/// the most significant bit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoolFunction {
    n: usize,
    table: Vec<bool>,
}

/// Arity cap for anything that materializes a truth table.
pub const MAX_ARITY: usize = 24;

impl BoolFunction {
    pub fn new(n: usize, table: Vec<bool>) -> Result<Self> {
        if n > MAX_ARITY {
            return Err(Error::GuardExceeded {
                what: "Boolean function arity",
                value: n as u64,
                limit: MAX_ARITY as u64,
            });
        }
        if table.len() != 1 << n {
            return Err(Error::ShapeMismatch {
                expected: 1 << n,
                found: table.len(),
            });
        }
        Ok(BoolFunction { n, table })
    }

    pub fn from_fn(n: usize, f: impl Fn(&[bool]) -> bool) -> Result<Self> {
        let table = (0..1usize << n).map(|x| f(&bits_of(x, n))).collect();
        BoolFunction::new(n, table)
    }

    pub fn and(n: usize) -> Self {
        BoolFunction::from_fn(n, |x| x.iter().all(|&b| b)).expect("small arity")
    }

    pub fn or(n: usize) -> Self {
        BoolFunction::from_fn(n, |x| x.iter().any(|&b| b)).expect("small arity")
    }

    pub fn parity(n: usize) -> Self {
        BoolFunction::from_fn(n, |x| x.iter().filter(|&&b| b).count() % 2 == 1).expect("small arity")
    }

    pub fn constant(n: usize, value: bool) -> Self {
        BoolFunction::from_fn(n, |_| value).expect("small arity")
    }

    /// The one-bit identity `f(x) = x`.
    pub fn identity() -> Self {
        BoolFunction::new(1, alloc::vec![false, true]).expect("arity 1")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn table(&self) -> &[bool] {
        &self.table
    }

    #[inline]
    pub fn eval(&self, x: usize) -> bool {
        self.table[x]
    }

    pub fn preimage(&self, b: bool) -> Vec<usize> {
        (0..self.table.len()).filter(|&x| self.table[x] == b).collect()
    }
}

/// Bits of `x` as `n` booleans, most significant first.
pub fn bits_of(x: usize, n: usize) -> Vec<bool> {
    (0..n).map(|i| x >> (n - 1 - i) & 1 == 1).collect()
}

/// `n`-bit string of `x`, most significant first.
pub fn bit_string(x: usize, n: usize) -> String {
    bits_of(x, n).into_iter().map(|b| if b { '1' } else { '0' }).collect()
}
