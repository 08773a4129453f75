//! Partial and total concept classes as concepts x points matrices.
//!
//! Rows are concepts and columns are points. Duplicate rows are kept as
//! stored; operations that treat the class as a set deduplicate explicitly.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::bits::Combinations;
use crate::{Error, Result};

/// One entry of a partial concept: a label or `Star` (either label acceptable).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cell {
    Zero,
    One,
    Star,
}

impl Cell {
    pub fn from_bit(bit: bool) -> Cell {
        if bit {
            Cell::One
        } else {
            Cell::Zero
        }
    }

    pub fn from_char(c: char) -> Option<Cell> {
        match c {
            '0' => Some(Cell::Zero),
            '1' => Some(Cell::One),
            '*' => Some(Cell::Star),
            _ => None,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Cell::Zero => '0',
            Cell::One => '1',
            Cell::Star => '*',
        }
    }

    /// `Some(bit)` for a defined cell, `None` for `Star`.
    pub fn bit(self) -> Option<bool> {
        match self {
            Cell::Zero => Some(false),
            Cell::One => Some(true),
            Cell::Star => None,
        }
    }

    pub fn is_star(self) -> bool {
        self == Cell::Star
    }
}

/// A partial concept class over `{0, 1, *}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialMatrix {
    n_points: usize,
    rows: Vec<Vec<Cell>>,
    pub point_labels: Option<Vec<String>>,
    pub concept_labels: Option<Vec<String>>,
}

impl PartialMatrix {
    pub fn new(n_points: usize, rows: Vec<Vec<Cell>>) -> Result<Self> {
        for row in &rows {
            if row.len() != n_points {
                return Err(Error::ShapeMismatch {
                    expected: n_points,
                    found: row.len(),
                });
            }
        }
        Ok(PartialMatrix {
            n_points,
            rows,
            point_labels: None,
            concept_labels: None,
        })
    }

    /// Builds a matrix from rows written with `0`, `1` and `*`.
    ///
    /// The point count is taken from the first row; an empty slice yields an
    /// empty class on zero points.
    pub fn parse_rows<S: AsRef<str>>(rows: &[S]) -> Result<Self> {
        let n_points = rows.first().map_or(0, |r| r.as_ref().chars().count());
        let mut out = Vec::with_capacity(rows.len());
        for row in rows {
            let cells = row
                .as_ref()
                .chars()
                .map(|c| Cell::from_char(c).ok_or_else(|| Error::Invalid(alloc::format!("bad cell character {c:?}"))))
                .collect::<Result<Vec<_>>>()?;
            out.push(cells);
        }
        PartialMatrix::new(n_points, out)
    }

    pub fn empty(n_points: usize) -> Self {
        PartialMatrix {
            n_points,
            rows: Vec::new(),
            point_labels: None,
            concept_labels: None,
        }
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn n_concepts(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[Cell] {
        &self.rows[i]
    }

    pub fn get(&self, concept: usize, point: usize) -> Cell {
        self.rows[concept][point]
    }

    pub(crate) fn set(&mut self, concept: usize, point: usize, cell: Cell) {
        self.rows[concept][point] = cell;
    }

    pub fn star_count(&self) -> usize {
        self.rows.iter().flatten().filter(|c| c.is_star()).count()
    }

    pub fn is_total(&self) -> bool {
        self.star_count() == 0
    }

    /// The class restricted to `points`, in the order given, preserving row order.
    pub fn restrict(&self, points: &[usize]) -> Result<PartialMatrix> {
        let mut seen = BTreeSet::new();
        for &p in points {
            if p >= self.n_points {
                return Err(Error::IndexOutOfRange {
                    index: p,
                    len: self.n_points,
                });
            }
            if !seen.insert(p) {
                return Err(Error::DuplicateIndex(p));
            }
        }
        let rows = self
            .rows
            .iter()
            .map(|r| points.iter().map(|&p| r[p]).collect())
            .collect();
        Ok(PartialMatrix {
            n_points: points.len(),
            rows,
            point_labels: self
                .point_labels
                .as_ref()
                .map(|l| points.iter().map(|&p| l[p].clone()).collect()),
            concept_labels: self.concept_labels.clone(),
        })
    }

    /// Keeps the listed concepts (in the order given).
    pub fn select_concepts(&self, concepts: &[usize]) -> Result<PartialMatrix> {
        let mut rows = Vec::with_capacity(concepts.len());
        for &c in concepts {
            let row = self.rows.get(c).ok_or(Error::IndexOutOfRange {
                index: c,
                len: self.rows.len(),
            })?;
            rows.push(row.clone());
        }
        Ok(PartialMatrix {
            n_points: self.n_points,
            rows,
            point_labels: self.point_labels.clone(),
            concept_labels: self
                .concept_labels
                .as_ref()
                .map(|l| concepts.iter().map(|&c| l[c].clone()).collect()),
        })
    }

    /// The dual class: points and concepts exchanged (matrix transpose).
    pub fn dual(&self) -> PartialMatrix {
        let rows = (0..self.n_points)
            .map(|p| self.rows.iter().map(|r| r[p]).collect())
            .collect();
        PartialMatrix {
            n_points: self.rows.len(),
            rows,
            point_labels: self.concept_labels.clone(),
            concept_labels: self.point_labels.clone(),
        }
    }

    /// Searches for `pattern` as an order-preserving submatrix.
    ///
    /// Returns the row and column indices of the lexicographically first
    /// column tuple that admits a match, with rows matched greedily. `Star`
    /// cells never match.
    pub fn contains_pattern(&self, pattern: &Pattern) -> Option<(Vec<usize>, Vec<usize>)> {
        if pattern.cols > self.n_points || pattern.rows > self.rows.len() {
            return None;
        }
        for cols in Combinations::new(self.n_points, pattern.cols) {
            let mut matched = Vec::with_capacity(pattern.rows);
            let mut next = 0;
            for prow in &pattern.cells {
                let hit = (next..self.rows.len()).find(|&r| {
                    cols.iter()
                        .zip(prow)
                        .all(|(&c, &bit)| self.rows[r][c] == Cell::from_bit(bit))
                });
                match hit {
                    Some(r) => {
                        matched.push(r);
                        next = r + 1;
                    }
                    None => break,
                }
            }
            if matched.len() == pattern.rows {
                return Some((matched, cols));
            }
        }
        None
    }

    /// Number of distinct rows.
    pub fn distinct_rows(&self) -> usize {
        self.rows.iter().collect::<BTreeSet<_>>().len()
    }

    /// Number of distinct columns.
    pub fn distinct_cols(&self) -> usize {
        (0..self.n_points)
            .map(|p| self.rows.iter().map(|r| r[p]).collect::<Vec<_>>())
            .collect::<BTreeSet<_>>()
            .len()
    }
}

impl fmt::Display for PartialMatrix {
    /// One line per concept, characters `0`, `1`, `*`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            for c in row {
                write!(f, "{}", c.to_char())?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// A total concept class: a [`PartialMatrix`] with no `Star` cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TotalMatrix(PartialMatrix);

impl TotalMatrix {
    pub fn new(n_points: usize, rows: Vec<Vec<bool>>) -> Result<Self> {
        let rows = rows
            .into_iter()
            .map(|r| r.into_iter().map(Cell::from_bit).collect())
            .collect();
        Ok(TotalMatrix(PartialMatrix::new(n_points, rows)?))
    }

    pub fn parse_rows<S: AsRef<str>>(rows: &[S]) -> Result<Self> {
        TotalMatrix::try_from(PartialMatrix::parse_rows(rows)?)
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n).map(|i| (0..n).map(|j| i == j).collect()).collect();
        TotalMatrix::new(n, rows).expect("square")
    }

    pub fn as_partial(&self) -> &PartialMatrix {
        &self.0
    }

    pub fn into_partial(self) -> PartialMatrix {
        self.0
    }

    pub fn n_points(&self) -> usize {
        self.0.n_points
    }

    pub fn n_concepts(&self) -> usize {
        self.0.rows.len()
    }

    pub fn get(&self, concept: usize, point: usize) -> bool {
        self.0.rows[concept][point] == Cell::One
    }

    pub(crate) fn flip(&mut self, concept: usize, point: usize) {
        let cell = &mut self.0.rows[concept][point];
        *cell = if *cell == Cell::One { Cell::Zero } else { Cell::One };
    }

    pub fn distinct_rows(&self) -> usize {
        self.0.distinct_rows()
    }

    pub fn distinct_cols(&self) -> usize {
        self.0.distinct_cols()
    }
}

impl TryFrom<PartialMatrix> for TotalMatrix {
    type Error = Error;

    fn try_from(m: PartialMatrix) -> Result<Self> {
        for (i, row) in m.rows.iter().enumerate() {
            if let Some(j) = row.iter().position(|c| c.is_star()) {
                return Err(Error::Invalid(alloc::format!(
                    "star at concept {} point {} in a total matrix",
                    i + 1,
                    j + 1
                )));
            }
        }
        Ok(TotalMatrix(m))
    }
}

impl fmt::Display for TotalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A 0/1 pattern searched for as a submatrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pattern {
    rows: usize,
    cols: usize,
    cells: Vec<Vec<bool>>,
}

impl Pattern {
    pub fn new(cells: Vec<Vec<bool>>) -> Result<Self> {
        let rows = cells.len();
        let cols = cells.first().map_or(0, Vec::len);
        if rows == 0 || cols == 0 {
            return Err(Error::Invalid("pattern must be at least 1x1".into()));
        }
        if let Some(bad) = cells.iter().find(|r| r.len() != cols) {
            return Err(Error::ShapeMismatch {
                expected: cols,
                found: bad.len(),
            });
        }
        Ok(Pattern { rows, cols, cells })
    }

    /// `[[1,0],[1,0]]`, the pattern every class of Littlestone dimension at least 3 contains.
    pub fn ld3_witness() -> Self {
        Pattern::new(vec![vec![true, false], vec![true, false]]).expect("2x2")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn cells(&self) -> &[Vec<bool>] {
        &self.cells
    }
}

/// Where a candidate disambiguation fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DisambiguationViolation {
    /// The partial concept with no consistent total row.
    pub concept: usize,
    /// First disagreeing point against the closest total row.
    pub point: usize,
}

/// Checks that every row of `m` has a row of `t` agreeing with it on its defined cells.
///
/// On a finite domain this is both the strong and the ordinary notion of
/// disambiguation.
pub fn is_disambiguation(m: &PartialMatrix, t: &TotalMatrix) -> Result<Option<DisambiguationViolation>> {
    if m.n_points() != t.n_points() {
        return Err(Error::ShapeMismatch {
            expected: m.n_points(),
            found: t.n_points(),
        });
    }
    for (i, row) in m.rows().iter().enumerate() {
        let mut furthest: Option<usize> = None;
        let mut ok = false;
        for trow in t.as_partial().rows() {
            let mismatch = row.iter().zip(trow).position(|(&c, &tc)| !c.is_star() && c != tc);
            match mismatch {
                None => {
                    ok = true;
                    break;
                }
                Some(p) => furthest = Some(furthest.map_or(p, |f: usize| f.max(p))),
            }
        }
        if !ok {
            return Ok(Some(DisambiguationViolation {
                concept: i,
                point: furthest.unwrap_or(0),
            }));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pm(rows: &[&str]) -> PartialMatrix {
        PartialMatrix::parse_rows(rows).unwrap()
    }

    #[test]
    fn dual_by_hand() {
        let m = pm(&["1*", "01"]);
        assert_eq!(m.dual(), pm(&["10", "*1"]));
        assert_eq!(m.dual().dual(), m);
    }

    #[test]
    fn restrict_checks_indices() {
        let m = pm(&["01*", "110"]);
        assert_eq!(m.restrict(&[2, 0]).unwrap(), pm(&["*0", "01"]));
        assert_eq!(m.restrict(&[3]), Err(Error::IndexOutOfRange { index: 3, len: 3 }));
        assert_eq!(m.restrict(&[1, 1]), Err(Error::DuplicateIndex(1)));
        let empty = m.restrict(&[]).unwrap();
        assert_eq!(empty.n_concepts(), 2);
        assert_eq!(empty.n_points(), 0);
    }

    #[test]
    fn pattern_containment() {
        let p = Pattern::ld3_witness();
        assert_eq!(pm(&["10", "10"]).contains_pattern(&p), Some((vec![0, 1], vec![0, 1])));
        assert_eq!(pm(&["1*", "10"]).contains_pattern(&p), None);
        // order matters: [[0,1],[0,1]] does not contain [[1,0],[1,0]]
        assert_eq!(pm(&["01", "01"]).contains_pattern(&p), None);
        assert_eq!(
            pm(&["0110", "1*1*", "0100"]).contains_pattern(&p),
            Some((vec![0, 2], vec![1, 3]))
        );
        let single = Pattern::new(vec![vec![true]]).unwrap();
        assert_eq!(pm(&["*0", "01"]).contains_pattern(&single), Some((vec![1], vec![1])));
    }

    #[test]
    fn disambiguation_check() {
        let m = pm(&["1*"]);
        let t = TotalMatrix::parse_rows(&["00"]).unwrap();
        assert_eq!(
            is_disambiguation(&m, &t).unwrap(),
            Some(DisambiguationViolation { concept: 0, point: 0 })
        );
        let t = TotalMatrix::parse_rows(&["00", "11"]).unwrap();
        assert_eq!(is_disambiguation(&m, &t).unwrap(), None);
        assert!(is_disambiguation(&m, &TotalMatrix::parse_rows(&["000"]).unwrap()).is_err());
    }

    #[test]
    fn distinct_counts() {
        let t = TotalMatrix::parse_rows(&["01", "01", "11"]).unwrap();
        assert_eq!(t.distinct_rows(), 2);
        assert_eq!(TotalMatrix::identity(3).distinct_cols(), 3);
    }

    #[test]
    fn total_rejects_star() {
        assert!(TotalMatrix::try_from(pm(&["0*"])).is_err());
        assert!(Pattern::new(vec![]).is_err());
    }
}
