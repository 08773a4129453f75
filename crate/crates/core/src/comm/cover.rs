use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use hashbrown::HashMap;

use super::{CommMatrix, Rectangle};
use crate::{Error, Limits, Result, Work};

/// Cell guard (`rows * cols`) for [`cover_number`].
pub const COVER_MAX_CELLS: usize = 256;
/// Cap on the number of maximal rectangles enumerated in cover mode.
pub const COVER_MAX_RECTANGLES: usize = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoverMode {
    /// Every `b`-cell in at least one rectangle.
    Cover,
    /// Every `b`-cell in exactly one rectangle.
    Partition,
}

type Mask = [u64; 4];

#[inline]
fn bit(m: &Mask, i: usize) -> bool {
    m[i / 64] >> (i % 64) & 1 == 1
}

#[inline]
fn set(m: &mut Mask, i: usize) {
    m[i / 64] |= 1 << (i % 64);
}

#[inline]
fn and(a: &Mask, b: &Mask) -> Mask {
    [a[0] & b[0], a[1] & b[1], a[2] & b[2], a[3] & b[3]]
}

#[inline]
fn and_not(a: &Mask, b: &Mask) -> Mask {
    [a[0] & !b[0], a[1] & !b[1], a[2] & !b[2], a[3] & !b[3]]
}

#[inline]
fn is_zero(m: &Mask) -> bool {
    m.iter().all(|&w| w == 0)
}

fn first(m: &Mask) -> Option<usize> {
    m.iter()
        .enumerate()
        .find(|(_, &w)| w != 0)
        .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

fn ones(m: &Mask) -> impl Iterator<Item = usize> + '_ {
    (0..256).filter(move |&i| bit(m, i))
}

struct Grid<'a> {
    h: &'a CommMatrix,
    b: bool,
}

impl Grid<'_> {
    fn cell(&self, r: usize, c: usize) -> usize {
        r * self.h.cols() + c
    }

    fn rect_mask(&self, rows: &[usize], cols: &[usize]) -> Mask {
        let mut m = [0; 4];
        for &r in rows {
            for &c in cols {
                set(&mut m, self.cell(r, c));
            }
        }
        m
    }

    /// Greedy fooling set among `cells`: no two of its cells fit in one
    /// `b`-monochromatic rectangle, so it bounds any cover from below.
    fn fooling_bound(&self, cells: &Mask) -> usize {
        let cols = self.h.cols();
        let mut picked: Vec<(usize, usize)> = Vec::new();
        for i in ones(cells) {
            let (r, c) = (i / cols, i % cols);
            if picked
                .iter()
                .all(|&(r2, c2)| self.h.get(r, c2) != self.b || self.h.get(r2, c) != self.b)
            {
                picked.push((r, c));
            }
        }
        picked.len()
    }
}

/// Checks that `rects` are nonempty `b`-monochromatic rectangles of `h`
/// covering every `b`-cell (exactly once in partition mode).
pub fn validate_rectangles(h: &CommMatrix, b: bool, rects: &[Rectangle], mode: CoverMode) -> Result<()> {
    let mut count = alloc::vec![0u8; h.rows() * h.cols()];
    for (i, rect) in rects.iter().enumerate() {
        if rect.rows.is_empty() || rect.cols.is_empty() {
            return Err(Error::Invalid(format!("rectangle {} is empty", i + 1)));
        }
        if rect.rows.iter().any(|&r| r >= h.rows()) || rect.cols.iter().any(|&c| c >= h.cols()) {
            return Err(Error::Invalid(format!("rectangle {} is out of range", i + 1)));
        }
        for &r in &rect.rows {
            for &c in &rect.cols {
                if h.get(r, c) != b {
                    return Err(Error::Invalid(format!(
                        "rectangle {} contains cell ({}, {}) with value {}",
                        i + 1,
                        r + 1,
                        c + 1,
                        (!b) as u8
                    )));
                }
                count[r * h.cols() + c] = count[r * h.cols() + c].saturating_add(1);
            }
        }
    }
    for (r, c) in h.cells_equal(b) {
        let k = count[r * h.cols() + c];
        if k == 0 {
            return Err(Error::Invalid(format!("cell ({}, {}) is not covered", r + 1, c + 1)));
        }
        if k > 1 && mode == CoverMode::Partition {
            return Err(Error::Invalid(format!(
                "cell ({}, {}) is covered {k} times",
                r + 1,
                c + 1
            )));
        }
    }
    Ok(())
}

/// Exact `Cov_b(h)` or `UCov_b(h)` with a witnessing family.
///
/// Cover mode runs set cover over the maximal monochromatic rectangles;
/// partition mode runs exact cover, branching on the rectangles of
/// uncovered cells that contain the first uncovered cell in row-major order.
/// Both deepen the budget from a fooling-set lower bound, so the first
/// family found is minimum.
pub fn cover_number(h: &CommMatrix, b: bool, mode: CoverMode, limits: &Limits) -> Result<(usize, Vec<Rectangle>)> {
    let cells = h.rows() * h.cols();
    limits.guard("cells for exact cover", cells as u64, COVER_MAX_CELLS as u64)?;
    if cells > COVER_MAX_CELLS {
        return Err(Error::GuardExceeded {
            what: "cells for exact cover (hard cap)",
            value: cells as u64,
            limit: COVER_MAX_CELLS as u64,
        });
    }
    let grid = Grid { h, b };
    let mut target = [0u64; 4];
    for (r, c) in h.cells_equal(b) {
        set(&mut target, grid.cell(r, c));
    }
    let mut work = limits.work();
    let rects = match mode {
        CoverMode::Cover => {
            let maximal = maximal_rectangles(&grid, limits)?;
            let masks: Vec<Mask> = maximal.iter().map(|r| grid.rect_mask(&r.rows, &r.cols)).collect();
            let mut search = SetCover {
                grid: &grid,
                masks: &masks,
                failed: HashMap::new(),
                work: &mut work,
            };
            let chosen = deepen(grid.fooling_bound(&target), &target, |k, out| {
                search.run(&target, k, out)
            })?;
            let mut out: Vec<Rectangle> = chosen.into_iter().map(|i| maximal[i].clone()).collect();
            out.sort();
            out
        }
        CoverMode::Partition => {
            let mut search = ExactCover {
                grid: &grid,
                failed: HashMap::new(),
                work: &mut work,
            };
            let mut out = deepen(grid.fooling_bound(&target), &target, |k, out| {
                search.run(&target, k, out)
            })?;
            out.sort();
            out
        }
    };
    validate_rectangles(h, b, &rects, mode).map_err(|e| Error::Invariant(format!("cover witness rejected: {e}")))?;
    Ok((rects.len(), rects))
}

fn deepen<T>(
    lower: usize,
    target: &Mask,
    mut attempt: impl FnMut(usize, &mut Vec<T>) -> Result<bool>,
) -> Result<Vec<T>> {
    let upper = ones(target).count();
    for k in lower..=upper {
        let mut out = Vec::new();
        if attempt(k, &mut out)? {
            return Ok(out);
        }
    }
    Err(Error::Invariant("singleton rectangles always cover".into()))
}

/// Maximal `b`-monochromatic rectangles: one per column set closed under
/// intersection of row supports.
fn maximal_rectangles(grid: &Grid<'_>, limits: &Limits) -> Result<Vec<Rectangle>> {
    let h = grid.h;
    let supports: Vec<Mask> = (0..h.rows())
        .map(|r| {
            let mut m = [0; 4];
            for c in (0..h.cols()).filter(|&c| h.get(r, c) == grid.b) {
                set(&mut m, c);
            }
            m
        })
        .collect();
    let mut closed: BTreeSet<Mask> = supports.iter().filter(|m| !is_zero(m)).copied().collect();
    let mut frontier: Vec<Mask> = closed.iter().copied().collect();
    while let Some(c) = frontier.pop() {
        for s in &supports {
            let meet = and(&c, s);
            if !is_zero(&meet) && closed.insert(meet) {
                limits.guard("maximal rectangles", closed.len() as u64, COVER_MAX_RECTANGLES as u64)?;
                frontier.push(meet);
            }
        }
    }
    Ok(closed
        .into_iter()
        .map(|cols| {
            let rows = (0..h.rows()).filter(|&r| and(&supports[r], &cols) == cols).collect();
            Rectangle::new(rows, ones(&cols).collect())
        })
        .collect())
}

struct SetCover<'a, 'g> {
    grid: &'a Grid<'g>,
    masks: &'a [Mask],
    failed: HashMap<Mask, usize>,
    work: &'a mut Work,
}

impl SetCover<'_, '_> {
    fn run(&mut self, uncovered: &Mask, budget: usize, out: &mut Vec<usize>) -> Result<bool> {
        self.work.tick()?;
        let Some(cell) = first(uncovered) else {
            return Ok(true);
        };
        if self.failed.get(uncovered).is_some_and(|&b| b >= budget) || self.grid.fooling_bound(uncovered) > budget {
            return Ok(false);
        }
        for (i, m) in self.masks.iter().enumerate() {
            if !bit(m, cell) {
                continue;
            }
            out.push(i);
            if self.run(&and_not(uncovered, m), budget - 1, out)? {
                return Ok(true);
            }
            out.pop();
        }
        self.failed.insert(*uncovered, budget);
        Ok(false)
    }
}

struct ExactCover<'a, 'g> {
    grid: &'a Grid<'g>,
    failed: HashMap<Mask, usize>,
    work: &'a mut Work,
}

impl ExactCover<'_, '_> {
    fn run(&mut self, uncovered: &Mask, budget: usize, out: &mut Vec<Rectangle>) -> Result<bool> {
        self.work.tick()?;
        let Some(cell) = first(uncovered) else {
            return Ok(true);
        };
        if self.failed.get(uncovered).is_some_and(|&b| b >= budget) || self.grid.fooling_bound(uncovered) > budget {
            return Ok(false);
        }
        let cols = self.grid.h.cols();
        let (r, c) = (cell / cols, cell % cols);
        let free_cols = |row: usize| -> Vec<usize> { (0..cols).filter(|&j| bit(uncovered, row * cols + j)).collect() };
        let row_cols = free_cols(r);
        let extra: Vec<usize> = row_cols.iter().copied().filter(|&j| j != c).collect();
        // column sets containing c, larger ones first
        for pick in (0..1usize << extra.len()).rev() {
            let mut cset = alloc::vec![c];
            cset.extend(
                extra
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| pick >> k & 1 == 1)
                    .map(|(_, &j)| j),
            );
            cset.sort_unstable();
            let others: Vec<usize> = (r + 1..self.grid.h.rows())
                .filter(|&r2| cset.iter().all(|&j| bit(uncovered, r2 * cols + j)))
                .collect();
            for rpick in (0..1usize << others.len()).rev() {
                let mut rset = alloc::vec![r];
                rset.extend(
                    others
                        .iter()
                        .enumerate()
                        .filter(|(k, _)| rpick >> k & 1 == 1)
                        .map(|(_, &i)| i),
                );
                let m = self.grid.rect_mask(&rset, &cset);
                out.push(Rectangle::new(rset, cset.clone()));
                if self.run(&and_not(uncovered, &m), budget - 1, out)? {
                    return Ok(true);
                }
                out.pop();
            }
        }
        self.failed.insert(*uncovered, budget);
        Ok(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_examples() {
        let l = Limits::new();
        let id = CommMatrix::identity(2);
        let (k, rects) = cover_number(&id, false, CoverMode::Cover, &l).unwrap();
        assert_eq!(k, 2);
        assert_eq!(
            rects,
            alloc::vec![
                Rectangle::new(alloc::vec![0], alloc::vec![1]),
                Rectangle::new(alloc::vec![1], alloc::vec![0])
            ]
        );
        assert_eq!(cover_number(&id, true, CoverMode::Partition, &l).unwrap().0, 2);
        let ones = CommMatrix::constant(3, 3, true);
        assert_eq!(cover_number(&ones, true, CoverMode::Partition, &l).unwrap().0, 1);
        assert_eq!(cover_number(&ones, false, CoverMode::Cover, &l).unwrap().0, 0);
    }

    #[test]
    fn cover_can_beat_partition() {
        let h = CommMatrix::parse_rows(&["110", "111", "011"]).unwrap();
        let l = Limits::new();
        assert_eq!(cover_number(&h, true, CoverMode::Cover, &l).unwrap().0, 2);
        assert_eq!(cover_number(&h, true, CoverMode::Partition, &l).unwrap().0, 3);
    }

    #[test]
    fn equality_4() {
        let l = Limits::new();
        let eq = CommMatrix::identity(4);
        assert_eq!(cover_number(&eq, false, CoverMode::Cover, &l).unwrap().0, 4);
        assert_eq!(cover_number(&eq, true, CoverMode::Partition, &l).unwrap().0, 4);
    }

    #[test]
    fn rejects_bad_families() {
        let id = CommMatrix::identity(2);
        let bad = [Rectangle::new(alloc::vec![0, 1], alloc::vec![1])];
        assert!(validate_rectangles(&id, false, &bad, CoverMode::Cover).is_err());
        let partial = [Rectangle::new(alloc::vec![0], alloc::vec![1])];
        assert!(validate_rectangles(&id, false, &partial, CoverMode::Cover).is_err());
        let big = CommMatrix::constant(17, 16, false);
        assert!(cover_number(&big, false, CoverMode::Cover, &Limits::new())
            .unwrap_err()
            .is_guard());
    }
}
