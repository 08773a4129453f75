//! Exact VC and Littlestone dimensions with verifiable witnesses.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashMap;

use crate::{Cell, Error, Limits, PartialMatrix, Result, Work};

/// Largest domain the packed dimension routines accept.
pub const MAX_PACKED_POINTS: usize = 128;

/// Bounds under which [`ld_dim_tree_oracle`] runs without `force`.
pub const ORACLE_MAX_POINTS: usize = 8;
pub const ORACLE_MAX_CONCEPTS: usize = 64;

/// A partial concept packed into two masks over at most 128 points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) struct Packed {
    pub ones: u128,
    pub zeros: u128,
}

impl Packed {
    pub fn from_row(row: &[Cell]) -> Packed {
        let mut p = Packed { ones: 0, zeros: 0 };
        for (i, c) in row.iter().enumerate() {
            match c {
                Cell::One => p.ones |= 1 << i,
                Cell::Zero => p.zeros |= 1 << i,
                Cell::Star => {}
            }
        }
        p
    }

    #[inline]
    fn defined(self) -> u128 {
        self.ones | self.zeros
    }

    #[inline]
    fn masked(self, mask: u128) -> Packed {
        Packed {
            ones: self.ones & mask,
            zeros: self.zeros & mask,
        }
    }
}

pub(crate) fn pack(m: &PartialMatrix) -> Result<Vec<Packed>> {
    if m.n_points() > MAX_PACKED_POINTS {
        return Err(Error::GuardExceeded {
            what: "points for packed dimension search",
            value: m.n_points() as u64,
            limit: MAX_PACKED_POINTS as u64,
        });
    }
    Ok(m.rows().iter().map(|r| Packed::from_row(r)).collect())
}

/// A shattered point set together with one realizing concept per pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShatteredSetWitness {
    /// Sorted point indices.
    pub points: Vec<usize>,
    /// `realizers[p]` realizes pattern `p`, read most-significant bit first
    /// (bit `d - 1 - i` of `p` is the label at `points[i]`).
    pub realizers: Vec<usize>,
}

impl ShatteredSetWitness {
    /// Re-checks the witness against `m` without trusting how it was produced.
    pub fn validate(&self, m: &PartialMatrix) -> bool {
        let d = self.points.len();
        if self.realizers.len() != 1 << d {
            return false;
        }
        self.realizers.iter().enumerate().all(|(pattern, &row)| {
            row < m.n_concepts()
                && self
                    .points
                    .iter()
                    .enumerate()
                    .all(|(i, &p)| p < m.n_points() && m.get(row, p) == Cell::from_bit(pattern >> (d - 1 - i) & 1 == 1))
        })
    }

    pub fn pattern_string(&self, pattern: usize) -> String {
        let d = self.points.len();
        (0..d)
            .map(|i| if pattern >> (d - 1 - i) & 1 == 1 { '1' } else { '0' })
            .collect()
    }
}

/// Realizers of `set` over `rows`, or `None` if `set` is not shattered.
fn shatter_realizers(rows: &[Packed], set: &[usize]) -> Option<Vec<usize>> {
    let d = set.len();
    let mask: u128 = set.iter().fold(0, |m, &p| m | 1 << p);
    let mut realizers = vec![usize::MAX; 1 << d];
    let mut found = 0usize;
    for (i, r) in rows.iter().enumerate() {
        if r.defined() & mask != mask {
            continue;
        }
        let pattern = set.iter().fold(0usize, |acc, &p| acc << 1 | (r.ones >> p & 1) as usize);
        if realizers[pattern] == usize::MAX {
            realizers[pattern] = i;
            found += 1;
            if found == 1 << d {
                return Some(realizers);
            }
        }
    }
    None
}

/// Exact VC dimension with the lexicographically least shattered set of maximum size.
///
/// Shattered sets are closed under taking subsets, so candidates of size
/// `k + 1` are only built from shattered sets of size `k` whose every
/// `k`-subset is shattered.
pub fn vc_dim(m: &PartialMatrix) -> Result<(usize, ShatteredSetWitness)> {
    vc_dim_limited(m, &Limits::new())
}

pub fn vc_dim_limited(m: &PartialMatrix, limits: &Limits) -> Result<(usize, ShatteredSetWitness)> {
    if m.is_empty() {
        return Err(Error::EmptyClass);
    }
    let rows = pack(m)?;
    let mut work = limits.work();
    let n = m.n_points();
    let distinct = rows.iter().collect::<BTreeSet<_>>().len();

    let mut best = ShatteredSetWitness {
        points: Vec::new(),
        realizers: vec![0],
    };
    let mut level: Vec<Vec<usize>> = vec![Vec::new()];
    loop {
        let k = level[0].len();
        if 1usize << (k + 1) > distinct {
            break;
        }
        let members: BTreeSet<&Vec<usize>> = level.iter().collect();
        let mut next = Vec::new();
        let mut first: Option<ShatteredSetWitness> = None;
        for set in &level {
            let start = set.last().map_or(0, |&l| l + 1);
            for x in start..n {
                work.tick()?;
                let mut cand = set.clone();
                cand.push(x);
                let closed = (0..cand.len()).all(|drop| {
                    let mut sub = cand.clone();
                    sub.remove(drop);
                    members.contains(&sub)
                });
                if !closed {
                    continue;
                }
                if let Some(realizers) = shatter_realizers(&rows, &cand) {
                    if first.is_none() {
                        first = Some(ShatteredSetWitness {
                            points: cand.clone(),
                            realizers,
                        });
                    }
                    next.push(cand);
                }
            }
        }
        match first {
            Some(w) => best = w,
            None => break,
        }
        level = next;
    }
    Ok((best.points.len(), best))
}

/// A shattered, point-labelled full binary tree.
///
/// Nodes are addressed by the string of branch bits from the root, so the
/// root is `""` and the children of `v` are `v0` and `v1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShatteredTreeWitness {
    pub depth: usize,
    pub node_labels: BTreeMap<String, usize>,
    pub leaf_realizers: BTreeMap<String, usize>,
}

impl ShatteredTreeWitness {
    /// Checks that the realizer of every leaf `y` takes value `y_i` at the
    /// point labelling node `y[..i]`, for each `i`.
    pub fn validate(&self, m: &PartialMatrix) -> bool {
        if self.leaf_realizers.len() != 1 << self.depth {
            return false;
        }
        for (leaf, &row) in &self.leaf_realizers {
            if leaf.len() != self.depth || row >= m.n_concepts() || !leaf.bytes().all(|b| b == b'0' || b == b'1') {
                return false;
            }
            for (i, bit) in leaf.bytes().enumerate() {
                let Some(&point) = self.node_labels.get(&leaf[..i]) else {
                    return false;
                };
                if point >= m.n_points() || m.get(row, point) != Cell::from_bit(bit == b'1') {
                    return false;
                }
            }
        }
        true
    }
}

/// Memoized Littlestone-dimension solver.
///
/// Sub-classes are canonicalized before lookup: only points on which both
/// labels occur can usefully label a tree node, so every other point is
/// masked out, and rows are sorted and deduplicated. A class with `k`
/// distinct rows cannot shatter a tree deeper than `floor(log2 k)`.
pub struct LdSolver {
    memo: HashMap<Vec<Packed>, i32>,
    work: Work,
}

impl Default for LdSolver {
    fn default() -> Self {
        LdSolver::new(&Limits::new())
    }
}

impl LdSolver {
    pub fn new(limits: &Limits) -> Self {
        LdSolver {
            memo: HashMap::new(),
            work: limits.work(),
        }
    }

    pub fn ld(&mut self, m: &PartialMatrix) -> Result<i32> {
        let rows = pack(m)?;
        self.ld_packed(&rows)
    }

    pub(crate) fn ld_packed(&mut self, rows: &[Packed]) -> Result<i32> {
        let key = canonical(rows);
        self.ld_canonical(key)
    }

    fn ld_canonical(&mut self, key: Vec<Packed>) -> Result<i32> {
        match key.len() {
            0 => return Ok(-1),
            1 => return Ok(0),
            _ => {}
        }
        if let Some(&v) = self.memo.get(&key) {
            return Ok(v);
        }
        self.work.tick()?;
        let bound = (usize::BITS - 1 - key.len().leading_zeros()) as i32;
        let live = live_points(&key);
        let mut best = 0;
        let mut points = live;
        while points != 0 && best < bound {
            let x = points.trailing_zeros();
            points &= points - 1;
            let bit = 1u128 << x;
            let (zero, one): (Vec<Packed>, Vec<Packed>) = key
                .iter()
                .filter(|r| r.defined() & bit != 0)
                .partition(|r| r.zeros & bit != 0);
            let (small, large) = if zero.len() <= one.len() {
                (zero, one)
            } else {
                (one, zero)
            };
            // 1 + min(a, b) > best requires both sides to exceed best - 1
            let small = canonical(&small);
            if small.len() < 1 << best {
                continue;
            }
            let a = self.ld_canonical(small)?;
            if a < best {
                continue;
            }
            let b = self.ld_canonical(canonical(&large))?;
            best = best.max(1 + a.min(b));
        }
        self.memo.insert(key, best);
        Ok(best)
    }

    /// Builds a shattered tree of depth `ld_dim(m)`; `None` for the empty class.
    pub fn witness(&mut self, m: &PartialMatrix) -> Result<(i32, Option<ShatteredTreeWitness>)> {
        let rows = pack(m)?;
        let d = self.ld_packed(&rows)?;
        if d < 0 {
            return Ok((d, None));
        }
        let mut w = ShatteredTreeWitness {
            depth: d as usize,
            node_labels: BTreeMap::new(),
            leaf_realizers: BTreeMap::new(),
        };
        let all: Vec<usize> = (0..rows.len()).collect();
        self.build_tree(&rows, &all, String::new(), d as usize, &mut w)?;
        Ok((d, Some(w)))
    }

    fn build_tree(
        &mut self,
        rows: &[Packed],
        members: &[usize],
        node: String,
        depth: usize,
        w: &mut ShatteredTreeWitness,
    ) -> Result<()> {
        if depth == 0 {
            w.leaf_realizers.insert(node, members[0]);
            return Ok(());
        }
        let n = u128::BITS - rows.iter().fold(0u128, |a, r| a | r.defined()).leading_zeros();
        for x in 0..n {
            let bit = 1u128 << x;
            let zero: Vec<usize> = members.iter().copied().filter(|&i| rows[i].zeros & bit != 0).collect();
            let one: Vec<usize> = members.iter().copied().filter(|&i| rows[i].ones & bit != 0).collect();
            let pick = |s: &[usize]| s.iter().map(|&i| rows[i]).collect::<Vec<_>>();
            let target = depth as i32 - 1;
            if self.ld_packed(&pick(&zero))? >= target && self.ld_packed(&pick(&one))? >= target {
                w.node_labels.insert(node.clone(), x as usize);
                let mut left = node.clone();
                left.push('0');
                self.build_tree(rows, &zero, left, depth - 1, w)?;
                let mut right = node;
                right.push('1');
                return self.build_tree(rows, &one, right, depth - 1, w);
            }
        }
        Err(Error::Invariant(
            "no node label realizes the computed Littlestone dimension".into(),
        ))
    }
}

fn live_points(rows: &[Packed]) -> u128 {
    let ones = rows.iter().fold(0u128, |a, r| a | r.ones);
    let zeros = rows.iter().fold(0u128, |a, r| a | r.zeros);
    ones & zeros
}

fn canonical(rows: &[Packed]) -> Vec<Packed> {
    let live = live_points(rows);
    let mut key: Vec<Packed> = rows.iter().map(|r| r.masked(live)).collect();
    key.sort_unstable();
    key.dedup();
    key
}

/// Exact Littlestone dimension; `-1` for the empty class.
pub fn ld_dim(m: &PartialMatrix) -> Result<i32> {
    LdSolver::default().ld(m)
}

/// Exact Littlestone dimension with a shattered-tree witness.
pub fn ld_dim_with_witness(m: &PartialMatrix) -> Result<(i32, Option<ShatteredTreeWitness>)> {
    LdSolver::default().witness(m)
}

/// Exhaustive search for a shattered tree of height `depth`.
///
/// Every point (including repeats along a path) is tried at every node, with
/// no memoization or canonicalization; this is the independent reference for
/// [`ld_dim`].
pub fn ld_dim_tree_oracle(m: &PartialMatrix, depth: usize, limits: &Limits) -> Result<Option<ShatteredTreeWitness>> {
    limits.guard("points for tree oracle", m.n_points() as u64, ORACLE_MAX_POINTS as u64)?;
    limits.guard(
        "concepts for tree oracle",
        m.n_concepts() as u64,
        ORACLE_MAX_CONCEPTS as u64,
    )?;
    let mut work = limits.work();
    let mut w = ShatteredTreeWitness {
        depth,
        node_labels: BTreeMap::new(),
        leaf_realizers: BTreeMap::new(),
    };
    let all: Vec<usize> = (0..m.n_concepts()).collect();
    if search_tree(m, &all, String::new(), depth, &mut w, &mut work)? {
        Ok(Some(w))
    } else {
        Ok(None)
    }
}

fn search_tree(
    m: &PartialMatrix,
    members: &[usize],
    node: String,
    depth: usize,
    w: &mut ShatteredTreeWitness,
    work: &mut Work,
) -> Result<bool> {
    work.tick()?;
    if members.is_empty() {
        return Ok(false);
    }
    if depth == 0 {
        w.leaf_realizers.insert(node, members[0]);
        return Ok(true);
    }
    for x in 0..m.n_points() {
        let side = |label: Cell| -> Vec<usize> { members.iter().copied().filter(|&i| m.get(i, x) == label).collect() };
        let mut left = node.clone();
        left.push('0');
        let mut right = node.clone();
        right.push('1');
        let snapshot = (w.node_labels.len(), w.leaf_realizers.len());
        if search_tree(m, &side(Cell::Zero), left, depth - 1, w, work)?
            && search_tree(m, &side(Cell::One), right, depth - 1, w, work)?
        {
            w.node_labels.insert(node, x);
            return Ok(true);
        }
        if (w.node_labels.len(), w.leaf_realizers.len()) != snapshot {
            prune_subtree(w, &node);
        }
    }
    Ok(false)
}

fn prune_subtree(w: &mut ShatteredTreeWitness, node: &str) {
    w.node_labels
        .retain(|k, _| !(k.len() > node.len() && k.starts_with(node)));
    w.leaf_realizers
        .retain(|k, _| !(k.len() > node.len() && k.starts_with(node)));
}

/// Largest `d` accepted by the tree oracle (`-1` if even depth 0 fails).
pub fn ld_dim_by_oracle(m: &PartialMatrix, limits: &Limits) -> Result<i32> {
    let mut d = 0;
    while ld_dim_tree_oracle(m, d, limits)?.is_some() {
        d += 1;
    }
    Ok(d as i32 - 1)
}

/// Both sides of the dual VC inequality `VC(dual) <= 2^(VC + 1) - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DualVcReport {
    pub vc: usize,
    pub dual_vc: usize,
    pub bound_holds: bool,
}

pub fn dual_vc_check(m: &PartialMatrix) -> Result<DualVcReport> {
    let (vc, _) = vc_dim(m)?;
    let dual = m.dual();
    let dual_vc = if dual.is_empty() { 0 } else { vc_dim(&dual)?.0 };
    let bound = (1u128 << (vc + 1)) - 1;
    Ok(DualVcReport {
        vc,
        dual_vc,
        bound_holds: (dual_vc as u128) <= bound,
    })
}
