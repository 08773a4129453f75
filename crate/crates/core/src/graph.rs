//! Simple graphs, oriented biclique families, and exact solvers for the
//! chromatic number and the biclique partition number.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use hashbrown::HashMap;

use crate::{Error, Limits, Result, Work};

/// Default vertex guard for [`chromatic_number`].
pub const CHI_MAX_VERTICES: usize = 80;
/// Default edge guard for [`biclique_partition_number`].
pub const BP_MAX_EDGES: usize = 40;
/// Eigenvalues within this distance of zero count as zero.
pub const SPECTRAL_ZERO_TOLERANCE: f64 = 1e-9;

/// A simple undirected graph on vertices `0..n`.
///
/// Vertices may carry an opaque `(row, col)` payload; solvers ignore it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledGraph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
    adjacency: Vec<BTreeSet<usize>>,
    pub payloads: Option<Vec<(usize, usize)>>,
}

impl LabeledGraph {
    pub fn new(n: usize) -> Self {
        LabeledGraph {
            n,
            edges: BTreeSet::new(),
            adjacency: vec![BTreeSet::new(); n],
            payloads: None,
        }
    }

    /// Builds a graph from an edge list; loops, duplicates and out-of-range vertices are errors.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = LabeledGraph::new(n);
        for &(u, v) in edges {
            if !g.add_edge(u, v)? {
                return Err(Error::Invalid(alloc::format!(
                    "duplicate edge {{{}, {}}}",
                    u + 1,
                    v + 1
                )));
            }
        }
        Ok(g)
    }

    /// Adds `{u, v}`; returns false if it was already present.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<bool> {
        for w in [u, v] {
            if w >= self.n {
                return Err(Error::IndexOutOfRange { index: w, len: self.n });
            }
        }
        if u == v {
            return Err(Error::Invalid(alloc::format!("loop at vertex {}", u + 1)));
        }
        let e = (u.min(v), u.max(v));
        if !self.edges.insert(e) {
            return Ok(false);
        }
        self.adjacency[u].insert(v);
        self.adjacency[v].insert(u);
        Ok(true)
    }

    pub fn complete(n: usize) -> Self {
        let mut g = LabeledGraph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v).expect("in range");
            }
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = LabeledGraph::new(n);
        if n >= 3 {
            for u in 0..n {
                g.add_edge(u, (u + 1) % n).expect("in range");
            }
        }
        g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn neighbors(&self, v: usize) -> &BTreeSet<usize> {
        &self.adjacency[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    /// The subgraph induced on `vertices` (renumbered in the order given), carrying payloads.
    pub fn induced(&self, vertices: &[usize]) -> Result<LabeledGraph> {
        let mut index = BTreeMap::new();
        for (i, &v) in vertices.iter().enumerate() {
            if v >= self.n {
                return Err(Error::IndexOutOfRange { index: v, len: self.n });
            }
            if index.insert(v, i).is_some() {
                return Err(Error::DuplicateIndex(v));
            }
        }
        let mut g = LabeledGraph::new(vertices.len());
        for &(u, v) in &self.edges {
            if let (Some(&a), Some(&b)) = (index.get(&u), index.get(&v)) {
                g.add_edge(a, b)?;
            }
        }
        g.payloads = self.payloads.as_ref().map(|p| vertices.iter().map(|&v| p[v]).collect());
        Ok(g)
    }

    /// A greedily grown clique (the largest over all start vertices).
    pub fn greedy_clique(&self) -> Vec<usize> {
        let mut best = Vec::new();
        let mut by_degree: Vec<usize> = (0..self.n).collect();
        by_degree.sort_by_key(|&v| (core::cmp::Reverse(self.adjacency[v].len()), v));
        for &start in &by_degree {
            let mut clique = vec![start];
            for &v in &by_degree {
                if v != start && clique.iter().all(|&c| self.has_edge(c, v)) {
                    clique.push(v);
                }
            }
            if clique.len() > best.len() {
                best = clique;
            }
        }
        best
    }

    /// Exact clique number by exhaustive branching; intended for small graphs.
    pub fn clique_number(&self) -> usize {
        fn grow(g: &LabeledGraph, clique: usize, candidates: &[usize], best: &mut usize) {
            *best = (*best).max(clique);
            for (i, &v) in candidates.iter().enumerate() {
                if clique + candidates.len() - i <= *best {
                    return;
                }
                let next: Vec<usize> = candidates[i + 1..]
                    .iter()
                    .copied()
                    .filter(|&w| g.has_edge(v, w))
                    .collect();
                grow(g, clique + 1, &next, best);
            }
        }
        let mut best = 0;
        let all: Vec<usize> = (0..self.n).collect();
        grow(self, 0, &all, &mut best);
        best
    }

    pub fn is_proper_coloring(&self, colors: &[usize]) -> bool {
        colors.len() == self.n && self.edges.iter().all(|&(u, v)| colors[u] != colors[v])
    }
}

/// A biclique `L x R` with a fixed orientation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct OrientedBiclique {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

impl OrientedBiclique {
    pub fn new(mut left: Vec<usize>, mut right: Vec<usize>) -> Self {
        left.sort_unstable();
        left.dedup();
        right.sort_unstable();
        right.dedup();
        OrientedBiclique { left, right }
    }

    pub fn edge_count(&self) -> usize {
        self.left.len() * self.right.len()
    }

    pub fn covers(&self, u: usize, v: usize) -> bool {
        (self.left.binary_search(&u).is_ok() && self.right.binary_search(&v).is_ok())
            || (self.left.binary_search(&v).is_ok() && self.right.binary_search(&u).is_ok())
    }
}

/// Star partition of `K_n`: `B_i = {i} x {i+1, ..., n-1}` for `i < n - 1`.
pub fn star_partition(n: usize) -> Vec<OrientedBiclique> {
    (0..n.saturating_sub(1))
        .map(|i| OrientedBiclique::new(vec![i], (i + 1..n).collect()))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyMode {
    /// Every edge covered exactly once.
    Partition,
    /// Every edge covered at least once.
    Cover,
    /// Every edge covered once or twice.
    CoverAtMostTwice,
}

/// The first reason a biclique family fails validation. Vertices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilyViolation {
    VertexOutOfRange { biclique: usize, vertex: usize },
    Overlap { biclique: usize, vertex: usize },
    NonEdge { biclique: usize, u: usize, v: usize },
    Uncovered { u: usize, v: usize },
    Overcovered { u: usize, v: usize, count: usize },
}

impl fmt::Display for FamilyViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            FamilyViolation::VertexOutOfRange { biclique, vertex } => {
                write!(f, "biclique {} uses vertex {} out of range", biclique + 1, vertex + 1)
            }
            FamilyViolation::Overlap { biclique, vertex } => {
                write!(f, "biclique {} has vertex {} on both sides", biclique + 1, vertex + 1)
            }
            FamilyViolation::NonEdge { biclique, u, v } => write!(
                f,
                "biclique {} contains non-edge {{{}, {}}}",
                biclique + 1,
                u + 1,
                v + 1
            ),
            FamilyViolation::Uncovered { u, v } => write!(f, "edge {{{}, {}}} uncovered", u + 1, v + 1),
            FamilyViolation::Overcovered { u, v, count } => {
                write!(f, "edge {{{}, {}}} covered {count} times", u + 1, v + 1)
            }
        }
    }
}

/// Per-edge cover counts of `family`, after checking it only uses edges of `g`.
pub fn coverage(
    g: &LabeledGraph,
    family: &[OrientedBiclique],
) -> core::result::Result<BTreeMap<(usize, usize), usize>, FamilyViolation> {
    let mut counts: BTreeMap<(usize, usize), usize> = g.edges().map(|e| (e, 0)).collect();
    for (i, b) in family.iter().enumerate() {
        for &v in b.left.iter().chain(&b.right) {
            if v >= g.n() {
                return Err(FamilyViolation::VertexOutOfRange { biclique: i, vertex: v });
            }
        }
        if let Some(&v) = b.left.iter().find(|v| b.right.binary_search(v).is_ok()) {
            return Err(FamilyViolation::Overlap { biclique: i, vertex: v });
        }
        for &u in &b.left {
            for &v in &b.right {
                let e = (u.min(v), u.max(v));
                match counts.get_mut(&e) {
                    Some(c) => *c += 1,
                    None => {
                        return Err(FamilyViolation::NonEdge {
                            biclique: i,
                            u: e.0,
                            v: e.1,
                        })
                    }
                }
            }
        }
    }
    Ok(counts)
}

/// Checks that `family` is a partition, cover, or at-most-twice cover of `g`'s edges.
pub fn validate_biclique_family(
    g: &LabeledGraph,
    family: &[OrientedBiclique],
    mode: FamilyMode,
) -> core::result::Result<(), FamilyViolation> {
    let counts = coverage(g, family)?;
    for (&(u, v), &count) in &counts {
        if count == 0 {
            return Err(FamilyViolation::Uncovered { u, v });
        }
        let max = match mode {
            FamilyMode::Partition => 1,
            FamilyMode::Cover => usize::MAX,
            FamilyMode::CoverAtMostTwice => 2,
        };
        if count > max {
            return Err(FamilyViolation::Overcovered { u, v, count });
        }
    }
    Ok(())
}

/// A proper coloring with the minimum number of colors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    pub chi: usize,
    pub colors: Vec<usize>,
}

impl Coloring {
    /// Vertices grouped by color, colors in increasing order.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut classes = vec![Vec::new(); self.chi];
        for (v, &c) in self.colors.iter().enumerate() {
            classes[c].push(v);
        }
        classes
    }
}

/// Exact chromatic number by DSATUR branch and bound.
///
/// The upper bound starts from a greedy DSATUR coloring and the vertices of a
/// greedy clique are pre-colored with distinct colors.
pub fn chromatic_number(g: &LabeledGraph, limits: &Limits) -> Result<Coloring> {
    limits.guard("vertices for chromatic number", g.n() as u64, CHI_MAX_VERTICES as u64)?;
    let n = g.n();
    if n == 0 {
        return Ok(Coloring {
            chi: 0,
            colors: Vec::new(),
        });
    }
    let adj: Vec<Vec<usize>> = (0..n).map(|v| g.neighbors(v).iter().copied().collect()).collect();
    let greedy = dsatur_greedy(&adj);
    let ub = greedy.iter().max().map_or(0, |&c| c + 1);
    let clique = g.greedy_clique();
    if clique.len() == ub {
        return Ok(Coloring {
            chi: ub,
            colors: greedy,
        });
    }
    let mut search = ColorSearch {
        adj: &adj,
        colors: vec![usize::MAX; n],
        forbidden: vec![vec![0u32; n + 1]; n],
        saturation: vec![0; n],
        best: ub,
        best_colors: greedy,
        lower: clique.len(),
        work: limits.work(),
    };
    for (c, &v) in clique.iter().enumerate() {
        search.assign(v, c);
    }
    search.run(clique.len(), clique.len())?;
    Ok(Coloring {
        chi: search.best,
        colors: search.best_colors,
    })
}

fn dsatur_greedy(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    let mut colors = vec![usize::MAX; n];
    let mut neighbor_colors: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| colors[v] == usize::MAX)
            .max_by_key(|&v| (neighbor_colors[v].len(), adj[v].len(), core::cmp::Reverse(v)))
            .expect("uncolored vertex");
        let c = (0..).find(|c| !neighbor_colors[v].contains(c)).expect("free color");
        colors[v] = c;
        for &w in &adj[v] {
            neighbor_colors[w].insert(c);
        }
    }
    colors
}

struct ColorSearch<'a> {
    adj: &'a [Vec<usize>],
    colors: Vec<usize>,
    /// `forbidden[v][c]` counts colored neighbors of `v` with color `c`.
    forbidden: Vec<Vec<u32>>,
    saturation: Vec<usize>,
    best: usize,
    best_colors: Vec<usize>,
    lower: usize,
    work: Work,
}

impl ColorSearch<'_> {
    fn assign(&mut self, v: usize, c: usize) {
        self.colors[v] = c;
        for i in 0..self.adj[v].len() {
            let w = self.adj[v][i];
            if self.forbidden[w][c] == 0 {
                self.saturation[w] += 1;
            }
            self.forbidden[w][c] += 1;
        }
    }

    fn unassign(&mut self, v: usize) {
        let c = self.colors[v];
        self.colors[v] = usize::MAX;
        for i in 0..self.adj[v].len() {
            let w = self.adj[v][i];
            self.forbidden[w][c] -= 1;
            if self.forbidden[w][c] == 0 {
                self.saturation[w] -= 1;
            }
        }
    }

    fn run(&mut self, colored: usize, used: usize) -> Result<()> {
        self.work.tick()?;
        if used >= self.best {
            return Ok(());
        }
        if colored == self.adj.len() {
            self.best = used;
            self.best_colors = self.colors.clone();
            return Ok(());
        }
        let v = (0..self.adj.len())
            .filter(|&v| self.colors[v] == usize::MAX)
            .max_by_key(|&v| (self.saturation[v], self.adj[v].len(), core::cmp::Reverse(v)))
            .expect("uncolored vertex");
        for c in 0..=used {
            if c >= self.best - 1 && c == used {
                break;
            }
            if self.forbidden[v][c] > 0 {
                continue;
            }
            self.assign(v, c);
            self.run(colored + 1, used.max(c + 1))?;
            self.unassign(v);
            if self.best == self.lower {
                return Ok(());
            }
        }
        Ok(())
    }
}

/// `max(n_plus, n_minus)`: the counts of positive and negative adjacency
/// eigenvalues, a lower bound on the biclique partition number.
pub fn bp_spectral_lower_bound(g: &LabeledGraph) -> usize {
    let n = g.n();
    let mut a = vec![0.0f64; n * n];
    for (u, v) in g.edges() {
        a[u * n + v] = 1.0;
        a[v * n + u] = 1.0;
    }
    let eig = symmetric_eigenvalues(a, n);
    let pos = eig.iter().filter(|&&x| x > SPECTRAL_ZERO_TOLERANCE).count();
    let neg = eig.iter().filter(|&&x| x < -SPECTRAL_ZERO_TOLERANCE).count();
    pos.max(neg)
}

/// Eigenvalues of a symmetric row-major `n x n` matrix by cyclic Jacobi rotations.
pub fn symmetric_eigenvalues(mut a: Vec<f64>, n: usize) -> Vec<f64> {
    let off = |a: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[i * n + j] * a[i * n + j];
                }
            }
        }
        s
    };
    for _sweep in 0..100 {
        if off(&a) < 1e-22 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if libm::fabs(apq) < 1e-300 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = {
                    let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
                    sign / (libm::fabs(theta) + libm::sqrt(theta * theta + 1.0))
                };
                let c = 1.0 / libm::sqrt(t * t + 1.0);
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    eig.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
    eig
}

/// Exact biclique partition number with a minimum partition.
///
/// Components are solved independently. Within a component, iterative
/// deepening branches on every biclique of still-uncovered edges that
/// contains the lowest uncovered edge, pruning with the spectral bound of
/// the uncovered subgraph.
pub fn biclique_partition_number(g: &LabeledGraph, limits: &Limits) -> Result<(usize, Vec<OrientedBiclique>)> {
    limits.guard(
        "edges for biclique partition",
        g.edge_count() as u64,
        BP_MAX_EDGES as u64,
    )?;
    let mut work = limits.work();
    let mut partition = Vec::new();
    for component in components(g) {
        let sub = g.induced(&component)?;
        if sub.edge_count() == 0 {
            continue;
        }
        let mut search = BpSearch::new(&sub, &mut work)?;
        let found = search.solve()?;
        partition.extend(found.into_iter().map(|b| {
            OrientedBiclique::new(
                b.left.iter().map(|&v| component[v]).collect(),
                b.right.iter().map(|&v| component[v]).collect(),
            )
        }));
    }
    Ok((partition.len(), partition))
}

fn components(g: &LabeledGraph) -> Vec<Vec<usize>> {
    let mut seen = vec![false; g.n()];
    let mut out = Vec::new();
    for s in 0..g.n() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut i = 0;
        while i < comp.len() {
            for &w in g.neighbors(comp[i]) {
                if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                }
            }
            i += 1;
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

struct BpSearch<'a> {
    n: usize,
    edges: Vec<(usize, usize)>,
    edge_index: HashMap<(usize, usize), usize>,
    failed: HashMap<u128, usize>,
    chosen: Vec<OrientedBiclique>,
    work: &'a mut Work,
}

impl<'a> BpSearch<'a> {
    fn new(g: &LabeledGraph, work: &'a mut Work) -> Result<Self> {
        if g.edge_count() > 128 {
            return Err(Error::GuardExceeded {
                what: "edges per component for biclique partition (hard cap)",
                value: g.edge_count() as u64,
                limit: 128,
            });
        }
        let edges: Vec<(usize, usize)> = g.edges().collect();
        let edge_index = edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        Ok(BpSearch {
            n: g.n(),
            edges,
            edge_index,
            failed: HashMap::new(),
            chosen: Vec::new(),
            work,
        })
    }

    fn full(&self) -> u128 {
        if self.edges.len() == 128 {
            u128::MAX
        } else {
            (1u128 << self.edges.len()) - 1
        }
    }

    fn solve(&mut self) -> Result<Vec<OrientedBiclique>> {
        let full = self.full();
        let mut k = self.lower_bound(full).max(1);
        loop {
            if self.search(full, k)? {
                return Ok(core::mem::take(&mut self.chosen));
            }
            k += 1;
        }
    }

    fn lower_bound(&self, remaining: u128) -> usize {
        let mut vertices = BTreeSet::new();
        let mut edges = Vec::new();
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            if remaining >> i & 1 == 1 {
                vertices.insert(u);
                vertices.insert(v);
                edges.push((u, v));
            }
        }
        let index: BTreeMap<usize, usize> = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let edges: Vec<(usize, usize)> = edges.iter().map(|(u, v)| (index[u], index[v])).collect();
        let g = LabeledGraph::from_edges(vertices.len(), &edges).expect("subgraph");
        bp_spectral_lower_bound(&g)
    }

    fn mask(&self, b: &OrientedBiclique) -> u128 {
        let mut m = 0u128;
        for &u in &b.left {
            for &v in &b.right {
                m |= 1 << self.edge_index[&(u.min(v), u.max(v))];
            }
        }
        m
    }

    fn search(&mut self, remaining: u128, budget: usize) -> Result<bool> {
        self.work.tick()?;
        if remaining == 0 {
            return Ok(true);
        }
        if budget == 0 || self.failed.get(&remaining).is_some_and(|&b| b >= budget) {
            return Ok(false);
        }
        if self.lower_bound(remaining) > budget {
            self.failed.insert(remaining, budget);
            return Ok(false);
        }
        let first = remaining.trailing_zeros() as usize;
        let (u, v) = self.edges[first];
        let adjacent = |x: usize, y: usize| -> bool {
            self.edge_index
                .get(&(x.min(y), x.max(y)))
                .is_some_and(|&i| remaining >> i & 1 == 1)
        };
        let mut options: Vec<(OrientedBiclique, u128)> = Vec::new();
        let left_pool: Vec<usize> = (0..self.n).filter(|&x| x != u && adjacent(x, v)).collect();
        for lmask in 0u64..1 << left_pool.len() {
            let mut left = vec![u];
            left.extend(
                left_pool
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| lmask >> i & 1 == 1)
                    .map(|(_, &x)| x),
            );
            let right_pool: Vec<usize> = (0..self.n)
                .filter(|&y| y != v && left.iter().all(|&x| adjacent(x, y)))
                .collect();
            for rmask in 0u64..1 << right_pool.len() {
                let mut right = vec![v];
                right.extend(
                    right_pool
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| rmask >> i & 1 == 1)
                        .map(|(_, &y)| y),
                );
                let b = OrientedBiclique::new(left.clone(), right);
                let m = self.mask(&b);
                options.push((b, m));
            }
        }
        options.sort_by(|a, b| b.1.count_ones().cmp(&a.1.count_ones()).then_with(|| a.0.cmp(&b.0)));
        for (b, m) in options {
            self.chosen.push(b);
            if self.search(remaining & !m, budget - 1)? {
                return Ok(true);
            }
            self.chosen.pop();
        }
        self.failed.insert(remaining, budget);
        Ok(false)
    }
}
