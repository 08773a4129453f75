use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use super::{cover_number, CommMatrix, CoverMode};
use crate::graph::{chromatic_number, coverage, validate_biclique_family, FamilyMode, LabeledGraph, OrientedBiclique};
use crate::{Error, Limits, Result};

/// Guard on the number of 0-cells, the vertex count of the conflict graph.
pub const ASS_MAX_ZERO_CELLS: usize = 200;

/// Smallest `s` with `s * s >= c`.
pub fn ceil_sqrt(c: usize) -> usize {
    let mut s = libm::sqrt(c as f64) as usize;
    while s * s > c {
        s -= 1;
    }
    while s * s < c {
        s += 1;
    }
    s
}

/// The conflict graph of `h`: one vertex per 0-cell `(x, y)` (row-major,
/// payload `(x, y)`), with `(x, y) ~ (x', y')` iff `h(x, y') = 1` or
/// `h(x', y) = 1`.
pub fn ass_conflict_graph(h: &CommMatrix, limits: &Limits) -> Result<LabeledGraph> {
    let cells = h.cells_equal(false);
    limits.guard(
        "0-cells for conflict graph",
        cells.len() as u64,
        ASS_MAX_ZERO_CELLS as u64,
    )?;
    let mut g = LabeledGraph::new(cells.len());
    for (u, &(x, y)) in cells.iter().enumerate() {
        for (v, &(x2, y2)) in cells.iter().enumerate().skip(u + 1) {
            if h.get(x, y2) || h.get(x2, y) {
                g.add_edge(u, v)?;
            }
        }
    }
    g.payloads = Some(cells);
    Ok(g)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AssBranch {
    /// The doubly covered subgraph already has large chromatic number.
    H2,
    /// A color class of the doubly covered subgraph, induced in the conflict graph.
    ColorClass,
}

impl AssBranch {
    pub fn as_str(self) -> &'static str {
        match self {
            AssBranch::H2 => "H2",
            AssBranch::ColorClass => "color-class",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssReport {
    /// `Cov_0(h)`.
    pub c: usize,
    /// Size of the minimum 1-partition used.
    pub m: usize,
    /// Chromatic number of the output graph.
    pub chi_out: usize,
    /// Size of the output biclique partition.
    pub bp_size: usize,
    pub branch: AssBranch,
    /// Chromatic number of the full conflict graph.
    pub chi_initial: usize,
    /// Chromatic number of the doubly covered subgraph.
    pub chi_h2: usize,
}

#[derive(Debug, Clone)]
pub struct AssOutput {
    pub graph: LabeledGraph,
    pub partition: Vec<OrientedBiclique>,
    pub report: AssReport,
}

fn step(name: &str, detail: impl core::fmt::Display) -> Error {
    Error::Invariant(format!("{name}: {detail}"))
}

/// Turns `h` into a graph with a biclique partition of size at most `m^2`
/// and chromatic number at least `ceil(sqrt(c))`, where `c = Cov_0(h)` and
/// `m` is the size of a minimum 1-partition of `h`.
///
/// Every step of the argument is checked; a failure is reported as
/// [`Error::Invariant`] naming the step.
pub fn ass_pipeline(h: &CommMatrix, limits: &Limits) -> Result<AssOutput> {
    let g = ass_conflict_graph(h, limits)?;
    let (c, _) = cover_number(h, false, CoverMode::Cover, limits)?;
    let (m, ones) = cover_number(h, true, CoverMode::Partition, limits)?;
    let payload = g.payloads.clone().unwrap_or_default();
    let target = ceil_sqrt(c);

    let chi_initial = chromatic_number(&g, limits)?.chi;
    if chi_initial < c {
        return Err(step(
            "chromatic number of conflict graph",
            format!("chi(G) = {chi_initial} < Cov_0 = {c}"),
        ));
    }

    // Q_i = S_i^- x S_i^+
    let q: Vec<OrientedBiclique> = ones
        .iter()
        .map(|r| {
            let left = (0..g.n())
                .filter(|&v| r.rows.binary_search(&payload[v].0).is_ok())
                .collect();
            let right = (0..g.n())
                .filter(|&v| r.cols.binary_search(&payload[v].1).is_ok())
                .collect();
            OrientedBiclique::new(left, right)
        })
        .collect();
    validate_biclique_family(&g, &q, FamilyMode::CoverAtMostTwice)
        .map_err(|e| step("edges covered once or twice by Q_i", e))?;
    let counts = coverage(&g, &q).map_err(|e| step("Q_i are bicliques of G", e))?;

    let doubled: Vec<(usize, usize)> = counts.iter().filter(|(_, &k)| k == 2).map(|(&e, _)| e).collect();
    let mut h2 = LabeledGraph::from_edges(g.n(), &doubled)?;
    h2.payloads = g.payloads.clone();
    // Q_ij and Q_ji carry the same edges, so only i < j is kept
    let mut qij = Vec::new();
    for i in 0..q.len() {
        for j in i + 1..q.len() {
            let left: Vec<usize> = q[i]
                .left
                .iter()
                .copied()
                .filter(|v| q[j].right.binary_search(v).is_ok())
                .collect();
            let right: Vec<usize> = q[i]
                .right
                .iter()
                .copied()
                .filter(|v| q[j].left.binary_search(v).is_ok())
                .collect();
            if !left.is_empty() && !right.is_empty() {
                qij.push(OrientedBiclique::new(left, right));
            }
        }
    }
    validate_biclique_family(&h2, &qij, FamilyMode::Partition)
        .map_err(|e| step("Q_ij partition the doubly covered edges", e))?;

    let coloring = chromatic_number(&h2, limits)?;
    let (graph, partition, branch) = if coloring.chi >= target {
        (h2, qij, AssBranch::H2)
    } else {
        let mut chosen = None;
        for class in coloring.classes() {
            let sub = g.induced(&class)?;
            if chromatic_number(&sub, limits)?.chi >= target {
                chosen = Some((class, sub));
                break;
            }
        }
        let (class, sub) = chosen.ok_or_else(|| {
            step(
                "some color class of H_2 has large chromatic number",
                format!("no class reaches {target}"),
            )
        })?;
        let index: BTreeMap<usize, usize> = class.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let restricted = q
            .iter()
            .map(|b| {
                let pick = |side: &[usize]| side.iter().filter_map(|v| index.get(v).copied()).collect::<Vec<_>>();
                OrientedBiclique::new(pick(&b.left), pick(&b.right))
            })
            .filter(|b| b.edge_count() > 0)
            .collect::<Vec<_>>();
        validate_biclique_family(&sub, &restricted, FamilyMode::Partition)
            .map_err(|e| step("restricted Q_i partition the color class", e))?;
        (sub, restricted, AssBranch::ColorClass)
    };

    let chi_out = chromatic_number(&graph, limits)?.chi;
    if chi_out < target {
        return Err(step(
            "output chromatic number",
            format!("{chi_out} < ceil(sqrt({c})) = {target}"),
        ));
    }
    if partition.len() > m * m {
        return Err(step(
            "output partition size",
            format!("{} > m^2 = {}", partition.len(), m * m),
        ));
    }
    let report = AssReport {
        c,
        m,
        chi_out,
        bp_size: partition.len(),
        branch,
        chi_initial,
        chi_h2: coloring.chi,
    };
    Ok(AssOutput {
        graph,
        partition,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_square_roots() {
        let got: Vec<usize> = (0..11).map(ceil_sqrt).collect();
        assert_eq!(got, [0, 1, 2, 2, 2, 3, 3, 3, 3, 3, 4]);
        assert_eq!(ceil_sqrt(1 << 40), 1 << 20);
        assert_eq!(ceil_sqrt((1 << 40) + 1), (1 << 20) + 1);
    }

    #[test]
    fn conflict_graph_examples() {
        let l = Limits::new();
        let g = ass_conflict_graph(&CommMatrix::identity(2), &l).unwrap();
        assert_eq!(g.payloads, Some(alloc::vec![(0, 1), (1, 0)]));
        assert_eq!(g.edges().collect::<Vec<_>>(), [(0, 1)]);
        let zeros = ass_conflict_graph(&CommMatrix::constant(2, 3, false), &l).unwrap();
        assert_eq!((zeros.n(), zeros.edge_count()), (6, 0));
        assert_eq!(
            ass_conflict_graph(&CommMatrix::constant(2, 2, true), &l).unwrap().n(),
            0
        );
    }

    #[test]
    fn identity_pipeline() {
        let out = ass_pipeline(&CommMatrix::identity(2), &Limits::new()).unwrap();
        let r = out.report;
        assert_eq!((r.c, r.m, r.chi_out, r.bp_size, r.branch), (2, 2, 2, 1, AssBranch::H2));
        assert_eq!(r.chi_initial, 2);
    }

    #[test]
    fn degenerate_pipelines() {
        let l = Limits::new();
        let ones = ass_pipeline(&CommMatrix::constant(2, 2, true), &l).unwrap();
        assert_eq!((ones.report.c, ones.report.chi_out, ones.report.bp_size), (0, 0, 0));
        let zeros = ass_pipeline(&CommMatrix::constant(2, 2, false), &l).unwrap();
        assert_eq!((zeros.report.c, zeros.report.m, zeros.report.bp_size), (1, 0, 0));
    }
}
