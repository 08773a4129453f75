//! Generators for the two explicit concept-class families: `H_{r,d}`, whose
//! SOA disambiguation has large VC dimension, and the biclique class of a
//! graph, whose Littlestone dimension is at most 2.

use alloc::vec;
use alloc::vec::Vec;

use crate::bits::{binomial, Combinations};
use crate::dimensions::{ld_dim_tree_oracle, ORACLE_MAX_CONCEPTS, ORACLE_MAX_POINTS};
use crate::graph::{validate_biclique_family, FamilyMode, LabeledGraph, OrientedBiclique};
use crate::{Cell, Error, Limits, PartialMatrix, Pattern, Result};

/// Row guard for [`gen_hrd`].
pub const HRD_MAX_ROWS: u128 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HrdParams {
    pub r: usize,
    pub d: usize,
}

impl HrdParams {
    pub fn new(r: usize, d: usize) -> Result<Self> {
        if r == 0 || d == 0 {
            return Err(Error::Invalid("r and d must be positive".into()));
        }
        if r >= 32 || d >= 32 {
            return Err(Error::Invalid("r and d must be below 32".into()));
        }
        Ok(HrdParams { r, d })
    }

    /// Size of the ground set `[d * 2^r]` the `d`-subsets are drawn from.
    pub fn block(&self) -> usize {
        self.d << self.r
    }

    /// Domain size `d * (2^r + r)`.
    pub fn n_points(&self) -> usize {
        self.block() + self.d * self.r
    }

    /// Number of `d`-subsets of the block.
    pub fn n_sets(&self) -> u128 {
        binomial(self.block() as u64, self.d as u64)
    }

    /// Concept count `C(d * 2^r, d) * d * r`.
    pub fn n_concepts(&self) -> u128 {
        self.n_sets().saturating_mul((self.d * self.r) as u128)
    }

    /// Tail label of `h_{i,j}` (both 1-based): bit `j` (most significant
    /// first) of the `dr`-bit representation of `i - 1`, or `None` when
    /// `i > 2^{dr}`.
    pub fn beta(&self, i: usize, j: usize) -> Option<bool> {
        let width = self.d * self.r;
        if i == 0 || j == 0 || j > width || (i - 1) as u128 >= 1u128 << width {
            return None;
        }
        Some((i - 1) >> (width - j) & 1 == 1)
    }
}

/// Generates `H_{r,d}`.
///
/// The sets `F_1, F_2, ...` are the `d`-subsets of `[d * 2^r]` in
/// lexicographic order. Concept `h_{i,j}` is 1 on `F_i`, 0 on the rest of the
/// block, `beta(i, j)` at point `d * 2^r + j`, and `*` elsewhere. Rows are
/// ordered `h_{1,1}, h_{1,2}, ..., h_{1,dr}, h_{2,1}, ...`.
pub fn gen_hrd(p: HrdParams, limits: &Limits) -> Result<PartialMatrix> {
    let rows = p.n_concepts();
    limits.guard(
        "rows for H_{r,d}",
        rows.min(u64::MAX as u128) as u64,
        HRD_MAX_ROWS as u64,
    )?;
    let block = p.block();
    let width = p.d * p.r;
    let mut out = Vec::with_capacity(rows as usize);
    for (idx, set) in Combinations::new(block, p.d).enumerate() {
        let i = idx + 1;
        let mut base = vec![Cell::Zero; block];
        for &x in &set {
            base[x] = Cell::One;
        }
        base.extend(core::iter::repeat_n(Cell::Star, width));
        for j in 1..=width {
            let mut row = base.clone();
            if let Some(bit) = p.beta(i, j) {
                row[block + j - 1] = Cell::from_bit(bit);
            }
            out.push(row);
        }
    }
    PartialMatrix::new(p.n_points(), out)
}

/// The class with one concept per biclique: `h_i` is 0 on `L_i`, 1 on `R_i`
/// and `*` elsewhere. `partition` must partition the edges of `g`.
pub fn gen_biclique_class(g: &LabeledGraph, partition: &[OrientedBiclique]) -> Result<PartialMatrix> {
    validate_biclique_family(g, partition, FamilyMode::Partition).map_err(Error::NotAPartition)?;
    let rows = partition
        .iter()
        .map(|b| {
            let mut row = vec![Cell::Star; g.n()];
            for &v in &b.left {
                row[v] = Cell::Zero;
            }
            for &v in &b.right {
                row[v] = Cell::One;
            }
            row
        })
        .collect();
    PartialMatrix::new(g.n(), rows)
}

/// Outcome of [`verify_ld_le_2`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LdLe2Check {
    /// `[[1,0],[1,0]]` does not occur as a submatrix.
    pub pattern_free: bool,
    /// No shattered tree of height 3, when the class is within oracle bounds.
    pub tree_oracle: Option<bool>,
}

impl LdLe2Check {
    pub fn holds(&self) -> bool {
        self.pattern_free && self.tree_oracle.unwrap_or(true)
    }
}

/// Certifies `LD(m) <= 2` by absence of `[[1,0],[1,0]]`, cross-checked with
/// the tree oracle when `m` is small enough.
pub fn verify_ld_le_2(m: &PartialMatrix) -> LdLe2Check {
    let pattern_free = m.contains_pattern(&Pattern::ld3_witness()).is_none();
    let tree_oracle = (m.n_points() <= ORACLE_MAX_POINTS && m.n_concepts() <= ORACLE_MAX_CONCEPTS).then(|| {
        ld_dim_tree_oracle(m, 3, &Limits::new())
            .map(|w| w.is_none())
            .unwrap_or(false)
    });
    LdLe2Check {
        pattern_free,
        tree_oracle,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::star_partition;

    #[test]
    fn smallest_hrd() {
        let p = HrdParams::new(1, 1).unwrap();
        let m = gen_hrd(p, &Limits::new()).unwrap();
        assert_eq!(m.n_points(), 3);
        assert_eq!(m, PartialMatrix::parse_rows(&["100", "011"]).unwrap());
    }

    #[test]
    fn hrd_shape_formulas() {
        let p = HrdParams::new(2, 2).unwrap();
        assert_eq!(p.n_points(), 12);
        assert_eq!(p.n_concepts(), 28 * 4);
        assert_eq!(p.beta(1, 1), Some(false));
        assert_eq!(p.beta(16, 4), Some(true));
        assert_eq!(p.beta(17, 1), None);
        let big = HrdParams::new(5, 3).unwrap();
        assert!(gen_hrd(big, &Limits::new()).unwrap_err().is_guard());
        assert!(HrdParams::new(0, 1).is_err());
    }

    #[test]
    fn k3_biclique_class() {
        let g = LabeledGraph::complete(3);
        let m = gen_biclique_class(&g, &star_partition(3)).unwrap();
        assert_eq!(m, PartialMatrix::parse_rows(&["011", "*01"]).unwrap());
        assert!(verify_ld_le_2(&m).holds());
    }

    #[test]
    fn single_edge_class() {
        let g = LabeledGraph::complete(2);
        let m = gen_biclique_class(&g, &[OrientedBiclique::new(vec![0], vec![1])]).unwrap();
        assert_eq!(m, PartialMatrix::parse_rows(&["01"]).unwrap());
    }

    #[test]
    fn rejects_non_partition() {
        let g = LabeledGraph::complete(3);
        let doubled = [
            OrientedBiclique::new(vec![0], vec![1, 2]),
            OrientedBiclique::new(vec![1], vec![0, 2]),
        ];
        assert!(matches!(gen_biclique_class(&g, &doubled), Err(Error::NotAPartition(_))));
    }

    #[test]
    fn ld_le_2_fails_on_pattern() {
        let m = PartialMatrix::parse_rows(&["10", "10"]).unwrap();
        let check = verify_ld_le_2(&m);
        assert!(!check.pattern_free);
        assert!(!check.holds());
    }
}
