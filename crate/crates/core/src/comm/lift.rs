use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::cert::{check_certificates, consistent};
use super::{
    bit_string, cover_number, validate_rectangles, BoolFunction, CertificateFamily, CommMatrix, CoverMode, Rectangle,
};
use crate::{Cell, Error, Limits, Result};

/// Guard on `n * k`, the input bits per side of a lifted matrix.
pub const LIFT_MAX_BITS: usize = 12;

/// `k` for a square `2^k x 2^k` gadget.
fn gadget_bits(g: &CommMatrix) -> Result<usize> {
    if g.rows() != g.cols() || !g.rows().is_power_of_two() {
        return Err(Error::InvalidGadget(format!(
            "gadget must be square with a power-of-two side, got {}x{}",
            g.rows(),
            g.cols()
        )));
    }
    Ok(g.rows().trailing_zeros() as usize)
}

/// The composed matrix `f o g^n`: row `X = x_1 ... x_n` and column
/// `Y = y_1 ... y_n` (blocks of `k` bits, `x_1` most significant) map to
/// `f(g(x_1, y_1), ..., g(x_n, y_n))`.
pub fn lift(f: &BoolFunction, g: &CommMatrix, limits: &Limits) -> Result<CommMatrix> {
    let k = gadget_bits(g)?;
    let n = f.n();
    limits.guard(
        "input bits per side of lifted matrix",
        (n * k) as u64,
        LIFT_MAX_BITS as u64,
    )?;
    let bits = n * k;
    let side = 1usize << bits;
    let mask = (1usize << k) - 1;
    let block = |v: usize, i: usize| v >> (k * (n - 1 - i)) & mask;
    let mut h = CommMatrix::from_fn(side, side, |x, y| {
        let z = (0..n).fold(0usize, |acc, i| acc << 1 | g.get(block(x, i), block(y, i)) as usize);
        f.eval(z)
    });
    let labels: Vec<_> = (0..side).map(|v| bit_string(v, bits)).collect();
    h.row_labels = Some(labels.clone());
    h.col_labels = Some(labels);
    Ok(h)
}

/// Rectangle partitions of a gadget's 0-cells and 1-cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetPartitions {
    pub zero: Vec<Rectangle>,
    pub one: Vec<Rectangle>,
}

impl GadgetPartitions {
    /// Minimum partitions for both values.
    pub fn minimal(g: &CommMatrix, limits: &Limits) -> Result<Self> {
        gadget_bits(g)?;
        Ok(GadgetPartitions {
            zero: cover_number(g, false, CoverMode::Partition, limits)?.1,
            one: cover_number(g, true, CoverMode::Partition, limits)?.1,
        })
    }

    pub fn get(&self, b: bool) -> &[Rectangle] {
        if b {
            &self.one
        } else {
            &self.zero
        }
    }

    pub fn validate(&self, g: &CommMatrix) -> Result<()> {
        for b in [false, true] {
            validate_rectangles(g, b, self.get(b), CoverMode::Partition)
                .map_err(|e| Error::InvalidGadget(format!("{}-partition: {e}", b as u8)))?;
        }
        Ok(())
    }
}

/// A `b`-partition of `lift(f, g)` built from a certificate family.
///
/// Each distinct certificate `rho` contributes the products of one gadget
/// rectangle per fixed bit (a `rho_i`-rectangle of `g` in block `i`), with
/// free blocks left whole. The distinct certificates must cover every input
/// of `f^{-1}(b)` exactly once; the result is checked against the lifted
/// matrix before it is returned.
pub fn certificates_to_partition(
    f: &BoolFunction,
    g: &CommMatrix,
    fam: &CertificateFamily,
    parts: &GadgetPartitions,
    limits: &Limits,
) -> Result<Vec<Rectangle>> {
    let k = gadget_bits(g)?;
    parts.validate(g)?;
    check_certificates(f, fam)?;
    let n = f.n();
    let certs = fam.distinct();
    for y in f.preimage(fam.b) {
        let hits = certs.iter().filter(|rho| consistent(rho, y, n)).count();
        if hits != 1 {
            return Err(Error::InvalidFamily(format!(
                "input {} is consistent with {hits} distinct certificates",
                bit_string(y, n)
            )));
        }
    }
    let lifted = lift(f, g, limits)?;
    let whole: Vec<usize> = (0..1usize << k).collect();
    let mut out = Vec::new();
    for rho in &certs {
        // per block: the gadget rectangles to choose from
        let options: Vec<Vec<(&[usize], &[usize])>> = rho
            .iter()
            .map(|c| match c {
                Cell::Star => vec![(whole.as_slice(), whole.as_slice())],
                _ => parts
                    .get(c.bit() == Some(true))
                    .iter()
                    .map(|r| (r.rows.as_slice(), r.cols.as_slice()))
                    .collect(),
            })
            .collect();
        let mut choice = vec![0usize; n];
        loop {
            let pick: Vec<_> = (0..n).map(|i| options[i][choice[i]]).collect();
            let rows = product(pick.iter().map(|p| p.0), k);
            let cols = product(pick.iter().map(|p| p.1), k);
            out.push(Rectangle::new(rows, cols));
            // odometer, last block fastest
            let mut i = n;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                choice[i] += 1;
                if choice[i] < options[i].len() {
                    break;
                }
                choice[i] = 0;
            }
            if choice.iter().all(|&c| c == 0) {
                break;
            }
        }
    }
    validate_rectangles(&lifted, fam.b, &out, CoverMode::Partition)
        .map_err(|e| Error::Invariant(format!("lifted partition rejected: {e}")))?;
    Ok(out)
}

/// All concatenations `v_1 ... v_n` with `v_i` drawn from the `i`-th set.
fn product<'a>(sets: impl Iterator<Item = &'a [usize]>, k: usize) -> Vec<usize> {
    let mut acc = vec![0usize];
    for s in sets {
        acc = acc.iter().flat_map(|&a| s.iter().map(move |&v| a << k | v)).collect();
    }
    acc
}

/// Small gadgets.
pub mod gadgets {
    use super::super::{bit_string, CommMatrix};
    use crate::{Error, Result};
    use alloc::vec::Vec;

    fn labeled(mut g: CommMatrix, k: usize) -> CommMatrix {
        let labels: Vec<_> = (0..1usize << k).map(|v| bit_string(v, k)).collect();
        g.row_labels = Some(labels.clone());
        g.col_labels = Some(labels);
        g
    }

    /// `g(x, y) = [x = y]` on `k` bits.
    pub fn equality(k: usize) -> Result<CommMatrix> {
        if k == 0 || k > 6 {
            return Err(Error::InvalidGadget("equality gadget needs 1 <= k <= 6".into()));
        }
        Ok(labeled(CommMatrix::identity(1 << k), k))
    }

    /// `g(x, y) = <x, y> mod 2` on `k <= 3` bits.
    pub fn inner_product(k: usize) -> Result<CommMatrix> {
        if k == 0 || k > 3 {
            return Err(Error::InvalidGadget("inner-product gadget needs 1 <= k <= 3".into()));
        }
        Ok(labeled(
            CommMatrix::from_fn(1 << k, 1 << k, |x, y| (x & y).count_ones() % 2 == 1),
            k,
        ))
    }

    /// Index gadget on 2 bits: `y_1` selects which bit of `x` is output
    /// (`x_1` when `y_1 = 0`, `x_2` otherwise); `y_2` is ignored.
    pub fn index2() -> CommMatrix {
        labeled(
            CommMatrix::from_fn(4, 4, |x, y| {
                let sel = y >> 1;
                x >> (1 - sel) & 1 == 1
            }),
            2,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comm::{uc_complexity, Unambiguity};

    #[test]
    fn identity_lift_is_gadget() {
        let l = Limits::new();
        let g = gadgets::inner_product(2).unwrap();
        let h = lift(&BoolFunction::identity(), &g, &l).unwrap();
        assert_eq!(h, g);
        let z = lift(&BoolFunction::constant(2, false), &gadgets::equality(1).unwrap(), &l).unwrap();
        assert_eq!(z.count(true), 0);
    }

    #[test]
    fn and_of_equalities() {
        let l = Limits::new();
        let h = lift(&BoolFunction::and(2), &gadgets::equality(1).unwrap(), &l).unwrap();
        assert_eq!(h.rows(), 4);
        assert_eq!(h.cells_equal(true), vec![(0, 0), (1, 1), (2, 2), (3, 3)]);
        assert!(lift(&BoolFunction::and(2), &CommMatrix::identity(3), &l).is_err());
        assert!(lift(&BoolFunction::and(7), &gadgets::equality(2).unwrap(), &l)
            .unwrap_err()
            .is_guard());
    }

    #[test]
    fn certificate_partitions() {
        let l = Limits::new();
        let g = gadgets::equality(1).unwrap();
        let parts = GadgetPartitions::minimal(&g, &l).unwrap();
        assert_eq!((parts.zero.len(), parts.one.len()), (2, 2));
        for f in [BoolFunction::and(2), BoolFunction::or(2)] {
            let (_, fam) = uc_complexity(&f, true, Unambiguity::Partition, &l).unwrap();
            let rects = certificates_to_partition(&f, &g, &fam, &parts, &l).unwrap();
            let bound: usize = fam.certs.len() * 4;
            assert!(rects.len() <= bound);
            let best = cover_number(&lift(&f, &g, &l).unwrap(), true, CoverMode::Partition, &l)
                .unwrap()
                .0;
            assert!(best <= rects.len());
        }
        let id = BoolFunction::identity();
        let fam = CertificateFamily {
            b: true,
            certs: [(1, vec![Cell::One])].into_iter().collect(),
        };
        assert_eq!(certificates_to_partition(&id, &g, &fam, &parts, &l).unwrap(), parts.one);
    }

    #[test]
    fn shared_certificates_accepted() {
        // OR_2 with b = 1: "1*" shared by inputs 10 and 11, plus "01"
        let l = Limits::new();
        let f = BoolFunction::or(2);
        let g = gadgets::equality(1).unwrap();
        let parts = GadgetPartitions::minimal(&g, &l).unwrap();
        let fam = CertificateFamily {
            b: true,
            certs: [
                (1, vec![Cell::Zero, Cell::One]),
                (2, vec![Cell::One, Cell::Star]),
                (3, vec![Cell::One, Cell::Star]),
            ]
            .into_iter()
            .collect(),
        };
        assert_eq!(certificates_to_partition(&f, &g, &fam, &parts, &l).unwrap().len(), 6);
        let overlapping = CertificateFamily {
            b: true,
            certs: [
                (1, vec![Cell::Star, Cell::One]),
                (2, vec![Cell::One, Cell::Star]),
                (3, vec![Cell::One, Cell::Star]),
            ]
            .into_iter()
            .collect(),
        };
        assert!(certificates_to_partition(&f, &g, &overlapping, &parts, &l).is_err());
    }

    #[test]
    fn index_gadget() {
        let g = gadgets::index2();
        // x = 10: y_1 = 0 reads x_1 = 1, y_1 = 1 reads x_2 = 0
        assert!(g.get(0b10, 0b00) && g.get(0b10, 0b01));
        assert!(!g.get(0b10, 0b10) && !g.get(0b10, 0b11));
    }
}
