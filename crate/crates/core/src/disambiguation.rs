//! The SOA disambiguation, an exhaustive minimum-VC disambiguation oracle,
//! and growth profiles.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::ControlFlow;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bits::{binomial, Combinations};
use crate::dimensions::{pack, vc_dim, LdSolver, Packed};
use crate::{Cell, Error, Limits, PartialMatrix, Result, TotalMatrix};

/// Why SOA picked the value it did for one prefix group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reason {
    /// Both continuations are realized and one has strictly larger LD.
    LdMax,
    /// Equal LD on both sides (including both empty); ties go to 0.
    TieFavorZero,
    /// Exactly one continuation is realized by a concept of the group.
    Forced,
}

impl Reason {
    pub fn as_str(self) -> &'static str {
        match self {
            Reason::LdMax => "ld-max",
            Reason::TieFavorZero => "tie-favor-0",
            Reason::Forced => "forced",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SoaStep {
    pub point: usize,
    /// Values of the group at the earlier points of the order.
    pub prefix: Vec<bool>,
    pub chosen: bool,
    pub reason: Reason,
    pub ld_zero: i32,
    pub ld_one: i32,
    /// Concepts whose star at `point` received `chosen`.
    pub filled: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SoaTrace {
    pub order: Vec<usize>,
    pub steps: Vec<SoaStep>,
    pub output: TotalMatrix,
}

fn check_order(order: &[usize], n: usize) -> Result<()> {
    if order.len() != n {
        return Err(Error::ShapeMismatch {
            expected: n,
            found: order.len(),
        });
    }
    let mut seen = vec![false; n];
    for &p in order {
        if p >= n {
            return Err(Error::IndexOutOfRange { index: p, len: n });
        }
        if core::mem::replace(&mut seen[p], true) {
            return Err(Error::DuplicateIndex(p));
        }
    }
    Ok(())
}

/// Disambiguates `m` with the Standard Optimal Algorithm.
///
/// Points are visited in `order` (natural order by default). At each point,
/// concepts are grouped by their already-resolved values on the earlier
/// points; within a group, every star at the current point receives the
/// value `c` maximizing the LD of the group members labelled `c` there, with
/// ties going to 0. LD is always taken on the progressively disambiguated
/// class. The run fails with [`Error::Invariant`] if some non-empty group has
/// both continuations with LD at least its own.
pub fn soa_disambiguate(m: &PartialMatrix, order: Option<&[usize]>) -> Result<SoaTrace> {
    soa_disambiguate_limited(m, order, &Limits::new())
}

pub fn soa_disambiguate_limited(m: &PartialMatrix, order: Option<&[usize]>, limits: &Limits) -> Result<SoaTrace> {
    let n = m.n_points();
    let order: Vec<usize> = match order {
        Some(o) => {
            check_order(o, n)?;
            o.to_vec()
        }
        None => (0..n).collect(),
    };
    let mut work = m.clone();
    let mut packed = pack(m)?;
    let mut solver = LdSolver::new(limits);
    let mut steps = Vec::new();

    for (k, &point) in order.iter().enumerate() {
        let mut groups: BTreeMap<Vec<bool>, Vec<usize>> = BTreeMap::new();
        for row in 0..work.n_concepts() {
            let prefix = order[..k]
                .iter()
                .map(|&p| {
                    work.get(row, p)
                        .bit()
                        .ok_or_else(|| Error::Invariant(format!("unresolved star at concept {row}")))
                })
                .collect::<Result<Vec<bool>>>()?;
            groups.entry(prefix).or_default().push(row);
        }
        let bit = 1u128 << point;
        for (prefix, members) in groups {
            if members.is_empty() {
                return Err(Error::Invariant(format!("empty prefix group at point {}", point + 1)));
            }
            let pick = |f: &dyn Fn(&Packed) -> bool| -> Vec<Packed> {
                members.iter().map(|&i| packed[i]).filter(|r| f(r)).collect()
            };
            let zero = pick(&|r| r.zeros & bit != 0);
            let one = pick(&|r| r.ones & bit != 0);
            let ld_zero = solver.ld_packed(&zero)?;
            let ld_one = solver.ld_packed(&one)?;
            let ld_group = solver.ld_packed(&pick(&|_| true))?;
            if ld_zero.min(ld_one) > ld_group - 1 {
                return Err(Error::Invariant(format!(
                    "SOA progress: group at point {} has LD {ld_group} but continuations {ld_zero}/{ld_one}",
                    point + 1
                )));
            }
            let starred: Vec<usize> = members
                .iter()
                .copied()
                .filter(|&i| work.get(i, point).is_star())
                .collect();
            if starred.is_empty() {
                continue;
            }
            let chosen = ld_one > ld_zero;
            let reason = if zero.is_empty() != one.is_empty() {
                Reason::Forced
            } else if ld_zero == ld_one {
                Reason::TieFavorZero
            } else {
                Reason::LdMax
            };
            for &i in &starred {
                work.set(i, point, Cell::from_bit(chosen));
                if chosen {
                    packed[i].ones |= bit;
                } else {
                    packed[i].zeros |= bit;
                }
            }
            steps.push(SoaStep {
                point,
                prefix,
                chosen,
                reason,
                ld_zero,
                ld_one,
                filled: starred,
            });
        }
    }
    Ok(SoaTrace {
        order,
        steps,
        output: TotalMatrix::try_from(work)?,
    })
}

/// Largest number of stars [`min_vc_disambiguation`] enumerates without `force`.
pub const MAX_ENUMERATED_STARS: usize = 20;

/// Visits every completion of `m` (each star set to 0 or 1) in reflected
/// Gray-code order, so consecutive completions differ in one cell.
///
/// The first completion has every star set to 0. The visitor may stop early.
pub fn for_each_completion<F>(m: &PartialMatrix, limits: &Limits, mut visit: F) -> Result<()>
where
    F: FnMut(&TotalMatrix) -> ControlFlow<()>,
{
    let stars: Vec<(usize, usize)> = (0..m.n_concepts())
        .flat_map(|i| (0..m.n_points()).map(move |j| (i, j)))
        .filter(|&(i, j)| m.get(i, j).is_star())
        .collect();
    limits.guard(
        "stars for exhaustive completion",
        stars.len() as u64,
        MAX_ENUMERATED_STARS as u64,
    )?;
    if stars.len() >= 64 {
        return Err(Error::GuardExceeded {
            what: "stars for exhaustive completion (hard cap)",
            value: stars.len() as u64,
            limit: 63,
        });
    }
    let mut filled = m.clone();
    for &(i, j) in &stars {
        filled.set(i, j, Cell::Zero);
    }
    let mut current = TotalMatrix::try_from(filled)?;
    let mut work = limits.work();
    if visit(&current).is_break() {
        return Ok(());
    }
    for step in 1u64..1 << stars.len() {
        work.tick()?;
        let (i, j) = stars[step.trailing_zeros() as usize];
        current.flip(i, j);
        if visit(&current).is_break() {
            break;
        }
    }
    Ok(())
}

/// Minimum VC dimension over all completions of `m`, with the first
/// minimizing completion in Gray-code order.
///
/// Every completion has VC at least `vc_dim(m)`, so the search stops as soon
/// as that value is reached.
pub fn min_vc_disambiguation(m: &PartialMatrix, limits: &Limits) -> Result<(usize, TotalMatrix)> {
    let (floor, _) = vc_dim(m)?;
    let mut best: Option<(usize, TotalMatrix)> = None;
    let mut failure = None;
    for_each_completion(m, limits, |t| match vc_dim(t.as_partial()) {
        Ok((d, _)) => {
            if best.as_ref().is_none_or(|(b, _)| d < *b) {
                best = Some((d, t.clone()));
            }
            if d <= floor {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        }
        Err(e) => {
            failure = Some(e);
            ControlFlow::Break(())
        }
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    best.ok_or(Error::EmptyClass)
}

/// Above this many `k`-subsets, [`growth_profile`] samples instead of enumerating.
pub const GROWTH_EXHAUSTIVE_LIMIT: u128 = 2000;
pub const GROWTH_SAMPLES: usize = 200;

/// For each `k`, the largest SOA-disambiguation size of `m` restricted to a
/// `k`-subset of points.
///
/// All `k`-subsets are evaluated when there are at most 2000 of them,
/// otherwise 200 subsets drawn from a ChaCha8 generator seeded with `seed`.
pub fn growth_profile(m: &PartialMatrix, sizes: &[usize], seed: u64) -> Result<Vec<(usize, usize)>> {
    let n = m.n_points();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(sizes.len());
    for &k in sizes {
        if k > n {
            return Err(Error::IndexOutOfRange { index: k, len: n });
        }
        let subsets: Vec<Vec<usize>> = if binomial(n as u64, k as u64) <= GROWTH_EXHAUSTIVE_LIMIT {
            Combinations::new(n, k).collect()
        } else {
            (0..GROWTH_SAMPLES)
                .map(|_| {
                    let mut s = rand::seq::index::sample(&mut rng, n, k).into_vec();
                    s.sort_unstable();
                    s
                })
                .collect()
        };
        let mut best = 0;
        for s in subsets {
            let trace = soa_disambiguate(&m.restrict(&s)?, None)?;
            best = best.max(trace.output.distinct_rows());
        }
        out.push((k, best));
    }
    Ok(out)
}

/// `sum_{i <= d} C(n, i)`, the Sauer-Shelah-Perles bound; 0 for `d < 0`.
pub fn ssp_bound(n: usize, d: i32) -> u128 {
    if d < 0 {
        return 0;
    }
    (0..=d as u64)
        .map(|i| binomial(n as u64, i))
        .fold(0u128, |a, b| a.saturating_add(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::is_disambiguation;

    fn pm(rows: &[&str]) -> PartialMatrix {
        PartialMatrix::parse_rows(rows).unwrap()
    }

    #[test]
    fn total_class_is_untouched() {
        let m = pm(&["010", "111"]);
        let trace = soa_disambiguate(&m, None).unwrap();
        assert!(trace.steps.is_empty());
        assert_eq!(trace.output.as_partial(), &m);
    }

    #[test]
    fn all_star_group_ties_to_zero() {
        let trace = soa_disambiguate(&pm(&["**"]), None).unwrap();
        assert_eq!(trace.output, TotalMatrix::parse_rows(&["00"]).unwrap());
        assert!(trace.steps.iter().all(|s| s.reason == Reason::TieFavorZero));
    }

    #[test]
    fn forced_choice_follows_the_group() {
        let m = pm(&["11", "1*"]);
        let trace = soa_disambiguate(&m, None).unwrap();
        assert_eq!(trace.steps.len(), 1);
        assert_eq!(trace.steps[0].reason, Reason::Forced);
        assert!(trace.steps[0].chosen);
        assert!(is_disambiguation(&m, &trace.output).unwrap().is_none());
    }

    #[test]
    fn order_is_validated() {
        let m = pm(&["1*"]);
        assert!(soa_disambiguate(&m, Some(&[0, 0])).is_err());
        assert!(soa_disambiguate(&m, Some(&[0])).is_err());
        let t = soa_disambiguate(&m, Some(&[1, 0])).unwrap();
        assert_eq!(t.order, vec![1, 0]);
    }

    #[test]
    fn completions_in_gray_order() {
        let m = pm(&["*0", "1*"]);
        let mut seen = Vec::new();
        for_each_completion(&m, &Limits::new(), |t| {
            seen.push(alloc::format!("{t}"));
            ControlFlow::Continue(())
        })
        .unwrap();
        assert_eq!(seen, ["00\n10\n", "10\n10\n", "10\n11\n", "00\n11\n"]);
    }

    #[test]
    fn min_vc_brute_force() {
        // completions: [00,10] vc1, [10,10] vc0, [10,11] vc1, [00,11] vc1
        let (d, t) = min_vc_disambiguation(&pm(&["*0", "1*"]), &Limits::new()).unwrap();
        assert_eq!(d, 0);
        assert_eq!(t, TotalMatrix::parse_rows(&["10", "10"]).unwrap());
        let total = pm(&["01", "10"]);
        let (d, t) = min_vc_disambiguation(&total, &Limits::new()).unwrap();
        assert_eq!((d, t.as_partial()), (1, &total));
    }

    #[test]
    fn star_budget_guard() {
        let m = pm(&["***********", "***********"]);
        assert!(min_vc_disambiguation(&m, &Limits::new()).unwrap_err().is_guard());
    }

    #[test]
    fn growth_edge_sizes() {
        let m = pm(&["1*0", "01*", "*11"]);
        let full = soa_disambiguate(&m, None).unwrap().output.distinct_rows();
        let profile = growth_profile(&m, &[0, 3], 0).unwrap();
        assert_eq!(profile, vec![(0, 1), (3, full)]);
        assert!(growth_profile(&m, &[4], 0).is_err());
    }

    #[test]
    fn ssp_sums() {
        assert_eq!(ssp_bound(4, 3), 15);
        assert_eq!(ssp_bound(10, 0), 1);
        assert_eq!(ssp_bound(5, -1), 0);
    }
}
