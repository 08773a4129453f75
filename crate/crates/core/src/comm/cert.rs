use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::BoolFunction;
use crate::{Cell, Error, Limits, Result};

/// Arity guard for [`cert_complexity`].
pub const CER_MAX_ARITY: usize = 16;
/// Arity guard for the exact search in [`uc_complexity`].
pub const UC_MAX_ARITY: usize = 5;

/// A partial assignment over `{0, 1, *}^n`, position `i` for variable `x_{i+1}`.
pub type Certificate = Vec<Cell>;

pub(super) fn size(rho: &[Cell]) -> usize {
    rho.iter().filter(|c| !c.is_star()).count()
}

pub(super) fn consistent(rho: &[Cell], x: usize, n: usize) -> bool {
    rho.iter()
        .enumerate()
        .all(|(i, c)| c.bit().is_none_or(|b| (x >> (n - 1 - i) & 1 == 1) == b))
}

/// Inputs consistent with `rho`, in increasing order.
fn subcube(rho: &[Cell], n: usize) -> Vec<usize> {
    let free: Vec<usize> = (0..n).filter(|&i| rho[i].is_star()).collect();
    let base = rho.iter().enumerate().fold(0usize, |acc, (i, c)| {
        if c.bit() == Some(true) {
            acc | 1 << (n - 1 - i)
        } else {
            acc
        }
    });
    let mut out: Vec<usize> = (0..1usize << free.len())
        .map(|m| {
            free.iter().enumerate().fold(
                base,
                |acc, (j, &i)| if m >> j & 1 == 1 { acc | 1 << (n - 1 - i) } else { acc },
            )
        })
        .collect();
    out.sort_unstable();
    out
}

fn is_certificate(f: &BoolFunction, rho: &[Cell], b: bool) -> bool {
    subcube(rho, f.n()).into_iter().all(|x| f.eval(x) == b)
}

/// Monochromatic status of every subcube, indexed in base 3 (digit `i` for
/// position `i`: 0, 1, or 2 for `*`). Values: 0 or 1 when constant, 2 when mixed.
fn subcube_values(f: &BoolFunction) -> Vec<u8> {
    let n = f.n();
    let total = 3usize.pow(n as u32);
    let mut mono = vec![0u8; total];
    let pow3: Vec<usize> = (0..n).map(|i| 3usize.pow(i as u32)).collect();
    for rho in 0..total {
        let mut rest = rho;
        let mut star = None;
        let mut x = 0usize;
        for i in 0..n {
            let digit = rest % 3;
            rest /= 3;
            match digit {
                2 => {
                    star = Some(i);
                    break;
                }
                d => x |= d << (n - 1 - i),
            }
        }
        mono[rho] = match star {
            None => f.eval(x) as u8,
            Some(i) => {
                let a = mono[rho - 2 * pow3[i]];
                let b = mono[rho - pow3[i]];
                if a == b {
                    a
                } else {
                    2
                }
            }
        };
    }
    mono
}

fn ternary(rho: &[Cell]) -> usize {
    rho.iter().rev().fold(0, |acc, c| {
        acc * 3
            + match c {
                Cell::Zero => 0,
                Cell::One => 1,
                Cell::Star => 2,
            }
    })
}

fn input_ternary(x: usize, n: usize) -> usize {
    (0..n).rev().fold(0, |acc, i| acc * 3 + (x >> (n - 1 - i) & 1))
}

/// `Cer_b(f)`: the largest, over inputs with `f(x) = b`, minimum size of a
/// `b`-certificate for `x`, together with the first input attaining it.
///
/// Computed by dynamic programming over all `3^n` subcubes.
pub fn cert_complexity(f: &BoolFunction, b: bool, limits: &Limits) -> Result<(usize, Option<usize>)> {
    limits.guard("arity for certificate complexity", f.n() as u64, CER_MAX_ARITY as u64)?;
    let n = f.n();
    let mono = subcube_values(f);
    let total = mono.len();
    let pow3: Vec<usize> = (0..n).map(|i| 3usize.pow(i as u32)).collect();
    // best[rho]: smallest b-certificate obtained by starring positions of rho
    let mut best = vec![u8::MAX; total];
    for rho in (0..total).rev() {
        let mut rest = rho;
        let mut fixed = 0u8;
        let mut value = u8::MAX;
        for p in &pow3 {
            let digit = rest % 3;
            rest /= 3;
            if digit != 2 {
                fixed += 1;
                value = value.min(best[rho + (2 - digit) * p]);
            }
        }
        if mono[rho] == b as u8 {
            value = value.min(fixed);
        }
        best[rho] = value;
    }
    let mut worst: (usize, Option<usize>) = (0, None);
    for x in f.preimage(b) {
        let c = best[input_ternary(x, n)] as usize;
        if worst.1.is_none() || c > worst.0 {
            worst = (c, Some(x));
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Unambiguity {
    /// Certificates pairwise distinct and every `b`-input consistent with
    /// exactly one certificate of the family.
    Partition,
    /// Certificates pairwise distinct only.
    Distinct,
}

/// One `b`-certificate per input of `f^{-1}(b)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateFamily {
    pub b: bool,
    pub certs: BTreeMap<usize, Certificate>,
}

impl CertificateFamily {
    pub fn max_size(&self) -> usize {
        self.certs.values().map(|c| size(c)).max().unwrap_or(0)
    }

    /// Distinct certificates in order of first appearance (by input).
    pub fn distinct(&self) -> Vec<Certificate> {
        let mut seen = BTreeSet::new();
        self.certs
            .values()
            .filter(|c| seen.insert((*c).clone()))
            .cloned()
            .collect()
    }
}

/// Checks `fam` against `f` under `mode`; returns the largest certificate size.
pub fn validate_family(f: &BoolFunction, fam: &CertificateFamily, mode: Unambiguity) -> Result<usize> {
    let n = f.n();
    let inputs = f.preimage(fam.b);
    check_certificates(f, fam)?;
    let distinct = fam.distinct();
    if distinct.len() != fam.certs.len() {
        return Err(Error::InvalidFamily("two inputs share a certificate".into()));
    }
    if mode == Unambiguity::Partition {
        for &y in &inputs {
            let hits = fam.certs.values().filter(|rho| consistent(rho, y, n)).count();
            if hits != 1 {
                return Err(Error::InvalidFamily(format!(
                    "input {y} is consistent with {hits} certificates"
                )));
            }
        }
    }
    Ok(fam.max_size())
}

/// Every certificate has length `n`, agrees with its input and fixes `f` to `b`.
pub(super) fn check_certificates(f: &BoolFunction, fam: &CertificateFamily) -> Result<()> {
    let n = f.n();
    let keys: Vec<usize> = fam.certs.keys().copied().collect();
    if keys != f.preimage(fam.b) {
        return Err(Error::InvalidFamily(format!(
            "family must have exactly one certificate per input in f^-1({})",
            fam.b as u8
        )));
    }
    for (&x, rho) in &fam.certs {
        if rho.len() != n {
            return Err(Error::InvalidFamily(format!(
                "certificate for input {x} has wrong length"
            )));
        }
        if !consistent(rho, x, n) {
            return Err(Error::InvalidFamily(format!(
                "certificate for input {x} is not consistent with it"
            )));
        }
        if !is_certificate(f, rho, fam.b) {
            return Err(Error::InvalidFamily(format!(
                "certificate for input {x} is not a {}-certificate",
                fam.b as u8
            )));
        }
    }
    Ok(())
}

/// `UC_b(f)`: the smallest `k` admitting a certificate family with all
/// sizes at most `k` under `mode`, with a witnessing family.
///
/// `Distinct` is a bipartite matching of inputs to certificates;
/// `Partition` is a backtracking search in which every certificate's
/// subcube may not reach an input that is, or will be, covered by another
/// certificate.
pub fn uc_complexity(
    f: &BoolFunction,
    b: bool,
    mode: Unambiguity,
    limits: &Limits,
) -> Result<(usize, CertificateFamily)> {
    limits.guard(
        "arity for unambiguous certificate search",
        f.n() as u64,
        UC_MAX_ARITY as u64,
    )?;
    let n = f.n();
    let inputs = f.preimage(b);
    let mono = subcube_values(f);
    let mut work = limits.work();
    // candidates per input: b-certificates consistent with it, by (size, ternary index)
    let candidates: Vec<Vec<Certificate>> = inputs
        .iter()
        .map(|&x| {
            let mut c: Vec<Certificate> = (0..1usize << n)
                .map(|mask| {
                    (0..n)
                        .map(|i| {
                            if mask >> (n - 1 - i) & 1 == 1 {
                                Cell::from_bit(x >> (n - 1 - i) & 1 == 1)
                            } else {
                                Cell::Star
                            }
                        })
                        .collect::<Certificate>()
                })
                .filter(|rho| mono[ternary(rho)] == b as u8)
                .collect();
            c.sort_by_key(|rho| (size(rho), ternary(rho)));
            c
        })
        .collect();
    let (floor, _) = cert_complexity(f, b, limits)?;
    for k in floor..=n {
        let found = match mode {
            Unambiguity::Distinct => match_distinct(&candidates, k, &mut work)?,
            Unambiguity::Partition => {
                let mut chosen = Vec::new();
                let mut covered = BTreeSet::new();
                if partition_search(f, &inputs, &candidates, k, 0, &mut chosen, &mut covered, &mut work)? {
                    Some(chosen)
                } else {
                    None
                }
            }
        };
        if let Some(certs) = found {
            let fam = CertificateFamily {
                b,
                certs: inputs.iter().copied().zip(certs).collect(),
            };
            let max = validate_family(f, &fam, mode)?;
            return Ok((max, fam));
        }
    }
    Err(Error::Invariant("no certificate family of size n exists".into()))
}

fn match_distinct(
    candidates: &[Vec<Certificate>],
    k: usize,
    work: &mut crate::Work,
) -> Result<Option<Vec<Certificate>>> {
    let mut owner: BTreeMap<Certificate, usize> = BTreeMap::new();
    fn augment(
        x: usize,
        candidates: &[Vec<Certificate>],
        k: usize,
        owner: &mut BTreeMap<Certificate, usize>,
        visited: &mut BTreeSet<Certificate>,
        work: &mut crate::Work,
    ) -> Result<bool> {
        work.tick()?;
        for rho in candidates[x].iter().filter(|r| size(r) <= k) {
            if !visited.insert(rho.clone()) {
                continue;
            }
            let holder = owner.get(rho).copied();
            let free = match holder {
                None => true,
                Some(y) => augment(y, candidates, k, owner, visited, work)?,
            };
            if free {
                owner.insert(rho.clone(), x);
                return Ok(true);
            }
        }
        Ok(false)
    }
    for x in 0..candidates.len() {
        let mut visited = BTreeSet::new();
        if !augment(x, candidates, k, &mut owner, &mut visited, work)? {
            return Ok(None);
        }
    }
    let mut out = vec![Vec::new(); candidates.len()];
    for (rho, x) in owner {
        out[x] = rho;
    }
    Ok(Some(out))
}

#[allow(clippy::too_many_arguments)]
fn partition_search(
    f: &BoolFunction,
    inputs: &[usize],
    candidates: &[Vec<Certificate>],
    k: usize,
    i: usize,
    chosen: &mut Vec<Certificate>,
    covered: &mut BTreeSet<usize>,
    work: &mut crate::Work,
) -> Result<bool> {
    work.tick()?;
    if i == inputs.len() {
        return Ok(inputs.iter().all(|x| covered.contains(x)));
    }
    let x = inputs[i];
    for rho in candidates[i].iter().filter(|r| size(r) <= k) {
        let cube = subcube(rho, f.n());
        // any other input in the cube is consistent with its own (distinct) certificate too
        if cube.iter().any(|y| covered.contains(y) || *y != x) {
            continue;
        }
        covered.extend(cube.iter().copied());
        chosen.push(rho.clone());
        if partition_search(f, inputs, candidates, k, i + 1, chosen, covered, work)? {
            return Ok(true);
        }
        chosen.pop();
        for y in &cube {
            covered.remove(y);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> Certificate {
        s.chars().map(|ch| Cell::from_char(ch).unwrap()).collect()
    }

    #[test]
    fn and_or_certificates() {
        let l = Limits::new();
        let and2 = BoolFunction::and(2);
        assert_eq!(cert_complexity(&and2, false, &l).unwrap(), (1, Some(0)));
        assert_eq!(cert_complexity(&and2, true, &l).unwrap(), (2, Some(3)));
        let p3 = BoolFunction::parity(3);
        assert_eq!(cert_complexity(&p3, false, &l).unwrap().0, 3);
        assert_eq!(cert_complexity(&p3, true, &l).unwrap().0, 3);
        assert_eq!(
            cert_complexity(&BoolFunction::constant(2, true), false, &l).unwrap(),
            (0, None)
        );
    }

    #[test]
    fn uc_examples() {
        let l = Limits::new();
        let (k, fam) = uc_complexity(&BoolFunction::or(2), true, Unambiguity::Partition, &l).unwrap();
        assert_eq!(k, 2);
        assert_eq!(
            fam.certs.values().cloned().collect::<Vec<_>>(),
            vec![c("01"), c("10"), c("11")]
        );
        let (k, fam) = uc_complexity(&BoolFunction::and(2), true, Unambiguity::Partition, &l).unwrap();
        assert_eq!((k, fam.certs.len()), (2, 1));
        let (k, fam) = uc_complexity(&BoolFunction::constant(1, true), true, Unambiguity::Partition, &l).unwrap();
        assert_eq!(k, 1);
        assert_eq!(fam.certs.values().cloned().collect::<Vec<_>>(), vec![c("0"), c("1")]);
    }

    #[test]
    fn distinct_mode_allows_nesting() {
        let l = Limits::new();
        // constant 1 on one bit: {"*", "1"} is distinct but not a partition
        let (k, fam) = uc_complexity(&BoolFunction::constant(1, true), true, Unambiguity::Distinct, &l).unwrap();
        assert_eq!(k, 1);
        assert_eq!(
            validate_family(&BoolFunction::constant(1, true), &fam, Unambiguity::Distinct),
            Ok(1)
        );
        // OR_2 with b = 1 and relaxed semantics: "1*", "*1", "11" are distinct, size 1 is impossible
        let (k, _) = uc_complexity(&BoolFunction::or(2), true, Unambiguity::Distinct, &l).unwrap();
        assert_eq!(k, 2);
    }

    #[test]
    fn family_validation_errors() {
        let or2 = BoolFunction::or(2);
        let shared = CertificateFamily {
            b: true,
            certs: [(1, c("*1")), (2, c("1*")), (3, c("1*"))].into_iter().collect(),
        };
        assert!(validate_family(&or2, &shared, Unambiguity::Distinct).is_err());
        let not_cert = CertificateFamily {
            b: true,
            certs: [(1, c("**")), (2, c("10")), (3, c("11"))].into_iter().collect(),
        };
        assert!(validate_family(&or2, &not_cert, Unambiguity::Distinct).is_err());
        let overlapping = CertificateFamily {
            b: true,
            certs: [(1, c("*1")), (2, c("10")), (3, c("11"))].into_iter().collect(),
        };
        assert_eq!(validate_family(&or2, &overlapping, Unambiguity::Distinct), Ok(2));
        assert!(validate_family(&or2, &overlapping, Unambiguity::Partition).is_err());
        assert!(
            uc_complexity(&BoolFunction::or(6), true, Unambiguity::Partition, &Limits::new())
                .unwrap_err()
                .is_guard()
        );
    }
}
