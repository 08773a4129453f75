mod common;

use common::*;
use pcc_core::comm::{
    ass_conflict_graph, ass_pipeline, cert_complexity, certificates_to_partition, cover_number, gadgets, lift,
    uc_complexity, validate_family, validate_rectangles, BoolFunction, CommMatrix, CoverMode, GadgetPartitions,
    Unambiguity,
};
use pcc_core::graph::{chromatic_number, validate_biclique_family, FamilyMode};
use pcc_core::Limits;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn certificate_complexity_matches_enumeration(f in bool_function(5), b in any::<bool>()) {
        let (cer, worst) = cert_complexity(&f, b, &Limits::new()).unwrap();
        let expected = f.preimage(b).iter().map(|&x| brute_cert(&f, x)).max();
        prop_assert_eq!(worst.is_some().then_some(cer), expected);
        if let Some(x) = worst {
            prop_assert_eq!(brute_cert(&f, x), cer);
        }
    }

    #[test]
    fn cer_le_uc_le_n(f in bool_function(3), b in any::<bool>()) {
        prop_assume!(!f.preimage(b).is_empty());
        let (cer, _) = cert_complexity(&f, b, &Limits::new()).unwrap();
        for mode in [Unambiguity::Partition, Unambiguity::Distinct] {
            let (uc, fam) = uc_complexity(&f, b, mode, &Limits::new()).unwrap();
            prop_assert!(cer <= uc && uc <= f.n());
            prop_assert_eq!(validate_family(&f, &fam, mode).unwrap(), uc);
        }
    }

    #[test]
    fn cover_numbers_match_subset_dp(h in comm_matrix(3, 4), b in any::<bool>()) {
        let l = Limits::new();
        let (cov, rects) = cover_number(&h, b, CoverMode::Cover, &l).unwrap();
        let (part, prects) = cover_number(&h, b, CoverMode::Partition, &l).unwrap();
        prop_assert_eq!(cov, brute_cover(&h, b, false));
        prop_assert_eq!(part, brute_cover(&h, b, true));
        prop_assert!(cov <= part);
        prop_assert!(validate_rectangles(&h, b, &rects, CoverMode::Cover).is_ok());
        prop_assert!(validate_rectangles(&h, b, &prects, CoverMode::Partition).is_ok());
    }

    #[test]
    fn conflict_graph_chi_at_least_cov0(h in comm_matrix(3, 3)) {
        let l = Limits::new();
        let g = ass_conflict_graph(&h, &l).unwrap();
        let (c, _) = cover_number(&h, false, CoverMode::Cover, &l).unwrap();
        prop_assert!(chromatic_number(&g, &l).unwrap().chi >= c);
    }

    #[test]
    fn pipeline_holds_on_small_matrices(h in comm_matrix(3, 3)) {
        let out = ass_pipeline(&h, &Limits::new()).unwrap();
        prop_assert!(validate_biclique_family(&out.graph, &out.partition, FamilyMode::Partition).is_ok());
        let r = &out.report;
        prop_assert!(r.bp_size <= r.m * r.m);
        prop_assert!(r.chi_out * r.chi_out >= r.c);
        prop_assert!(r.chi_initial >= r.c);
    }

    #[test]
    fn lifted_partitions_validate(f in bool_function(3), b in any::<bool>(), gcells in prop::collection::vec(any::<bool>(), 4)) {
        let l = Limits::new();
        let g = CommMatrix::new(2, 2, gcells).unwrap();
        prop_assume!(g.count(true) > 0 && g.count(false) > 0);
        prop_assume!(!f.preimage(b).is_empty());
        let parts = GadgetPartitions::minimal(&g, &l).unwrap();
        let (_, fam) = uc_complexity(&f, b, Unambiguity::Partition, &l).unwrap();
        let rects = certificates_to_partition(&f, &g, &fam, &parts, &l).unwrap();
        let lifted = lift(&f, &g, &l).unwrap();
        prop_assert!(validate_rectangles(&lifted, b, &rects, CoverMode::Partition).is_ok());
        let bound: usize = fam
            .distinct()
            .iter()
            .map(|rho| rho.iter().map(|c| c.bit().map_or(1, |v| parts.get(v).len())).product::<usize>())
            .sum();
        prop_assert!(rects.len() <= bound);
    }
}

#[test]
fn conflict_graph_coverage_by_any_partition() {
    // every 1-partition, not only minimum ones, covers each edge once or twice
    let h = CommMatrix::identity(3);
    let g = ass_conflict_graph(&h, &Limits::new()).unwrap();
    let payload = g.payloads.clone().unwrap();
    let singletons: Vec<_> = h.cells_equal(true);
    let q: Vec<_> = singletons
        .iter()
        .map(|&(x, y)| {
            pcc_core::graph::OrientedBiclique::new(
                (0..g.n()).filter(|&v| payload[v].0 == x).collect(),
                (0..g.n()).filter(|&v| payload[v].1 == y).collect(),
            )
        })
        .collect();
    assert!(validate_biclique_family(&g, &q, FamilyMode::CoverAtMostTwice).is_ok());
}

#[test]
fn equality_pipeline() {
    let l = Limits::new();
    let out = ass_pipeline(&CommMatrix::identity(4), &l).unwrap();
    let r = out.report;
    assert_eq!((r.c, r.m), (4, 4));
    assert!(r.chi_out >= 2 && r.bp_size <= 16);
    assert!(r.chi_initial >= 4);
}

#[test]
fn all_uc_families_on_two_bits() {
    // exhaustive over every function on 2 bits and both values
    let l = Limits::new();
    for t in 0u32..16 {
        let f = BoolFunction::new(2, (0..4).map(|x| t >> x & 1 == 1).collect()).unwrap();
        for b in [false, true] {
            let inputs = f.preimage(b);
            if inputs.is_empty() {
                continue;
            }
            for mode in [Unambiguity::Partition, Unambiguity::Distinct] {
                let brute = brute_uc(&f, b, mode);
                assert_eq!(
                    uc_complexity(&f, b, mode, &l).unwrap().0,
                    brute,
                    "table {t:04b} b={b} {mode:?}"
                );
            }
        }
    }
}

fn brute_uc(f: &BoolFunction, b: bool, mode: Unambiguity) -> usize {
    use pcc_core::comm::CertificateFamily;
    use pcc_core::Cell;
    let inputs = f.preimage(b);
    let n = f.n();
    let cands: Vec<Vec<Vec<Cell>>> = inputs
        .iter()
        .map(|&x| {
            (0..1usize << n)
                .map(|fixed| {
                    (0..n)
                        .map(|i| {
                            if fixed >> (n - 1 - i) & 1 == 1 {
                                Cell::from_bit(x >> (n - 1 - i) & 1 == 1)
                            } else {
                                Cell::Star
                            }
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let mut best = usize::MAX;
    let total: usize = cands.iter().map(|c| c.len()).product();
    for mut code in 0..total {
        let mut certs = std::collections::BTreeMap::new();
        for (i, &x) in inputs.iter().enumerate() {
            certs.insert(x, cands[i][code % cands[i].len()].clone());
            code /= cands[i].len();
        }
        if let Ok(k) = validate_family(f, &CertificateFamily { b, certs }, mode) {
            best = best.min(k);
        }
    }
    best
}

#[test]
fn gadget_library() {
    let l = Limits::new();
    for g in [
        gadgets::equality(1).unwrap(),
        gadgets::inner_product(2).unwrap(),
        gadgets::index2(),
    ] {
        let parts = GadgetPartitions::minimal(&g, &l).unwrap();
        assert!(parts.validate(&g).is_ok());
        assert_eq!(lift(&BoolFunction::identity(), &g, &l).unwrap(), g);
    }
    assert!(gadgets::inner_product(4).is_err());
}
