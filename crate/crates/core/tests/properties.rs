mod common;

use std::ops::ControlFlow;

use common::*;
use pcc_core::constructions::{gen_biclique_class, verify_ld_le_2};
use pcc_core::dimensions::{dual_vc_check, ld_dim, ld_dim_by_oracle, ld_dim_with_witness, vc_dim};
use pcc_core::disambiguation::{for_each_completion, min_vc_disambiguation, soa_disambiguate, ssp_bound};
use pcc_core::graph::{biclique_partition_number, bp_spectral_lower_bound, chromatic_number};
use pcc_core::model::is_disambiguation;
use pcc_core::{Limits, Pattern};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn vc_at_most_ld(m in partial_class(7, 12)) {
        let (vc, w) = vc_dim(&m).unwrap();
        prop_assert!(w.validate(&m));
        let (ld, tree) = ld_dim_with_witness(&m).unwrap();
        prop_assert!(vc as i32 <= ld);
        if let Some(t) = tree {
            prop_assert_eq!(t.depth as i32, ld);
            prop_assert!(t.validate(&m));
        }
    }

    #[test]
    fn ld_matches_tree_oracle(m in partial_class(5, 10)) {
        prop_assert_eq!(ld_dim(&m).unwrap(), ld_dim_by_oracle(&m, &Limits::new()).unwrap());
    }

    #[test]
    fn dual_vc_inequality(m in partial_class(8, 12)) {
        let r = dual_vc_check(&m).unwrap();
        prop_assert!(r.bound_holds);
        prop_assert!((r.dual_vc as u128) < 1u128 << (r.vc + 1));
    }

    #[test]
    fn soa_output_is_small_disambiguation(m in partial_class(8, 16)) {
        let trace = soa_disambiguate(&m, None).unwrap();
        prop_assert_eq!(is_disambiguation(&m, &trace.output).unwrap(), None);
        let ld = ld_dim(&m).unwrap();
        prop_assert!(trace.output.distinct_rows() as u128 <= ssp_bound(m.n_points(), ld));
        for s in &trace.steps {
            prop_assert!(s.ld_zero.max(s.ld_one) <= ld);
        }
    }

    #[test]
    fn soa_respects_custom_order(m in partial_class(6, 10), seed in any::<u64>()) {
        let mut order: Vec<usize> = (0..m.n_points()).collect();
        let n = order.len();
        for i in (1..n).rev() {
            order.swap(i, (seed as usize).wrapping_mul(i + 7) % (i + 1));
        }
        let trace = soa_disambiguate(&m, Some(&order)).unwrap();
        prop_assert_eq!(is_disambiguation(&m, &trace.output).unwrap(), None);
    }

    #[test]
    fn dual_is_an_involution(m in partial_class(6, 8)) {
        prop_assert_eq!(m.dual().dual(), m.clone());
        let keep: Vec<usize> = (0..m.n_points()).rev().collect();
        let r = m.restrict(&keep).unwrap();
        prop_assert_eq!(r.n_concepts(), m.n_concepts());
        prop_assert_eq!(r.dual().n_concepts(), m.n_points());
    }

    #[test]
    fn completions_and_min_vc(m in partial_class(4, 5)) {
        prop_assume!(m.star_count() <= 10);
        let (floor, _) = vc_dim(&m).unwrap();
        let mut seen = std::collections::BTreeSet::new();
        let mut min = usize::MAX;
        for_each_completion(&m, &Limits::new(), |t| {
            assert_eq!(is_disambiguation(&m, t).unwrap(), None);
            seen.insert(t.to_string());
            min = min.min(vc_dim(t.as_partial()).unwrap().0);
            ControlFlow::Continue(())
        }).unwrap();
        prop_assert_eq!(seen.len(), 1usize << m.star_count());
        let (best, t) = min_vc_disambiguation(&m, &Limits::new()).unwrap();
        prop_assert_eq!(best, min);
        prop_assert!(best >= floor);
        prop_assert_eq!(vc_dim(t.as_partial()).unwrap().0, best);
    }

    #[test]
    fn biclique_class_columns_bound_chi(g in graph(5)) {
        prop_assume!(g.edge_count() > 0);
        let (_, partition) = biclique_partition_number(&g, &Limits::new()).unwrap();
        let m = gen_biclique_class(&g, &partition).unwrap();
        prop_assert!(m.contains_pattern(&Pattern::ld3_witness()).is_none());
        prop_assert!(verify_ld_le_2(&m).holds());
        prop_assert!(ld_dim(&m).unwrap() <= 2);
        let chi = chromatic_number(&g, &Limits::new()).unwrap().chi;
        let soa = soa_disambiguate(&m, None).unwrap().output;
        prop_assert!(soa.distinct_cols() >= chi);
        if m.star_count() <= 12 {
            let (_, t) = min_vc_disambiguation(&m, &Limits::new()).unwrap();
            prop_assert!(t.distinct_cols() >= chi);
        }
    }

    #[test]
    fn chromatic_number_matches_brute_force(g in graph(7)) {
        let c = chromatic_number(&g, &Limits::new()).unwrap();
        prop_assert_eq!(c.chi, brute_chi(&g));
        prop_assert!(g.is_proper_coloring(&c.colors));
        prop_assert!(c.colors.iter().all(|&x| x < c.chi));
    }

    #[test]
    fn spectral_bound_is_exact_inertia_and_below_bp(g in graph(7)) {
        let (pos, neg) = exact_inertia(&g);
        prop_assert_eq!(bp_spectral_lower_bound(&g), pos.max(neg));
        prop_assume!(g.edge_count() <= 14);
        let (bp, family) = biclique_partition_number(&g, &Limits::new()).unwrap();
        prop_assert_eq!(bp, family.len());
        prop_assert!(bp_spectral_lower_bound(&g) <= bp);
    }
}
