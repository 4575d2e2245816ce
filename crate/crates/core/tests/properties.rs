use std::sync::Arc;

use asymlen::asymptotics::{estimate_limit, teissier_check, LengthSequence, Verdict};
use asymlen::geometry::{hull_region, kt_check, minkowski_sum, multiplicity_exact, ConvexRegion, Halfspace};
use asymlen::length::{colength_box_scan, maximal_power_index};
use asymlen::rational::{pow, q, qi};
use asymlen::semigroup::HermiteLattice;
use asymlen::{colength, parse_family, AmbientRing, Exponent, FamilySpec, GradedFamily, MonomialIdeal};
use num_bigint::BigInt;
use proptest::prelude::*;

fn ring(d: usize) -> Arc<AmbientRing> {
    AmbientRing::standard(d).unwrap()
}

fn ideal_strategy(d: usize, max_exp: u32, primary: bool) -> impl Strategy<Value = MonomialIdeal> {
    let gens = proptest::collection::vec(proptest::collection::vec(0..=max_exp, d), 1..5);
    let pure = proptest::collection::vec(1..=max_exp, d);
    (gens, pure).prop_map(move |(gens, pure)| {
        let mut all: Vec<Exponent> = gens.into_iter().map(Exponent).collect();
        if primary {
            all.extend(pure.iter().enumerate().map(|(axis, &p)| Exponent::unit(d, axis, p)));
        }
        MonomialIdeal::minimalize(&ring(d), all).unwrap()
    })
}

fn any_dim_ideal(primary: bool) -> impl Strategy<Value = MonomialIdeal> {
    (1usize..=3).prop_flat_map(move |d| ideal_strategy(d, 7, primary))
}

fn region_strategy() -> impl Strategy<Value = ConvexRegion> {
    proptest::collection::vec(((1i64..=5, 1i64..=5), (1i64..=8, 1i64..=3)), 1..4).prop_map(|hs| {
        let hs = hs.into_iter().map(|((a, b), (n, d))| Halfspace::from_ints(&[a, b], q(n, d))).collect();
        ConvexRegion::new(2, hs).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn colength_matches_box_scan(i in any_dim_ideal(false)) {
        prop_assert_eq!(colength(&i), colength_box_scan(&i));
    }

    #[test]
    fn saturation_matches_colon_iteration(i in any_dim_ideal(false), seed in any::<u64>()) {
        let d = i.dim();
        let j_gens: Vec<Exponent> = (0..2).map(|k| Exponent((0..d).map(|c| ((seed >> (8 * k + 2 * c)) & 3) as u32).collect())).collect();
        let j = MonomialIdeal::minimalize(&ring(d), j_gens).unwrap();
        prop_assert_eq!(i.saturate(&j).unwrap(), i.saturate_by_iteration(&j).unwrap());
    }

    #[test]
    fn colon_and_intersection_are_adjoint(i in any_dim_ideal(false), j in any_dim_ideal(false)) {
        prop_assume!(i.dim() == j.dim());
        // (I : J) J ⊆ I and I ∩ J ⊆ I, J.
        let c = i.colon(&j).unwrap();
        prop_assert!(c.multiply(&j).unwrap().is_subset_of(&i).unwrap());
        let m = i.intersect(&j).unwrap();
        prop_assert!(m.is_subset_of(&i).unwrap() && m.is_subset_of(&j).unwrap());
    }

    #[test]
    fn multiplicity_scales_with_powers(i in any_dim_ideal(true), k in 1u32..=3) {
        let d = i.dim() as u32;
        let e1 = multiplicity_exact(&i).unwrap();
        let ek = multiplicity_exact(&i.power(k)).unwrap();
        prop_assert_eq!(ek, e1 * BigInt::from(k).pow(d));
    }

    #[test]
    fn multiplicity_bounded_by_colength(i in any_dim_ideal(true)) {
        // ℓ(R/I) <= e(I) <= d! ℓ(R/I).
        let len = colength(&i).finite().unwrap();
        let e = multiplicity_exact(&i).unwrap();
        let fact: u128 = (1..=i.dim() as u128).product();
        prop_assert!(BigInt::from(len) <= e && e <= BigInt::from(fact * len));
    }

    #[test]
    fn root_sum_inequality_for_ideals(i in (2usize..=3).prop_flat_map(|d| (ideal_strategy(d, 5, true), ideal_strategy(d, 5, true)))) {
        let r = teissier_check(&i.0, &i.1).unwrap();
        prop_assert!(r.holds(), "{} / {}: {:?}", i.0, i.1, r.ordering);
        let same = teissier_check(&i.0, &i.0).unwrap();
        prop_assert!(same.is_equality());
    }

    #[test]
    fn covolume_root_sum_inequality(a in region_strategy(), b in region_strategy()) {
        let r = kt_check(&a, &b).unwrap();
        prop_assert!(r.holds(), "{a} + {b}");
    }

    #[test]
    fn homothetic_regions_give_equality(a in region_strategy(), n in 1i64..=9, d in 1i64..=4) {
        let t = q(n, d);
        let scaled = a.scale(&t);
        prop_assert_eq!(scaled.covol().unwrap().value, a.covol().unwrap().value * pow(&t, 2));
        prop_assert!(kt_check(&a, &scaled).unwrap().is_equality());
    }

    #[test]
    fn minkowski_sum_of_newton_regions(i in ideal_strategy(2, 5, true), j in ideal_strategy(2, 5, true)) {
        // The Newton region of a product is the sum of the Newton regions.
        let sum = minkowski_sum(&hull_region(&i).unwrap(), &hull_region(&j).unwrap()).unwrap();
        prop_assert_eq!(sum, hull_region(&i.multiply(&j).unwrap()).unwrap());
    }

    #[test]
    fn estimate_recovers_exact_quadratics(a in 1u128..50, b in 0u128..50, c in 0u128..50) {
        let entries = (1..=40u32).map(|n| (n, a * (n as u128).pow(2) + b * n as u128 + c)).collect();
        let seq = LengthSequence::new(entries, 2).unwrap();
        let est = estimate_limit(&seq).unwrap();
        prop_assert!(est.tail_min <= est.point_estimate && est.point_estimate <= est.tail_max);
        let err = (asymlen::rational::to_f64(&est.point_estimate) - a as f64).abs() / a as f64;
        prop_assert!(err < 1e-2 || c != 0, "estimate {} for a = {a}", est.point_estimate);
        if c == 0 {
            prop_assert_eq!(est.point_estimate, qi(a as i64));
            prop_assert_eq!(est.verdict, Verdict::Converged);
        }
    }

    #[test]
    fn power_family_limit_is_covolume(i in ideal_strategy(2, 4, true)) {
        let fam = GradedFamily::new(FamilySpec::Power(i.clone())).unwrap();
        let seq = asymlen::asymptotics::length_sequence(&fam, 24).unwrap();
        let est = estimate_limit(&seq).unwrap();
        let covol = hull_region(&i).unwrap().covol().unwrap().value;
        if covol == qi(0) {
            prop_assert_eq!(est.point_estimate, covol);
            return Ok(());
        }
        let err = (asymlen::rational::to_f64(&est.point_estimate) / asymlen::rational::to_f64(&covol) - 1.0).abs();
        prop_assert!(err < 0.05, "{i}: {} vs {}", est.point_estimate, covol);
    }

    #[test]
    fn family_specs_round_trip(i in ideal_strategy(2, 4, true), j in ideal_strategy(2, 4, false)) {
        for spec in [
            FamilySpec::Power(i.clone()),
            FamilySpec::Symbolic { ideal: i.clone(), by: j.clone() },
            FamilySpec::Product(Box::new(FamilySpec::Saturation(j.clone())), Box::new(FamilySpec::Table(vec![i.clone(), j.clone()]))),
        ] {
            let text = spec.to_string();
            prop_assert_eq!(parse_family(&ring(2), &text).unwrap().to_string(), text);
        }
    }

    #[test]
    fn hermite_index_matches_determinant(a in -20i64..20, b in -20i64..20, c in -20i64..20, d in -20i64..20) {
        prop_assume!(a * d - b * c != 0);
        let mut l = HermiteLattice::new(2);
        l.insert(&[a as i128, b as i128]);
        l.insert(&[c as i128, d as i128]);
        prop_assert_eq!(l.rank(), 2);
        prop_assert_eq!(l.saturation_index() as i64, (a * d - b * c).abs());
    }

    #[test]
    fn maximal_power_index_is_least(i in any_dim_ideal(true)) {
        let c = maximal_power_index(&i).unwrap();
        let r = i.ring();
        prop_assert!(MonomialIdeal::maximal_power(r, c).is_subset_of(&i).unwrap());
        if c > 0 {
            prop_assert!(!MonomialIdeal::maximal_power(r, c - 1).is_subset_of(&i).unwrap());
        }
    }
}
