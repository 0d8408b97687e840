use kgz_core::decomp::{block_of, sector_index, BlockSpec, SectorSpec, Sign, Speed};
use kgz_core::forms::{case_budget, epsilon_small, CaseId};
use kgz_core::lattice::{
    convolve_full, l2_norm, transform, Direction, Domain, Lattice, Offset, SpacetimeField, Window,
};
use kgz_core::oracles::{
    check_same_sign_modulation, rotate, transversality_det, ModulationSample,
};
use kgz_core::real::{dyadic_ceil, dyadic_floor};
use num_complex::Complex;
use proptest::prelude::*;

fn field(shape: [usize; 3], origin: [i64; 3], vals: &[(f64, f64)]) -> SpacetimeField<f64> {
    let lat = Lattice {
        dtau: 0.5,
        dxi: 0.25,
        tau_offset: Offset::Half,
        xi_offset: Offset::Half,
    };
    let window = Window { origin, shape };
    let mut f = SpacetimeField::zeros(lat, window, Domain::Frequency);
    for (v, &(re, im)) in f.values.iter_mut().zip(vals.iter().cycle()) {
        *v = Complex::new(re, im);
    }
    f
}

fn dims() -> impl Strategy<Value = [usize; 3]> {
    [1usize..5, 1usize..5, 1usize..5]
}

fn origin() -> impl Strategy<Value = [i64; 3]> {
    [-6i64..6, -6i64..6, -6i64..6]
}

fn values() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..32)
}

fn sign() -> impl Strategy<Value = Sign> {
    prop_oneof![Just(Sign::Plus), Just(Sign::Minus)]
}

proptest! {
    #[test]
    fn dyadic_rounding_brackets(x in 1.0f64..1e12) {
        let f = dyadic_floor(x) as f64;
        let c = dyadic_ceil(x) as f64;
        prop_assert!(f <= x && x < 2.0 * f);
        prop_assert!(c >= x && c < 2.0 * x.max(1.0));
    }

    #[test]
    fn block_membership_is_consistent(
        tau in -500.0f64..500.0, x in -300.0f64..300.0, y in -300.0f64..300.0,
        s in sign(), c in 0.05f64..0.95,
    ) {
        for speed in [Speed::Full, Speed::Reduced] {
            let v = if speed == Speed::Full { 1.0 } else { c };
            let (n, l) = block_of(tau, [x, y], s, v);
            prop_assert!(BlockSpec::new(s, speed, n, l, c).contains(tau, [x, y]));
            prop_assert!(!BlockSpec::new(s, speed, 2 * n, l, c).contains(tau, [x, y]));
            prop_assert!(!BlockSpec::new(s, speed, n, 2 * l, c).contains(tau, [x, y]));
        }
    }

    #[test]
    fn sector_index_is_in_range(x in -10.0f64..10.0, y in -10.0f64..10.0, k in 6u32..12) {
        prop_assume!(x != 0.0 || y != 0.0);
        let a = 1u64 << k;
        let j = sector_index([x, y], a).unwrap();
        prop_assert!(j >= -(a as i64) && j < a as i64);
        let sector = SectorSpec { a, j };
        prop_assert!(sector.contains([x, y]));
    }

    #[test]
    fn reflection_is_an_involution(s in dims(), o in origin(), v in values()) {
        let f = field(s, o, &v);
        prop_assert_eq!(f.reflect().reflect(), f);
    }

    #[test]
    fn convolution_commutes(
        s1 in dims(), o1 in origin(), v1 in values(),
        s2 in dims(), o2 in origin(), v2 in values(),
    ) {
        let a = field(s1, o1, &v1);
        let b = field(s2, o2, &v2);
        let ab = convolve_full(&a, &b).unwrap();
        let ba = convolve_full(&b, &a).unwrap();
        prop_assert_eq!(ab.window, ba.window);
        let scale = l2_norm(&ab).max(1e-300);
        for (x, y) in ab.values.iter().zip(&ba.values) {
            prop_assert!((x - y).norm() <= 1e-12 * scale);
        }
    }

    #[test]
    fn transform_preserves_norm(k in 0u32..4, i in 0u32..4, v in values()) {
        let f = field([1 << k, 1 << i, 1 << i], [-1, -2, 0], &v);
        let p = transform(&f, Direction::Inverse).unwrap();
        let n = l2_norm(&f);
        prop_assert!((l2_norm(&p) - n).abs() <= 1e-12 * n);
    }

    #[test]
    fn same_sign_modulation_never_fails(
        tau1 in -1e4f64..1e4, tau2 in -1e4f64..1e4,
        xi1 in [-1e3f64..1e3, -1e3f64..1e3], xi2 in [-1e3f64..1e3, -1e3f64..1e3],
        s0 in sign(), c in 0.01f64..0.99,
    ) {
        let sample = ModulationSample {
            tau1, tau2, xi1, xi2, sign0: s0, sign1: Sign::Minus, sign2: Sign::Minus, c,
        };
        prop_assert!(check_same_sign_modulation(&sample).unwrap() >= -1e-9);
    }

    #[test]
    fn transversality_is_rotation_invariant(
        r1 in 1.0f64..100.0, t1 in -3.1f64..3.1, r2 in 1.0f64..100.0, t2 in -3.1f64..3.1,
        angle in -3.1f64..3.1, c in 0.1f64..0.9, s in sign(),
    ) {
        let xi1 = [r1 * t1.cos(), r1 * t1.sin()];
        let xi2 = [r2 * t2.cos(), r2 * t2.sin()];
        prop_assume!((xi1[0] + xi2[0]).hypot(xi1[1] + xi2[1]) > 1e-3);
        let d = transversality_det(xi1, xi2, c, s).unwrap();
        let dr = transversality_det(rotate(xi1, angle), rotate(xi2, angle), c, s).unwrap();
        prop_assert!((d - dr).abs() <= 1e-12 * d.abs().max(1.0));
    }

    #[test]
    fn small_prime_budget_matches_formula(s in -0.99f64..-0.01, b in 0.51f64..0.99) {
        let e = case_budget(CaseId::IVPrimeSmall, s, b).epsilon;
        prop_assert!((e - epsilon_small(s)).abs() <= 1e-12);
    }
}
