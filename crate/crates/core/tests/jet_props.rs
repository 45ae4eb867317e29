mod common;

use common::fuzz::{trial, FuzzStats};
use common::Oracle;
use hypcert::{ComplexJet, Interval, Jet};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn jet(dim: usize) -> impl Strategy<Value = Jet> {
    (-1e3f64..1e3, prop::collection::vec(-1.0f64..1.0, dim), 0.0f64..1e-3)
        .prop_map(|(c, a, e)| Jet::from_parts(c, a, e).unwrap())
}

fn sample(dim: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(prop_oneof![Just(-1.0), Just(1.0), -1.0f64..=1.0], dim)
}

/// `lo <= v <= hi` up to the rounding of `v` itself.
fn holds(iv: Interval, v: f64) -> bool {
    let slack = v.abs() * 4.0 * f64::EPSILON;
    iv.lo - slack <= v && v <= iv.hi + slack
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    /// Seeded fuzz batches: random expression trees checked against the
    /// 192-bit oracle at sample points.
    #[test]
    fn random_expressions_are_contained(seed in any::<u64>()) {
        let mut o = Oracle::new();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut s = FuzzStats::default();
        for _ in 0..10 {
            trial(&mut o, &mut rng, &mut s);
        }
        prop_assert_eq!(s.violations, 0);
    }

    #[test]
    fn bounds_hold_the_affine_part(a in jet(3), x in sample(3)) {
        prop_assert!(holds(a.bounds(), a.linear_at(&x)));
        let v = a.linear_at(&x);
        prop_assert!(v.abs() <= a.sup_abs() * (1.0 + 4.0 * f64::EPSILON));
    }

    #[test]
    fn arithmetic_encloses_pointwise_results(a in jet(2), b in jet(2), x in sample(2)) {
        let (va, vb) = (a.linear_at(&x), b.linear_at(&x));
        prop_assert!(holds(a.add(&b).unwrap().bounds(), va + vb));
        prop_assert!(holds(a.sub(&b).unwrap().bounds(), va - vb));
        prop_assert!(holds(a.mul(&b).unwrap().bounds(), va * vb));
        prop_assert!(holds(a.square().unwrap().bounds(), va * va));
        if b.prove_nonzero() {
            prop_assert!(holds(a.div(&b).unwrap().bounds(), va / vb));
        }
    }

    #[test]
    fn exact_operations_add_no_error(a in jet(2)) {
        prop_assert_eq!(a.neg().neg(), a.clone());
        let z = a.sub(&a).unwrap();
        prop_assert!(z.bounds().contains(0.0));
        // doubling is exact in binary floating point
        let d = a.scale(2.0).unwrap();
        prop_assert_eq!(d.center(), 2.0 * a.center());
        prop_assert_eq!(d.err(), 2.0 * a.err());
        prop_assert_eq!(Jet::constant(0.0, 2).unwrap().sup_abs(), 0.0);
    }

    #[test]
    fn sign_predicates_are_sound(a in jet(2), x in sample(2)) {
        let v = a.linear_at(&x);
        if a.prove_positive() {
            prop_assert!(v > 0.0);
        }
        if a.prove_negative() {
            prop_assert!(v < 0.0);
        }
        if a.prove_gt(1.0) {
            prop_assert!(v > 1.0);
        }
    }

    /// Constants lift to any dimension; other jets only to their own.
    #[test]
    fn lift_keeps_the_function(a in jet(0), b in jet(2), x in sample(3)) {
        let l = a.lift(3).unwrap();
        prop_assert_eq!(l.dim(), 3);
        prop_assert_eq!(l.linear_at(&x), a.center());
        prop_assert_eq!(l.bounds(), a.bounds());
        prop_assert_eq!(b.lift(2).unwrap(), b.clone());
        prop_assert!(b.lift(3).is_err());
    }

    #[test]
    fn complex_product_encloses(ar in jet(1), ai in jet(1), br in jet(1), bi in jet(1), x in sample(1)) {
        let a = ComplexJet::new(ar.clone(), ai.clone()).unwrap();
        let b = ComplexJet::new(br.clone(), bi.clone()).unwrap();
        let p = a.mul(&b).unwrap();
        let (xr, xi) = (ar.linear_at(&x), ai.linear_at(&x));
        let (yr, yi) = (br.linear_at(&x), bi.linear_at(&x));
        let want = num_complex::Complex64::new(xr, xi) * num_complex::Complex64::new(yr, yi);
        let slack = 1e-9 * (1.0 + want.norm());
        let (re, im) = (p.re.bounds(), p.im.bounds());
        prop_assert!(re.lo - slack <= want.re && want.re <= re.hi + slack);
        prop_assert!(im.lo - slack <= want.im && want.im <= im.hi + slack);
    }
}

#[test]
fn invalid_jets_are_rejected() {
    assert!(Jet::from_parts(f64::NAN, vec![0.0], 0.0).is_err());
    assert!(Jet::from_parts(0.0, vec![0.0], -1.0).is_err());
    assert!(Jet::variable(0.0, 2, 1.0, 2).is_err());
    assert!(Jet::constant(0.0, 1).unwrap().ln().is_err());
    let a = Jet::constant(1.0, 1).unwrap();
    assert!(a.add(&Jet::constant(1.0, 2).unwrap()).is_err());
}
