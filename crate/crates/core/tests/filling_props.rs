use std::collections::BTreeSet;
use std::f64::consts::TAU;

use hypcert::filling::{
    admits, enumerate_slopes, fkp_lower_bound, is_normalized, slope_length, slope_length_bound, CuspData,
};
use num_complex::Complex64;
use num_integer::Integer;
use proptest::prelude::*;

fn cusp() -> impl Strategy<Value = CuspData> {
    (-1.5f64..1.5, 0.3f64..2.5, 0.8f64..4.0, -1.0f64..1.0, 2.5f64..8.0)
        .prop_filter_map("independent", |(mr, mi, lr, li, vol)| {
            CuspData::new(Complex64::new(mr, mi), Complex64::new(lr, li), vol).ok()
        })
}

/// Every normalized coprime pair in a box twice as large as needed:
/// `|q| <= |v| |m| / area` and `|p| <= |v| |l| / area` for `v = p m + q l`.
fn brute_force(c: &CuspData, limit: f64) -> BTreeSet<(i64, i64)> {
    let area = (c.longitude() * c.meridian().conj()).im.abs();
    let q_max = (2.0 * limit * c.meridian().norm() / area) as i64 + 2;
    let p_max = (2.0 * limit * c.longitude().norm() / area) as i64 + 2;
    let mut out = BTreeSet::new();
    for p in -p_max..=p_max {
        for q in 0..=q_max {
            if is_normalized(p, q) && p.gcd(&q) == 1 && slope_length(p, q, c) <= limit {
                out.insert((p, q));
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn matches_brute_force(c in cusp(), frac in 0.1f64..0.95, fudge in 0.0f64..0.05) {
        let list = enumerate_slopes(&c, c.parent_volume() * frac, fudge).unwrap();
        let limit = list.bound_used * (1.0 + fudge);
        let got: BTreeSet<(i64, i64)> = list.coefficients().into_iter().collect();
        prop_assert_eq!(got, brute_force(&c, limit));
    }

    #[test]
    fn output_is_sorted_normalized_and_short(c in cusp(), frac in 0.1f64..0.95) {
        let list = enumerate_slopes(&c, c.parent_volume() * frac, 0.01).unwrap();
        let limit = list.bound_used * 1.01;
        for w in list.pairs.windows(2) {
            prop_assert!((w[0].p, w[0].q) < (w[1].p, w[1].q));
        }
        for s in &list.pairs {
            prop_assert!(admits(s.p, s.q, &c, limit));
            prop_assert_eq!(s.length, slope_length(s.p, s.q, &c));
        }
    }

    /// Replacing the longitude by `l + m` relabels slopes `(p, q) -> (p - q, q)`.
    #[test]
    fn change_of_basis(c in cusp(), frac in 0.2f64..0.9) {
        let m = c.meridian();
        let c2 = CuspData::new(m, c.longitude() + m, c.parent_volume()).unwrap();
        let target = c.parent_volume() * frac;
        let a: BTreeSet<(i64, i64)> = enumerate_slopes(&c, target, 0.01).unwrap().coefficients().into_iter().collect();
        let b: BTreeSet<(i64, i64)> = enumerate_slopes(&c2, target, 0.01)
            .unwrap()
            .coefficients()
            .into_iter()
            .map(|(p, q)| (p + q, q))
            .collect();
        // lengths are recomputed in floating point, so only pairs away from
        // the boundary are compared
        let limit = slope_length_bound(c.parent_volume(), target).unwrap() * 1.01;
        let near = |&(p, q): &(i64, i64)| (slope_length(p, q, &c) - limit).abs() < 1e-9;
        let a: BTreeSet<_> = a.into_iter().filter(|x| !near(x)).collect();
        let b: BTreeSet<_> = b.into_iter().filter(|x| !near(x)).collect();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn bound_is_monotone(parent in 1.0f64..10.0, f1 in 0.01f64..0.99, f2 in 0.01f64..0.99) {
        let (lo, hi) = if f1 < f2 { (f1, f2) } else { (f2, f1) };
        let b_lo = slope_length_bound(parent, parent * lo).unwrap();
        let b_hi = slope_length_bound(parent, parent * hi).unwrap();
        prop_assert!(b_lo > TAU && b_lo <= b_hi);
        // a bigger parent makes the same target relatively smaller
        let bigger = slope_length_bound(parent * 1.5, parent * lo).unwrap();
        prop_assert!(bigger <= b_lo);
    }

    /// The bound inverts the volume estimate.
    #[test]
    fn bound_inverts_estimate(parent in 1.0f64..10.0, frac in 0.01f64..0.99) {
        let target = parent * frac;
        let l = slope_length_bound(parent, target).unwrap();
        let v = fkp_lower_bound(parent, l).unwrap();
        prop_assert!((v - target).abs() <= 1e-9 * parent, "{v} vs {target}");
    }

    #[test]
    fn fudge_only_adds(c in cusp(), frac in 0.2f64..0.9, fudge in 0.0f64..0.1) {
        let target = c.parent_volume() * frac;
        let plain: BTreeSet<_> = enumerate_slopes(&c, target, 0.0).unwrap().coefficients().into_iter().collect();
        let more: BTreeSet<_> = enumerate_slopes(&c, target, fudge).unwrap().coefficients().into_iter().collect();
        prop_assert!(plain.is_subset(&more));
    }
}

#[test]
fn invalid_inputs() {
    let m = Complex64::new(0.5, 1.0);
    assert!(CuspData::new(m, m * 2.0, 5.0).is_err());
    assert!(CuspData::new(m, Complex64::new(f64::NAN, 0.0), 5.0).is_err());
    assert!(CuspData::new(m, Complex64::new(2.0, 0.0), -1.0).is_err());
    let c = CuspData::new(m, Complex64::new(2.0, 0.0), 5.0).unwrap();
    assert!(enumerate_slopes(&c, 5.0, 0.01).is_err());
    assert!(enumerate_slopes(&c, 0.0, 0.01).is_err());
    assert!(enumerate_slopes(&c, 2.0, -0.1).is_err());
    assert!(enumerate_slopes(&c, 2.0, f64::INFINITY).is_err());
    assert!(fkp_lower_bound(5.0, TAU).is_err());
}
