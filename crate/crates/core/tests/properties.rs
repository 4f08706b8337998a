use ballschwarz::ballgeom::{bracket, mobius, mobius_jacobian_abs, Dimension, Point};
use ballschwarz::bounds::{u_axis, Verdict};
use ballschwarz::fields::{Polynomial, VectorField};
use ballschwarz::potential::SolutionHandle;
use ballschwarz::specfun::{hyp2f1, prop21_lhs, prop21_rhs, HypergeometricParams};
use ballschwarz::QuadratureSpec;
use proptest::prelude::*;

/// A point of the open ball of radius `max`, from a direction and a radial fraction.
fn ball_point(n: usize, max: f64) -> impl Strategy<Value = Point> {
    (prop::collection::vec(-1.0f64..1.0, n), 0.0f64..1.0).prop_filter_map("zero direction", move |(v, t)| {
        let norm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        (norm > 1e-6).then(|| Point::new(v.iter().map(|c| c / norm * t * max).collect()).unwrap())
    })
}

fn pair(max: f64) -> impl Strategy<Value = (Point, Point)> {
    (3usize..=6).prop_flat_map(move |n| (ball_point(n, max), ball_point(n, max)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn mobius_norm_identity((x, y) in pair(0.99)) {
        let lhs = mobius(&x, &y).unwrap().norm();
        let rhs = x.sub(&y).unwrap().norm() / bracket(&x, &y).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12);
    }

    #[test]
    fn mobius_defect_identity((x, y) in pair(0.99)) {
        let p = mobius(&x, &y).unwrap();
        let b = bracket(&x, &y).unwrap();
        let rhs = (1.0 - x.norm_sq()) * (1.0 - y.norm_sq()) / (b * b);
        prop_assert!((1.0 - p.norm_sq() - rhs).abs() <= 1e-12);
    }

    #[test]
    fn mobius_is_an_involution_and_self_map((x, y) in pair(0.99)) {
        let p = mobius(&x, &y).unwrap();
        prop_assert!(p.norm() < 1.0);
        prop_assert!(mobius(&x, &p).unwrap().sub(&y).unwrap().norm() <= 1e-10);
        prop_assert!(mobius(&x, &x).unwrap().norm() <= 1e-15);
    }

    #[test]
    fn mobius_jacobian_is_positive_and_symmetric((x, y) in pair(0.9)) {
        let j = mobius_jacobian_abs(&x, &y).unwrap();
        prop_assert!(j > 0.0 && j.is_finite());
        let p = mobius(&x, &y).unwrap();
        // Chain rule for the involution: J(x,y) J(x,T_x y) = 1.
        let back = mobius_jacobian_abs(&x, &p).unwrap();
        prop_assert!((j * back - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn hypergeometric_is_symmetric(a in -2.5f64..3.0, b in -2.5f64..3.0, c in 0.3f64..5.0, x in -1.0f64..0.95) {
        let ab = HypergeometricParams::new(a, b, c, x);
        let ba = HypergeometricParams::new(b, a, c, x);
        prop_assume!(ab.is_ok() && ba.is_ok());
        let (u, v) = (hyp2f1(ab.unwrap()).unwrap(), hyp2f1(ba.unwrap()).unwrap());
        prop_assert!((u - v).abs() <= 1e-10 * u.abs().max(1.0), "{u} vs {v}");
    }

    #[test]
    fn hypergeometric_at_zero_is_one(a in -3.0f64..3.0, b in -3.0f64..3.0, c in 0.2f64..4.0) {
        prop_assert_eq!(hyp2f1(HypergeometricParams::new(a, b, c, 0.0).unwrap()).unwrap(), 1.0);
    }

    #[test]
    fn verdict_rules(lhs in -10.0f64..10.0, rhs in -10.0f64..10.0, budget in 0.0f64..1.0, extra in 0.0f64..1.0) {
        let v = Verdict::classify(lhs, rhs, budget, rhs + extra);
        if (lhs - rhs).abs() <= budget {
            prop_assert_eq!(v, Verdict::Inconclusive);
        } else if lhs < rhs {
            prop_assert_eq!(v, Verdict::Pass);
        } else {
            prop_assert_ne!(v, Verdict::Pass);
        }
        // A larger budget never turns a verdict into FAIL.
        let wider = Verdict::classify(lhs, rhs, budget + 1.0, rhs + extra);
        prop_assert!(v != Verdict::Fail || wider != Verdict::Pass);
        prop_assert!(!(v != Verdict::Fail && wider == Verdict::Fail));
        prop_assert_eq!(Verdict::classify(f64::NAN, rhs, budget, rhs), Verdict::Fail);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn sine_power_identity(l1 in 1.0f64..6.0, l2 in 0.0f64..4.0, r in 0.0f64..0.9) {
        let q = QuadratureSpec::default();
        let lhs = prop21_lhs(l1, l2, r, &q).unwrap().value;
        let rhs = prop21_rhs(l1, l2, r).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-8 * rhs.abs());
    }

    #[test]
    fn green_potential_of_a_constant(n in 3usize..=5, c in -5.0f64..5.0, x in ball_point(5, 0.95)) {
        let x = Point::new(x.coords()[..n].to_vec()).unwrap();
        let q = QuadratureSpec::default();
        let zero = VectorField::from_polynomials(vec![Polynomial::zero(n)]).unwrap();
        let g = VectorField::from_polynomials(vec![Polynomial::constant(n, c)]).unwrap();
        let h = SolutionHandle::new(zero, g, q).unwrap();
        let v = h.green_potential(&x).unwrap();
        let exact = c * (1.0 - x.norm_sq()) / (2.0 * n as f64);
        prop_assert!((v.values[0] - exact).abs() <= 1e-8 * c.abs().max(1.0), "{} vs {exact}", v.values[0]);
    }

    #[test]
    fn u_stays_in_unit_interval(n in 3usize..=7, r in 0.0f64..0.999) {
        let u = u_axis(Dimension::new(n).unwrap(), r, &QuadratureSpec::default()).unwrap();
        prop_assert!(u.value >= -1e-12 && u.value <= 1.0);
    }
}
