use std::f64::consts::TAU;

use proptest::prelude::*;
use vblaschke::blaschke::one_step_energies;
use vblaschke::metrics::{contraction_615, contraction_power_mean, dirichlet_norm_sq};
use vblaschke::{factorize, unwind, Complex, Polynomial, RadiusSchedule, RootForm};

fn complex_in(radius: f64) -> impl Strategy<Value = Complex> {
    (0.0..1.0f64, 0.0..TAU).prop_map(move |(u, t)| Complex::from_polar(radius * u.sqrt(), t))
}

fn roots(max_degree: usize, radius: f64) -> impl Strategy<Value = Vec<Complex>> {
    prop::collection::vec(complex_in(radius), 1..=max_degree)
}

fn polynomial(max_degree: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((-10.0..10.0f64, -10.0..10.0f64), 1..=max_degree + 1).prop_filter_map(
        "zero",
        |cs| {
            let p = Polynomial::new(
                cs.into_iter()
                    .map(|(re, im)| Complex::new(re, im))
                    .collect(),
            )
            .ok()?;
            (!p.is_zero()).then_some(p)
        },
    )
}

fn schedule() -> impl Strategy<Value = RadiusSchedule> {
    prop_oneof![
        (0.5..4.0f64).prop_map(|radius| RadiusSchedule::Fixed { radius }),
        (1.1..3.0f64).prop_map(|margin| RadiusSchedule::MinimalCapture { margin }),
        Just(RadiusSchedule::Contraction615),
        Just(RadiusSchedule::OstrowskiContraction),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn json_round_trip(p in polynomial(12), rs in roots(8, 5.0)) {
        let back: Polynomial = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        prop_assert_eq!(back, p);
        let rf = RootForm::monic(rs).unwrap();
        let back: RootForm = serde_json::from_str(&serde_json::to_string(&rf).unwrap()).unwrap();
        prop_assert_eq!(back, rf);
    }

    #[test]
    fn scale_roots_inverse(rs in roots(10, 5.0), lambda in 0.1..10.0f64) {
        let rf = RootForm::monic(rs).unwrap();
        let back = rf.scale_roots(lambda).unwrap().scale_roots(1.0 / lambda).unwrap();
        for (a, b) in rf.roots.iter().zip(&back.roots) {
            prop_assert!((a - b).norm() <= 1e-12 * (1.0 + a.norm()));
        }
    }

    #[test]
    fn recenter_vanishes_at_origin(p in polynomial(12)) {
        prop_assert_eq!(p.recenter().evaluate(Complex::new(0.0, 0.0)), Complex::new(0.0, 0.0));
    }

    #[test]
    fn blaschke_has_unit_modulus_on_its_circle(rs in roots(8, 1.0), r in 0.5..3.0f64, t in 0.0..TAU) {
        let rf = RootForm::monic(rs.iter().map(|a| a * r * 0.99).collect()).unwrap();
        let fac = factorize(&rf, r).unwrap();
        let value = fac.b.eval(Complex::from_polar(r, t)).unwrap();
        prop_assert!((value.norm() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn factorization_reconstructs(rs in roots(10, 3.0), r in 0.5..3.0f64, z in complex_in(2.0)) {
        let rf = RootForm::monic(rs).unwrap();
        prop_assume!(rf.roots.iter().all(|a| (a.norm() - r).abs() > 1e-6));
        let fac = factorize(&rf, r).unwrap();
        prop_assume!(fac.b.captured.iter().all(|a| (r * r - a.conj() * z).norm() > 1e-3));
        let f = rf.to_polynomial();
        let lhs = f.evaluate(z);
        let rhs = fac.b.eval(z).unwrap() * fac.g.evaluate(z);
        prop_assert!((lhs - rhs).norm() <= 1e-10 * (1.0 + f.abs_evaluate(z.norm())));
        prop_assert!(fac.residual <= 1e-10);
    }

    #[test]
    fn unwinding_degrees_decrease_and_terminate(rs in roots(10, 5.0), s in schedule()) {
        let f = RootForm::monic(rs).unwrap().to_polynomial();
        let series = unwind(&f, &s, f.degree()).unwrap();
        prop_assert!(series.is_complete());
        prop_assert!(series.degrees.windows(2).all(|w| w[1] < w[0]));
        let z = Complex::new(0.2, -0.1);
        let full = series.eval_partial(series.len(), z).unwrap();
        prop_assert!((full - f.evaluate(z)).norm() <= 1e-8 * f.abs_evaluate(z.norm()).max(1.0));
    }

    #[test]
    fn monic_dirichlet_norm_at_least_degree(rs in roots(20, 10.0)) {
        let rf = RootForm::monic(rs).unwrap();
        prop_assert!(dirichlet_norm_sq(&rf.to_polynomial()) >= rf.degree() as f64);
    }

    #[test]
    fn contractions_hold(rs in roots(15, 25.0)) {
        let rf = RootForm::monic(rs).unwrap();
        prop_assert!(contraction_615(&rf, None).unwrap().holds);
        prop_assert!(contraction_power_mean(&rf, None).unwrap().holds);
    }

    #[test]
    fn one_step_slack_nonnegative(base in roots(6, 2.0), a in complex_in(0.95), r in 0.5..3.0f64) {
        let base = RootForm::monic(base).unwrap().to_polynomial();
        let e = one_step_energies(&base, a * r, r, 8 * (base.degree() + 2)).unwrap();
        prop_assert!(e.slack() >= -1e-9 * e.f_prime);
    }
}
