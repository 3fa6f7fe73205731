//! Frozen values for the four-root example, computed with numpy (np.roots,
//! 2^14-point trapezoid rule, direct root products).

use vblaschke::metrics::l2_error_profile;
use vblaschke::{unwind, Complex, RadiusSchedule, RootForm};

fn example() -> RootForm {
    RootForm::monic(vec![
        Complex::new(0.2, 0.6),
        Complex::new(-0.3, 0.4),
        Complex::new(0.0, -0.5),
        Complex::new(0.7, -0.9),
    ])
    .unwrap()
}

#[test]
fn unit_radius_error_profile() {
    let expected = [
        12.659047597640074,
        4.358348348654525,
        1.5309600349113444,
        0.01976041362128274,
    ];
    let f = example().to_polynomial();
    let series = unwind(&f, &RadiusSchedule::Fixed { radius: 1.0 }, 10).unwrap();
    assert_eq!(series.len(), 4);
    let errors = l2_error_profile(&f, &series, 4, 1e-12).unwrap();
    for (l, (got, want)) in errors.iter().zip(expected).enumerate() {
        assert!(
            (got - want).abs() <= 1e-9 * want,
            "L = {l}: {got} vs {want}"
        );
    }
    assert!(errors[4] <= 1e-20);
}

#[test]
fn boundary_trace_samples() {
    let expected = [
        (0, 1.0350000000000001, 1.0050000000000001),
        (100, -1.144518144683846, 0.8041567865665901),
        (333, -0.8066022625304098, 0.8183325537366606),
        (512, 2.3249999999999997, 0.07499999999999918),
        (1000, 1.1933590305456971, 0.4882995029141176),
    ];
    let trace = example().to_polynomial().boundary_trace(1.0, 1024).unwrap();
    assert_eq!(trace.len(), 1024);
    for (j, re, im) in expected {
        let (t, v) = trace[j];
        assert!((t - std::f64::consts::TAU * j as f64 / 1024.0).abs() < 1e-15);
        assert!(
            (v - Complex::new(re, im)).norm() <= 1e-13,
            "sample {j}: {v}"
        );
    }
}
