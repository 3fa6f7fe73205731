//! Invariant suites over seeded corpora.
//!
//! Each suite reports the number of cases, the number of failures and the
//! smallest slack seen, where a case's slack is its tolerance minus its
//! measured discrepancy (negative means failure). A case that errors counts
//! as a failure with slack `-inf`, serialized as `null`.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::blaschke::{self, RBlaschkeProduct};
use crate::error::Result;
use crate::experiment::{gen_random_poly, sample_seed, seeded_corpus};
use crate::metrics::{self, ENERGY_KAPPA};
use crate::poly::{Complex, Polynomial, RootForm};
use crate::unwind::{unwind, RadiusSchedule};

pub const EXACTNESS_TOL: f64 = 1e-8;
pub const EQUIVALENCE_TOL: f64 = 1e-10;
pub const LOG_DERIVATIVE_TOL: f64 = 1e-6;
pub const ONE_STEP_TOL: f64 = 1e-9;
pub const REFLECTION_TOL: f64 = 1e-10;
pub const ENERGY_TOL: f64 = 1e-8;
/// Step of the central difference in `t` for the log-derivative suite.
pub const FD_STEP: f64 = 1e-5;

pub const SUITES: &[&str] = &[
    "exactness",
    "contraction_615",
    "contraction_power_mean",
    "contraction_lambda",
    "equivalence",
    "log_derivative",
    "one_step",
    "reflection",
    "max_coeff_index",
    "dirichlet_lower_bound",
    "coeff_bounds",
    "energy_identity",
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuiteSummary {
    pub cases: usize,
    pub failures: usize,
    pub worst_slack: f64,
}

impl Default for SuiteSummary {
    fn default() -> Self {
        Self {
            cases: 0,
            failures: 0,
            worst_slack: f64::INFINITY,
        }
    }
}

impl SuiteSummary {
    fn record(&mut self, slack: f64) {
        self.cases += 1;
        let slack = if slack.is_nan() {
            f64::NEG_INFINITY
        } else {
            slack
        };
        if slack < 0.0 {
            self.failures += 1;
        }
        self.worst_slack = self.worst_slack.min(slack);
    }

    fn record_result(&mut self, slack: Result<f64>) {
        self.record(slack.unwrap_or(f64::NEG_INFINITY));
    }
}

pub type VerifyReport = BTreeMap<String, SuiteSummary>;

pub fn all_pass(report: &VerifyReport) -> bool {
    report.values().all(|s| s.failures == 0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions<'a> {
    /// Runs only suites whose name contains this string.
    pub filter: Option<&'a str>,
    /// Normalization used by the energy-identity suite.
    pub kappa: f64,
    pub master_seed: u64,
}

impl Default for VerifyOptions<'_> {
    fn default() -> Self {
        Self {
            filter: None,
            kappa: ENERGY_KAPPA,
            master_seed: 20_240_917,
        }
    }
}

pub fn verify(options: &VerifyOptions) -> VerifyReport {
    SUITES
        .iter()
        .enumerate()
        .filter(|(_, name)| options.filter.map_or(true, |f| name.contains(f)))
        .map(|(i, &name)| {
            let seed = sample_seed(options.master_seed, 1000 + i as u64);
            (name.to_string(), run_suite(name, seed, options.kappa))
        })
        .collect()
}

fn run_suite(name: &str, seed: u64, kappa: f64) -> SuiteSummary {
    let mut s = SuiteSummary::default();
    match name {
        "exactness" => exactness(&mut s, seed),
        "contraction_615" => {
            for rf in seeded_corpus(seed, 100, 30, 25.0) {
                s.record_result(metrics::contraction_615(&rf, None).map(relative_slack));
            }
        }
        "contraction_power_mean" => {
            for rf in seeded_corpus(seed, 100, 30, 25.0) {
                s.record_result(metrics::contraction_power_mean(&rf, None).map(relative_slack));
            }
        }
        "contraction_lambda" => contraction_lambda(&mut s, seed),
        "equivalence" => equivalence(&mut s, seed),
        "log_derivative" => log_derivative(&mut s, seed),
        "one_step" => one_step(&mut s, seed),
        "reflection" => reflection(&mut s, seed),
        "max_coeff_index" => max_coeff_index(&mut s),
        "dirichlet_lower_bound" => {
            for rf in seeded_corpus(seed, 100, 30, 25.0) {
                let n = rf.degree() as f64;
                s.record((metrics::dirichlet_norm_sq(&rf.to_polynomial()) - n) / n);
            }
        }
        "coeff_bounds" => {
            for rf in seeded_corpus(seed, 100, 20, 5.0) {
                for lambda in [1.0, 6.15 * rf.max_modulus()] {
                    s.record_result(
                        metrics::coeff_bound_ratios(&rf, lambda)
                            .map(|(a, b)| 1.0 + 1e-12 - a.max(b)),
                    );
                }
            }
        }
        "energy_identity" => {
            for rf in seeded_corpus(seed, 50, 20, 0.95) {
                s.record_result(
                    metrics::energy_identity_residual(&rf, kappa).map(|r| ENERGY_TOL - r),
                );
            }
            let z = RootForm::monic(vec![Complex::new(0.0, 0.0)]).unwrap();
            s.record_result(
                metrics::energy_identity_residual(&z, kappa).map(|r| 4.0 * f64::EPSILON - r),
            );
        }
        _ => unreachable!("unknown suite {name}"),
    }
    s
}

fn relative_slack(rep: metrics::ContractionReport) -> f64 {
    if rep.holds {
        (rep.slack / (1.0 + rep.rhs)).max(0.0)
    } else {
        rep.slack / (1.0 + rep.rhs)
    }
}

fn schedules() -> [RadiusSchedule; 4] {
    [
        RadiusSchedule::Fixed { radius: 1.0 },
        RadiusSchedule::MinimalCapture { margin: 1.5 },
        RadiusSchedule::Contraction615,
        RadiusSchedule::OstrowskiContraction,
    ]
}

/// Full-series boundary error relative to the boundary energy of `F`.
pub fn full_series_error(rf: &RootForm, schedule: &RadiusSchedule) -> Result<f64> {
    let f = rf.to_polynomial();
    let series = unwind(&f, schedule, rf.degree())?;
    if !series.is_complete() {
        return Ok(f64::INFINITY);
    }
    let err = metrics::l2_error_sq(&f, &series, series.len(), 1e-10)?;
    Ok(err / metrics::unit_circle_energy(&f))
}

fn exactness(s: &mut SuiteSummary, seed: u64) {
    for rf in seeded_corpus(seed, 100, 20, 25.0) {
        for schedule in schedules() {
            s.record_result(full_series_error(&rf, &schedule).map(|e| EXACTNESS_TOL - e));
        }
    }
}

/// Smallest `lambda = 6.15 max|a| * 2^k` at which the unscaled contraction holds.
pub fn lambda_holding(rf: &RootForm) -> Result<metrics::ContractionReport> {
    let start = if rf.max_modulus() > 0.0 {
        6.15 * rf.max_modulus()
    } else {
        1.0
    };
    let mut rep = metrics::contraction_lambda(rf, start)?;
    let mut lambda = start;
    for _ in 0..64 {
        if rep.holds {
            break;
        }
        lambda *= 2.0;
        rep = metrics::contraction_lambda(rf, lambda)?;
    }
    Ok(rep)
}

fn contraction_lambda(s: &mut SuiteSummary, seed: u64) {
    for rf in seeded_corpus(seed, 100, 30, 25.0) {
        s.record_result(lambda_holding(&rf).map(relative_slack));
    }
}

fn equivalence(s: &mut SuiteSummary, seed: u64) {
    for i in 0..50 {
        let rf = gen_random_poly(8, 2.0, sample_seed(seed, i));
        let eps = rf.max_modulus();
        s.record_result(
            metrics::scaling_equivalence(&rf, 2.0 * eps, 5.0 * eps)
                .map(|(a, b)| EQUIVALENCE_TOL - a.max(b)),
        );
        let unit = gen_random_poly(8, 1.0, sample_seed(seed, 1000 + i));
        s.record_result(
            metrics::unit_disk_equivalence(&unit, 4.0).map(|(a, b)| EQUIVALENCE_TOL - a.max(b)),
        );
        s.record_result(
            metrics::scaling_equivalence(&unit, 1.0, 4.0).map(|(a, b)| EQUIVALENCE_TOL - a.max(b)),
        );
    }
}

/// Worst relative gap between the closed-form `|B'|` and a central
/// difference of `B(r e^{it})` in `t` over `angles` equispaced angles.
pub fn log_derivative_gap(b: &RBlaschkeProduct, angles: usize) -> Result<f64> {
    let r = b.radius;
    let mut worst: f64 = 0.0;
    for j in 0..angles {
        let t = TAU * (j as f64 + 0.5) / angles as f64;
        let plus = b.eval(Complex::from_polar(r, t + FD_STEP))?;
        let minus = b.eval(Complex::from_polar(r, t - FD_STEP))?;
        // dB/dt = B'(z) i z, so |B'| = |dB/dt| / r.
        let fd = ((plus - minus) / (2.0 * FD_STEP)).norm() / r;
        let exact = b.log_derivative_modulus(t);
        worst = worst.max((fd - exact).abs() / exact);
    }
    Ok(worst)
}

fn log_derivative(s: &mut SuiteSummary, seed: u64) {
    let radii = [1.0, 1.5, 3.0];
    for i in 0..50u64 {
        let r = radii[i as usize % 3];
        let case_seed = sample_seed(seed, i);
        let order = 1 + (case_seed % 8) as usize;
        let roots = gen_random_poly(order, 0.9 * r, case_seed).roots;
        let gap = RBlaschkeProduct::new(r, roots).and_then(|b| log_derivative_gap(&b, 64));
        s.record_result(gap.map(|g| LOG_DERIVATIVE_TOL - g));
    }
}

fn one_step(s: &mut SuiteSummary, seed: u64) {
    let radii = [1.0, 1.5, 3.0];
    for i in 0..200u64 {
        let case_seed = sample_seed(seed, i);
        let r = radii[i as usize % 3];
        let base = gen_random_poly(1 + (case_seed % 10) as usize, 2.0, case_seed).to_polynomial();
        let a = gen_random_poly(1, 0.95 * r, case_seed ^ 0x5eed).roots[0];
        let points = 8 * (base.degree() + 2);
        s.record_result(
            blaschke::one_step_energies(&base, a, r, points)
                .map(|e| e.slack() + ONE_STEP_TOL * e.f_prime),
        );
    }
    let one = Polynomial::constant(Complex::new(1.0, 0.0)).unwrap();
    for a in [0.0, 0.5] {
        s.record_result(
            blaschke::one_step_energies(&one, Complex::new(a, 0.0), 1.0, 16)
                .map(|e| ONE_STEP_TOL * e.f_prime - e.slack().abs()),
        );
    }
}

/// Max `|d_k - conj(c_{n-k})|` over the largest coefficient, for the outer
/// factor `G` of a unit-disk factorization capturing every root.
pub fn reflection_gap(rf: &RootForm) -> Result<f64> {
    let f = rf.to_polynomial();
    let g = blaschke::factorize(rf, 1.0)?.g;
    let n = rf.degree();
    let gap = (0..=n)
        .map(|k| (g.coeff(k) - f.coeff(n - k).conj()).norm())
        .fold(0.0, f64::max);
    Ok(gap / f.max_abs_coeff().max(g.max_abs_coeff()))
}

fn reflection(s: &mut SuiteSummary, seed: u64) {
    for rf in seeded_corpus(seed, 100, 20, 0.99) {
        s.record_result(reflection_gap(&rf).map(|g| REFLECTION_TOL - g));
    }
}

/// Argmax of `M^k C(n, k)` over `1..=n-1` by log comparison, ties to the
/// smaller index.
pub fn max_coeff_index_brute(n: usize, m: f64) -> usize {
    let log_term = |k: usize| k as f64 * m.ln() + ln_binomial(n, k);
    let mut best = 1;
    for k in 2..n {
        let (a, b) = (log_term(k), log_term(best));
        if a - b > 1e-12 * a.abs().max(1.0) {
            best = k;
        }
    }
    best
}

fn ln_binomial(n: usize, k: usize) -> f64 {
    (0..k)
        .map(|i| ((n - i) as f64).ln() - ((i + 1) as f64).ln())
        .sum()
}

fn max_coeff_index(s: &mut SuiteSummary) {
    for n in 3..=200 {
        for m in [0.1, 0.5, 1.0, 27.0 / 4.0, 100.0] {
            let ok = metrics::max_coeff_index(n, m).map(|k| k == max_coeff_index_brute(n, m));
            s.record_result(ok.map(|ok| if ok { 0.0 } else { -1.0 }));
        }
    }
}
