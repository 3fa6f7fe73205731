//! Dirichlet norms, boundary errors and the contraction predicates.
//!
//! All Dirichlet norms come from exact expanded coefficients,
//! `||f||_D^2 = sum_{k >= 1} k |c_k|^2`, which ignores the constant term.
//! Boundary integrals use the adaptive periodic trapezoid rule.
//!
//! The contraction checks return a [`ContractionReport`] instead of asserting,
//! so inputs outside a theorem's hypotheses can still be examined.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::blaschke::{self, Factorization};
use crate::error::{Error, Result};
use crate::poly::{Complex, Polynomial, RootForm};
use crate::quadrature::{self, Tolerance};
use crate::unwind::{UnwindingSeries, CONTRACTION_FACTOR};

/// Radius multiplier for the power-mean form of the contraction.
pub const POWER_MEAN_FACTOR: f64 = 6.75;
/// Normalization of the boundary energy identity, fixed by `F = z`.
pub const ENERGY_KAPPA: f64 = 1.0 / TAU;
/// Relative slack allowed by [`ContractionReport::holds`].
pub const CONTRACTION_TOL: f64 = 1e-12;
/// Errors below this are reported at this value before taking logs.
pub const ERROR_FLOOR: f64 = 1e-14;

pub fn dirichlet_norm_sq(p: &Polynomial) -> f64 {
    p.coeffs()
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| k as f64 * c.norm_sqr())
        .sum()
}

/// `||p||_D^2 / s^2` for a positive scale `s`; avoids overflow for
/// polynomials whose coefficients square past the range of `f64`.
pub(crate) fn dirichlet_norm_sq_scaled(p: &Polynomial, s: f64) -> f64 {
    p.coeffs()
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| k as f64 * (c / s).norm_sqr())
        .sum()
}

/// `2 pi sum |c_k|^2`, the squared L2 norm on the unit circle.
fn boundary_energy(p: &Polynomial) -> f64 {
    TAU * p.coeffs().iter().map(|c| c.norm_sqr()).sum::<f64>()
}

/// Squared boundary errors `int_0^{2pi} |F(e^{it}) - S_L(e^{it})|^2 dt` for
/// `L = 0..=max_terms`, where `partials(z, out)` writes `S_0(z)..S_max(z)` and
/// returns the sum of the moduli of the terms it added up.
///
/// Once an error reaches the rounding level of its partial sum the integrand
/// is noise, so the convergence floor is set from those term moduli.
pub(crate) fn error_profile<A>(
    f: &Polynomial,
    max_terms: usize,
    quad_tol: f64,
    mut partials: A,
) -> Result<Vec<f64>>
where
    A: FnMut(Complex, &mut [Complex]) -> Result<f64>,
{
    if !(quad_tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "quadrature tolerance must be positive, got {quad_tol}"
        )));
    }
    let initial = 8 * (f.degree() + 1);
    let mut sums = vec![Complex::new(0.0, 0.0); max_terms + 1];
    let mut magnitude = f.coeffs().iter().map(|c| c.norm()).sum::<f64>();
    for j in 0..initial {
        let z = Complex::from_polar(1.0, TAU * j as f64 / initial as f64);
        magnitude = magnitude.max(partials(z, &mut sums)?);
    }
    let rounding = 32.0 * (max_terms + f.degree() + 2) as f64 * f64::EPSILON * magnitude;
    let tol = Tolerance {
        relative: quad_tol,
        absolute: TAU * rounding * rounding,
    };
    let (values, _) = quadrature::integrate_many(max_terms + 1, initial, tol, |t, out| {
        let z = Complex::from_polar(1.0, t);
        partials(z, &mut sums)?;
        let fz = f.evaluate(z);
        for (o, s) in out.iter_mut().zip(&sums) {
            *o = (fz - s).norm_sqr();
        }
        Ok(())
    })?;
    Ok(values)
}

/// Squared L2 error on the unit circle of the `terms`-term partial sum.
pub fn l2_error_sq(
    f: &Polynomial,
    s: &UnwindingSeries,
    terms: usize,
    quad_tol: f64,
) -> Result<f64> {
    if terms > s.len() {
        return Err(Error::InvalidArgument(format!(
            "requested {terms} terms from a series of {}",
            s.len()
        )));
    }
    Ok(l2_error_profile(f, s, terms, quad_tol)?[terms])
}

/// [`l2_error_sq`] for every `L = 0..=max_terms` in one quadrature pass.
pub fn l2_error_profile(
    f: &Polynomial,
    s: &UnwindingSeries,
    max_terms: usize,
    quad_tol: f64,
) -> Result<Vec<f64>> {
    let max_terms = max_terms.min(s.len());
    error_profile(f, max_terms, quad_tol, |z, out| s.partial_sums_into(z, out))
}

/// Same quantity for truncated Taylor sums, `L = 0..=max_terms`.
pub fn taylor_error_profile(f: &Polynomial, max_terms: usize, quad_tol: f64) -> Result<Vec<f64>> {
    let max_terms = max_terms.min(f.degree());
    let magnitude = f.abs_evaluate(1.0);
    error_profile(f, max_terms, quad_tol, |z, out| {
        let mut acc = f.coeff(0);
        let mut power = Complex::new(1.0, 0.0);
        out[0] = acc;
        for (k, slot) in out.iter_mut().enumerate().skip(1) {
            power *= z;
            acc += f.coeff(k) * power;
            *slot = acc;
        }
        Ok(magnitude)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContractionReport {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
    pub lambda_used: f64,
    pub slack: f64,
}

impl ContractionReport {
    pub fn new(lhs: f64, rhs: f64, lambda_used: f64) -> Self {
        Self {
            lhs,
            rhs,
            holds: lhs <= rhs + CONTRACTION_TOL * (1.0 + rhs),
            lambda_used,
            slack: rhs - lhs,
        }
    }
}

fn require_monic(rf: &RootForm) -> Result<()> {
    if (rf.lead - Complex::new(1.0, 0.0)).norm() > 1e-12 {
        return Err(Error::InvalidArgument(format!(
            "expected a monic polynomial, lead is {}",
            rf.lead
        )));
    }
    Ok(())
}

/// `((1/n) sum |a_i|^n)^(1/n)`, computed relative to the largest modulus.
pub fn power_mean(roots: &[Complex]) -> f64 {
    let n = roots.len();
    let max = roots.iter().map(|r| r.norm()).fold(0.0, f64::max);
    if n == 0 || max == 0.0 {
        return 0.0;
    }
    let mean = roots
        .iter()
        .map(|r| (r.norm() / max).powi(n as i32))
        .sum::<f64>()
        / n as f64;
    max * mean.powf(1.0 / n as f64)
}

/// Factors `F_lambda` (roots divided by `lambda`) on the unit disk and
/// compares `||G_lambda||_D^2` with `||F_lambda||_D^2 / 2`.
fn scaled_contraction(rf: &RootForm, lambda: f64) -> Result<ContractionReport> {
    let scaled = rf.scale_roots(lambda)?;
    let f = scaled.to_polynomial();
    let fac = blaschke::factorize(&scaled, 1.0)?;
    Ok(ContractionReport::new(
        dirichlet_norm_sq(&fac.g),
        0.5 * dirichlet_norm_sq(&f),
        lambda,
    ))
}

/// Contraction with `lambda = 6.15 max |a_i|` by default (1 if all roots vanish).
pub fn contraction_615(rf: &RootForm, lambda: Option<f64>) -> Result<ContractionReport> {
    require_monic(rf)?;
    let lambda = lambda.unwrap_or_else(|| {
        let m = rf.max_modulus();
        if m > 0.0 {
            CONTRACTION_FACTOR * m
        } else {
            1.0
        }
    });
    scaled_contraction(rf, lambda)
}

/// Contraction with `lambda = 6.75` times the n-th power mean of the root
/// moduli by default (1 if all roots vanish).
pub fn contraction_power_mean(rf: &RootForm, lambda: Option<f64>) -> Result<ContractionReport> {
    require_monic(rf)?;
    let lambda = lambda.unwrap_or_else(|| {
        let pm = power_mean(&rf.roots);
        if pm > 0.0 {
            POWER_MEAN_FACTOR * pm
        } else {
            1.0
        }
    });
    scaled_contraction(rf, lambda)
}

/// Factors the unscaled `F` at radius `lambda` and compares
/// `||lambda^{-n} G||_D^2` with `||F||_D^2 / 2`.
pub fn contraction_lambda(rf: &RootForm, lambda: f64) -> Result<ContractionReport> {
    require_monic(rf)?;
    if !(lambda > 0.0) {
        return Err(Error::NonPositiveLambda(lambda));
    }
    let max = rf.max_modulus();
    if max >= lambda {
        return Err(Error::LambdaTooSmall {
            lambda,
            modulus: max,
        });
    }
    let fac = blaschke::factorize(rf, lambda)?;
    let n = rf.degree() as i32;
    let g = fac.g.scale(Complex::new(lambda.powi(-n), 0.0));
    let f = rf.to_polynomial();
    Ok(ContractionReport::new(
        dirichlet_norm_sq(&g),
        0.5 * dirichlet_norm_sq(&f),
        lambda,
    ))
}

/// Max coefficient discrepancy relative to the larger coefficient vector.
pub(crate) fn relative_discrepancy(a: &Polynomial, b: &Polynomial) -> f64 {
    let len = a.coeffs().len().max(b.coeffs().len());
    let diff = (0..len)
        .map(|k| (a.coeff(k) - b.coeff(k)).norm())
        .fold(0.0, f64::max);
    let scale = a.max_abs_coeff().max(b.max_abs_coeff());
    if scale == 0.0 {
        diff
    } else {
        diff / scale
    }
}

fn captures_all(fac: &Factorization, degree: usize) -> bool {
    fac.b.order() == degree
}

/// Residuals of the two radius-equivalence identities.
///
/// * `res1`: `F_lambda = B_gamma G_lambda` and `F_gamma(gamma z / lambda) =
///   B_lambda G_gamma` give `G_gamma = G_lambda`. Requires
///   `max |a_i| < gamma < lambda` with every root captured in both.
/// * `res2`: `F_gamma = B_lambda G_gamma` and `F_lambda = B_gamma G_lambda`
///   give `gamma^n G_gamma(lambda z) = lambda^n G_lambda(gamma z)`, without
///   hypotheses on the roots.
pub fn scaling_equivalence(rf: &RootForm, gamma: f64, lambda: f64) -> Result<(f64, f64)> {
    if !(gamma > 0.0) || !(lambda > 0.0) {
        return Err(Error::NonPositiveLambda(gamma.min(lambda)));
    }
    let n = rf.degree();
    let max = rf.max_modulus();
    if !(max < gamma && gamma < lambda) {
        return Err(Error::HypothesisViolated(format!(
            "need max |root| < gamma < lambda, got {max} / {gamma} / {lambda}"
        )));
    }

    let g_lambda = blaschke::factorize(&rf.scale_roots(lambda)?, gamma)?;
    let ratio = gamma / lambda;
    let composed = RootForm::new(
        rf.lead * ratio.powi(n as i32),
        rf.roots
            .iter()
            .map(|&a| a * (lambda / (gamma * gamma)))
            .collect(),
    )?;
    let g_gamma = blaschke::factorize(&composed, lambda)?;
    if !captures_all(&g_lambda, n) || !captures_all(&g_gamma, n) {
        return Err(Error::HypothesisViolated(
            "not every root is captured by both factorizations".into(),
        ));
    }
    let res1 = relative_discrepancy(&g_gamma.g, &g_lambda.g);

    // Coefficients below the trim threshold are amplified by the argument
    // scaling, so this side works with the untrimmed expansions.
    let alt_gamma = outer_scaled(
        &rf.scale_roots(gamma)?,
        lambda,
        lambda,
        gamma.powi(n as i32),
    )?;
    let alt_lambda = outer_scaled(
        &rf.scale_roots(lambda)?,
        gamma,
        gamma,
        lambda.powi(n as i32),
    )?;
    Ok((res1, relative_discrepancy_raw(&alt_gamma, &alt_lambda)))
}

/// Untrimmed coefficients of `factor * G(s z)` for `F = B_r G`.
fn outer_scaled(rf: &RootForm, r: f64, s: f64, factor: f64) -> Result<Vec<Complex>> {
    blaschke::factorize(rf, r)?;
    let (_, g) = blaschke::outer_coefficients(rf, r);
    let mut power = factor;
    Ok(g.into_iter()
        .map(|c| {
            let v = c * power;
            power *= s;
            v
        })
        .collect())
}

fn relative_discrepancy_raw(a: &[Complex], b: &[Complex]) -> f64 {
    let at = |v: &[Complex], k: usize| v.get(k).copied().unwrap_or_default();
    let len = a.len().max(b.len());
    let diff = (0..len)
        .map(|k| (at(a, k) - at(b, k)).norm())
        .fold(0.0, f64::max);
    let scale = a.iter().chain(b).map(|c| c.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        diff
    } else {
        diff / scale
    }
}

/// The unit-disk special case.
///
/// * first: `F_lambda = B_1 G_lambda`, `F = B_sqrt(lambda) G` give
///   `lambda^{n/2} G_lambda = G`; needs `lambda > 1`, `max |a_i| < sqrt(lambda)`.
/// * second: `F_lambda = B_1 G_lambda`, `F = B_lambda G` give
///   `lambda^n G_lambda(z) = G(lambda z)` for any `lambda > 0`.
pub fn unit_disk_equivalence(rf: &RootForm, lambda: f64) -> Result<(f64, f64)> {
    if !(lambda > 1.0) {
        return Err(Error::HypothesisViolated(format!(
            "need lambda > 1, got {lambda}"
        )));
    }
    let root = lambda.sqrt();
    let max = rf.max_modulus();
    if !(max < root) {
        return Err(Error::HypothesisViolated(format!(
            "need max |root| < sqrt(lambda), got {max}"
        )));
    }
    let n = rf.degree() as i32;
    let scaled = rf.scale_roots(lambda)?;
    let first = relative_discrepancy_raw(
        &outer_scaled(&scaled, 1.0, 1.0, root.powi(n))?,
        &outer_scaled(rf, root, 1.0, 1.0)?,
    );
    let second = relative_discrepancy_raw(
        &outer_scaled(&scaled, 1.0, 1.0, lambda.powi(n))?,
        &outer_scaled(rf, lambda, lambda, 1.0)?,
    );
    Ok((first, second))
}

/// `|(||F||_D^2 - ||G||_D^2) - kappa * int |G|^2 sum (1 - |a|^2)/|e^{it} - a|^2 dt|`
/// relative to `||F||_D^2`, for a unit-disk factorization capturing every root.
pub fn energy_identity_residual(rf: &RootForm, kappa: f64) -> Result<f64> {
    if let Some(a) = rf.roots.iter().find(|a| !(a.norm() < 1.0)) {
        return Err(Error::RootNotCaptured(a.norm()));
    }
    let f = rf.to_polynomial();
    let fac = blaschke::factorize(rf, 1.0)?;
    let norm_f = dirichlet_norm_sq(&f);
    let difference = norm_f - dirichlet_norm_sq(&fac.g);
    let g = &fac.g;
    let integral = quadrature::integrate(8 * (rf.degree() + 1), Tolerance::relative(1e-13), |t| {
        let z = Complex::from_polar(1.0, t);
        let weight: f64 = rf
            .roots
            .iter()
            .map(|&a| (1.0 - a.norm_sqr()) / (z - a).norm_sqr())
            .sum();
        g.evaluate(z).norm_sqr() * weight
    })?;
    let gap = (difference - kappa * integral).abs();
    Ok(if norm_f == 0.0 { gap } else { gap / norm_f })
}

/// Index `m` maximizing `M^k C(n, k)` over `1 <= k <= n - 1`, in closed form
/// `min(n - 1, max(ceil((M n - 1)/(M + 1)), 1))`. Ties resolve to the smaller
/// index.
pub fn max_coeff_index(n: usize, m: f64) -> Result<usize> {
    if n <= 2 {
        return Err(Error::DomainError(format!("need n > 2, got {n}")));
    }
    if !(m > 0.0) || !m.is_finite() {
        return Err(Error::DomainError(format!("need M > 0, got {m}")));
    }
    let x = (m * n as f64 - 1.0) / (m + 1.0);
    // Snap values within rounding of an integer so exact ties stay ties.
    let nearest = x.round();
    let x = if (x - nearest).abs() <= 1e-9 * nearest.abs().max(1.0) {
        nearest
    } else {
        x
    };
    let ceil = x.ceil().max(1.0) as usize;
    Ok(ceil.min(n - 1))
}

pub fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Worst ratios `|c_k| / bound_k` of the coefficients of `F_lambda` against
/// the max-modulus bound `C(n,k) (eps/lambda)^(n-k)` and the power-mean bound
/// `C(n,k) ((1/n) sum |a_i/lambda|^n)^(1 - k/n)`.
pub fn coeff_bound_ratios(rf: &RootForm, lambda: f64) -> Result<(f64, f64)> {
    require_monic(rf)?;
    let scaled = rf.scale_roots(lambda)?;
    let f = scaled.to_polynomial();
    let n = scaled.degree();
    let eps = scaled.max_modulus();
    let pm = power_mean(&scaled.roots);
    let mut worst = (0.0_f64, 0.0_f64);
    for k in 0..=n {
        let c = f.coeff(k).norm();
        let binom = binomial(n, k);
        let by_max = binom * eps.powi((n - k) as i32);
        let by_mean = binom * pm.powi((n - k) as i32);
        let ratio = |bound: f64| {
            if bound > 0.0 {
                c / bound
            } else if c == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        };
        worst.0 = worst.0.max(ratio(by_max));
        worst.1 = worst.1.max(ratio(by_mean));
    }
    Ok(worst)
}

/// Both coefficient bounds hold for every `k` (relative slack `1e-12`).
pub fn coeff_bound_check(rf: &RootForm, lambda: f64) -> Result<bool> {
    let (a, b) = coeff_bound_ratios(rf, lambda)?;
    Ok(a <= 1.0 + 1e-12 && b <= 1.0 + 1e-12)
}

/// Squared L2 norm of `p` on the unit circle, exact from coefficients.
pub fn unit_circle_energy(p: &Polynomial) -> f64 {
    boundary_energy(p)
}
