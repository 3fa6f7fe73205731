//! Dense complex polynomials and their factored (root) form.
//!
//! Coefficients are stored in ascending order: `coeffs[k]` multiplies `z^k`.
//! Every [`Polynomial`] is kept canonical: trailing coefficients whose modulus
//! is at most [`TRIM_RELATIVE`] times the largest coefficient modulus are
//! dropped, so round-off from expansion never inflates the degree.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Scalar type used throughout the crate.
pub type Complex = Complex64;

/// Relative threshold below which a trailing coefficient counts as zero.
pub const TRIM_RELATIVE: f64 = 1e-14;

pub(crate) fn is_finite(z: Complex) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

fn check_finite(values: &[Complex], what: &'static str) -> Result<()> {
    if values.iter().copied().all(is_finite) {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPolynomial")]
pub struct Polynomial {
    coeffs: Vec<Complex>,
}

#[derive(Deserialize)]
struct RawPolynomial {
    coeffs: Vec<Complex>,
}

impl TryFrom<RawPolynomial> for Polynomial {
    type Error = Error;

    fn try_from(raw: RawPolynomial) -> Result<Self> {
        Polynomial::new(raw.coeffs)
    }
}

impl Polynomial {
    /// Builds a canonical polynomial from ascending coefficients.
    pub fn new(coeffs: Vec<Complex>) -> Result<Self> {
        check_finite(&coeffs, "polynomial coefficients")?;
        Ok(Self::from_coeffs_unchecked(coeffs))
    }

    /// Real-coefficient convenience constructor.
    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Complex::new(c, 0.0)).collect())
    }

    pub(crate) fn from_coeffs_unchecked(mut coeffs: Vec<Complex>) -> Self {
        if coeffs.is_empty() {
            coeffs.push(Complex::new(0.0, 0.0));
        }
        let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let threshold = TRIM_RELATIVE * scale;
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.norm() <= threshold) {
            coeffs.pop();
        }
        if scale == 0.0 {
            coeffs.truncate(1);
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self {
            coeffs: vec![Complex::new(0.0, 0.0)],
        }
    }

    pub fn constant(c: Complex) -> Result<Self> {
        Self::new(vec![c])
    }

    /// The monomial `z^n`.
    pub fn monomial(n: usize) -> Self {
        let mut coeffs = vec![Complex::new(0.0, 0.0); n + 1];
        coeffs[n] = Complex::new(1.0, 0.0);
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[Complex] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex> {
        self.coeffs
    }

    /// Coefficient of `z^k`; zero past the degree.
    pub fn coeff(&self, k: usize) -> Complex {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    /// Degree of the polynomial; constants (including zero) have degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == Complex::new(0.0, 0.0)
    }

    pub fn leading(&self) -> Complex {
        self.coeffs[self.coeffs.len() - 1]
    }

    /// Largest coefficient modulus.
    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Horner evaluation.
    pub fn evaluate(&self, z: Complex) -> Complex {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Evaluates `sum |c_k| |z|^k`, the scale against which rounding in
    /// [`Polynomial::evaluate`] is measured.
    pub fn abs_evaluate(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.norm())
    }

    pub fn derivative(&self) -> Polynomial {
        if self.coeffs.len() == 1 {
            return Polynomial::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| c * k as f64)
            .collect();
        Self::from_coeffs_unchecked(coeffs)
    }

    /// `p(z) - p(0)`; the result always vanishes at the origin.
    pub fn recenter(&self) -> Polynomial {
        let mut coeffs = self.coeffs.clone();
        coeffs[0] = Complex::new(0.0, 0.0);
        Self::from_coeffs_unchecked(coeffs)
    }

    /// Coefficients of `p(s z)`.
    pub fn scale_argument(&self, s: Complex) -> Polynomial {
        let mut power = Complex::new(1.0, 0.0);
        let coeffs = self
            .coeffs
            .iter()
            .map(|&c| {
                let out = c * power;
                power *= s;
                out
            })
            .collect();
        Self::from_coeffs_unchecked(coeffs)
    }

    pub fn scale(&self, s: Complex) -> Polynomial {
        Self::from_coeffs_unchecked(self.coeffs.iter().map(|&c| c * s).collect())
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = vec![Complex::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::from_coeffs_unchecked(out)
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len).map(|k| self.coeff(k) - other.coeff(k)).collect();
        Self::from_coeffs_unchecked(coeffs)
    }

    /// Samples `(t_j, p(r e^{i t_j}))` at `t_j = 2 pi j / samples`.
    pub fn boundary_trace(&self, radius: f64, samples: usize) -> Result<Vec<(f64, Complex)>> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::NonPositiveRadius(radius));
        }
        if samples < 2 {
            return Err(Error::InvalidArgument(format!(
                "need at least 2 samples, got {samples}"
            )));
        }
        Ok((0..samples)
            .map(|j| {
                let t = TAU * j as f64 / samples as f64;
                (t, self.evaluate(Complex::from_polar(radius, t)))
            })
            .collect())
    }
}

/// Multiplies `coeffs` in place by the linear factor `(z - root)`.
pub(crate) fn mul_linear(coeffs: &mut Vec<Complex>, root: Complex) {
    coeffs.push(Complex::new(0.0, 0.0));
    for k in (1..coeffs.len()).rev() {
        coeffs[k] = coeffs[k - 1] - root * coeffs[k];
    }
    coeffs[0] = -root * coeffs[0];
}

/// Multiplies `coeffs` in place by `c0 + c1 z`, dropping a vanishing top term.
pub(crate) fn mul_affine(coeffs: &mut Vec<Complex>, c0: Complex, c1: Complex) {
    if c1 == Complex::new(0.0, 0.0) {
        coeffs.iter_mut().for_each(|c| *c *= c0);
        return;
    }
    coeffs.push(Complex::new(0.0, 0.0));
    for k in (1..coeffs.len()).rev() {
        coeffs[k] = c0 * coeffs[k] + c1 * coeffs[k - 1];
    }
    coeffs[0] *= c0;
}

/// Leading coefficient together with the multiset of roots.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawRootForm")]
pub struct RootForm {
    pub lead: Complex,
    pub roots: Vec<Complex>,
}

#[derive(Deserialize)]
struct RawRootForm {
    lead: Complex,
    roots: Vec<Complex>,
}

impl TryFrom<RawRootForm> for RootForm {
    type Error = Error;

    fn try_from(raw: RawRootForm) -> Result<Self> {
        RootForm::new(raw.lead, raw.roots)
    }
}

impl RootForm {
    pub fn new(lead: Complex, roots: Vec<Complex>) -> Result<Self> {
        check_finite(&[lead], "leading coefficient")?;
        check_finite(&roots, "roots")?;
        Ok(Self { lead, roots })
    }

    pub fn monic(roots: Vec<Complex>) -> Result<Self> {
        Self::new(Complex::new(1.0, 0.0), roots)
    }

    pub fn degree(&self) -> usize {
        self.roots.len()
    }

    /// Largest root modulus, 0 for an empty root set.
    pub fn max_modulus(&self) -> f64 {
        self.roots.iter().map(|r| r.norm()).fold(0.0, f64::max)
    }

    /// Expands `lead * prod (z - root)` by sequential linear-factor convolution.
    pub fn to_polynomial(&self) -> Polynomial {
        let mut coeffs = vec![self.lead];
        for &root in &self.roots {
            mul_linear(&mut coeffs, root);
        }
        Polynomial::from_coeffs_unchecked(coeffs)
    }

    /// Divides every root by `lambda`, leaving the leading coefficient alone.
    pub fn scale_roots(&self, lambda: f64) -> Result<RootForm> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::NonPositiveLambda(lambda));
        }
        Ok(RootForm {
            lead: self.lead,
            roots: self.roots.iter().map(|&r| r / lambda).collect(),
        })
    }
}

pub fn evaluate(p: &Polynomial, z: Complex) -> Complex {
    p.evaluate(z)
}

pub fn derivative(p: &Polynomial) -> Polynomial {
    p.derivative()
}

pub fn from_roots(rf: &RootForm) -> Polynomial {
    rf.to_polynomial()
}

pub fn scale_roots(rf: &RootForm, lambda: f64) -> Result<RootForm> {
    rf.scale_roots(lambda)
}

pub fn recenter(p: &Polynomial) -> Polynomial {
    p.recenter()
}

pub fn boundary_trace(p: &Polynomial, radius: f64, samples: usize) -> Result<Vec<(f64, Complex)>> {
    p.boundary_trace(radius, samples)
}
