//! Radius-`r` Blaschke products and the factorization `F = B_r * G`.
//!
//! An r-Blaschke product with captured roots `a_j` (all `|a_j| < r`) is
//!
//! ```text
//! B_r(z) = prod_j (z - a_j) r / (r^2 - conj(a_j) z)
//! ```
//!
//! It has modulus one on the circle `|z| = r`. The product is never expanded
//! into rational coefficients; it is stored as its radius and captured roots
//! and evaluated factor by factor.
//!
//! The outer factor `G` collects the uncaptured roots unchanged, one factor
//! `(r^2 - conj(a) z) / r` per captured nonzero root, and the constant `r` per
//! captured zero root, so `F = B_r * G` holds exactly for every radius.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{mul_affine, Complex, Polynomial, RootForm};
use crate::quadrature::{self, Tolerance};

/// Roots within this relative distance of the circle make factorization
/// ill-defined.
pub const BOUNDARY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RBlaschkeProduct {
    pub radius: f64,
    pub captured: Vec<Complex>,
}

impl RBlaschkeProduct {
    pub fn new(radius: f64, captured: Vec<Complex>) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::NonPositiveRadius(radius));
        }
        if let Some(a) = captured.iter().find(|a| !(a.norm() < radius)) {
            return Err(Error::RootOnOrOutsideBoundary {
                modulus: a.norm(),
                radius,
            });
        }
        Ok(Self { radius, captured })
    }

    /// The empty product, identically one.
    pub fn identity(radius: f64) -> Self {
        Self {
            radius,
            captured: Vec::new(),
        }
    }

    pub fn order(&self) -> usize {
        self.captured.len()
    }

    pub fn eval(&self, z: Complex) -> Result<Complex> {
        let r = self.radius;
        let mut acc = Complex::new(1.0, 0.0);
        for &a in &self.captured {
            let denom = r * r - a.conj() * z;
            if denom.norm() == 0.0 {
                return Err(Error::PoleEvaluation);
            }
            acc *= (z - a) * r / denom;
        }
        if acc.re.is_finite() && acc.im.is_finite() {
            Ok(acc)
        } else {
            Err(Error::PoleEvaluation)
        }
    }

    /// `|B_r'(r e^{it})| = sum_j (r^2 - |a_j|^2) / (r |r e^{it} - a_j|^2)`.
    pub fn log_derivative_modulus(&self, t: f64) -> f64 {
        let r = self.radius;
        let z = Complex::from_polar(r, t);
        self.captured
            .iter()
            .map(|&a| (r * r - a.norm_sqr()) / (r * (z - a).norm_sqr()))
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Factorization {
    pub b: RBlaschkeProduct,
    pub g: Polynomial,
    /// Max over boundary samples of `|F - B G|`, relative to `max |F|` there.
    pub residual: f64,
}

/// `r^2 / conj(a)`, the reflection of `a` across the circle of radius `r`.
pub fn invert_root(a: Complex, r: f64) -> Result<Complex> {
    if !(r > 0.0) {
        return Err(Error::NonPositiveRadius(r));
    }
    if a.norm() == 0.0 {
        return Err(Error::ZeroRoot);
    }
    if a.norm() >= r {
        return Err(Error::RootOnOrOutsideBoundary {
            modulus: a.norm(),
            radius: r,
        });
    }
    Ok(r * r / a.conj())
}

/// Factors `rf.lead * prod (z - a)` as `B_r * G`.
pub fn factorize(rf: &RootForm, r: f64) -> Result<Factorization> {
    let target = rf.to_polynomial();
    factorize_against(rf, r, &target)
}

/// Finds the roots of `p` and factors it; the residual is measured against
/// `p` itself, so it also reflects root-finding error.
pub fn factorize_polynomial(p: &Polynomial, r: f64) -> Result<Factorization> {
    let rf = crate::roots::roots_of(p)?;
    factorize_against(&rf, r, p)
}

pub(crate) fn factorize_against(
    rf: &RootForm,
    r: f64,
    target: &Polynomial,
) -> Result<Factorization> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::NonPositiveRadius(r));
    }
    if let Some(a) = rf
        .roots
        .iter()
        .find(|a| (a.norm() - r).abs() <= BOUNDARY_TOL * r)
    {
        return Err(Error::RootOnBoundary {
            modulus: a.norm(),
            radius: r,
        });
    }
    let (captured, g) = outer_coefficients(rf, r);
    let b = RBlaschkeProduct {
        radius: r,
        captured,
    };
    let g = Polynomial::from_coeffs_unchecked(g);
    let residual = reconstruction_residual(target, &b, &g, 8 * (rf.degree() + 1))?;
    Ok(Factorization { b, g, residual })
}

/// Captured roots and the untrimmed coefficients of `G`; callers check the
/// boundary condition.
pub(crate) fn outer_coefficients(rf: &RootForm, r: f64) -> (Vec<Complex>, Vec<Complex>) {
    let mut captured = Vec::new();
    let mut g = vec![rf.lead];
    for &a in &rf.roots {
        if a.norm() < r {
            captured.push(a);
            // (r^2 - conj(a) z) / r; a zero root leaves the constant r.
            mul_affine(&mut g, Complex::new(r, 0.0), -a.conj() / r);
        } else {
            mul_affine(&mut g, -a, Complex::new(1.0, 0.0));
        }
    }
    (captured, g)
}

fn reconstruction_residual(
    target: &Polynomial,
    b: &RBlaschkeProduct,
    g: &Polynomial,
    samples: usize,
) -> Result<f64> {
    let samples = samples.max(64);
    let mut worst: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for j in 0..samples {
        let z = Complex::from_polar(b.radius, TAU * j as f64 / samples as f64);
        let f = target.evaluate(z);
        worst = worst.max((f - b.eval(z)? * g.evaluate(z)).norm());
        scale = scale.max(f.norm());
    }
    Ok(if scale == 0.0 { worst } else { worst / scale })
}

pub fn eval_b(b: &RBlaschkeProduct, z: Complex) -> Result<Complex> {
    b.eval(z)
}

pub fn log_derivative_modulus(b: &RBlaschkeProduct, t: f64) -> f64 {
    b.log_derivative_modulus(t)
}

/// Boundary energies for one capture step: with `f = (z - a) F` and
/// `g = (r^2 - conj(a) z) F / r`, the integrals over `[0, 2 pi)` of
/// `|f'(r e^{it})|^2`, `|g'(r e^{it})|^2` and `|F(r e^{it})|^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OneStepEnergies {
    pub f_prime: f64,
    pub g_prime: f64,
    pub base: f64,
    pub weight: f64,
}

impl OneStepEnergies {
    /// `Ef - (1 - |a|^2/r^2) EF - Eg`; nonnegative when the one-step bound holds.
    pub fn slack(&self) -> f64 {
        self.f_prime - self.weight * self.base - self.g_prime
    }
}

pub fn one_step_energies(
    base: &Polynomial,
    a: Complex,
    r: f64,
    points: usize,
) -> Result<OneStepEnergies> {
    if !(r > 0.0) {
        return Err(Error::NonPositiveRadius(r));
    }
    if !(a.norm() < r) {
        return Err(Error::RootOutsideDisk {
            modulus: a.norm(),
            radius: r,
        });
    }
    let min_points = 8 * (base.degree() + 2);
    if points < min_points {
        return Err(Error::InvalidArgument(format!(
            "need at least {min_points} quadrature points, got {points}"
        )));
    }
    let one = Complex::new(1.0, 0.0);
    let f = base.mul(&Polynomial::from_coeffs_unchecked(vec![-a, one]));
    let g = base.mul(&Polynomial::from_coeffs_unchecked(vec![
        Complex::new(r, 0.0),
        -a.conj() / r,
    ]));
    let (df, dg) = (f.derivative(), g.derivative());

    // Parseval gives the size of the largest integral; used only as a rounding floor.
    let parseval = |p: &Polynomial| -> f64 {
        TAU * p
            .coeffs()
            .iter()
            .enumerate()
            .map(|(k, c)| c.norm_sqr() * r.powi(2 * k as i32))
            .sum::<f64>()
    };
    let scale = parseval(&df).max(parseval(base));
    let tol = Tolerance {
        relative: 1e-10,
        absolute: 1e-14 * scale,
    };
    let (v, _) = quadrature::integrate_many(3, points, tol, |t, out| {
        let z = Complex::from_polar(r, t);
        out[0] = df.evaluate(z).norm_sqr();
        out[1] = dg.evaluate(z).norm_sqr();
        out[2] = base.evaluate(z).norm_sqr();
        Ok(())
    })?;
    Ok(OneStepEnergies {
        f_prime: v[0],
        g_prime: v[1],
        base: v[2],
        weight: 1.0 - a.norm_sqr() / (r * r),
    })
}
