//! Iterated r-Blaschke factorization: the unwinding series
//!
//! ```text
//! F(z) = F(0) + a_0 B_0 + a_1 B_0 B_1 + a_2 B_0 B_1 B_2 + ...
//! ```
//!
//! Step `i` factors `H_i = G_{i-1} - G_{i-1}(0)` (with `G_{-1} = F`) as
//! `B_i * G_i` at a radius chosen by a [`RadiusSchedule`] and records
//! `a_i = G_i(0)`. `H_i` always vanishes at the origin and that root is always
//! captured, so the degree of `G_i` drops by at least one per step and the
//! series is exact after at most `deg F` terms.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::blaschke::{self, RBlaschkeProduct, BOUNDARY_TOL};
use crate::error::{Error, Result};
use crate::poly::{Complex, Polynomial, RootForm};
use crate::roots;

/// Radius multiplier guaranteeing the one-step Dirichlet contraction.
pub const CONTRACTION_FACTOR: f64 = 6.15;
/// Roots of `H_i` below this modulus are treated as exact zeros.
pub const ZERO_SNAP: f64 = 1e-12;
const JITTER: f64 = 1e-6;
const JITTER_RETRIES: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RadiusSchedule {
    /// Same radius at every step.
    Fixed { radius: f64 },
    /// `margin * max |root|`, capturing every root of `H_i`.
    MinimalCapture { margin: f64 },
    /// `6.15 * max |root|`.
    Contraction615,
    /// `max(6.15 max |root|, 6.15 r_prev^2 / eps)` with `eps` from Ostrowski's
    /// root displacement bound; falls back to [`RadiusSchedule::Contraction615`]
    /// when the bound gives no positive `eps`.
    OstrowskiContraction,
}

impl RadiusSchedule {
    pub fn validate(&self) -> Result<()> {
        match *self {
            RadiusSchedule::Fixed { radius } if !(radius > 0.0) || !radius.is_finite() => {
                Err(Error::NonPositiveRadius(radius))
            }
            RadiusSchedule::MinimalCapture { margin } if !(margin > 1.0) || !margin.is_finite() => {
                Err(Error::InvalidArgument(format!(
                    "capture margin must exceed 1, got {margin}"
                )))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for RadiusSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RadiusSchedule::Fixed { radius } => write!(f, "fixed:{radius}"),
            RadiusSchedule::MinimalCapture { margin } => write!(f, "minimal:{margin}"),
            RadiusSchedule::Contraction615 => f.write_str("c615"),
            RadiusSchedule::OstrowskiContraction => f.write_str("ostrowski"),
        }
    }
}

impl FromStr for RadiusSchedule {
    type Err = Error;

    /// Parses `fixed:R`, `minimal:M`, `c615` or `ostrowski`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (s, None),
        };
        let number = |a: Option<&str>| -> Result<f64> {
            a.ok_or_else(|| Error::InvalidArgument(format!("schedule `{s}` needs a value")))?
                .parse::<f64>()
                .map_err(|e| Error::InvalidArgument(format!("schedule `{s}`: {e}")))
        };
        let schedule = match name {
            "fixed" => RadiusSchedule::Fixed {
                radius: number(arg)?,
            },
            "minimal" => RadiusSchedule::MinimalCapture {
                margin: number(arg)?,
            },
            "c615" if arg.is_none() => RadiusSchedule::Contraction615,
            "ostrowski" if arg.is_none() => RadiusSchedule::OstrowskiContraction,
            _ => return Err(Error::InvalidArgument(format!("unknown schedule `{s}`"))),
        };
        schedule.validate()?;
        Ok(schedule)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub a: Complex,
    pub b: RBlaschkeProduct,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnwindingSeries {
    pub f0: Complex,
    pub radii: Vec<f64>,
    pub terms: Vec<Term>,
    /// Degree of each outer factor `G_i`.
    pub degrees: Vec<usize>,
}

impl UnwindingSeries {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when the last outer factor was constant, i.e. the series is exact.
    pub fn is_complete(&self) -> bool {
        self.degrees.last() == Some(&0)
    }

    /// `f0 + sum_{i < terms} a_i prod_{j <= i} B_j(z)`.
    pub fn eval_partial(&self, terms: usize, z: Complex) -> Result<Complex> {
        if terms > self.terms.len() {
            return Err(Error::InvalidArgument(format!(
                "requested {terms} terms from a series of {}",
                self.terms.len()
            )));
        }
        let mut acc = self.f0;
        let mut product = Complex::new(1.0, 0.0);
        for term in &self.terms[..terms] {
            product *= term.b.eval(z)?;
            acc += term.a * product;
        }
        Ok(acc)
    }

    /// Writes the partial sums for `0..out.len()` terms at `z` into `out` and
    /// returns the sum of the moduli of the terms used.
    pub(crate) fn partial_sums_into(&self, z: Complex, out: &mut [Complex]) -> Result<f64> {
        let mut acc = self.f0;
        let mut magnitude = self.f0.norm();
        let mut product = Complex::new(1.0, 0.0);
        out[0] = acc;
        for (slot, term) in out[1..].iter_mut().zip(&self.terms) {
            product *= term.b.eval(z)?;
            let value = term.a * product;
            acc += value;
            magnitude += value.norm();
            *slot = acc;
        }
        Ok(magnitude)
    }
}

fn max_nonzero_modulus(roots: &[Complex]) -> Option<f64> {
    roots
        .iter()
        .map(|r| r.norm())
        .filter(|&m| m > 0.0)
        .reduce(f64::max)
}

fn lands_on_boundary(roots: &[Complex], r: f64) -> bool {
    roots
        .iter()
        .any(|a| (a.norm() - r).abs() <= BOUNDARY_TOL * r)
}

/// Lower bound on the nonzero root moduli of `G - G(0)` given the roots of
/// `G`, from `|a_i - b_i| < 2n (prod |a_i|)^(1/n)`. `None` when the bound is
/// not positive.
pub fn ostrowski_epsilon(outer_roots: &[Complex], radius: f64) -> Option<f64> {
    let nonzero: Vec<f64> = outer_roots
        .iter()
        .map(|r| r.norm())
        .filter(|&m| m > 0.0)
        .collect();
    if nonzero.is_empty() {
        return None;
    }
    let n = nonzero.len() as f64;
    let geometric_mean = (nonzero.iter().map(|m| m.ln()).sum::<f64>() / n).exp();
    let displacement = 2.0 * n * geometric_mean;
    let smallest = nonzero.iter().copied().fold(f64::INFINITY, f64::min);
    let gap = smallest - displacement;
    (gap > 0.0).then(|| gap.max(1e-6 * radius))
}

/// Chooses the factorization radius for the next step from the roots of
/// `H_i`.
///
/// For the Ostrowski rule the same root set stands in for the roots of the
/// previous outer factor. If the radius lands a root on the circle it is
/// nudged outward by a relative `1e-6`, up to three times.
pub fn next_radius(
    current_roots: &[Complex],
    schedule: &RadiusSchedule,
    prev_radius: Option<f64>,
) -> Result<f64> {
    schedule.validate()?;
    let max_root = max_nonzero_modulus(current_roots);
    let capture = |factor: f64| max_root.map_or(factor, |m| factor * m);
    let base = match *schedule {
        RadiusSchedule::Fixed { radius } => radius,
        RadiusSchedule::MinimalCapture { margin } => capture(margin),
        RadiusSchedule::Contraction615 => capture(CONTRACTION_FACTOR),
        RadiusSchedule::OstrowskiContraction => {
            let contraction = capture(CONTRACTION_FACTOR);
            match (
                prev_radius,
                ostrowski_epsilon(current_roots, prev_radius.unwrap_or(contraction)),
            ) {
                (Some(prev), Some(eps)) => contraction.max(CONTRACTION_FACTOR * prev * prev / eps),
                _ => contraction,
            }
        }
    };
    let mut r = base;
    for _ in 0..JITTER_RETRIES {
        if !lands_on_boundary(current_roots, r) {
            return Ok(r);
        }
        r *= 1.0 + JITTER;
    }
    if lands_on_boundary(current_roots, r) {
        Err(Error::RadiusSelectionFailed(format!(
            "radius {base} keeps a root on the boundary after {JITTER_RETRIES} retries"
        )))
    } else {
        Ok(r)
    }
}

fn snap_zero_roots(rf: &mut RootForm) {
    for a in rf.roots.iter_mut() {
        if a.norm() < ZERO_SNAP {
            *a = Complex::new(0.0, 0.0);
        }
    }
}

/// Builds the unwinding series of `f`, stopping once an outer factor is
/// constant or `max_terms` terms have been produced.
pub fn unwind(
    f: &Polynomial,
    schedule: &RadiusSchedule,
    max_terms: usize,
) -> Result<UnwindingSeries> {
    if f.degree() == 0 {
        return Err(Error::DegreeZero);
    }
    if max_terms == 0 {
        return Err(Error::InvalidArgument(
            "max_terms must be at least 1".into(),
        ));
    }
    schedule.validate()?;

    let mut series = UnwindingSeries {
        f0: f.coeff(0),
        radii: Vec::new(),
        terms: Vec::new(),
        degrees: Vec::new(),
    };
    let mut outer = f.clone();
    let mut prev_radius = None;
    for step in 0..max_terms {
        let h = outer.recenter();
        let mut rf = roots::roots_of(&h).map_err(|e| Error::RootFindingFailed {
            step,
            reason: e.to_string(),
        })?;
        snap_zero_roots(&mut rf);
        let r = next_radius(&rf.roots, schedule, prev_radius)?;
        let fac = blaschke::factorize(&rf, r)?;
        let g = fac.g;
        series.terms.push(Term {
            a: g.coeff(0),
            b: fac.b,
        });
        series.radii.push(r);
        series.degrees.push(g.degree());
        prev_radius = Some(r);
        if g.degree() == 0 {
            break;
        }
        outer = g;
    }
    Ok(series)
}

pub fn eval_partial(s: &UnwindingSeries, terms: usize, z: Complex) -> Result<Complex> {
    s.eval_partial(terms, z)
}

/// `F(0) + sum_{k=1}^{terms} c_k z^k`, the truncated power series.
pub fn taylor_partial(f: &Polynomial, terms: usize, z: Complex) -> Result<Complex> {
    if terms > f.degree() {
        return Err(Error::InvalidArgument(format!(
            "requested {terms} terms of a degree-{} polynomial",
            f.degree()
        )));
    }
    Ok(f.coeffs()[..=terms]
        .iter()
        .rev()
        .fold(Complex::new(0.0, 0.0), |acc, &c| acc * z + c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn example() -> Polynomial {
        RootForm::monic(vec![c(0.2, 0.6), c(-0.3, 0.4), c(0.0, -0.5), c(0.7, -0.9)])
            .unwrap()
            .to_polynomial()
    }

    #[test]
    fn monomial_unwinds_in_one_term() {
        let n = 5;
        let r = 1.7;
        let s = unwind(
            &Polynomial::monomial(n),
            &RadiusSchedule::Fixed { radius: r },
            10,
        )
        .unwrap();
        assert_eq!(s.len(), 1);
        assert!((s.terms[0].a - c(r.powi(n as i32), 0.0)).norm() < 1e-12);
        assert_eq!(s.terms[0].b.captured, vec![c(0.0, 0.0); n]);
        let z = Complex::from_polar(1.0, 0.9);
        assert!((s.eval_partial(1, z).unwrap() - z.powi(n as i32)).norm() < 1e-12);
    }

    #[test]
    fn degree_one_is_exact_in_one_term() {
        let f = Polynomial::new(vec![c(0.3, -1.0), c(2.0, 0.5)]).unwrap();
        for schedule in [
            RadiusSchedule::Fixed { radius: 1.0 },
            RadiusSchedule::Contraction615,
        ] {
            let s = unwind(&f, &schedule, 4).unwrap();
            assert_eq!(s.len(), 1);
            let z = c(0.6, 0.2);
            assert!((s.eval_partial(1, z).unwrap() - f.evaluate(z)).norm() < 1e-14);
        }
    }

    #[test]
    fn example_polynomial_is_exact_after_degree_terms() {
        let f = example();
        let s = unwind(&f, &RadiusSchedule::Fixed { radius: 1.0 }, 10).unwrap();
        assert!(s.len() <= 4);
        assert!(s.is_complete());
        for j in 0..256 {
            let z = Complex::from_polar(1.0, TAU * j as f64 / 256.0);
            assert!((s.eval_partial(s.len(), z).unwrap() - f.evaluate(z)).norm() < 1e-8);
        }
        let z = Complex::from_polar(1.0, 0.3);
        assert!((s.eval_partial(s.len(), z).unwrap() - f.evaluate(z)).norm() < 1e-8);
        assert_eq!(s.eval_partial(0, z).unwrap(), s.f0);
        assert!(s.eval_partial(s.len() + 1, z).is_err());
    }

    #[test]
    fn degrees_strictly_decrease() {
        let f = example();
        for schedule in [
            RadiusSchedule::Fixed { radius: 1.0 },
            RadiusSchedule::MinimalCapture { margin: 1.1 },
            RadiusSchedule::Contraction615,
            RadiusSchedule::OstrowskiContraction,
        ] {
            let s = unwind(&f, &schedule, 10).unwrap();
            let mut prev = f.degree();
            for &d in &s.degrees {
                assert!(d < prev);
                prev = d;
            }
            for (t, &a) in s
                .terms
                .iter()
                .zip(std::iter::once(&f.degree()).chain(&s.degrees))
            {
                assert!(t.b.order() <= a);
            }
        }
    }

    #[test]
    fn max_terms_truncates() {
        let s = unwind(&example(), &RadiusSchedule::Fixed { radius: 1.0 }, 2).unwrap();
        assert_eq!(s.len(), 2);
        assert!(!s.is_complete());
    }

    #[test]
    fn unwind_rejects_bad_input() {
        let k = Polynomial::from_real(&[2.0]).unwrap();
        assert_eq!(
            unwind(&k, &RadiusSchedule::Contraction615, 3),
            Err(Error::DegreeZero)
        );
        assert!(unwind(&example(), &RadiusSchedule::Contraction615, 0).is_err());
        assert!(unwind(&example(), &RadiusSchedule::Fixed { radius: -1.0 }, 3).is_err());
    }

    #[test]
    fn next_radius_cases() {
        let roots = [c(0.5, 0.0), c(0.25, 0.0)];
        let r = next_radius(
            &roots,
            &RadiusSchedule::MinimalCapture { margin: 1.1 },
            None,
        )
        .unwrap();
        assert!((r - 0.55).abs() < 1e-15);
        let r = next_radius(&[c(0.5, 0.0)], &RadiusSchedule::Contraction615, None).unwrap();
        assert!((r - 3.075).abs() < 1e-15);
        let zeros = [c(0.0, 0.0); 3];
        assert_eq!(
            next_radius(&zeros, &RadiusSchedule::Fixed { radius: 2.0 }, None).unwrap(),
            2.0
        );
        assert_eq!(
            next_radius(
                &zeros,
                &RadiusSchedule::MinimalCapture { margin: 1.5 },
                None
            )
            .unwrap(),
            1.5
        );
        assert_eq!(
            next_radius(&zeros, &RadiusSchedule::Contraction615, None).unwrap(),
            6.15
        );
    }

    #[test]
    fn next_radius_jitters_off_boundary() {
        let roots = [c(1.0, 0.0)];
        let r = next_radius(&roots, &RadiusSchedule::Fixed { radius: 1.0 }, None).unwrap();
        assert!((r - (1.0 + 1e-6)).abs() < 1e-15);
        assert!(!lands_on_boundary(&roots, r));
    }

    #[test]
    fn next_radius_fails_when_jitter_cannot_escape() {
        let roots: Vec<Complex> = (0..=3).map(|k| c((1.0 + JITTER).powi(k), 0.0)).collect();
        let r = next_radius(&roots, &RadiusSchedule::Fixed { radius: 1.0 }, None);
        assert!(matches!(r, Err(Error::RadiusSelectionFailed(_))));
    }

    #[test]
    fn ostrowski_bound_is_never_positive_for_root_sets() {
        // The geometric mean is at least the smallest modulus, so the
        // displacement 2n * mean always exceeds it.
        let roots = [c(3.0, 0.0), c(3.1, 0.2), c(0.0, 2.9)];
        assert_eq!(ostrowski_epsilon(&roots, 1.0), None);
        let r = next_radius(&roots, &RadiusSchedule::OstrowskiContraction, Some(10.0)).unwrap();
        let fallback = next_radius(&roots, &RadiusSchedule::Contraction615, None).unwrap();
        assert_eq!(r, fallback);
    }

    #[test]
    fn schedule_parsing() {
        assert_eq!(
            "fixed:2".parse::<RadiusSchedule>().unwrap(),
            RadiusSchedule::Fixed { radius: 2.0 }
        );
        assert_eq!(
            "minimal:1.1".parse::<RadiusSchedule>().unwrap(),
            RadiusSchedule::MinimalCapture { margin: 1.1 }
        );
        assert_eq!(
            "c615".parse::<RadiusSchedule>().unwrap(),
            RadiusSchedule::Contraction615
        );
        assert_eq!(
            "ostrowski".parse::<RadiusSchedule>().unwrap(),
            RadiusSchedule::OstrowskiContraction
        );
        assert!("minimal:0.9".parse::<RadiusSchedule>().is_err());
        assert!("fixed".parse::<RadiusSchedule>().is_err());
        assert!("spiral".parse::<RadiusSchedule>().is_err());
        for s in ["fixed:2.5", "minimal:1.25", "c615", "ostrowski"] {
            assert_eq!(s.parse::<RadiusSchedule>().unwrap().to_string(), s);
        }
    }

    #[test]
    fn taylor_partial_cases() {
        let f = Polynomial::from_real(&[0.0, 3.0, 1.0]).unwrap();
        assert_eq!(taylor_partial(&f, 1, c(2.0, 0.0)).unwrap(), c(6.0, 0.0));
        let g = example();
        let z = c(0.3, 0.8);
        assert_eq!(taylor_partial(&g, 0, z).unwrap(), g.coeff(0));
        assert!((taylor_partial(&g, 4, z).unwrap() - g.evaluate(z)).norm() < 1e-15);
        assert!(taylor_partial(&g, 5, z).is_err());
    }

    #[test]
    fn series_json_shape() {
        let s = unwind(
            &Polynomial::monomial(1),
            &RadiusSchedule::Fixed { radius: 1.0 },
            1,
        )
        .unwrap();
        let v: serde_json::Value = serde_json::to_value(&s).unwrap();
        assert_eq!(v["f0"], serde_json::json!([0.0, 0.0]));
        assert_eq!(v["radii"], serde_json::json!([1.0]));
        assert_eq!(v["degrees"], serde_json::json!([0]));
        assert_eq!(v["terms"][0]["b"]["radius"], serde_json::json!(1.0));
        assert_eq!(
            v["terms"][0]["b"]["captured"],
            serde_json::json!([[0.0, 0.0]])
        );
    }
}
