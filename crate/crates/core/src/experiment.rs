//! Random-polynomial sweeps, the Taylor comparison and the `m0` scan.
//!
//! Every sample draws its polynomial from a seed that depends only on the
//! master seed and the sample index, and results are reduced in index order,
//! so the output is bit-identical however the samples are scheduled.

use std::f64::consts::TAU;
use std::fmt::Write as _;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::blaschke;
use crate::error::{Error, Result};
use crate::metrics::{self, ERROR_FLOOR};
use crate::poly::{Complex, RootForm};
use crate::unwind::{unwind, RadiusSchedule};

/// Largest tolerated fraction of failed samples per radius.
pub const MAX_FAILURE_FRACTION: f64 = 0.05;
pub const DEFAULT_QUAD_TOL: f64 = 1e-10;
pub const CSV_HEADER: &str = "radius,L,mean_log_error,std_log_error,samples_ok,samples_failed";

fn default_quad_tol() -> f64 {
    DEFAULT_QUAD_TOL
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub degree: usize,
    /// Roots are drawn uniformly by area from the disk of this radius.
    pub root_disk: f64,
    pub radii: Vec<f64>,
    pub samples: usize,
    pub master_seed: u64,
    /// Largest `L` reported; defaults to `degree - 1` (the series is exact at
    /// `L = degree`), or 1 for linear polynomials.
    #[serde(rename = "L_max", default, skip_serializing_if = "Option::is_none")]
    pub l_max: Option<usize>,
    #[serde(default = "default_quad_tol")]
    pub quad_tol: f64,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.degree < 1 {
            return Err(Error::InvalidArgument("degree must be at least 1".into()));
        }
        if !(self.root_disk > 0.0) || !self.root_disk.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "root_disk must be positive, got {}",
                self.root_disk
            )));
        }
        if self.samples < 1 {
            return Err(Error::InvalidArgument("samples must be at least 1".into()));
        }
        if let Some(&r) = self.radii.iter().find(|r| !(**r > 0.0) || !r.is_finite()) {
            return Err(Error::NonPositiveRadius(r));
        }
        if self.l_max == Some(0) {
            return Err(Error::InvalidArgument("L_max must be at least 1".into()));
        }
        if !(self.quad_tol > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "quad_tol must be positive, got {}",
                self.quad_tol
            )));
        }
        Ok(())
    }

    pub fn effective_l_max(&self) -> usize {
        self.l_max.unwrap_or(self.degree.saturating_sub(1).max(1))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub radius: f64,
    #[serde(rename = "L")]
    pub l: usize,
    pub mean_log_error: f64,
    pub std_log_error: f64,
    pub samples_ok: usize,
    pub samples_failed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub config: SweepConfig,
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub fn row(&self, radius: f64, l: usize) -> Option<&SweepRow> {
        self.rows
            .iter()
            .find(|row| row.radius == radius && row.l == l)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        append_csv_rows(&mut out, &self.rows);
        out
    }
}

pub fn append_csv_rows(out: &mut String, rows: &[SweepRow]) {
    for row in rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            row.radius,
            row.l,
            row.mean_log_error,
            row.std_log_error,
            row.samples_ok,
            row.samples_failed
        )
        .unwrap();
    }
}

/// Seed for sample `index`, the first word of ChaCha stream `index`.
pub fn sample_seed(master_seed: u64, index: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(index);
    rng.next_u64()
}

/// Monic polynomial with `n` roots uniform by area in the disk of radius `m`.
pub fn gen_random_poly(n: usize, m: f64, seed: u64) -> RootForm {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let roots = (0..n)
        .map(|_| {
            let u: f64 = rng.random();
            let theta: f64 = rng.random();
            Complex::from_polar(m * u.sqrt(), TAU * theta)
        })
        .collect();
    RootForm::monic(roots).expect("finite roots")
}

/// `count` polynomials of degree `1..=max_degree` with roots in `D_m`.
pub fn seeded_corpus(master_seed: u64, count: usize, max_degree: usize, m: f64) -> Vec<RootForm> {
    (0..count as u64)
        .map(|i| {
            let seed = sample_seed(master_seed, i);
            let degree = 1 + (seed % max_degree as u64) as usize;
            gen_random_poly(degree, m, seed)
        })
        .collect()
}

fn log_error(e: f64) -> f64 {
    e.max(ERROR_FLOOR).ln()
}

/// Logs of the squared errors for `L = 1..=l_max`, repeating the final value
/// once the series has terminated.
fn padded_logs(profile: &[f64], l_max: usize) -> Vec<f64> {
    (1..=l_max)
        .map(|l| log_error(profile[l.min(profile.len() - 1)]))
        .collect()
}

/// Builds rows for one radius from per-sample outcomes in sample order.
fn aggregate(radius: f64, l_max: usize, outcomes: &[Option<Vec<f64>>]) -> Result<Vec<SweepRow>> {
    let ok: Vec<&Vec<f64>> = outcomes.iter().flatten().collect();
    let failed = outcomes.len() - ok.len();
    if failed as f64 > MAX_FAILURE_FRACTION * outcomes.len() as f64 || ok.is_empty() {
        return Err(Error::TooManyFailures {
            failed,
            total: outcomes.len(),
        });
    }
    let count = ok.len() as f64;
    Ok((0..l_max)
        .map(|i| {
            let mean = ok.iter().map(|logs| logs[i]).sum::<f64>() / count;
            let std = if ok.len() > 1 {
                (ok.iter().map(|logs| (logs[i] - mean).powi(2)).sum::<f64>() / (count - 1.0)).sqrt()
            } else {
                0.0
            };
            SweepRow {
                radius,
                l: i + 1,
                mean_log_error: mean,
                std_log_error: std,
                samples_ok: ok.len(),
                samples_failed: failed,
            }
        })
        .collect())
}

fn sample_polys(config: &SweepConfig) -> Vec<RootForm> {
    (0..config.samples as u64)
        .map(|i| {
            gen_random_poly(
                config.degree,
                config.root_disk,
                sample_seed(config.master_seed, i),
            )
        })
        .collect()
}

/// Mean and sample standard deviation of `log(Error)` per `(radius, L)`.
pub fn error_sweep(config: &SweepConfig) -> Result<SweepResult> {
    config.validate()?;
    let l_max = config.effective_l_max();
    let polys = sample_polys(config);
    // outcomes[sample][radius]
    let outcomes: Vec<Vec<Option<Vec<f64>>>> = polys
        .par_iter()
        .map(|rf| {
            let f = rf.to_polynomial();
            config
                .radii
                .iter()
                .map(|&r| {
                    let series =
                        unwind(&f, &RadiusSchedule::Fixed { radius: r }, config.degree).ok()?;
                    let profile =
                        metrics::l2_error_profile(&f, &series, l_max, config.quad_tol).ok()?;
                    Some(padded_logs(&profile, l_max))
                })
                .collect()
        })
        .collect();
    let mut rows = Vec::with_capacity(config.radii.len() * l_max);
    for (j, &r) in config.radii.iter().enumerate() {
        let column: Vec<Option<Vec<f64>>> = outcomes.iter().map(|o| o[j].clone()).collect();
        rows.extend(aggregate(r, l_max, &column)?);
    }
    Ok(SweepResult {
        config: config.clone(),
        rows,
    })
}

/// The same sweep with truncated Taylor sums. Rows carry `radius = 0`, as no
/// factorization radius is involved; `config.radii` is ignored.
pub fn compare_taylor(config: &SweepConfig) -> Result<SweepResult> {
    config.validate()?;
    let l_max = config.effective_l_max();
    let polys = sample_polys(config);
    let outcomes: Vec<Option<Vec<f64>>> = polys
        .par_iter()
        .map(|rf| {
            let f = rf.to_polynomial();
            let profile = metrics::taylor_error_profile(&f, l_max, config.quad_tol).ok()?;
            Some(padded_logs(&profile, l_max))
        })
        .collect();
    Ok(SweepResult {
        config: config.clone(),
        rows: aggregate(0.0, l_max, &outcomes)?,
    })
}

/// `(||F||_D^2 / 2 - ||G||_D^2) / s^2` for `F = (z - m)^n` factored at
/// `r = 1`; `s` is the largest coefficient of `F`. Positive while the
/// contraction holds.
pub fn m0_margin(n: usize, m: f64) -> Result<f64> {
    let mut m = m;
    loop {
        let rf = RootForm::monic(vec![Complex::new(m, 0.0); n])?;
        match blaschke::factorize(&rf, 1.0) {
            Ok(fac) => {
                let f = rf.to_polynomial();
                let s = f.max_abs_coeff().max(fac.g.max_abs_coeff());
                return Ok(0.5 * metrics::dirichlet_norm_sq_scaled(&f, s)
                    - metrics::dirichlet_norm_sq_scaled(&fac.g, s));
            }
            // Both sides are continuous in m, so step off the circle.
            Err(Error::RootOnBoundary { .. }) => m *= 1.0 + 1e-8,
            Err(e) => return Err(e),
        }
    }
}

/// For each `n`, the `m` in `(0, 2]` where `||G||_D^2 = ||F||_D^2 / 2` for
/// `F = (z - m)^n`, by bisection to absolute tolerance `tol`.
pub fn m0_scan(n_list: &[usize], tol: f64) -> Result<Vec<(usize, f64)>> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    n_list
        .iter()
        .map(|&n| {
            if n < 2 {
                return Err(Error::DomainError(format!("need n >= 2, got {n}")));
            }
            let (mut lo, mut hi) = (f64::EPSILON.sqrt().min(tol), 2.0);
            if !(m0_margin(n, lo)? > 0.0 && m0_margin(n, hi)? < 0.0) {
                return Err(Error::BracketInvalid(n));
            }
            while hi - lo > tol {
                let mid = 0.5 * (lo + hi);
                if m0_margin(n, mid)? > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            Ok((n, 0.5 * (lo + hi)))
        })
        .collect()
}
