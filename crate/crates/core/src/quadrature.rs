//! Periodic trapezoid rule with point doubling.
//!
//! For smooth `2 pi`-periodic integrands the uniform rule converges
//! geometrically, so successive doublings double the number of correct digits
//! and the difference between levels is a reliable error estimate.

use std::f64::consts::TAU;

use crate::error::{Error, Result};

/// Point cap for every adaptive integral in the crate.
pub const MAX_POINTS: usize = 1 << 20;

#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub relative: f64,
    /// Differences below this are treated as converged (rounding floor).
    pub absolute: f64,
}

impl Tolerance {
    pub fn relative(relative: f64) -> Self {
        Self {
            relative,
            absolute: 0.0,
        }
    }
}

/// Integrates a vector of periodic functions over `[0, 2 pi)` at once.
///
/// `f(t, out)` writes one value per component into `out`; its first error
/// aborts the integration. Doubling continues
/// until every component satisfies the tolerance. Returns the integrals and
/// the final point count.
pub fn integrate_many<F>(
    components: usize,
    initial_points: usize,
    tol: Tolerance,
    mut f: F,
) -> Result<(Vec<f64>, usize)>
where
    F: FnMut(f64, &mut [f64]) -> Result<()>,
{
    let mut points = initial_points.max(4).next_power_of_two();
    let mut buf = vec![0.0; components];
    let mut sums = vec![0.0; components];
    for j in 0..points {
        f(TAU * j as f64 / points as f64, &mut buf)?;
        for (s, v) in sums.iter_mut().zip(&buf) {
            *s += v;
        }
    }
    let mut current: Vec<f64> = sums.iter().map(|s| s * TAU / points as f64).collect();
    loop {
        if points >= MAX_POINTS {
            return Err(Error::QuadratureNonConvergence { points });
        }
        // New level only needs the odd nodes.
        let next = points * 2;
        for j in (1..next).step_by(2) {
            f(TAU * j as f64 / next as f64, &mut buf)?;
            for (s, v) in sums.iter_mut().zip(&buf) {
                *s += v;
            }
        }
        let refined: Vec<f64> = sums.iter().map(|s| s * TAU / next as f64).collect();
        let converged = refined
            .iter()
            .zip(&current)
            .all(|(a, b)| (a - b).abs() <= tol.relative * a.abs() + tol.absolute);
        points = next;
        current = refined;
        if converged {
            return Ok((current, points));
        }
    }
}

pub fn integrate<F>(initial_points: usize, tol: Tolerance, mut f: F) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    integrate_many(1, initial_points, tol, |t, out| {
        out[0] = f(t);
        Ok(())
    })
    .map(|(v, _)| v[0])
}
