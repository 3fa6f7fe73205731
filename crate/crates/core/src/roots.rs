//! Simultaneous polynomial root finding by Aberth–Ehrlich iteration.
//!
//! Starting points are spread over circles whose radii come from the upper
//! convex hull of `(k, log |c_k|)` (the Newton polygon), so polynomials whose
//! roots span many orders of magnitude start close to their root moduli.
//! Points with `|z| > 1` are updated through the reversed polynomial to keep
//! every evaluation in range.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::poly::{Complex, Polynomial, RootForm};

pub const DEFAULT_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_ITER: usize = 200;

/// Returns `lead` and `degree(p)` roots of `p`.
///
/// Each returned root `b` satisfies `|p(b)| <= tol * sum_k |c_k| |b|^k`; the
/// right-hand side is the natural rounding scale of `p` at `b` and coincides
/// with `tol * (1 + max |c_k|)` up to a factor of the degree on the unit disk.
pub fn find_roots(p: &Polynomial, tol: f64, max_iter: usize) -> Result<RootForm> {
    if p.degree() == 0 {
        return Err(Error::DegreeZero);
    }
    let coeffs = p.coeffs();
    let zeros = coeffs.iter().take_while(|c| c.norm() == 0.0).count();
    let reduced = &coeffs[zeros..];
    let mut roots = vec![Complex::new(0.0, 0.0); zeros];
    match reduced.len() - 1 {
        0 => {}
        1 => roots.push(-reduced[0] / reduced[1]),
        _ => roots.extend(aberth(reduced, tol, max_iter)?),
    }
    RootForm::new(p.leading(), roots)
}

/// Convenience wrapper with the default tolerance and iteration cap.
pub fn roots_of(p: &Polynomial) -> Result<RootForm> {
    find_roots(p, DEFAULT_TOL, DEFAULT_MAX_ITER)
}

/// `p(z) / p'(z)` together with the residual ratio `|p(z)| / sum |c_k||z|^k`.
fn newton_ratio(coeffs: &[Complex], z: Complex) -> (Complex, f64) {
    let n = coeffs.len() - 1;
    let zero = Complex::new(0.0, 0.0);
    let x = z.norm();
    if x <= 1.0 {
        let mut p = zero;
        let mut dp = zero;
        let mut scale = 0.0;
        for &c in coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
            scale = scale * x + c.norm();
        }
        (p / dp, p.norm() / scale)
    } else {
        // p(z) = z^n q(y) with y = 1/z and q(y) = sum c_k y^(n-k)
        let y = z.inv();
        let yx = y.norm();
        let mut q = zero;
        let mut dq = zero;
        let mut scale = 0.0;
        for &c in coeffs {
            dq = dq * y + q;
            q = q * y + c;
            scale = scale * yx + c.norm();
        }
        // p/p' = z / (n - y q'(y)/q(y))
        let ratio = z / (Complex::new(n as f64, 0.0) - y * dq / q);
        (ratio, q.norm() / scale)
    }
}

fn aberth(coeffs: &[Complex], tol: f64, max_iter: usize) -> Result<Vec<Complex>> {
    let n = coeffs.len() - 1;
    let mut z = initial_guesses(coeffs);
    let mut done = vec![false; n];
    // Stop refining a root once its residual is at the rounding level.
    let floor = 4.0 * (n as f64 + 1.0) * f64::EPSILON;
    let mut iterations = 0;
    while iterations < max_iter && done.iter().any(|d| !d) {
        iterations += 1;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (ratio, residual) = newton_ratio(coeffs, z[i]);
            if residual <= floor || !ratio.re.is_finite() || !ratio.im.is_finite() {
                done[i] = true;
                continue;
            }
            let repulsion: Complex = (0..n)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).inv())
                .sum();
            let step = ratio / (Complex::new(1.0, 0.0) - ratio * repulsion);
            if !step.re.is_finite() || !step.im.is_finite() {
                done[i] = true;
                continue;
            }
            z[i] -= step;
            if step.norm() <= f64::EPSILON * z[i].norm() {
                done[i] = true;
            }
        }
    }
    let worst = z
        .iter()
        .map(|&root| newton_ratio(coeffs, root).1)
        .fold(0.0, f64::max);
    if worst.is_nan() || worst > tol {
        return Err(Error::NonConvergence {
            iterations,
            residual: worst,
        });
    }
    Ok(z)
}

/// Starting points from the Newton polygon of `(k, log |c_k|)`.
fn initial_guesses(coeffs: &[Complex]) -> Vec<Complex> {
    let n = coeffs.len() - 1;
    let logs: Vec<f64> = coeffs
        .iter()
        .map(|c| {
            if c.norm() > 0.0 {
                c.norm().ln()
            } else {
                f64::NEG_INFINITY
            }
        })
        .collect();

    // Upper convex hull, monotone chain over k = 0..n.
    let mut hull: Vec<usize> = Vec::with_capacity(n + 1);
    for k in 0..=n {
        if logs[k] == f64::NEG_INFINITY {
            continue;
        }
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            let cross = (b - a) as f64 * (logs[k] - logs[a]) - (k - a) as f64 * (logs[b] - logs[a]);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(k);
    }

    let mut guesses = Vec::with_capacity(n);
    // Fixed irrational offset keeps guesses off symmetry axes of real polynomials.
    let sigma = 0.7;
    for w in hull.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let count = hi - lo;
        let radius = ((logs[lo] - logs[hi]) / count as f64).exp();
        for j in 0..count {
            let angle = TAU * j as f64 / count as f64 + TAU * lo as f64 / n as f64 + sigma;
            guesses.push(Complex::from_polar(radius, angle));
        }
    }
    guesses
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    /// Greedy nearest-neighbour matching; returns the worst matched distance.
    fn match_distance(found: &[Complex], expected: &[Complex]) -> f64 {
        assert_eq!(found.len(), expected.len());
        let mut left: Vec<Complex> = found.to_vec();
        let mut worst: f64 = 0.0;
        for &e in expected {
            let (idx, d) = left
                .iter()
                .enumerate()
                .map(|(i, &f)| (i, (f - e).norm()))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            worst = worst.max(d);
            left.swap_remove(idx);
        }
        worst
    }

    #[test]
    fn quadratic() {
        let p = Polynomial::from_real(&[-1.0, 0.0, 1.0]).unwrap();
        let rf = roots_of(&p).unwrap();
        assert!(match_distance(&rf.roots, &[c(1.0, 0.0), c(-1.0, 0.0)]) < 1e-14);
    }

    #[test]
    fn degree_zero_is_an_error() {
        let p = Polynomial::from_real(&[3.0]).unwrap();
        assert_eq!(roots_of(&p), Err(Error::DegreeZero));
    }

    #[test]
    fn seeded_roots_in_disk_of_radius_five() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let expected: Vec<Complex> = (0..10)
            .map(|_| {
                Complex::from_polar(5.0 * rng.random::<f64>().sqrt(), TAU * rng.random::<f64>())
            })
            .collect();
        let p = RootForm::monic(expected.clone()).unwrap().to_polynomial();
        let rf = roots_of(&p).unwrap();
        assert!(match_distance(&rf.roots, &expected) < 1e-8);
    }

    #[test]
    fn triple_root_clusters() {
        let p = RootForm::monic(vec![c(0.5, 0.0); 3])
            .unwrap()
            .to_polynomial();
        let rf = roots_of(&p).unwrap();
        assert_eq!(rf.roots.len(), 3);
        for r in &rf.roots {
            assert!((r - c(0.5, 0.0)).norm() < 1e-4, "{r}");
        }
    }

    #[test]
    fn exact_zero_roots_are_deflated() {
        let p = RootForm::monic(vec![c(0.0, 0.0), c(0.0, 0.0), c(2.0, 1.0)])
            .unwrap()
            .to_polynomial();
        let rf = roots_of(&p).unwrap();
        assert_eq!(rf.roots.iter().filter(|r| r.norm() == 0.0).count(), 2);
        assert!(rf.roots.iter().any(|r| (r - c(2.0, 1.0)).norm() < 1e-14));
    }

    #[test]
    fn residual_postcondition_holds() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let roots: Vec<Complex> = (0..30)
                .map(|_| {
                    Complex::from_polar(
                        25.0 * rng.random::<f64>().sqrt(),
                        TAU * rng.random::<f64>(),
                    )
                })
                .collect();
            let p = RootForm::monic(roots).unwrap().to_polynomial();
            let rf = roots_of(&p).unwrap();
            for &b in &rf.roots {
                assert!(p.evaluate(b).norm() <= DEFAULT_TOL * p.abs_evaluate(b.norm()));
            }
        }
    }

    #[test]
    fn iteration_cap_reports_non_convergence() {
        let roots: Vec<Complex> = (0..12)
            .map(|k| Complex::from_polar(1.0 + k as f64, k as f64))
            .collect();
        let p = RootForm::monic(roots).unwrap().to_polynomial();
        assert!(matches!(
            find_roots(&p, 1e-12, 1),
            Err(Error::NonConvergence { .. })
        ));
    }
}
