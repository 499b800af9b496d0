//! Aberth–Ehrlich simultaneous root finder for complex polynomials.

use std::cmp::Ordering;

use crate::error::{Result, WhError};
use crate::scalar::{czero, Real, C};

pub const MAX_ITERATIONS: usize = 500;

/// `Σ c_j z^j` and its derivative, Horner style.
fn eval_with_derivative<T: Real>(coeffs: &[C<T>], z: C<T>) -> (C<T>, C<T>) {
    let mut p = czero();
    let mut dp = czero();
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

pub(crate) fn horner<T: Real>(coeffs: &[C<T>], z: C<T>) -> C<T> {
    coeffs.iter().rev().fold(czero(), |acc, &c| acc * z + c)
}

/// `Σ |c_j| |z|^j`, the scale against which residuals are measured.
fn magnitude<T: Real>(coeffs: &[C<T>], z: C<T>) -> T {
    let r = z.norm();
    coeffs.iter().rev().fold(T::zero(), |acc, c| acc * r + c.norm())
}

/// Roots of `Σ coeffs[j] z^j` (ascending coefficients, nonzero leading
/// coefficient). Initial guesses sit on a fixed-offset circle, so the result
/// is deterministic.
pub fn polynomial_roots<T: Real>(coeffs: &[C<T>]) -> Result<Vec<C<T>>> {
    let degree = coeffs.len().saturating_sub(1);
    if degree == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[degree];
    if lead == czero() {
        return Err(WhError::Precondition("leading coefficient is zero".into()));
    }
    if degree == 1 {
        return Ok(vec![-coeffs[0] / lead]);
    }
    let monic: Vec<C<T>> = coeffs.iter().map(|&c| c / lead).collect();

    // radius from the geometric mean of root moduli, bounded by Cauchy's bound
    let cauchy = T::one() + monic[..degree].iter().map(|c| c.norm()).fold(T::zero(), T::max);
    let mean = monic[0].norm().powf(T::one() / T::from_usize_lossy(degree));
    let radius = if mean > T::zero() { mean.min(cauchy) } else { T::one() };
    let offset = T::lit(0.4);
    let mut z: Vec<C<T>> = (0..degree)
        .map(|k| {
            let angle = T::TAU() * T::from_usize_lossy(k) / T::from_usize_lossy(degree) + offset;
            C::from_polar(radius, angle)
        })
        .collect();

    let eps = T::epsilon();
    let mut converged = vec![false; degree];
    for _ in 0..MAX_ITERATIONS {
        let mut all_done = true;
        for k in 0..degree {
            if converged[k] {
                continue;
            }
            let (p, dp) = eval_with_derivative(&monic, z[k]);
            if p.norm() <= eps * magnitude(&monic, z[k]) {
                converged[k] = true;
                continue;
            }
            let ratio = p / dp;
            let repulsion = (0..degree).filter(|&j| j != k).fold(czero(), |acc, j| acc + (z[k] - z[j]).inv());
            let denom = C::new(T::one(), T::zero()) - ratio * repulsion;
            let step = if denom.norm() == T::zero() || !(denom.re.is_finite() && denom.im.is_finite()) {
                ratio
            } else {
                ratio / denom
            };
            if !(step.re.is_finite() && step.im.is_finite()) {
                return Err(WhError::RootFinding { iterations: MAX_ITERATIONS });
            }
            z[k] -= step;
            if step.norm() <= T::lit(4.0) * eps * z[k].norm().max(eps) {
                converged[k] = true;
            } else {
                all_done = false;
            }
        }
        if all_done {
            break;
        }
    }
    // a couple of Newton polishing steps on the undeflated polynomial
    for zk in z.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = eval_with_derivative(&monic, *zk);
            if dp.norm() == T::zero() || p.norm() <= eps * magnitude(&monic, *zk) {
                break;
            }
            let next = *zk - p / dp;
            if horner(&monic, next).norm() < p.norm() {
                *zk = next;
            } else {
                break;
            }
        }
    }
    let tol = T::lit(1e-12).max(T::lit(64.0) * eps);
    for zk in &z {
        let res = horner(&monic, *zk).norm() / magnitude(&monic, *zk);
        // a NaN residual must fail too
        let small = matches!(res.partial_cmp(&tol), Some(Ordering::Less | Ordering::Equal));
        if !small && !multiple_root_ok(&monic, *zk, &z) {
            return Err(WhError::RootFinding { iterations: MAX_ITERATIONS });
        }
    }
    Ok(z)
}

/// Clustered (multiple) roots only converge to `eps^{1/m}`; accept them when
/// the residual is at the level that cluster size allows.
fn multiple_root_ok<T: Real>(monic: &[C<T>], zk: C<T>, all: &[C<T>]) -> bool {
    let cluster = all.iter().filter(|z| (**z - zk).norm() <= T::lit(1e-3) * zk.norm().max(T::one())).count();
    if cluster < 2 {
        return false;
    }
    let res = horner(monic, zk).norm() / magnitude(monic, zk);
    res <= T::lit(1e-9)
}
