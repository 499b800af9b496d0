//! Classical scalar Wiener–Hopf factorization on the circle and the kernel
//! of `W_p` it yields.
//!
//! Oracle assumptions (classical facts, not derived here): for a nonvanishing
//! Laurent polynomial `p = c·z^w·φ₋·φ₊`, the Toeplitz operator `T_p` is
//! Fredholm with index `−w`, and by Coburn's lemma either its kernel or its
//! cokernel is trivial.

use std::sync::Arc;

use crate::error::{Result, WhError};
use crate::group::OrderedGroup;
use crate::scalar::{cone, czero, Real, C};
use crate::wiener_hopf::PositiveVector;

use super::laurent::{LaurentPolynomial, RootLocation, ZWinding};

/// Coefficients below this relative size end a kernel-vector series.
pub const KERNEL_TAIL_TOL: f64 = 1e-12;
const MAX_SERIES_LEN: usize = 1 << 20;
const RECONSTRUCTION_POINTS: usize = 64;

/// `p(z) = constant · z^w · minus(1/z) · plus(z)`, with
/// `plus(z) = Π (1 − z/b)` over roots `|b| > 1` (ascending powers of `z`) and
/// `minus(1/z) = Π (1 − a/z)` over roots `|a| < 1` (ascending powers of `1/z`).
#[derive(Clone, Debug, PartialEq)]
pub struct FactorizationResult<T> {
    pub w: i64,
    pub constant: C<T>,
    pub plus_factor: Vec<C<T>>,
    pub minus_factor: Vec<C<T>>,
    pub inside_roots: Vec<C<T>>,
    pub outside_roots: Vec<C<T>>,
}

impl<T: Real> FactorizationResult<T> {
    pub fn eval(&self, z: C<T>) -> C<T> {
        let plus = super::roots::horner(&self.plus_factor, z);
        let minus = super::roots::horner(&self.minus_factor, z.inv());
        self.constant * z.powi(self.w as i32) * minus * plus
    }
}

fn expand_unit_constant<T: Real>(scaled_roots: impl Iterator<Item = C<T>>) -> Vec<C<T>> {
    // Π (1 − s·x) in ascending powers of x
    let mut coeffs = vec![cone()];
    for s in scaled_roots {
        let mut next = vec![czero(); coeffs.len() + 1];
        for (i, &a) in coeffs.iter().enumerate() {
            next[i] += a;
            next[i + 1] -= a * s;
        }
        coeffs = next;
    }
    coeffs
}

pub fn factorize<T: Real>(p: &LaurentPolynomial<T>) -> Result<FactorizationResult<T>> {
    let rs = p.roots()?;
    let w = match rs.winding()? {
        ZWinding::OnCircle => return Err(WhError::NotFactorizable),
        ZWinding::Winding(w) => w,
    };
    let inside: Vec<C<T>> = rs.roots.iter().filter(|r| r.location == RootLocation::Inside).map(|r| r.value).collect();
    let outside: Vec<C<T>> = rs.roots.iter().filter(|r| r.location == RootLocation::Outside).map(|r| r.value).collect();
    let constant = outside.iter().fold(rs.lead, |acc, &b| acc * -b);
    let result = FactorizationResult {
        w,
        constant,
        plus_factor: expand_unit_constant(outside.iter().map(|b| b.inv())),
        minus_factor: expand_unit_constant(inside.iter().copied()),
        inside_roots: inside,
        outside_roots: outside,
    };
    let scale = p.l1_norm();
    for i in 0..RECONSTRUCTION_POINTS {
        let theta = T::TAU() * T::from_usize_lossy(i) / T::from_usize_lossy(RECONSTRUCTION_POINTS);
        let z = C::from_polar(T::one(), theta);
        let err = (result.eval(z) - p.eval(z)).norm();
        if err > T::lit(1e-8) * scale {
            return Err(WhError::NumericalInconsistency(format!(
                "factorization reconstruction error {:e}",
                err.to_f64_lossy()
            )));
        }
    }
    Ok(result)
}

/// Kernel and cokernel dimensions of `W_p`, plus an orthonormal kernel basis.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelCokernel<T> {
    pub w: i64,
    pub dim_ker: usize,
    pub dim_coker: usize,
    pub kernel_basis: Vec<PositiveVector<T>>,
    /// `‖W_p v‖₂ / ‖v‖₂` for each emitted vector.
    pub residuals: Vec<T>,
}

/// Number of Taylor coefficients of `Π 1/(1 − z/b)` needed before the
/// majorant `C(n+m−1, m−1) ρ^n` (with `ρ = max 1/|b|`) drops below `tol`
/// and keeps decreasing.
fn series_length<T: Real>(rho: T, m: usize, tol: T) -> Result<usize> {
    if m == 0 {
        return Ok(1);
    }
    let mut term = T::one();
    let mut n = 0usize;
    loop {
        let ratio = T::from_usize_lossy(n + m) / T::from_usize_lossy(n + 1) * rho;
        if term < tol && ratio < T::one() {
            return Ok(n + 1);
        }
        term *= ratio;
        n += 1;
        if n > MAX_SERIES_LEN {
            return Err(WhError::Conditioning("kernel series decays too slowly".into()));
        }
    }
}

/// `v_j = z^j / plus(z)`, `j = 0..−w`, truncated, then orthonormalized by
/// modified Gram–Schmidt. For these `p·v_j = c·z^{w+j}·minus(1/z)` has no
/// nonnegative Fourier modes.
pub fn kernel_cokernel<T: Real>(p: &LaurentPolynomial<T>) -> Result<KernelCokernel<T>> {
    let f = match factorize(p) {
        Err(WhError::NotFactorizable) => return Err(WhError::NotFredholm),
        other => other?,
    };
    let w = f.w;
    let dim_ker = (-w).max(0) as usize;
    let dim_coker = w.max(0) as usize;
    if dim_ker == 0 {
        return Ok(KernelCokernel { w, dim_ker, dim_coker, kernel_basis: Vec::new(), residuals: Vec::new() });
    }
    let rho = f.outside_roots.iter().map(|b| b.norm().recip()).fold(T::zero(), T::max);
    let m = f.outside_roots.len();
    let len = series_length(rho, m, T::lit(KERNEL_TAIL_TOL) * T::lit(1e-3))? + dim_ker;

    // 1/plus(z) by the recurrence u_n = −Σ_{i≥1} plus_i u_{n−i}
    let plus = &f.plus_factor;
    let mut inv = vec![czero::<T>(); len];
    inv[0] = cone();
    for n in 1..len {
        let mut acc = czero();
        for i in 1..plus.len().min(n + 1) {
            acc += plus[i] * inv[n - i];
        }
        inv[n] = -acc;
    }
    let mut basis: Vec<Vec<C<T>>> = (0..dim_ker)
        .map(|j| {
            let mut v = vec![czero(); len];
            v[j..].copy_from_slice(&inv[..len - j]);
            v
        })
        .collect();
    modified_gram_schmidt(&mut basis)?;

    let z = Arc::new(OrderedGroup::integers());
    let mut kernel_basis = Vec::with_capacity(dim_ker);
    let mut residuals = Vec::with_capacity(dim_ker);
    for v in basis {
        let res = dense_residual(p, &v);
        if res > T::lit(1e-8) {
            return Err(WhError::NumericalInconsistency(format!("kernel vector residual {:e}", res.to_f64_lossy())));
        }
        residuals.push(res);
        kernel_basis.push(PositiveVector::from_dense(z.clone(), &v)?);
    }
    Ok(KernelCokernel { w, dim_ker, dim_coker, kernel_basis, residuals })
}

/// `‖P_+(p ∗ v)‖₂ / ‖v‖₂` for a dense vector on `0..v.len()`.
pub fn dense_residual<T: Real>(p: &LaurentPolynomial<T>, v: &[C<T>]) -> T {
    let n_min = p.n_min();
    let out_len = (v.len() as i64 + p.n_max()).max(0) as usize;
    let mut out = vec![czero::<T>(); out_len];
    for (i, &vi) in v.iter().enumerate() {
        for (k, &pk) in p.coeffs().iter().enumerate() {
            let idx = i as i64 + n_min + k as i64;
            if idx >= 0 && (idx as usize) < out_len {
                out[idx as usize] += pk * vi;
            }
        }
    }
    let num = out.iter().map(|c| c.norm_sqr()).sum::<T>().sqrt();
    let den = v.iter().map(|c| c.norm_sqr()).sum::<T>().sqrt();
    num / den
}

pub(crate) fn modified_gram_schmidt<T: Real>(vs: &mut [Vec<C<T>>]) -> Result<()> {
    for i in 0..vs.len() {
        let (done, rest) = vs.split_at_mut(i);
        let v = &mut rest[0];
        for q in done.iter() {
            let proj = q.iter().zip(v.iter()).fold(czero::<T>(), |acc, (a, b)| acc + a.conj() * *b);
            for (x, a) in v.iter_mut().zip(q) {
                *x -= proj * *a;
            }
        }
        let norm = v.iter().map(|c| c.norm_sqr()).sum::<T>().sqrt();
        if norm <= T::lit(1e-13) {
            return Err(WhError::NumericalInconsistency("kernel basis is linearly dependent".into()));
        }
        for x in v.iter_mut() {
            *x /= norm;
        }
    }
    Ok(())
}

/// Membership of `λ` in the spectrum of an analytic symbol `p` in `H^∞`:
/// `p − λ` vanishes somewhere in the closed unit disc.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Membership {
    pub member: bool,
    /// Some root lies within the tolerance shell around the circle.
    pub indeterminate: bool,
}

pub const DISC_SHELL: f64 = 1e-9;

pub fn analytic_spectrum_membership<T: Real>(p: &LaurentPolynomial<T>, lambda: C<T>) -> Result<Membership> {
    if !p.is_analytic() {
        return Err(WhError::Precondition("symbol is not analytic (n_min < 0)".into()));
    }
    let q = p.sub_scalar(lambda);
    if q.is_zero() {
        return Ok(Membership { member: true, indeterminate: false });
    }
    // a root at the origin is carried by n_min
    let mut member = q.n_min() > 0;
    let mut indeterminate = false;
    let shell = T::lit(DISC_SHELL);
    for root in q.roots()?.roots {
        let m = root.value.norm();
        if m <= T::one() + shell {
            member = true;
        }
        if (m - T::one()).abs() <= shell {
            indeterminate = true;
        }
    }
    Ok(Membership { member, indeterminate })
}
