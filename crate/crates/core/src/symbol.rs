//! Finitely supported kernels `k` on `X = Z^r` and their symbols
//! `ǩ(θ) = Σ_ξ k(ξ) e^{i ξ·θ}` on the dual torus `T^r`.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Result, WhError};
use crate::group::{GroupElement, OrderedGroup};
use crate::scalar::{cis, czero, Real, C};

/// Coefficients smaller than this after arithmetic are dropped.
pub const PRUNE_THRESHOLD: f64 = 1e-14;

/// Default dual-grid step per axis, `2π/512`.
pub fn default_grid_step<T: Real>() -> T {
    T::TAU() / T::lit(512.0)
}

/// A point of `T^r`, angles in `[0, 2π)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DualPoint<T>(pub Vec<T>);

impl<T: Real> DualPoint<T> {
    pub fn new(angles: Vec<T>) -> Self {
        let tau = T::TAU();
        DualPoint(
            angles
                .into_iter()
                .map(|a| {
                    let w = a % tau;
                    if w < T::zero() {
                        w + tau
                    } else {
                        w
                    }
                })
                .collect(),
        )
    }

    pub fn zero(rank: usize) -> Self {
        DualPoint(vec![T::zero(); rank])
    }

    pub fn angles(&self) -> &[T] {
        &self.0
    }
}

/// Finitely supported coefficient map `X → ℂ`; doubles as the symbol `ǩ`.
#[derive(Clone, Debug)]
pub struct TrigPolynomial<T> {
    group: Arc<OrderedGroup>,
    coeffs: BTreeMap<GroupElement, C<T>>,
}

impl<T: Real> PartialEq for TrigPolynomial<T> {
    fn eq(&self, other: &Self) -> bool {
        self.same_group(other) && self.coeffs == other.coeffs
    }
}

impl<T: Real> TrigPolynomial<T> {
    pub fn zero(group: Arc<OrderedGroup>) -> Self {
        TrigPolynomial { group, coeffs: BTreeMap::new() }
    }

    /// Builds from `(exponent, coefficient)` pairs; duplicates are rejected.
    pub fn from_terms(group: Arc<OrderedGroup>, terms: impl IntoIterator<Item = (GroupElement, C<T>)>) -> Result<Self> {
        let mut coeffs = BTreeMap::new();
        for (exp, c) in terms {
            group.check(&exp)?;
            if coeffs.insert(exp.clone(), c).is_some() {
                return Err(WhError::Parse(format!("duplicate exponent {exp}")));
            }
        }
        coeffs.retain(|_, c| *c != czero());
        Ok(TrigPolynomial { group, coeffs })
    }

    /// `c·δ_ξ`.
    pub fn monomial(group: Arc<OrderedGroup>, exp: GroupElement, c: C<T>) -> Result<Self> {
        Self::from_terms(group, [(exp, c)])
    }

    /// The character `δ_ξ`.
    pub fn delta(group: Arc<OrderedGroup>, exp: impl Into<Vec<i64>>) -> Result<Self> {
        Self::monomial(group, GroupElement::new(exp), C::new(T::one(), T::zero()))
    }

    pub fn constant(group: Arc<OrderedGroup>, c: C<T>) -> Self {
        let zero = group.zero();
        Self::monomial(group, zero, c).expect("identity has the group's rank")
    }

    pub fn group(&self) -> &Arc<OrderedGroup> {
        &self.group
    }

    pub fn rank(&self) -> usize {
        self.group.rank()
    }

    pub fn coeffs(&self) -> &BTreeMap<GroupElement, C<T>> {
        &self.coeffs
    }

    pub fn coeff(&self, exp: &GroupElement) -> C<T> {
        self.coeffs.get(exp).copied().unwrap_or_else(czero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GroupElement, &C<T>)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest `|ξ_j|` over the support.
    pub fn max_exponent(&self) -> i64 {
        self.coeffs.keys().map(GroupElement::max_abs).max().unwrap_or(0)
    }

    /// `Σ |c_ξ|`, the `l_1` norm of the kernel.
    pub fn l1_norm(&self) -> T {
        self.coeffs.values().map(|c| c.norm()).sum()
    }

    pub fn same_group(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.group, &other.group) || *self.group == *other.group
    }

    fn check_group(&self, other: &Self) -> Result<()> {
        if self.same_group(other) {
            Ok(())
        } else {
            Err(WhError::GroupMismatch)
        }
    }

    fn pruned(group: Arc<OrderedGroup>, mut coeffs: BTreeMap<GroupElement, C<T>>) -> Self {
        let eps = T::lit(PRUNE_THRESHOLD);
        coeffs.retain(|_, c| c.norm() >= eps);
        TrigPolynomial { group, coeffs }
    }

    /// `ǩ(θ)`.
    pub fn eval(&self, theta: &[T]) -> C<T> {
        debug_assert_eq!(theta.len(), self.rank());
        self.coeffs
            .iter()
            .map(|(xi, c)| {
                let phase = xi.0.iter().zip(theta).fold(T::zero(), |acc, (&e, &t)| acc + T::from_i64_lossy(e) * t);
                *c * cis(phase)
            })
            .fold(czero(), |a, b| a + b)
    }

    pub fn eval_at(&self, point: &DualPoint<T>) -> C<T> {
        self.eval(&point.0)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_group(other)?;
        let mut coeffs = self.coeffs.clone();
        for (xi, c) in &other.coeffs {
            *coeffs.entry(xi.clone()).or_insert_with(czero) += *c;
        }
        Ok(Self::pruned(self.group.clone(), coeffs))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(C::new(-T::one(), T::zero())))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_group(other)?;
        let mut coeffs = BTreeMap::new();
        for (a, ca) in &self.coeffs {
            for (b, cb) in &other.coeffs {
                *coeffs.entry(a + b).or_insert_with(czero) += *ca * *cb;
            }
        }
        Ok(Self::pruned(self.group.clone(), coeffs))
    }

    pub fn scale(&self, lambda: C<T>) -> Self {
        let coeffs = self.coeffs.iter().map(|(xi, c)| (xi.clone(), *c * lambda)).collect();
        Self::pruned(self.group.clone(), coeffs)
    }

    /// `ǩ − λ`.
    pub fn sub_scalar(&self, lambda: C<T>) -> Self {
        let mut coeffs = self.coeffs.clone();
        *coeffs.entry(self.group.zero()).or_insert_with(czero) -= lambda;
        Self::pruned(self.group.clone(), coeffs)
    }

    /// Pointwise complex conjugate of `ǩ`: `c_ξ ↦ conj(c_{−ξ})`.
    pub fn conjugate(&self) -> Self {
        TrigPolynomial {
            group: self.group.clone(),
            coeffs: self.coeffs.iter().map(|(xi, c)| (-xi, c.conj())).collect(),
        }
    }

    /// `Σ |c_ξ|·‖ξ‖₂`, a Lipschitz constant of `θ ↦ ǩ(θ)` (Euclidean metric).
    pub fn lipschitz_bound(&self) -> T {
        self.coeffs.iter().map(|(xi, c)| c.norm() * T::lit(xi.norm2())).sum()
    }

    /// Values of `ǩ` on the uniform grid of step at most `h` per axis.
    ///
    /// Returns the actual step `2π/n` and the values, row-major with the
    /// last axis fastest.
    pub fn grid_values(&self, h: T) -> (T, usize, Vec<C<T>>) {
        let n = grid_points_per_axis(h);
        let step = T::TAU() / T::from_usize_lossy(n);
        let r = self.rank();
        let total = n.pow(r as u32);
        let values = (0..total)
            .into_par_iter()
            .map(|mut idx| {
                let mut theta = vec![T::zero(); r];
                for j in (0..r).rev() {
                    theta[j] = T::from_usize_lossy(idx % n) * step;
                    idx /= n;
                }
                self.eval(&theta)
            })
            .collect();
        (step, n, values)
    }

    fn grid_point(&self, n: usize, step: T, mut idx: usize) -> DualPoint<T> {
        let r = self.rank();
        let mut theta = vec![T::zero(); r];
        for j in (0..r).rev() {
            theta[j] = T::from_usize_lossy(idx % n) * step;
            idx /= n;
        }
        DualPoint(theta)
    }

    fn covering_radius(&self, step: T) -> T {
        self.lipschitz_bound() * step * T::from_usize_lossy(self.rank()).sqrt() / T::lit(2.0)
    }

    /// Guaranteed lower bound of `min |ǩ|` from a uniform grid of step `h`,
    /// together with the grid argmin.
    pub fn certified_min_modulus(&self, h: T) -> (T, DualPoint<T>) {
        let (step, n, values) = self.grid_values(h);
        let (idx, min) = values.iter().enumerate().map(|(i, v)| (i, v.norm())).fold((0, T::infinity()), |best, cur| {
            if cur.1 < best.1 {
                cur
            } else {
                best
            }
        });
        let lower = (min - self.covering_radius(step)).max(T::zero());
        (lower, self.grid_point(n, step, idx))
    }

    /// Bracket `lower ≤ ‖ǩ‖_∞ ≤ upper` from a uniform grid of step `h`.
    pub fn certified_sup_norm(&self, h: T) -> (T, T) {
        let (step, _, values) = self.grid_values(h);
        let max = values.iter().map(|v| v.norm()).fold(T::zero(), T::max);
        (max, max + self.covering_radius(step))
    }

    /// Adaptive version of [`Self::certified_min_modulus`]: cells are split
    /// only where `|ǩ(center)| − L·halfdiag` is not yet positive.
    pub fn certify_nonvanishing(&self, opts: &CertifyOptions) -> Certificate<T> {
        certify_nonvanishing(self, opts)
    }
}

pub(crate) fn grid_points_per_axis<T: Real>(h: T) -> usize {
    let n = (T::TAU() / h).ceil().to_usize().unwrap_or(1);
    n.max(1)
}

/// Limits for [`TrigPolynomial::certify_nonvanishing`].
#[derive(Clone, Debug)]
pub struct CertifyOptions {
    pub max_depth: usize,
    pub max_evals: usize,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions { max_depth: 40, max_evals: 4_000_000 }
    }
}

/// Outcome of the adaptive non-vanishing test.
#[derive(Clone, Debug, PartialEq)]
pub enum Certificate<T> {
    /// `|ǩ| ≥ lower > 0` everywhere; `argmin` is the smallest sampled point.
    NonVanishing { lower: T, argmin: DualPoint<T>, sampled_min: T },
    /// Could not certify; `argmin` witnesses the smallest sample found.
    MaybeZero { argmin: DualPoint<T>, sampled_min: T },
}

impl<T: Real> Certificate<T> {
    pub fn lower(&self) -> Option<T> {
        match self {
            Certificate::NonVanishing { lower, .. } => Some(*lower),
            Certificate::MaybeZero { .. } => None,
        }
    }
}

fn certify_nonvanishing<T: Real>(p: &TrigPolynomial<T>, opts: &CertifyOptions) -> Certificate<T> {
    let r = p.rank();
    let lip = p.lipschitz_bound();
    let sqrt_r = T::from_usize_lossy(r).sqrt();
    let zero_floor = T::lit(1e-13) * p.l1_norm().max(T::one());
    let n0: usize = match r {
        1 => 64,
        2 => 32,
        3 => 12,
        _ => 6,
    };
    let side0 = T::TAU() / T::from_usize_lossy(n0);

    // (center, side, depth)
    let mut stack: Vec<(Vec<T>, T, usize)> = Vec::new();
    let total = n0.pow(r as u32);
    for mut idx in 0..total {
        let mut c = vec![T::zero(); r];
        for j in (0..r).rev() {
            c[j] = (T::from_usize_lossy(idx % n0) + T::lit(0.5)) * side0;
            idx /= n0;
        }
        stack.push((c, side0, 0));
    }

    let mut evals = 0usize;
    let mut lower = T::infinity();
    let mut best = (T::infinity(), vec![T::zero(); r]);
    let half = T::lit(0.5);
    while let Some((c, side, depth)) = stack.pop() {
        let m = p.eval(&c).norm();
        evals += 1;
        if m < best.0 {
            best = (m, c.clone());
        }
        let bound = m - lip * side * sqrt_r * half;
        if bound > T::zero() {
            lower = lower.min(bound);
            continue;
        }
        if m <= zero_floor || depth >= opts.max_depth || evals + stack.len() >= opts.max_evals {
            return Certificate::MaybeZero { argmin: DualPoint::new(best.1), sampled_min: best.0 };
        }
        let child = side * half;
        for mask in 0..(1usize << r) {
            let cc = c
                .iter()
                .enumerate()
                .map(|(j, &x)| if mask >> j & 1 == 1 { x + child * half } else { x - child * half })
                .collect();
            stack.push((cc, child, depth + 1));
        }
    }
    Certificate::NonVanishing { lower, argmin: DualPoint::new(best.1), sampled_min: best.0 }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> Arc<OrderedGroup> {
        Arc::new(OrderedGroup::integers())
    }

    fn c(re: f64) -> C<f64> {
        C::new(re, 0.0)
    }

    fn poly(g: &Arc<OrderedGroup>, terms: &[(&[i64], f64)]) -> TrigPolynomial<f64> {
        TrigPolynomial::from_terms(g.clone(), terms.iter().map(|(e, v)| (GroupElement::new(e.to_vec()), c(*v))))
            .unwrap()
    }

    #[test]
    fn eval_examples() {
        let g = z();
        let one = TrigPolynomial::constant(g.clone(), c(1.0));
        assert_eq!(one.eval(&[1.234]), c(1.0));
        let shift = poly(&g, &[(&[1], 1.0)]);
        assert!((shift.eval(&[std::f64::consts::PI]) - c(-1.0)).norm() < 1e-15);
        let cosine = poly(&g, &[(&[1], 1.0), (&[-1], 1.0)]);
        assert!((cosine.eval(&[std::f64::consts::FRAC_PI_3]) - c(1.0)).norm() < 1e-12);
    }

    #[test]
    fn algebra_examples() {
        let g = z();
        let d1 = poly(&g, &[(&[1], 1.0)]);
        let dm1 = poly(&g, &[(&[-1], 1.0)]);
        assert_eq!(d1.conjugate(), dm1);
        assert!(TrigPolynomial::constant(g.clone(), c(1.0)).sub_scalar(c(1.0)).is_zero());
        assert_eq!(d1.mul(&dm1).unwrap(), TrigPolynomial::constant(g.clone(), c(1.0)));
        let other = TrigPolynomial::<f64>::delta(Arc::new(OrderedGroup::lex(2).unwrap()), [0, 1]).unwrap();
        assert_eq!(d1.add(&other), Err(WhError::GroupMismatch));
        assert!(TrigPolynomial::from_terms(g, [(GroupElement::new([1]), c(1.0)), (GroupElement::new([1]), c(2.0))])
            .is_err());
    }

    #[test]
    fn lipschitz_examples() {
        let g = z();
        assert_eq!(TrigPolynomial::constant(g.clone(), c(1.0)).lipschitz_bound(), 0.0);
        assert_eq!(poly(&g, &[(&[1], 1.0)]).lipschitz_bound(), 1.0);
        let g2 = Arc::new(OrderedGroup::lex(2).unwrap());
        assert_eq!(poly(&g2, &[(&[1, 0], 2.0), (&[0, 3], 1.0)]).lipschitz_bound(), 5.0);
    }

    #[test]
    fn min_modulus_examples() {
        let g = z();
        let h = default_grid_step::<f64>();
        assert_eq!(TrigPolynomial::constant(g.clone(), c(3.0)).certified_min_modulus(h).0, 3.0);
        let vanishing = poly(&g, &[(&[0], 1.0), (&[1], 1.0)]);
        assert!(vanishing.certified_min_modulus(1e-3).0 < 1e-3);
        let two_plus = poly(&g, &[(&[0], 2.0), (&[1], 1.0)]);
        let (lower, at) = two_plus.certified_min_modulus(0.01);
        assert!((0.9..=1.0).contains(&lower));
        assert!((at.0[0] - std::f64::consts::PI).abs() < 0.01);
    }

    #[test]
    fn sup_norm_examples() {
        let g = z();
        let h = default_grid_step::<f64>();
        let (lo, hi) = TrigPolynomial::constant(g.clone(), c(1.0)).certified_sup_norm(h);
        assert_eq!((lo, hi), (1.0, 1.0));
        let p = poly(&g, &[(&[0], 1.0), (&[1], 0.5)]);
        let (lo, hi) = p.certified_sup_norm(h);
        assert!(lo <= 1.5 + 1e-12 && 1.5 <= hi);
        let p = poly(&g, &[(&[1], 1.0), (&[-1], 1.0)]);
        let (lo, hi) = p.certified_sup_norm(h);
        assert!(lo <= 2.0 + 1e-12 && 2.0 <= hi);
    }

    #[test]
    fn adaptive_certificate() {
        let g = z();
        let opts = CertifyOptions::default();
        let two_plus = poly(&g, &[(&[0], 2.0), (&[1], 1.0)]);
        let lower = two_plus.certify_nonvanishing(&opts).lower().unwrap();
        assert!(lower > 0.0 && lower <= 1.0);
        let vanishing = poly(&g, &[(&[0], 1.0), (&[1], 1.0)]);
        match vanishing.certify_nonvanishing(&opts) {
            Certificate::MaybeZero { argmin, sampled_min } => {
                assert!((argmin.0[0] - std::f64::consts::PI).abs() < 1e-3);
                assert!(sampled_min < 1e-3);
            }
            other => panic!("expected MaybeZero, got {other:?}"),
        }
    }

    #[test]
    fn works_in_single_precision() {
        let g = z();
        let p = TrigPolynomial::<f32>::from_terms(
            g,
            [(GroupElement::new([0]), C::new(2.0f32, 0.0)), (GroupElement::new([1]), C::new(1.0, 0.0))],
        )
        .unwrap();
        let lower = p.certified_min_modulus(default_grid_step()).0;
        assert!(lower > 0.9 && lower <= 1.0);
    }
}
