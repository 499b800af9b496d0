//! Rational symbols on the circle: Fourier coefficients by partial
//! fractions, Blaschke products.

use crate::error::{Result, WhError};
use crate::scalar::{cone, czero, Real, C};

use super::laurent::LaurentPolynomial;
use super::roots::polynomial_roots;

/// Poles closer than this to the circle are rejected.
pub const POLE_CIRCLE_GAP: f64 = 1e-8;
/// Minimum distance of Blaschke zeros from the circle.
pub const BLASCHKE_MARGIN: f64 = 1e-6;
const POLE_CLUSTER_TOL: f64 = 1e-7;

/// A pole `r ≠ 0` of multiplicity `order` with its principal part
/// `Σ_{l=1}^{order} residues[l−1] / (z − r)^l`.
#[derive(Clone, Debug, PartialEq)]
struct Pole<T> {
    at: C<T>,
    order: usize,
    residues: Vec<C<T>>,
}

/// `s = numerator / denominator`, no poles on the unit circle.
///
/// Internally `s = z^shift · (S(z) + Σ principal parts)`, where `S` is the
/// polynomial quotient of the numerator and denominator polynomial parts.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalSymbol<T> {
    numerator: LaurentPolynomial<T>,
    denominator: LaurentPolynomial<T>,
    shift: i64,
    quotient: Vec<C<T>>,
    poles: Vec<Pole<T>>,
}

fn binomial<T: Real>(n: usize, k: usize) -> T {
    (0..k).fold(T::one(), |acc, i| acc * T::from_usize_lossy(n - i) / T::from_usize_lossy(i + 1))
}

/// Ascending-power polynomial division `num = q·den + rem`.
fn poly_divrem<T: Real>(num: &[C<T>], den: &[C<T>]) -> (Vec<C<T>>, Vec<C<T>>) {
    let dd = den.len() - 1;
    if num.len() <= dd {
        return (Vec::new(), num.to_vec());
    }
    let mut rem = num.to_vec();
    let mut q = vec![czero(); num.len() - dd];
    let lead = den[dd];
    for i in (0..q.len()).rev() {
        let f = rem[i + dd] / lead;
        q[i] = f;
        for (j, &d) in den.iter().enumerate() {
            rem[i + j] -= f * d;
        }
    }
    rem.truncate(dd);
    (q, rem)
}

/// Taylor coefficients at `t = 0` of `poly(at + t)`, up to order `m − 1`.
fn taylor_shift<T: Real>(poly: &[C<T>], at: C<T>, m: usize) -> Vec<C<T>> {
    // repeated synthetic division
    let mut coeffs = poly.to_vec();
    let mut out = Vec::with_capacity(m);
    for _ in 0..m {
        if coeffs.is_empty() {
            out.push(czero());
            continue;
        }
        let mut acc = czero();
        let mut next = vec![czero(); coeffs.len().saturating_sub(1)];
        for i in (0..coeffs.len()).rev() {
            acc = acc * at + coeffs[i];
            if i > 0 {
                next[i - 1] = acc;
            }
        }
        out.push(acc);
        coeffs = next;
    }
    out
}

fn series_mul<T: Real>(a: &[C<T>], b: &[C<T>], m: usize) -> Vec<C<T>> {
    let mut out = vec![czero(); m];
    for (i, &x) in a.iter().enumerate().take(m) {
        for (j, &y) in b.iter().enumerate().take(m - i) {
            out[i + j] += x * y;
        }
    }
    out
}

fn cluster_roots<T: Real>(roots: Vec<C<T>>) -> Vec<(C<T>, usize)> {
    let mut groups: Vec<(C<T>, usize)> = Vec::new();
    for r in roots {
        let tol = T::lit(POLE_CLUSTER_TOL) * r.norm().max(T::one());
        if let Some(g) = groups.iter_mut().find(|g| (g.0 - r).norm() <= tol) {
            // running mean of the cluster
            g.0 = (g.0 * T::from_usize_lossy(g.1) + r) / T::from_usize_lossy(g.1 + 1);
            g.1 += 1;
        } else {
            groups.push((r, 1));
        }
    }
    groups
}

impl<T: Real> RationalSymbol<T> {
    /// Poles found numerically from the denominator and clustered.
    pub fn new(numerator: LaurentPolynomial<T>, denominator: LaurentPolynomial<T>) -> Result<Self> {
        if denominator.is_zero() {
            return Err(WhError::Precondition("zero denominator".into()));
        }
        let poles = cluster_roots(polynomial_roots(denominator.coeffs())?);
        Self::with_poles(numerator, denominator, poles)
    }

    /// Poles supplied exactly as `(location, multiplicity)`; they must be
    /// the roots of the denominator's polynomial part.
    pub fn with_poles(
        numerator: LaurentPolynomial<T>,
        denominator: LaurentPolynomial<T>,
        poles: Vec<(C<T>, usize)>,
    ) -> Result<Self> {
        if denominator.is_zero() {
            return Err(WhError::Precondition("zero denominator".into()));
        }
        let dd = denominator.span();
        if poles.iter().map(|p| p.1).sum::<usize>() != dd {
            return Err(WhError::Precondition("pole multiplicities do not match the denominator degree".into()));
        }
        for &(r, _) in &poles {
            if (r.norm() - T::one()).abs() <= T::lit(POLE_CIRCLE_GAP) {
                return Err(WhError::Precondition(format!("pole {r} lies on the unit circle")));
            }
        }
        let shift = if numerator.is_zero() { 0 } else { numerator.n_min() - denominator.n_min() };
        let (quotient, rem) = if numerator.is_zero() {
            (Vec::new(), Vec::new())
        } else {
            poly_divrem(numerator.coeffs(), denominator.coeffs())
        };
        let lead = *denominator.coeffs().last().expect("nonzero");
        let pole_data: Vec<Pole<T>> = poles
            .iter()
            .enumerate()
            .map(|(idx, &(at, order))| {
                // g(z) = rem(z) / (lead · Π_{other} (z − r')^{m'}), Taylor at `at`
                let mut g = taylor_shift(&rem, at, order);
                for (jdx, &(other, mult)) in poles.iter().enumerate() {
                    if jdx == idx {
                        continue;
                    }
                    // 1/((at − other) + t) = Σ (−1)^i t^i / (at − other)^{i+1}
                    let d = at - other;
                    let inv: Vec<C<T>> = (0..order)
                        .map(|i| {
                            let sign = if i % 2 == 0 { T::one() } else { -T::one() };
                            d.powi(-(i as i32) - 1) * sign
                        })
                        .collect();
                    for _ in 0..mult {
                        g = series_mul(&g, &inv, order);
                    }
                }
                let g: Vec<C<T>> = g.into_iter().map(|x| x / lead).collect();
                // principal part coefficient of (z − at)^{−l} is g_{order − l}
                let residues = (1..=order).map(|l| g[order - l]).collect();
                Pole { at, order, residues }
            })
            .collect();
        Ok(RationalSymbol { numerator, denominator, shift, quotient, poles: pole_data })
    }

    pub fn from_laurent(p: LaurentPolynomial<T>) -> Self {
        Self::with_poles(p, LaurentPolynomial::constant(cone()), Vec::new()).expect("no poles")
    }

    pub fn numerator(&self) -> &LaurentPolynomial<T> {
        &self.numerator
    }

    pub fn denominator(&self) -> &LaurentPolynomial<T> {
        &self.denominator
    }

    pub fn poles(&self) -> impl Iterator<Item = (C<T>, usize)> + '_ {
        self.poles.iter().map(|p| (p.at, p.order))
    }

    pub fn eval(&self, z: C<T>) -> C<T> {
        self.numerator.eval(z) / self.denominator.eval(z)
    }

    pub fn eval_angle(&self, theta: T) -> C<T> {
        self.eval(C::from_polar(T::one(), theta))
    }

    /// `n`-th Fourier coefficient on the circle, in closed form.
    pub fn fourier_coeff(&self, n: i64) -> C<T> {
        let m = n - self.shift;
        let mut acc = self.quotient_part(m);
        for pole in &self.poles {
            let r = pole.at;
            let inside = r.norm() < T::one();
            for (l0, &a) in pole.residues.iter().enumerate() {
                let l = l0 + 1;
                if a == czero() {
                    continue;
                }
                if inside {
                    // (z − r)^{−l} = Σ_{k≥0} C(k+l−1, l−1) r^k z^{−k−l}
                    let k = -m - l as i64;
                    if k >= 0 {
                        acc += a * r.powi(k as i32) * binomial::<T>(k as usize + l - 1, l - 1);
                    }
                }
            }
            if !inside {
                acc += outer_term(pole, m);
            }
        }
        acc
    }

    fn quotient_part(&self, m: i64) -> C<T> {
        if m >= 0 && (m as usize) < self.quotient.len() {
            self.quotient[m as usize]
        } else {
            czero()
        }
    }

    /// Upper bound for `Σ_{n ≥ k} |ĉ(−n)|`, `k ≥ 1`.
    pub fn negative_tail(&self, k: i64) -> T {
        let k = k.max(1);
        let mut bound = T::zero();
        // quotient and outer poles only reach down to index `shift`
        for n in k..=(-self.shift) {
            let m = -n - self.shift;
            let mut part = self.quotient_part(m);
            for pole in self.poles.iter().filter(|p| p.at.norm() > T::one()) {
                part += outer_term(pole, m);
            }
            bound += part.norm();
        }
        for pole in self.poles.iter().filter(|p| p.at.norm() < T::one()) {
            let rho = pole.at.norm();
            for (l0, a) in pole.residues.iter().enumerate() {
                let l = l0 + 1;
                // index −n is the term k' = n + shift − l of the expansion
                let start = (k + self.shift - l as i64).max(0) as usize;
                bound += a.norm() * binomial_geometric_tail::<T>(l, rho, start);
            }
        }
        bound
    }

    /// True when every Fourier coefficient with negative index vanishes.
    pub fn is_analytic(&self) -> bool {
        let inner_free =
            self.poles.iter().filter(|p| p.at.norm() < T::one()).all(|p| p.residues.iter().all(|a| *a == czero()));
        inner_free && (self.shift.min(0)..0).all(|n| self.fourier_coeff(n).norm() <= T::lit(1e-14))
    }

    /// Pointwise conjugate on the circle: `z ↦ 1/z`, coefficients conjugated.
    pub fn conjugate(&self) -> Result<Self> {
        let poles = self.poles.iter().map(|p| (p.at.conj().inv(), p.order)).collect();
        Self::with_poles(self.numerator.conjugate(), self.denominator.conjugate(), poles)
    }

    /// Winding number around 0 of `s` on the circle.
    pub fn winding(&self) -> Result<i64> {
        use super::laurent::ZWinding;
        let num = match self.numerator.exact_winding()? {
            ZWinding::Winding(w) => w,
            ZWinding::OnCircle => return Err(WhError::NotFactorizable),
        };
        let den = self.denominator.n_min()
            + self.poles.iter().filter(|p| p.at.norm() < T::one()).map(|p| p.order as i64).sum::<i64>();
        Ok(num - den)
    }

    /// `max ||s(e^{iθ})| − 1|` over `samples` equispaced points.
    pub fn unimodularity_defect(&self, samples: usize) -> T {
        (0..samples)
            .map(|i| {
                let theta = T::TAU() * T::from_usize_lossy(i) / T::from_usize_lossy(samples);
                (self.eval_angle(theta).norm() - T::one()).abs()
            })
            .fold(T::zero(), T::max)
    }

    /// Upper bound of `‖s‖_∞` from coefficient sums, `Σ |ĉ(n)|` (tail bounded).
    pub fn l1_bound(&self) -> T {
        let mut total: T = self.quotient.iter().map(|c| c.norm()).sum();
        for pole in &self.poles {
            let rho = pole.at.norm();
            let rho = if rho < T::one() { rho } else { rho.recip() };
            for (l0, a) in pole.residues.iter().enumerate() {
                let l = l0 + 1;
                let scale = if pole.at.norm() < T::one() { T::one() } else { pole.at.norm().powi(-(l as i32)) };
                total += a.norm() * scale * binomial_geometric_tail::<T>(l, rho, 0);
            }
        }
        total
    }
}

/// Coefficient of `z^m` in the principal part of a pole outside the disc:
/// `(z − r)^{−l} = (−r)^{−l} Σ_{k≥0} C(k+l−1, l−1) (z/r)^k`.
fn outer_term<T: Real>(pole: &Pole<T>, m: i64) -> C<T> {
    if m < 0 {
        return czero();
    }
    let r = pole.at;
    pole.residues.iter().enumerate().fold(czero(), |acc, (l0, &a)| {
        let l = l0 + 1;
        acc + a * (-r).powi(-(l as i32)) * r.powi(-(m as i32)) * binomial::<T>(m as usize + l - 1, l - 1)
    })
}

/// `Σ_{k ≥ start} C(k+l−1, l−1) ρ^k` for `0 ≤ ρ < 1`.
fn binomial_geometric_tail<T: Real>(l: usize, rho: T, start: usize) -> T {
    if rho == T::zero() {
        return if start == 0 { T::one() } else { T::zero() };
    }
    let mut k = start;
    let mut term = binomial::<T>(k + l - 1, l - 1) * rho.powi(k as i32);
    let mut sum = T::zero();
    loop {
        let ratio = T::from_usize_lossy(k + l) / T::from_usize_lossy(k + 1) * rho;
        if ratio < T::lit(0.999) {
            return sum + term / (T::one() - ratio);
        }
        sum += term;
        term *= ratio;
        k += 1;
    }
}

/// `Π (z − a)/(1 − conj(a) z)`.
pub fn blaschke<T: Real>(zeros: &[C<T>]) -> Result<RationalSymbol<T>> {
    let limit = T::one() - T::lit(BLASCHKE_MARGIN);
    if let Some(a) = zeros.iter().find(|a| a.norm() > limit) {
        return Err(WhError::Conditioning(format!("Blaschke zero {a} is within {BLASCHKE_MARGIN} of the circle")));
    }
    let numerator = LaurentPolynomial::from_roots(cone(), zeros);
    let mut denominator = LaurentPolynomial::constant(cone());
    let mut poles: Vec<(C<T>, usize)> = Vec::new();
    for &a in zeros {
        denominator = denominator.mul(&LaurentPolynomial::new(0, vec![cone(), -a.conj()]));
        if a != czero() {
            let pole = a.conj().inv();
            match poles.iter_mut().find(|p| p.0 == pole) {
                Some(p) => p.1 += 1,
                None => poles.push((pole, 1)),
            }
        }
    }
    let s = RationalSymbol::with_poles(numerator, denominator, poles)?;
    let defect = s.unimodularity_defect(256);
    if defect >= T::lit(1e-10) {
        return Err(WhError::NumericalInconsistency(format!(
            "Blaschke product deviates from unimodular by {:e}",
            defect.to_f64_lossy()
        )));
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C<f64> {
        C::new(re, im)
    }

    /// Fourier coefficients by a large FFT-free trapezoid sum.
    fn trapezoid_coeff(s: &RationalSymbol<f64>, n: i64, m: usize) -> C<f64> {
        let mut acc = c(0.0, 0.0);
        for j in 0..m {
            let t = std::f64::consts::TAU * j as f64 / m as f64;
            acc += s.eval_angle(t) * C::from_polar(1.0, -(n as f64) * t);
        }
        acc / m as f64
    }

    #[test]
    fn blaschke_examples() {
        let one = blaschke::<f64>(&[]).unwrap();
        assert!((one.eval_angle(0.3) - c(1.0, 0.0)).norm() < 1e-15);
        let z = blaschke(&[c(0.0, 0.0)]).unwrap();
        assert!((z.eval_angle(0.3) - C::from_polar(1.0, 0.3)).norm() < 1e-15);
        let b = blaschke(&[c(0.5, 0.0)]).unwrap();
        assert!(b.unimodularity_defect(256) < 1e-12);
        assert!(blaschke(&[c(0.9999999, 0.0)]).is_err());
    }

    #[test]
    fn coefficients_match_quadrature() {
        let cases = vec![
            blaschke(&[c(0.5, 0.0)]).unwrap(),
            blaschke(&[c(0.3, -0.4), c(-0.6, 0.1), c(0.0, 0.0)]).unwrap(),
            blaschke(&[c(0.5, 0.2)]).unwrap().conjugate().unwrap(),
            blaschke(&[c(0.4, 0.0), c(0.4, 0.0)]).unwrap(),
            RationalSymbol::new(
                LaurentPolynomial::from_real(-2, &[1.0, 2.0, 0.5, 3.0, 1.0]),
                LaurentPolynomial::from_roots(c(2.0, 0.0), &[c(0.5, 0.0), c(3.0, 1.0)]),
            )
            .unwrap(),
        ];
        for s in &cases {
            for n in -12..=12 {
                let exact = s.fourier_coeff(n);
                let quad = trapezoid_coeff(s, n, 4096);
                assert!((exact - quad).norm() < 1e-10, "n={n}: {exact} vs {quad}");
            }
        }
    }

    #[test]
    fn negative_tail_bounds_coefficients() {
        let s = blaschke(&[c(0.7, 0.1), c(-0.2, 0.5)]).unwrap().conjugate().unwrap();
        for k in [1, 3, 10, 40] {
            let actual: f64 = (k..k + 400).map(|n| s.fourier_coeff(-n).norm()).sum();
            assert!(actual <= s.negative_tail(k) + 1e-15, "k={k}");
        }
    }

    #[test]
    fn winding_and_analyticity() {
        let b = blaschke(&[c(0.5, 0.0), c(0.1, 0.2)]).unwrap();
        assert_eq!(b.winding().unwrap(), 2);
        assert!(b.is_analytic());
        let bc = b.conjugate().unwrap();
        assert_eq!(bc.winding().unwrap(), -2);
        assert!(!bc.is_analytic());
    }
}
