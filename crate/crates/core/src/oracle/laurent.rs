use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Result, WhError};
use crate::group::{GroupElement, OrderedGroup};
use crate::scalar::{czero, Real, C};
use crate::symbol::TrigPolynomial;

use super::roots::{horner, polynomial_roots};

/// `||root| − 1|` at or below this counts as on the unit circle.
pub const ON_CIRCLE_TOL: f64 = 1e-6;
/// Largest supported `n_max − n_min`.
pub const MAX_SPAN: usize = 64;

/// `Σ_{n=n_min}^{n_max} c_n z^n` with nonzero end coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentPolynomial<T> {
    n_min: i64,
    coeffs: Vec<C<T>>,
}

impl<T: Real> LaurentPolynomial<T> {
    /// Strips exactly-zero end coefficients; all zeros give the zero polynomial.
    pub fn new(n_min: i64, coeffs: Vec<C<T>>) -> Self {
        let first = coeffs.iter().position(|c| *c != czero());
        match first {
            None => LaurentPolynomial { n_min: 0, coeffs: Vec::new() },
            Some(f) => {
                let last = coeffs.iter().rposition(|c| *c != czero()).expect("nonzero exists");
                LaurentPolynomial { n_min: n_min + f as i64, coeffs: coeffs[f..=last].to_vec() }
            }
        }
    }

    pub fn from_real(n_min: i64, coeffs: &[f64]) -> Self {
        Self::new(n_min, coeffs.iter().map(|&x| C::new(T::lit(x), T::zero())).collect())
    }

    pub fn monomial(n: i64, c: C<T>) -> Self {
        Self::new(n, vec![c])
    }

    pub fn constant(c: C<T>) -> Self {
        Self::new(0, vec![c])
    }

    /// `Π (z − r)` times `lead`.
    pub fn from_roots(lead: C<T>, roots: &[C<T>]) -> Self {
        let mut coeffs = vec![lead];
        for &r in roots {
            let mut next = vec![czero(); coeffs.len() + 1];
            for (i, &a) in coeffs.iter().enumerate() {
                next[i + 1] += a;
                next[i] -= a * r;
            }
            coeffs = next;
        }
        Self::new(0, coeffs)
    }

    pub fn n_min(&self) -> i64 {
        self.n_min
    }

    pub fn n_max(&self) -> i64 {
        self.n_min + self.coeffs.len() as i64 - 1
    }

    pub fn coeffs(&self) -> &[C<T>] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn span(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, n: i64) -> C<T> {
        let i = n - self.n_min;
        if i < 0 || i as usize >= self.coeffs.len() {
            czero()
        } else {
            self.coeffs[i as usize]
        }
    }

    pub fn is_analytic(&self) -> bool {
        self.is_zero() || self.n_min >= 0
    }

    pub fn eval(&self, z: C<T>) -> C<T> {
        if self.is_zero() {
            return czero();
        }
        horner(&self.coeffs, z) * z.powi(self.n_min as i32)
    }

    /// Value on the circle, `z = e^{iθ}`.
    pub fn eval_angle(&self, theta: T) -> C<T> {
        self.eval(C::from_polar(T::one(), theta))
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::new(0, Vec::new());
        }
        let mut out = vec![czero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += *a * *b;
            }
        }
        Self::new(self.n_min + other.n_min, out)
    }

    pub fn sub_scalar(&self, lambda: C<T>) -> Self {
        let lo = self.n_min.min(0);
        let hi = if self.is_zero() { 0 } else { self.n_max().max(0) };
        let coeffs = (lo..=hi).map(|n| if n == 0 { self.coeff(n) - lambda } else { self.coeff(n) }).collect();
        Self::new(lo, coeffs)
    }

    /// Pointwise conjugate on the circle: `Σ conj(c_n) z^{−n}`.
    pub fn conjugate(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Self::new(-self.n_max(), self.coeffs.iter().rev().map(|c| c.conj()).collect())
    }

    pub fn l1_norm(&self) -> T {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    pub fn from_trig(p: &TrigPolynomial<T>) -> Result<Self> {
        if p.rank() != 1 {
            return Err(WhError::Dimension { expected: 1, got: p.rank() });
        }
        if p.is_zero() {
            return Ok(Self::new(0, Vec::new()));
        }
        let lo = p.coeffs().keys().map(|e| e.0[0]).min().expect("nonempty");
        let hi = p.coeffs().keys().map(|e| e.0[0]).max().expect("nonempty");
        let coeffs = (lo..=hi).map(|n| p.coeff(&GroupElement(vec![n]))).collect();
        Ok(Self::new(lo, coeffs))
    }

    pub fn to_trig(&self, group: Arc<OrderedGroup>) -> Result<TrigPolynomial<T>> {
        TrigPolynomial::from_terms(
            group,
            self.coeffs.iter().enumerate().map(|(i, &c)| (GroupElement(vec![self.n_min + i as i64]), c)),
        )
    }

    /// Roots of `z^{−n_min} p(z)` classified against the unit circle.
    pub fn roots(&self) -> Result<RootSet<T>> {
        if self.is_zero() {
            return Err(WhError::Precondition("zero polynomial has no root set".into()));
        }
        if self.span() > MAX_SPAN {
            return Err(WhError::Precondition(format!("degree span {} exceeds {MAX_SPAN}", self.span())));
        }
        let tol = T::lit(ON_CIRCLE_TOL);
        let roots = polynomial_roots(&self.coeffs)?
            .into_iter()
            .map(|value| {
                let gap = value.norm() - T::one();
                let location = if gap.abs() <= tol {
                    RootLocation::On
                } else if gap < T::zero() {
                    RootLocation::Inside
                } else {
                    RootLocation::Outside
                };
                Root { value, location }
            })
            .collect();
        Ok(RootSet { roots, n_min: self.n_min, lead: *self.coeffs.last().expect("nonzero") })
    }

    /// `ind` of the symbol on `Z`: `n_min + #(roots inside)`, or `OnCircle`.
    pub fn exact_winding(&self) -> Result<ZWinding> {
        self.roots()?.winding()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RootLocation {
    Inside,
    On,
    Outside,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Root<T> {
    pub value: C<T>,
    pub location: RootLocation,
}

/// Roots of the polynomial part plus the power of `z` factored out.
#[derive(Clone, Debug, PartialEq)]
pub struct RootSet<T> {
    pub roots: Vec<Root<T>>,
    /// `p(z) = lead · z^{n_min} · Π (z − root)`.
    pub n_min: i64,
    pub lead: C<T>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ZWinding {
    Winding(i64),
    OnCircle,
}

impl<T: Real> RootSet<T> {
    pub fn count(&self, location: RootLocation) -> usize {
        self.roots.iter().filter(|r| r.location == location).count()
    }

    pub fn winding(&self) -> Result<ZWinding> {
        if self.count(RootLocation::On) > 0 {
            return Ok(ZWinding::OnCircle);
        }
        Ok(ZWinding::Winding(self.n_min + self.count(RootLocation::Inside) as i64))
    }

    /// Pole order at 0 of `p` viewed as a rational function.
    pub fn pole_order(&self) -> i64 {
        (-self.n_min).max(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C<f64> {
        C::new(re, 0.0)
    }

    #[test]
    fn normalization() {
        let p = LaurentPolynomial::<f64>::new(-2, vec![c(0.0), c(1.0), c(2.0), c(0.0)]);
        assert_eq!((p.n_min(), p.n_max()), (-1, 0));
        assert!(LaurentPolynomial::<f64>::new(3, vec![c(0.0)]).is_zero());
    }

    #[test]
    fn root_examples() {
        let p = LaurentPolynomial::<f64>::from_real(0, &[-0.5, 1.0]);
        let rs = p.roots().unwrap();
        assert_eq!(rs.roots.len(), 1);
        assert!((rs.roots[0].value - c(0.5)).norm() < 1e-15);
        assert_eq!(rs.roots[0].location, RootLocation::Inside);

        let p = LaurentPolynomial::<f64>::from_real(0, &[-1.0, 0.0, 1.0]);
        assert_eq!(p.roots().unwrap().count(RootLocation::On), 2);

        // z^{-1}(z − 2)(z − 1/3)
        let p = LaurentPolynomial::<f64>::from_roots(c(1.0), &[c(2.0), c(1.0 / 3.0)])
            .mul(&LaurentPolynomial::monomial(-1, c(1.0)));
        let rs = p.roots().unwrap();
        assert_eq!(rs.pole_order(), 1);
        assert_eq!(rs.count(RootLocation::Inside), 1);
        assert_eq!(rs.count(RootLocation::Outside), 1);
        assert!(rs.roots.iter().any(|r| (r.value - c(2.0)).norm() < 1e-12));
    }

    #[test]
    fn winding_examples() {
        assert_eq!(LaurentPolynomial::<f64>::monomial(1, c(1.0)).exact_winding().unwrap(), ZWinding::Winding(1));
        assert_eq!(LaurentPolynomial::<f64>::from_real(0, &[-0.5, 1.0]).exact_winding().unwrap(), ZWinding::Winding(1));
        // z^{-2}(z − 3)
        assert_eq!(
            LaurentPolynomial::<f64>::from_real(-2, &[-3.0, 1.0]).exact_winding().unwrap(),
            ZWinding::Winding(-2)
        );
        assert_eq!(LaurentPolynomial::<f64>::from_real(0, &[1.0, 1.0]).exact_winding().unwrap(), ZWinding::OnCircle);
    }

    #[test]
    fn conjugate_and_sub_scalar() {
        let p = LaurentPolynomial::<f64>::new(-1, vec![C::new(1.0, 1.0), c(0.0), c(2.0)]);
        let q = p.conjugate();
        assert_eq!((q.n_min(), q.n_max()), (-1, 1));
        assert_eq!(q.coeff(1), C::new(1.0, -1.0));
        for t in [0.1, 1.3, 4.0] {
            assert!((q.eval_angle(t) - p.eval_angle(t).conj()).norm() < 1e-14);
        }
        let s = LaurentPolynomial::<f64>::from_real(2, &[1.0]).sub_scalar(c(0.5));
        assert_eq!((s.n_min(), s.n_max()), (0, 2));
        assert_eq!(s.coeff(0), c(-0.5));
    }

    #[test]
    fn trig_round_trip() {
        let z = Arc::new(OrderedGroup::integers());
        let p = LaurentPolynomial::<f64>::from_real(-2, &[1.0, 0.0, -3.0, 0.5]);
        let t = p.to_trig(z).unwrap();
        assert_eq!(LaurentPolynomial::from_trig(&t).unwrap(), p);
        assert!((t.eval(&[0.7]) - p.eval_angle(0.7)).norm() < 1e-14);
    }
}
