//! Hankel operators `H_s f = (I − P_+)(s f)` on `Z`, Nehari distances, and
//! the invertibility test for unimodular symbols.
//!
//! Oracle assumptions: Nehari's theorem `‖H_s‖ = dist_{L^∞}(s, H^∞)`, and
//! Kronecker's theorem that `H_s` has finite rank for rational `s`.

use serde::{Deserialize, Serialize};

use crate::error::{Result, WhError};
use crate::linalg::{CMatrix, MAX_DIM};
use crate::scalar::{Real, C};

use super::laurent::LaurentPolynomial;
use super::rational::RationalSymbol;

/// Target for the neglected part of a truncated Hankel block.
pub const HANKEL_TAIL_TOL: f64 = 1e-10;
/// Distances below `1 − STRICT_GAP` count as `< 1`.
pub const STRICT_GAP: f64 = 1e-9;
/// Distances in `[1 − AMBIGUITY_BAND, 1 − STRICT_GAP)` are indeterminate.
pub const AMBIGUITY_BAND: f64 = 1e-6;

/// A symbol on the circle with computable Fourier coefficients.
pub trait FourierSymbol<T: Real> {
    fn fourier_coeff(&self, n: i64) -> C<T>;
    /// Upper bound of `Σ_{n ≥ k} |ĉ(−n)|`.
    fn negative_tail(&self, k: i64) -> T;
    fn is_analytic(&self) -> bool;

    /// Block size `m` whose neglected antidiagonals sum below `tol`.
    fn hankel_size(&self, tol: T) -> Result<usize> {
        if self.is_analytic() {
            return Ok(1);
        }
        let mut m = 1usize;
        while self.negative_tail(m as i64 + 1) >= tol {
            m += 1;
            if m > MAX_DIM {
                return Err(WhError::Conditioning("Hankel tail decays too slowly".into()));
            }
        }
        Ok(m)
    }
}

impl<T: Real> FourierSymbol<T> for LaurentPolynomial<T> {
    fn fourier_coeff(&self, n: i64) -> C<T> {
        self.coeff(n)
    }

    fn negative_tail(&self, k: i64) -> T {
        if self.is_zero() {
            return T::zero();
        }
        (k.max(1)..=(-self.n_min()).max(0)).map(|n| self.coeff(-n).norm()).sum()
    }

    fn is_analytic(&self) -> bool {
        LaurentPolynomial::is_analytic(self)
    }

    fn hankel_size(&self, _tol: T) -> Result<usize> {
        Ok((-self.n_min()).max(1) as usize)
    }
}

impl<T: Real> FourierSymbol<T> for RationalSymbol<T> {
    fn fourier_coeff(&self, n: i64) -> C<T> {
        RationalSymbol::fourier_coeff(self, n)
    }

    fn negative_tail(&self, k: i64) -> T {
        RationalSymbol::negative_tail(self, k)
    }

    fn is_analytic(&self) -> bool {
        RationalSymbol::is_analytic(self)
    }
}

/// `H[i][j] = ĉ(−(i+1) − j)`, `0 ≤ i, j < m`.
pub fn hankel_block<T: Real, S: FourierSymbol<T> + ?Sized>(s: &S, m: usize) -> CMatrix<T> {
    CMatrix::from_fn(m, m, |i, j| s.fourier_coeff(-(i as i64 + 1) - j as i64))
}

/// Singular values of the Hankel block chosen by [`FourierSymbol::hankel_size`]
/// and the bound on what was neglected.
#[derive(Clone, Debug, PartialEq)]
pub struct HankelSpectrum<T> {
    pub size: usize,
    pub singular_values: Vec<T>,
    pub tail_bound: T,
}

pub fn hankel_spectrum<T: Real, S: FourierSymbol<T> + ?Sized>(s: &S) -> Result<HankelSpectrum<T>> {
    let size = s.hankel_size(T::lit(HANKEL_TAIL_TOL))?;
    let tail_bound = s.negative_tail(size as i64 + 1);
    let singular_values = if s.is_analytic() { vec![T::zero(); size] } else { hankel_block(s, size).singular_values() };
    Ok(HankelSpectrum { size, singular_values, tail_bound })
}

/// `dist_{L^∞}(s, H^∞) = ‖H_s‖`, within the reported tail bound.
pub fn nehari_distance<T: Real, S: FourierSymbol<T> + ?Sized>(s: &S) -> Result<T> {
    if s.is_analytic() {
        return Ok(T::zero());
    }
    Ok(hankel_spectrum(s)?.singular_values[0])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Invertibility {
    Invertible,
    LeftOnly,
    RightOnly,
    Neither,
}

#[derive(Clone, Debug, PartialEq)]
pub struct UnimodularReport<T> {
    pub verdict: Invertibility,
    /// `dist(s, H^∞)`.
    pub distance: T,
    /// `dist(conj s, H^∞)`.
    pub conj_distance: T,
    pub winding: i64,
}

fn below_one<T: Real>(d: T, which: &str, other: T) -> Result<bool> {
    let one = T::one();
    if d >= one - T::lit(STRICT_GAP) {
        return Ok(false);
    }
    if d >= one - T::lit(AMBIGUITY_BAND) {
        return Err(WhError::Indeterminate(format!(
            "{which} = {}, other distance = {}",
            d.to_f64_lossy(),
            other.to_f64_lossy()
        )));
    }
    Ok(true)
}

/// Left/right invertibility of `W_s` for `|s| ≡ 1` from the two Nehari
/// distances, cross-checked against the winding of `s`.
pub fn unimodular_invertibility<T: Real>(s: &RationalSymbol<T>) -> Result<UnimodularReport<T>> {
    let defect = s.unimodularity_defect(256);
    if defect > T::lit(1e-8) {
        return Err(WhError::Precondition(format!("symbol is not unimodular (defect {:e})", defect.to_f64_lossy())));
    }
    let distance = nehari_distance(s)?;
    let conj_distance = nehari_distance(&s.conjugate()?)?;
    let left = below_one(distance, "dist(s, H^inf)", conj_distance)?;
    let right = below_one(conj_distance, "dist(conj s, H^inf)", distance)?;
    let verdict = match (left, right) {
        (true, true) => Invertibility::Invertible,
        (true, false) => Invertibility::LeftOnly,
        (false, true) => Invertibility::RightOnly,
        (false, false) => Invertibility::Neither,
    };
    let winding = s.winding()?;
    if left != (winding >= 0) || right != (winding <= 0) {
        return Err(WhError::NumericalInconsistency(format!(
            "Hankel verdict {verdict:?} disagrees with winding {winding}"
        )));
    }
    Ok(UnimodularReport { verdict, distance, conj_distance, winding })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::rational::blaschke;

    fn c(re: f64) -> C<f64> {
        C::new(re, 0.0)
    }

    #[test]
    fn hankel_block_examples() {
        let zinv = LaurentPolynomial::<f64>::monomial(-1, c(1.0));
        assert_eq!(hankel_block(&zinv, 1), CMatrix::from_rows(vec![vec![c(1.0)]]));
        let z = LaurentPolynomial::<f64>::monomial(1, c(1.0));
        assert_eq!(hankel_block(&z, 2), CMatrix::zeros(2, 2));
        let s = LaurentPolynomial::<f64>::from_real(-2, &[1.0, 1.0]);
        assert_eq!(hankel_block(&s, 2), CMatrix::from_rows(vec![vec![c(1.0), c(1.0)], vec![c(1.0), c(0.0)]]));
        assert_eq!(FourierSymbol::hankel_size(&s, 1e-10).unwrap(), 2);
    }

    #[test]
    fn nehari_examples() {
        assert_eq!(nehari_distance(&LaurentPolynomial::<f64>::from_real(0, &[1.0, 2.0])).unwrap(), 0.0);
        let zinv = LaurentPolynomial::<f64>::monomial(-1, c(1.0));
        assert!((nehari_distance(&zinv).unwrap() - 1.0).abs() < 1e-15);
        let b = blaschke(&[c(0.5)]).unwrap();
        assert_eq!(nehari_distance(&b).unwrap(), 0.0);
        let d = nehari_distance(&b.conjugate().unwrap()).unwrap();
        assert!((d - 1.0).abs() < 1e-8, "{d}");
    }

    #[test]
    fn unimodular_examples() {
        let z = blaschke(&[c(0.0)]).unwrap();
        assert_eq!(unimodular_invertibility(&z).unwrap().verdict, Invertibility::LeftOnly);
        let i = RationalSymbol::from_laurent(LaurentPolynomial::<f64>::constant(C::new(0.0, 1.0)));
        assert_eq!(unimodular_invertibility(&i).unwrap().verdict, Invertibility::Invertible);
        let bbar = blaschke(&[c(0.5)]).unwrap().conjugate().unwrap();
        let rep = unimodular_invertibility(&bbar).unwrap();
        assert_eq!((rep.verdict, rep.winding), (Invertibility::RightOnly, -1));
        let not_unimodular = RationalSymbol::from_laurent(LaurentPolynomial::<f64>::from_real(0, &[2.0]));
        assert!(matches!(unimodular_invertibility(&not_unimodular), Err(WhError::Precondition(_))));
    }
}
