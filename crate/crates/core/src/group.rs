//! Finitely generated torsion-free abelian groups `Z^r` with a linear order.
//!
//! Two order backends are supported: lexicographic comparison of exponent
//! vectors, and the order induced by an injective embedding
//! `v ↦ Σ v_i w_i ∈ ℝ` with weights in a real quadratic field `ℚ(√d)`.
//! Every order decision is exact (big rationals, no floating point).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Result, WhError};

/// Largest supported rank. Dual-torus grids scale like `n^r`.
pub const MAX_RANK: usize = 4;

/// Element of `Z^r`, written additively, coordinates w.r.t. fixed generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement(pub Vec<i64>);

impl GroupElement {
    pub fn new(exponents: impl Into<Vec<i64>>) -> Self {
        GroupElement(exponents.into())
    }

    pub fn zero(rank: usize) -> Self {
        GroupElement(vec![0; rank])
    }

    /// The `j`-th generator `e_j`.
    pub fn unit(rank: usize, j: usize) -> Self {
        let mut v = vec![0; rank];
        v[j] = 1;
        GroupElement(v)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Euclidean length of the exponent vector.
    pub fn norm2(&self) -> f64 {
        self.0.iter().map(|&c| (c as f64) * (c as f64)).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> i64 {
        self.0.iter().map(|c| c.abs()).max().unwrap_or(0)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(i64, i64) -> i64) -> Self {
        assert_eq!(self.rank(), other.rank(), "rank mismatch in group arithmetic");
        GroupElement(self.0.iter().zip(&other.0).map(|(&a, &b)| f(a, b)).collect())
    }
}

impl Add for &GroupElement {
    type Output = GroupElement;
    fn add(self, rhs: &GroupElement) -> GroupElement {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &GroupElement {
    type Output = GroupElement;
    fn sub(self, rhs: &GroupElement) -> GroupElement {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &GroupElement {
    type Output = GroupElement;
    fn neg(self) -> GroupElement {
        GroupElement(self.0.iter().map(|&a| -a).collect())
    }
}

impl Add for GroupElement {
    type Output = GroupElement;
    fn add(self, rhs: GroupElement) -> GroupElement {
        &self + &rhs
    }
}

impl Sub for GroupElement {
    type Output = GroupElement;
    fn sub(self, rhs: GroupElement) -> GroupElement {
        &self - &rhs
    }
}

impl Neg for GroupElement {
    type Output = GroupElement;
    fn neg(self) -> GroupElement {
        -&self
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl From<Vec<i64>> for GroupElement {
    fn from(v: Vec<i64>) -> Self {
        GroupElement(v)
    }
}

/// A real number `a + b·√d` with rational `a`, `b`; `d` lives on the embedding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadWeight {
    pub a: BigRational,
    pub b: BigRational,
}

impl QuadWeight {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        QuadWeight { a, b }
    }

    /// `a_num/a_den + (b_num/b_den)·√d`.
    pub fn from_ratios(a: (i64, i64), b: (i64, i64)) -> Self {
        QuadWeight { a: BigRational::new(a.0.into(), a.1.into()), b: BigRational::new(b.0.into(), b.1.into()) }
    }

    pub fn to_f64(&self, d: u64) -> f64 {
        ratio_to_f64(&self.a) + ratio_to_f64(&self.b) * (d as f64).sqrt()
    }
}

fn ratio_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// Exact sign of `p + q·√d` for rational `p`, `q` and a positive integer `d`.
///
/// Same-sign (or `q = 0`) cases are immediate; otherwise the sign of `p`
/// wins iff `p² > d·q²`.
pub fn quadratic_sign(p: &BigRational, q: &BigRational, d: u64) -> Ordering {
    let zero = BigRational::zero();
    let sp = p.cmp(&zero);
    let sq = q.cmp(&zero);
    match (sp, sq) {
        (_, Ordering::Equal) => sp,
        (Ordering::Equal, _) => sq,
        _ if sp == sq => sp,
        _ => {
            let d = BigRational::from_integer(BigInt::from(d));
            let disc = p * p - &d * q * q;
            match disc.cmp(&zero) {
                Ordering::Greater => sp,
                Ordering::Less => sq,
                Ordering::Equal => Ordering::Equal,
            }
        }
    }
}

fn is_square_free(d: u64) -> bool {
    let mut k = 2u64;
    while k * k <= d {
        if d.is_multiple_of(k * k) {
            return false;
        }
        k += 1;
    }
    true
}

/// Real embedding `v ↦ Σ v_i w_i` with weights in `ℚ(√d)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    pub d: u64,
    pub weights: Vec<QuadWeight>,
}

impl Embedding {
    /// Exact value of `Σ v_i w_i` as the pair `(p, q)` of `p + q√d`.
    fn image(&self, v: &[i64]) -> (BigRational, BigRational) {
        let mut p = BigRational::zero();
        let mut q = BigRational::zero();
        for (&c, w) in v.iter().zip(&self.weights) {
            if c == 0 {
                continue;
            }
            let c = BigRational::from_integer(BigInt::from(c));
            p += &c * &w.a;
            q += &c * &w.b;
        }
        (p, q)
    }

    fn sign(&self, v: &[i64]) -> Ordering {
        let (p, q) = self.image(v);
        quadratic_sign(&p, &q, self.d)
    }

    /// True iff `w1 / w2` is rational (both nonzero assumed).
    fn ratio_is_rational(&self, w1: &QuadWeight, w2: &QuadWeight) -> bool {
        if self.d == 1 {
            return true;
        }
        // (a1 + b1√d) = t (a2 + b2√d) with t ∈ ℚ  ⟺  a1 b2 = a2 b1
        &w1.a * &w2.b == &w2.a * &w1.b
    }

    fn weight_is_zero(&self, w: &QuadWeight) -> bool {
        if self.d == 1 {
            (&w.a + &w.b).is_zero()
        } else {
            w.a.is_zero() && w.b.is_zero()
        }
    }
}

/// Which linear order `X` carries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrderBackend {
    /// Lexicographic, most significant coordinate first.
    Lex,
    RealEmbedding(Embedding),
}

/// Cardinality of an order interval, or of a rotation index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value")]
pub enum Count {
    Finite(i64),
    Infinite,
}

impl Count {
    pub fn finite(self) -> Option<i64> {
        match self {
            Count::Finite(n) => Some(n),
            Count::Infinite => None,
        }
    }
}

/// `Z^r` with a chosen linear order compatible with addition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderedGroup {
    rank: usize,
    backend: OrderBackend,
}

impl OrderedGroup {
    /// The integers with their usual order.
    pub fn integers() -> Self {
        OrderedGroup { rank: 1, backend: OrderBackend::Lex }
    }

    pub fn lex(rank: usize) -> Result<Self> {
        Self::check_rank(rank)?;
        Ok(OrderedGroup { rank, backend: OrderBackend::Lex })
    }

    /// Order induced by a real embedding with weights in `ℚ(√d)`.
    ///
    /// Injectivity (ℚ-independence of the weights) is checked for `r ≤ 2`.
    /// For `r > 2` the caller has to assert it with `assume_independent`.
    pub fn embedding(d: u64, weights: Vec<QuadWeight>, assume_independent: bool) -> Result<Self> {
        let rank = weights.len();
        Self::check_rank(rank)?;
        if d == 0 || !is_square_free(d) {
            return Err(WhError::InvalidGroup(format!("d = {d} is not a square-free positive integer")));
        }
        let emb = Embedding { d, weights };
        if let Some(i) = emb.weights.iter().position(|w| emb.weight_is_zero(w)) {
            return Err(WhError::InvalidGroup(format!("weight {i} is zero")));
        }
        for i in 0..rank {
            for j in (i + 1)..rank {
                if emb.ratio_is_rational(&emb.weights[i], &emb.weights[j]) {
                    return Err(WhError::InvalidGroup(format!(
                        "weights {i} and {j} have a rational ratio; the embedding is not injective"
                    )));
                }
            }
        }
        if rank > 2 && !assume_independent {
            return Err(WhError::InvalidGroup("rank > 2 embeddings need an explicit independence assertion".into()));
        }
        Ok(OrderedGroup { rank, backend: OrderBackend::RealEmbedding(emb) })
    }

    /// Embedding `(1, √2)`, handy in tests and examples.
    pub fn sqrt2_plane() -> Self {
        Self::embedding(
            2,
            vec![QuadWeight::from_ratios((1, 1), (0, 1)), QuadWeight::from_ratios((0, 1), (1, 1))],
            false,
        )
        .expect("1 and √2 are independent")
    }

    fn check_rank(rank: usize) -> Result<()> {
        if rank == 0 || rank > MAX_RANK {
            return Err(WhError::InvalidGroup(format!("rank {rank} outside 1..={MAX_RANK}")));
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn backend(&self) -> &OrderBackend {
        &self.backend
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement::zero(self.rank)
    }

    pub fn check(&self, a: &GroupElement) -> Result<()> {
        if a.rank() != self.rank {
            return Err(WhError::Dimension { expected: self.rank, got: a.rank() });
        }
        Ok(())
    }

    /// Sign of `a` relative to the identity.
    fn sign(&self, a: &[i64]) -> Ordering {
        match &self.backend {
            OrderBackend::Lex => a.iter().find(|&&c| c != 0).map_or(Ordering::Equal, |c| c.cmp(&0)),
            OrderBackend::RealEmbedding(emb) => emb.sign(a),
        }
    }

    /// `a ≤ b` iff `b − a ∈ X_+`.
    pub fn compare(&self, a: &GroupElement, b: &GroupElement) -> Result<Ordering> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.sign(&(a - b).0))
    }

    /// Membership in the positive cone `X_+` (identity included).
    pub fn is_positive(&self, a: &GroupElement) -> Result<bool> {
        self.check(a)?;
        Ok(self.sign(&a.0) != Ordering::Less)
    }

    /// The positive one of `±1` when `r = 1`.
    fn rank_one_generator(&self) -> i64 {
        if self.sign(&[1]) == Ordering::Greater {
            1
        } else {
            -1
        }
    }

    /// `#(X_+ ∖ χX_+)` for `χ ∈ X_+`.
    ///
    /// `ξ ∈ X_+ ∖ (χ + X_+)` means `ξ ≥ 0` and `ξ − χ ∉ X_+`; by totality
    /// `ξ − χ ∉ X_+` is `ξ < χ`, so the set is the interval `[0, χ)`.
    /// Finiteness is read off the backend, never searched for:
    /// * `r = 1`: `[0, χ)` holds `|χ|` elements.
    /// * Lex: finite iff every coordinate but the last is 0, since otherwise
    ///   `(0,…,0,n) < χ` for all `n ≥ 0`.
    /// * Real embedding, `r ≥ 2`: the image is dense in ℝ, so `[0, χ)` is
    ///   infinite unless `χ = 0`.
    pub fn interval_count(&self, chi: &GroupElement) -> Result<Count> {
        if !self.is_positive(chi)? {
            return Err(WhError::Precondition(format!("{chi} is not in the positive cone")));
        }
        if self.rank == 1 {
            return Ok(Count::Finite(chi.0[0].abs()));
        }
        Ok(match &self.backend {
            OrderBackend::Lex => {
                let (head, last) = chi.0.split_at(self.rank - 1);
                if head.iter().all(|&c| c == 0) {
                    Count::Finite(last[0])
                } else {
                    Count::Infinite
                }
            }
            OrderBackend::RealEmbedding(_) => {
                if chi.is_zero() {
                    Count::Finite(0)
                } else {
                    Count::Infinite
                }
            }
        })
    }

    /// Signed rotation index: `#[0, χ)` for `χ ≥ 0`, `−#[0, −χ)` otherwise.
    pub fn rotation_index(&self, chi: &GroupElement) -> Result<Count> {
        if self.is_positive(chi)? {
            self.interval_count(chi)
        } else {
            Ok(match self.interval_count(&-chi)? {
                Count::Finite(n) => Count::Finite(-n),
                Count::Infinite => Count::Infinite,
            })
        }
    }

    /// The elements of `[0, χ)` in increasing order.
    pub fn enumerate_interval(&self, chi: &GroupElement, cap: usize) -> Result<Vec<GroupElement>> {
        let n = match self.interval_count(chi)? {
            Count::Finite(n) => n as usize,
            Count::Infinite => return Err(WhError::Capacity(format!("[0, {chi}) is infinite"))),
        };
        if n > cap {
            return Err(WhError::Capacity(format!("[0, {chi}) has {n} elements, cap is {cap}")));
        }
        let step = if self.rank == 1 {
            GroupElement(vec![self.rank_one_generator()])
        } else {
            // finite intervals only occur for lex, along the last axis
            GroupElement::unit(self.rank, self.rank - 1)
        };
        Ok((0..n as i64).map(|j| GroupElement(step.0.iter().map(|&s| s * j).collect())).collect())
    }

    /// The `n` smallest elements of `X_+`; only defined for `r = 1`.
    pub fn positive_prefix(&self, n: usize) -> Result<Vec<GroupElement>> {
        if self.rank != 1 {
            return Err(WhError::UnsupportedWindow("order type of X_+ is not ω for rank > 1; use a box window".into()));
        }
        let g = self.rank_one_generator();
        Ok((0..n as i64).map(|j| GroupElement(vec![g * j])).collect())
    }
}
