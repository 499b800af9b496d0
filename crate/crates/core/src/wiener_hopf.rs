//! The operator `W_k g = 1_{X_+}(k ∗ g)` on `l_2(X_+)`: application to
//! finitely supported vectors, finite sections, and the quadrature check
//! that matrix entries of `W_k` are those of the Toeplitz operator `T_ǩ`.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Result, WhError};
use crate::group::{GroupElement, OrderedGroup};
use crate::linalg::{CMatrix, MAX_DIM};
use crate::scalar::{cis, czero, Real, C};
use crate::symbol::TrigPolynomial;

/// Finitely supported element of `l_2(X_+)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PositiveVector<T> {
    group: Arc<OrderedGroup>,
    entries: BTreeMap<GroupElement, C<T>>,
}

impl<T: Real> PositiveVector<T> {
    pub fn new(group: Arc<OrderedGroup>, entries: impl IntoIterator<Item = (GroupElement, C<T>)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (exp, v) in entries {
            if !group.is_positive(&exp)? {
                return Err(WhError::Precondition(format!("{exp} is not in X_+")));
            }
            if map.insert(exp.clone(), v).is_some() {
                return Err(WhError::Parse(format!("duplicate entry {exp}")));
            }
        }
        map.retain(|_, v| *v != czero());
        Ok(PositiveVector { group, entries: map })
    }

    /// The indicator `1_{ξ}`.
    pub fn basis(group: Arc<OrderedGroup>, exp: GroupElement) -> Result<Self> {
        Self::new(group, [(exp, C::new(T::one(), T::zero()))])
    }

    /// Vector on `X = Z` from a dense slice `v[0], v[1], …` along the
    /// positive generator.
    pub fn from_dense(group: Arc<OrderedGroup>, values: &[C<T>]) -> Result<Self> {
        let support = group.positive_prefix(values.len())?;
        Self::new(group, support.into_iter().zip(values.iter().copied()))
    }

    pub fn group(&self) -> &Arc<OrderedGroup> {
        &self.group
    }

    pub fn entries(&self) -> &BTreeMap<GroupElement, C<T>> {
        &self.entries
    }

    pub fn get(&self, exp: &GroupElement) -> C<T> {
        self.entries.get(exp).copied().unwrap_or_else(czero)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn norm2(&self) -> T {
        self.entries.values().map(|v| v.norm_sqr()).sum::<T>().sqrt()
    }

    pub fn scale(&self, lambda: C<T>) -> Self {
        let mut entries: BTreeMap<_, _> = self.entries.iter().map(|(k, v)| (k.clone(), *v * lambda)).collect();
        entries.retain(|_, v| *v != czero());
        PositiveVector { group: self.group.clone(), entries }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if *self.group != *other.group {
            return Err(WhError::GroupMismatch);
        }
        let mut entries = self.entries.clone();
        for (k, v) in &other.entries {
            *entries.entry(k.clone()).or_insert_with(czero) += *v;
        }
        entries.retain(|_, v| *v != czero());
        Ok(PositiveVector { group: self.group.clone(), entries })
    }
}

/// `W_k g`: convolve, then drop everything outside `X_+`.
pub fn apply<T: Real>(k: &TrigPolynomial<T>, g: &PositiveVector<T>) -> Result<PositiveVector<T>> {
    if *k.group().as_ref() != *g.group.as_ref() {
        return Err(WhError::GroupMismatch);
    }
    let group = g.group.clone();
    let mut out: BTreeMap<GroupElement, C<T>> = BTreeMap::new();
    for (xi, gv) in &g.entries {
        for (eta, kv) in k.terms() {
            let chi = eta + xi;
            if group.is_positive(&chi)? {
                *out.entry(chi).or_insert_with(czero) += *kv * *gv;
            }
        }
    }
    out.retain(|_, v| *v != czero());
    Ok(PositiveVector { group, entries: out })
}

/// Finite piece of `X_+` indexing a section of `W_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct Window {
    kind: WindowKind,
    elements: Vec<GroupElement>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WindowKind {
    /// The `N` smallest elements of `X_+` (rank 1 only), increasing order.
    OmegaPrefix(usize),
    /// `{ξ ∈ X_+ : lo ≤ ξ ≤ hi}` coordinatewise, lexicographic by coordinates.
    Box { lo: Vec<i64>, hi: Vec<i64> },
}

impl Window {
    pub fn omega(group: &OrderedGroup, n: usize) -> Result<Self> {
        Ok(Window { kind: WindowKind::OmegaPrefix(n), elements: group.positive_prefix(n)? })
    }

    pub fn boxed(group: &OrderedGroup, lo: Vec<i64>, hi: Vec<i64>) -> Result<Self> {
        let r = group.rank();
        if lo.len() != r || hi.len() != r {
            return Err(WhError::Dimension { expected: r, got: lo.len().min(hi.len()) });
        }
        let mut elements = Vec::new();
        let mut cur = lo.clone();
        if lo.iter().zip(&hi).any(|(a, b)| a > b) {
            return Ok(Window { kind: WindowKind::Box { lo, hi }, elements });
        }
        loop {
            let e = GroupElement(cur.clone());
            if group.is_positive(&e)? {
                elements.push(e);
                if elements.len() > MAX_DIM {
                    return Err(WhError::Capacity(format!("box window exceeds {MAX_DIM} elements")));
                }
            }
            // odometer, last coordinate fastest
            let mut j = r;
            loop {
                if j == 0 {
                    return Ok(Window { kind: WindowKind::Box { lo, hi }, elements });
                }
                j -= 1;
                if cur[j] < hi[j] {
                    cur[j] += 1;
                    break;
                }
                cur[j] = lo[j];
            }
        }
    }

    pub fn kind(&self) -> &WindowKind {
        &self.kind
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// Matrix of `W_k` in the indicator basis of a window: `M[i][j] = k(χ_i − χ_j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncationMatrix<T> {
    pub window: Window,
    pub matrix: CMatrix<T>,
}

pub fn truncation_matrix<T: Real>(k: &TrigPolynomial<T>, window: &Window) -> Result<TruncationMatrix<T>> {
    if window.is_empty() {
        return Err(WhError::Precondition("window is empty".into()));
    }
    let matrix = section(k, window, window)?;
    Ok(TruncationMatrix { window: window.clone(), matrix })
}

/// Rectangular section `P_rows W_k P_cols`.
pub fn section<T: Real>(k: &TrigPolynomial<T>, rows: &Window, cols: &Window) -> Result<CMatrix<T>> {
    if rows.len() > MAX_DIM || cols.len() > MAX_DIM {
        return Err(WhError::Capacity(format!("sections are capped at {MAX_DIM}")));
    }
    Ok(CMatrix::from_fn(rows.len(), cols.len(), |i, j| k.coeff(&(&rows.elements[i] - &cols.elements[j]))))
}

/// Coefficients of the adjoint: `W_k^* = W_{k*}` with `ǩ* = conj(ǩ)`.
pub fn adjoint_coeffs<T: Real>(k: &TrigPolynomial<T>) -> TrigPolynomial<T> {
    k.conjugate()
}

/// Spectral norms of the sections on each window; a nondecreasing sequence
/// of lower bounds for `‖W_k‖ = ‖ǩ‖_∞` when the windows are nested.
pub fn operator_norm_lower<T: Real>(k: &TrigPolynomial<T>, windows: &[Window]) -> Result<Vec<T>> {
    windows.par_iter().map(|w| Ok(truncation_matrix(k, w)?.matrix.spectral_norm())).collect()
}

/// Convenience for rank 1: norms of the `OmegaPrefix(N)` sections.
pub fn operator_norm_lower_omega<T: Real>(k: &TrigPolynomial<T>, sizes: &[usize]) -> Result<Vec<T>> {
    let windows = sizes.iter().map(|&n| Window::omega(k.group(), n)).collect::<Result<Vec<_>>>()?;
    operator_norm_lower(k, &windows)
}

/// `(k(χ − ξ), ⟨ǩ·e_ξ, e_χ⟩_{L²(T^r)})` with the inner product evaluated
/// by the `M^r`-point product trapezoid rule, exact below Nyquist.
pub fn quadrature_entry_check<T: Real>(
    k: &TrigPolynomial<T>,
    chi: &GroupElement,
    xi: &GroupElement,
    nodes: usize,
) -> Result<(C<T>, C<T>)> {
    let group = k.group();
    group.check(chi)?;
    group.check(xi)?;
    let required = 2 * (k.max_exponent() + chi.max_abs().max(xi.max_abs())) as usize;
    if nodes <= required {
        return Err(WhError::Aliasing { nodes, required });
    }
    let r = k.rank();
    let step = T::TAU() / T::from_usize_lossy(nodes);
    let diff = xi - chi;
    let total = nodes.pow(r as u32);
    let mut theta = vec![T::zero(); r];
    let mut acc = czero::<T>();
    for mut idx in 0..total {
        for j in (0..r).rev() {
            theta[j] = T::from_usize_lossy(idx % nodes) * step;
            idx /= nodes;
        }
        let phase = diff.0.iter().zip(&theta).fold(T::zero(), |a, (&e, &t)| a + T::from_i64_lossy(e) * t);
        acc += k.eval(&theta) * cis(phase);
    }
    let quad = acc / T::from_usize_lossy(total);
    Ok((k.coeff(&(chi - xi)), quad))
}
