//! Winding vectors of invertible symbols.
//!
//! An invertible `φ ∈ C(T^r)` factors as `φ = χ·e^g` with a unique character
//! `χ = e^{i w·θ}`. The exponent vector `w` is recovered axis by axis as the
//! winding number of the coordinate loops `t ↦ φ(θ_1, …, t, …, θ_r)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Result, WhError};
use crate::group::{Count, GroupElement, OrderedGroup};
use crate::scalar::{Real, C};
use crate::symbol::{Certificate, CertifyOptions, DualPoint, TrigPolynomial};

/// Initial samples per loop.
pub const INITIAL_SAMPLES: usize = 64;
/// Maximum number of interval halvings.
pub const MAX_REFINEMENT: usize = 20;
const HOMOTOPY_SLICES: usize = 3;
const HOMOTOPY_SEED: u64 = 0x005e_ed0f_1005;

/// Winding vector `w` of an invertible symbol, i.e. the exponent of its
/// Bohr–van Kampen character.
pub type WindingVector = GroupElement;

/// Result of [`winding_vector`].
#[derive(Clone, Debug, PartialEq)]
pub enum Winding<T> {
    Vector { w: WindingVector, lower: T },
    NotInvertible { argmin: DualPoint<T>, sampled_min: T },
}

/// `ind φ` for a symbol.
#[derive(Clone, Debug, PartialEq)]
pub enum SymbolIndex<T> {
    /// `φ ∈ Φ(G)` with `ind φ = n`.
    Finite {
        index: i64,
        w: WindingVector,
    },
    /// Invertible, but the character has infinite rotation index.
    Infinite {
        w: WindingVector,
    },
    NotInvertible {
        argmin: DualPoint<T>,
        sampled_min: T,
    },
}

fn axis_lipschitz<T: Real>(p: &TrigPolynomial<T>, axis: usize) -> T {
    p.terms().map(|(xi, c)| c.norm() * T::from_i64_lossy(xi.0[axis].abs())).sum()
}

/// Winding number around 0 of `t ↦ ǩ(θ with θ_axis = t)`, `t ∈ [0, 2π]`.
///
/// Phase increments are principal values of `arg(f(t1)/f(t0))`. A step is
/// accepted when the jump is at most π/2 and `L_axis·Δt < |f(t0)|`, so the
/// arc stays in a disc that excludes 0; otherwise it is halved.
pub fn axis_winding<T: Real>(p: &TrigPolynomial<T>, axis: usize, fixed: &[T], delta: T) -> Result<i64> {
    let r = p.rank();
    if axis >= r || fixed.len() != r {
        return Err(WhError::Dimension { expected: r, got: fixed.len() });
    }
    let lip = axis_lipschitz(p, axis);
    let mut theta = fixed.to_vec();
    let mut eval = |t: T| {
        theta[axis] = t;
        p.eval(&theta)
    };
    let step = T::TAU() / T::from_usize_lossy(INITIAL_SAMPLES);
    let mut total = T::zero();
    let mut t0 = T::zero();
    let mut f0 = eval(t0);
    check_floor(f0, t0, delta)?;
    for i in 1..=INITIAL_SAMPLES {
        let t1 = if i == INITIAL_SAMPLES { T::TAU() } else { T::from_usize_lossy(i) * step };
        let f1 = eval(t1);
        check_floor(f1, t1, delta)?;
        total += phase_increment(&mut eval, lip, delta, (t0, f0), (t1, f1), 0)?;
        t0 = t1;
        f0 = f1;
    }
    let turns = total / T::TAU();
    let rounded = turns.round();
    if (turns - rounded).abs() >= T::lit(0.01) {
        return Err(WhError::NumericalInconsistency(format!(
            "winding residual {} on axis {axis}",
            (turns - rounded).to_f64_lossy()
        )));
    }
    Ok(rounded.to_i64().expect("winding fits in i64"))
}

fn check_floor<T: Real>(f: C<T>, t: T, delta: T) -> Result<()> {
    if f.norm() < delta {
        return Err(WhError::PossibleZero { angle: t.to_f64_lossy(), modulus: f.norm().to_f64_lossy() });
    }
    Ok(())
}

fn phase_increment<T: Real>(
    eval: &mut impl FnMut(T) -> C<T>,
    lip: T,
    delta: T,
    (t0, f0): (T, C<T>),
    (t1, f1): (T, C<T>),
    depth: usize,
) -> Result<T> {
    let jump = (f1 / f0).arg();
    let certified = lip * (t1 - t0) < f0.norm().max(f1.norm());
    if jump.abs() <= T::FRAC_PI_2() && certified {
        return Ok(jump);
    }
    if depth >= MAX_REFINEMENT {
        let (t, f) = if f0.norm() < f1.norm() { (t0, f0) } else { (t1, f1) };
        return Err(WhError::PossibleZero { angle: t.to_f64_lossy(), modulus: f.norm().to_f64_lossy() });
    }
    let tm = (t0 + t1) * T::lit(0.5);
    let fm = eval(tm);
    check_floor(fm, tm, delta)?;
    let left = phase_increment(eval, lip, delta, (t0, f0), (tm, fm), depth + 1)?;
    let right = phase_increment(eval, lip, delta, (tm, fm), (t1, f1), depth + 1)?;
    Ok(left + right)
}

/// Winding vector of `p`, or `NotInvertible` when `|ǩ|` cannot be certified
/// bounded away from 0.
///
/// Each axis is computed with the other coordinates at 0 and then again on
/// a few seeded random slices; disagreement means the sampling is broken.
pub fn winding_vector<T: Real>(p: &TrigPolynomial<T>) -> Result<Winding<T>> {
    winding_vector_with(p, &CertifyOptions::default())
}

pub fn winding_vector_with<T: Real>(p: &TrigPolynomial<T>, opts: &CertifyOptions) -> Result<Winding<T>> {
    let lower = match p.certify_nonvanishing(opts) {
        Certificate::NonVanishing { lower, .. } => lower,
        Certificate::MaybeZero { argmin, sampled_min } => return Ok(Winding::NotInvertible { argmin, sampled_min }),
    };
    let r = p.rank();
    let delta = lower * T::lit(0.5);
    let origin = vec![T::zero(); r];
    let w = (0..r).into_par_iter().map(|axis| axis_winding(p, axis, &origin, delta)).collect::<Result<Vec<i64>>>()?;
    if r > 1 {
        let mut rng = ChaCha8Rng::seed_from_u64(HOMOTOPY_SEED);
        for _ in 0..HOMOTOPY_SLICES {
            let slice: Vec<T> = (0..r).map(|_| T::lit(rng.gen_range(0.0..std::f64::consts::TAU))).collect();
            for (axis, &expected) in w.iter().enumerate() {
                let got = axis_winding(p, axis, &slice, delta)?;
                if got != expected {
                    return Err(WhError::NumericalInconsistency(format!(
                        "axis {axis} winds {expected} at the origin slice but {got} elsewhere"
                    )));
                }
            }
        }
    }
    Ok(Winding::Vector { w: GroupElement(w), lower })
}

/// `ind ǩ` with respect to the order of `group`.
pub fn symbol_index<T: Real>(p: &TrigPolynomial<T>, group: &OrderedGroup) -> Result<SymbolIndex<T>> {
    if group.rank() != p.rank() {
        return Err(WhError::Dimension { expected: group.rank(), got: p.rank() });
    }
    Ok(match winding_vector(p)? {
        Winding::NotInvertible { argmin, sampled_min } => SymbolIndex::NotInvertible { argmin, sampled_min },
        Winding::Vector { w, .. } => match group.rotation_index(&w)? {
            Count::Finite(index) => SymbolIndex::Finite { index, w },
            Count::Infinite => SymbolIndex::Infinite { w },
        },
    })
}
