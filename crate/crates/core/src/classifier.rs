//! Fredholm verdicts for `W_k` and the spectra `σ_e ⊆ σ = σ_w` on a grid.
//!
//! `W_k` is Fredholm iff `ǩ` is invertible with a character of finite
//! rotation index, and then `Ind W_k = −ind ǩ`. The spectrum is the range of
//! `ǩ` plus those holes where `ǩ − λ` is not in the identity component.
//!
//! `ind χ = 0` forces `χ = 1` for the order backends here: if `χ > 0` the
//! interval `[0, χ)` contains 0, and if `χ < 0` then `χ⁻¹ > 0` does. So an
//! index-0 verdict means winding vector 0, i.e. `ǩ − λ ∈ exp(C(G))`.

use std::collections::VecDeque;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, WhError};
use crate::group::OrderedGroup;
use crate::scalar::{Real, C};
use crate::symbol::{default_grid_step, DualPoint, TrigPolynomial};
use crate::winding::{symbol_index, SymbolIndex, WindingVector};

/// Smallest accepted grid resolution per direction.
pub const MIN_RESOLUTION: usize = 16;
/// Cap on dual-grid samples used to rasterize the range.
pub const MAX_RANGE_SAMPLES: usize = 1 << 21;

#[derive(Clone, Debug, PartialEq)]
pub enum NotFredholmReason<T> {
    /// `|ǩ|` could not be certified positive; `witness` is the sampled argmin.
    SymbolVanishes { witness: DualPoint<T>, sampled_min: T },
    /// `ǩ` is invertible but its character has infinite rotation index.
    InfiniteCharacterIndex { w: WindingVector },
}

#[derive(Clone, Debug, PartialEq)]
pub enum FredholmVerdict<T> {
    Fredholm { index: i64, w: WindingVector },
    NotFredholm(NotFredholmReason<T>),
}

impl<T> FredholmVerdict<T> {
    pub fn index(&self) -> Option<i64> {
        match self {
            FredholmVerdict::Fredholm { index, .. } => Some(*index),
            FredholmVerdict::NotFredholm(_) => None,
        }
    }

    pub fn is_fredholm(&self) -> bool {
        matches!(self, FredholmVerdict::Fredholm { .. })
    }
}

/// Fredholm test and index of `W_k` on the ordered group `group`.
pub fn is_fredholm<T: Real>(k: &TrigPolynomial<T>, group: &OrderedGroup) -> Result<FredholmVerdict<T>> {
    Ok(match symbol_index(k, group)? {
        SymbolIndex::Finite { index, w } => FredholmVerdict::Fredholm { index: -index, w },
        SymbolIndex::Infinite { w } => FredholmVerdict::NotFredholm(NotFredholmReason::InfiniteCharacterIndex { w }),
        SymbolIndex::NotInvertible { argmin, sampled_min } => {
            FredholmVerdict::NotFredholm(NotFredholmReason::SymbolVanishes { witness: argmin, sampled_min })
        }
    })
}

/// Where a point `λ` sits relative to the spectrum of `W_k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "class", content = "index")]
pub enum LambdaClass {
    Range,
    EssentialHole,
    FredholmHole(i64),
    Resolvent,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LambdaReport<T> {
    pub class: LambdaClass,
    /// Distance from `λ` to the nearest sampled value of `ǩ`.
    pub distance: T,
    pub tolerance: T,
    /// `λ` lies within twice the tolerance of the sampled range.
    pub boundary_warning: bool,
}

/// Classification of `λ` for `ǩ − λ` once `λ` is known to be off the range.
fn classify_off_range<T: Real>(k: &TrigPolynomial<T>, group: &OrderedGroup, lambda: C<T>) -> Result<LambdaClass> {
    Ok(match is_fredholm(&k.sub_scalar(lambda), group)? {
        FredholmVerdict::Fredholm { index: 0, .. } => LambdaClass::Resolvent,
        FredholmVerdict::Fredholm { index, .. } => LambdaClass::FredholmHole(index),
        FredholmVerdict::NotFredholm(NotFredholmReason::InfiniteCharacterIndex { .. }) => LambdaClass::EssentialHole,
        FredholmVerdict::NotFredholm(NotFredholmReason::SymbolVanishes { witness, sampled_min }) => {
            return Err(WhError::PossibleZero {
                angle: witness.angles().first().map_or(0.0, |a| a.to_f64_lossy()),
                modulus: sampled_min.to_f64_lossy(),
            })
        }
    })
}

/// Dual-grid step used for range sampling: `h`, coarsened so that at most
/// [`MAX_RANGE_SAMPLES`] points are evaluated.
pub fn range_grid_step<T: Real>(rank: usize, h: T) -> T {
    let cap = (MAX_RANGE_SAMPLES as f64).powf(1.0 / rank.max(1) as f64).floor().max(4.0);
    h.max(T::TAU() / T::lit(cap))
}

/// Classifies `λ` using the range sampled at dual step `h` (default `2π/512`)
/// with tolerance `tol` (default `L·h`).
pub fn classify_lambda<T: Real>(
    k: &TrigPolynomial<T>,
    group: &OrderedGroup,
    lambda: C<T>,
    h: Option<T>,
    tol: Option<T>,
) -> Result<LambdaReport<T>> {
    if group.rank() != k.rank() {
        return Err(WhError::Dimension { expected: group.rank(), got: k.rank() });
    }
    let (step, _, values) = k.grid_values(range_grid_step(k.rank(), h.unwrap_or_else(default_grid_step)));
    let tolerance = tol.unwrap_or(k.lipschitz_bound() * step);
    let distance = values.iter().map(|v| (*v - lambda).norm()).fold(T::infinity(), T::min);
    let boundary_warning = distance <= tolerance * T::lit(2.0);
    let class = if distance <= tolerance { LambdaClass::Range } else { classify_off_range(k, group, lambda)? };
    Ok(LambdaReport { class, distance, tolerance, boundary_warning })
}

/// Axis-aligned rectangle `[re0, re1] × [im0, im1]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumBox {
    pub re0: f64,
    pub re1: f64,
    pub im0: f64,
    pub im1: f64,
}

impl SpectrumBox {
    pub fn new(re0: f64, re1: f64, im0: f64, im1: f64) -> Result<Self> {
        if !(re0 < re1 && im0 < im1) || ![re0, re1, im0, im1].iter().all(|x| x.is_finite()) {
            return Err(WhError::Precondition(format!("degenerate box [{re0},{re1}]x[{im0},{im1}]")));
        }
        Ok(SpectrumBox { re0, re1, im0, im1 })
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.re0, self.re1, self.im0, self.im1]
    }
}

/// Per-cell label; the discriminants are the grid file legend.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[repr(u8)]
pub enum CellLabel {
    Range = 0,
    EssentialHole = 1,
    FredholmHole = 2,
    Resolvent = 3,
    Unbounded = 4,
}

impl CellLabel {
    pub fn code(self) -> u8 {
        self as u8
    }

    pub fn from_code(code: u8) -> Option<Self> {
        Some(match code {
            0 => CellLabel::Range,
            1 => CellLabel::EssentialHole,
            2 => CellLabel::FredholmHole,
            3 => CellLabel::Resolvent,
            4 => CellLabel::Unbounded,
            _ => return None,
        })
    }
}

/// A bounded component of the complement of the rasterized range.
#[derive(Clone, Debug, PartialEq)]
pub struct Hole<T> {
    pub component: usize,
    pub label: CellLabel,
    /// Fredholm index of `W_k − λ` on the hole, if Fredholm.
    pub index: Option<i64>,
    /// The most interior cell, where `λ` was classified.
    pub representative: C<T>,
    pub cells: usize,
}

/// A set of grid cells, row-major with the real part fastest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellSet {
    pub nx: usize,
    pub ny: usize,
    pub cells: Vec<bool>,
}

impl CellSet {
    pub fn count(&self) -> usize {
        self.cells.iter().filter(|&&c| c).count()
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.cells[j * self.nx + i]
    }

    /// 4-neighbor connectedness; the empty set counts as connected.
    pub fn is_connected(&self) -> bool {
        let Some(start) = self.cells.iter().position(|&c| c) else {
            return true;
        };
        let mut seen = vec![false; self.cells.len()];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        let mut reached = 1;
        while let Some(idx) = queue.pop_front() {
            for nb in neighbors(idx, self.nx, self.ny) {
                if self.cells[nb] && !seen[nb] {
                    seen[nb] = true;
                    reached += 1;
                    queue.push_back(nb);
                }
            }
        }
        reached == self.count()
    }
}

fn neighbors(idx: usize, nx: usize, ny: usize) -> impl Iterator<Item = usize> {
    let (i, j) = (idx % nx, idx / nx);
    let left = (i > 0).then(|| idx - 1);
    let right = (i + 1 < nx).then(|| idx + 1);
    let down = (j > 0).then(|| idx - nx);
    let up = (j + 1 < ny).then(|| idx + nx);
    [left, right, down, up].into_iter().flatten()
}

/// Cell labels of `σ(W_k)` on a rectangle of the complex plane.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumGrid<T> {
    pub bbox: SpectrumBox,
    pub nx: usize,
    pub ny: usize,
    pub labels: Vec<CellLabel>,
    /// Bounded component id per cell, `None` on Range and Unbounded cells.
    pub component: Vec<Option<usize>>,
    pub holes: Vec<Hole<T>>,
    pub range_tolerance: T,
    /// Dual-grid step actually used for range sampling.
    pub grid_step: T,
    /// Cells within `(tol, 2·tol]` of the range, labelled Range.
    pub ambiguous_cells: usize,
    sigma_e: CellSet,
    sigma: CellSet,
}

impl<T: Real> SpectrumGrid<T> {
    pub fn cell_size(&self) -> (f64, f64) {
        ((self.bbox.re1 - self.bbox.re0) / self.nx as f64, (self.bbox.im1 - self.bbox.im0) / self.ny as f64)
    }

    pub fn cell_diagonal(&self) -> f64 {
        let (dx, dy) = self.cell_size();
        dx.hypot(dy)
    }

    pub fn center(&self, i: usize, j: usize) -> C<f64> {
        let (dx, dy) = self.cell_size();
        C::new(self.bbox.re0 + (i as f64 + 0.5) * dx, self.bbox.im0 + (j as f64 + 0.5) * dy)
    }

    pub fn label(&self, i: usize, j: usize) -> CellLabel {
        self.labels[j * self.nx + i]
    }

    /// Fredholm index of the cell's hole, for FredholmHole cells.
    pub fn cell_index(&self, i: usize, j: usize) -> Option<i64> {
        self.component[j * self.nx + i].and_then(|c| self.holes[c].index)
    }

    /// Range ∪ EssentialHole cells.
    pub fn sigma_e(&self) -> &CellSet {
        &self.sigma_e
    }

    /// `σ_e` ∪ FredholmHole cells.
    pub fn sigma(&self) -> &CellSet {
        &self.sigma
    }

    /// The Weyl spectrum; the same set as [`Self::sigma`].
    pub fn sigma_w(&self) -> &CellSet {
        &self.sigma
    }

    /// Centers of the cells in `set`.
    pub fn centers_of<'a>(&'a self, set: &'a CellSet) -> impl Iterator<Item = C<f64>> + 'a {
        set.cells.iter().enumerate().filter(|(_, &c)| c).map(move |(idx, _)| self.center(idx % self.nx, idx / self.nx))
    }
}

/// Options for [`spectrum_grid`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridOptions<T> {
    /// `None` picks [`auto_box`].
    pub bbox: Option<SpectrumBox>,
    pub nx: usize,
    pub ny: usize,
    /// Dual-grid step for range sampling; `None` means `2π/512`.
    pub grid_step: Option<T>,
}

impl<T> GridOptions<T> {
    pub fn new(nx: usize, ny: usize) -> Self {
        GridOptions { bbox: None, nx, ny, grid_step: None }
    }

    pub fn with_box(mut self, bbox: SpectrumBox) -> Self {
        self.bbox = Some(bbox);
        self
    }
}

/// Values of `ǩ` on the range-sampling grid, as `f64` points.
fn range_samples<T: Real>(k: &TrigPolynomial<T>, h: Option<T>) -> (T, Vec<C<f64>>) {
    let (step, _, values) = k.grid_values(range_grid_step(k.rank(), h.unwrap_or_else(default_grid_step)));
    (step, values.iter().map(|v| C::new(v.re.to_f64_lossy(), v.im.to_f64_lossy())).collect())
}

/// Bounding box of the samples plus 10% of the larger extent on each side
/// (at least 0.1), widened further when an `nx × ny` grid over it would not
/// leave `2·tol` between the samples and the border.
pub fn auto_box(samples: &[C<f64>], nx: usize, ny: usize, sample_spread: f64) -> SpectrumBox {
    let (mut re0, mut re1, mut im0, mut im1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for s in samples {
        re0 = re0.min(s.re);
        re1 = re1.max(s.re);
        im0 = im0.min(s.im);
        im1 = im1.max(s.im);
    }
    let mut margin = (0.1 * (re1 - re0).max(im1 - im0)).max(0.1);
    loop {
        let bbox = SpectrumBox { re0: re0 - margin, re1: re1 + margin, im0: im0 - margin, im1: im1 + margin };
        let diag = ((bbox.re1 - bbox.re0) / nx as f64).hypot((bbox.im1 - bbox.im0) / ny as f64);
        let tol = diag.max(sample_spread);
        if margin > 2.5 * tol || !margin.is_finite() {
            return bbox;
        }
        margin *= 1.25;
    }
}

/// For each cell: 0 if within `tol` of a sample, 1 if within `2·tol`,
/// 2 otherwise.
fn rasterize_range(samples: &[C<f64>], bbox: &SpectrumBox, nx: usize, ny: usize, tol: f64) -> Vec<u8> {
    let dx = (bbox.re1 - bbox.re0) / nx as f64;
    let dy = (bbox.im1 - bbox.im0) / ny as f64;
    let bucket_of = |z: C<f64>| -> Option<(usize, usize)> {
        let i = ((z.re - bbox.re0) / dx).floor();
        let j = ((z.im - bbox.im0) / dy).floor();
        (i >= 0.0 && j >= 0.0 && i < nx as f64 && j < ny as f64).then_some((i as usize, j as usize))
    };
    let mut buckets: Vec<Vec<C<f64>>> = vec![Vec::new(); nx * ny];
    for &s in samples {
        if let Some((i, j)) = bucket_of(s) {
            buckets[j * nx + i].push(s);
        }
    }
    let reach_x = (2.0 * tol / dx).ceil() as isize + 1;
    let reach_y = (2.0 * tol / dy).ceil() as isize + 1;
    (0..nx * ny)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = ((idx % nx) as isize, (idx / nx) as isize);
            let center = C::new(bbox.re0 + (i as f64 + 0.5) * dx, bbox.im0 + (j as f64 + 0.5) * dy);
            let mut best = 2u8;
            let own = buckets[idx].iter().map(|s| (s - center).norm()).fold(f64::INFINITY, f64::min);
            if own <= tol {
                return 0;
            }
            if own <= 2.0 * tol {
                best = 1;
            }
            for bj in (j - reach_y).max(0)..=(j + reach_y).min(ny as isize - 1) {
                for bi in (i - reach_x).max(0)..=(i + reach_x).min(nx as isize - 1) {
                    for s in &buckets[bj as usize * nx + bi as usize] {
                        let d = (s - center).norm();
                        if d <= tol {
                            return 0;
                        }
                        if d <= 2.0 * tol {
                            best = 1;
                        }
                    }
                }
            }
            best
        })
        .collect()
}

/// Flood-fills the cells with `open[idx]` into 4-connected components.
fn components(open: &[bool], nx: usize, ny: usize) -> (Vec<Option<usize>>, Vec<Vec<usize>>) {
    let mut id = vec![None; open.len()];
    let mut comps: Vec<Vec<usize>> = Vec::new();
    for start in 0..open.len() {
        if !open[start] || id[start].is_some() {
            continue;
        }
        let c = comps.len();
        id[start] = Some(c);
        let mut cells = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(idx) = queue.pop_front() {
            for nb in neighbors(idx, nx, ny) {
                if open[nb] && id[nb].is_none() {
                    id[nb] = Some(c);
                    cells.push(nb);
                    queue.push_back(nb);
                }
            }
        }
        cells.sort_unstable();
        comps.push(cells);
    }
    (id, comps)
}

/// The cell of `cells` farthest (4-neighbor steps) from the outside of the
/// component; ties go to the lowest index.
fn most_interior(cells: &[usize], member: &[Option<usize>], comp: usize, nx: usize, ny: usize) -> usize {
    let mut dist = std::collections::HashMap::with_capacity(cells.len());
    let mut queue = VecDeque::new();
    for &idx in cells {
        let (i, j) = (idx % nx, idx / nx);
        let on_edge = i == 0 || j == 0 || i + 1 == nx || j + 1 == ny;
        if on_edge || neighbors(idx, nx, ny).any(|nb| member[nb] != Some(comp)) {
            dist.insert(idx, 0usize);
            queue.push_back(idx);
        }
    }
    while let Some(idx) = queue.pop_front() {
        let d = dist[&idx];
        for nb in neighbors(idx, nx, ny) {
            if member[nb] == Some(comp) && !dist.contains_key(&nb) {
                dist.insert(nb, d + 1);
                queue.push_back(nb);
            }
        }
    }
    *cells.iter().max_by(|a, b| dist[a].cmp(&dist[b]).then(b.cmp(a))).expect("nonempty component")
}

/// Labels every cell of the grid: Range from the sampled symbol image, then
/// one classification per bounded complement component.
pub fn spectrum_grid<T: Real>(
    k: &TrigPolynomial<T>,
    group: &OrderedGroup,
    opts: &GridOptions<T>,
) -> Result<SpectrumGrid<T>> {
    if group.rank() != k.rank() {
        return Err(WhError::Dimension { expected: group.rank(), got: k.rank() });
    }
    let (nx, ny) = (opts.nx, opts.ny);
    if nx < MIN_RESOLUTION || ny < MIN_RESOLUTION {
        return Err(WhError::Resolution(format!("{nx}x{ny} is below {MIN_RESOLUTION}x{MIN_RESOLUTION}")));
    }
    if nx.checked_mul(ny).is_none_or(|n| n > 1 << 24) {
        return Err(WhError::Capacity(format!("{nx}x{ny} grid is too large")));
    }
    let (step, samples) = range_samples(k, opts.grid_step);
    let spread = (k.lipschitz_bound() * step).to_f64_lossy();
    let bbox = opts.bbox.unwrap_or_else(|| auto_box(&samples, nx, ny, spread));
    let diag = ((bbox.re1 - bbox.re0) / nx as f64).hypot((bbox.im1 - bbox.im0) / ny as f64);
    let tol = diag.max(spread);
    for s in &samples {
        let inside = s.re - 2.0 * tol > bbox.re0
            && s.re + 2.0 * tol < bbox.re1
            && s.im - 2.0 * tol > bbox.im0
            && s.im + 2.0 * tol < bbox.im1;
        if !inside {
            return Err(WhError::Precondition(format!(
                "box {:?} does not contain the range value {} with margin {}",
                bbox.as_array(),
                s,
                2.0 * tol
            )));
        }
    }

    let raster = rasterize_range(&samples, &bbox, nx, ny, tol);
    let ambiguous_cells = raster.iter().filter(|&&r| r == 1).count();
    let open: Vec<bool> = raster.iter().map(|&r| r == 2).collect();
    let (member, comps) = components(&open, nx, ny);
    // the border ring is off the range, so exactly one component touches it
    let outer = member[0].expect("corner cell is off the range");

    let (dx, dy) = ((bbox.re1 - bbox.re0) / nx as f64, (bbox.im1 - bbox.im0) / ny as f64);
    let classified = comps
        .par_iter()
        .enumerate()
        .filter(|(c, _)| *c != outer)
        .map(|(c, cells)| {
            let rep = most_interior(cells, &member, c, nx, ny);
            let lambda = C::new(
                T::lit(bbox.re0 + ((rep % nx) as f64 + 0.5) * dx),
                T::lit(bbox.im0 + ((rep / nx) as f64 + 0.5) * dy),
            );
            Ok((c, lambda, classify_off_range(k, group, lambda)?))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut hole_of = vec![None; comps.len()];
    let mut holes = Vec::with_capacity(classified.len());
    for (c, representative, class) in classified {
        let (label, index) = match class {
            LambdaClass::EssentialHole => (CellLabel::EssentialHole, None),
            LambdaClass::FredholmHole(n) => (CellLabel::FredholmHole, Some(n)),
            LambdaClass::Resolvent => (CellLabel::Resolvent, Some(0)),
            LambdaClass::Range => unreachable!("off-range classification"),
        };
        hole_of[c] = Some(holes.len());
        holes.push(Hole { component: holes.len(), label, index, representative, cells: comps[c].len() });
    }

    let mut labels = vec![CellLabel::Range; nx * ny];
    let mut component = vec![None; nx * ny];
    for idx in 0..nx * ny {
        if let Some(c) = member[idx] {
            match hole_of[c] {
                None => labels[idx] = CellLabel::Unbounded,
                Some(h) => {
                    labels[idx] = holes[h].label;
                    component[idx] = Some(h);
                }
            }
        }
    }
    let set = |pred: &dyn Fn(CellLabel) -> bool| CellSet { nx, ny, cells: labels.iter().map(|&l| pred(l)).collect() };
    let sigma_e = set(&|l| matches!(l, CellLabel::Range | CellLabel::EssentialHole));
    let sigma = set(&|l| matches!(l, CellLabel::Range | CellLabel::EssentialHole | CellLabel::FredholmHole));
    Ok(SpectrumGrid {
        bbox,
        nx,
        ny,
        labels,
        component,
        holes,
        range_tolerance: T::lit(tol),
        grid_step: step,
        ambiguous_cells,
        sigma_e,
        sigma,
    })
}

/// Convex hull (counter-clockwise, no repeated points) by the monotone chain.
pub fn convex_hull(points: &[C<f64>]) -> Vec<C<f64>> {
    let mut pts: Vec<C<f64>> = points.to_vec();
    pts.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: C<f64>, a: C<f64>, b: C<f64>| (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re);
    let mut hull: Vec<C<f64>> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &C<f64>>> =
            if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for &p in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

fn segment_distance(p: C<f64>, a: C<f64>, b: C<f64>) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = (((p - a) * ab.conj()).re / len2).clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

/// Distance from `p` to the convex polygon `hull` (0 inside).
pub fn hull_distance(hull: &[C<f64>], p: C<f64>) -> f64 {
    match hull.len() {
        0 => f64::INFINITY,
        1 => (p - hull[0]).norm(),
        n => {
            let inside = n >= 3
                && (0..n).all(|i| {
                    let (a, b) = (hull[i], hull[(i + 1) % n]);
                    (b.re - a.re) * (p.im - a.im) - (b.im - a.im) * (p.re - a.re) >= 0.0
                });
            if inside {
                return 0.0;
            }
            (0..n).map(|i| segment_distance(p, hull[i], hull[(i + 1) % n])).fold(f64::INFINITY, f64::min)
        }
    }
}

/// Cellwise check of `R(ǩ) ⊆ σ(W_k) ⊆ conv R(ǩ)` and connectedness.
#[derive(Clone, Debug, PartialEq)]
pub struct InclusionReport {
    /// Range cells not in `σ`.
    pub range_outside_sigma: usize,
    /// `σ` cells farther than `inflation` from the sampled hull.
    pub sigma_outside_hull: usize,
    pub inflation: f64,
    pub sigma_e_connected: bool,
    pub sigma_connected: bool,
}

impl InclusionReport {
    pub fn passes(&self) -> bool {
        self.range_outside_sigma == 0 && self.sigma_outside_hull == 0 && self.sigma_e_connected && self.sigma_connected
    }
}

/// Checks a computed grid against the convex hull of freshly sampled range
/// values, inflated by two cell diagonals.
pub fn hull_and_inclusion_report<T: Real>(
    k: &TrigPolynomial<T>,
    group: &OrderedGroup,
    grid: &SpectrumGrid<T>,
) -> Result<InclusionReport> {
    if group.rank() != k.rank() {
        return Err(WhError::Dimension { expected: group.rank(), got: k.rank() });
    }
    let (_, samples) = range_samples(k, Some(grid.grid_step));
    let hull = convex_hull(&samples);
    let inflation = 2.0 * grid.cell_diagonal();
    let range_outside_sigma = grid
        .labels
        .iter()
        .zip(&grid.sigma().cells)
        .filter(|(&l, &in_sigma)| l == CellLabel::Range && !in_sigma)
        .count();
    let sigma_outside_hull = grid.centers_of(grid.sigma()).filter(|&c| hull_distance(&hull, c) > inflation).count();
    Ok(InclusionReport {
        range_outside_sigma,
        sigma_outside_hull,
        inflation,
        sigma_e_connected: grid.sigma_e().is_connected(),
        sigma_connected: grid.sigma().is_connected(),
    })
}
