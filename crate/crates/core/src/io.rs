//! JSON and CSV interchange for groups, symbols, vectors, matrices, grids
//! and oracle results. Everything here is `f64`.

use std::fmt::Write as _;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::classifier::{
    CellLabel, FredholmVerdict, InclusionReport, LambdaReport, NotFredholmReason, SpectrumBox, SpectrumGrid,
};
use crate::error::{Result, WhError};
use crate::group::{GroupElement, OrderBackend, OrderedGroup, QuadWeight};
use crate::linalg::CMatrix;
use crate::oracle::{FactorizationResult, HankelSpectrum, KernelCokernel, RootSet, UnimodularReport};
use crate::scalar::C;
use crate::symbol::TrigPolynomial;
use crate::wiener_hopf::{PositiveVector, Window};

/// Parses JSON, reporting line and column on failure.
pub fn parse_json<D: DeserializeOwned>(text: &str) -> Result<D> {
    serde_json::from_str(text).map_err(|e| {
        WhError::Parse(format!("line {}, column {}: {}", e.line(), e.column(), strip_position(&e.to_string())))
    })
}

fn strip_position(msg: &str) -> &str {
    msg.rfind(" at line ").map_or(msg, |i| &msg[..i])
}

/// Compact JSON with a trailing newline.
pub fn to_json<S: Serialize>(value: &S) -> String {
    let mut s = serde_json::to_string(value).expect("serializable value");
    s.push('\n');
    s
}

/// A rational weight component: an integer or `[numerator, denominator]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RationalSpec {
    Int(i64),
    Frac([i64; 2]),
}

impl RationalSpec {
    fn to_big(&self) -> Result<BigRational> {
        match *self {
            RationalSpec::Int(n) => Ok(BigRational::from_integer(n.into())),
            RationalSpec::Frac([_, 0]) => Err(WhError::Parse("zero denominator in weight".into())),
            RationalSpec::Frac([n, d]) => Ok(BigRational::new(n.into(), d.into())),
        }
    }

    fn from_big(r: &BigRational) -> Result<Self> {
        let n = r.numer().to_i64();
        let d = r.denom().to_i64();
        match (n, d) {
            (Some(n), Some(1)) => Ok(RationalSpec::Int(n)),
            (Some(n), Some(d)) => Ok(RationalSpec::Frac([n, d])),
            _ => Err(WhError::Capacity(format!("weight {r} does not fit in 64-bit integers"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmbeddingSpec {
    pub d: u64,
    /// `[a, b]` per generator, meaning `a + b·√d`.
    pub weights: Vec<[RationalSpec; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderSpec {
    Lex,
    Embedding(EmbeddingSpec),
}

/// Group descriptor: `{"rank": r, "order": "lex"}` or
/// `{"order": {"embedding": {"d": 2, "weights": [[a, b], …]}}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    pub order: OrderSpec,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub assume_independent: bool,
}

impl GroupSpec {
    pub fn build(&self) -> Result<OrderedGroup> {
        match &self.order {
            OrderSpec::Lex => {
                OrderedGroup::lex(self.rank.ok_or_else(|| WhError::Parse("lex order needs a rank".into()))?)
            }
            OrderSpec::Embedding(e) => {
                if let Some(r) = self.rank {
                    if r != e.weights.len() {
                        return Err(WhError::Dimension { expected: r, got: e.weights.len() });
                    }
                }
                let weights = e
                    .weights
                    .iter()
                    .map(|[a, b]| Ok(QuadWeight::new(a.to_big()?, b.to_big()?)))
                    .collect::<Result<Vec<_>>>()?;
                OrderedGroup::embedding(e.d, weights, self.assume_independent)
            }
        }
    }

    pub fn from_group(g: &OrderedGroup) -> Result<Self> {
        Ok(match g.backend() {
            OrderBackend::Lex => GroupSpec { rank: Some(g.rank()), order: OrderSpec::Lex, assume_independent: false },
            OrderBackend::RealEmbedding(e) => GroupSpec {
                rank: Some(g.rank()),
                order: OrderSpec::Embedding(EmbeddingSpec {
                    d: e.d,
                    weights: e
                        .weights
                        .iter()
                        .map(|w| Ok([RationalSpec::from_big(&w.a)?, RationalSpec::from_big(&w.b)?]))
                        .collect::<Result<_>>()?,
                }),
                assume_independent: g.rank() > 2,
            },
        })
    }
}

/// `{"exp": [...], "re": f, "im": f}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub exp: Vec<i64>,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

impl TermSpec {
    fn new(exp: &GroupElement, c: &C<f64>) -> Self {
        TermSpec { exp: exp.0.clone(), re: c.re, im: c.im }
    }

    fn value(&self) -> Result<(GroupElement, C<f64>)> {
        if !(self.re.is_finite() && self.im.is_finite()) {
            return Err(WhError::Parse(format!("non-finite coefficient at {:?}", self.exp)));
        }
        Ok((GroupElement(self.exp.clone()), C::new(self.re, self.im)))
    }
}

/// `{"group": <group>, "coeffs": [<term>, …]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolSpec {
    pub group: GroupSpec,
    pub coeffs: Vec<TermSpec>,
}

impl SymbolSpec {
    pub fn build(&self) -> Result<TrigPolynomial<f64>> {
        self.build_on(Arc::new(self.group.build()?))
    }

    /// Builds the symbol on `group` instead of the embedded descriptor.
    pub fn build_on(&self, group: Arc<OrderedGroup>) -> Result<TrigPolynomial<f64>> {
        let terms = self.coeffs.iter().map(TermSpec::value).collect::<Result<Vec<_>>>()?;
        TrigPolynomial::from_terms(group, terms)
    }

    pub fn from_symbol(p: &TrigPolynomial<f64>) -> Result<Self> {
        Ok(SymbolSpec {
            group: GroupSpec::from_group(p.group())?,
            coeffs: p.terms().map(|(e, c)| TermSpec::new(e, c)).collect(),
        })
    }
}

pub fn parse_symbol(text: &str) -> Result<TrigPolynomial<f64>> {
    parse_json::<SymbolSpec>(text)?.build()
}

/// `{"entries": [<term>, …]}`; the group comes from context.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VectorSpec {
    pub entries: Vec<TermSpec>,
}

impl VectorSpec {
    pub fn build(&self, group: Arc<OrderedGroup>) -> Result<PositiveVector<f64>> {
        let entries = self.entries.iter().map(TermSpec::value).collect::<Result<Vec<_>>>()?;
        for (e, _) in &entries {
            group.check(e)?;
        }
        PositiveVector::new(group, entries)
    }

    pub fn from_vector(v: &PositiveVector<f64>) -> Self {
        VectorSpec { entries: v.entries().iter().map(|(e, c)| TermSpec::new(e, c)).collect() }
    }
}

fn format_complex(c: C<f64>) -> String {
    let sign = if c.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{}{}i", c.re, sign, c.im.abs())
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Matrix as CSV: the header lists the window elements as exponent tuples,
/// each row starts with its element, entries are written `a+bi`.
pub fn matrix_csv(window: &Window, m: &CMatrix<f64>) -> String {
    let mut out = String::from("row");
    for e in window.elements() {
        out.push(',');
        out.push_str(&csv_field(&e.to_string()));
    }
    out.push('\n');
    for (i, e) in window.elements().iter().enumerate() {
        out.push_str(&csv_field(&e.to_string()));
        for j in 0..m.cols() {
            out.push(',');
            out.push_str(&format_complex(m[(i, j)]));
        }
        out.push('\n');
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerdictSpec {
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    /// Dual-group point where `|ǩ|` was smallest.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sampled_min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<Vec<i64>>,
}

impl VerdictSpec {
    pub fn from_verdict(v: &FredholmVerdict<f64>) -> Self {
        let mut spec =
            VerdictSpec { status: String::new(), index: None, reason: None, witness: None, sampled_min: None, w: None };
        match v {
            FredholmVerdict::Fredholm { index, .. } => {
                spec.status = "Fredholm".into();
                spec.index = Some(*index);
            }
            FredholmVerdict::NotFredholm(reason) => {
                spec.status = "NotFredholm".into();
                match reason {
                    NotFredholmReason::SymbolVanishes { witness, sampled_min } => {
                        spec.reason = Some("SymbolVanishes".into());
                        spec.witness = Some(witness.angles().to_vec());
                        spec.sampled_min = Some(*sampled_min);
                    }
                    NotFredholmReason::InfiniteCharacterIndex { w } => {
                        spec.reason = Some("InfiniteCharacterIndex".into());
                        spec.w = Some(w.0.clone());
                    }
                }
            }
        }
        spec
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LambdaSpec {
    pub lambda: [f64; 2],
    pub class: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index: Option<i64>,
    pub distance: f64,
    pub tolerance: f64,
    pub boundary_warning: bool,
}

impl LambdaSpec {
    pub fn from_report(lambda: C<f64>, r: &LambdaReport<f64>) -> Self {
        use crate::classifier::LambdaClass;
        let (class, index) = match r.class {
            LambdaClass::Range => ("Range", None),
            LambdaClass::EssentialHole => ("EssentialHole", None),
            LambdaClass::FredholmHole(n) => ("FredholmHole", Some(n)),
            LambdaClass::Resolvent => ("Resolvent", Some(0)),
        };
        LambdaSpec {
            lambda: [lambda.re, lambda.im],
            class: class.into(),
            index,
            distance: r.distance,
            tolerance: r.tolerance,
            boundary_warning: r.boundary_warning,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HoleIndexSpec {
    pub component: usize,
    pub index: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HoleSpec {
    pub component: usize,
    pub label: u8,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index: Option<i64>,
    pub representative: [f64; 2],
    pub cells: usize,
}

/// Grid file. `labels` is row-major (real part fastest) with the legend
/// 0 Range, 1 EssentialHole, 2 FredholmHole, 3 Resolvent, 4 Unbounded.
/// `hole_indices` lists the FredholmHole components.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    #[serde(rename = "box")]
    pub bbox: [f64; 4],
    pub nx: usize,
    pub ny: usize,
    pub labels: Vec<u8>,
    pub hole_indices: Vec<HoleIndexSpec>,
    pub holes: Vec<HoleSpec>,
    pub range_tolerance: f64,
    pub grid_step: f64,
}

impl GridSpec {
    pub fn from_grid(g: &SpectrumGrid<f64>) -> Self {
        GridSpec {
            bbox: g.bbox.as_array(),
            nx: g.nx,
            ny: g.ny,
            labels: g.labels.iter().map(|l| l.code()).collect(),
            hole_indices: g
                .holes
                .iter()
                .filter(|h| h.label == CellLabel::FredholmHole)
                .map(|h| HoleIndexSpec { component: h.component, index: h.index.expect("Fredholm hole has an index") })
                .collect(),
            holes: g
                .holes
                .iter()
                .map(|h| HoleSpec {
                    component: h.component,
                    label: h.label.code(),
                    index: h.index,
                    representative: [h.representative.re, h.representative.im],
                    cells: h.cells,
                })
                .collect(),
            range_tolerance: g.range_tolerance,
            grid_step: g.grid_step,
        }
    }

    /// Checks shape and legend of a parsed grid file.
    pub fn validate(&self) -> Result<()> {
        SpectrumBox::new(self.bbox[0], self.bbox[1], self.bbox[2], self.bbox[3])?;
        if self.labels.len() != self.nx * self.ny {
            return Err(WhError::Parse(format!("{} labels for a {}x{} grid", self.labels.len(), self.nx, self.ny)));
        }
        if let Some(bad) = self.labels.iter().find(|&&l| CellLabel::from_code(l).is_none()) {
            return Err(WhError::Parse(format!("unknown label {bad}")));
        }
        Ok(())
    }
}

/// `re,im,label,index` per cell in row-major order; `index` is empty
/// outside Fredholm holes and resolvent holes.
pub fn grid_csv(g: &SpectrumGrid<f64>) -> String {
    let mut out = String::from("re,im,label,index\n");
    for j in 0..g.ny {
        for i in 0..g.nx {
            let c = g.center(i, j);
            let index = g.cell_index(i, j).map(|n| n.to_string()).unwrap_or_default();
            writeln!(out, "{},{},{},{}", c.re, c.im, g.label(i, j).code(), index).expect("write to string");
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InclusionSpec {
    pub passes: bool,
    pub range_outside_sigma: usize,
    pub sigma_outside_hull: usize,
    pub inflation: f64,
    pub sigma_e_connected: bool,
    pub sigma_connected: bool,
}

impl From<&InclusionReport> for InclusionSpec {
    fn from(r: &InclusionReport) -> Self {
        InclusionSpec {
            passes: r.passes(),
            range_outside_sigma: r.range_outside_sigma,
            sigma_outside_hull: r.sigma_outside_hull,
            inflation: r.inflation,
            sigma_e_connected: r.sigma_e_connected,
            sigma_connected: r.sigma_connected,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexSpec {
    pub re: f64,
    pub im: f64,
}

impl From<C<f64>> for ComplexSpec {
    fn from(c: C<f64>) -> Self {
        ComplexSpec { re: c.re, im: c.im }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RootSpec {
    pub re: f64,
    pub im: f64,
    /// `inside`, `on` or `outside` the unit circle.
    pub class: String,
}

pub fn roots_spec(rs: &RootSet<f64>) -> Vec<RootSpec> {
    rs.roots
        .iter()
        .map(|r| RootSpec {
            re: r.value.re,
            im: r.value.im,
            class: serde_json::to_value(r.location).expect("enum").as_str().expect("string").to_string(),
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorizationSpec {
    pub w: i64,
    pub constant: ComplexSpec,
    pub roots: Vec<RootSpec>,
    /// Ascending powers of `z`.
    pub plus_factor: Vec<ComplexSpec>,
    /// Ascending powers of `1/z`.
    pub minus_factor: Vec<ComplexSpec>,
}

impl FactorizationSpec {
    pub fn new(f: &FactorizationResult<f64>, roots: &RootSet<f64>) -> Self {
        FactorizationSpec {
            w: f.w,
            constant: f.constant.into(),
            roots: roots_spec(roots),
            plus_factor: f.plus_factor.iter().map(|&c| c.into()).collect(),
            minus_factor: f.minus_factor.iter().map(|&c| c.into()).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelEntrySpec {
    pub index: i64,
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelVectorSpec {
    pub residual: f64,
    pub entries: Vec<KernelEntrySpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelSpec {
    pub w: i64,
    pub dim_ker: usize,
    pub dim_coker: usize,
    pub vectors: Vec<KernelVectorSpec>,
}

impl From<&KernelCokernel<f64>> for KernelSpec {
    fn from(k: &KernelCokernel<f64>) -> Self {
        KernelSpec {
            w: k.w,
            dim_ker: k.dim_ker,
            dim_coker: k.dim_coker,
            vectors: k
                .kernel_basis
                .iter()
                .zip(&k.residuals)
                .map(|(v, &residual)| KernelVectorSpec {
                    residual,
                    entries: v
                        .entries()
                        .iter()
                        .map(|(e, c)| KernelEntrySpec { index: e.0[0], re: c.re, im: c.im })
                        .collect(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnimodularSpec {
    pub verdict: String,
    pub distance: f64,
    pub conj_distance: f64,
    pub winding: i64,
}

impl From<&UnimodularReport<f64>> for UnimodularSpec {
    fn from(r: &UnimodularReport<f64>) -> Self {
        UnimodularSpec {
            verdict: format!("{:?}", r.verdict),
            distance: r.distance,
            conj_distance: r.conj_distance,
            winding: r.winding,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HankelSpec {
    pub size: usize,
    pub singular_values: Vec<f64>,
    pub tail_bound: f64,
    pub nehari_distance: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unimodular: Option<UnimodularSpec>,
}

impl HankelSpec {
    pub fn new(h: &HankelSpectrum<f64>, unimodular: Option<&UnimodularReport<f64>>) -> Self {
        HankelSpec {
            size: h.size,
            singular_values: h.singular_values.clone(),
            tail_bound: h.tail_bound,
            nehari_distance: h.singular_values.first().copied().unwrap_or(0.0),
            unimodular: unimodular.map(Into::into),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormSpec {
    pub sizes: Vec<usize>,
    pub norms: Vec<f64>,
    /// `[lower, upper]` bracket of `‖ǩ‖_∞`.
    pub sup_norm: [f64; 2],
}
