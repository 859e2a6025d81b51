//! One checker per inequality in the catalog. Every checker computes LHS
//! and RHS as Hermitian matrices (or scalars) and reports the Loewner
//! margin `lambda_min(RHS - LHS)` together with the outcome of each
//! hypothesis check.
//!
//! Hypothesis failures never abort a run: they are recorded as flags so
//! that hypothesis-violating inputs can be used to demonstrate why the
//! hypotheses are needed.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{OplabError, Result};
use crate::fields::{
    check_spectrum_window, quadrature_nodes, MeasureKind, MeasureSpec, OperatorField,
    QuadratureRule,
};
use crate::matrix::{
    kron, loewner_margin, sym_tensor, tensor_power2, HermitianMatrix, SpectrumWindow,
    LOEWNER_REL_TOL,
};
use crate::means::{
    check_super_multiplicative, connection_apply, default_supermult_grid, scalar_connection,
    ConnectionSpec, RepresentingFunction,
};
use crate::scalar::{linear_grid, ScalarExpr};

const PRECONDITION_GRID: usize = 256;
const EQUALITY_SLACK: f64 = 1e-12;

// ---------------------------------------------------------------------------
// Case identifiers
// ---------------------------------------------------------------------------

/// CLI-facing identifiers for every inequality in the catalog.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CaseId {
    Thm32,
    Cor33,
    Cor34,
    Cor35,
    Eq36,
    Thm45,
    Cor46,
    Thm51,
    Cor52,
    Cor53,
    GrussTensor,
    Thm54,
    Cor55,
    PowerFinal,
    Lem31,
    Lem43,
    Lem44,
    Eq11,
    Eq12,
    Thm11Hadamard,
}

impl CaseId {
    pub const ALL: [CaseId; 20] = [
        CaseId::Thm32,
        CaseId::Cor33,
        CaseId::Cor34,
        CaseId::Cor35,
        CaseId::Eq36,
        CaseId::Thm45,
        CaseId::Cor46,
        CaseId::Thm51,
        CaseId::Cor52,
        CaseId::Cor53,
        CaseId::GrussTensor,
        CaseId::Thm54,
        CaseId::Cor55,
        CaseId::PowerFinal,
        CaseId::Lem31,
        CaseId::Lem43,
        CaseId::Lem44,
        CaseId::Eq11,
        CaseId::Eq12,
        CaseId::Thm11Hadamard,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            CaseId::Thm32 => "THM32",
            CaseId::Cor33 => "COR33",
            CaseId::Cor34 => "COR34",
            CaseId::Cor35 => "COR35",
            CaseId::Eq36 => "EQ36",
            CaseId::Thm45 => "THM45",
            CaseId::Cor46 => "COR46",
            CaseId::Thm51 => "THM51",
            CaseId::Cor52 => "COR52",
            CaseId::Cor53 => "COR53",
            CaseId::GrussTensor => "GRUSS_TENSOR",
            CaseId::Thm54 => "THM54",
            CaseId::Cor55 => "COR55",
            CaseId::PowerFinal => "POWER_FINAL",
            CaseId::Lem31 => "LEM31",
            CaseId::Lem43 => "LEM43",
            CaseId::Lem44 => "LEM44",
            CaseId::Eq11 => "EQ11",
            CaseId::Eq12 => "EQ12",
            CaseId::Thm11Hadamard => "THM11_HADAMARD",
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CaseId {
    type Err = OplabError;
    fn from_str(s: &str) -> Result<Self> {
        CaseId::ALL
            .iter()
            .copied()
            .find(|c| c.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| OplabError::UnknownCase(s.to_string()))
    }
}

impl Serialize for CaseId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for CaseId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        CaseId::from_str(&s).map_err(serde::de::Error::custom)
    }
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FlagStatus {
    Pass,
    Fail,
    /// A hypothesis the artifact cannot certify (e.g. operator monotonicity
    /// of a custom representing function); reported, never fatal.
    Unverified,
}

/// Outcome of one precondition check.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HypothesisFlag {
    pub name: String,
    pub status: FlagStatus,
    pub detail: String,
}

impl HypothesisFlag {
    fn pass(name: &str, detail: impl Into<String>) -> Self {
        HypothesisFlag {
            name: name.into(),
            status: FlagStatus::Pass,
            detail: detail.into(),
        }
    }

    fn fail(name: &str, detail: impl Into<String>) -> Self {
        HypothesisFlag {
            name: name.into(),
            status: FlagStatus::Fail,
            detail: detail.into(),
        }
    }

    fn check(name: &str, ok: bool, detail: impl Into<String>) -> Self {
        if ok {
            Self::pass(name, detail)
        } else {
            Self::fail(name, detail)
        }
    }
}

/// Outcome of one inequality check.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerificationReport {
    pub case_id: CaseId,
    /// The Kantorovich-type constant used on the RHS, when the case has one.
    #[serde(rename = "constant")]
    pub constant_used: Option<f64>,
    /// `lambda_min(RHS - LHS)`.
    pub margin: f64,
    pub pass: bool,
    pub lhs_spectrum: Vec<f64>,
    pub rhs_spectrum: Vec<f64>,
    pub hypothesis_flags: Vec<HypothesisFlag>,
    pub seed: Option<u64>,
}

impl VerificationReport {
    fn from_loewner(
        case_id: CaseId,
        constant: Option<f64>,
        lhs: &HermitianMatrix,
        rhs: &HermitianMatrix,
        hypothesis_flags: Vec<HypothesisFlag>,
    ) -> Result<Self> {
        let margin = loewner_margin(lhs, rhs)?;
        let lhs_spectrum = lhs.eig()?.eigenvalues;
        let rhs_spectrum = rhs.eig()?.eigenvalues;
        let mut report = VerificationReport {
            case_id,
            constant_used: constant,
            margin,
            pass: false,
            lhs_spectrum,
            rhs_spectrum,
            hypothesis_flags,
            seed: None,
        };
        report.apply_tolerance(LOEWNER_REL_TOL);
        Ok(report)
    }

    fn from_scalars(
        case_id: CaseId,
        constant: Option<f64>,
        lhs: f64,
        rhs: f64,
        hypothesis_flags: Vec<HypothesisFlag>,
    ) -> Self {
        let mut report = VerificationReport {
            case_id,
            constant_used: constant,
            margin: rhs - lhs,
            pass: false,
            lhs_spectrum: vec![lhs],
            rhs_spectrum: vec![rhs],
            hypothesis_flags,
            seed: None,
        };
        report.apply_tolerance(LOEWNER_REL_TOL);
        report
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn rhs_norm(&self) -> f64 {
        self.rhs_spectrum.iter().fold(0.0f64, |m, &l| m.max(l.abs()))
    }

    /// Recompute `pass` under a different relative tolerance.
    pub fn apply_tolerance(&mut self, rel_tol: f64) {
        self.pass = self.margin >= -rel_tol * (1.0 + self.rhs_norm());
    }

    pub fn hypotheses_ok(&self) -> bool {
        self.hypothesis_flags
            .iter()
            .all(|f| f.status != FlagStatus::Fail)
    }

    /// Exit-code contract: 0 pass, 1 margin violation, 2 hypothesis failure.
    pub fn exit_code(&self) -> i32 {
        if !self.hypotheses_ok() {
            2
        } else if !self.pass {
            1
        } else {
            0
        }
    }
}

// ---------------------------------------------------------------------------
// Case definitions
// ---------------------------------------------------------------------------

/// Which constant a case pins on its right-hand side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstantKind {
    /// `(a^2 + b^2) / (2ab)` — the tensor-product constant.
    Tensor,
    /// `(a + b)^2 / (4ab)` — the classical scalar constant.
    Classical,
}

impl ConstantKind {
    pub fn eval(&self, w: &SpectrumWindow) -> f64 {
        match self {
            ConstantKind::Tensor => w.tensor_constant(),
            ConstantKind::Classical => w.classical_constant(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum CaseHypothesis {
    CountingMeasure,
    NormalizedMeasure,
    ScalarWeights,
    UniformWeights,
    ProductBound,
    RangeCondition,
    SuperMultiplicative,
    MeanNormalized,
    WindowContainsOne,
    OperatorMonotone,
}

/// One row of the weighted tensor-Kantorovich family: the two scalar
/// functions applied inside the weighted integrals, the constant, and the
/// hypotheses the instance must satisfy.
#[derive(Clone, Debug)]
pub struct KantorovichCase {
    pub case_id: CaseId,
    pub f_left: ScalarExpr,
    pub f_right: ScalarExpr,
    pub constant: ConstantKind,
    hypotheses: Vec<CaseHypothesis>,
    rep: Option<RepresentingFunction>,
}

/// Weight field for the engine: either an explicit operator field or the
/// pointwise construction `W_t = g(A_t)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightSpec {
    Field(OperatorField),
    FunctionOfA(ScalarExpr),
}

impl From<OperatorField> for WeightSpec {
    fn from(f: OperatorField) -> Self {
        WeightSpec::Field(f)
    }
}

impl KantorovichCase {
    fn base(case_id: CaseId, generator: ScalarExpr, extra: &[CaseHypothesis]) -> Self {
        KantorovichCase {
            case_id,
            f_right: generator.compose_recip(),
            f_left: generator,
            constant: ConstantKind::Tensor,
            hypotheses: extra.to_vec(),
            rep: None,
        }
    }

    /// Weighted tensor Kantorovich inequality, operator weights.
    pub fn thm32() -> Self {
        Self::base(CaseId::Thm32, ScalarExpr::Identity, &[])
    }

    /// Discrete (counting-measure) instance.
    pub fn cor33() -> Self {
        Self::base(CaseId::Cor33, ScalarExpr::Identity, &[CaseHypothesis::CountingMeasure])
    }

    /// Scalar weights `W_t = w(t) I`.
    pub fn cor34() -> Self {
        Self::base(CaseId::Cor34, ScalarExpr::Identity, &[CaseHypothesis::ScalarWeights])
    }

    /// Discrete scalar weights.
    pub fn cor35() -> Self {
        Self::base(
            CaseId::Cor35,
            ScalarExpr::Identity,
            &[CaseHypothesis::CountingMeasure, CaseHypothesis::ScalarWeights],
        )
    }

    /// Uniform weights `w_i = 1/n`: the reverse AM-HM form.
    pub fn eq36() -> Self {
        Self::base(
            CaseId::Eq36,
            ScalarExpr::Identity,
            &[
                CaseHypothesis::CountingMeasure,
                CaseHypothesis::ScalarWeights,
                CaseHypothesis::UniformWeights,
            ],
        )
    }

    /// General `f` with `f(x) f(1/x) <= 1` and the range condition.
    pub fn thm51(f: ScalarExpr) -> Self {
        Self::base(
            CaseId::Thm51,
            f,
            &[CaseHypothesis::ProductBound, CaseHypothesis::RangeCondition],
        )
    }

    /// `f` as in the general case with weights `W_t = g(A_t)`.
    pub fn cor52(f: ScalarExpr, g: ScalarExpr) -> (Self, WeightSpec) {
        let mut case = Self::base(
            CaseId::Cor52,
            f,
            &[CaseHypothesis::ProductBound, CaseHypothesis::RangeCondition],
        );
        case.case_id = CaseId::Cor52;
        (case, WeightSpec::FunctionOfA(g))
    }

    /// Power weights `W_t = A_t^lambda` around the plain product pair.
    pub fn cor53(lambda: f64) -> (Self, WeightSpec) {
        let case = Self::base(CaseId::Cor53, ScalarExpr::Identity, &[]);
        (case, WeightSpec::FunctionOfA(ScalarExpr::Power { alpha: lambda }))
    }

    /// `lambda = 1` with a normalized measure: the tensor Gruss inequality.
    pub fn gruss_tensor() -> (Self, WeightSpec) {
        let case = Self::base(
            CaseId::GrussTensor,
            ScalarExpr::Identity,
            &[CaseHypothesis::NormalizedMeasure],
        );
        (case, WeightSpec::FunctionOfA(ScalarExpr::Identity))
    }

    /// Super-multiplicative operator monotone `f` with `f(1) = 1`.
    pub fn thm54(f: RepresentingFunction) -> Result<Self> {
        f.validate()?;
        let mut case = Self::base(
            CaseId::Thm54,
            f.to_expr(),
            &[
                CaseHypothesis::SuperMultiplicative,
                CaseHypothesis::MeanNormalized,
                CaseHypothesis::WindowContainsOne,
                CaseHypothesis::OperatorMonotone,
            ],
        );
        case.rep = Some(f);
        Ok(case)
    }

    /// `f(x) = x^alpha`, `alpha in [-1, 1]`, weights `W_t = g(A_t)`.
    pub fn cor55(alpha: f64, g: ScalarExpr) -> Result<(Self, WeightSpec)> {
        if !(-1.0..=1.0).contains(&alpha) {
            return Err(OplabError::InvalidInput(format!(
                "COR55 requires alpha in [-1, 1], got {alpha}"
            )));
        }
        let case = Self::base(
            CaseId::Cor55,
            ScalarExpr::Power { alpha },
            &[CaseHypothesis::WindowContainsOne],
        );
        Ok((case, WeightSpec::FunctionOfA(g)))
    }

    /// The closing power inequality: `g(x) = x^lambda` in the previous case.
    pub fn power_final(alpha: f64, lambda: f64) -> Result<(Self, WeightSpec)> {
        if !(-1.0..=1.0).contains(&alpha) {
            return Err(OplabError::InvalidInput(format!(
                "POWER_FINAL requires alpha in [-1, 1], got {alpha}"
            )));
        }
        let case = Self::base(
            CaseId::PowerFinal,
            ScalarExpr::Power { alpha },
            &[CaseHypothesis::WindowContainsOne],
        );
        Ok((case, WeightSpec::FunctionOfA(ScalarExpr::Power { alpha: lambda })))
    }
}

// ---------------------------------------------------------------------------
// Shared hypothesis checks
// ---------------------------------------------------------------------------

fn window_flag(
    name: &str,
    field: &OperatorField,
    window: &SpectrumWindow,
    quad: &QuadratureRule,
) -> Result<HypothesisFlag> {
    let check = check_spectrum_window(field, window, quad)?;
    Ok(if check.ok {
        HypothesisFlag::pass(
            name,
            format!("all sampled spectra in [{}, {}]", window.a(), window.b()),
        )
    } else {
        HypothesisFlag::fail(
            name,
            format!(
                "eigenvalue {} at t = {} escapes [{}, {}]",
                check.worst_eigenvalue.unwrap_or(f64::NAN),
                check.worst_t.unwrap_or(f64::NAN),
                window.a(),
                window.b()
            ),
        )
    })
}

fn matrix_window_flag(name: &str, m: &HermitianMatrix, window: &SpectrumWindow) -> Result<HypothesisFlag> {
    let spec = m.eig()?.eigenvalues;
    let bad = spec
        .iter()
        .find(|&&l| !window.contains(l, crate::fields::WINDOW_TOL));
    Ok(match bad {
        None => HypothesisFlag::pass(name, "spectrum inside the window"),
        Some(l) => HypothesisFlag::fail(
            name,
            format!("eigenvalue {l} escapes [{}, {}]", window.a(), window.b()),
        ),
    })
}

fn psd_flag(name: &str, m: &HermitianMatrix) -> Result<HypothesisFlag> {
    let min = m.min_eigenvalue()?;
    let ok = min >= -crate::matrix::PSD_TOL * (1.0 + m.max_abs());
    Ok(HypothesisFlag::check(
        name,
        ok,
        format!("min eigenvalue {min:.3e}"),
    ))
}

fn supermult_flag(f: &RepresentingFunction) -> HypothesisFlag {
    match check_super_multiplicative(f, &default_supermult_grid()) {
        Ok(report) if report.is_empty() => {
            HypothesisFlag::pass("super_multiplicative", "no violations on the default grid")
        }
        Ok(report) => {
            let v = report.worst().expect("nonempty violations");
            HypothesisFlag::fail(
                "super_multiplicative",
                format!(
                    "super-multiplicativity violated at ({}, {}): f(xy) = {} < f(x)f(y) = {}",
                    v.x, v.y, v.lhs, v.rhs
                ),
            )
        }
        Err(e) => HypothesisFlag::fail("super_multiplicative", format!("check failed: {e}")),
    }
}

fn connection_flags(sigma: &ConnectionSpec, flags: &mut Vec<HypothesisFlag>) {
    flags.push(supermult_flag(sigma.f()));
    let at_one = sigma.at_one();
    flags.push(HypothesisFlag::check(
        "mean_normalized",
        (at_one - 1.0).abs() <= EQUALITY_SLACK,
        format!("f(1) = {at_one}"),
    ));
    if sigma.f().is_builtin() {
        flags.push(HypothesisFlag::pass(
            "operator_monotone",
            "built-in representing function",
        ));
    } else {
        flags.push(HypothesisFlag {
            name: "operator_monotone".into(),
            status: FlagStatus::Unverified,
            detail: "unverified hypothesis: custom representing functions are only grid-checked"
                .into(),
        });
    }
}

// ---------------------------------------------------------------------------
// The engine
// ---------------------------------------------------------------------------

/// Run one case of the weighted tensor-Kantorovich family:
/// `LHS = (int W^{1/2} f_left(A) W^{1/2}) (x)_s (int W^{1/2} f_right(A) W^{1/2})`
/// against `RHS = constant * (int W)^{(x) 2}`.
pub fn kantorovich_engine(
    case: &KantorovichCase,
    field_a: &OperatorField,
    weight: &WeightSpec,
    window: &SpectrumWindow,
    measure: &MeasureSpec,
    quad: &QuadratureRule,
) -> Result<VerificationReport> {
    let dim = field_a.dim();
    if let WeightSpec::Field(wf) = weight {
        if wf.dim() != dim {
            return Err(OplabError::DimensionMismatch {
                left: wf.dim(),
                right: dim,
            });
        }
    }

    let nodes = quadrature_nodes(field_a, measure, quad)?;
    let mut flags = Vec::new();
    flags.push(window_flag("spectrum_window", field_a, window, quad)?);

    // Weight positivity.
    match weight {
        WeightSpec::Field(wf) => {
            let mut worst: f64 = f64::INFINITY;
            for node in &nodes {
                let w = wf.sample(node.t)?;
                worst = worst.min(w.min_eigenvalue()? / (1.0 + w.max_abs()));
            }
            flags.push(HypothesisFlag::check(
                "weights_psd",
                worst >= -crate::matrix::PSD_TOL,
                format!("worst relative min eigenvalue {worst:.3e}"),
            ));
        }
        WeightSpec::FunctionOfA(g) => {
            let ok = g.nonneg_on(window.a(), window.b(), PRECONDITION_GRID, EQUALITY_SLACK)?;
            flags.push(HypothesisFlag::check(
                "weights_psd",
                ok,
                "weight function g must be nonnegative on the window",
            ));
        }
    }

    for hyp in &case.hypotheses {
        match hyp {
            CaseHypothesis::CountingMeasure => {
                let ok = matches!(measure.kind, MeasureKind::Counting) && field_a.is_discrete();
                flags.push(HypothesisFlag::check(
                    "counting_measure",
                    ok,
                    "case is the discrete counting-measure instance",
                ));
            }
            CaseHypothesis::NormalizedMeasure => {
                flags.push(HypothesisFlag::check(
                    "normalized_measure",
                    measure.normalized,
                    "case requires total measure 1",
                ));
            }
            CaseHypothesis::ScalarWeights => {
                flags.push(scalar_weights_flag(weight, &nodes, field_a)?);
            }
            CaseHypothesis::UniformWeights => {
                flags.push(uniform_weights_flag(weight, &nodes, field_a)?);
            }
            CaseHypothesis::ProductBound => {
                flags.push(product_bound_flag(case, window)?);
            }
            CaseHypothesis::RangeCondition => {
                flags.push(range_condition_flag(case, window)?);
            }
            CaseHypothesis::SuperMultiplicative => {
                if let Some(rep) = &case.rep {
                    flags.push(supermult_flag(rep));
                }
            }
            CaseHypothesis::MeanNormalized => {
                if let Some(rep) = &case.rep {
                    let at_one = rep.eval(1.0)?;
                    flags.push(HypothesisFlag::check(
                        "mean_normalized",
                        (at_one - 1.0).abs() <= EQUALITY_SLACK,
                        format!("f(1) = {at_one}"),
                    ));
                }
            }
            CaseHypothesis::WindowContainsOne => {
                flags.push(HypothesisFlag::check(
                    "window_contains_one",
                    window.contains(1.0, EQUALITY_SLACK),
                    format!("1 in [{}, {}]", window.a(), window.b()),
                ));
            }
            CaseHypothesis::OperatorMonotone => {
                if let Some(rep) = &case.rep {
                    if rep.is_builtin() {
                        flags.push(HypothesisFlag::pass(
                            "operator_monotone",
                            "built-in representing function",
                        ));
                    } else {
                        flags.push(HypothesisFlag {
                            name: "operator_monotone".into(),
                            status: FlagStatus::Unverified,
                            detail:
                                "unverified hypothesis: custom representing functions are only grid-checked"
                                    .into(),
                        });
                    }
                }
            }
        }
    }

    let (l_left, l_right, w_sum) =
        engine_integrals(case, field_a, weight, &nodes)?;
    let lhs = sym_tensor(&l_left, &l_right)?;
    let constant = case.constant.eval(window);
    let rhs = tensor_power2(&w_sum)?.scale(constant);
    VerificationReport::from_loewner(case.case_id, Some(constant), &lhs, &rhs, flags)
}

/// The three integrals behind the engine (shared with the sharpness search):
/// left transform, right transform and the plain weight integral.
pub(crate) fn engine_integrals(
    case: &KantorovichCase,
    field_a: &OperatorField,
    weight: &WeightSpec,
    nodes: &[crate::fields::QuadNode],
) -> Result<(HermitianMatrix, HermitianMatrix, HermitianMatrix)> {
    let dim = field_a.dim();
    let mut l_left = HermitianMatrix::zero(dim);
    let mut l_right = HermitianMatrix::zero(dim);
    let mut w_sum = HermitianMatrix::zero(dim);
    for node in nodes {
        let a_t = field_a.sample(node.t)?;
        let w_t = match weight {
            WeightSpec::Field(wf) => wf.sample(node.t)?,
            WeightSpec::FunctionOfA(g) => a_t.apply_expr(g)?,
        };
        let w_half = sqrt_clamped(&w_t)?;
        let fl = a_t.apply_expr(&case.f_left)?;
        let fr = a_t.apply_expr(&case.f_right)?;
        l_left = &l_left + &w_half.sandwich(&fl)?.scale(node.weight);
        l_right = &l_right + &w_half.sandwich(&fr)?.scale(node.weight);
        w_sum = &w_sum + &w_t.scale(node.weight);
    }
    Ok((l_left, l_right, w_sum))
}

/// Square root with negative eigenvalues clamped to zero. Hypothesis flags
/// already record any PSD violation; clamping keeps flagged runs computable.
fn sqrt_clamped(m: &HermitianMatrix) -> Result<HermitianMatrix> {
    Ok(m.eig()?.apply(|l| l.max(0.0).sqrt()))
}

fn scalar_weights_flag(
    weight: &WeightSpec,
    nodes: &[crate::fields::QuadNode],
    field_a: &OperatorField,
) -> Result<HypothesisFlag> {
    let d = field_a.dim() as f64;
    match weight {
        WeightSpec::FunctionOfA(_) => Ok(HypothesisFlag::fail(
            "scalar_weights",
            "case requires explicit scalar weights w_t I",
        )),
        WeightSpec::Field(wf) => {
            let mut worst: f64 = 0.0;
            for node in nodes {
                let w = wf.sample(node.t)?;
                let mean = w.trace() / d;
                let dev = (&w - &HermitianMatrix::scaled_identity(w.dim(), mean)).max_abs();
                worst = worst.max(dev / (1.0 + w.max_abs()));
            }
            Ok(HypothesisFlag::check(
                "scalar_weights",
                worst <= EQUALITY_SLACK,
                format!("max relative deviation from w I: {worst:.3e}"),
            ))
        }
    }
}

fn uniform_weights_flag(
    weight: &WeightSpec,
    nodes: &[crate::fields::QuadNode],
    field_a: &OperatorField,
) -> Result<HypothesisFlag> {
    let n = nodes.len() as f64;
    match weight {
        WeightSpec::FunctionOfA(_) => Ok(HypothesisFlag::fail(
            "uniform_weights",
            "case requires the uniform weights (1/n) I",
        )),
        WeightSpec::Field(wf) => {
            let target = HermitianMatrix::scaled_identity(field_a.dim(), 1.0 / n);
            let mut worst: f64 = 0.0;
            for node in nodes {
                worst = worst.max((&wf.sample(node.t)? - &target).max_abs());
            }
            Ok(HypothesisFlag::check(
                "uniform_weights",
                worst <= EQUALITY_SLACK,
                format!("max deviation from (1/n) I: {worst:.3e}"),
            ))
        }
    }
}

fn product_bound_flag(case: &KantorovichCase, window: &SpectrumWindow) -> Result<HypothesisFlag> {
    let mut worst = f64::NEG_INFINITY;
    let mut worst_x = window.a();
    for x in linear_grid(window.a(), window.b(), PRECONDITION_GRID) {
        let p = case.f_left.eval(x)? * case.f_right.eval(x)?;
        if p > worst {
            worst = p;
            worst_x = x;
        }
    }
    Ok(HypothesisFlag::check(
        "product_bound",
        worst <= 1.0 + EQUALITY_SLACK,
        format!("max f(x) f(1/x) = {worst} at x = {worst_x}"),
    ))
}

fn range_condition_flag(case: &KantorovichCase, window: &SpectrumWindow) -> Result<HypothesisFlag> {
    let (a, b) = (window.a(), window.b());
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for x in linear_grid(a, b, PRECONDITION_GRID) {
        let y = case.f_left.eval(x)?;
        lo = lo.min(y);
        hi = hi.max(y);
    }
    let tol = 1e-9;
    let in_window = lo >= a - tol && hi <= b + tol;
    let in_reciprocal = lo >= 1.0 / b - tol && hi <= 1.0 / a + tol;
    Ok(HypothesisFlag::check(
        "range_condition",
        in_window || in_reciprocal,
        format!("f([a, b]) spans [{lo}, {hi}]"),
    ))
}

// ---------------------------------------------------------------------------
// Standalone verifiers
// ---------------------------------------------------------------------------

/// `A (x) B^{-1} + A^{-1} (x) B <= ((a^2 + b^2)/(ab)) I` for spectra in the
/// window.
pub fn verify_lemma31(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    window: &SpectrumWindow,
) -> Result<VerificationReport> {
    let flags = vec![
        matrix_window_flag("spectrum_window", a, window)?,
        matrix_window_flag("spectrum_window_b", b, window)?,
    ];
    let a_inv = a.apply_expr(&ScalarExpr::Recip)?;
    let b_inv = b.apply_expr(&ScalarExpr::Recip)?;
    let lhs = &kron(a, &b_inv)? + &kron(&a_inv, b)?;
    let k = window.pair_bound();
    let rhs = HermitianMatrix::scaled_identity(lhs.dim(), k);
    VerificationReport::from_loewner(CaseId::Lem31, Some(k), &lhs, &rhs, flags)
}

/// Kantorovich inequality with the product replaced by an operator mean.
/// `case_id` selects the continuous statement (THM45) or its discrete
/// counting-measure instance (COR46).
#[allow(clippy::too_many_arguments)]
pub fn verify_mean_kantorovich(
    case_id: CaseId,
    field_a: &OperatorField,
    field_b: &OperatorField,
    weight: &WeightSpec,
    sigma: &ConnectionSpec,
    window: &SpectrumWindow,
    measure: &MeasureSpec,
    quad: &QuadratureRule,
) -> Result<VerificationReport> {
    if !matches!(case_id, CaseId::Thm45 | CaseId::Cor46) {
        return Err(OplabError::InvalidInput(format!(
            "verify_mean_kantorovich handles THM45/COR46, got {case_id}"
        )));
    }
    let dim = field_a.dim();
    if field_b.dim() != dim {
        return Err(OplabError::DimensionMismatch {
            left: field_b.dim(),
            right: dim,
        });
    }

    let nodes = quadrature_nodes(field_a, measure, quad)?;
    let mut flags = Vec::new();
    flags.push(window_flag("spectrum_window", field_a, window, quad)?);
    flags.push(window_flag("spectrum_window_b", field_b, window, quad)?);
    match weight {
        WeightSpec::Field(wf) => {
            let mut worst = f64::INFINITY;
            for node in &nodes {
                let w = wf.sample(node.t)?;
                worst = worst.min(w.min_eigenvalue()? / (1.0 + w.max_abs()));
            }
            flags.push(HypothesisFlag::check(
                "weights_psd",
                worst >= -crate::matrix::PSD_TOL,
                format!("worst relative min eigenvalue {worst:.3e}"),
            ));
        }
        WeightSpec::FunctionOfA(g) => {
            let ok = g.nonneg_on(window.a(), window.b(), PRECONDITION_GRID, EQUALITY_SLACK)?;
            flags.push(HypothesisFlag::check("weights_psd", ok, "g >= 0 on the window"));
        }
    }
    connection_flags(sigma, &mut flags);
    if case_id == CaseId::Cor46 {
        let ok = matches!(measure.kind, MeasureKind::Counting) && field_a.is_discrete();
        flags.push(HypothesisFlag::check(
            "counting_measure",
            ok,
            "case is the discrete counting-measure instance",
        ));
    }

    let mut m_sum = HermitianMatrix::zero(dim);
    let mut n_sum = HermitianMatrix::zero(dim);
    let mut w_sum = HermitianMatrix::zero(dim);
    for node in &nodes {
        let a_t = field_a.sample(node.t)?;
        let b_t = field_b.sample(node.t)?;
        let w_t = match weight {
            WeightSpec::Field(wf) => wf.sample(node.t)?,
            WeightSpec::FunctionOfA(g) => a_t.apply_expr(g)?,
        };
        let w_half = sqrt_clamped(&w_t)?;
        let mean = connection_apply(sigma, &a_t, &b_t)?;
        let mean_inv = connection_apply(
            sigma,
            &a_t.apply_expr(&ScalarExpr::Recip)?,
            &b_t.apply_expr(&ScalarExpr::Recip)?,
        )?;
        m_sum = &m_sum + &w_half.sandwich(&mean)?.scale(node.weight);
        n_sum = &n_sum + &w_half.sandwich(&mean_inv)?.scale(node.weight);
        w_sum = &w_sum + &w_t.scale(node.weight);
    }
    let lhs = sym_tensor(&m_sum, &n_sum)?;
    let constant = window.tensor_constant();
    let rhs = tensor_power2(&w_sum)?.scale(constant);
    VerificationReport::from_loewner(case_id, Some(constant), &lhs, &rhs, flags)
}

/// Norm bound `|A sigma B| <= |A| sigma |B|` (scalar margin report).
pub fn verify_lemma43(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    sigma: &ConnectionSpec,
) -> Result<VerificationReport> {
    let flags = vec![psd_flag("psd_a", a)?, psd_flag("psd_b", b)?];
    let lhs = connection_apply(sigma, a, b)?.operator_norm();
    let rhs = scalar_connection(sigma, a.operator_norm(), b.operator_norm());
    Ok(VerificationReport::from_scalars(
        CaseId::Lem43,
        None,
        lhs,
        rhs,
        flags,
    ))
}

/// Tensor super-multiplicativity of a connection:
/// `(A sigma C) (x)_s (B sigma D) <= (A (x)_s B) sigma (C (x)_s D)`.
pub fn verify_lemma44(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    c: &HermitianMatrix,
    d: &HermitianMatrix,
    sigma: &ConnectionSpec,
) -> Result<VerificationReport> {
    let mut flags = vec![
        psd_flag("psd_a", a)?,
        psd_flag("psd_b", b)?,
        psd_flag("psd_c", c)?,
        psd_flag("psd_d", d)?,
    ];
    flags.push(supermult_flag(sigma.f()));
    let lhs = sym_tensor(&connection_apply(sigma, a, c)?, &connection_apply(sigma, b, d)?)?;
    let rhs = connection_apply(sigma, &sym_tensor(a, b)?, &sym_tensor(c, d)?)?;
    VerificationReport::from_loewner(CaseId::Lem44, None, &lhs, &rhs, flags)
}

/// Classical scalar Kantorovich inequality.
pub fn verify_scalar_kantorovich(
    weights: &[f64],
    values: &[f64],
    window: &SpectrumWindow,
) -> Result<VerificationReport> {
    if weights.is_empty() || values.is_empty() {
        return Err(OplabError::InvalidInput(
            "weights and values must be nonempty".into(),
        ));
    }
    if weights.len() != values.len() {
        return Err(OplabError::DimensionMismatch {
            left: weights.len(),
            right: values.len(),
        });
    }
    if values.iter().any(|&v| v <= 0.0) {
        return Err(OplabError::InvalidInput(
            "values must be strictly positive".into(),
        ));
    }
    let tol = crate::fields::WINDOW_TOL;
    let flags = vec![
        HypothesisFlag::check(
            "values_in_window",
            values.iter().all(|&v| window.contains(v, tol)),
            format!("values within [{}, {}]", window.a(), window.b()),
        ),
        HypothesisFlag::check(
            "weights_nonneg",
            weights.iter().all(|&w| w >= 0.0),
            "weights must be nonnegative",
        ),
    ];
    let sw: f64 = weights.iter().sum();
    let swa: f64 = weights.iter().zip(values).map(|(w, a)| w * a).sum();
    let swr: f64 = weights.iter().zip(values).map(|(w, a)| w / a).sum();
    let constant = window.classical_constant();
    Ok(VerificationReport::from_scalars(
        CaseId::Eq11,
        Some(constant),
        swa * swr,
        constant * sw * sw,
        flags,
    ))
}

/// Additive Gruss inequality for a scalar function under the normalized
/// Lebesgue measure on `[alpha, beta]` (midpoint rule, `n` nodes).
pub fn verify_scalar_gruss(
    f: &ScalarExpr,
    interval: (f64, f64),
    window: &SpectrumWindow,
    n: usize,
) -> Result<VerificationReport> {
    let (alpha, beta) = interval;
    if !(alpha.is_finite() && beta.is_finite() && alpha < beta) {
        return Err(OplabError::InvalidInput(format!(
            "gruss interval requires alpha < beta, got [{alpha}, {beta}]"
        )));
    }
    if n == 0 {
        return Err(OplabError::InvalidInput("need at least one node".into()));
    }
    let h = (beta - alpha) / n as f64;
    let w = 1.0 / n as f64; // normalized midpoint weight h / (beta - alpha)
    let mut m1 = 0.0;
    let mut m2 = 0.0;
    let mut range_ok = true;
    let mut worst = 0.0f64;
    for i in 0..n {
        let t = alpha + (i as f64 + 0.5) * h;
        let y = f.eval(t)?;
        if !window.contains(y, 1e-9) {
            range_ok = false;
            worst = y;
        }
        m1 += w * y;
        m2 += w * y * y;
    }
    let flags = vec![
        HypothesisFlag::check(
            "range_in_window",
            range_ok,
            if range_ok {
                format!("a <= f <= b on [{alpha}, {beta}]")
            } else {
                format!("f reaches {worst} outside [{}, {}]", window.a(), window.b())
            },
        ),
        HypothesisFlag::pass("normalized_measure", "measure normalized to mass 1"),
    ];
    let constant = window.classical_constant();
    Ok(VerificationReport::from_scalars(
        CaseId::Eq12,
        Some(constant),
        m2,
        constant * m1 * m1,
        flags,
    ))
}

/// Hadamard-product Kantorovich inequality for finite operator families.
pub fn verify_hadamard_kantorovich(
    a_list: &[HermitianMatrix],
    w_list: &[HermitianMatrix],
    window: &SpectrumWindow,
) -> Result<VerificationReport> {
    if a_list.is_empty() || a_list.len() != w_list.len() {
        return Err(OplabError::InvalidInput(
            "need equal-length nonempty operator and weight lists".into(),
        ));
    }
    let dim = a_list[0].dim();
    if a_list.iter().chain(w_list).any(|m| m.dim() != dim) {
        return Err(OplabError::InvalidInput(
            "all operators must share one dimension".into(),
        ));
    }

    let mut flags = Vec::new();
    for (i, a) in a_list.iter().enumerate() {
        flags.push(matrix_window_flag(&format!("spectrum_window_{i}"), a, window)?);
    }
    for (i, w) in w_list.iter().enumerate() {
        flags.push(psd_flag(&format!("weights_psd_{i}"), w)?);
    }

    let mut s_plus = HermitianMatrix::zero(dim);
    let mut s_minus = HermitianMatrix::zero(dim);
    let mut w_sum = HermitianMatrix::zero(dim);
    for (a, w) in a_list.iter().zip(w_list) {
        let w_half = sqrt_clamped(w)?;
        s_plus = &s_plus + &w_half.sandwich(a)?;
        s_minus = &s_minus + &w_half.sandwich(&a.apply_expr(&ScalarExpr::Recip)?)?;
        w_sum = &w_sum + w;
    }
    use crate::matrix::hadamard;
    let lhs = hadamard(&s_plus, &s_minus)?;
    let constant = window.tensor_constant();
    let rhs = hadamard(&w_sum, &w_sum)?.scale(constant);
    VerificationReport::from_loewner(CaseId::Thm11Hadamard, Some(constant), &lhs, &rhs, flags)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{FieldTerm, MeasureSpec, OperatorField, QuadratureRule};
    use crate::matrix::random_psd;

    fn assert_close(x: f64, y: f64, tol: f64) {
        assert!((x - y).abs() <= tol, "{x} vs {y} (tol {tol})");
    }

    fn window12() -> SpectrumWindow {
        SpectrumWindow::new(1.0, 2.0).unwrap()
    }

    fn scaled_pair(x: f64, y: f64, d: usize) -> OperatorField {
        OperatorField::discrete(vec![
            HermitianMatrix::scaled_identity(d, x),
            HermitianMatrix::scaled_identity(d, y),
        ])
        .unwrap()
    }

    #[test]
    fn case_id_round_trip() {
        for id in CaseId::ALL {
            assert_eq!(CaseId::from_str(id.name()).unwrap(), id);
        }
        assert_eq!(CaseId::from_str("gruss_tensor").unwrap(), CaseId::GrussTensor);
        assert!(CaseId::from_str("THM99").is_err());
        let json = serde_json::to_string(&CaseId::Thm11Hadamard).unwrap();
        assert_eq!(json, "\"THM11_HADAMARD\"");
    }

    #[test]
    fn thm32_projection_witness() {
        // Two-point field aI, bI with complementary projection weights
        // attains the constant: LHS = diag(1, 5/4, 5/4, 1), RHS = (5/4) I.
        let a_field = scaled_pair(1.0, 2.0, 2);
        let weights = OperatorField::discrete(vec![
            HermitianMatrix::diagonal(&[1.0, 0.0]),
            HermitianMatrix::diagonal(&[0.0, 1.0]),
        ])
        .unwrap();
        let report = kantorovich_engine(
            &KantorovichCase::thm32(),
            &a_field,
            &weights.into(),
            &window12(),
            &MeasureSpec::counting(),
            &QuadratureRule::default(),
        )
        .unwrap();
        assert!(report.hypotheses_ok());
        assert!(report.pass);
        assert_close(report.margin, 0.0, 1e-12);
        assert_close(report.constant_used.unwrap(), 1.25, 0.0);
        let expect = [1.0, 1.25, 1.25, 1.0];
        let mut sorted = expect;
        sorted.sort_by(f64::total_cmp);
        for (got, want) in report.lhs_spectrum.iter().zip(sorted) {
            assert_close(*got, want, 1e-12);
        }
        assert!(report.rhs_spectrum.iter().all(|&l| (l - 1.25).abs() < 1e-12));
    }

    #[test]
    fn cor34_scalar_weight_margin() {
        // Half weights: LHS = 1.5 * 0.75 I, RHS = 1.25 I, margin 1/8.
        let a_field = scaled_pair(1.0, 2.0, 2);
        let weights = scaled_pair(0.5, 0.5, 2);
        let report = kantorovich_engine(
            &KantorovichCase::cor34(),
            &a_field,
            &weights.into(),
            &window12(),
            &MeasureSpec::counting(),
            &QuadratureRule::default(),
        )
        .unwrap();
        assert!(report.hypotheses_ok() && report.pass);
        assert_close(report.margin, 0.125, 1e-12);
    }

    #[test]
    fn constant_field_reduces_to_scalar_bound() {
        let c = 1.4;
        let a_field = OperatorField::discrete(vec![HermitianMatrix::scaled_identity(3, c)]).unwrap();
        let weights =
            OperatorField::discrete(vec![random_psd(3, 5).unwrap()]).unwrap();
        let report = kantorovich_engine(
            &KantorovichCase::thm32(),
            &a_field,
            &weights.into(),
            &window12(),
            &MeasureSpec::counting(),
            &QuadratureRule::default(),
        )
        .unwrap();
        assert!(report.pass, "margin {}", report.margin);
        assert!(report.margin >= -1e-12);
    }

    #[test]
    fn eq36_uniform_weight_flags() {
        let a_field = scaled_pair(1.0, 2.0, 2);
        let uniform = scaled_pair(0.5, 0.5, 2);
        let report = kantorovich_engine(
            &KantorovichCase::eq36(),
            &a_field,
            &uniform.into(),
            &window12(),
            &MeasureSpec::counting(),
            &QuadratureRule::default(),
        )
        .unwrap();
        assert!(report.hypotheses_ok());

        let skewed = scaled_pair(0.75, 0.25, 2);
        let report = kantorovich_engine(
            &KantorovichCase::eq36(),
            &a_field,
            &skewed.into(),
            &window12(),
            &MeasureSpec::counting(),
            &QuadratureRule::default(),
        )
        .unwrap();
        assert!(!report.hypotheses_ok());
        assert_eq!(report.exit_code(), 2);
    }

    #[test]
    fn window_violation_is_flagged_not_fatal() {
        let a_field = scaled_pair(1.0, 2.0, 2);
        let weights = scaled_pair(0.5, 0.5, 2);
        let narrow = SpectrumWindow::new(1.0, 1.5).unwrap();
        let report = kantorovich_engine(
            &KantorovichCase::thm32(),
            &a_field,
            &weights.into(),
            &narrow,
            &MeasureSpec::counting(),
            &QuadratureRule::default(),
        )
        .unwrap();
        assert!(!report.hypotheses_ok());
        assert!(report
            .hypothesis_flags
            .iter()
            .any(|f| f.name == "spectrum_window" && f.status == FlagStatus::Fail));
    }

    #[test]
    fn lemma31_examples() {
        let w = window12();
        // Equality witness: A = 1 I, B = 2 I.
        let a = HermitianMatrix::identity(2);
        let b = HermitianMatrix::scaled_identity(2, 2.0);
        let report = verify_lemma31(&a, &b, &w).unwrap();
        assert_close(report.margin, 0.0, 1e-12);
        assert_close(report.constant_used.unwrap(), 2.5, 0.0);
        assert!(report.pass);

        // Degenerate window: A = B = c I gives k = 2, margin 0.
        let wc = SpectrumWindow::new(1.3, 1.3).unwrap();
        let c = HermitianMatrix::scaled_identity(2, 1.3);
        let report = verify_lemma31(&c, &c, &wc).unwrap();
        assert_close(report.margin, 0.0, 1e-12);
        assert_close(report.constant_used.unwrap(), 2.0, 1e-15);

        // A = B = diag(1, 2) in [1, 3]: spectrum {2, 2.5, 2.5, 2}, margin 5/6.
        let d = HermitianMatrix::diagonal(&[1.0, 2.0]);
        let w13 = SpectrumWindow::new(1.0, 3.0).unwrap();
        let report = verify_lemma31(&d, &d, &w13).unwrap();
        assert_close(report.constant_used.unwrap(), 10.0 / 3.0, 1e-15);
        assert_close(report.margin, 5.0 / 6.0, 1e-12);
        let spec = &report.lhs_spectrum;
        assert_close(spec[0], 2.0, 1e-12);
        assert_close(spec[3], 2.5, 1e-12);
    }

    #[test]
    fn mean_kantorovich_worked_instance() {
        // Geometric mean, A = {I, 2I}, B = {2I, I}, W = {I/2, I/2}:
        // LHS = I, RHS = 1.25 I, margin 0.25.
        let a = scaled_pair(1.0, 2.0, 2);
        let b = scaled_pair(2.0, 1.0, 2);
        let w = scaled_pair(0.5, 0.5, 2);
        let report = verify_mean_kantorovich(
            CaseId::Thm45,
            &a,
            &b,
            &w.into(),
            &ConnectionSpec::geometric(),
            &window12(),
            &MeasureSpec::counting(),
            &QuadratureRule::default(),
        )
        .unwrap();
        assert!(report.hypotheses_ok() && report.pass);
        assert_close(report.margin, 0.25, 1e-10);
    }

    #[test]
    fn mean_kantorovich_reduces_to_thm32() {
        // With B = A the run must match THM32 bit for bit.
        let w = window12();
        let samples: Vec<_> = (0..3)
            .map(|i| crate::matrix::random_hermitian_in_window(3, &w, 70 + i).unwrap())
            .collect();
        let weights: Vec<_> = (0..3).map(|i| random_psd(3, 700 + i).unwrap()).collect();
        let a_field = OperatorField::discrete(samples).unwrap();
        let w_field = OperatorField::discrete(weights).unwrap();

        let mean_report = verify_mean_kantorovich(
            CaseId::Thm45,
            &a_field,
            &a_field,
            &WeightSpec::Field(w_field.clone()),
            &ConnectionSpec::geometric(),
            &w,
            &MeasureSpec::counting(),
            &QuadratureRule::default(),
        )
        .unwrap();
        let plain_report = kantorovich_engine(
            &KantorovichCase::thm32(),
            &a_field,
            &WeightSpec::Field(w_field),
            &w,
            &MeasureSpec::counting(),
            &QuadratureRule::default(),
        )
        .unwrap();
        assert_eq!(mean_report.margin.to_bits(), plain_report.margin.to_bits());
        assert_eq!(mean_report.lhs_spectrum, plain_report.lhs_spectrum);
        assert_eq!(mean_report.rhs_spectrum, plain_report.rhs_spectrum);
    }

    #[test]
    fn mean_kantorovich_power_one_is_right_field() {
        // sigma = power(1): A sigma B = B, so the run reduces to THM32 on B.
        let a = scaled_pair(1.0, 1.5, 2);
        let b = scaled_pair(2.0, 1.0, 2);
        let w = scaled_pair(0.5, 0.5, 2);
        let report = verify_mean_kantorovich(
            CaseId::Thm45,
            &a,
            &b,
            &WeightSpec::Field(w.clone()),
            &ConnectionSpec::power(1.0).unwrap(),
            &window12(),
            &MeasureSpec::counting(),
            &QuadratureRule::default(),
        )
        .unwrap();
        let plain = kantorovich_engine(
            &KantorovichCase::thm32(),
            &b,
            &WeightSpec::Field(w),
            &window12(),
            &MeasureSpec::counting(),
            &QuadratureRule::default(),
        )
        .unwrap();
        assert_close(report.margin, plain.margin, 1e-10);
    }

    #[test]
    fn mean_kantorovich_harmonic_is_flagged() {
        let a = scaled_pair(1.0, 2.0, 2);
        let b = scaled_pair(2.0, 1.0, 2);
        let w = scaled_pair(0.5, 0.5, 2);
        let report = verify_mean_kantorovich(
            CaseId::Thm45,
            &a,
            &b,
            &w.into(),
            &ConnectionSpec::harmonic(),
            &window12(),
            &MeasureSpec::counting(),
            &QuadratureRule::default(),
        )
        .unwrap();
        assert!(!report.hypotheses_ok());
        assert_eq!(report.exit_code(), 2);
        let flag = report
            .hypothesis_flags
            .iter()
            .find(|f| f.name == "super_multiplicative")
            .unwrap();
        assert_eq!(flag.status, FlagStatus::Fail);
    }

    #[test]
    fn lemma43_examples() {
        let geo = ConnectionSpec::geometric();
        let a = HermitianMatrix::diagonal(&[1.0, 2.0]);
        let b = HermitianMatrix::diagonal(&[2.0, 1.0]);
        let report = verify_lemma43(&a, &b, &geo).unwrap();
        assert_close(report.lhs_spectrum[0], 2.0f64.sqrt(), 1e-12);
        assert_close(report.rhs_spectrum[0], 2.0, 1e-12);
        assert_close(report.margin, 2.0 - 2.0f64.sqrt(), 1e-12);

        // A = B: norm of A sigma A equals |A|.
        let report = verify_lemma43(&a, &a, &geo).unwrap();
        assert_close(report.margin, 0.0, 1e-12);

        // Scalar multiples of the identity.
        let x = HermitianMatrix::scaled_identity(3, 0.7);
        let y = HermitianMatrix::scaled_identity(3, 1.9);
        let report = verify_lemma43(&x, &y, &geo).unwrap();
        assert_close(report.margin, 0.0, 1e-12);
    }

    #[test]
    fn lemma44_examples() {
        let geo = ConnectionSpec::geometric();
        let i = HermitianMatrix::identity(2);
        let report = verify_lemma44(&i, &i, &i, &i, &geo).unwrap();
        assert_close(report.margin, 0.0, 1e-10);

        // Commuting diagonal quadruple against a brute-force diagonal oracle.
        let a = HermitianMatrix::diagonal(&[1.0, 2.0]);
        let b = HermitianMatrix::diagonal(&[0.5, 1.5]);
        let c = HermitianMatrix::diagonal(&[2.0, 0.5]);
        let d = HermitianMatrix::diagonal(&[1.0, 3.0]);
        let report = verify_lemma44(&a, &b, &c, &d, &geo).unwrap();
        assert!(report.pass);
        // Oracle: diagonal entries of both sides over the tensor basis.
        let av = [1.0f64, 2.0];
        let bv = [0.5f64, 1.5];
        let cv = [2.0f64, 0.5];
        let dv = [1.0f64, 3.0];
        let mut lhs_diag = Vec::new();
        let mut rhs_diag = Vec::new();
        for i in 0..2 {
            for j in 0..2 {
                let sac = (av[i] * cv[i]).sqrt();
                let sbd = (bv[j] * dv[j]).sqrt();
                let sac_j = (av[j] * cv[j]).sqrt();
                let sbd_i = (bv[i] * dv[i]).sqrt();
                lhs_diag.push(0.5 * (sac * sbd + sac_j * sbd_i));
                let p = 0.5 * (av[i] * bv[j] + av[j] * bv[i]);
                let q = 0.5 * (cv[i] * dv[j] + cv[j] * dv[i]);
                rhs_diag.push((p * q).sqrt());
            }
        }
        let margin_oracle = lhs_diag
            .iter()
            .zip(&rhs_diag)
            .map(|(l, r)| r - l)
            .fold(f64::INFINITY, f64::min);
        assert_close(report.margin, margin_oracle, 1e-9);

        // power(0) makes A sigma C = A, so both sides equal A (x)_s B.
        let report = verify_lemma44(&a, &b, &c, &d, &ConnectionSpec::power(0.0).unwrap()).unwrap();
        assert_close(report.margin, 0.0, 1e-10);
    }

    #[test]
    fn scalar_kantorovich_examples() {
        let w = window12();
        // Single point: margin (K - 1) w^2.
        let report = verify_scalar_kantorovich(&[2.0], &[1.0], &w).unwrap();
        assert_close(report.margin, (1.125 - 1.0) * 4.0, 1e-12);
        assert!(report.pass);

        // Extremal two-point configuration.
        let report = verify_scalar_kantorovich(&[1.0, 1.0], &[1.0, 2.0], &w).unwrap();
        assert_close(report.margin, 0.0, 0.0);
        assert!(report.pass);

        // All values at the left endpoint.
        let report = verify_scalar_kantorovich(&[1.0, 2.0], &[1.0, 1.0], &w).unwrap();
        assert_close(report.margin, (1.125 - 1.0) * 9.0, 1e-12);

        assert!(verify_scalar_kantorovich(&[], &[], &w).is_err());
        assert!(verify_scalar_kantorovich(&[1.0], &[1.0, 2.0], &w).is_err());
    }

    #[test]
    fn scalar_gruss_examples() {
        let w = window12();
        // Constant function: margin (K - 1) c^2.
        let report =
            verify_scalar_gruss(&ScalarExpr::constant(1.5), (0.0, 1.0), &w, 128).unwrap();
        assert_close(report.margin, (1.125 - 1.0) * 2.25, 1e-12);

        // f(x) = 1 + x on [0, 1]: margin 81/32 - 7/3.
        let report =
            verify_scalar_gruss(&ScalarExpr::poly(&[1.0, 1.0]), (0.0, 1.0), &w, 1024).unwrap();
        assert_close(report.margin, 81.0 / 32.0 - 7.0 / 3.0, 1e-6);
        assert!(report.pass && report.hypotheses_ok());

        // f(x) = x on [1, 2] against the antiderivative oracle:
        // m1 = 3/2, m2 = 7/3 (normalized), margin = K * 9/4 - 7/3.
        let report =
            verify_scalar_gruss(&ScalarExpr::Identity, (1.0, 2.0), &w, 2048).unwrap();
        assert_close(report.margin, 1.125 * 2.25 - 7.0 / 3.0, 1e-6);

        // Out-of-range function is flagged.
        let report =
            verify_scalar_gruss(&ScalarExpr::constant(3.0), (0.0, 1.0), &w, 16).unwrap();
        assert!(!report.hypotheses_ok());
    }

    #[test]
    fn hadamard_examples() {
        let w = window12();
        // n = 1, W = I, A = diag(1, 2): LHS = I, RHS = 1.25 I, margin 1/4.
        let report = verify_hadamard_kantorovich(
            &[HermitianMatrix::diagonal(&[1.0, 2.0])],
            &[HermitianMatrix::identity(2)],
            &w,
        )
        .unwrap();
        assert_close(report.margin, 0.25, 1e-12);
        assert!(report.pass);

        // A = a I: margin stays nonnegative.
        let report = verify_hadamard_kantorovich(
            &[HermitianMatrix::scaled_identity(2, 1.0)],
            &[HermitianMatrix::identity(2)],
            &w,
        )
        .unwrap();
        assert!(report.margin >= -1e-12);

        // Random n = 3, d = 4 instances hold within tolerance.
        let w45 = SpectrumWindow::new(1.0, 5.0).unwrap();
        for seed in 0..50u64 {
            let a: Vec<_> = (0..3)
                .map(|i| {
                    crate::matrix::random_hermitian_in_window(4, &w45, seed * 10 + i).unwrap()
                })
                .collect();
            let ws: Vec<_> = (0..3).map(|i| random_psd(4, seed * 10 + i + 5).unwrap()).collect();
            let report = verify_hadamard_kantorovich(&a, &ws, &w45).unwrap();
            assert!(
                report.margin >= -1e-8 * (1.0 + report.rhs_norm()),
                "seed {seed}: margin {}",
                report.margin
            );
        }
    }

    #[test]
    fn thm51_power_function_instance() {
        let a_field = scaled_pair(1.0, 2.0, 2);
        let weights = scaled_pair(0.5, 0.5, 2);
        let case = KantorovichCase::thm51(ScalarExpr::Power { alpha: 0.5 });
        let report = kantorovich_engine(
            &case,
            &a_field,
            &weights.into(),
            &window12(),
            &MeasureSpec::counting(),
            &QuadratureRule::default(),
        )
        .unwrap();
        assert!(report.hypotheses_ok(), "{:?}", report.hypothesis_flags);
        assert!(report.pass);
    }

    #[test]
    fn thm51_range_condition_flags_bad_function() {
        // f(x) = x^2 maps [1, 2] onto [1, 4], outside both allowed ranges,
        // and f(x) f(1/x) = 1 so only the range hypothesis fails.
        let a_field = scaled_pair(1.0, 2.0, 2);
        let weights = scaled_pair(0.5, 0.5, 2);
        let case = KantorovichCase::thm51(ScalarExpr::poly(&[0.0, 0.0, 1.0]));
        let report = kantorovich_engine(
            &case,
            &a_field,
            &weights.into(),
            &window12(),
            &MeasureSpec::counting(),
            &QuadratureRule::default(),
        )
        .unwrap();
        assert!(report
            .hypothesis_flags
            .iter()
            .any(|f| f.name == "range_condition" && f.status == FlagStatus::Fail));
    }

    #[test]
    fn gruss_tensor_normalization_flag() {
        let a_field = scaled_pair(1.0, 2.0, 2);
        let (case, weight) = KantorovichCase::gruss_tensor();
        let report = kantorovich_engine(
            &case,
            &a_field,
            &weight,
            &window12(),
            &MeasureSpec::counting(),
            &QuadratureRule::default(),
        )
        .unwrap();
        assert!(!report.hypotheses_ok(), "unnormalized measure must flag");

        let (case, weight) = KantorovichCase::gruss_tensor();
        let report = kantorovich_engine(
            &case,
            &a_field,
            &weight,
            &window12(),
            &MeasureSpec::counting_normalized(),
            &QuadratureRule::default(),
        )
        .unwrap();
        assert!(report.hypotheses_ok());
        assert!(report.pass);
    }

    #[test]
    fn cor53_power_weights() {
        let w = window12();
        let samples: Vec<_> = (0..3)
            .map(|i| crate::matrix::random_hermitian_in_window(3, &w, 300 + i).unwrap())
            .collect();
        let a_field = OperatorField::discrete(samples).unwrap();
        for &lambda in &[-1.5, -0.5, 0.0, 1.0, 2.0] {
            let (case, weight) = KantorovichCase::cor53(lambda);
            let report = kantorovich_engine(
                &case,
                &a_field,
                &weight,
                &w,
                &MeasureSpec::counting(),
                &QuadratureRule::default(),
            )
            .unwrap();
            assert!(report.pass, "lambda {lambda}: margin {}", report.margin);
        }
    }

    #[test]
    fn interval_field_instance() {
        // A_t = (1.5 + 0.4 sin t) I2 stays in [1, 2].
        let field = OperatorField::interval(
            0.0,
            1.0,
            vec![
                FieldTerm {
                    coeff: ScalarExpr::constant(1.5),
                    matrix: HermitianMatrix::identity(2),
                },
                FieldTerm {
                    coeff: ScalarExpr::Sin { freq: 1.0 },
                    matrix: HermitianMatrix::scaled_identity(2, 0.4),
                },
            ],
        )
        .unwrap();
        let weight = OperatorField::constant_on(0.0, 1.0, HermitianMatrix::identity(2)).unwrap();
        let report = kantorovich_engine(
            &KantorovichCase::thm32(),
            &field,
            &weight.into(),
            &window12(),
            &MeasureSpec::lebesgue(),
            &QuadratureRule::midpoint(32),
        )
        .unwrap();
        assert!(report.hypotheses_ok() && report.pass, "margin {}", report.margin);
    }
}
