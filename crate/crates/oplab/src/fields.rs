//! Parameterized families of Hermitian operators over a measured space and
//! their Bochner integrals via composite quadrature.
//!
//! Fields come in two shapes: finite discrete families (summed exactly
//! against a counting measure) and interval families built as finite linear
//! combinations `A_t = sum_k g_k(t) M_k` of fixed Hermitian matrices with
//! closed-form coefficient functions, so continuity holds by construction
//! and reference integrals exist for tests.

use serde::{Deserialize, Serialize};

use crate::error::{OplabError, Result};
use crate::matrix::{HermitianMatrix, SpectrumWindow, MAX_FIELD_DIM};
use crate::scalar::ScalarExpr;

/// Tolerance for sampled spectrum-window membership.
pub const WINDOW_TOL: f64 = 1e-10;

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QuadScheme {
    Midpoint,
    Trapezoid,
}

/// Composite quadrature over `nodes` uniform subintervals. Discrete fields
/// ignore the rule and sum exactly.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "QuadratureJson", into = "QuadratureJson")]
pub struct QuadratureRule {
    pub scheme: QuadScheme,
    pub nodes: usize,
}

impl QuadratureRule {
    pub fn new(scheme: QuadScheme, nodes: usize) -> Result<Self> {
        if nodes == 0 {
            return Err(OplabError::InvalidInput(
                "quadrature rule needs at least one node".into(),
            ));
        }
        Ok(QuadratureRule { scheme, nodes })
    }

    pub fn midpoint(nodes: usize) -> Self {
        Self::new(QuadScheme::Midpoint, nodes).expect("nodes >= 1")
    }
}

impl Default for QuadratureRule {
    fn default() -> Self {
        QuadratureRule::midpoint(64)
    }
}

#[derive(Serialize, Deserialize)]
struct QuadratureJson {
    scheme: QuadScheme,
    nodes: usize,
}

impl TryFrom<QuadratureJson> for QuadratureRule {
    type Error = OplabError;
    fn try_from(j: QuadratureJson) -> Result<Self> {
        QuadratureRule::new(j.scheme, j.nodes)
    }
}

impl From<QuadratureRule> for QuadratureJson {
    fn from(q: QuadratureRule) -> Self {
        QuadratureJson {
            scheme: q.scheme,
            nodes: q.nodes,
        }
    }
}

// ---------------------------------------------------------------------------
// Measures
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MeasureKind {
    /// Counting measure on a discrete parameter set.
    Counting,
    /// `w(t) dt` on a compact interval, `w >= 0` continuous.
    Lebesgue { density: ScalarExpr },
}

/// A finite positive measure; `normalized` rescales so the total mass (as
/// discretized) is exactly 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureSpec {
    #[serde(flatten)]
    pub kind: MeasureKind,
    #[serde(default)]
    pub normalized: bool,
}

impl MeasureSpec {
    pub fn counting() -> Self {
        MeasureSpec {
            kind: MeasureKind::Counting,
            normalized: false,
        }
    }

    pub fn counting_normalized() -> Self {
        MeasureSpec {
            kind: MeasureKind::Counting,
            normalized: true,
        }
    }

    pub fn lebesgue() -> Self {
        MeasureSpec {
            kind: MeasureKind::Lebesgue {
                density: ScalarExpr::constant(1.0),
            },
            normalized: false,
        }
    }

    pub fn lebesgue_density(density: ScalarExpr, normalized: bool) -> Self {
        MeasureSpec {
            kind: MeasureKind::Lebesgue { density },
            normalized,
        }
    }
}

// ---------------------------------------------------------------------------
// Operator fields
// ---------------------------------------------------------------------------

/// One `g_k(t) * M_k` summand of an interval field.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldTerm {
    #[serde(rename = "g")]
    pub coeff: ScalarExpr,
    #[serde(rename = "M")]
    pub matrix: HermitianMatrix,
}

/// A deterministic family `t -> A_t` of Hermitian matrices sharing one
/// dimension.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FieldJson", into = "FieldJson")]
pub enum OperatorField {
    Discrete {
        samples: Vec<HermitianMatrix>,
    },
    Interval {
        alpha: f64,
        beta: f64,
        terms: Vec<FieldTerm>,
    },
}

impl OperatorField {
    pub fn discrete(samples: Vec<HermitianMatrix>) -> Result<Self> {
        if samples.is_empty() {
            return Err(OplabError::InvalidInput(
                "discrete field needs at least one sample".into(),
            ));
        }
        let d = samples[0].dim();
        if d > MAX_FIELD_DIM {
            return Err(OplabError::InvalidDimension {
                dim: d,
                reason: format!("field samples must have dim <= {MAX_FIELD_DIM}"),
            });
        }
        if samples.iter().any(|s| s.dim() != d) {
            return Err(OplabError::InvalidInput(
                "discrete field samples must share one dimension".into(),
            ));
        }
        Ok(OperatorField::Discrete { samples })
    }

    pub fn interval(alpha: f64, beta: f64, terms: Vec<FieldTerm>) -> Result<Self> {
        if !(alpha.is_finite() && beta.is_finite() && alpha < beta) {
            return Err(OplabError::InvalidInput(format!(
                "interval field requires alpha < beta, got [{alpha}, {beta}]"
            )));
        }
        if terms.is_empty() {
            return Err(OplabError::InvalidInput(
                "interval field needs at least one term".into(),
            ));
        }
        let d = terms[0].matrix.dim();
        if d > MAX_FIELD_DIM {
            return Err(OplabError::InvalidDimension {
                dim: d,
                reason: format!("field samples must have dim <= {MAX_FIELD_DIM}"),
            });
        }
        if terms.iter().any(|t| t.matrix.dim() != d) {
            return Err(OplabError::InvalidInput(
                "interval field terms must share one dimension".into(),
            ));
        }
        Ok(OperatorField::Interval { alpha, beta, terms })
    }

    /// Constant field `A_t = m` on `[alpha, beta]`.
    pub fn constant_on(alpha: f64, beta: f64, m: HermitianMatrix) -> Result<Self> {
        Self::interval(
            alpha,
            beta,
            vec![FieldTerm {
                coeff: ScalarExpr::constant(1.0),
                matrix: m,
            }],
        )
    }

    pub fn dim(&self) -> usize {
        match self {
            OperatorField::Discrete { samples } => samples[0].dim(),
            OperatorField::Interval { terms, .. } => terms[0].matrix.dim(),
        }
    }

    pub fn is_discrete(&self) -> bool {
        matches!(self, OperatorField::Discrete { .. })
    }

    /// Evaluate the field at a parameter value. For discrete fields `t`
    /// must be (numerically) an index.
    pub fn sample(&self, t: f64) -> Result<HermitianMatrix> {
        match self {
            OperatorField::Discrete { samples } => {
                let i = t.round() as usize;
                samples.get(i).cloned().ok_or_else(|| {
                    OplabError::InvalidInput(format!("discrete field index {t} out of range"))
                })
            }
            OperatorField::Interval { terms, .. } => {
                let d = terms[0].matrix.dim();
                let mut acc = HermitianMatrix::zero(d);
                for term in terms {
                    acc = &acc + &term.matrix.scale(term.coeff.eval(t)?);
                }
                Ok(acc)
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum DomainJson {
    Discrete { n: usize },
    Interval { alpha: f64, beta: f64 },
}

#[derive(Serialize, Deserialize)]
struct FieldJson {
    domain: DomainJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    samples: Option<Vec<HermitianMatrix>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    terms: Option<Vec<FieldTerm>>,
}

impl TryFrom<FieldJson> for OperatorField {
    type Error = OplabError;
    fn try_from(j: FieldJson) -> Result<Self> {
        match (j.domain, j.samples, j.terms) {
            (DomainJson::Discrete { n }, Some(samples), None) => {
                if samples.len() != n {
                    return Err(OplabError::Config(format!(
                        "discrete field declares n = {n} but provides {} samples",
                        samples.len()
                    )));
                }
                OperatorField::discrete(samples)
            }
            // Terms are also accepted for a discrete domain: the coefficient
            // functions are evaluated at the integer node indices.
            (DomainJson::Discrete { n }, None, Some(terms)) => {
                let interim = OperatorField::interval(-0.5, n as f64, terms)?;
                let samples: Result<Vec<_>> =
                    (0..n).map(|i| interim.sample(i as f64)).collect();
                OperatorField::discrete(samples?)
            }
            (DomainJson::Interval { alpha, beta }, None, Some(terms)) => {
                OperatorField::interval(alpha, beta, terms)
            }
            _ => Err(OplabError::Config(
                "field json: discrete domains take `samples` (or `terms`), interval domains take `terms`"
                    .into(),
            )),
        }
    }
}

impl From<OperatorField> for FieldJson {
    fn from(f: OperatorField) -> Self {
        match f {
            OperatorField::Discrete { samples } => FieldJson {
                domain: DomainJson::Discrete { n: samples.len() },
                samples: Some(samples),
                terms: None,
            },
            OperatorField::Interval { alpha, beta, terms } => FieldJson {
                domain: DomainJson::Interval { alpha, beta },
                samples: None,
                terms: Some(terms),
            },
        }
    }
}

// ---------------------------------------------------------------------------
// Discretization
// ---------------------------------------------------------------------------

/// One quadrature node: parameter value and accumulated measure weight.
#[derive(Clone, Copy, Debug)]
pub struct QuadNode {
    pub t: f64,
    pub weight: f64,
}

/// Discretize the measure against the field's domain. Discrete fields pair
/// with the counting measure (weight 1 per sample), interval fields with a
/// Lebesgue density; `normalized` divides by the discretized total mass.
pub fn quadrature_nodes(
    field: &OperatorField,
    measure: &MeasureSpec,
    quad: &QuadratureRule,
) -> Result<Vec<QuadNode>> {
    let mut nodes = match (field, &measure.kind) {
        (OperatorField::Discrete { samples }, MeasureKind::Counting) => (0..samples.len())
            .map(|i| QuadNode {
                t: i as f64,
                weight: 1.0,
            })
            .collect::<Vec<_>>(),
        (OperatorField::Interval { alpha, beta, .. }, MeasureKind::Lebesgue { density }) => {
            let n = quad.nodes;
            let h = (beta - alpha) / n as f64;
            match quad.scheme {
                QuadScheme::Midpoint => {
                    let mut v = Vec::with_capacity(n);
                    for i in 0..n {
                        let t = alpha + (i as f64 + 0.5) * h;
                        v.push(QuadNode {
                            t,
                            weight: density.eval(t)? * h,
                        });
                    }
                    v
                }
                QuadScheme::Trapezoid => {
                    let mut v = Vec::with_capacity(n + 1);
                    for i in 0..=n {
                        let t = alpha + i as f64 * h;
                        let end = i == 0 || i == n;
                        let w = if end { 0.5 * h } else { h };
                        v.push(QuadNode {
                            t,
                            weight: density.eval(t)? * w,
                        });
                    }
                    v
                }
            }
        }
        (OperatorField::Discrete { .. }, _) => {
            return Err(OplabError::IncompatibleMeasure(
                "discrete fields require the counting measure".into(),
            ))
        }
        (OperatorField::Interval { .. }, _) => {
            return Err(OplabError::IncompatibleMeasure(
                "interval fields require a Lebesgue density measure".into(),
            ))
        }
    };

    let mass: f64 = nodes.iter().map(|n| n.weight).sum();
    if nodes.iter().any(|n| n.weight < 0.0) {
        return Err(OplabError::InvalidInput(
            "measure density must be nonnegative".into(),
        ));
    }
    if !(mass > 0.0) {
        return Err(OplabError::InvalidInput(format!(
            "measure must have positive total mass, got {mass}"
        )));
    }
    if measure.normalized {
        for n in nodes.iter_mut() {
            n.weight /= mass;
        }
    }
    Ok(nodes)
}

/// Total discretized mass of the measure over the field's domain.
pub fn measure_mass(
    field: &OperatorField,
    measure: &MeasureSpec,
    quad: &QuadratureRule,
) -> Result<f64> {
    Ok(quadrature_nodes(field, measure, quad)?
        .iter()
        .map(|n| n.weight)
        .sum())
}

/// `integral A_t dmu(t)`: exact weighted sum for discrete fields, composite
/// quadrature for interval fields. Summation is left-to-right over node
/// index for reproducibility.
pub fn bochner_integral(
    field: &OperatorField,
    measure: &MeasureSpec,
    quad: &QuadratureRule,
) -> Result<HermitianMatrix> {
    let nodes = quadrature_nodes(field, measure, quad)?;
    let mut acc = HermitianMatrix::zero(field.dim());
    for node in &nodes {
        acc = &acc + &field.sample(node.t)?.scale(node.weight);
    }
    Ok(acc)
}

/// `integral W_t^{1/2} f(A_t) W_t^{1/2} dmu(t)`; weight samples must be PSD
/// and `f` must be defined on the spectrum of every `A_t` sample.
pub fn weighted_transform_integral(
    weight: &OperatorField,
    field: &OperatorField,
    f: &ScalarExpr,
    measure: &MeasureSpec,
    quad: &QuadratureRule,
) -> Result<HermitianMatrix> {
    if weight.dim() != field.dim() {
        return Err(OplabError::DimensionMismatch {
            left: weight.dim(),
            right: field.dim(),
        });
    }
    let nodes = quadrature_nodes(field, measure, quad)?;
    let mut acc = HermitianMatrix::zero(field.dim());
    for node in &nodes {
        let w = weight.sample(node.t)?;
        w.ensure_psd()?;
        let w_half = w.psd_sqrt()?;
        let fa = field.sample(node.t)?.apply_expr(f)?;
        acc = &acc + &w_half.sandwich(&fa)?.scale(node.weight);
    }
    Ok(acc)
}

/// Max operator norm over sample nodes; exact for discrete fields, a lower
/// bound of the true sup for interval fields.
pub fn field_sup_norm(field: &OperatorField, quad: &QuadratureRule) -> Result<f64> {
    let mut sup: f64 = 0.0;
    for t in sample_parameters(field, quad) {
        sup = sup.max(field.sample(t)?.operator_norm());
    }
    Ok(sup)
}

/// Outcome of a sampled spectrum-window check.
#[derive(Clone, Debug, Serialize)]
pub struct WindowCheck {
    pub ok: bool,
    /// Parameter and eigenvalue of the worst offender when `ok` is false.
    pub worst_t: Option<f64>,
    pub worst_eigenvalue: Option<f64>,
}

/// Verify `Sp(A_t) in [a - tol, b + tol]` at the sample nodes (all samples
/// for discrete fields, quadrature nodes for interval fields).
pub fn check_spectrum_window(
    field: &OperatorField,
    window: &SpectrumWindow,
    quad: &QuadratureRule,
) -> Result<WindowCheck> {
    let mut worst: Option<(f64, f64, f64)> = None; // (excess, t, eigenvalue)
    for t in sample_parameters(field, quad) {
        for l in field.sample(t)?.eig()?.eigenvalues {
            let excess = (window.a() - l).max(l - window.b());
            if excess > WINDOW_TOL {
                let replace = worst.map(|(e, _, _)| excess > e).unwrap_or(true);
                if replace {
                    worst = Some((excess, t, l));
                }
            }
        }
    }
    Ok(match worst {
        None => WindowCheck {
            ok: true,
            worst_t: None,
            worst_eigenvalue: None,
        },
        Some((_, t, l)) => WindowCheck {
            ok: false,
            worst_t: Some(t),
            worst_eigenvalue: Some(l),
        },
    })
}

fn sample_parameters(field: &OperatorField, quad: &QuadratureRule) -> Vec<f64> {
    match field {
        OperatorField::Discrete { samples } => (0..samples.len()).map(|i| i as f64).collect(),
        OperatorField::Interval { alpha, beta, .. } => {
            let n = quad.nodes;
            let h = (beta - alpha) / n as f64;
            match quad.scheme {
                QuadScheme::Midpoint => (0..n).map(|i| alpha + (i as f64 + 0.5) * h).collect(),
                QuadScheme::Trapezoid => (0..=n).map(|i| alpha + i as f64 * h).collect(),
            }
        }
    }
}

/// One row of a quadrature refinement study.
#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceRow {
    pub nodes: usize,
    pub error: f64,
}

/// Errors `|I_N - I_ref|` against a reference computed at `8 * max(N)`
/// subintervals. For smooth integrands and the midpoint rule the error
/// ratio approaches 4 as N doubles.
pub fn convergence_probe(
    field: &OperatorField,
    measure: &MeasureSpec,
    scheme: QuadScheme,
    n_list: &[usize],
) -> Result<Vec<ConvergenceRow>> {
    if field.is_discrete() {
        return Err(OplabError::InvalidInput(
            "convergence probe requires an interval field".into(),
        ));
    }
    let max_n = n_list.iter().copied().max().ok_or_else(|| {
        OplabError::InvalidInput("convergence probe needs a nonempty N list".into())
    })?;
    let reference = bochner_integral(field, measure, &QuadratureRule::new(scheme, 8 * max_n)?)?;
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let approx = bochner_integral(field, measure, &QuadratureRule::new(scheme, n)?)?;
        rows.push(ConvergenceRow {
            nodes: n,
            error: (&approx - &reference).operator_norm(),
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{kron, random_hermitian_in_window, random_psd};

    fn assert_close(x: f64, y: f64, tol: f64) {
        assert!((x - y).abs() <= tol, "{x} vs {y} (tol {tol})");
    }

    fn affine_identity_field() -> OperatorField {
        // A_t = (1 + t) I on [0, 1]
        OperatorField::interval(
            0.0,
            1.0,
            vec![FieldTerm {
                coeff: ScalarExpr::poly(&[1.0, 1.0]),
                matrix: HermitianMatrix::identity(2),
            }],
        )
        .unwrap()
    }

    fn exp_identity_field() -> OperatorField {
        // A_t = e^t I on [0, 1]
        OperatorField::interval(
            0.0,
            1.0,
            vec![FieldTerm {
                coeff: ScalarExpr::Exp { rate: 1.0 },
                matrix: HermitianMatrix::identity(2),
            }],
        )
        .unwrap()
    }

    #[test]
    fn bochner_discrete_counting() {
        let f = OperatorField::discrete(vec![
            HermitianMatrix::identity(2),
            HermitianMatrix::scaled_identity(2, 2.0),
        ])
        .unwrap();
        let integral =
            bochner_integral(&f, &MeasureSpec::counting(), &QuadratureRule::default()).unwrap();
        assert_eq!(integral, HermitianMatrix::scaled_identity(2, 3.0));
    }

    #[test]
    fn bochner_midpoint_exact_for_affine() {
        let f = affine_identity_field();
        let integral = bochner_integral(
            &f,
            &MeasureSpec::lebesgue(),
            &QuadratureRule::midpoint(1),
        )
        .unwrap();
        assert!(
            (&integral - &HermitianMatrix::scaled_identity(2, 1.5)).operator_norm() < 1e-14
        );
    }

    #[test]
    fn bochner_midpoint_exp_error() {
        // Two-node midpoint vs the closed form (e - 1) I.
        let f = exp_identity_field();
        let integral = bochner_integral(
            &f,
            &MeasureSpec::lebesgue(),
            &QuadratureRule::midpoint(2),
        )
        .unwrap();
        let approx = integral.entry(0, 0).re;
        assert_close(approx, 1.700_512_716_6, 1e-9);
        let exact = std::f64::consts::E - 1.0;
        assert_close(exact - approx, 1.777e-2, 1e-4);
    }

    #[test]
    fn incompatible_pairs_rejected() {
        let f = affine_identity_field();
        assert!(bochner_integral(&f, &MeasureSpec::counting(), &QuadratureRule::default()).is_err());
        let d = OperatorField::discrete(vec![HermitianMatrix::identity(2)]).unwrap();
        assert!(bochner_integral(&d, &MeasureSpec::lebesgue(), &QuadratureRule::default()).is_err());
    }

    #[test]
    fn weighted_transform_examples() {
        // Unit weight, identity function: reduces to the plain integral.
        let a = OperatorField::discrete(vec![
            HermitianMatrix::identity(2),
            HermitianMatrix::scaled_identity(2, 2.0),
        ])
        .unwrap();
        let w = OperatorField::discrete(vec![
            HermitianMatrix::identity(2),
            HermitianMatrix::identity(2),
        ])
        .unwrap();
        let mu = MeasureSpec::counting();
        let q = QuadratureRule::default();
        let plain = bochner_integral(&a, &mu, &q).unwrap();
        let weighted =
            weighted_transform_integral(&w, &a, &ScalarExpr::Identity, &mu, &q).unwrap();
        assert_eq!(plain, weighted);

        // Half weights with f = 1/x: (1/2)(1) + (1/2)(1/2) = 3/4.
        let half = OperatorField::discrete(vec![
            HermitianMatrix::scaled_identity(2, 0.5),
            HermitianMatrix::scaled_identity(2, 0.5),
        ])
        .unwrap();
        let out = weighted_transform_integral(&half, &a, &ScalarExpr::Recip, &mu, &q).unwrap();
        assert!((&out - &HermitianMatrix::scaled_identity(2, 0.75)).operator_norm() < 1e-12);

        // Projection compression picks out one diagonal entry per point.
        let a2 = OperatorField::discrete(vec![
            HermitianMatrix::diagonal(&[1.0, 1.0]),
            HermitianMatrix::diagonal(&[2.0, 2.0]),
        ])
        .unwrap();
        let proj = OperatorField::discrete(vec![
            HermitianMatrix::diagonal(&[1.0, 0.0]),
            HermitianMatrix::diagonal(&[0.0, 1.0]),
        ])
        .unwrap();
        let out =
            weighted_transform_integral(&proj, &a2, &ScalarExpr::Identity, &mu, &q).unwrap();
        assert!(
            (&out - &HermitianMatrix::diagonal(&[1.0, 2.0])).operator_norm() < 1e-13
        );

        // Non-PSD weights are an input error.
        let bad = OperatorField::discrete(vec![
            HermitianMatrix::diagonal(&[-1.0, 1.0]),
            HermitianMatrix::identity(2),
        ])
        .unwrap();
        assert!(
            weighted_transform_integral(&bad, &a, &ScalarExpr::Identity, &mu, &q).is_err()
        );
    }

    #[test]
    fn sup_norm_examples() {
        let d = OperatorField::discrete(vec![
            HermitianMatrix::identity(2),
            HermitianMatrix::scaled_identity(2, 3.0),
        ])
        .unwrap();
        assert_close(field_sup_norm(&d, &QuadratureRule::default()).unwrap(), 3.0, 1e-14);

        let f = affine_identity_field();
        let sup = field_sup_norm(&f, &QuadratureRule::midpoint(64)).unwrap();
        assert_close(sup, 1.0 + 63.5 / 64.0, 1e-12);

        let c = OperatorField::constant_on(0.0, 1.0, HermitianMatrix::scaled_identity(2, 0.8))
            .unwrap();
        assert_close(field_sup_norm(&c, &QuadratureRule::midpoint(8)).unwrap(), 0.8, 1e-14);
    }

    #[test]
    fn window_checks() {
        let f = affine_identity_field(); // spectra sweep [1, 2]
        let q = QuadratureRule::midpoint(64);
        let ok = check_spectrum_window(&f, &SpectrumWindow::new(1.0, 2.0).unwrap(), &q).unwrap();
        assert!(ok.ok);

        let tight = check_spectrum_window(&f, &SpectrumWindow::new(1.0, 1.5).unwrap(), &q).unwrap();
        assert!(!tight.ok);
        // Worst offender sits at the largest sampled parameter.
        assert!(tight.worst_t.unwrap() > 0.97);
        assert!(tight.worst_eigenvalue.unwrap() > 1.95);

        let w = SpectrumWindow::new(1.0, 2.0).unwrap();
        let samples: Vec<_> = (0..4)
            .map(|i| random_hermitian_in_window(3, &w, i).unwrap())
            .collect();
        let d = OperatorField::discrete(samples).unwrap();
        assert!(check_spectrum_window(&d, &w, &q).unwrap().ok);
    }

    #[test]
    fn convergence_ratios() {
        let f = exp_identity_field();
        let rows = convergence_probe(
            &f,
            &MeasureSpec::lebesgue(),
            QuadScheme::Midpoint,
            &[2, 4, 8],
        )
        .unwrap();
        assert_close(rows[0].error, 1.777e-2, 2e-4);
        assert_close(rows[1].error, 4.45e-3, 1e-4);
        assert_close(rows[2].error, 1.11e-3, 5e-5);
        for pair in rows.windows(2) {
            let ratio = pair[0].error / pair[1].error;
            assert!((3.8..=4.2).contains(&ratio), "ratio {ratio}");
        }

        // Affine integrand: midpoint is exact at every N.
        let rows = convergence_probe(
            &affine_identity_field(),
            &MeasureSpec::lebesgue(),
            QuadScheme::Midpoint,
            &[2, 4],
        )
        .unwrap();
        assert!(rows.iter().all(|r| r.error <= 1e-14));

        // Constant field: identically zero error.
        let c = OperatorField::constant_on(0.0, 1.0, HermitianMatrix::identity(2)).unwrap();
        let rows =
            convergence_probe(&c, &MeasureSpec::lebesgue(), QuadScheme::Midpoint, &[2, 4]).unwrap();
        assert!(rows.iter().all(|r| r.error == 0.0));
    }

    #[test]
    fn linearity_of_integral() {
        let w = SpectrumWindow::new(0.5, 2.0).unwrap();
        let mk = |seed: u64| {
            OperatorField::discrete(
                (0..3)
                    .map(|i| random_hermitian_in_window(3, &w, seed + i).unwrap())
                    .collect(),
            )
            .unwrap()
        };
        let (a, b) = (mk(0), mk(100));
        let sum_samples: Vec<_> = (0..3)
            .map(|i| &a.sample(i as f64).unwrap() + &b.sample(i as f64).unwrap())
            .collect();
        let s = OperatorField::discrete(sum_samples).unwrap();
        let mu = MeasureSpec::counting();
        let q = QuadratureRule::default();
        let lhs = bochner_integral(&s, &mu, &q).unwrap();
        let rhs = &bochner_integral(&a, &mu, &q).unwrap() + &bochner_integral(&b, &mu, &q).unwrap();
        assert!((&lhs - &rhs).operator_norm() < 1e-12);
    }

    #[test]
    fn tensor_integral_exchange() {
        // kron(integral A, X) equals sum of kron(A_i, X) weights for discrete fields.
        let w = SpectrumWindow::new(0.5, 2.0).unwrap();
        let samples: Vec<_> = (0..4)
            .map(|i| random_hermitian_in_window(2, &w, 40 + i).unwrap())
            .collect();
        let x = random_psd(3, 7).unwrap();
        let f = OperatorField::discrete(samples.clone()).unwrap();
        let mu = MeasureSpec::counting();
        let q = QuadratureRule::default();
        let lhs = kron(&bochner_integral(&f, &mu, &q).unwrap(), &x).unwrap();
        let mut rhs = HermitianMatrix::zero(6);
        for s in &samples {
            rhs = &rhs + &kron(s, &x).unwrap();
        }
        assert!((&lhs - &rhs).operator_norm() < 1e-12);
    }

    #[test]
    fn positivity_of_integral() {
        for seed in 0..20u64 {
            let samples: Vec<_> = (0..3).map(|i| random_psd(3, seed * 10 + i).unwrap()).collect();
            let f = OperatorField::discrete(samples).unwrap();
            let integral =
                bochner_integral(&f, &MeasureSpec::counting(), &QuadratureRule::default()).unwrap();
            let scale = 1.0 + integral.operator_norm();
            assert!(integral.min_eigenvalue().unwrap() >= -1e-10 * scale);
        }
    }

    #[test]
    fn norm_integrability_bound() {
        let w = SpectrumWindow::new(1.0, 2.0).unwrap();
        let a = OperatorField::discrete(
            (0..3)
                .map(|i| random_hermitian_in_window(3, &w, 60 + i).unwrap())
                .collect(),
        )
        .unwrap();
        let wt = OperatorField::discrete(
            (0..3).map(|i| random_psd(3, 90 + i).unwrap()).collect(),
        )
        .unwrap();
        let mu = MeasureSpec::counting();
        let q = QuadratureRule::default();
        let f = ScalarExpr::Recip;
        let val = weighted_transform_integral(&wt, &a, &f, &mu, &q)
            .unwrap()
            .operator_norm();
        let mass = measure_mass(&a, &mu, &q).unwrap();
        let f_sup = (0..=256)
            .map(|i| 1.0 + (i as f64) / 256.0)
            .map(|x| f.eval(x).unwrap().abs())
            .fold(0.0f64, f64::max);
        let bound = mass * f_sup * field_sup_norm(&wt, &q).unwrap();
        assert!(val <= bound + 1e-9, "{val} > {bound}");
    }

    #[test]
    fn normalized_measure_has_unit_mass() {
        let mass = measure_mass(
            &exp_identity_field(),
            &MeasureSpec::lebesgue_density(ScalarExpr::poly(&[1.0, 2.0]), true),
            &QuadratureRule::midpoint(16),
        )
        .unwrap();
        assert_close(mass, 1.0, 1e-15);
    }

    #[test]
    fn field_json_round_trips() {
        let d = OperatorField::discrete(vec![
            HermitianMatrix::identity(2),
            HermitianMatrix::scaled_identity(2, 2.0),
        ])
        .unwrap();
        let s = serde_json::to_string(&d).unwrap();
        assert!(s.contains("\"kind\":\"discrete\"") && s.contains("\"samples\""));
        assert_eq!(serde_json::from_str::<OperatorField>(&s).unwrap(), d);

        let f = affine_identity_field();
        let s = serde_json::to_string(&f).unwrap();
        assert!(s.contains("\"kind\":\"interval\"") && s.contains("\"terms\""));
        assert_eq!(serde_json::from_str::<OperatorField>(&s).unwrap(), f);

        // Discrete domain with terms: coefficients evaluated at indices.
        let s = r#"{
            "domain": {"kind": "discrete", "n": 2},
            "terms": [{"g": {"kind": "poly", "coeffs": [1.0, 1.0]},
                       "M": {"dim": 1, "re": [[2.0]], "im": [[0.0]]}}]
        }"#;
        let f: OperatorField = serde_json::from_str(s).unwrap();
        assert_eq!(f.sample(0.0).unwrap(), HermitianMatrix::diagonal(&[2.0]));
        assert_eq!(f.sample(1.0).unwrap(), HermitianMatrix::diagonal(&[4.0]));
    }

    #[test]
    fn measure_json() {
        let m: MeasureSpec = serde_json::from_str(r#"{"kind":"counting"}"#).unwrap();
        assert_eq!(m, MeasureSpec::counting());
        let m: MeasureSpec = serde_json::from_str(
            r#"{"kind":"lebesgue","density":{"kind":"poly","coeffs":[1.0]},"normalized":true}"#,
        )
        .unwrap();
        assert!(m.normalized);
    }
}
