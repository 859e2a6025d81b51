//! Kubo-Ando operator connections and means, realized through their
//! representing functions: `A sigma B = A^{1/2} f(A^{-1/2} B A^{-1/2}) A^{1/2}`
//! with an epsilon shift standing in for continuity from above when `A` is
//! singular.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{OplabError, Result};
use crate::matrix::{
    loewner_margin, random_hermitian_in_window, random_psd, random_unitary, HermitianMatrix,
    SpectrumWindow, MAX_FIELD_DIM,
};
use crate::scalar::{geometric_grid, linear_grid, ScalarExpr};

/// Default epsilon shift applied when the first argument is singular.
pub const DEFAULT_REGULARIZATION_EPS: f64 = 1e-10;

const NONNEG_GRID: usize = 1024;
const SUPERMULT_SLACK: f64 = 1e-12;

/// Representing function of an operator connection.
///
/// Built-in kinds are operator monotone; `Power` is restricted to
/// `alpha in [0, 1]` for that reason. Operator monotonicity of `Custom`
/// functions is not certified — only grid nonnegativity is checked, and
/// downstream reports flag such runs as resting on an unverified hypothesis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum RepresentingFunction {
    /// `f(x) = x^alpha`, `0 <= alpha <= 1` (weighted geometric mean).
    Power { alpha: f64 },
    /// `f(x) = (1 + x) / 2`.
    Arithmetic,
    /// `f(x) = sqrt(x)`.
    Geometric,
    /// `f(x) = 2x / (1 + x)`.
    Harmonic,
    /// Arbitrary nonnegative function on a declared domain.
    Custom { f: ScalarExpr, domain: (f64, f64) },
}

impl RepresentingFunction {
    pub fn power(alpha: f64) -> Result<Self> {
        let f = RepresentingFunction::Power { alpha };
        f.validate()?;
        Ok(f)
    }

    pub fn custom(f: ScalarExpr, domain: (f64, f64)) -> Result<Self> {
        let r = RepresentingFunction::Custom { f, domain };
        r.validate()?;
        Ok(r)
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        match self {
            RepresentingFunction::Power { alpha } => ScalarExpr::Power { alpha: *alpha }.eval(x),
            RepresentingFunction::Arithmetic => Ok(0.5 * (1.0 + x)),
            RepresentingFunction::Geometric => ScalarExpr::Sqrt.eval(x),
            RepresentingFunction::Harmonic => {
                if x < 0.0 {
                    return Err(OplabError::DomainViolation {
                        x,
                        lo: 0.0,
                        hi: f64::INFINITY,
                    });
                }
                Ok(2.0 * x / (1.0 + x))
            }
            RepresentingFunction::Custom { f, domain } => {
                if x < domain.0 || x > domain.1 {
                    return Err(OplabError::DomainViolation {
                        x,
                        lo: domain.0,
                        hi: domain.1,
                    });
                }
                f.eval(x)
            }
        }
    }

    /// Declared domain of definition.
    pub fn domain(&self) -> (f64, f64) {
        match self {
            RepresentingFunction::Custom { domain, .. } => *domain,
            _ => (0.0, f64::INFINITY),
        }
    }

    pub fn is_builtin(&self) -> bool {
        !matches!(self, RepresentingFunction::Custom { .. })
    }

    /// Symbolic scalar form, usable for matrix functional calculus.
    pub fn to_expr(&self) -> ScalarExpr {
        match self {
            RepresentingFunction::Power { alpha } => ScalarExpr::Power { alpha: *alpha },
            RepresentingFunction::Arithmetic => ScalarExpr::poly(&[0.5, 0.5]),
            RepresentingFunction::Geometric => ScalarExpr::Sqrt,
            RepresentingFunction::Harmonic => ScalarExpr::Ratio {
                num: vec![0.0, 2.0],
                den: vec![1.0, 1.0],
            },
            RepresentingFunction::Custom { f, .. } => f.clone(),
        }
    }

    /// Grid checks: nonnegativity over the declared domain for every kind,
    /// monotone nondecreasing for the built-in kinds.
    pub fn validate(&self) -> Result<()> {
        if let RepresentingFunction::Power { alpha } = self {
            if !(0.0..=1.0).contains(alpha) {
                return Err(OplabError::InvalidInput(format!(
                    "power representing function requires alpha in [0, 1], got {alpha}"
                )));
            }
        }
        let (lo, hi) = self.domain();
        let hi = if hi.is_finite() { hi } else { 1e3 };
        let lo = lo.max(0.0);
        let grid = linear_grid(lo, hi, NONNEG_GRID);
        let mut prev: Option<f64> = None;
        for &x in &grid {
            let y = self.eval(x)?;
            if y < -SUPERMULT_SLACK {
                return Err(OplabError::InvalidInput(format!(
                    "representing function is negative at x = {x}: f(x) = {y}"
                )));
            }
            if self.is_builtin() {
                if let Some(p) = prev {
                    if y < p - 1e-12 {
                        return Err(OplabError::InvalidInput(format!(
                            "built-in representing function must be nondecreasing; drop at x = {x}"
                        )));
                    }
                }
                prev = Some(y);
            }
        }
        Ok(())
    }
}

/// A connection given by its representing function plus the epsilon shift
/// used for singular first arguments.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ConnectionSpecJson", into = "ConnectionSpecJson")]
pub struct ConnectionSpec {
    f: RepresentingFunction,
    eps: f64,
}

impl ConnectionSpec {
    pub fn new(f: RepresentingFunction) -> Result<Self> {
        Self::with_eps(f, DEFAULT_REGULARIZATION_EPS)
    }

    pub fn with_eps(f: RepresentingFunction, eps: f64) -> Result<Self> {
        if !(eps > 0.0 && eps <= 1e-6) {
            return Err(OplabError::InvalidInput(format!(
                "regularization eps must lie in (0, 1e-6], got {eps}"
            )));
        }
        f.validate()?;
        Ok(ConnectionSpec { f, eps })
    }

    pub fn arithmetic() -> Self {
        Self::new(RepresentingFunction::Arithmetic).expect("valid built-in")
    }

    pub fn geometric() -> Self {
        Self::new(RepresentingFunction::Geometric).expect("valid built-in")
    }

    pub fn harmonic() -> Self {
        Self::new(RepresentingFunction::Harmonic).expect("valid built-in")
    }

    pub fn power(alpha: f64) -> Result<Self> {
        Self::new(RepresentingFunction::Power { alpha })
    }

    pub fn f(&self) -> &RepresentingFunction {
        &self.f
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// `f(1)`; equals 1 exactly when the connection is a mean.
    pub fn at_one(&self) -> f64 {
        self.f.eval(1.0).unwrap_or(f64::NAN)
    }

    pub fn is_mean(&self) -> bool {
        (self.at_one() - 1.0).abs() <= 1e-12
    }
}

#[derive(Serialize, Deserialize)]
struct ConnectionSpecJson {
    #[serde(flatten)]
    f: RepresentingFunction,
    #[serde(default = "default_eps")]
    eps: f64,
}

fn default_eps() -> f64 {
    DEFAULT_REGULARIZATION_EPS
}

impl TryFrom<ConnectionSpecJson> for ConnectionSpec {
    type Error = OplabError;
    fn try_from(j: ConnectionSpecJson) -> Result<Self> {
        ConnectionSpec::with_eps(j.f, j.eps)
    }
}

impl From<ConnectionSpec> for ConnectionSpecJson {
    fn from(c: ConnectionSpec) -> Self {
        ConnectionSpecJson { f: c.f, eps: c.eps }
    }
}

/// Apply the connection to a pair of positive semidefinite operators.
///
/// Strictly positive `A` uses the exact `A^{1/2} f(A^{-1/2} B A^{-1/2}) A^{1/2}`
/// form; otherwise `A` is shifted by `eps I` first. Bitwise-equal arguments
/// short-circuit to `f(1) * A`, which the fixed-point property makes exact.
pub fn connection_apply(
    spec: &ConnectionSpec,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
) -> Result<HermitianMatrix> {
    if a.dim() != b.dim() {
        return Err(OplabError::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let a_eig = a.eig()?;
    let b_min = b.min_eigenvalue()?;
    let a_min = a_eig.eigenvalues[0];
    if a_min < -1e-10 {
        return Err(OplabError::NotPositiveSemidefinite {
            min_eigenvalue: a_min,
        });
    }
    if b_min < -1e-10 {
        return Err(OplabError::NotPositiveSemidefinite {
            min_eigenvalue: b_min,
        });
    }
    if a == b {
        return Ok(a.scale(spec.f.eval(1.0)?));
    }

    let shift = if a_min < spec.eps { spec.eps } else { 0.0 };
    let shifted: Vec<f64> = a_eig
        .eigenvalues
        .iter()
        .map(|&l| l.max(0.0) + shift)
        .collect();
    let s_half = a_eig.recompose(&shifted.iter().map(|l| l.sqrt()).collect::<Vec<_>>());
    let s_inv_half = a_eig.recompose(&shifted.iter().map(|l| 1.0 / l.sqrt()).collect::<Vec<_>>());

    let compressed = s_inv_half.sandwich(b)?;
    let c_eig = compressed.eig()?;
    let mut vals = Vec::with_capacity(c_eig.eigenvalues.len());
    for &l in &c_eig.eigenvalues {
        vals.push(spec.f.eval(l.max(0.0))?);
    }
    let f_c = c_eig.recompose(&vals);
    s_half.sandwich(&f_c)
}

/// The induced scalar connection `a sigma b = a f(b/a)`, with the same
/// epsilon convention as [`connection_apply`] at `a` near zero.
pub fn scalar_connection(spec: &ConnectionSpec, a: f64, b: f64) -> f64 {
    let a = a.max(0.0);
    let b = b.max(0.0);
    let a_eff = if a < spec.eps { a + spec.eps } else { a };
    let ratio = b / a_eff;
    a_eff * spec.f.eval(ratio).unwrap_or(f64::NAN)
}

/// One violating pair found by [`check_super_multiplicative`].
#[derive(Clone, Debug, Serialize)]
pub struct SuperMultViolation {
    pub x: f64,
    pub y: f64,
    /// `f(x * y)`
    pub lhs: f64,
    /// `f(x) * f(y)`
    pub rhs: f64,
}

/// Report for the super-multiplicativity check `f(xy) >= f(x) f(y)`.
#[derive(Clone, Debug, Serialize)]
pub struct SuperMultReport {
    pub violations: Vec<SuperMultViolation>,
}

impl SuperMultReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    /// Violation with the largest defect `f(x)f(y) - f(xy)`, if any.
    pub fn worst(&self) -> Option<&SuperMultViolation> {
        self.violations
            .iter()
            .max_by(|u, v| (u.rhs - u.lhs).total_cmp(&(v.rhs - v.lhs)))
    }
}

/// Default grid for super-multiplicativity checks: 64 log-spaced points
/// spanning `[1e-3, 1e3]`.
pub fn default_supermult_grid() -> Vec<f64> {
    geometric_grid(1e-3, 1e3, 64)
}

/// List every ordered pair `(x, y)` from the grid with
/// `f(xy) < f(x) f(y) - 1e-12`. Grid points and their pairwise products
/// must lie in the function's domain.
pub fn check_super_multiplicative(
    f: &RepresentingFunction,
    grid: &[f64],
) -> Result<SuperMultReport> {
    let (lo, hi) = f.domain();
    let in_domain = |x: f64| x >= lo && x <= hi;
    let mut violations = Vec::new();
    for (i, &x) in grid.iter().enumerate() {
        for &y in &grid[i..] {
            if !in_domain(x) || !in_domain(y) || !in_domain(x * y) {
                return Err(OplabError::DomainViolation {
                    x: x * y,
                    lo,
                    hi,
                });
            }
            let lhs = f.eval(x * y)?;
            let rhs = f.eval(x)? * f.eval(y)?;
            // Slack scales with the magnitude so ulp-level rounding of
            // genuinely multiplicative functions is not reported.
            if lhs < rhs - SUPERMULT_SLACK * (1.0 + rhs.abs()) {
                violations.push(SuperMultViolation { x, y, lhs, rhs });
            }
        }
    }
    Ok(SuperMultReport { violations })
}

/// Axiom margins aggregated over seeded random trials. Inequality axioms
/// report their minimum Loewner margin; equality axioms report the largest
/// relative deviation observed.
#[derive(Clone, Debug, Serialize)]
pub struct AxiomReport {
    pub connection: String,
    pub dim: usize,
    pub trials: u64,
    pub seed: u64,
    pub monotonicity_min_margin: f64,
    pub transformer_min_margin: f64,
    pub superadditivity_min_margin: f64,
    pub congruence_max_rel_deviation: f64,
    pub fixed_point_max_rel_deviation: f64,
    pub representing_identity_max_deviation: f64,
}

impl AxiomReport {
    /// All inequality margins within `margin_tol`, equality deviations within
    /// `eq_tol` (fixed point and the representing identity are held to the
    /// tighter `margin_tol`-style bound by the caller if desired).
    pub fn passes(&self, margin_tol: f64, eq_tol: f64) -> bool {
        self.monotonicity_min_margin >= -margin_tol
            && self.transformer_min_margin >= -margin_tol
            && self.superadditivity_min_margin >= -margin_tol
            && self.congruence_max_rel_deviation <= eq_tol
            && self.fixed_point_max_rel_deviation <= margin_tol
    }
}

/// Exercise the connection axioms on seeded random tuples: joint
/// monotonicity, the transformer inequality (with PSD, possibly singular,
/// congruence factors), congruence equality for invertible factors,
/// superadditivity, the fixed-point property and the representing-function
/// identity `f(A) = I sigma A`.
///
/// Strictly positive base operators keep the epsilon-regularized evaluation
/// well conditioned, so reported margins reflect the axioms rather than
/// compression noise. Per-trial seeds are `seed + trial_index`.
pub fn check_connection_axioms(
    spec: &ConnectionSpec,
    seed: u64,
    trials: u64,
    d: usize,
) -> Result<AxiomReport> {
    if trials < 1 {
        return Err(OplabError::InvalidInput("trials must be >= 1".into()));
    }
    if d < 1 || d > MAX_FIELD_DIM {
        return Err(OplabError::InvalidDimension {
            dim: d,
            reason: format!("axiom checks require 1 <= dim <= {MAX_FIELD_DIM}"),
        });
    }
    let window = SpectrumWindow::new(0.2, 2.0)?;
    let congruence_window = SpectrumWindow::new(0.5, 1.5)?;

    let mut mono = f64::INFINITY;
    let mut transformer = f64::INFINITY;
    let mut superadd = f64::INFINITY;
    let mut congruence: f64 = 0.0;
    let mut fixed_point: f64 = 0.0;
    let mut rep_identity: f64 = 0.0;

    for trial in 0..trials {
        let trial_seed = seed.wrapping_add(trial);
        let mut rng = ChaCha8Rng::seed_from_u64(trial_seed);
        let sub = |rng: &mut ChaCha8Rng| rng.gen::<u64>();

        let a = random_hermitian_in_window(d, &window, sub(&mut rng))?;
        let b = random_hermitian_in_window(d, &window, sub(&mut rng))?;
        let a_sb = connection_apply(spec, &a, &b)?;

        // Monotonicity: A <= A + P, B <= B + Q.
        let p = random_psd(d, sub(&mut rng))?.scale(0.5);
        let q = random_psd(d, sub(&mut rng))?.scale(0.5);
        let big = connection_apply(spec, &(&a + &p), &(&b + &q))?;
        mono = mono.min(loewner_margin(&a_sb, &big)?);

        // Transformer inequality with a PSD factor of random rank.
        let rank = 1 + (trial as usize % d);
        let c_psd = random_psd_with_rank(d, rank, &mut rng);
        let lhs = c_psd.sandwich(&a_sb)?;
        let rhs = connection_apply(spec, &c_psd.sandwich(&a)?, &c_psd.sandwich(&b)?)?;
        transformer = transformer.min(loewner_margin(&lhs, &rhs)?);

        // Congruence equality for invertible C.
        let c_pd = random_hermitian_in_window(d, &congruence_window, sub(&mut rng))?;
        let lhs = c_pd.sandwich(&a_sb)?;
        let rhs = connection_apply(spec, &c_pd.sandwich(&a)?, &c_pd.sandwich(&b)?)?;
        let scale = 1.0 + lhs.operator_norm();
        congruence = congruence.max((&lhs - &rhs).operator_norm() / scale);

        // Superadditivity: (A + B) sigma (C + D) >= A sigma C + B sigma D.
        let c2 = random_hermitian_in_window(d, &window, sub(&mut rng))?;
        let d2 = random_hermitian_in_window(d, &window, sub(&mut rng))?;
        let joint = connection_apply(spec, &(&a + &b), &(&c2 + &d2))?;
        let split = &connection_apply(spec, &a, &c2)? + &connection_apply(spec, &b, &d2)?;
        superadd = superadd.min(loewner_margin(&split, &joint)?);

        // Fixed point A sigma A = f(1) A (equality for means); evaluated
        // through the full formula rather than the bitwise shortcut.
        let a_pert = HermitianMatrix::from_complex(a.to_complex())?;
        let fp = connection_apply(spec, &a, &a_pert)?;
        let expect = a.scale(spec.f.eval(1.0)?);
        fixed_point = fixed_point.max((&fp - &expect).operator_norm() / (1.0 + a.operator_norm()));

        // Representing identity f(B) = I sigma B.
        let id = HermitianMatrix::identity(d);
        let via_connection = connection_apply(spec, &id, &b)?;
        let direct = b.apply_expr(&spec.f.to_expr())?;
        rep_identity =
            rep_identity.max((&via_connection - &direct).operator_norm() / (1.0 + b.operator_norm()));

        // Axioms at the identity hold with exact arithmetic.
        let _ = trial;
    }

    Ok(AxiomReport {
        connection: format!("{:?}", spec.f),
        dim: d,
        trials,
        seed,
        monotonicity_min_margin: mono,
        transformer_min_margin: transformer,
        superadditivity_min_margin: superadd,
        congruence_max_rel_deviation: congruence,
        fixed_point_max_rel_deviation: fixed_point,
        representing_identity_max_deviation: rep_identity,
    })
}

/// PSD matrix with exactly `rank` nonzero eigenvalues drawn from [0.2, 1.5].
fn random_psd_with_rank(d: usize, rank: usize, rng: &mut ChaCha8Rng) -> HermitianMatrix {
    let u = random_unitary(d, rng);
    let mut evals = vec![0.0; d];
    for v in evals.iter_mut().take(rank) {
        *v = rng.gen_range(0.2..=1.5);
    }
    let mut scaled = u.clone();
    for j in 0..d {
        for i in 0..d {
            scaled[(i, j)] = u[(i, j)] * evals[j];
        }
    }
    HermitianMatrix::hermitian_part(&scaled.mul(&u.adjoint()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::HermitianMatrix;

    fn assert_close(x: f64, y: f64, tol: f64) {
        assert!((x - y).abs() <= tol, "{x} vs {y} (tol {tol})");
    }

    #[test]
    fn scalar_connection_examples() {
        let geo = ConnectionSpec::geometric();
        assert_close(scalar_connection(&geo, 1.0, 4.0), 2.0, 1e-12);
        let ar = ConnectionSpec::arithmetic();
        assert_close(scalar_connection(&ar, 3.0, 5.0), 4.0, 1e-12);
        let ha = ConnectionSpec::harmonic();
        assert_close(scalar_connection(&ha, 1.0, 2.0), 4.0 / 3.0, 1e-12);
    }

    #[test]
    fn connection_apply_scalar_case() {
        let geo = ConnectionSpec::geometric();
        let a = HermitianMatrix::scaled_identity(2, 1.0);
        let b = HermitianMatrix::scaled_identity(2, 4.0);
        let m = connection_apply(&geo, &a, &b).unwrap();
        assert!((&m - &HermitianMatrix::scaled_identity(2, 2.0)).operator_norm() < 1e-12);
    }

    #[test]
    fn connection_fixed_point_is_exact() {
        let specs = [
            ConnectionSpec::arithmetic(),
            ConnectionSpec::geometric(),
            ConnectionSpec::harmonic(),
            ConnectionSpec::power(0.3).unwrap(),
        ];
        let a = random_psd(3, 11).unwrap();
        for spec in &specs {
            let m = connection_apply(spec, &a, &a).unwrap();
            assert_eq!(m, a, "fixed point must be exact for {:?}", spec.f());
        }
    }

    #[test]
    fn geometric_mean_of_identity_is_sqrt() {
        let geo = ConnectionSpec::geometric();
        let b = HermitianMatrix::from_real_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]).unwrap();
        let m = connection_apply(&geo, &HermitianMatrix::identity(2), &b).unwrap();
        let spec = m.eig().unwrap().eigenvalues;
        assert_close(spec[0], 1.0, 1e-12);
        assert_close(spec[1], 3.0f64.sqrt(), 1e-12);
    }

    #[test]
    fn representing_identity_over_random_inputs() {
        let specs = [
            ConnectionSpec::arithmetic(),
            ConnectionSpec::geometric(),
            ConnectionSpec::harmonic(),
            ConnectionSpec::power(0.25).unwrap(),
            ConnectionSpec::power(0.75).unwrap(),
        ];
        let id = HermitianMatrix::identity(3);
        for seed in 0..100u64 {
            let a = random_psd(3, seed).unwrap();
            for spec in &specs {
                let lhs = connection_apply(spec, &id, &a).unwrap();
                let rhs = a.apply_expr(&spec.f().to_expr()).unwrap();
                assert!(
                    (&lhs - &rhs).operator_norm() < 1e-10,
                    "seed {seed} {:?}",
                    spec.f()
                );
            }
        }
    }

    #[test]
    fn scalar_consistency_on_identity_multiples() {
        let specs = [
            ConnectionSpec::geometric(),
            ConnectionSpec::harmonic(),
            ConnectionSpec::power(0.5).unwrap(),
        ];
        for spec in &specs {
            for &(x, y) in &[(1.0, 4.0), (0.3, 0.7), (2.0, 2.0), (5.0, 0.25)] {
                let a = HermitianMatrix::scaled_identity(3, x);
                let b = HermitianMatrix::scaled_identity(3, y);
                let m = connection_apply(spec, &a, &b).unwrap();
                let s = scalar_connection(spec, x, y);
                assert!(
                    (&m - &HermitianMatrix::scaled_identity(3, s)).operator_norm() < 1e-12
                );
            }
        }
    }

    #[test]
    fn norm_bound_lemma() {
        // |A sigma B| <= |A| sigma |B| over random positive pairs.
        let specs = [
            ConnectionSpec::arithmetic(),
            ConnectionSpec::geometric(),
            ConnectionSpec::harmonic(),
        ];
        for seed in 0..500u64 {
            let d = 2 + (seed % 3) as usize;
            let a = random_psd(d, seed).unwrap().scale(1.5);
            let b = random_psd(d, seed + 10_000).unwrap().scale(0.8);
            let spec = &specs[(seed % 3) as usize];
            let lhs = connection_apply(spec, &a, &b).unwrap().operator_norm();
            let rhs = scalar_connection(spec, a.operator_norm(), b.operator_norm());
            assert!(lhs <= rhs + 1e-9, "seed {seed}: {lhs} > {rhs}");
        }
    }

    #[test]
    fn regularization_stability() {
        let w = SpectrumWindow::new(1e-3, 1.0).unwrap();
        for seed in 0..50u64 {
            let a = random_hermitian_in_window(3, &w, seed).unwrap();
            let b = random_psd(3, seed + 77).unwrap();
            let f = RepresentingFunction::Geometric;
            let lo = connection_apply(&ConnectionSpec::with_eps(f.clone(), 1e-8).unwrap(), &a, &b)
                .unwrap();
            let hi = connection_apply(&ConnectionSpec::with_eps(f, 1e-9).unwrap(), &a, &b).unwrap();
            assert!((&lo - &hi).operator_norm() <= 1e-6, "seed {seed}");
        }
    }

    #[test]
    fn super_multiplicative_checks() {
        // Geometric and powers are multiplicative: no violations anywhere.
        let grid = default_supermult_grid();
        assert!(check_super_multiplicative(&RepresentingFunction::Geometric, &grid)
            .unwrap()
            .is_empty());
        assert!(check_super_multiplicative(
            &RepresentingFunction::Power { alpha: 0.37 },
            &grid
        )
        .unwrap()
        .is_empty());

        // The harmonic representing function fails at (0.5, 0.5):
        // f(0.25) = 0.4 < f(0.5)^2 = 4/9.
        let report = check_super_multiplicative(
            &RepresentingFunction::Harmonic,
            &[0.25, 0.5, 1.0, 2.0],
        )
        .unwrap();
        let hit = report
            .violations
            .iter()
            .find(|v| v.x == 0.5 && v.y == 0.5)
            .expect("violation at (0.5, 0.5)");
        assert_close(hit.lhs, 0.4, 1e-12);
        assert_close(hit.rhs, 4.0 / 9.0, 1e-12);
    }

    #[test]
    fn power_alpha_range_enforced() {
        assert!(RepresentingFunction::power(0.0).is_ok());
        assert!(RepresentingFunction::power(1.0).is_ok());
        assert!(RepresentingFunction::power(1.5).is_err());
        assert!(RepresentingFunction::power(-0.25).is_err());
    }

    #[test]
    fn connection_spec_json() {
        let s = r#"{"kind":"power","alpha":0.5,"eps":1e-10}"#;
        let c: ConnectionSpec = serde_json::from_str(s).unwrap();
        assert_eq!(c.f(), &RepresentingFunction::Power { alpha: 0.5 });
        assert_eq!(c.eps(), 1e-10);

        let named: ConnectionSpec = serde_json::from_str(r#"{"kind":"geometric"}"#).unwrap();
        assert_eq!(named.f(), &RepresentingFunction::Geometric);
        assert_eq!(named.eps(), DEFAULT_REGULARIZATION_EPS);

        assert!(serde_json::from_str::<ConnectionSpec>(r#"{"kind":"power","alpha":2.0}"#).is_err());
    }

    #[test]
    fn rejects_non_psd_inputs() {
        let geo = ConnectionSpec::geometric();
        let neg = HermitianMatrix::diagonal(&[-1.0, 1.0]);
        let pos = HermitianMatrix::identity(2);
        assert!(connection_apply(&geo, &neg, &pos).is_err());
        assert!(connection_apply(&geo, &pos, &neg).is_err());
    }

    #[test]
    fn axiom_margins_smoke() {
        for spec in [
            ConnectionSpec::arithmetic(),
            ConnectionSpec::geometric(),
            ConnectionSpec::harmonic(),
        ] {
            let r = check_connection_axioms(&spec, 31, 60, 3).unwrap();
            assert!(r.monotonicity_min_margin >= -1e-9, "{r:?}");
            assert!(r.transformer_min_margin >= -1e-9, "{r:?}");
            assert!(r.superadditivity_min_margin >= -1e-9, "{r:?}");
            assert!(r.congruence_max_rel_deviation <= 1e-8, "{r:?}");
            assert!(r.fixed_point_max_rel_deviation <= 1e-9, "{r:?}");
            assert!(r.representing_identity_max_deviation <= 1e-10, "{r:?}");
        }
    }
}
