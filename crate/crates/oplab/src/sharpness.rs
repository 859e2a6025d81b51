//! Sharpness certification: explicit extremal configurations attaining the
//! catalog constants, plus a randomized multi-start hill climb over node
//! spectra, eigenbases and PSD weights that searches for the supremal
//! LHS/RHS ratio.
//!
//! The search reports lower bounds on the supremum only; soundness (the
//! ratio never exceeding the proven constant) is what the theorems assert
//! and what the tests pin.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{OplabError, Result};
use crate::fields::OperatorField;
use crate::matrix::{
    kron, random_unitary, tensor_power2, ComplexMatrix, HermitianMatrix, SpectrumWindow,
    MAX_FIELD_DIM,
};
use crate::scalar::ScalarExpr;
use crate::verifiers::{CaseId, KantorovichCase, WeightSpec};

/// Relative spectral cutoff for pseudo-inversion of the RHS.
const PSEUDO_INV_CUTOFF: f64 = 1e-10;
/// Step decay applied after every 100 non-improving proposals.
const STEP_DECAY: f64 = 0.9;
const DECAY_PATIENCE: u64 = 100;
const INITIAL_STEP: f64 = 0.3;

/// The serialized configuration behind a sharpness figure.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessConfig {
    /// `A = a I`, `B = b I` (pair-bound equality case).
    ScalarPair { a: f64, b: f64, dim: usize },
    /// Two-point field `{a I, b I}` with complementary projection weights.
    ProjectionTwoPoint { a: f64, b: f64, dim: usize },
    /// A searched operator-weight configuration.
    Configuration {
        samples: Vec<HermitianMatrix>,
        weights: Vec<HermitianMatrix>,
    },
    /// A searched fully scalar configuration (`A_t = v_t I`, `W_t = w_t I`).
    ScalarConfiguration { values: Vec<f64>, weights: Vec<f64> },
}

/// Outcome of a witness construction or ratio search.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SharpnessResult {
    pub case_id: CaseId,
    /// Max eigenvalue of the pseudo-whitened LHS; directly comparable to the
    /// constant.
    pub best_ratio: f64,
    pub target_constant: f64,
    /// `target_constant - best_ratio`.
    pub gap: f64,
    pub witness: WitnessConfig,
    pub evaluations: u64,
    pub seed: Option<u64>,
}

/// `lambda_max(R^{+1/2} L R^{+1/2})` with spectral pseudo-inversion of `R`
/// below the relative cutoff `1e-10 |R|`.
pub fn whitened_ratio(lhs: &HermitianMatrix, rhs_base: &HermitianMatrix) -> Result<f64> {
    let s = rhs_base.eig()?;
    let max = s.eigenvalues.iter().fold(0.0f64, |m, &l| m.max(l));
    if max <= 0.0 {
        return Ok(0.0);
    }
    let cutoff = PSEUDO_INV_CUTOFF * max;
    let pseudo = s.apply(|l| if l > cutoff { 1.0 / l.sqrt() } else { 0.0 });
    pseudo.sandwich(lhs)?.max_eigenvalue()
}

/// Equality witness for the pair bound: `A = a I`, `B = b I` turns
/// `A (x) B^{-1} + A^{-1} (x) B` into `(a/b + b/a) I`.
pub fn extremal_lemma31(window: &SpectrumWindow, d: usize) -> Result<SharpnessResult> {
    if d == 0 || d > MAX_FIELD_DIM {
        return Err(OplabError::InvalidDimension {
            dim: d,
            reason: format!("witness dimension must satisfy 1 <= d <= {MAX_FIELD_DIM}"),
        });
    }
    let (a, b) = (window.a(), window.b());
    let ma = HermitianMatrix::scaled_identity(d, a);
    let mb = HermitianMatrix::scaled_identity(d, b);
    let lhs = &kron(&ma, &mb.apply_expr(&ScalarExpr::Recip)?)?
        + &kron(&ma.apply_expr(&ScalarExpr::Recip)?, &mb)?;
    let target = window.pair_bound();
    let best_ratio = whitened_ratio(&lhs, &HermitianMatrix::identity(lhs.dim()))?;
    Ok(SharpnessResult {
        case_id: CaseId::Lem31,
        best_ratio,
        target_constant: target,
        gap: target - best_ratio,
        witness: WitnessConfig::ScalarPair { a, b, dim: d },
        evaluations: 1,
        seed: None,
    })
}

/// Constructive sharpness witness for the tensor constant: the two-point
/// field `{a I, b I}` weighted by a rank-one projection and its complement.
/// Equality is attained on the `P (x) (I - P)` eigenspace.
pub fn projection_witness_thm32(window: &SpectrumWindow, d: usize) -> Result<SharpnessResult> {
    if d < 2 || d > MAX_FIELD_DIM {
        return Err(OplabError::InvalidDimension {
            dim: d,
            reason: format!("projection witness needs 2 <= d <= {MAX_FIELD_DIM}"),
        });
    }
    let (a, b) = (window.a(), window.b());
    let mut p = vec![0.0; d];
    p[0] = 1.0;
    let proj = HermitianMatrix::diagonal(&p);
    let comp = &HermitianMatrix::identity(d) - &proj;
    let samples = vec![
        HermitianMatrix::scaled_identity(d, a),
        HermitianMatrix::scaled_identity(d, b),
    ];
    let weights = vec![proj, comp];
    let best_ratio = thm32_ratio(&samples, &weights)?;
    let target = window.tensor_constant();
    Ok(SharpnessResult {
        case_id: CaseId::Thm32,
        best_ratio,
        target_constant: target,
        gap: target - best_ratio,
        witness: WitnessConfig::ProjectionTwoPoint { a, b, dim: d },
        evaluations: 1,
        seed: None,
    })
}

/// Whitened LHS/RHS ratio of the THM32 configuration given by discrete
/// samples and weights.
fn thm32_ratio(samples: &[HermitianMatrix], weights: &[HermitianMatrix]) -> Result<f64> {
    let field = OperatorField::discrete(samples.to_vec())?;
    let wfield = WeightSpec::Field(OperatorField::discrete(weights.to_vec())?);
    let case = KantorovichCase::thm32();
    let nodes = crate::fields::quadrature_nodes(
        &field,
        &crate::fields::MeasureSpec::counting(),
        &crate::fields::QuadratureRule::default(),
    )?;
    let (l_left, l_right, w_sum) =
        crate::verifiers::engine_integrals(&case, &field, &wfield, &nodes)?;
    let lhs = crate::matrix::sym_tensor(&l_left, &l_right)?;
    whitened_ratio(&lhs, &tensor_power2(&w_sum)?)
}

/// Search space for [`ratio_search`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchSpace {
    /// Node spectra in the window, arbitrary eigenbases, PSD operator
    /// weights.
    Full,
    /// The classical configuration: scalar samples `v_t I` and scalar
    /// weights `w_t I`. Its supremum is the classical constant
    /// `(a+b)^2 / (4ab)`, strictly below the operator-weight constant.
    Scalar,
}

#[derive(Clone, Debug)]
pub struct RatioSearchConfig {
    pub window: SpectrumWindow,
    pub dim: usize,
    pub n_nodes: usize,
    pub budget: u64,
    pub seed: u64,
    pub space: SearchSpace,
    pub restarts: u64,
}

impl RatioSearchConfig {
    pub fn new(window: SpectrumWindow, dim: usize, n_nodes: usize, budget: u64, seed: u64) -> Self {
        RatioSearchConfig {
            window,
            dim,
            n_nodes,
            budget,
            seed,
            space: SearchSpace::Full,
            restarts: 8,
        }
    }

    pub fn scalar(mut self) -> Self {
        self.space = SearchSpace::Scalar;
        self
    }
}

/// Randomized multi-start hill climb for the supremal LHS/RHS ratio of the
/// given case (`THM32` or `LEM31`).
///
/// Deterministic for a fixed seed; restarts draw independent seeds
/// `seed + r` and the best ratio is monotone nondecreasing in the budget.
pub fn ratio_search(case_id: CaseId, config: &RatioSearchConfig) -> Result<SharpnessResult> {
    if config.budget < 1 {
        return Err(OplabError::InvalidInput("search budget must be >= 1".into()));
    }
    if config.dim == 0 || config.dim > MAX_FIELD_DIM {
        return Err(OplabError::InvalidDimension {
            dim: config.dim,
            reason: format!("search dimension must satisfy 1 <= d <= {MAX_FIELD_DIM}"),
        });
    }
    if config.n_nodes == 0 {
        return Err(OplabError::InvalidInput("need at least one node".into()));
    }
    match (case_id, config.space) {
        (CaseId::Thm32, SearchSpace::Full) => search_thm32_full(config),
        (CaseId::Thm32, SearchSpace::Scalar) => search_thm32_scalar(config),
        (CaseId::Lem31, _) => search_lem31(config),
        _ => Err(OplabError::InvalidInput(format!(
            "ratio search supports THM32 and LEM31, got {case_id}"
        ))),
    }
}

/// Generic hill climb over a state type: propose, evaluate, keep on strict
/// improvement, decay the step scale after repeated rejections.
fn hill_climb<S: Clone>(
    config: &RatioSearchConfig,
    init: impl Fn(&mut ChaCha8Rng, u64) -> S,
    perturb: impl Fn(&S, &mut ChaCha8Rng, f64) -> S,
    evaluate: impl Fn(&S) -> Result<f64>,
) -> Result<(f64, S, u64)> {
    let restarts = config.restarts.max(1);
    let base = config.budget / restarts;
    let extra = config.budget % restarts;
    let mut best: Option<(f64, S)> = None;
    let mut used = 0u64;

    for r in 0..restarts {
        let evals = base + u64::from(r < extra);
        if evals == 0 {
            continue;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(r));
        let mut state = init(&mut rng, r);
        let mut ratio = evaluate(&state)?;
        used += 1;
        let mut step = INITIAL_STEP;
        let mut stale = 0u64;
        for _ in 1..evals {
            let candidate = perturb(&state, &mut rng, step);
            let value = evaluate(&candidate)?;
            used += 1;
            if value > ratio {
                ratio = value;
                state = candidate;
                stale = 0;
            } else {
                stale += 1;
                if stale % DECAY_PATIENCE == 0 {
                    step *= STEP_DECAY;
                }
            }
        }
        let better = best.as_ref().map(|(b, _)| ratio > *b).unwrap_or(true);
        if better {
            best = Some((ratio, state));
        }
    }
    let (ratio, state) = best.expect("budget >= 1 guarantees one evaluated restart");
    Ok((ratio, state, used))
}

// --- THM32, full operator-weight space --------------------------------------

#[derive(Clone)]
struct Thm32State {
    evals: Vec<Vec<f64>>,
    bases: Vec<ComplexMatrix>,
    factors: Vec<ComplexMatrix>,
}

impl Thm32State {
    fn materialize(&self) -> Result<(Vec<HermitianMatrix>, Vec<HermitianMatrix>)> {
        let samples: Vec<HermitianMatrix> = self
            .evals
            .iter()
            .zip(&self.bases)
            .map(|(l, u)| conjugate(u, l))
            .collect();
        let weights: Vec<HermitianMatrix> = self
            .factors
            .iter()
            .map(|g| HermitianMatrix::hermitian_part(&g.adjoint().mul(g)))
            .collect();
        Ok((samples, weights))
    }
}

fn conjugate(u: &ComplexMatrix, evals: &[f64]) -> HermitianMatrix {
    let d = u.dim();
    let mut scaled = u.clone();
    for j in 0..d {
        for i in 0..d {
            scaled[(i, j)] = u[(i, j)] * evals[j];
        }
    }
    HermitianMatrix::hermitian_part(&scaled.mul(&u.adjoint()))
}

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    rng.sample::<f64, _>(rand_distr::StandardNormal)
}

fn ginibre_like(d: usize, rng: &mut ChaCha8Rng, scale: f64) -> ComplexMatrix {
    ComplexMatrix::from_fn(d, |_, _| {
        num_complex::Complex64::new(gaussian(rng) * scale, gaussian(rng) * scale)
    })
}

fn reunitarize(u: &ComplexMatrix, rng: &mut ChaCha8Rng, step: f64) -> ComplexMatrix {
    let d = u.dim();
    let noise = ginibre_like(d, rng, step);
    let perturbed = u.add(&noise);
    orthonormalize(&perturbed).unwrap_or_else(|| random_unitary(d, rng))
}

/// Modified Gram-Schmidt; returns None when a column degenerates.
fn orthonormalize(m: &ComplexMatrix) -> Option<ComplexMatrix> {
    let d = m.dim();
    let mut q = m.clone();
    for j in 0..d {
        for i in 0..j {
            let mut r = num_complex::Complex64::new(0.0, 0.0);
            for k in 0..d {
                r += q[(k, i)].conj() * q[(k, j)];
            }
            for k in 0..d {
                let qki = q[(k, i)];
                q[(k, j)] -= r * qki;
            }
        }
        let norm = (0..d).map(|k| q[(k, j)].norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-12 {
            return None;
        }
        for k in 0..d {
            q[(k, j)] /= norm;
        }
    }
    Some(q)
}

fn search_thm32_full(config: &RatioSearchConfig) -> Result<SharpnessResult> {
    let (a, b) = (config.window.a(), config.window.b());
    let (d, n) = (config.dim, config.n_nodes);

    let init = |rng: &mut ChaCha8Rng, restart: u64| {
        // Odd restarts bias node spectra to the window endpoints, where the
        // extremal configurations live; even restarts start uniform.
        let endpoint = restart % 2 == 1;
        let evals: Vec<Vec<f64>> = (0..n)
            .map(|_| {
                (0..d)
                    .map(|_| {
                        if endpoint {
                            if rng.gen_bool(0.5) {
                                a
                            } else {
                                b
                            }
                        } else {
                            rng.gen_range(a..=b)
                        }
                    })
                    .collect()
            })
            .collect();
        let bases = (0..n).map(|_| random_unitary(d, rng)).collect();
        let factors = (0..n).map(|_| ginibre_like(d, rng, 1.0)).collect();
        Thm32State {
            evals,
            bases,
            factors,
        }
    };

    let perturb = |state: &Thm32State, rng: &mut ChaCha8Rng, step: f64| {
        let mut next = state.clone();
        let node = rng.gen_range(0..n);
        match rng.gen_range(0..3u8) {
            0 => {
                for l in next.evals[node].iter_mut() {
                    *l = (*l + step * (b - a) * gaussian(rng)).clamp(a, b);
                }
            }
            1 => {
                next.bases[node] = reunitarize(&state.bases[node], rng, step);
            }
            _ => {
                let noise = ginibre_like(d, rng, step);
                next.factors[node] = state.factors[node].add(&noise);
            }
        }
        next
    };

    let evaluate = |state: &Thm32State| {
        let (samples, weights) = state.materialize()?;
        thm32_ratio(&samples, &weights)
    };

    let (best_ratio, state, used) = hill_climb(config, init, perturb, evaluate)?;
    let (samples, weights) = state.materialize()?;
    let target = config.window.tensor_constant();
    Ok(SharpnessResult {
        case_id: CaseId::Thm32,
        best_ratio,
        target_constant: target,
        gap: target - best_ratio,
        witness: WitnessConfig::Configuration { samples, weights },
        evaluations: used,
        seed: Some(config.seed),
    })
}

// --- THM32, classical scalar configuration ----------------------------------

#[derive(Clone)]
struct ScalarState {
    values: Vec<f64>,
    weights: Vec<f64>,
}

fn search_thm32_scalar(config: &RatioSearchConfig) -> Result<SharpnessResult> {
    let (a, b) = (config.window.a(), config.window.b());
    let (d, n) = (config.dim, config.n_nodes);

    let init = |rng: &mut ChaCha8Rng, restart: u64| {
        let endpoint = restart % 2 == 1;
        ScalarState {
            values: (0..n)
                .map(|_| {
                    if endpoint {
                        if rng.gen_bool(0.5) {
                            a
                        } else {
                            b
                        }
                    } else {
                        rng.gen_range(a..=b)
                    }
                })
                .collect(),
            weights: (0..n).map(|_| rng.gen_range(1e-3..=1.0)).collect(),
        }
    };

    let perturb = |state: &ScalarState, rng: &mut ChaCha8Rng, step: f64| {
        let mut next = state.clone();
        let node = rng.gen_range(0..n);
        if rng.gen_bool(0.5) {
            next.values[node] = (state.values[node] + step * (b - a) * gaussian(rng)).clamp(a, b);
        } else {
            next.weights[node] = (state.weights[node] + step * gaussian(rng)).clamp(1e-6, 1.0);
        }
        next
    };

    let evaluate = |state: &ScalarState| {
        let samples: Vec<HermitianMatrix> = state
            .values
            .iter()
            .map(|&v| HermitianMatrix::scaled_identity(d, v))
            .collect();
        let weights: Vec<HermitianMatrix> = state
            .weights
            .iter()
            .map(|&w| HermitianMatrix::scaled_identity(d, w))
            .collect();
        thm32_ratio(&samples, &weights)
    };

    let (best_ratio, state, used) = hill_climb(config, init, perturb, evaluate)?;
    let target = config.window.classical_constant();
    Ok(SharpnessResult {
        case_id: CaseId::Thm32,
        best_ratio,
        target_constant: target,
        gap: target - best_ratio,
        witness: WitnessConfig::ScalarConfiguration {
            values: state.values,
            weights: state.weights,
        },
        evaluations: used,
        seed: Some(config.seed),
    })
}

// --- LEM31 pair bound --------------------------------------------------------

#[derive(Clone)]
struct PairState {
    evals: [Vec<f64>; 2],
    bases: [ComplexMatrix; 2],
}

fn search_lem31(config: &RatioSearchConfig) -> Result<SharpnessResult> {
    let (a, b) = (config.window.a(), config.window.b());
    let d = config.dim;

    let init = |rng: &mut ChaCha8Rng, restart: u64| {
        let endpoint = restart % 2 == 1;
        let draw = |rng: &mut ChaCha8Rng| -> Vec<f64> {
            (0..d)
                .map(|_| {
                    if endpoint {
                        if rng.gen_bool(0.5) {
                            a
                        } else {
                            b
                        }
                    } else {
                        rng.gen_range(a..=b)
                    }
                })
                .collect()
        };
        PairState {
            evals: [draw(rng), draw(rng)],
            bases: [random_unitary(d, rng), random_unitary(d, rng)],
        }
    };

    let perturb = |state: &PairState, rng: &mut ChaCha8Rng, step: f64| {
        let mut next = state.clone();
        let which = rng.gen_range(0..2);
        if rng.gen_bool(0.5) {
            for l in next.evals[which].iter_mut() {
                *l = (*l + step * (b - a) * gaussian(rng)).clamp(a, b);
            }
        } else {
            next.bases[which] = reunitarize(&state.bases[which], rng, step);
        }
        next
    };

    let evaluate = |state: &PairState| -> Result<f64> {
        let ma = conjugate(&state.bases[0], &state.evals[0]);
        let mb = conjugate(&state.bases[1], &state.evals[1]);
        let lhs = &kron(&ma, &mb.apply_expr(&ScalarExpr::Recip)?)?
            + &kron(&ma.apply_expr(&ScalarExpr::Recip)?, &mb)?;
        whitened_ratio(&lhs, &HermitianMatrix::identity(lhs.dim()))
    };

    let (best_ratio, state, used) = hill_climb(config, init, perturb, evaluate)?;
    let target = config.window.pair_bound();
    Ok(SharpnessResult {
        case_id: CaseId::Lem31,
        best_ratio,
        target_constant: target,
        gap: target - best_ratio,
        witness: WitnessConfig::Configuration {
            samples: vec![
                conjugate(&state.bases[0], &state.evals[0]),
                conjugate(&state.bases[1], &state.evals[1]),
            ],
            weights: vec![],
        },
        evaluations: used,
        seed: Some(config.seed),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(x: f64, y: f64, tol: f64) {
        assert!((x - y).abs() <= tol, "{x} vs {y} (tol {tol})");
    }

    fn window12() -> SpectrumWindow {
        SpectrumWindow::new(1.0, 2.0).unwrap()
    }

    #[test]
    fn lemma31_witness_hits_pair_bound() {
        let r = extremal_lemma31(&window12(), 2).unwrap();
        assert_close(r.best_ratio, 2.5, 1e-12);
        assert!(r.gap.abs() <= 1e-10);

        let degenerate = SpectrumWindow::new(0.8, 0.8).unwrap();
        let r = extremal_lemma31(&degenerate, 3).unwrap();
        assert_close(r.best_ratio, 2.0, 1e-12);
        assert!(r.gap.abs() <= 1e-10);

        let w13 = SpectrumWindow::new(1.0, 3.0).unwrap();
        let r = extremal_lemma31(&w13, 4).unwrap();
        assert_close(r.best_ratio, 10.0 / 3.0, 1e-10);
        assert!(r.gap.abs() <= 1e-10);
    }

    #[test]
    fn projection_witness_attains_constant() {
        for d in 2..=8 {
            let r = projection_witness_thm32(&window12(), d).unwrap();
            assert!(r.gap.abs() <= 1e-10, "d = {d}: gap {}", r.gap);
            assert_close(r.best_ratio, 1.25, 1e-10);
        }
        let w15 = SpectrumWindow::new(1.0, 5.0).unwrap();
        let r = projection_witness_thm32(&w15, 3).unwrap();
        assert_close(r.best_ratio, 2.6, 1e-10);

        let unit = SpectrumWindow::new(1.0, 1.0).unwrap();
        let r = projection_witness_thm32(&unit, 2).unwrap();
        assert_close(r.best_ratio, 1.0, 1e-12);

        assert!(projection_witness_thm32(&window12(), 1).is_err());
    }

    #[test]
    fn search_soundness_and_budget_monotonicity() {
        let mut config = RatioSearchConfig::new(window12(), 2, 2, 120, 5);
        let r1 = ratio_search(CaseId::Thm32, &config).unwrap();
        assert!(r1.best_ratio >= 1.0 - 1e-12);
        assert!(r1.best_ratio <= 1.25 + 1e-8, "ratio {}", r1.best_ratio);
        assert_eq!(r1.evaluations, 120);

        config.budget = 240;
        let r2 = ratio_search(CaseId::Thm32, &config).unwrap();
        assert!(r2.best_ratio >= r1.best_ratio);

        // Single evaluation: soundness envelope only.
        config.budget = 1;
        let r0 = ratio_search(CaseId::Thm32, &config).unwrap();
        assert!(r0.best_ratio >= 1.0 - 1e-12 && r0.best_ratio <= 1.25 + 1e-8);
    }

    #[test]
    fn search_determinism() {
        let config = RatioSearchConfig::new(window12(), 2, 2, 150, 11);
        let a = ratio_search(CaseId::Thm32, &config).unwrap();
        let b = ratio_search(CaseId::Thm32, &config).unwrap();
        assert_eq!(a.best_ratio.to_bits(), b.best_ratio.to_bits());
    }

    #[test]
    fn full_search_rediscovers_projection_witness() {
        let config = RatioSearchConfig::new(window12(), 2, 2, 5000, 7);
        let r = ratio_search(CaseId::Thm32, &config).unwrap();
        assert!(r.best_ratio >= 1.2499, "best ratio {}", r.best_ratio);
        assert!(r.best_ratio <= 1.25 + 1e-8);
    }

    #[test]
    fn scalar_search_reaches_classical_ceiling() {
        let config = RatioSearchConfig::new(window12(), 2, 2, 5000, 3).scalar();
        let r = ratio_search(CaseId::Thm32, &config).unwrap();
        assert_close(r.best_ratio, 1.125, 1e-4);
        assert!(r.best_ratio <= 1.125 + 1e-6);
        assert_close(r.target_constant, 1.125, 0.0);
    }

    #[test]
    fn lem31_search_is_sound() {
        let config = RatioSearchConfig::new(window12(), 2, 2, 2000, 13);
        let r = ratio_search(CaseId::Lem31, &config).unwrap();
        assert!(r.best_ratio <= 2.5 + 1e-8);
        assert!(r.best_ratio >= 2.0 - 1e-12, "ratio {}", r.best_ratio);
    }

    #[test]
    fn unsupported_case_rejected() {
        let config = RatioSearchConfig::new(window12(), 2, 2, 10, 1);
        assert!(ratio_search(CaseId::Eq11, &config).is_err());
    }
}
