//! Randomized soundness suite: seeded instance generators for every catalog
//! case, plus the aggregation used by the `suite` subcommand.
//!
//! Each trial is fully determined by `(case_id, dim, trial_seed)`, so any
//! row of a suite report can be replayed bit for bit from its recorded seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::fields::{FieldTerm, MeasureSpec, OperatorField, QuadScheme, QuadratureRule};
use crate::matrix::{
    random_hermitian_ball, random_hermitian_in_window, random_psd, HermitianMatrix,
    SpectrumWindow,
};
use crate::means::{ConnectionSpec, RepresentingFunction};
use crate::scalar::ScalarExpr;
use crate::verifiers::{
    kantorovich_engine, verify_hadamard_kantorovich, verify_lemma31, verify_lemma43,
    verify_lemma44, verify_mean_kantorovich, verify_scalar_gruss, verify_scalar_kantorovich,
    CaseId, KantorovichCase, VerificationReport, WeightSpec,
};

/// The window pool the suite samples from.
pub const SUITE_WINDOWS: [(f64, f64); 3] = [(1.0, 2.0), (1.0, 5.0), (0.5, 1.5)];

/// One suite trial, in the CSV column order.
#[derive(Clone, Debug, Serialize)]
pub struct TrialRow {
    pub case_id: CaseId,
    pub seed: u64,
    pub dim: usize,
    pub n_nodes: usize,
    pub a: f64,
    pub b: f64,
    pub margin: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseSummary {
    pub case_id: CaseId,
    pub trials: u64,
    pub failures: u64,
    pub min_margin: f64,
    /// Replay seed of the worst-margin trial.
    pub min_margin_seed: u64,
    pub rows: Vec<TrialRow>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub trials_per_case: u64,
    pub dims: Vec<usize>,
    pub cases: Vec<CaseSummary>,
}

impl SuiteReport {
    pub fn total_failures(&self) -> u64 {
        self.cases.iter().map(|c| c.failures).sum()
    }

    /// CSV rows in the schema `case_id,seed,dim,n_nodes,a,b,margin,pass`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("case_id,seed,dim,n_nodes,a,b,margin,pass\n");
        for case in &self.cases {
            for r in &case.rows {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{:.17e},{}\n",
                    r.case_id, r.seed, r.dim, r.n_nodes, r.a, r.b, r.margin, r.pass
                ));
            }
        }
        out
    }
}

/// Run seeded random trials for the given cases. Trial `t` of every case
/// uses seed `seed + t` and dimension `dims[t % dims.len()]`.
pub fn run_suite(
    cases: &[CaseId],
    seed: u64,
    trials: u64,
    dims: &[usize],
    rel_tol: f64,
) -> Result<SuiteReport> {
    let mut summaries = Vec::with_capacity(cases.len());
    for &case_id in cases {
        let mut rows = Vec::with_capacity(trials as usize);
        let mut failures = 0;
        let mut min_margin = f64::INFINITY;
        let mut min_margin_seed = seed;
        for t in 0..trials {
            let trial_seed = seed.wrapping_add(t);
            let dim = dims[(t as usize) % dims.len()];
            let (mut report, meta) = run_case_trial_meta(case_id, dim, trial_seed)?;
            report.apply_tolerance(rel_tol);
            let row = TrialRow {
                case_id,
                seed: trial_seed,
                dim,
                n_nodes: meta.n_nodes,
                a: meta.window.a(),
                b: meta.window.b(),
                margin: report.margin,
                pass: report.pass,
            };
            if !row.pass {
                failures += 1;
            }
            if row.margin < min_margin {
                min_margin = row.margin;
                min_margin_seed = trial_seed;
            }
            rows.push(row);
        }
        summaries.push(CaseSummary {
            case_id,
            trials,
            failures,
            min_margin,
            min_margin_seed,
            rows,
        });
    }
    Ok(SuiteReport {
        seed,
        trials_per_case: trials,
        dims: dims.to_vec(),
        cases: summaries,
    })
}

/// Window and node count realized by a trial (for the CSV sweep schema).
#[derive(Clone, Copy, Debug)]
pub struct TrialMeta {
    pub window: SpectrumWindow,
    pub n_nodes: usize,
}

/// Build and verify one random instance of the case. Deterministic in
/// `(case_id, dim, trial_seed)`; the returned report carries the seed.
pub fn run_case_trial(case_id: CaseId, dim: usize, trial_seed: u64) -> Result<VerificationReport> {
    Ok(run_case_trial_meta(case_id, dim, trial_seed)?.0)
}

/// As [`run_case_trial`], also returning the realized instance shape.
pub fn run_case_trial_meta(
    case_id: CaseId,
    dim: usize,
    trial_seed: u64,
) -> Result<(VerificationReport, TrialMeta)> {
    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed);
    let (a, b) = SUITE_WINDOWS[rng.gen_range(0..SUITE_WINDOWS.len())];
    let window = SpectrumWindow::new(a, b)?;
    let n = rng.gen_range(1..=5usize);

    let (report, n_nodes) = match case_id {
        CaseId::Thm32 => engine_trial(case_id, dim, n, &window, &mut rng, WeightKind::Operator)?,
        CaseId::Cor33 => {
            discrete_engine_trial(case_id, dim, n, &window, &mut rng, WeightKind::Operator)?
        }
        CaseId::Cor34 => {
            interval_engine_trial(case_id, dim, &window, &mut rng, WeightKind::Scalar)?
        }
        CaseId::Cor35 => {
            discrete_engine_trial(case_id, dim, n, &window, &mut rng, WeightKind::Scalar)?
        }
        CaseId::Eq36 => {
            discrete_engine_trial(case_id, dim, n, &window, &mut rng, WeightKind::Uniform)?
        }
        CaseId::Thm51 | CaseId::Cor52 | CaseId::Cor53 | CaseId::GrussTensor | CaseId::Thm54
        | CaseId::Cor55 | CaseId::PowerFinal => {
            engine_trial(case_id, dim, n, &window, &mut rng, WeightKind::Operator)?
        }
        CaseId::Thm45 | CaseId::Cor46 => mean_trial(case_id, dim, n, &window, &mut rng)?,
        CaseId::Lem31 => {
            let x = random_hermitian_in_window(dim, &window, rng.gen())?;
            let y = random_hermitian_in_window(dim, &window, rng.gen())?;
            (verify_lemma31(&x, &y, &window)?, 1)
        }
        CaseId::Lem43 => {
            let x = random_psd(dim, rng.gen())?.scale(rng.gen_range(0.5..=2.0));
            let y = random_psd(dim, rng.gen())?.scale(rng.gen_range(0.5..=2.0));
            let sigma = random_connection(&mut rng, false)?;
            (verify_lemma43(&x, &y, &sigma)?, 1)
        }
        CaseId::Lem44 => {
            let m: Vec<HermitianMatrix> = (0..4)
                .map(|_| random_psd(dim, rng.gen()))
                .collect::<Result<_>>()?;
            let sigma = random_connection(&mut rng, true)?;
            (verify_lemma44(&m[0], &m[1], &m[2], &m[3], &sigma)?, 1)
        }
        CaseId::Eq11 => {
            let values: Vec<f64> = (0..n).map(|_| rng.gen_range(a..=b)).collect();
            let weights: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..=1.0)).collect();
            (verify_scalar_kantorovich(&weights, &values, &window)?, n)
        }
        CaseId::Eq12 => {
            let beta = 1.0 + rng.gen_range(0.0..=1.0);
            let (y0, y1) = (rng.gen_range(a..=b), rng.gen_range(a..=b));
            // Affine through (0, y0) and (beta, y1) stays inside the window.
            let f = ScalarExpr::poly(&[y0, (y1 - y0) / beta]);
            (verify_scalar_gruss(&f, (0.0, beta), &window, 512)?, 512)
        }
        CaseId::Thm11Hadamard => {
            let ops: Vec<HermitianMatrix> = (0..n)
                .map(|_| random_hermitian_in_window(dim, &window, rng.gen()))
                .collect::<Result<_>>()?;
            let ws: Vec<HermitianMatrix> =
                (0..n).map(|_| random_psd(dim, rng.gen())).collect::<Result<_>>()?;
            (verify_hadamard_kantorovich(&ops, &ws, &window)?, n)
        }
    };
    Ok((report.with_seed(trial_seed), TrialMeta { window, n_nodes }))
}

#[derive(Clone, Copy, PartialEq)]
enum WeightKind {
    Operator,
    Scalar,
    Uniform,
}

fn engine_trial(
    case_id: CaseId,
    dim: usize,
    n: usize,
    window: &SpectrumWindow,
    rng: &mut ChaCha8Rng,
    weights: WeightKind,
) -> Result<(VerificationReport, usize)> {
    if rng.gen_bool(0.5) {
        discrete_engine_trial(case_id, dim, n, window, rng, weights)
    } else {
        interval_engine_trial(case_id, dim, window, rng, weights)
    }
}

fn discrete_engine_trial(
    case_id: CaseId,
    dim: usize,
    n: usize,
    window: &SpectrumWindow,
    rng: &mut ChaCha8Rng,
    weights: WeightKind,
) -> Result<(VerificationReport, usize)> {
    let field = discrete_window_field(dim, n, window, rng)?;
    let (case, weight) = random_case(case_id, rng)?;
    let weight = weight.unwrap_or(match weights {
        WeightKind::Operator => WeightSpec::Field(discrete_psd_weights(dim, n, rng)?),
        WeightKind::Scalar => WeightSpec::Field(discrete_scalar_weights(dim, n, rng)?),
        WeightKind::Uniform => WeightSpec::Field(uniform_weights(dim, n)?),
    });
    let measure = if case_id == CaseId::GrussTensor {
        MeasureSpec::counting_normalized()
    } else {
        MeasureSpec::counting()
    };
    let report =
        kantorovich_engine(&case, &field, &weight, window, &measure, &QuadratureRule::default())?;
    Ok((report, n))
}

fn interval_engine_trial(
    case_id: CaseId,
    dim: usize,
    window: &SpectrumWindow,
    rng: &mut ChaCha8Rng,
    weights: WeightKind,
) -> Result<(VerificationReport, usize)> {
    let nodes = rng.gen_range(4..=12usize);
    let field = interval_window_field(dim, window, rng)?;
    let (case, weight) = random_case(case_id, rng)?;
    let weight = weight.unwrap_or(match weights {
        WeightKind::Operator => WeightSpec::Field(interval_psd_weight(dim, rng)?),
        WeightKind::Scalar | WeightKind::Uniform => {
            WeightSpec::Field(interval_scalar_weight(dim, rng)?)
        }
    });
    let scheme = if rng.gen_bool(0.5) {
        QuadScheme::Midpoint
    } else {
        QuadScheme::Trapezoid
    };
    let measure = MeasureSpec {
        kind: crate::fields::MeasureKind::Lebesgue {
            density: ScalarExpr::constant(rng.gen_range(0.5..=2.0)),
        },
        normalized: case_id == CaseId::GrussTensor,
    };
    let report = kantorovich_engine(
        &case,
        &field,
        &weight,
        window,
        &measure,
        &QuadratureRule::new(scheme, nodes)?,
    )?;
    Ok((report, nodes))
}

/// Draw case parameters where the case takes any. Returns the case and, for
/// the function-weight family, the weight it pins.
fn random_case(case_id: CaseId, rng: &mut ChaCha8Rng) -> Result<(KantorovichCase, Option<WeightSpec>)> {
    Ok(match case_id {
        CaseId::Thm32 => (KantorovichCase::thm32(), None),
        CaseId::Cor33 => (KantorovichCase::cor33(), None),
        CaseId::Cor34 => (KantorovichCase::cor34(), None),
        CaseId::Cor35 => (KantorovichCase::cor35(), None),
        CaseId::Eq36 => (KantorovichCase::eq36(), None),
        CaseId::Thm51 => (
            KantorovichCase::thm51(ScalarExpr::Power {
                alpha: rng.gen_range(0.0..=1.0),
            }),
            None,
        ),
        CaseId::Cor52 => {
            let (case, weight) = KantorovichCase::cor52(
                ScalarExpr::Power {
                    alpha: rng.gen_range(0.0..=1.0),
                },
                ScalarExpr::Power {
                    alpha: rng.gen_range(-1.0..=1.0),
                },
            );
            (case, Some(weight))
        }
        CaseId::Cor53 => {
            let (case, weight) = KantorovichCase::cor53(rng.gen_range(-2.0..=2.0));
            (case, Some(weight))
        }
        CaseId::GrussTensor => {
            let (case, weight) = KantorovichCase::gruss_tensor();
            (case, Some(weight))
        }
        CaseId::Thm54 => {
            let f = if rng.gen_bool(0.5) {
                RepresentingFunction::Geometric
            } else {
                RepresentingFunction::power(rng.gen_range(0.0..=1.0))?
            };
            (KantorovichCase::thm54(f)?, None)
        }
        CaseId::Cor55 => {
            let (case, weight) = KantorovichCase::cor55(
                rng.gen_range(-1.0..=1.0),
                ScalarExpr::Power {
                    alpha: rng.gen_range(-1.0..=1.0),
                },
            )?;
            (case, Some(weight))
        }
        CaseId::PowerFinal => {
            let (case, weight) = KantorovichCase::power_final(
                rng.gen_range(-1.0..=1.0),
                rng.gen_range(-2.0..=2.0),
            )?;
            (case, Some(weight))
        }
        other => {
            return Err(crate::error::OplabError::InvalidInput(format!(
                "{other} is not an engine case"
            )))
        }
    })
}

fn mean_trial(
    case_id: CaseId,
    dim: usize,
    n: usize,
    window: &SpectrumWindow,
    rng: &mut ChaCha8Rng,
) -> Result<VerificationReport> {
    let sigma = random_connection(rng, true)?;
    if case_id == CaseId::Cor46 || rng.gen_bool(0.5) {
        note_instance(window, n);
        let a = discrete_window_field(dim, n, window, rng)?;
        let b = discrete_window_field(dim, n, window, rng)?;
        let w = WeightSpec::Field(discrete_psd_weights(dim, n, rng)?);
        verify_mean_kantorovich(
            case_id,
            &a,
            &b,
            &w,
            &sigma,
            window,
            &MeasureSpec::counting(),
            &QuadratureRule::default(),
        )
    } else {
        let nodes = rng.gen_range(4..=10usize);
        note_instance(window, nodes);
        let a = interval_window_field(dim, window, rng)?;
        let b = interval_window_field(dim, window, rng)?;
        let w = WeightSpec::Field(interval_psd_weight(dim, rng)?);
        verify_mean_kantorovich(
            case_id,
            &a,
            &b,
            &w,
            &sigma,
            window,
            &MeasureSpec::lebesgue(),
            &QuadratureRule::midpoint(nodes),
        )
    }
}

/// `super_multiplicative_only` restricts to connections whose representing
/// functions are super-multiplicative (geometric and powers).
fn random_connection(rng: &mut ChaCha8Rng, super_multiplicative_only: bool) -> Result<ConnectionSpec> {
    let pick = rng.gen_range(0..4u8);
    Ok(if super_multiplicative_only {
        if pick % 2 == 0 {
            ConnectionSpec::geometric()
        } else {
            ConnectionSpec::power(rng.gen_range(0.0..=1.0))?
        }
    } else {
        match pick {
            0 => ConnectionSpec::arithmetic(),
            1 => ConnectionSpec::geometric(),
            2 => ConnectionSpec::harmonic(),
            _ => ConnectionSpec::power(rng.gen_range(0.0..=1.0))?,
        }
    })
}

// --- instance building blocks ------------------------------------------------

pub fn discrete_window_field(
    dim: usize,
    n: usize,
    window: &SpectrumWindow,
    rng: &mut ChaCha8Rng,
) -> Result<OperatorField> {
    let samples: Vec<HermitianMatrix> = (0..n)
        .map(|_| random_hermitian_in_window(dim, window, rng.gen()))
        .collect::<Result<_>>()?;
    OperatorField::discrete(samples)
}

/// Smooth interval field guaranteed inside the window:
/// `A_t = M0 + sin(omega t) H` with `Sp(M0)` in the shrunk window and
/// `|H| <= delta`.
pub fn interval_window_field(
    dim: usize,
    window: &SpectrumWindow,
    rng: &mut ChaCha8Rng,
) -> Result<OperatorField> {
    let delta = 0.25 * (window.b() - window.a());
    let inner = SpectrumWindow::new(window.a() + delta, window.b() - delta)?;
    let m0 = random_hermitian_in_window(dim, &inner, rng.gen())?;
    let h = random_hermitian_ball(dim, delta * rng.gen_range(0.2..=1.0), rng);
    OperatorField::interval(
        0.0,
        1.0,
        vec![
            FieldTerm {
                coeff: ScalarExpr::constant(1.0),
                matrix: m0,
            },
            FieldTerm {
                coeff: ScalarExpr::Sin {
                    freq: rng.gen_range(0.5..=6.0),
                },
                matrix: h,
            },
        ],
    )
}

pub fn discrete_psd_weights(dim: usize, n: usize, rng: &mut ChaCha8Rng) -> Result<OperatorField> {
    let samples: Vec<HermitianMatrix> =
        (0..n).map(|_| random_psd(dim, rng.gen())).collect::<Result<_>>()?;
    OperatorField::discrete(samples)
}

fn discrete_scalar_weights(dim: usize, n: usize, rng: &mut ChaCha8Rng) -> Result<OperatorField> {
    let samples: Vec<HermitianMatrix> = (0..n)
        .map(|_| HermitianMatrix::scaled_identity(dim, rng.gen_range(0.0..=1.0)))
        .collect();
    OperatorField::discrete(samples)
}

fn uniform_weights(dim: usize, n: usize) -> Result<OperatorField> {
    let w = 1.0 / n as f64;
    OperatorField::discrete(vec![HermitianMatrix::scaled_identity(dim, w); n])
}

/// PSD interval weight `W_t = P0 + sin(omega t) H` with
/// `lambda_min(P0) >= |H|`.
pub fn interval_psd_weight(dim: usize, rng: &mut ChaCha8Rng) -> Result<OperatorField> {
    let eta = 0.3;
    let p0 = &random_psd(dim, rng.gen())? + &HermitianMatrix::scaled_identity(dim, eta);
    let h = random_hermitian_ball(dim, eta * rng.gen_range(0.2..=1.0), rng);
    OperatorField::interval(
        0.0,
        1.0,
        vec![
            FieldTerm {
                coeff: ScalarExpr::constant(1.0),
                matrix: p0,
            },
            FieldTerm {
                coeff: ScalarExpr::Sin {
                    freq: rng.gen_range(0.5..=6.0),
                },
                matrix: h,
            },
        ],
    )
}

fn interval_scalar_weight(dim: usize, rng: &mut ChaCha8Rng) -> Result<OperatorField> {
    // w(t) = exp(rate t) > 0, as a scalar multiple of the identity.
    OperatorField::interval(
        0.0,
        1.0,
        vec![FieldTerm {
            coeff: ScalarExpr::Exp {
                rate: rng.gen_range(-1.0..=1.0),
            },
            matrix: HermitianMatrix::identity(dim),
        }],
    )
}
