//! Batch runner: `verify` for single catalog cases, `suite` for seeded
//! randomized sweeps, `sharpness` for witnesses and ratio searches, and
//! `axioms` for connection-axiom property runs.
//!
//! Structured inputs (fields, measures, connections, matrices) come from a
//! JSON config file; flags carry only scalars. Reports are written
//! atomically (temp file + rename). The `OPLAB_TOL` environment variable
//! overrides the relative pass tolerance (default 1e-8).

use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::error::{OplabError, Result};
use crate::fields::{MeasureSpec, OperatorField, QuadratureRule};
use crate::matrix::{HermitianMatrix, SpectrumWindow, LOEWNER_REL_TOL};
use crate::means::{check_connection_axioms, ConnectionSpec, RepresentingFunction};
use crate::scalar::ScalarExpr;
use crate::sharpness::{
    extremal_lemma31, projection_witness_thm32, ratio_search, RatioSearchConfig, SharpnessResult,
};
use crate::suite::run_suite;
use crate::verifiers::{
    kantorovich_engine, verify_hadamard_kantorovich, verify_lemma31, verify_lemma43,
    verify_lemma44, verify_mean_kantorovich, verify_scalar_gruss, verify_scalar_kantorovich,
    CaseId, KantorovichCase, VerificationReport, WeightSpec,
};

#[derive(Parser, Debug)]
#[command(
    name = "oplab",
    about = "Operator-inequality laboratory: verify Kantorovich-type tensor bounds, run \
             randomized soundness suites, certify sharpness, check connection axioms",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run one catalog case on a configured instance.
    Verify {
        /// Case id (THM32, COR33, ..., THM11_HADAMARD).
        case_id: String,
        /// JSON instance description.
        #[arg(long)]
        config: PathBuf,
        /// Report destination (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
    },
    /// Seeded randomized trials across the catalog (or one case).
    Suite {
        /// Restrict to one case id.
        #[arg(long)]
        case: Option<String>,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        trials: u64,
        #[arg(long, default_value_t = 3)]
        dim: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
    },
    /// Extremal witnesses plus a randomized ratio search (THM32, LEM31).
    Sharpness {
        case_id: String,
        /// Spectrum window "a,b".
        #[arg(long)]
        window: String,
        #[arg(long, default_value_t = 5000)]
        budget: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 2)]
        nodes: usize,
        /// Restrict to the classical scalar configuration.
        #[arg(long)]
        scalar: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Connection-axiom property run for one connection.
    Axioms {
        /// Inline connection JSON, or @path to a JSON file.
        #[arg(long)]
        connection: String,
        #[arg(long, default_value_t = 500)]
        trials: u64,
        #[arg(long, default_value_t = 3)]
        dim: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Entry point used by the binary; returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    let rel_tol = pass_tolerance()?;
    match cli.command {
        Command::Verify {
            case_id,
            config,
            out,
            format,
        } => cmd_verify(&case_id, &config, out.as_deref(), format, rel_tol),
        Command::Suite {
            case,
            seed,
            trials,
            dim,
            out,
            format,
        } => cmd_suite(case.as_deref(), seed, trials, dim, out.as_deref(), format, rel_tol),
        Command::Sharpness {
            case_id,
            window,
            budget,
            seed,
            dim,
            nodes,
            scalar,
            out,
        } => cmd_sharpness(&case_id, &window, budget, seed, dim, nodes, scalar, out.as_deref()),
        Command::Axioms {
            connection,
            trials,
            dim,
            seed,
            out,
        } => cmd_axioms(&connection, trials, dim, seed, out.as_deref()),
    }
}

fn pass_tolerance() -> Result<f64> {
    match std::env::var("OPLAB_TOL") {
        Ok(s) => s
            .trim()
            .parse::<f64>()
            .map_err(|_| OplabError::Config(format!("OPLAB_TOL must be a float, got `{s}`"))),
        Err(_) => Ok(LOEWNER_REL_TOL),
    }
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

/// Instance description for `verify`; each case reads the keys it needs.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    pub window: Option<SpectrumWindow>,
    pub field_a: Option<OperatorField>,
    pub field_b: Option<OperatorField>,
    pub weight: Option<OperatorField>,
    pub measure: Option<MeasureSpec>,
    pub quadrature: Option<QuadratureRule>,
    pub connection: Option<ConnectionSpec>,
    /// Scalar transform for THM51/COR52.
    pub f: Option<ScalarExpr>,
    /// Representing function for THM54.
    pub f_rep: Option<RepresentingFunction>,
    /// Weight function g for COR52/COR55.
    pub g: Option<ScalarExpr>,
    /// Exponent for COR55/POWER_FINAL.
    pub alpha: Option<f64>,
    /// Weight exponent for COR53/POWER_FINAL.
    pub lambda: Option<f64>,
    /// Named matrices for the lemma checkers.
    pub matrices: Option<std::collections::BTreeMap<String, HermitianMatrix>>,
    /// Scalar weights for EQ11.
    pub weights: Option<Vec<f64>>,
    /// Scalar values for EQ11.
    pub values: Option<Vec<f64>>,
    /// Integrand for EQ12.
    pub scalar_function: Option<ScalarExpr>,
    /// Parameter interval for EQ12.
    pub interval: Option<(f64, f64)>,
    /// Quadrature nodes for EQ12.
    pub nodes: Option<usize>,
    /// Operator list for THM11_HADAMARD.
    pub a_list: Option<Vec<HermitianMatrix>>,
    /// Weight list for THM11_HADAMARD.
    pub w_list: Option<Vec<HermitianMatrix>>,
    pub seed: Option<u64>,
}

fn cmd_verify(
    case_id: &str,
    config_path: &Path,
    out: Option<&Path>,
    format: OutputFormat,
    rel_tol: f64,
) -> Result<i32> {
    let case_id = CaseId::from_str(case_id)?;
    let text = std::fs::read_to_string(config_path)?;
    let config: VerifyConfig = serde_json::from_str(&text)?;
    let mut report = run_verify_case(case_id, &config)?;
    report.apply_tolerance(rel_tol);
    if let Some(seed) = config.seed {
        report = report.with_seed(seed);
    }

    println!(
        "{}: margin {:.6e}, constant {}, pass {}, hypotheses {}",
        report.case_id,
        report.margin,
        report
            .constant_used
            .map(|c| format!("{c:.12}"))
            .unwrap_or_else(|| "-".into()),
        report.pass,
        if report.hypotheses_ok() { "ok" } else { "FAILED" }
    );
    for flag in &report.hypothesis_flags {
        if flag.status != crate::verifiers::FlagStatus::Pass {
            println!("  [{:?}] {}: {}", flag.status, flag.name, flag.detail);
        }
    }

    let payload = match format {
        OutputFormat::Json => serde_json::to_string_pretty(&report)? + "\n",
        OutputFormat::Csv => verify_csv(&report, &config),
    };
    emit(out, &payload)?;
    Ok(report.exit_code())
}

fn verify_csv(report: &VerificationReport, config: &VerifyConfig) -> String {
    let (dim, n_nodes) = config
        .field_a
        .as_ref()
        .map(|f| {
            let n = match f {
                OperatorField::Discrete { samples } => samples.len(),
                OperatorField::Interval { .. } => {
                    config.quadrature.unwrap_or_default().nodes
                }
            };
            (f.dim(), n)
        })
        .unwrap_or((0, 0));
    let (a, b) = config
        .window
        .map(|w| (w.a().to_string(), w.b().to_string()))
        .unwrap_or_default();
    format!(
        "case_id,seed,dim,n_nodes,a,b,margin,pass\n{},{},{},{},{},{},{:.17e},{}\n",
        report.case_id,
        report.seed.map(|s| s.to_string()).unwrap_or_default(),
        dim,
        n_nodes,
        a,
        b,
        report.margin,
        report.pass
    )
}

fn require<T>(opt: Option<T>, key: &str, case: CaseId) -> Result<T> {
    opt.ok_or_else(|| OplabError::Config(format!("{case} requires config key `{key}`")))
}

fn named_matrix(config: &VerifyConfig, name: &str, case: CaseId) -> Result<HermitianMatrix> {
    config
        .matrices
        .as_ref()
        .and_then(|m| m.get(name))
        .cloned()
        .ok_or_else(|| OplabError::Config(format!("{case} requires config key `matrices.{name}`")))
}

/// Assemble the instance for the case and run the matching checker.
pub fn run_verify_case(case_id: CaseId, config: &VerifyConfig) -> Result<VerificationReport> {
    let quad = config.quadrature.unwrap_or_default();
    let engine = |case: KantorovichCase, weight: Option<WeightSpec>| -> Result<VerificationReport> {
        let field_a = require(config.field_a.clone(), "field_a", case_id)?;
        let window = require(config.window, "window", case_id)?;
        let weight = match weight {
            Some(w) => w,
            None => WeightSpec::Field(require(config.weight.clone(), "weight", case_id)?),
        };
        let measure = config.measure.clone().unwrap_or_else(|| {
            if field_a.is_discrete() {
                MeasureSpec::counting()
            } else {
                MeasureSpec::lebesgue()
            }
        });
        kantorovich_engine(&case, &field_a, &weight, &window, &measure, &quad)
    };

    match case_id {
        CaseId::Thm32 => engine(KantorovichCase::thm32(), None),
        CaseId::Cor33 => engine(KantorovichCase::cor33(), None),
        CaseId::Cor34 => engine(KantorovichCase::cor34(), None),
        CaseId::Cor35 => engine(KantorovichCase::cor35(), None),
        CaseId::Eq36 => engine(KantorovichCase::eq36(), None),
        CaseId::Thm51 => {
            let f = require(config.f.clone(), "f", case_id)?;
            engine(KantorovichCase::thm51(f), None)
        }
        CaseId::Cor52 => {
            let f = require(config.f.clone(), "f", case_id)?;
            let g = require(config.g.clone(), "g", case_id)?;
            let (case, weight) = KantorovichCase::cor52(f, g);
            engine(case, Some(weight))
        }
        CaseId::Cor53 => {
            let lambda = require(config.lambda, "lambda", case_id)?;
            let (case, weight) = KantorovichCase::cor53(lambda);
            engine(case, Some(weight))
        }
        CaseId::GrussTensor => {
            let (case, weight) = KantorovichCase::gruss_tensor();
            engine(case, Some(weight))
        }
        CaseId::Thm54 => {
            let f = require(config.f_rep.clone(), "f_rep", case_id)?;
            engine(KantorovichCase::thm54(f)?, None)
        }
        CaseId::Cor55 => {
            let alpha = require(config.alpha, "alpha", case_id)?;
            let g = require(config.g.clone(), "g", case_id)?;
            let (case, weight) = KantorovichCase::cor55(alpha, g)?;
            engine(case, Some(weight))
        }
        CaseId::PowerFinal => {
            let alpha = require(config.alpha, "alpha", case_id)?;
            let lambda = require(config.lambda, "lambda", case_id)?;
            let (case, weight) = KantorovichCase::power_final(alpha, lambda)?;
            engine(case, Some(weight))
        }
        CaseId::Thm45 | CaseId::Cor46 => {
            let field_a = require(config.field_a.clone(), "field_a", case_id)?;
            let field_b = require(config.field_b.clone(), "field_b", case_id)?;
            let weight = WeightSpec::Field(require(config.weight.clone(), "weight", case_id)?);
            let sigma = require(config.connection.clone(), "connection", case_id)?;
            let window = require(config.window, "window", case_id)?;
            let measure = config.measure.clone().unwrap_or_else(|| {
                if field_a.is_discrete() {
                    MeasureSpec::counting()
                } else {
                    MeasureSpec::lebesgue()
                }
            });
            verify_mean_kantorovich(
                case_id, &field_a, &field_b, &weight, &sigma, &window, &measure, &quad,
            )
        }
        CaseId::Lem31 => {
            let a = named_matrix(config, "a", case_id)?;
            let b = named_matrix(config, "b", case_id)?;
            let window = require(config.window, "window", case_id)?;
            verify_lemma31(&a, &b, &window)
        }
        CaseId::Lem43 => {
            let a = named_matrix(config, "a", case_id)?;
            let b = named_matrix(config, "b", case_id)?;
            let sigma = require(config.connection.clone(), "connection", case_id)?;
            verify_lemma43(&a, &b, &sigma)
        }
        CaseId::Lem44 => {
            let a = named_matrix(config, "a", case_id)?;
            let b = named_matrix(config, "b", case_id)?;
            let c = named_matrix(config, "c", case_id)?;
            let d = named_matrix(config, "d", case_id)?;
            let sigma = require(config.connection.clone(), "connection", case_id)?;
            verify_lemma44(&a, &b, &c, &d, &sigma)
        }
        CaseId::Eq11 => {
            let weights = require(config.weights.clone(), "weights", case_id)?;
            let values = require(config.values.clone(), "values", case_id)?;
            let window = require(config.window, "window", case_id)?;
            verify_scalar_kantorovich(&weights, &values, &window)
        }
        CaseId::Eq12 => {
            let f = require(config.scalar_function.clone(), "scalar_function", case_id)?;
            let interval = require(config.interval, "interval", case_id)?;
            let window = require(config.window, "window", case_id)?;
            let nodes = config.nodes.unwrap_or(1024);
            verify_scalar_gruss(&f, interval, &window, nodes)
        }
        CaseId::Thm11Hadamard => {
            let a_list = require(config.a_list.clone(), "a_list", case_id)?;
            let w_list = require(config.w_list.clone(), "w_list", case_id)?;
            let window = require(config.window, "window", case_id)?;
            verify_hadamard_kantorovich(&a_list, &w_list, &window)
        }
    }
}

// ---------------------------------------------------------------------------
// suite
// ---------------------------------------------------------------------------

fn cmd_suite(
    case: Option<&str>,
    seed: u64,
    trials: u64,
    dim: usize,
    out: Option<&Path>,
    format: OutputFormat,
    rel_tol: f64,
) -> Result<i32> {
    if trials < 1 {
        return Err(OplabError::InvalidInput("suite requires trials >= 1".into()));
    }
    let cases: Vec<CaseId> = match case {
        Some(c) => vec![CaseId::from_str(c)?],
        None => CaseId::ALL.to_vec(),
    };
    let report = run_suite(&cases, seed, trials, &[dim], rel_tol)?;
    for case in &report.cases {
        println!(
            "{:<14} trials {:>5}  failures {:>3}  min margin {:+.6e}  (replay seed {})",
            case.case_id.to_string(),
            case.trials,
            case.failures,
            case.min_margin,
            case.min_margin_seed
        );
    }
    let failures = report.total_failures();
    println!(
        "suite: {} cases x {} trials, {} failures",
        report.cases.len(),
        report.trials_per_case,
        failures
    );
    let payload = match format {
        OutputFormat::Json => serde_json::to_string_pretty(&report)? + "\n",
        OutputFormat::Csv => report.to_csv(),
    };
    emit(out, &payload)?;
    Ok(if failures == 0 { 0 } else { 1 })
}

// ---------------------------------------------------------------------------
// sharpness
// ---------------------------------------------------------------------------

#[derive(serde::Serialize)]
struct SharpnessOutput {
    case_id: CaseId,
    window: SpectrumWindow,
    constructive: Option<SharpnessResult>,
    search: SharpnessResult,
}

#[allow(clippy::too_many_arguments)]
fn cmd_sharpness(
    case_id: &str,
    window: &str,
    budget: u64,
    seed: u64,
    dim: usize,
    nodes: usize,
    scalar: bool,
    out: Option<&Path>,
) -> Result<i32> {
    let case_id = CaseId::from_str(case_id)?;
    let window = parse_window(window)?;
    let mut config = RatioSearchConfig::new(window, dim, nodes, budget, seed);
    if scalar {
        config = config.scalar();
    }
    let constructive = match (case_id, scalar) {
        (CaseId::Thm32, false) if dim >= 2 => Some(projection_witness_thm32(&window, dim)?),
        (CaseId::Lem31, false) => Some(extremal_lemma31(&window, dim)?),
        _ => None,
    };
    let search = ratio_search(case_id, &config)?;
    if let Some(w) = &constructive {
        println!(
            "constructive witness: ratio {:.12} (target {:.12}, gap {:+.3e})",
            w.best_ratio, w.target_constant, w.gap
        );
    }
    println!(
        "search: best ratio {:.12} of target {:.12} after {} evaluations (gap {:+.3e})",
        search.best_ratio, search.target_constant, search.evaluations, search.gap
    );
    let output = SharpnessOutput {
        case_id,
        window,
        constructive,
        search,
    };
    emit(out, &(serde_json::to_string_pretty(&output)? + "\n"))?;
    Ok(0)
}

fn parse_window(s: &str) -> Result<SpectrumWindow> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        return Err(OplabError::Config(format!(
            "window must be `a,b`, got `{s}`"
        )));
    }
    let a: f64 = parts[0]
        .parse()
        .map_err(|_| OplabError::Config(format!("bad window endpoint `{}`", parts[0])))?;
    let b: f64 = parts[1]
        .parse()
        .map_err(|_| OplabError::Config(format!("bad window endpoint `{}`", parts[1])))?;
    SpectrumWindow::new(a, b)
}

// ---------------------------------------------------------------------------
// axioms
// ---------------------------------------------------------------------------

fn cmd_axioms(
    connection: &str,
    trials: u64,
    dim: usize,
    seed: u64,
    out: Option<&Path>,
) -> Result<i32> {
    let text = if let Some(path) = connection.strip_prefix('@') {
        std::fs::read_to_string(path)?
    } else {
        connection.to_string()
    };
    let spec: ConnectionSpec = serde_json::from_str(&text)?;
    let report = check_connection_axioms(&spec, seed, trials, dim)?;
    println!(
        "axioms for {} over {} trials (d = {}):",
        text.trim(),
        trials,
        dim
    );
    println!("  monotonicity      min margin {:+.3e}", report.monotonicity_min_margin);
    println!("  transformer       min margin {:+.3e}", report.transformer_min_margin);
    println!("  superadditivity   min margin {:+.3e}", report.superadditivity_min_margin);
    println!(
        "  congruence        max rel deviation {:.3e}",
        report.congruence_max_rel_deviation
    );
    println!(
        "  fixed point       max rel deviation {:.3e}",
        report.fixed_point_max_rel_deviation
    );
    println!(
        "  f(A) = I sigma A  max deviation {:.3e}",
        report.representing_identity_max_deviation
    );
    emit(out, &(serde_json::to_string_pretty(&report)? + "\n"))?;
    Ok(if report.passes(1e-9, 1e-8) { 0 } else { 1 })
}

// ---------------------------------------------------------------------------
// output plumbing
// ---------------------------------------------------------------------------

/// Write the payload to the path atomically (temp file in the same
/// directory, then rename), or to stdout when no path was given.
fn emit(out: Option<&Path>, payload: &str) -> Result<()> {
    match out {
        None => {
            print!("{payload}");
            Ok(())
        }
        Some(path) => atomic_write(path, payload),
    }
}

fn atomic_write(path: &Path, payload: &str) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    let tmp = match dir {
        Some(d) => d.join(format!(
            ".{}.tmp{}",
            path.file_name().and_then(|n| n.to_str()).unwrap_or("report"),
            std::process::id()
        )),
        None => PathBuf::from(format!(".report.tmp{}", std::process::id())),
    };
    std::fs::write(&tmp, payload)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_parsing() {
        let w = parse_window("1, 2").unwrap();
        assert_eq!((w.a(), w.b()), (1.0, 2.0));
        assert!(parse_window("1").is_err());
        assert!(parse_window("2,1").is_err());
        assert!(parse_window("x,y").is_err());
    }

    #[test]
    fn verify_config_keys_are_validated() {
        let config: VerifyConfig = serde_json::from_str(r#"{"window": {"a": 1.0, "b": 2.0}}"#).unwrap();
        let err = run_verify_case(CaseId::Thm32, &config).unwrap_err();
        assert!(err.to_string().contains("field_a"), "{err}");

        // Unknown keys are rejected so config typos surface early.
        assert!(serde_json::from_str::<VerifyConfig>(r#"{"win": 1}"#).is_err());
    }

    #[test]
    fn verify_thm32_from_json_config() {
        let text = r#"{
            "window": {"a": 1.0, "b": 2.0},
            "field_a": {
                "domain": {"kind": "discrete", "n": 2},
                "samples": [
                    {"dim": 2, "re": [[1.0, 0.0], [0.0, 1.0]], "im": [[0.0, 0.0], [0.0, 0.0]]},
                    {"dim": 2, "re": [[2.0, 0.0], [0.0, 2.0]], "im": [[0.0, 0.0], [0.0, 0.0]]}
                ]
            },
            "weight": {
                "domain": {"kind": "discrete", "n": 2},
                "samples": [
                    {"dim": 2, "re": [[1.0, 0.0], [0.0, 0.0]], "im": [[0.0, 0.0], [0.0, 0.0]]},
                    {"dim": 2, "re": [[0.0, 0.0], [0.0, 1.0]], "im": [[0.0, 0.0], [0.0, 0.0]]}
                ]
            },
            "measure": {"kind": "counting"},
            "seed": 7
        }"#;
        let config: VerifyConfig = serde_json::from_str(text).unwrap();
        let report = run_verify_case(CaseId::Thm32, &config).unwrap();
        assert!(report.pass && report.hypotheses_ok());
        assert!(report.margin.abs() <= 1e-12);
    }

    #[test]
    fn atomic_write_creates_file() {
        let dir = std::env::temp_dir().join(format!("oplab-test-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("report.json");
        atomic_write(&path, "{}\n").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "{}\n");
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
