//! Run every case of the inequality catalog once on a seeded random
//! instance and print the margin table.
//!
//! Run: `cargo run --example inequality_catalog`

use oplab::suite::run_case_trial;
use oplab::verifiers::CaseId;

fn main() -> oplab::Result<()> {
    println!(
        "{:<15} {:>4} {:>14} {:>14} {:>6}  hypotheses",
        "case", "dim", "constant", "margin", "pass"
    );
    for case_id in CaseId::ALL {
        let report = run_case_trial(case_id, 3, 20260809)?;
        println!(
            "{:<15} {:>4} {:>14} {:>14.6e} {:>6}  {}",
            report.case_id.to_string(),
            3,
            report
                .constant_used
                .map(|c| format!("{c:.8}"))
                .unwrap_or_else(|| "-".into()),
            report.margin,
            report.pass,
            if report.hypotheses_ok() { "ok" } else { "FLAGGED" }
        );
    }
    println!("\nEvery margin is lambda_min(RHS - LHS); nonnegative means the bound holds.");
    Ok(())
}
