//! Operator fields over an interval and their Bochner integrals: weighted
//! transforms, spectrum-window checks and midpoint-rule convergence.
//!
//! Run: `cargo run --example fields_and_quadrature`

use oplab::fields::{
    bochner_integral, check_spectrum_window, convergence_probe, field_sup_norm,
    weighted_transform_integral, FieldTerm, MeasureSpec, OperatorField, QuadScheme,
    QuadratureRule,
};
use oplab::{HermitianMatrix, ScalarExpr, SpectrumWindow};

fn main() -> oplab::Result<()> {
    // A_t = e^t I on [0, 1]; closed-form integral (e - 1) I.
    let exp_field = OperatorField::interval(
        0.0,
        1.0,
        vec![FieldTerm {
            coeff: ScalarExpr::Exp { rate: 1.0 },
            matrix: HermitianMatrix::identity(2),
        }],
    )?;
    let mu = MeasureSpec::lebesgue();

    println!("midpoint refinement for the e^t field (exact e - 1):");
    let rows = convergence_probe(&exp_field, &mu, QuadScheme::Midpoint, &[2, 4, 8, 16, 32])?;
    for pair in rows.windows(2) {
        println!(
            "  N {:>3} -> {:>3}: errors {:.4e} -> {:.4e}, ratio {:.3}",
            pair[0].nodes,
            pair[1].nodes,
            pair[0].error,
            pair[1].error,
            pair[0].error / pair[1].error
        );
    }

    // A field with drifting spectrum and a window check that catches it.
    let drift = OperatorField::interval(
        0.0,
        1.0,
        vec![FieldTerm {
            coeff: ScalarExpr::poly(&[1.0, 1.0]), // 1 + t
            matrix: HermitianMatrix::identity(2),
        }],
    )?;
    let q = QuadratureRule::midpoint(64);
    let wide = SpectrumWindow::new(1.0, 2.0)?;
    let tight = SpectrumWindow::new(1.0, 1.5)?;
    println!(
        "window [1, 2] holds: {}; window [1, 1.5] holds: {}",
        check_spectrum_window(&drift, &wide, &q)?.ok,
        check_spectrum_window(&drift, &tight, &q)?.ok
    );
    println!(
        "sampled sup norm of (1 + t) I: {:.6}",
        field_sup_norm(&drift, &q)?
    );

    // Weighted transform: int W^{1/2} f(A_t) W^{1/2} dmu.
    let weight = OperatorField::constant_on(0.0, 1.0, HermitianMatrix::scaled_identity(2, 0.5))?;
    let plain = bochner_integral(&drift, &mu, &q)?;
    let transformed = weighted_transform_integral(&weight, &drift, &ScalarExpr::Recip, &mu, &q)?;
    println!(
        "int A_t dt = {:.6} I; int W^1/2 A_t^-1 W^1/2 dt = {:.6} I",
        plain.entry(0, 0).re,
        transformed.entry(0, 0).re
    );
    Ok(())
}
