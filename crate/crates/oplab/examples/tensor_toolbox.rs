//! Tensor products and the pair bound: eigenvalue structure of Kronecker,
//! symmetrized-tensor and Hadamard products, and the estimate
//! `A (x) B^{-1} + A^{-1} (x) B <= ((a^2+b^2)/(ab)) I`.
//!
//! Run: `cargo run --example tensor_toolbox`

use oplab::matrix::{kron, sym_tensor};
use oplab::verifiers::verify_lemma31;
use oplab::{HermitianMatrix, SpectrumWindow};

fn main() -> oplab::Result<()> {
    let a = HermitianMatrix::diagonal(&[1.0, 2.0]);
    let b = HermitianMatrix::diagonal(&[1.0, 0.5]);

    // Kronecker spectra are products of the factor spectra.
    let k = kron(&a, &b)?;
    println!("Sp(A (x) B)   = {:?}", k.eig()?.eigenvalues);

    // The symmetrized product averages the two orders.
    let s = sym_tensor(&a, &b)?;
    println!("Sp(A (x)_s B) = {:?}", s.eig()?.eigenvalues);
    assert_eq!(s, sym_tensor(&b, &a)?); // exactly symmetric

    // Pair bound at the equality configuration A = aI, B = bI.
    let w = SpectrumWindow::new(1.0, 2.0)?;
    let report = verify_lemma31(
        &HermitianMatrix::scaled_identity(2, 1.0),
        &HermitianMatrix::scaled_identity(2, 2.0),
        &w,
    )?;
    println!(
        "pair bound k = {:.4}; equality margin = {:.3e}",
        report.constant_used.unwrap(),
        report.margin
    );

    // A generic pair leaves slack.
    let report = verify_lemma31(&a, &HermitianMatrix::diagonal(&[2.0, 1.5]), &w)?;
    println!(
        "generic pair margin = {:.6} (LHS spectrum {:?})",
        report.margin,
        report
            .lhs_spectrum
            .iter()
            .map(|l| (l * 1e4).round() / 1e4)
            .collect::<Vec<_>>()
    );
    Ok(())
}
