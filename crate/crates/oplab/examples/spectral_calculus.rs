//! Hermitian matrix calculus basics: construction, eigendecomposition,
//! functional calculus and the Fiedler inequality.
//!
//! Run: `cargo run --example spectral_calculus`

use num_complex::Complex64;
use oplab::matrix::{hadamard, loewner_margin, random_hermitian_in_window};
use oplab::{HermitianMatrix, ScalarExpr, SpectrumWindow};

fn main() -> oplab::Result<()> {
    // A complex Hermitian matrix; construction validates and symmetrizes.
    let a = HermitianMatrix::from_rows(&[
        vec![Complex64::new(2.0, 0.0), Complex64::new(1.0, 0.5)],
        vec![Complex64::new(1.0, -0.5), Complex64::new(3.0, 0.0)],
    ])?;
    let s = a.eig()?;
    println!("eigenvalues of A: {:?}", s.eigenvalues);
    println!(
        "reconstruction error: {:.3e}",
        (&s.reconstruct() - &a).frobenius_norm()
    );

    // Functional calculus: A^{-1}, sqrt(A), and the homomorphism property.
    let inv = a.apply_expr(&ScalarExpr::Recip)?;
    let sqrt = a.apply_expr(&ScalarExpr::Sqrt)?;
    println!(
        "|A * A^-1 - I| = {:.3e}",
        (&HermitianMatrix::hermitian_part(&a.as_complex().mul(inv.as_complex()))
            - &HermitianMatrix::identity(2))
            .operator_norm()
    );
    println!(
        "|sqrt(A)^2 - A| = {:.3e}",
        (&HermitianMatrix::hermitian_part(&sqrt.as_complex().mul(sqrt.as_complex())) - &a)
            .operator_norm()
    );

    // Fiedler: A o A^{-1} >= I for positive definite A.
    let margin = loewner_margin(&HermitianMatrix::identity(2), &hadamard(&a, &inv)?)?;
    println!("Fiedler margin lambda_min(A o A^-1 - I) = {margin:.6e}");

    // Seeded random generators are deterministic and window-confined.
    let w = SpectrumWindow::new(1.0, 2.0)?;
    let r = random_hermitian_in_window(4, &w, 42)?;
    println!(
        "random window matrix: spectrum {:?}",
        r.eig()?
            .eigenvalues
            .iter()
            .map(|l| (l * 1e4).round() / 1e4)
            .collect::<Vec<_>>()
    );
    Ok(())
}
