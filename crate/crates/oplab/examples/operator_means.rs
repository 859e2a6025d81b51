//! Kubo-Ando connections through representing functions: evaluation,
//! scalar consistency, the axiom property run, and why the harmonic mean
//! fails the super-multiplicativity hypothesis.
//!
//! Run: `cargo run --example operator_means`

use oplab::means::{
    check_connection_axioms, check_super_multiplicative, connection_apply, scalar_connection,
    ConnectionSpec, RepresentingFunction,
};
use oplab::{HermitianMatrix, ScalarExpr};

fn main() -> oplab::Result<()> {
    let geo = ConnectionSpec::geometric();

    // Scalar case: 1 sigma_geo 4 = 2.
    println!("1 geo 4 = {}", scalar_connection(&geo, 1.0, 4.0));

    // Matrix case: I sigma B = f(B) (the representing-function identity).
    let b = HermitianMatrix::from_real_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]])?;
    let via_mean = connection_apply(&geo, &HermitianMatrix::identity(2), &b)?;
    let via_fn = b.apply_expr(&ScalarExpr::Sqrt)?;
    println!(
        "|I geo B - sqrt(B)| = {:.3e}",
        (&via_mean - &via_fn).operator_norm()
    );

    // The fixed-point property A sigma A = A holds exactly.
    let a = oplab::matrix::random_psd(3, 7)?;
    assert_eq!(connection_apply(&geo, &a, &a)?, a);
    println!("fixed point A geo A = A: exact");

    // Axiom margins over seeded random tuples.
    for (name, spec) in [
        ("arithmetic", ConnectionSpec::arithmetic()),
        ("geometric", ConnectionSpec::geometric()),
        ("harmonic", ConnectionSpec::harmonic()),
        ("power(0.5)", ConnectionSpec::power(0.5)?),
    ] {
        let r = check_connection_axioms(&spec, 1, 100, 3)?;
        println!(
            "{name:<11} monotonicity {:+.2e}  transformer {:+.2e}  superadd {:+.2e}  congruence {:.2e}",
            r.monotonicity_min_margin,
            r.transformer_min_margin,
            r.superadditivity_min_margin,
            r.congruence_max_rel_deviation,
        );
    }

    // Super-multiplicativity: true for powers, false for the harmonic mean.
    let grid = [0.25, 0.5, 1.0, 2.0, 4.0];
    let ok = check_super_multiplicative(&RepresentingFunction::Geometric, &grid)?;
    println!("geometric violations: {}", ok.violations.len());
    let bad = check_super_multiplicative(&RepresentingFunction::Harmonic, &grid)?;
    if let Some(v) = bad.violations.first() {
        println!(
            "harmonic violates at ({}, {}): f(xy) = {} < f(x) f(y) = {:.6}",
            v.x, v.y, v.lhs, v.rhs
        );
    }
    Ok(())
}
