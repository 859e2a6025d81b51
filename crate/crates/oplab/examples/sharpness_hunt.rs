//! Certify that the tensor constant (a^2 + b^2)/(2ab) is best possible:
//! the constructive projection witness attains it, a randomized search
//! rediscovers it, and the classical scalar configuration caps out at the
//! strictly smaller (a + b)^2/(4ab).
//!
//! Run: `cargo run --release --example sharpness_hunt`

use oplab::sharpness::{
    extremal_lemma31, projection_witness_thm32, ratio_search, RatioSearchConfig,
};
use oplab::verifiers::CaseId;
use oplab::SpectrumWindow;

fn main() -> oplab::Result<()> {
    let w = SpectrumWindow::new(1.0, 2.0)?;
    println!(
        "window [1, 2]: tensor constant {:.6}, classical constant {:.6}, pair bound {:.6}\n",
        w.tensor_constant(),
        w.classical_constant(),
        w.pair_bound()
    );

    // Constructive witnesses.
    let pair = extremal_lemma31(&w, 2)?;
    println!(
        "pair-bound witness (A = aI, B = bI):       ratio {:.12}, gap {:+.2e}",
        pair.best_ratio, pair.gap
    );
    for d in [2, 4, 8] {
        let proj = projection_witness_thm32(&w, d)?;
        println!(
            "projection witness d = {d}:                  ratio {:.12}, gap {:+.2e}",
            proj.best_ratio, proj.gap
        );
    }

    // Randomized search over operator-weight configurations.
    let config = RatioSearchConfig::new(w, 2, 2, 5000, 7);
    let full = ratio_search(CaseId::Thm32, &config)?;
    println!(
        "\noperator-weight search (budget {}):       best ratio {:.9} -> target {:.4}",
        full.evaluations, full.best_ratio, full.target_constant
    );

    // The classical scalar configuration cannot pass 9/8.
    let scalar = ratio_search(CaseId::Thm32, &RatioSearchConfig::new(w, 2, 2, 5000, 7).scalar())?;
    println!(
        "scalar-configuration search (budget {}):  best ratio {:.9} -> target {:.4}",
        scalar.evaluations, scalar.best_ratio, scalar.target_constant
    );
    println!(
        "\noperator weights are what push the ratio from {:.4} up to {:.4}",
        scalar.target_constant, full.target_constant
    );
    Ok(())
}
