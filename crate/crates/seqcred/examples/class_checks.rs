//! Signal-class decision procedures: strict self-similarity, polished
//! tail, and the relaxed block condition, on three signals with very
//! different energy profiles. Ends by verifying the shipped witness signal
//! that satisfies the relaxed condition at two regularities at once.

use std::path::Path;

use seqcred::sequence_model::{lacunary_signal, polynomial_signal, SignalVector};
use seqcred::signal_classes::{
    check_polished_tail, check_relaxed_self_similar, check_self_similar, detect_regularity,
    PolishedTailParams, RelaxedSelfSimilarParams, SelfSimilarParams,
};

fn verdict(outcome: &seqcred::signal_classes::CheckOutcome) -> String {
    if outcome.pass {
        format!("pass       (N checked: {}..={})", outcome.checked_range.0, outcome.checked_range.1)
    } else if let Some(n) = outcome.first_violation {
        format!("FAIL at N={n}")
    } else {
        format!("FAIL       ({})", outcome.detail.as_deref().unwrap_or("norm bound"))
    }
}

fn main() -> seqcred::Result<()> {
    let smooth = polynomial_signal(1.0, 1.0, 2048)?;
    let gappy = lacunary_signal(2, 2048)?;

    // Strict self-similarity pins down one beta for the polynomial signal.
    let grid = [0.5, 1.0, 1.5, 2.0];
    let found = detect_regularity(smooth.coeffs(), &grid, 2.5, 0.05, 8)?;
    println!("polynomial beta=1: strict condition passes on grid {grid:?} at {found:?}");

    // The lacunary signal has long stretches with no energy, so any block
    // condition with a modest rho catches an empty window.
    let ssim = SelfSimilarParams::new(1.0, 2.0, 0.05, 2.5, 8)?;
    println!("lacunary vs strict:        {}", verdict(&check_self_similar(gappy.coeffs(), &ssim)?));
    let pt = PolishedTailParams::new(2.0, 2.5, 8)?;
    println!("lacunary vs polished tail: {}", verdict(&check_polished_tail(gappy.coeffs(), &pt)?));
    let pt_wide = PolishedTailParams::new(2.0, 5.0, 8)?;
    println!("  ...with rho widened to 5: {}", verdict(&check_polished_tail(gappy.coeffs(), &pt_wide)?));

    // Shipped witness: one signal, two regularities under the relaxed
    // condition; the strict condition accepts only the upper one.
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let witness = SignalVector::read_csv(&data.join("multi_beta_witness.csv"))?;
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(
        data.join("multi_beta_witness.json"),
    )?)
    .map_err(|e| seqcred::Error::Parse(e.to_string()))?;
    let relaxed = &doc["relaxed_self_similar"];
    let (eps, n0, big_b) = (
        relaxed["epsilon"].as_f64().unwrap(),
        relaxed["n0"].as_u64().unwrap() as usize,
        relaxed["big_b"].as_f64().unwrap(),
    );
    println!("\nwitness signal ({} coefficients):", witness.len());
    for beta in [0.5, 1.0] {
        let params = RelaxedSelfSimilarParams::new(beta, 0.0, big_b, eps, n0)?;
        let outcome = check_relaxed_self_similar(witness.coeffs(), &params)?;
        println!("  relaxed at beta={beta}: {}", verdict(&outcome));
    }
    let strict = &doc["strict_self_similar"];
    for beta in [0.5, 1.0] {
        let params = SelfSimilarParams::new(
            beta,
            big_b,
            strict["epsilon"].as_f64().unwrap(),
            strict["rho"].as_f64().unwrap(),
            strict["n0"].as_u64().unwrap() as usize,
        )?;
        let outcome = check_self_similar(witness.coeffs(), &params)?;
        println!("  strict  at beta={beta}: {}", verdict(&outcome));
    }
    Ok(())
}
