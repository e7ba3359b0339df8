//! How the calibrated radius shrinks with n. The report scales each radius
//! by sqrt(n); a slowly growing scaled radius means the raw radius shrinks
//! a touch slower than the parametric 1/sqrt(n) rate, as expected for a
//! nonparametric ellipsoid ball.

use seqcred::experiments::{
    run_radius_scaling, ExperimentConfig, ExperimentKind, NormConfig, PriorSpec, Replications,
    TruthSpec,
};

fn main() -> seqcred::Result<()> {
    let config = ExperimentConfig {
        kind: ExperimentKind::Scaling,
        truth: TruthSpec::polynomial(1.0),
        prior: PriorSpec::fixed(1.0, 1.0),
        n: None,
        n_grid: Some(vec![100.0, 400.0, 1600.0, 6400.0]),
        k: None,
        alpha: Some(0.05),
        blowup: None,
        norm: Some(NormConfig::ellipsoid()),
        draws: 2_000,
        replications: Some(Replications::Scalar(50)),
        master_seed: 3,
        reference_sd: None,
        subsample: None,
        out_dir: None,
        noise_override: None,
    };

    let report = run_radius_scaling(&config)?;
    println!("ellipsoid ball, alpha = {}, truth beta = 1, prior gamma = 1", report.alpha);
    println!("{:>7} {:>7} {:>14} {:>12}", "n", "K", "sqrt(n) x r", "sd");
    for row in &report.rows {
        println!(
            "{:>7} {:>7} {:>14.3} {:>12.3}",
            row.n, row.k, row.scaled_radius_mean, row.scaled_radius_sd
        );
    }
    Ok(())
}
