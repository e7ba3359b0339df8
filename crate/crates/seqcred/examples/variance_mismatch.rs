//! The squared-error variance contrast. With K = n coordinates the
//! frequentist variance of ||posterior mean - truth||^2 stays a fixed
//! fraction of what the posterior for ||theta - mean||^2 reports, at every
//! n; in one dimension the two agree as n grows.

use seqcred::experiments::{
    run_freedman, ExperimentKind, NormConfig, PriorSpec, Replications, TruthSpec,
};

fn main() -> seqcred::Result<()> {
    let mut config = seqcred::experiments::ExperimentConfig {
        kind: ExperimentKind::Freedman,
        truth: TruthSpec::polynomial(2.0),
        prior: PriorSpec::fixed(1.0, 1.0),
        n: None,
        n_grid: Some(vec![100.0, 1000.0]),
        k: None,
        alpha: None,
        blowup: None,
        norm: Some(NormConfig::l2()),
        draws: 100,
        replications: Some(Replications::PerN(vec![3_000, 1_500])),
        master_seed: 77,
        reference_sd: None,
        subsample: None,
        out_dir: None,
        noise_override: None,
    };

    println!("full sequence model, K = n (truth beta = 2, prior gamma = 1):");
    println!("{:>7} {:>12} {:>12} {:>10} {:>10}", "n", "freq var", "post var", "var ratio", "mean ratio");
    let report = run_freedman(&config)?;
    for row in &report.rows {
        println!(
            "{:>7} {:>12.3e} {:>12.3e} {:>10.3} {:>10.3}",
            row.n,
            row.freq_var,
            row.post_var,
            row.variance_ratio.unwrap(),
            row.mean_ratio.unwrap(),
        );
    }

    config.k = Some(1);
    config.prior = PriorSpec::fixed(0.5, 1.0);
    config.n_grid = Some(vec![100.0, 10_000.0]);
    config.replications = Some(Replications::Scalar(5_000));
    println!("\none-dimensional control, K = 1:");
    println!("{:>7} {:>12} {:>12} {:>10}", "n", "freq var", "post var", "var ratio");
    let report = run_freedman(&config)?;
    for row in &report.rows {
        println!(
            "{:>7} {:>12.3e} {:>12.3e} {:>10.3}",
            row.n,
            row.freq_var,
            row.post_var,
            row.variance_ratio.unwrap(),
        );
    }
    Ok(())
}
