//! One replication at headline scale: calibrate l2 and ellipsoid balls
//! around the same posterior, measure the draw-acceptance fraction of each
//! (it lands on 1 - alpha by construction), and see how often the two
//! norms agree on which draws are inside. Also demonstrates writing the
//! full output bundle to disk.

use seqcred::experiments::outputs::{write_manifest, write_outputs, ExperimentReport};
use seqcred::experiments::{run_figure1, ExperimentConfig, ExperimentKind, PriorSpec, TruthSpec};

fn main() -> seqcred::Result<()> {
    let config = ExperimentConfig {
        kind: ExperimentKind::Figure1,
        truth: TruthSpec::polynomial(1.0),
        prior: PriorSpec::fixed(1.0, 1.0),
        n: Some(1000.0),
        n_grid: None,
        k: Some(1000),
        alpha: Some(0.05),
        blowup: None,
        norm: None,
        draws: 20_000,
        replications: None,
        master_seed: 2026,
        reference_sd: None,
        subsample: Some(50),
        out_dir: None,
        noise_override: None,
    };

    let started = std::time::Instant::now();
    let report = run_figure1(&config)?;
    println!("n = {}, K = {}, {} draws in {:.1}s", report.n, report.k, report.draws, started.elapsed().as_secs_f64());
    println!("radius      l2 {:.4}  ellipsoid {:.4}", report.radius_l2, report.radius_ellipsoid);
    println!("accept rate l2 {:.4}  ellipsoid {:.4}", report.accept_rate_l2, report.accept_rate_ellipsoid);
    println!("per-draw agreement between the two balls: {:.4}", report.agreement_rate);

    let out = std::env::temp_dir().join("seqcred-panel-demo");
    let files = write_outputs(&config, &ExperimentReport::Figure1(report), &out)?;
    write_manifest(&config, &out, started)?;
    println!("\nwrote the output bundle:");
    for f in files {
        println!("  {}", f.display());
    }
    println!("  {}", out.join("manifest.json").display());
    Ok(())
}
