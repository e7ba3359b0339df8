//! Frequentist coverage of the calibrated credible ball under repeated
//! sampling from a fixed truth.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use super::config::{ExperimentConfig, ExperimentKind};
use super::{
    expect_kind, fit_posterior, make_observation, mean, posterior_distances, replicate,
    sample_sd, wilson_interval,
};
use crate::credible_sets::radius_from_distances;
use crate::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct CoverageRecord {
    pub rep: usize,
    pub seed: u64,
    pub covered: bool,
    pub radius: f64,
    pub distance: f64,
    pub gamma_hat: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverageReport {
    pub n: f64,
    pub k: usize,
    pub alpha: f64,
    pub blowup: f64,
    pub coverage: f64,
    pub wilson_low: f64,
    pub wilson_high: f64,
    pub scaled_radius_mean: f64,
    pub scaled_radius_sd: f64,
    pub records: Vec<CoverageRecord>,
}

/// For each replication: draw data from the truth, fit the posterior,
/// calibrate the ball at level `alpha`, and record whether the blown-up
/// ball contains the truth. Aggregates the hit rate with its Wilson 95%
/// interval and the distribution of `sqrt(n) * radius`.
pub fn run_coverage(config: &ExperimentConfig) -> Result<CoverageReport> {
    config.validate()?;
    expect_kind(config, ExperimentKind::Coverage)?;
    let n = config.n.unwrap();
    let k = config.resolve_k(n)?;
    let norm = config.norm.as_ref().unwrap().build(k)?;
    let truth = config.build_truth(k)?;
    let alpha = config.alpha.unwrap();
    let blowup = config.blowup.unwrap_or(1.0);
    let s = config.draws;
    let reps = config.replications_for(0);

    let records = replicate(config.master_seed, n, reps, |seed, rep| {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let obs = make_observation(&config.noise_override, &truth, n, &mut rng, seed)?;
        let (post, gamma_hat) = fit_posterior(&config.prior, &obs)?;
        let distances = posterior_distances(&post, s, &mut rng, &norm, 1.0)?;
        let radius = radius_from_distances(&distances, alpha)?;
        let distance = norm.distance(truth.coeffs(), post.means())?;
        Ok(CoverageRecord {
            rep,
            seed,
            covered: distance <= blowup * radius,
            radius,
            distance,
            gamma_hat,
        })
    })?;

    let covered = records.iter().filter(|r| r.covered).count();
    let (wilson_low, wilson_high) = wilson_interval(covered, reps);
    let scaled: Vec<f64> = records.iter().map(|r| n.sqrt() * r.radius).collect();
    Ok(CoverageReport {
        n,
        k,
        alpha,
        blowup,
        coverage: covered as f64 / reps as f64,
        wilson_low,
        wilson_high,
        scaled_radius_mean: mean(&scaled),
        scaled_radius_sd: sample_sd(&scaled),
        records,
    })
}
