//! How the calibrated radius scales with n: the `sqrt(n) * r` summary that
//! should stabilize as n grows in the weighted norms.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use super::config::{ExperimentConfig, ExperimentKind};
use super::{
    expect_kind, fit_posterior, make_observation, mean, posterior_distances, replicate, sample_sd,
};
use crate::credible_sets::radius_from_distances;
use crate::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingRecord {
    pub n: f64,
    pub k: usize,
    pub rep: usize,
    pub seed: u64,
    pub radius: f64,
    pub scaled_radius: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingRow {
    pub n: f64,
    pub k: usize,
    pub replications: usize,
    pub scaled_radius_mean: f64,
    pub scaled_radius_sd: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingReport {
    pub alpha: f64,
    pub rows: Vec<ScalingRow>,
    pub records: Vec<ScalingRecord>,
}

/// Per grid point, R replications of the calibrated radius, reported as
/// `sqrt(n) * r` with its spread.
pub fn run_radius_scaling(config: &ExperimentConfig) -> Result<ScalingReport> {
    config.validate()?;
    expect_kind(config, ExperimentKind::Scaling)?;
    let alpha = config.alpha.unwrap();
    let s = config.draws;
    let mut rows = Vec::new();
    let mut records = Vec::new();

    for (idx, &n) in config.n_grid.as_ref().unwrap().iter().enumerate() {
        let k = config.resolve_k(n)?;
        let norm = config.norm.as_ref().unwrap().build(k)?;
        let truth = config.build_truth(k)?;
        let reps = config.replications_for(idx);

        let batch = replicate(config.master_seed, n, reps, |seed, rep| {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            let obs = make_observation(&config.noise_override, &truth, n, &mut rng, seed)?;
            let (post, _) = fit_posterior(&config.prior, &obs)?;
            let distances = posterior_distances(&post, s, &mut rng, &norm, 1.0)?;
            let radius = radius_from_distances(&distances, alpha)?;
            Ok(ScalingRecord { n, k, rep, seed, radius, scaled_radius: n.sqrt() * radius })
        })?;

        let scaled: Vec<f64> = batch.iter().map(|r| r.scaled_radius).collect();
        rows.push(ScalingRow {
            n,
            k,
            replications: reps,
            scaled_radius_mean: mean(&scaled),
            scaled_radius_sd: sample_sd(&scaled),
        });
        records.extend(batch);
    }

    Ok(ScalingReport { alpha, rows, records })
}
