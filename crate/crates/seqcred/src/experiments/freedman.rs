//! Frequentist-versus-posterior spread of the squared l2 estimation error
//! across a sample-size grid: the contrast that exposes the failure of the
//! parametric matching in the infinite-dimensional model.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use super::config::{ExperimentConfig, ExperimentKind};
use super::{
    expect_kind, fit_posterior, make_observation, mean, population_variance, replicate,
};
use crate::conjugate_posterior::for_each_draw;
use crate::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct FreedmanRecord {
    pub n: f64,
    pub k: usize,
    pub rep: usize,
    pub seed: u64,
    /// `||E(theta|Y) - theta0||^2` in l2: one frequentist sample point.
    pub sq_error: f64,
    /// Posterior mean of `||theta - E(theta|Y)||^2` from the draws.
    pub post_mean_sq_dist: f64,
    /// Posterior (population) variance of the same quantity.
    pub post_var_sq_dist: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FreedmanRow {
    pub n: f64,
    pub k: usize,
    pub replications: usize,
    /// Mean and population variance of `sq_error` across replications.
    pub freq_mean: f64,
    pub freq_var: f64,
    /// Averages of the within-replication posterior mean and variance.
    pub post_mean: f64,
    pub post_var: f64,
    /// `freq_mean / post_mean`; None when the denominator is 0.
    pub mean_ratio: Option<f64>,
    /// `freq_var / post_var`; None when the denominator is 0.
    pub variance_ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FreedmanReport {
    pub rows: Vec<FreedmanRow>,
    pub records: Vec<FreedmanRecord>,
}

fn squared_l2_draw_distances(
    post: &crate::conjugate_posterior::PosteriorDistribution,
    s: usize,
    rng: &mut ChaCha12Rng,
) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(s);
    for_each_draw(post, s, rng, |_, draw| {
        let d2: f64 = draw
            .iter()
            .zip(post.means())
            .map(|(x, m)| (x - m) * (x - m))
            .sum();
        out.push(d2);
    })?;
    Ok(out)
}

/// Per grid point: replications of the squared estimation error plus the
/// posterior mean/variance of the squared draw distance, aggregated into
/// frequentist/posterior columns and their ratios.
pub fn run_freedman(config: &ExperimentConfig) -> Result<FreedmanReport> {
    config.validate()?;
    expect_kind(config, ExperimentKind::Freedman)?;
    let s = config.draws;
    let mut rows = Vec::new();
    let mut records = Vec::new();

    for (idx, &n) in config.n_grid.as_ref().unwrap().iter().enumerate() {
        let k = config.resolve_k(n)?;
        let truth = config.build_truth(k)?;
        let reps = config.replications_for(idx);

        let batch = replicate(config.master_seed, n, reps, |seed, rep| {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            let obs = make_observation(&config.noise_override, &truth, n, &mut rng, seed)?;
            let (post, _) = fit_posterior(&config.prior, &obs)?;
            let sq_error: f64 = post
                .means()
                .iter()
                .zip(truth.coeffs())
                .map(|(m, t)| (m - t) * (m - t))
                .sum();
            let d2 = squared_l2_draw_distances(&post, s, &mut rng)?;
            Ok(FreedmanRecord {
                n,
                k,
                rep,
                seed,
                sq_error,
                post_mean_sq_dist: mean(&d2),
                post_var_sq_dist: population_variance(&d2),
            })
        })?;

        let sq_errors: Vec<f64> = batch.iter().map(|r| r.sq_error).collect();
        let freq_mean = mean(&sq_errors);
        let freq_var = population_variance(&sq_errors);
        let post_mean = mean(&batch.iter().map(|r| r.post_mean_sq_dist).collect::<Vec<_>>());
        let post_var = mean(&batch.iter().map(|r| r.post_var_sq_dist).collect::<Vec<_>>());
        rows.push(FreedmanRow {
            n,
            k,
            replications: reps,
            freq_mean,
            freq_var,
            post_mean,
            post_var,
            mean_ratio: (post_mean != 0.0).then(|| freq_mean / post_mean),
            variance_ratio: (post_var != 0.0).then(|| freq_var / post_var),
        });
        records.extend(batch);
    }

    Ok(FreedmanReport { rows, records })
}
