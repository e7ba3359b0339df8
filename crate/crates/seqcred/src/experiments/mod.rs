//! Replicated Monte Carlo experiment harness: coverage studies, the
//! frequentist/posterior variance contrast, radius scaling, posterior-vs-
//! white-noise discrepancy sweeps, and the two-panel draw-cloud pipeline,
//! all driven by a JSON config and persisted as CSV/JSON artifacts.
//!
//! Determinism contract: a run is a pure function of (config, master_seed).
//! Each replication gets its own counter-based seed, so results are
//! byte-identical across thread counts and across reruns.

pub mod bvm;
pub mod check_class;
pub mod cli;
pub mod config;
pub mod coverage;
pub mod figure1;
pub mod freedman;
pub mod outputs;
pub mod scaling;

pub use bvm::{run_bvm, BvmRecord, BvmReport, BvmRow};
pub use check_class::{check_class_files, run_check_class, ClassCondition};
pub use cli::cli_main;
pub use config::{
    multiscale_truncation, ExperimentConfig, ExperimentKind, NormConfig, PriorSpec, Replications,
    TruthSpec, MAX_TRUNCATION,
};
pub use coverage::{run_coverage, CoverageRecord, CoverageReport};
pub use figure1::{run_figure1, Figure1Report};
pub use freedman::{run_freedman, FreedmanRecord, FreedmanReport, FreedmanRow};
pub use outputs::{write_manifest, write_outputs, ExperimentReport};
pub use scaling::{run_radius_scaling, ScalingRecord, ScalingReport, ScalingRow};

use rand::Rng;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;

use crate::conjugate_posterior::{
    compute_posterior, empirical_bayes_gamma, for_each_draw, DiagonalGaussianPrior,
    PosteriorDistribution,
};
use crate::credible_sets::NormSpec;
use crate::seeding::replication_seed;
use crate::sequence_model::{
    generate_observation, generate_observation_with_noise, Observation, SignalVector,
};
use crate::{invalid, Error, Result};

/// z quantile for the 95% Wilson interval.
pub(crate) const WILSON_Z: f64 = 1.959963984540054;

/// Wilson 95% score interval for a binomial proportion. Always contains the
/// point estimate `successes / trials`.
pub fn wilson_interval(successes: usize, trials: usize) -> (f64, f64) {
    assert!(trials > 0, "interval needs at least one trial");
    assert!(successes <= trials);
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = WILSON_Z * WILSON_Z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = WILSON_Z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    // At the boundaries the exact endpoints are 0 and 1; don't let rounding
    // in center +- half pull them inside.
    let low = if successes == 0 { 0.0 } else { (center - half).max(0.0) };
    let high = if successes == trials { 1.0 } else { (center + half).min(1.0) };
    (low, high)
}

pub(crate) fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample standard deviation (denominator len - 1); 0 for fewer than two
/// points.
pub(crate) fn sample_sd(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    (xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
}

/// Population variance (denominator len), so one replication gives exactly 0.
pub(crate) fn population_variance(xs: &[f64]) -> f64 {
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / xs.len() as f64
}

/// Run `reps` independent replications in parallel, each seeded by the
/// stable mix of (master_seed, n, replication index). Results come back in
/// replication order whatever the thread count.
pub(crate) fn replicate<T: Send>(
    master_seed: u64,
    n: f64,
    reps: usize,
    body: impl Fn(u64, usize) -> Result<T> + Sync,
) -> Result<Vec<T>> {
    if reps == 0 {
        return Err(invalid("replications must be at least 1"));
    }
    let stream = n.to_bits();
    (0..reps)
        .into_par_iter()
        .map(|rep| body(replication_seed(master_seed, stream, rep as u64), rep))
        .collect()
}

/// One observation per replication: injected noise when the config carries
/// an override, fresh seeded noise otherwise.
pub(crate) fn make_observation(
    noise_override: &Option<Vec<f64>>,
    truth: &SignalVector,
    n: f64,
    rng: &mut ChaCha12Rng,
    seed: u64,
) -> Result<Observation> {
    match noise_override {
        Some(g) => generate_observation_with_noise(truth, n, g),
        None => generate_observation(truth, n, rng, seed),
    }
}

/// Posterior under the configured prior; empirical Bayes reports the
/// selected regularity.
pub(crate) fn fit_posterior(
    prior: &PriorSpec,
    obs: &Observation,
) -> Result<(PosteriorDistribution, Option<f64>)> {
    match (&prior.gamma, &prior.gamma_grid) {
        (Some(g), None) => {
            let p = DiagonalGaussianPrior::new(*g, prior.tau, obs.len())?;
            Ok((compute_posterior(&p, obs)?, None))
        }
        (None, Some(grid)) => {
            let fit = empirical_bayes_gamma(obs, grid, prior.tau)?;
            let p = DiagonalGaussianPrior::new(fit.gamma_hat, prior.tau, obs.len())?;
            Ok((compute_posterior(&p, obs)?, Some(fit.gamma_hat)))
        }
        _ => Err(invalid("prior needs exactly one of gamma or gamma_grid")),
    }
}

/// Stream `s` posterior draws and return `scale * ||draw - mean||` in draw
/// order under the given norm.
pub(crate) fn posterior_distances(
    post: &PosteriorDistribution,
    s: usize,
    rng: &mut ChaCha12Rng,
    norm: &NormSpec,
    scale: f64,
) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(s);
    let mut failure: Option<Error> = None;
    for_each_draw(post, s, rng, |_, draw| {
        if failure.is_some() {
            return;
        }
        match norm.distance(draw, post.means()) {
            Ok(d) => out.push(scale * d),
            Err(e) => failure = Some(e),
        }
    })?;
    match failure {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// `s` white-noise norm values: each draw has i.i.d. `N(0, sd^2)`
/// coordinates, evaluated in the given norm.
pub(crate) fn white_noise_norms(
    k: usize,
    s: usize,
    sd: f64,
    rng: &mut ChaCha12Rng,
    norm: &NormSpec,
) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(s);
    let mut g = vec![0.0; k];
    for _ in 0..s {
        for gi in g.iter_mut() {
            *gi = sd * rng.sample::<f64, _>(rand_distr::StandardNormal);
        }
        out.push(norm.norm_of(&g)?);
    }
    Ok(out)
}

pub(crate) fn expect_kind(config: &ExperimentConfig, kind: ExperimentKind) -> Result<()> {
    if config.kind != kind {
        return Err(invalid(format!(
            "config kind is `{}` but this runner handles `{}`",
            config.kind.name(),
            kind.name()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_interval_contains_the_estimate() {
        for (s, n) in [(0usize, 10usize), (10, 10), (475, 500), (1, 3), (250, 500)] {
            let p = s as f64 / n as f64;
            let (lo, hi) = wilson_interval(s, n);
            assert!(lo <= p && p <= hi, "({s}, {n}): [{lo}, {hi}] misses {p}");
            assert!((0.0..=1.0).contains(&lo) && (0.0..=1.0).contains(&hi));
        }
        // More trials shrink the interval at fixed proportion.
        let (lo1, hi1) = wilson_interval(95, 100);
        let (lo2, hi2) = wilson_interval(950, 1000);
        assert!(hi2 - lo2 < hi1 - lo1);
    }

    #[test]
    fn variance_conventions() {
        assert_eq!(population_variance(&[3.0]), 0.0);
        assert_eq!(sample_sd(&[3.0]), 0.0);
        assert!((population_variance(&[1.0, 3.0]) - 1.0).abs() < 1e-15);
        assert!((sample_sd(&[1.0, 3.0]) - 2.0f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn replication_results_are_order_stable() {
        let a = replicate(9, 100.0, 64, |seed, rep| Ok((seed, rep))).unwrap();
        let b = replicate(9, 100.0, 64, |seed, rep| Ok((seed, rep))).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().enumerate().all(|(i, (_, rep))| i == *rep));
        // Distinct replications get distinct seeds.
        let mut seeds: Vec<u64> = a.iter().map(|(s, _)| *s).collect();
        seeds.sort_unstable();
        seeds.dedup();
        assert_eq!(seeds.len(), 64);
    }
}
