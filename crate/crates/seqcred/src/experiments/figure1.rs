//! Draw-cloud data: one replication, full posterior sample, per-draw
//! accept/reject flags for the l2 ball and the ellipsoid ball side by side,
//! plus plotter-ready coordinate and subsample tables.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use super::config::{ExperimentConfig, ExperimentKind};
use super::{expect_kind, fit_posterior, make_observation};
use crate::conjugate_posterior::for_each_draw;
use crate::credible_sets::{radius_from_distances, NormSpec};
use crate::norms::EllipsoidWeightSpec;
use crate::seeding::replication_seed;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Figure1Report {
    pub n: f64,
    pub k: usize,
    pub alpha: f64,
    pub blowup: f64,
    pub draws: usize,
    pub seed: u64,
    pub gamma_hat: Option<f64>,
    pub truth: Vec<f64>,
    pub posterior_mean: Vec<f64>,
    /// Indices (into the draw sequence) of the retained subsample rows.
    pub subsample_indices: Vec<usize>,
    pub subsample_draws: Vec<Vec<f64>>,
    pub accept_l2: Vec<bool>,
    pub accept_ellipsoid: Vec<bool>,
    pub radius_l2: f64,
    pub radius_ellipsoid: f64,
    pub accept_rate_l2: f64,
    pub accept_rate_ellipsoid: f64,
    /// Fraction of draws on which the two accept flags agree.
    pub agreement_rate: f64,
}

/// One replication at the configured n: stream the posterior draws once,
/// recording both distances per draw and an evenly strided subsample, then
/// calibrate the l2 and ellipsoid radii and flag each draw against both
/// balls.
pub fn run_figure1(config: &ExperimentConfig) -> Result<Figure1Report> {
    config.validate()?;
    expect_kind(config, ExperimentKind::Figure1)?;
    let n = config.n.unwrap();
    let k = config.resolve_k(n)?;
    let alpha = config.alpha.unwrap();
    let blowup = config.blowup.unwrap_or(1.0);
    let s = config.draws;
    let sub = config.subsample.unwrap_or(100).min(s);
    let truth = config.build_truth(k)?;

    let l2 = NormSpec::L2;
    let ellipsoid = NormSpec::Ellipsoid(EllipsoidWeightSpec::default_for(k));

    let seed = replication_seed(config.master_seed, n.to_bits(), 0);
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let obs = make_observation(&config.noise_override, &truth, n, &mut rng, seed)?;
    let (post, gamma_hat) = fit_posterior(&config.prior, &obs)?;

    let stride = (s / sub).max(1);
    let mut d_l2 = Vec::with_capacity(s);
    let mut d_ell = Vec::with_capacity(s);
    let mut subsample_indices = Vec::with_capacity(sub);
    let mut subsample_draws = Vec::with_capacity(sub);
    let mut failure: Option<Error> = None;
    for_each_draw(&post, s, &mut rng, |i, draw| {
        if failure.is_some() {
            return;
        }
        match (l2.distance(draw, post.means()), ellipsoid.distance(draw, post.means())) {
            (Ok(a), Ok(b)) => {
                d_l2.push(a);
                d_ell.push(b);
            }
            (Err(e), _) | (_, Err(e)) => {
                failure = Some(e);
                return;
            }
        }
        if i % stride == 0 && subsample_draws.len() < sub {
            subsample_indices.push(i);
            subsample_draws.push(draw.to_vec());
        }
    })?;
    if let Some(e) = failure {
        return Err(e);
    }

    let radius_l2 = radius_from_distances(&d_l2, alpha)?;
    let radius_ellipsoid = radius_from_distances(&d_ell, alpha)?;
    let accept_l2: Vec<bool> = d_l2.iter().map(|d| *d <= blowup * radius_l2).collect();
    let accept_ellipsoid: Vec<bool> =
        d_ell.iter().map(|d| *d <= blowup * radius_ellipsoid).collect();
    let agree = accept_l2
        .iter()
        .zip(&accept_ellipsoid)
        .filter(|(a, b)| a == b)
        .count();
    let rate = |flags: &[bool]| flags.iter().filter(|f| **f).count() as f64 / s as f64;

    Ok(Figure1Report {
        n,
        k,
        alpha,
        blowup,
        draws: s,
        seed,
        gamma_hat,
        truth: truth.coeffs().to_vec(),
        posterior_mean: post.means().to_vec(),
        subsample_indices,
        subsample_draws,
        accept_rate_l2: rate(&accept_l2),
        accept_rate_ellipsoid: rate(&accept_ellipsoid),
        accept_l2,
        accept_ellipsoid,
        radius_l2,
        radius_ellipsoid,
        agreement_rate: agree as f64 / s as f64,
    })
}
