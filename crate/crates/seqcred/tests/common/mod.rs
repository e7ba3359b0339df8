//! Oracles and fixtures shared by the integration suites. Every oracle
//! recomputes its answer by the most direct method available (numerical
//! integration, double loops over raw coefficients), independent of the
//! library's closed forms and prefix-sum algebra.

#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha12Rng;

use seqcred::experiments::{ExperimentConfig, ExperimentKind, PriorSpec, TruthSpec};
use seqcred::signal_classes::{relaxed_block_start, ssim_block_end};

/// Posterior mean and variance of one coordinate by Simpson's rule on the
/// unnormalized density `exp(-n (y - t)^2 / 2 - t^2 / (2 lambda))`.
pub fn quadrature_posterior_moments(y: f64, n: f64, lambda: f64) -> (f64, f64) {
    let scale = lambda.sqrt() + 1.0 / n.sqrt();
    let lo = y.min(0.0) - 12.0 * scale;
    let hi = y.max(0.0) + 12.0 * scale;
    let steps = 100_000usize; // even, so Simpson's rule applies cleanly
    let h = (hi - lo) / steps as f64;
    let density = |t: f64| (-0.5 * n * (y - t) * (y - t) - t * t / (2.0 * lambda)).exp();

    let mut mass = 0.0;
    let mut first = 0.0;
    let mut second = 0.0;
    for i in 0..=steps {
        let t = lo + i as f64 * h;
        let w = if i == 0 || i == steps {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        let f = w * density(t);
        mass += f;
        first += f * t;
        second += f * t * t;
    }
    let mean = first / mass;
    let var = second / mass - mean * mean;
    (mean, var)
}

/// Verdict triple compared against the library's `CheckOutcome`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BruteOutcome {
    pub pass: bool,
    pub first_violation: Option<usize>,
    pub checked_range: (usize, usize),
}

impl BruteOutcome {
    fn pass_over(range: (usize, usize)) -> Self {
        Self { pass: true, first_violation: None, checked_range: range }
    }
}

/// `sqrt(sum k^(2 beta) theta_k^2)` by direct ascending summation, the same
/// order the library uses.
pub fn brute_sobolev_norm(theta: &[f64], beta: f64) -> f64 {
    let mut acc = 0.0;
    for (i, t) in theta.iter().enumerate() {
        acc += t * t * ((i + 1) as f64).powf(2.0 * beta);
    }
    acc.sqrt()
}

fn direct_block(theta: &[f64], lo: usize, hi: usize) -> f64 {
    // Inclusive 1-based [lo, hi], hi already clamped by the caller.
    let mut acc = 0.0;
    for k in lo..=hi {
        acc += theta[k - 1] * theta[k - 1];
    }
    acc
}

pub fn brute_tail_bound(theta: &[f64], beta: f64) -> BruteOutcome {
    let k = theta.len();
    let norm = brute_sobolev_norm(theta, beta);
    let norm_sq = norm * norm;
    let range = (1, k);
    for n in 1..=k {
        let tail = direct_block(theta, n, k);
        let bound = norm_sq * (n as f64).powf(-2.0 * beta);
        if tail > bound * (1.0 + 1e-12) {
            return BruteOutcome { pass: false, first_violation: Some(n), checked_range: range };
        }
    }
    BruteOutcome::pass_over(range)
}

pub fn brute_self_similar(
    theta: &[f64],
    beta: f64,
    epsilon: f64,
    rho: f64,
    n0: usize,
) -> BruteOutcome {
    let k = theta.len();
    let n_end = (k as f64 / rho).floor() as usize;
    assert!(n_end >= n0, "fixture bug: no checkable block");
    let norm = brute_sobolev_norm(theta, beta);
    let factor = epsilon * norm * norm;
    let range = (n0, n_end);
    for n in n0..=n_end {
        let hi = ssim_block_end(n, rho).min(k);
        let block = direct_block(theta, n, hi);
        let bound = factor * (n as f64).powf(-2.0 * beta);
        if block < bound {
            return BruteOutcome { pass: false, first_violation: Some(n), checked_range: range };
        }
    }
    BruteOutcome::pass_over(range)
}

pub fn brute_polished_tail(theta: &[f64], l0: f64, rho: f64, n0: usize) -> BruteOutcome {
    let k = theta.len();
    let n_end = (k as f64 / rho).floor() as usize;
    assert!(n_end >= n0, "fixture bug: no checkable block");
    let range = (n0, n_end);
    for n in n0..=n_end {
        let hi = ssim_block_end(n, rho).min(k);
        let block = direct_block(theta, n, hi);
        let tail = direct_block(theta, n, k);
        if block < tail / l0 {
            return BruteOutcome { pass: false, first_violation: Some(n), checked_range: range };
        }
    }
    BruteOutcome::pass_over(range)
}

pub fn brute_relaxed_self_similar(
    theta: &[f64],
    beta: f64,
    b: f64,
    big_b: f64,
    epsilon: f64,
    n0: usize,
) -> BruteOutcome {
    let k = theta.len();
    assert!(n0 <= k, "fixture bug: N0 exceeds K");
    let range = (n0, k);
    let norm = brute_sobolev_norm(theta, beta);
    if norm > big_b || (b > 0.0 && norm < b) {
        return BruteOutcome { pass: false, first_violation: None, checked_range: range };
    }
    let factor = 16.0 * (2.0f64).powf(2.0 * beta + 1.0) * norm * norm;
    for n in n0..=k {
        let lo = relaxed_block_start(n, epsilon);
        let block = direct_block(theta, lo, n);
        let bound = factor * (n as f64).powf(-2.0 * beta);
        if block < bound {
            return BruteOutcome { pass: false, first_violation: Some(n), checked_range: range };
        }
    }
    BruteOutcome::pass_over(range)
}

/// A grab bag of signal shapes for randomized cross-checks: rough noise,
/// smooth decay, sparse spikes, constant blocks, and the zero signal.
pub fn random_signal(rng: &mut ChaCha12Rng) -> Vec<f64> {
    let k = rng.random_range(8..=512);
    match rng.random_range(0..5) {
        0 => (0..k).map(|_| rng.sample::<f64, _>(rand_distr::StandardNormal)).collect(),
        1 => {
            let beta: f64 = rng.random_range(0.3..2.5);
            let amp: f64 = rng.random_range(0.1..4.0);
            (1..=k)
                .map(|i| {
                    let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
                    sign * amp * (i as f64).powf(-0.5 - beta)
                })
                .collect()
        }
        2 => {
            let mut theta = vec![0.0; k];
            for _ in 0..rng.random_range(1..=6) {
                let at = rng.random_range(0..k);
                theta[at] = rng.random_range(-3.0..3.0);
            }
            theta
        }
        3 => {
            let mut theta = vec![0.0; k];
            let mut level: f64 = rng.random_range(0.5..2.0);
            let mut i = 0;
            while i < k {
                let run = rng.random_range(1..=16).min(k - i);
                for t in theta.iter_mut().skip(i).take(run) {
                    *t = level;
                }
                level *= rng.random_range(0.2..0.9);
                i += run;
            }
            theta
        }
        _ => vec![0.0; k],
    }
}

/// Experiment config with every optional field empty; tests fill in what
/// the kind under test needs.
pub fn base_config(kind: ExperimentKind) -> ExperimentConfig {
    ExperimentConfig {
        kind,
        truth: TruthSpec::polynomial(1.0),
        prior: PriorSpec::fixed(1.0, 1.0),
        n: None,
        n_grid: None,
        k: None,
        alpha: None,
        blowup: None,
        norm: None,
        draws: 100,
        replications: None,
        master_seed: 0,
        reference_sd: None,
        subsample: None,
        out_dir: None,
        noise_override: None,
    }
}
