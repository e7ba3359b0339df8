//! Diagonal conjugate Gaussian prior and its closed-form posterior.
//!
//! Prior coordinate variances are `lambda_k = tau^2 * k^(-1-2*gamma)`, so the
//! posterior factorizes per coordinate:
//!
//! ```text
//! m_k = lambda_k / (lambda_k + 1/n) * Y_k
//! v_k = (lambda_k / n) / (lambda_k + 1/n)
//! ```
//!
//! Marginally `Y_k ~ N(0, lambda_k + 1/n)`, which gives an exact marginal
//! likelihood for selecting `gamma` from a grid (empirical Bayes).

use std::fmt::Write as _;
use std::path::Path;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::sequence_model::{IndexMode, Observation, SignalVector};
use crate::{invalid, mismatch, Result};

/// Prior `theta_k ~ N(0, tau^2 * k^(-1-2*gamma))`, truncated at `K`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalGaussianPrior {
    gamma: f64,
    tau: f64,
    k: usize,
}

impl DiagonalGaussianPrior {
    pub fn new(gamma: f64, tau: f64, k: usize) -> Result<Self> {
        if !(gamma > 0.0) || !gamma.is_finite() {
            return Err(invalid(format!("prior regularity gamma must be positive, got {gamma}")));
        }
        if !(tau > 0.0) || !tau.is_finite() {
            return Err(invalid(format!("prior scale tau must be positive, got {tau}")));
        }
        if k == 0 {
            return Err(invalid("prior truncation K must be at least 1"));
        }
        Ok(Self { gamma, tau, k })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn truncation(&self) -> usize {
        self.k
    }

    /// Prior variances `lambda_1..lambda_K`, strictly decreasing.
    pub fn variances(&self) -> Vec<f64> {
        let t2 = self.tau * self.tau;
        (1..=self.k)
            .map(|i| t2 * (i as f64).powf(-1.0 - 2.0 * self.gamma))
            .collect()
    }
}

/// Per-coordinate Gaussian posterior `theta_k | Y ~ N(m_k, v_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PosteriorDistribution {
    means: Vec<f64>,
    variances: Vec<f64>,
    n: f64,
    mode: IndexMode,
}

impl PosteriorDistribution {
    /// Direct construction, mainly for test doubles (e.g. degenerate
    /// `v_k = 0` posteriors). Conjugate posteriors come from
    /// [`compute_posterior`].
    pub fn new(means: Vec<f64>, variances: Vec<f64>, n: f64, mode: IndexMode) -> Result<Self> {
        if means.len() != variances.len() {
            return Err(mismatch(format!(
                "{} means vs {} variances",
                means.len(),
                variances.len()
            )));
        }
        if means.is_empty() {
            return Err(invalid("posterior needs at least one coordinate"));
        }
        if !(n > 0.0) || !n.is_finite() {
            return Err(invalid(format!("posterior n must be positive, got {n}")));
        }
        if variances.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(invalid("posterior variances must be finite and nonnegative"));
        }
        Ok(Self { means, variances, n, mode })
    }

    pub fn means(&self) -> &[f64] {
        &self.means
    }

    pub fn variances(&self) -> &[f64] {
        &self.variances
    }

    pub fn n(&self) -> f64 {
        self.n
    }

    pub fn mode(&self) -> IndexMode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.means.len()
    }

    pub fn is_empty(&self) -> bool {
        self.means.is_empty()
    }

    /// Posterior mean as a signal in the observation's index mode.
    pub fn center(&self) -> SignalVector {
        match self.mode {
            IndexMode::Single => SignalVector::new_single(self.means.clone()),
            IndexMode::Multiscale { .. } => SignalVector::new_multiscale(self.means.clone()),
        }
        .expect("posterior mean is a valid signal")
    }

    /// CSV with columns `k,mean,variance`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,mean,variance\n");
        for (i, (m, v)) in self.means.iter().zip(&self.variances).enumerate() {
            let _ = writeln!(out, "{},{m},{v}", i + 1);
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }
}

/// Exact coordinatewise conjugate update.
pub fn compute_posterior(
    prior: &DiagonalGaussianPrior,
    obs: &Observation,
) -> Result<PosteriorDistribution> {
    if prior.truncation() != obs.len() {
        return Err(mismatch(format!(
            "prior truncation {} vs observation length {}",
            prior.truncation(),
            obs.len()
        )));
    }
    let n = obs.n();
    let inv_n = 1.0 / n;
    let lambdas = prior.variances();
    let mut means = Vec::with_capacity(obs.len());
    let mut variances = Vec::with_capacity(obs.len());
    for (&lambda, &y) in lambdas.iter().zip(obs.y()) {
        let denom = lambda + inv_n;
        means.push(lambda / denom * y);
        variances.push((lambda * inv_n) / denom);
    }
    PosteriorDistribution::new(means, variances, n, obs.mode())
}

/// Dense matrix of posterior draws, one row per draw.
#[derive(Debug, Clone, PartialEq)]
pub struct DrawMatrix {
    data: Vec<f64>,
    rows: usize,
    cols: usize,
}

impl DrawMatrix {
    pub fn from_rows(rows_data: Vec<Vec<f64>>) -> Result<Self> {
        if rows_data.is_empty() {
            return Err(invalid("draw matrix needs at least one row"));
        }
        let cols = rows_data[0].len();
        if rows_data.iter().any(|r| r.len() != cols) {
            return Err(mismatch("draw matrix rows have unequal lengths"));
        }
        let mut data = Vec::with_capacity(rows_data.len() * cols);
        for r in &rows_data {
            data.extend_from_slice(r);
        }
        Ok(Self { data, rows: rows_data.len(), cols })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.cols)
    }
}

/// `S` independent posterior draws as a dense matrix. For large `S * K`
/// prefer the streaming [`for_each_draw`].
pub fn sample_posterior<R: Rng + ?Sized>(
    post: &PosteriorDistribution,
    s: usize,
    rng: &mut R,
) -> Result<DrawMatrix> {
    if s == 0 {
        return Err(invalid("draw count S must be at least 1"));
    }
    let sds: Vec<f64> = post.variances().iter().map(|v| v.sqrt()).collect();
    let cols = post.len();
    let mut data = Vec::with_capacity(s * cols);
    for _ in 0..s {
        for (m, sd) in post.means().iter().zip(&sds) {
            data.push(m + sd * rng.sample::<f64, _>(StandardNormal));
        }
    }
    Ok(DrawMatrix { data, rows: s, cols })
}

/// Stream `S` posterior draws through `f(draw_index, draw)` without
/// materializing the matrix. Draws arrive in index order and reuse one
/// buffer; the draw sequence is identical to [`sample_posterior`] under the
/// same RNG state.
pub fn for_each_draw<R: Rng + ?Sized>(
    post: &PosteriorDistribution,
    s: usize,
    rng: &mut R,
    mut f: impl FnMut(usize, &[f64]),
) -> Result<()> {
    if s == 0 {
        return Err(invalid("draw count S must be at least 1"));
    }
    let sds: Vec<f64> = post.variances().iter().map(|v| v.sqrt()).collect();
    let mut buf = vec![0.0; post.len()];
    for i in 0..s {
        for ((b, m), sd) in buf.iter_mut().zip(post.means()).zip(&sds) {
            *b = m + sd * rng.sample::<f64, _>(StandardNormal);
        }
        f(i, &buf);
    }
    Ok(())
}

/// Exact marginal log-likelihood of the observation under prior
/// `(gamma, tau)`: `sum_k -0.5 * [ln(2 pi (lambda_k + 1/n)) + Y_k^2/(lambda_k + 1/n)]`.
pub fn marginal_log_likelihood(gamma: f64, tau: f64, obs: &Observation) -> Result<f64> {
    let prior = DiagonalGaussianPrior::new(gamma, tau, obs.len())?;
    let inv_n = 1.0 / obs.n();
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut total = 0.0;
    for (&lambda, &y) in prior.variances().iter().zip(obs.y()) {
        let s = lambda + inv_n;
        total += -0.5 * ((two_pi * s).ln() + y * y / s);
    }
    Ok(total)
}

/// Grid maximizer of the marginal log-likelihood.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalBayesFit {
    /// Selected regularity (ties broken toward the smallest grid value).
    pub gamma_hat: f64,
    /// Marginal log-likelihood at each grid point, in grid order.
    pub log_likelihoods: Vec<f64>,
}

/// Select `gamma` by maximizing the marginal likelihood over a grid.
/// The grid must be nonempty, strictly increasing, and positive. Ties break
/// toward the smallest `gamma` (wider, conservative sets).
pub fn empirical_bayes_gamma(
    obs: &Observation,
    grid: &[f64],
    tau: f64,
) -> Result<EmpiricalBayesFit> {
    if grid.is_empty() {
        return Err(invalid("empirical Bayes grid must be nonempty"));
    }
    if !grid.windows(2).all(|w| w[0] < w[1]) {
        return Err(invalid("empirical Bayes grid must be strictly increasing"));
    }
    if grid[0] <= 0.0 {
        return Err(invalid("empirical Bayes grid values must be positive"));
    }
    let mut log_likelihoods = Vec::with_capacity(grid.len());
    let mut best = (grid[0], f64::NEG_INFINITY);
    for &gamma in grid {
        let ll = marginal_log_likelihood(gamma, tau, obs)?;
        log_likelihoods.push(ll);
        if ll > best.1 {
            best = (gamma, ll);
        }
    }
    Ok(EmpiricalBayesFit { gamma_hat: best.0, log_likelihoods })
}
