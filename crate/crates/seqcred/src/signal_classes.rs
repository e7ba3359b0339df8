//! Decision procedures for the signal-class restrictions under which
//! adaptive credible sets can be honest: Sobolev balls, self-similarity,
//! polished tails, and relaxed self-similarity, plus the tolerance
//! thresholds for the relaxed block fraction.
//!
//! All "for all N >= N0" conditions are decided on the truncated signal, up
//! to the largest N whose block fits inside the truncation; outcomes report
//! the range that was actually checked. Sobolev norms inside conditions are
//! computed on the truncation as well.

use crate::norms::sobolev_norm;
use crate::{invalid, Result};

/// Parameters for the self-similarity condition: every block `[N, rho*N]`
/// must carry at least the fraction `epsilon` of the beta-regular envelope
/// `||theta||^2 * N^(-2*beta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelfSimilarParams {
    pub beta: f64,
    /// Sobolev radius of the ambient ball. Recorded for reporting; the block
    /// condition itself does not use it (see [`in_self_similar_class`]).
    pub sobolev_radius: f64,
    pub epsilon: f64,
    pub rho: f64,
    pub n0: usize,
}

impl SelfSimilarParams {
    pub fn new(beta: f64, sobolev_radius: f64, epsilon: f64, rho: f64, n0: usize) -> Result<Self> {
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(invalid(format!("beta must be positive, got {beta}")));
        }
        if !(sobolev_radius > 0.0) || !sobolev_radius.is_finite() {
            return Err(invalid(format!("Sobolev radius must be positive, got {sobolev_radius}")));
        }
        if !(epsilon > 0.0 && epsilon <= 1.0) {
            return Err(invalid(format!("tolerance epsilon must be in (0, 1], got {epsilon}")));
        }
        if !(rho > 2.0) || !rho.is_finite() {
            return Err(invalid(format!("block factor rho must exceed 2, got {rho}")));
        }
        if n0 == 0 {
            return Err(invalid("start index N0 must be at least 1"));
        }
        Ok(Self { beta, sobolev_radius, epsilon, rho, n0 })
    }
}

/// Parameters for the polished-tail condition: every block `[N, rho*N]`
/// must carry at least `1/L0` of the tail energy from `N` on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolishedTailParams {
    pub l0: f64,
    pub rho: f64,
    pub n0: usize,
}

impl PolishedTailParams {
    pub fn new(l0: f64, rho: f64, n0: usize) -> Result<Self> {
        if !(l0 > 0.0) || !l0.is_finite() {
            return Err(invalid(format!("tail factor L0 must be positive, got {l0}")));
        }
        if !(rho > 2.0) || !rho.is_finite() {
            return Err(invalid(format!("block factor rho must exceed 2, got {rho}")));
        }
        if n0 == 0 {
            return Err(invalid("start index N0 must be at least 1"));
        }
        Ok(Self { l0, rho, n0 })
    }
}

/// Parameters for relaxed self-similarity: widening blocks
/// `[N^(1-epsilon), N]` against the envelope with the fixed constant
/// `c_beta = 16 * 2^(2*beta+1)`, inside the Sobolev ball of radius `big_b`,
/// optionally above the lower norm bound `b` (disabled at `b = 0`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelaxedSelfSimilarParams {
    pub beta: f64,
    pub b: f64,
    pub big_b: f64,
    pub epsilon: f64,
    pub n0: usize,
}

impl RelaxedSelfSimilarParams {
    pub fn new(beta: f64, b: f64, big_b: f64, epsilon: f64, n0: usize) -> Result<Self> {
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(invalid(format!("beta must be positive, got {beta}")));
        }
        if !(b >= 0.0) || !b.is_finite() {
            return Err(invalid(format!("lower norm bound b must be nonnegative, got {b}")));
        }
        if !(big_b > 0.0) || !big_b.is_finite() {
            return Err(invalid(format!("Sobolev radius must be positive, got {big_b}")));
        }
        if b > 0.0 && b >= big_b {
            return Err(invalid(format!("lower bound b = {b} must be below the radius {big_b}")));
        }
        if !(epsilon > 0.0 && epsilon <= 1.0) {
            return Err(invalid(format!("tolerance epsilon must be in (0, 1], got {epsilon}")));
        }
        if n0 == 0 {
            return Err(invalid("start index N0 must be at least 1"));
        }
        Ok(Self { beta, b, big_b, epsilon, n0 })
    }

    /// The block constant `16 * 2^(2*beta+1)` for this beta.
    pub fn c_beta(&self) -> f64 {
        relaxed_block_constant(self.beta)
    }
}

/// `c_beta = 16 * 2^(2*beta+1)`; equals 128 at `beta = 1`.
pub fn relaxed_block_constant(beta: f64) -> f64 {
    16.0 * (2.0f64).powf(2.0 * beta + 1.0)
}

/// Result of a class check: overall verdict, the first index where the
/// condition failed (when the failure is indexed), the inclusive range of N
/// that was examined, and an optional human-readable note (used for
/// non-indexed failures such as norm-bound violations).
#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub pass: bool,
    pub first_violation: Option<usize>,
    pub checked_range: (usize, usize),
    pub detail: Option<String>,
}

impl CheckOutcome {
    fn pass_over(range: (usize, usize)) -> Self {
        Self { pass: true, first_violation: None, checked_range: range, detail: None }
    }

    fn fail_at(n: usize, range: (usize, usize)) -> Self {
        Self { pass: false, first_violation: Some(n), checked_range: range, detail: None }
    }
}

/// Inclusive upper block index `floor(rho * N)`, with a relative slack of
/// 1e-9 so that products landing on an integer up to floating-point dust
/// (e.g. 2.3 * 10) round to that integer. Test oracles share this boundary
/// convention while summing independently.
pub fn ssim_block_end(n: usize, rho: f64) -> usize {
    let raw = rho * n as f64;
    (raw + 1e-9 * raw.max(1.0)).floor() as usize
}

/// Inclusive lower block index `ceil(N^(1-epsilon))`, at least 1, with the
/// same 1e-9 relative slack so powers landing on an integer up to dust stay
/// there rather than rounding up.
pub fn relaxed_block_start(n: usize, epsilon: f64) -> usize {
    let raw = (n as f64).powf(1.0 - epsilon);
    let start = (raw - 1e-9 * raw.max(1.0)).ceil() as usize;
    start.max(1)
}

fn require_finite(theta: &[f64]) -> Result<()> {
    if theta.iter().any(|t| !t.is_finite()) {
        return Err(invalid("signal coefficients must be finite"));
    }
    Ok(())
}

/// Prefix sums of squared coefficients: `p[i] = sum_{k<=i} theta_k^2`,
/// 1-based, `p[0] = 0`.
fn squared_prefix(theta: &[f64]) -> Vec<f64> {
    let mut p = Vec::with_capacity(theta.len() + 1);
    p.push(0.0);
    let mut acc = 0.0;
    for t in theta {
        acc += t * t;
        p.push(acc);
    }
    p
}

fn block_sum(prefix: &[f64], lo: usize, hi: usize) -> f64 {
    // Inclusive [lo, hi], 1-based, hi already clamped to K by callers.
    if lo > hi {
        0.0
    } else {
        prefix[hi] - prefix[lo - 1]
    }
}

/// `||theta||_{S^beta} <= big_b`, boundary inclusive.
pub fn in_sobolev_ball(theta: &[f64], beta: f64, big_b: f64) -> Result<bool> {
    require_finite(theta)?;
    if !(beta >= 0.0) || !beta.is_finite() {
        return Err(invalid(format!("beta must be nonnegative, got {beta}")));
    }
    if !(big_b > 0.0) || !big_b.is_finite() {
        return Err(invalid(format!("Sobolev radius must be positive, got {big_b}")));
    }
    Ok(sobolev_norm(theta, beta) <= big_b)
}

/// Sanity check of the tail envelope
/// `sum_{k>=N} theta_k^2 <= ||theta||^2_{S^beta} * N^(-2*beta)` for every N
/// in `1..=K`. This holds as a theorem in exact arithmetic, so any reported
/// violation beyond a 1e-12 relative rounding guard signals a bug upstream.
pub fn check_tail_bound(theta: &[f64], beta: f64) -> Result<CheckOutcome> {
    require_finite(theta)?;
    if !(beta >= 0.0) || !beta.is_finite() {
        return Err(invalid(format!("beta must be nonnegative, got {beta}")));
    }
    let k = theta.len();
    if k == 0 {
        return Err(invalid("signal must be nonempty"));
    }
    let prefix = squared_prefix(theta);
    let norm = sobolev_norm(theta, beta);
    let norm_sq = norm * norm;
    let range = (1, k);
    for n in 1..=k {
        let tail = prefix[k] - prefix[n - 1];
        let bound = norm_sq * (n as f64).powf(-2.0 * beta);
        if tail > bound * (1.0 + 1e-12) {
            return Ok(CheckOutcome::fail_at(n, range));
        }
    }
    Ok(CheckOutcome::pass_over(range))
}

/// Self-similarity: `sum_{k=N}^{floor(rho*N)} theta_k^2 >=
/// epsilon * ||theta||^2_{S^beta} * N^(-2*beta)` for every N from `N0` to
/// `floor(K/rho)` (the largest N whose block fits the truncation).
pub fn check_self_similar(theta: &[f64], params: &SelfSimilarParams) -> Result<CheckOutcome> {
    require_finite(theta)?;
    let k = theta.len();
    let n_end = (k as f64 / params.rho).floor() as usize;
    if n_end < params.n0 {
        return Err(invalid(format!(
            "no checkable block: rho * N0 = {} exceeds K = {k}",
            params.rho * params.n0 as f64
        )));
    }
    let prefix = squared_prefix(theta);
    let norm = sobolev_norm(theta, params.beta);
    let factor = params.epsilon * norm * norm;
    let range = (params.n0, n_end);
    for n in params.n0..=n_end {
        let hi = ssim_block_end(n, params.rho).min(k);
        let block = block_sum(&prefix, n, hi);
        let bound = factor * (n as f64).powf(-2.0 * params.beta);
        if block < bound {
            return Ok(CheckOutcome::fail_at(n, range));
        }
    }
    Ok(CheckOutcome::pass_over(range))
}

/// Membership in the self-similar class: inside the Sobolev ball of radius
/// `params.sobolev_radius` and passing [`check_self_similar`].
pub fn in_self_similar_class(theta: &[f64], params: &SelfSimilarParams) -> Result<CheckOutcome> {
    let block = check_self_similar(theta, params)?;
    if !in_sobolev_ball(theta, params.beta, params.sobolev_radius)? {
        return Ok(CheckOutcome {
            pass: false,
            first_violation: None,
            checked_range: block.checked_range,
            detail: Some(format!(
                "Sobolev norm {} exceeds the radius {}",
                sobolev_norm(theta, params.beta),
                params.sobolev_radius
            )),
        });
    }
    Ok(block)
}

/// Polished tail: `sum_{k=N}^{floor(rho*N)} theta_k^2 >=
/// (1/L0) * sum_{k=N}^{K} theta_k^2` for every N from `N0` to
/// `floor(K/rho)`; tails are truncated at K.
pub fn check_polished_tail(theta: &[f64], params: &PolishedTailParams) -> Result<CheckOutcome> {
    require_finite(theta)?;
    let k = theta.len();
    let n_end = (k as f64 / params.rho).floor() as usize;
    if n_end < params.n0 {
        return Err(invalid(format!(
            "no checkable block: rho * N0 = {} exceeds K = {k}",
            params.rho * params.n0 as f64
        )));
    }
    let prefix = squared_prefix(theta);
    let range = (params.n0, n_end);
    for n in params.n0..=n_end {
        let hi = ssim_block_end(n, params.rho).min(k);
        let block = block_sum(&prefix, n, hi);
        let tail = prefix[k] - prefix[n - 1];
        if block < tail / params.l0 {
            return Ok(CheckOutcome::fail_at(n, range));
        }
    }
    Ok(CheckOutcome::pass_over(range))
}

/// Relaxed self-similarity: membership in the Sobolev ball (and above the
/// lower norm bound when `b > 0`), plus
/// `sum_{k=ceil(N^(1-epsilon))}^{N} theta_k^2 >=
/// c_beta * ||theta||^2_{S^beta} * N^(-2*beta)` for every N in `N0..=K`.
pub fn check_relaxed_self_similar(
    theta: &[f64],
    params: &RelaxedSelfSimilarParams,
) -> Result<CheckOutcome> {
    require_finite(theta)?;
    let k = theta.len();
    if params.n0 > k {
        return Err(invalid(format!("start index N0 = {} exceeds K = {k}", params.n0)));
    }
    let range = (params.n0, k);
    let norm = sobolev_norm(theta, params.beta);
    if norm > params.big_b {
        return Ok(CheckOutcome {
            pass: false,
            first_violation: None,
            checked_range: range,
            detail: Some(format!(
                "Sobolev norm {norm} exceeds the radius {}",
                params.big_b
            )),
        });
    }
    if params.b > 0.0 && norm < params.b {
        return Ok(CheckOutcome {
            pass: false,
            first_violation: None,
            checked_range: range,
            detail: Some(format!(
                "Sobolev norm {norm} is below the lower bound {}",
                params.b
            )),
        });
    }
    let prefix = squared_prefix(theta);
    let factor = params.c_beta() * norm * norm;
    for n in params.n0..=k {
        let lo = relaxed_block_start(n, params.epsilon);
        let block = block_sum(&prefix, lo, n);
        let bound = factor * (n as f64).powf(-2.0 * params.beta);
        if block < bound {
            return Ok(CheckOutcome::fail_at(n, range));
        }
    }
    Ok(CheckOutcome::pass_over(range))
}

/// Tolerance thresholds for the relaxed block fraction: below 1/2 is
/// necessary, below `beta / (2*beta + 1/2)` is sufficient. The sufficient
/// threshold increases to 1/2 as beta grows.
pub fn epsilon_bounds(beta: f64) -> Result<(f64, f64)> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(invalid(format!("beta must be positive, got {beta}")));
    }
    Ok((0.5, beta / (2.0 * beta + 0.5)))
}

/// All grid betas for which [`check_self_similar`] passes at the given
/// block parameters. Reports finite-truncation behavior; it does not assert
/// uniqueness.
pub fn detect_regularity(
    theta: &[f64],
    beta_grid: &[f64],
    rho: f64,
    epsilon: f64,
    n0: usize,
) -> Result<Vec<f64>> {
    if beta_grid.is_empty() {
        return Err(invalid("beta grid must be nonempty"));
    }
    let mut passing = Vec::new();
    for &beta in beta_grid {
        let params = SelfSimilarParams::new(beta, 1.0, epsilon, rho, n0)?;
        if check_self_similar(theta, &params)?.pass {
            passing.push(beta);
        }
    }
    Ok(passing)
}

/// Relaxed-condition variant of [`detect_regularity`]: all grid betas for
/// which [`check_relaxed_self_similar`] passes.
pub fn detect_regularity_relaxed(
    theta: &[f64],
    beta_grid: &[f64],
    epsilon: f64,
    n0: usize,
    big_b: f64,
    b: f64,
) -> Result<Vec<f64>> {
    if beta_grid.is_empty() {
        return Err(invalid("beta grid must be nonempty"));
    }
    let mut passing = Vec::new();
    for &beta in beta_grid {
        let params = RelaxedSelfSimilarParams::new(beta, b, big_b, epsilon, n0)?;
        if check_relaxed_self_similar(theta, &params)?.pass {
            passing.push(beta);
        }
    }
    Ok(passing)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seeding::replication_rng;
    use crate::sequence_model::{lacunary_signal, polynomial_signal};
    use proptest::prelude::*;
    use rand::Rng;
    use rand_distr::StandardNormal;

    #[test]
    fn sobolev_ball_boundaries() {
        assert!(in_sobolev_ball(&[0.0; 8], 2.0, 0.5).unwrap());
        // e_2 at beta = 1 has norm exactly 2.
        let e2 = [0.0, 1.0];
        assert!(in_sobolev_ball(&e2, 1.0, 2.0).unwrap());
        assert!(!in_sobolev_ball(&e2, 1.0, 1.9).unwrap());
        assert!(in_sobolev_ball(&e2, 1.0, 0.0).is_err());
    }

    #[test]
    fn tail_bound_is_tight_for_a_spike() {
        // e_5, beta = 1: at N = 5 the tail is 1 and the bound is
        // 25 * 5^(-2) = 1, so equality must pass.
        let mut e5 = vec![0.0; 8];
        e5[4] = 1.0;
        let out = check_tail_bound(&e5, 1.0).unwrap();
        assert!(out.pass, "violation at {:?}", out.first_violation);
        assert_eq!(out.checked_range, (1, 8));
    }

    #[test]
    fn tail_bound_holds_for_random_signals() {
        for seed in 0..100u64 {
            let mut rng = replication_rng(909, 0, seed);
            let k = 1 + (rng.random::<u32>() % 64) as usize;
            let theta: Vec<f64> =
                (0..k).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
            for beta in [0.0, 0.5, 1.0, 2.5] {
                let out = check_tail_bound(&theta, beta).unwrap();
                assert!(out.pass, "seed {seed}, beta {beta}: violation at {:?}", out.first_violation);
            }
        }
    }

    #[test]
    fn self_similar_worked_example_passes() {
        let theta = [1.0, 0.5, 0.25, 0.125];
        let params = SelfSimilarParams::new(1.0, 10.0, 0.01, 2.5, 1).unwrap();
        // rho > 2 is required; with rho = 2.5 and K = 4 the checked range is
        // N0 = 1 only (floor(4/2.5) = 1), block [1, 2].
        let out = check_self_similar(&theta, &params).unwrap();
        assert!(out.pass);
        assert_eq!(out.checked_range, (1, 1));

        // Spot-check the N = 1 and N = 2 inequalities by hand at rho = 2
        // block geometry through direct sums: ||theta||^2_{S^1} = 2.8125.
        let norm = crate::norms::sobolev_norm(&theta, 1.0);
        assert!((norm * norm - 2.8125).abs() < 1e-12);
        let block1 = 1.0 + 0.25; // [1, 2]
        assert!(block1 >= 0.01 * 2.8125);
        let block2: f64 = 0.25 + 0.0625 + 0.015625; // [2, 4]
        assert!((block2 - 0.328125).abs() < 1e-15);
        assert!(block2 >= 0.01 * 2.8125 * 0.25);
    }

    #[test]
    fn self_similar_detects_a_pure_spike() {
        // All energy at k = 1: the N = 2 block is empty while the envelope
        // is positive.
        let theta = [1.0, 0.0, 0.0, 0.0, 0.0, 0.0];
        let params = SelfSimilarParams::new(1.0, 10.0, 0.5, 2.5, 2).unwrap();
        let out = check_self_similar(&theta, &params).unwrap();
        assert!(!out.pass);
        assert_eq!(out.first_violation, Some(2));
    }

    #[test]
    fn self_similar_zero_signal_is_vacuous() {
        let params = SelfSimilarParams::new(1.0, 1.0, 1.0, 2.5, 1).unwrap();
        let out = check_self_similar(&[0.0; 10], &params).unwrap();
        assert!(out.pass);
    }

    #[test]
    fn self_similar_requires_a_checkable_block() {
        let params = SelfSimilarParams::new(1.0, 1.0, 0.5, 2.5, 4).unwrap();
        assert!(check_self_similar(&[1.0; 8], &params).is_err());
    }

    #[test]
    fn class_membership_also_checks_the_ball() {
        let theta = [1.0, 0.5, 0.25, 0.125];
        let tight = SelfSimilarParams::new(1.0, 1.0, 0.01, 2.5, 1).unwrap();
        let out = in_self_similar_class(&theta, &tight).unwrap();
        assert!(!out.pass);
        assert!(out.first_violation.is_none());
        assert!(out.detail.is_some());

        let roomy = SelfSimilarParams::new(1.0, 10.0, 0.01, 2.5, 1).unwrap();
        assert!(in_self_similar_class(&theta, &roomy).unwrap().pass);
    }

    #[test]
    fn polished_tail_accepts_inverse_k() {
        let theta: Vec<f64> = (1..=1000).map(|k| 1.0 / k as f64).collect();
        let params = PolishedTailParams::new(3.0, 2.5, 2).unwrap();
        let out = check_polished_tail(&theta, &params).unwrap();
        assert!(out.pass, "violation at {:?}", out.first_violation);
    }

    #[test]
    fn polished_tail_accepts_polynomial_decay() {
        let theta = polynomial_signal(1.0, 1.0, 1000).unwrap();
        let params = PolishedTailParams::new(2.0, 2.5, 2).unwrap();
        let out = check_polished_tail(theta.coeffs(), &params).unwrap();
        assert!(out.pass, "violation at {:?}", out.first_violation);
    }

    #[test]
    fn polished_tail_rejects_lacunary_gaps() {
        let theta = lacunary_signal(2, 300).unwrap();
        let params = PolishedTailParams::new(10.0, 2.5, 2).unwrap();
        let out = check_polished_tail(theta.coeffs(), &params).unwrap();
        assert!(!out.pass);
        // Blocks [2, 5], [3, 7], [4, 10] contain the spike at k = 4; the
        // first block missing every spike starts at N = 5 ([5, 12]: spikes
        // sit at 4 and 16).
        assert_eq!(out.first_violation, Some(5));
    }

    #[test]
    fn polished_tail_zero_signal_is_vacuous() {
        let params = PolishedTailParams::new(10.0, 2.5, 1).unwrap();
        assert!(check_polished_tail(&[0.0; 12], &params).unwrap().pass);
    }

    #[test]
    fn relaxed_constant_and_thresholds() {
        assert_eq!(relaxed_block_constant(1.0), 128.0);
        assert_eq!(relaxed_block_constant(0.5), 64.0);

        assert_eq!(epsilon_bounds(1.0).unwrap(), (0.5, 0.4));
        assert_eq!(epsilon_bounds(0.25).unwrap(), (0.5, 0.25));
        let (nec, suf) = epsilon_bounds(1000.0).unwrap();
        assert!((suf - 0.5).abs() < 1e-3);
        assert!(suf < nec);
        assert!(epsilon_bounds(0.0).is_err());
    }

    #[test]
    fn relaxed_zero_signal_passes_without_lower_bound() {
        let params = RelaxedSelfSimilarParams::new(1.0, 0.0, 1.0, 0.5, 1).unwrap();
        let out = check_relaxed_self_similar(&[0.0; 16], &params).unwrap();
        assert!(out.pass);

        let bounded = RelaxedSelfSimilarParams::new(1.0, 0.5, 1.0, 0.5, 1).unwrap();
        let out = check_relaxed_self_similar(&[0.0; 16], &bounded).unwrap();
        assert!(!out.pass);
        assert!(out.detail.is_some());
    }

    #[test]
    fn relaxed_rejects_norm_outside_the_ball() {
        let theta = [10.0, 0.0, 0.0, 0.0];
        let params = RelaxedSelfSimilarParams::new(1.0, 0.0, 1.0, 0.5, 1).unwrap();
        let out = check_relaxed_self_similar(&theta, &params).unwrap();
        assert!(!out.pass);
        assert!(out.first_violation.is_none());
    }

    #[test]
    fn relaxed_multi_beta_witness_passes_two_regularities() {
        // A 0.75-regular polynomial tail satisfies the relaxed condition for
        // both beta = 0.5 and beta = 1 at these parameters; the plain
        // self-similar check at matching block settings rejects beta = 0.5,
        // so the relaxation is what buys the multiplicity.
        let theta = polynomial_signal(0.75, 1.0, 8192).unwrap();
        for beta in [0.5, 1.0] {
            let params = RelaxedSelfSimilarParams::new(beta, 0.0, 16.0, 0.9, 520).unwrap();
            let out = check_relaxed_self_similar(theta.coeffs(), &params).unwrap();
            assert!(out.pass, "beta {beta}: violation at {:?}", out.first_violation);
        }

        let strict = SelfSimilarParams::new(0.5, 16.0, 0.05, 2.5, 520).unwrap();
        let out = check_self_similar(theta.coeffs(), &strict).unwrap();
        assert!(!out.pass, "strict check unexpectedly passed at beta = 0.5");
    }

    #[test]
    fn relaxed_requires_n0_within_truncation() {
        let params = RelaxedSelfSimilarParams::new(1.0, 0.0, 1.0, 0.5, 20).unwrap();
        assert!(check_relaxed_self_similar(&[1.0; 8], &params).is_err());
    }

    #[test]
    fn regularity_scan_matches_frozen_sets() {
        let theta = polynomial_signal(1.0, 1.0, 2048).unwrap();
        let grid = [0.5, 1.0, 1.5, 2.0];
        // At tolerances 0.05 and 0.02 the scan singles out the generating
        // regularity; a demanding tolerance rejects everything (the true
        // beta first fails at N = 8).
        for eps in [0.05, 0.02] {
            let got = detect_regularity(theta.coeffs(), &grid, 2.5, eps, 8).unwrap();
            assert_eq!(got, vec![1.0], "tolerance {eps}");
        }
        let harsh = detect_regularity(theta.coeffs(), &grid, 2.5, 0.2, 8).unwrap();
        assert!(harsh.is_empty(), "unexpected passes {harsh:?}");
    }

    #[test]
    fn regularity_scan_zero_signal_passes_everything() {
        let grid = [0.5, 1.0, 2.0];
        let got = detect_regularity(&[0.0; 32], &grid, 2.5, 0.5, 1).unwrap();
        assert_eq!(got, grid.to_vec());
        assert!(detect_regularity(&[0.0; 32], &[], 2.5, 0.5, 1).is_err());
    }

    #[test]
    fn relaxed_scan_reports_the_multi_beta_witness() {
        let theta = polynomial_signal(0.75, 1.0, 8192).unwrap();
        let got =
            detect_regularity_relaxed(theta.coeffs(), &[0.5, 1.0], 0.9, 520, 16.0, 0.0).unwrap();
        assert_eq!(got, vec![0.5, 1.0]);
    }

    #[test]
    fn block_boundary_helpers_handle_float_dust() {
        // 2.3 * 10 = 22.999999999999996 in binary; the convention treats it
        // as exactly 23.
        assert_eq!(ssim_block_end(10, 2.3), 23);
        assert_eq!(ssim_block_end(4, 2.5), 10);
        // 1024^(1/2) must stay 32 even if powf lands a hair above.
        assert_eq!(relaxed_block_start(1024, 0.5), 32);
        assert_eq!(relaxed_block_start(1, 0.5), 1);
        // Non-integer powers round up as usual.
        assert_eq!(relaxed_block_start(10, 0.5), 4);
    }

    #[test]
    fn param_constructors_validate() {
        assert!(SelfSimilarParams::new(0.0, 1.0, 0.5, 2.5, 1).is_err());
        assert!(SelfSimilarParams::new(1.0, 1.0, 0.0, 2.5, 1).is_err());
        assert!(SelfSimilarParams::new(1.0, 1.0, 1.1, 2.5, 1).is_err());
        assert!(SelfSimilarParams::new(1.0, 1.0, 0.5, 2.0, 1).is_err());
        assert!(SelfSimilarParams::new(1.0, 1.0, 0.5, 2.5, 0).is_err());
        assert!(PolishedTailParams::new(0.0, 2.5, 1).is_err());
        assert!(PolishedTailParams::new(1.0, 1.5, 1).is_err());
        assert!(RelaxedSelfSimilarParams::new(1.0, -0.1, 1.0, 0.5, 1).is_err());
        assert!(RelaxedSelfSimilarParams::new(1.0, 2.0, 1.0, 0.5, 1).is_err());
        assert!(RelaxedSelfSimilarParams::new(1.0, 0.0, 1.0, 1.5, 1).is_err());
    }

    fn random_signal(seed: u64, max_k: usize) -> Vec<f64> {
        let mut rng = replication_rng(4242, 1, seed);
        let k = 4 + (rng.random::<u32>() as usize % max_k);
        (0..k).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()
    }

    #[test]
    fn tolerance_monotonicity_holds_on_random_signals() {
        for seed in 0..40u64 {
            let theta = random_signal(seed, 60);
            let pass_hi = check_self_similar(
                &theta,
                &SelfSimilarParams::new(1.0, 1.0, 0.4, 2.5, 1).unwrap(),
            )
            .unwrap()
            .pass;
            let pass_lo = check_self_similar(
                &theta,
                &SelfSimilarParams::new(1.0, 1.0, 0.1, 2.5, 1).unwrap(),
            )
            .unwrap()
            .pass;
            assert!(!pass_hi || pass_lo, "seed {seed}: tolerance monotonicity broken");

            let pt_tight =
                check_polished_tail(&theta, &PolishedTailParams::new(2.0, 2.5, 1).unwrap())
                    .unwrap()
                    .pass;
            let pt_loose =
                check_polished_tail(&theta, &PolishedTailParams::new(8.0, 2.5, 1).unwrap())
                    .unwrap()
                    .pass;
            assert!(!pt_tight || pt_loose, "seed {seed}: L0 monotonicity broken");
        }
    }

    proptest! {
        #[test]
        fn checkers_are_scale_invariant(
            theta in proptest::collection::vec(-5.0f64..5.0, 8..48),
            c in prop_oneof![0.001f64..1000.0, -1000.0f64..-0.001],
        ) {
            let scaled: Vec<f64> = theta.iter().map(|t| t * c).collect();

            let ss = SelfSimilarParams::new(1.0, 1.0, 0.3, 2.5, 1).unwrap();
            let a = check_self_similar(&theta, &ss).unwrap();
            let b = check_self_similar(&scaled, &ss).unwrap();
            prop_assert_eq!(a.pass, b.pass);
            prop_assert_eq!(a.first_violation, b.first_violation);

            let pt = PolishedTailParams::new(4.0, 2.5, 1).unwrap();
            let a = check_polished_tail(&theta, &pt).unwrap();
            let b = check_polished_tail(&scaled, &pt).unwrap();
            prop_assert_eq!(a.pass, b.pass);
            prop_assert_eq!(a.first_violation, b.first_violation);

            // Relaxed check with an unbounded ball and b = 0 is also scale
            // invariant.
            let rx = RelaxedSelfSimilarParams::new(1.0, 0.0, 1e12, 0.5, 1).unwrap();
            let a = check_relaxed_self_similar(&theta, &rx).unwrap();
            let b = check_relaxed_self_similar(&scaled, &rx).unwrap();
            prop_assert_eq!(a.pass, b.pass);
        }

        #[test]
        fn tail_bound_never_fails(theta in proptest::collection::vec(-10.0f64..10.0, 1..64)) {
            let out = check_tail_bound(&theta, 1.0).unwrap();
            prop_assert!(out.pass);
        }
    }
}
