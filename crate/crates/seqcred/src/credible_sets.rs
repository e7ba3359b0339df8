//! Credible balls calibrated from posterior draws, plus the empirical-CDF
//! discrepancy used to compare the scaled posterior with its white-noise
//! reference.
//!
//! Radius convention: the `1 - alpha` quantile of draw-to-center distances is
//! the 1-based order statistic at index `ceil((1 - alpha) * S)` of the sorted
//! distances (higher interpolation). Membership is inclusive:
//! `distance <= blowup * radius`.

use std::fmt::Write as _;
use std::path::Path;

use rand::Rng;
use rand_distr::StandardNormal;
use serde_json::json;

use crate::conjugate_posterior::DrawMatrix;
use crate::norms::{
    ellipsoid_norm, l2_norm, multiscale_norm_slice, EllipsoidWeightSpec, MultiscaleWeightSpec,
};
use crate::sequence_model::SignalVector;
use crate::{invalid, mismatch, Result};

/// Which norm a ball (or a distance computation) lives in.
#[derive(Debug, Clone, PartialEq)]
pub enum NormSpec {
    L2,
    Ellipsoid(EllipsoidWeightSpec),
    Multiscale(MultiscaleWeightSpec),
}

impl NormSpec {
    pub fn name(&self) -> &'static str {
        match self {
            NormSpec::L2 => "l2",
            NormSpec::Ellipsoid(_) => "ellipsoid",
            NormSpec::Multiscale(_) => "multiscale",
        }
    }

    /// Norm of a coefficient slice. Ellipsoid weights may extend past the
    /// slice; multiscale slices must fill every level exactly.
    pub fn norm_of(&self, x: &[f64]) -> Result<f64> {
        match self {
            NormSpec::L2 => Ok(l2_norm(x)),
            NormSpec::Ellipsoid(spec) => ellipsoid_norm(x, spec),
            NormSpec::Multiscale(spec) => multiscale_norm_slice(x, spec),
        }
    }

    /// Norm of the coordinatewise difference `a - b`.
    pub fn distance(&self, a: &[f64], b: &[f64]) -> Result<f64> {
        if a.len() != b.len() {
            return Err(mismatch(format!(
                "distance between slices of lengths {} and {}",
                a.len(),
                b.len()
            )));
        }
        let diff: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        self.norm_of(&diff)
    }

    fn params_json(&self) -> serde_json::Value {
        match self {
            NormSpec::L2 => json!({}),
            NormSpec::Ellipsoid(spec) => json!({
                "delta": spec.delta(),
                "coordinates": spec.len(),
            }),
            NormSpec::Multiscale(spec) => json!({
                "max_level": spec.max_level(),
                "coordinates": spec.signal_len(),
            }),
        }
    }
}

/// `1 - alpha` quantile of the distances under the higher-interpolation
/// order-statistic convention.
pub fn radius_from_distances(distances: &[f64], alpha: f64) -> Result<f64> {
    if distances.is_empty() {
        return Err(invalid("radius needs at least one distance"));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(invalid(format!("alpha must be in (0, 1), got {alpha}")));
    }
    if distances.iter().any(|d| !d.is_finite() || *d < 0.0) {
        return Err(invalid("distances must be finite and nonnegative"));
    }
    let mut sorted = distances.to_vec();
    sorted.sort_by(f64::total_cmp);
    let s = sorted.len();
    let rank = ((1.0 - alpha) * s as f64).ceil() as usize;
    let rank = rank.clamp(1, s);
    Ok(sorted[rank - 1])
}

/// Distances from each draw to the center, in draw order.
pub fn draw_distances(draws: &DrawMatrix, center: &[f64], norm: &NormSpec) -> Result<Vec<f64>> {
    if draws.cols() != center.len() {
        return Err(mismatch(format!(
            "{} draw coordinates vs {} center coordinates",
            draws.cols(),
            center.len()
        )));
    }
    draws.iter_rows().map(|row| norm.distance(row, center)).collect()
}

/// Radius of the `1 - alpha` credible ball around `center` calibrated from
/// the draw matrix.
pub fn calibrate_radius(
    draws: &DrawMatrix,
    center: &[f64],
    norm: &NormSpec,
    alpha: f64,
) -> Result<f64> {
    let distances = draw_distances(draws, center, norm)?;
    radius_from_distances(&distances, alpha)
}

/// A calibrated ball `{theta : ||theta - center|| <= blowup * radius}`.
#[derive(Debug, Clone, PartialEq)]
pub struct CredibleBall {
    center: SignalVector,
    radius: f64,
    blowup: f64,
    alpha: f64,
    norm: NormSpec,
}

impl CredibleBall {
    pub fn new(
        center: SignalVector,
        radius: f64,
        blowup: f64,
        alpha: f64,
        norm: NormSpec,
    ) -> Result<Self> {
        if !(radius >= 0.0) || !radius.is_finite() {
            return Err(invalid(format!("ball radius must be finite and nonnegative, got {radius}")));
        }
        if !(blowup >= 1.0) || !blowup.is_finite() {
            return Err(invalid(format!("blow-up factor must be at least 1, got {blowup}")));
        }
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(invalid(format!("alpha must be in (0, 1), got {alpha}")));
        }
        // Fail early rather than on the first membership query.
        norm.distance(center.coeffs(), center.coeffs())?;
        Ok(Self { center, radius, blowup, alpha, norm })
    }

    pub fn center(&self) -> &SignalVector {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn blowup(&self) -> f64 {
        self.blowup
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn norm(&self) -> &NormSpec {
        &self.norm
    }

    pub fn effective_radius(&self) -> f64 {
        self.blowup * self.radius
    }

    /// Inclusive membership test against the blown-up radius.
    pub fn contains(&self, theta: &[f64]) -> Result<bool> {
        let d = self.norm.distance(theta, self.center.coeffs())?;
        Ok(d <= self.effective_radius())
    }

    /// JSON summary of the ball's geometry. `center_ref` points at wherever
    /// the center coefficients were written (e.g. a CSV path).
    pub fn summary_json(&self, center_ref: Option<&str>) -> serde_json::Value {
        json!({
            "norm": {
                "name": self.norm.name(),
                "params": self.norm.params_json(),
            },
            "alpha": self.alpha,
            "radius": self.radius,
            "blowup": self.blowup,
            "effective_radius": self.effective_radius(),
            "center_len": self.center.len(),
            "center_ref": center_ref,
        })
    }
}

/// Monte Carlo estimate of a probability, with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbabilityEstimate {
    pub estimate: f64,
    pub standard_error: f64,
    pub draws: usize,
}

/// `P(||g||_w <= m)` for white noise `g` with i.i.d. standard normal
/// coordinates, estimated from `s` Monte Carlo draws in the ellipsoid norm.
pub fn white_noise_ellipsoid_measure<R: Rng + ?Sized>(
    spec: &EllipsoidWeightSpec,
    m: f64,
    s: usize,
    rng: &mut R,
) -> Result<ProbabilityEstimate> {
    if s == 0 {
        return Err(invalid("measure estimate needs at least one draw"));
    }
    if !(m >= 0.0) || !m.is_finite() {
        return Err(invalid(format!("threshold must be finite and nonnegative, got {m}")));
    }
    let k = spec.len();
    let mut hits = 0usize;
    let mut g = vec![0.0; k];
    for _ in 0..s {
        for gi in g.iter_mut() {
            *gi = rng.sample::<f64, _>(StandardNormal);
        }
        if ellipsoid_norm(&g, spec)? <= m {
            hits += 1;
        }
    }
    let p = hits as f64 / s as f64;
    Ok(ProbabilityEstimate {
        estimate: p,
        standard_error: (p * (1.0 - p) / s as f64).sqrt(),
        draws: s,
    })
}

/// 200 equally spaced grid points spanning the pooled range of both samples.
pub fn auto_m_grid(a: &[f64], b: &[f64]) -> Result<Vec<f64>> {
    if a.is_empty() || b.is_empty() {
        return Err(invalid("grid construction needs nonempty samples"));
    }
    let lo = a.iter().chain(b).copied().fold(f64::INFINITY, f64::min);
    let hi = a.iter().chain(b).copied().fold(f64::NEG_INFINITY, f64::max);
    if !lo.is_finite() || !hi.is_finite() {
        return Err(invalid("samples must be finite"));
    }
    let points = 200usize;
    if hi == lo {
        return Ok(vec![lo; points]);
    }
    let step = (hi - lo) / (points - 1) as f64;
    Ok((0..points).map(|i| lo + step * i as f64).collect())
}

fn ecdf_at(sorted: &[f64], m: f64) -> f64 {
    // Count of values <= m via partition point on the sorted sample.
    let count = sorted.partition_point(|&x| x <= m);
    count as f64 / sorted.len() as f64
}

/// Sup over the grid of |ECDF_a(M) - ECDF_b(M)|. With `None` the grid is
/// [`auto_m_grid`] over the pooled samples.
pub fn bvm_discrepancy(a: &[f64], b: &[f64], grid: Option<&[f64]>) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(invalid("discrepancy needs nonempty samples"));
    }
    let owned;
    let grid = match grid {
        Some(g) => {
            if g.is_empty() {
                return Err(invalid("discrepancy grid must be nonempty"));
            }
            g
        }
        None => {
            owned = auto_m_grid(a, b)?;
            &owned
        }
    };
    let mut sa = a.to_vec();
    let mut sb = b.to_vec();
    sa.sort_by(f64::total_cmp);
    sb.sort_by(f64::total_cmp);
    let mut sup = 0.0f64;
    for &m in grid {
        let d = (ecdf_at(&sa, m) - ecdf_at(&sb, m)).abs();
        sup = sup.max(d);
    }
    Ok(sup)
}

/// CSV with columns `draw,distance`, one row per draw in draw order.
pub fn distances_to_csv(distances: &[f64]) -> String {
    let mut out = String::from("draw,distance\n");
    for (i, d) in distances.iter().enumerate() {
        let _ = writeln!(out, "{i},{d}");
    }
    out
}

pub fn write_distances_csv(path: &Path, distances: &[f64]) -> Result<()> {
    std::fs::write(path, distances_to_csv(distances))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conjugate_posterior::{
        compute_posterior, sample_posterior, DiagonalGaussianPrior, PosteriorDistribution,
    };
    use crate::seeding::replication_rng;
    use crate::sequence_model::{generate_observation_with_noise, IndexMode};
    use proptest::prelude::*;

    #[test]
    fn radius_uses_the_higher_order_statistic() {
        let d = [1.0, 2.0, 3.0, 4.0];
        // ceil(0.95 * 4) = 4 -> largest distance.
        assert_eq!(radius_from_distances(&d, 0.05).unwrap(), 4.0);
        // ceil(0.5 * 4) = 2.
        assert_eq!(radius_from_distances(&d, 0.5).unwrap(), 2.0);
        // ceil(0.75 * 4) = 3.
        assert_eq!(radius_from_distances(&d, 0.25).unwrap(), 3.0);
        // Input order must not matter.
        assert_eq!(radius_from_distances(&[4.0, 1.0, 3.0, 2.0], 0.05).unwrap(), 4.0);
        // Constant distances.
        assert_eq!(radius_from_distances(&[2.0; 4], 0.37).unwrap(), 2.0);
        // Single draw: every alpha gives that distance.
        assert_eq!(radius_from_distances(&[7.5], 0.05).unwrap(), 7.5);
    }

    #[test]
    fn radius_rejects_bad_inputs() {
        assert!(radius_from_distances(&[], 0.05).is_err());
        assert!(radius_from_distances(&[1.0], 0.0).is_err());
        assert!(radius_from_distances(&[1.0], 1.0).is_err());
        assert!(radius_from_distances(&[-1.0], 0.05).is_err());
        assert!(radius_from_distances(&[f64::NAN], 0.05).is_err());
    }

    #[test]
    fn scalar_gaussian_radius_matches_the_normal_quantile() {
        // K = 1, l2: the 95% radius of N(m, v) around m is 1.95996 * sqrt(v).
        let post = PosteriorDistribution::new(vec![0.3], vec![0.25], 1.0, IndexMode::Single)
            .unwrap();
        let mut rng = replication_rng(11, 0, 0);
        let draws = sample_posterior(&post, 100_000, &mut rng).unwrap();
        let r = calibrate_radius(&draws, &[0.3], &NormSpec::L2, 0.05).unwrap();
        let expected = 1.959963984540054 * 0.5;
        assert!(
            (r - expected).abs() < 0.02 * expected,
            "radius {r} vs {expected}"
        );
    }

    #[test]
    fn membership_is_inclusive_and_scales_with_blowup() {
        let center = SignalVector::new_single(vec![0.0, 0.0]).unwrap();
        let ball = CredibleBall::new(center.clone(), 1.0, 1.0, 0.05, NormSpec::L2).unwrap();
        assert!(ball.contains(&[1.0, 0.0]).unwrap());
        assert!(!ball.contains(&[1.0 + 1e-9, 0.0]).unwrap());

        let blown = CredibleBall::new(center, 1.0, 3.0, 0.05, NormSpec::L2).unwrap();
        assert!(blown.contains(&[3.0, 0.0]).unwrap());
        assert!(!blown.contains(&[0.0, 3.0 + 1e-9]).unwrap());
        assert_eq!(blown.effective_radius(), 3.0);
    }

    #[test]
    fn ball_constructor_validates() {
        let center = SignalVector::new_single(vec![0.0]).unwrap();
        assert!(CredibleBall::new(center.clone(), -1.0, 1.0, 0.05, NormSpec::L2).is_err());
        assert!(CredibleBall::new(center.clone(), 1.0, 0.5, 0.05, NormSpec::L2).is_err());
        assert!(CredibleBall::new(center.clone(), 1.0, 1.0, 0.0, NormSpec::L2).is_err());
        assert!(CredibleBall::new(center, 1.0, 1.0, 1.0, NormSpec::L2).is_err());
    }

    #[test]
    fn ball_summary_reports_geometry() {
        let center = SignalVector::new_single(vec![0.0; 4]).unwrap();
        let spec = EllipsoidWeightSpec::default_for(4);
        let ball =
            CredibleBall::new(center, 2.0, 1.5, 0.1, NormSpec::Ellipsoid(spec)).unwrap();
        let js = ball.summary_json(Some("center.csv"));
        assert_eq!(js["norm"]["name"], "ellipsoid");
        assert_eq!(js["alpha"], 0.1);
        assert_eq!(js["radius"], 2.0);
        assert_eq!(js["blowup"], 1.5);
        assert_eq!(js["effective_radius"], 3.0);
        assert_eq!(js["center_ref"], "center.csv");
        assert_eq!(js["norm"]["params"]["delta"], 2.0);
    }

    #[test]
    fn calibrated_ball_contains_its_own_quantile_draw() {
        let prior = DiagonalGaussianPrior::new(1.0, 1.0, 8).unwrap();
        let theta = SignalVector::new_single(vec![0.5; 8]).unwrap();
        let obs = generate_observation_with_noise(&theta, 25.0, &vec![0.1; 8]).unwrap();
        let post = compute_posterior(&prior, &obs).unwrap();
        let mut rng = replication_rng(21, 0, 0);
        let draws = sample_posterior(&post, 500, &mut rng).unwrap();
        let center = post.center();
        let norm = NormSpec::L2;
        let distances = draw_distances(&draws, center.coeffs(), &norm).unwrap();
        let r = radius_from_distances(&distances, 0.05).unwrap();
        let ball = CredibleBall::new(center, r, 1.0, 0.05, norm).unwrap();
        let inside = draws
            .iter_rows()
            .filter(|row| ball.contains(row).unwrap())
            .count();
        // By construction at least ceil(0.95 * S) draws sit inside.
        assert!(inside >= 475, "only {inside}/500 draws inside");
    }

    #[test]
    fn white_noise_measure_hits_both_extremes() {
        let spec = EllipsoidWeightSpec::default_for(16);
        let mut rng = replication_rng(31, 0, 0);
        let zero = white_noise_ellipsoid_measure(&spec, 0.0, 200, &mut rng).unwrap();
        assert_eq!(zero.estimate, 0.0);
        let one = white_noise_ellipsoid_measure(&spec, 1e6, 200, &mut rng).unwrap();
        assert_eq!(one.estimate, 1.0);
        assert_eq!(one.standard_error, 0.0);
        assert!(white_noise_ellipsoid_measure(&spec, 1.0, 0, &mut rng).is_err());
        assert!(white_noise_ellipsoid_measure(&spec, -1.0, 10, &mut rng).is_err());
    }

    #[test]
    fn white_noise_measure_is_seed_consistent() {
        let spec = EllipsoidWeightSpec::default_for(32);
        let m = 2.0;
        let a = white_noise_ellipsoid_measure(&spec, m, 4000, &mut replication_rng(1, 0, 0))
            .unwrap();
        let b = white_noise_ellipsoid_measure(&spec, m, 4000, &mut replication_rng(2, 0, 0))
            .unwrap();
        assert!((0.01..0.99).contains(&a.estimate), "degenerate test point {}", a.estimate);
        let se = (a.standard_error.powi(2) + b.standard_error.powi(2)).sqrt();
        assert!(
            (a.estimate - b.estimate).abs() <= 3.0 * se + 1e-12,
            "estimates {} vs {} with pooled se {se}",
            a.estimate,
            b.estimate
        );
    }

    #[test]
    fn discrepancy_extremes() {
        let a = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(bvm_discrepancy(&a, &a, None).unwrap(), 0.0);

        // Well separated clusters: some grid point falls in the gap.
        let lo = [0.0, 0.1, 0.2, 0.3];
        let hi = [1000.0, 1000.1, 1000.2];
        assert_eq!(bvm_discrepancy(&lo, &hi, None).unwrap(), 1.0);

        assert!(bvm_discrepancy(&[], &a, None).is_err());
        assert!(bvm_discrepancy(&a, &a, Some(&[])).is_err());
    }

    #[test]
    fn discrepancy_with_explicit_grid() {
        let a = [1.0, 2.0];
        let b = [1.0, 3.0];
        // At M = 2: F_a = 1, F_b = 0.5.
        assert_eq!(bvm_discrepancy(&a, &b, Some(&[2.0])).unwrap(), 0.5);
        // At M = 0.5 both are 0; at M = 3 both are 1.
        assert_eq!(bvm_discrepancy(&a, &b, Some(&[0.5, 3.0])).unwrap(), 0.0);
    }

    #[test]
    fn distances_csv_round_shape() {
        let csv = distances_to_csv(&[0.5, 1.25]);
        assert_eq!(csv, "draw,distance\n0,0.5\n1,1.25\n");
    }

    proptest! {
        #[test]
        fn radius_is_permutation_invariant_and_equivariant(
            mut d in proptest::collection::vec(0.0f64..100.0, 1..64),
            alpha in 0.01f64..0.99,
            scale in 0.1f64..10.0,
        ) {
            let r = radius_from_distances(&d, alpha).unwrap();
            d.reverse();
            prop_assert_eq!(radius_from_distances(&d, alpha).unwrap(), r);
            let scaled: Vec<f64> = d.iter().map(|x| x * scale).collect();
            let rs = radius_from_distances(&scaled, alpha).unwrap();
            prop_assert!((rs - scale * r).abs() <= 1e-9 * rs.max(1.0));
            // The radius is always one of the observed distances.
            prop_assert!(d.iter().any(|&x| x == r));
        }

        #[test]
        fn discrepancy_is_bounded_and_symmetric(
            a in proptest::collection::vec(-50.0f64..50.0, 1..40),
            b in proptest::collection::vec(-50.0f64..50.0, 1..40),
        ) {
            let d = bvm_discrepancy(&a, &b, None).unwrap();
            prop_assert!((0.0..=1.0).contains(&d));
            let rev = bvm_discrepancy(&b, &a, None).unwrap();
            prop_assert!((d - rev).abs() < 1e-15);
        }
    }
}
