//! Distributional distance between the scaled posterior and its white-noise
//! limit across a sample-size grid, with an optional mis-scaled reference as
//! a negative control.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use super::config::{ExperimentConfig, ExperimentKind};
use super::{
    expect_kind, fit_posterior, make_observation, mean, posterior_distances, replicate,
    sample_sd, white_noise_norms,
};
use crate::credible_sets::bvm_discrepancy;
use crate::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct BvmRecord {
    pub n: f64,
    pub k: usize,
    pub rep: usize,
    pub seed: u64,
    pub discrepancy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BvmRow {
    pub n: f64,
    pub k: usize,
    pub replications: usize,
    pub mean_discrepancy: f64,
    pub sd_discrepancy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BvmReport {
    pub reference_sd: f64,
    pub rows: Vec<BvmRow>,
    pub records: Vec<BvmRecord>,
}

/// Per replication: the sup distance between the empirical CDFs of
/// `sqrt(n) * ||draw - center||` (S posterior draws) and `||g||` (S white
/// noise draws with coordinate sd `reference_sd`), both in the configured
/// norm. The reference draws continue the replication's RNG stream.
pub fn run_bvm(config: &ExperimentConfig) -> Result<BvmReport> {
    config.validate()?;
    expect_kind(config, ExperimentKind::Bvm)?;
    let s = config.draws;
    let reference_sd = config.reference_sd.unwrap_or(1.0);
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
            let scaled = posterior_distances(&post, s, &mut rng, &norm, n.sqrt())?;
            let reference = white_noise_norms(k, s, reference_sd, &mut rng, &norm)?;
            let discrepancy = bvm_discrepancy(&scaled, &reference, None)?;
            Ok(BvmRecord { n, k, rep, seed, discrepancy })
        })?;

        let ds: Vec<f64> = batch.iter().map(|r| r.discrepancy).collect();
        rows.push(BvmRow {
            n,
            k,
            replications: reps,
            mean_discrepancy: mean(&ds),
            sd_discrepancy: sample_sd(&ds),
        });
        records.extend(batch);
    }

    Ok(BvmReport { reference_sd, rows, records })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::config::{NormConfig, PriorSpec, Replications, TruthSpec};

    fn small_config() -> ExperimentConfig {
        ExperimentConfig {
            kind: ExperimentKind::Bvm,
            truth: TruthSpec::polynomial(1.0),
            prior: PriorSpec::fixed(1.0, 1.0),
            n: None,
            n_grid: Some(vec![50.0, 100.0]),
            k: None,
            alpha: None,
            blowup: None,
            norm: Some(NormConfig::ellipsoid()),
            draws: 150,
            replications: Some(Replications::Scalar(4)),
            master_seed: 88,
            reference_sd: None,
            subsample: None,
            out_dir: None,
            noise_override: None,
        }
    }

    #[test]
    fn duplicated_grid_values_give_identical_discrepancies() {
        let mut cfg = small_config();
        cfg.n_grid = Some(vec![50.0, 50.0]);
        let report = run_bvm(&cfg).unwrap();
        assert_eq!(report.rows[0].mean_discrepancy, report.rows[1].mean_discrepancy);
        let (a, b) = report.records.split_at(4);
        for (x, y) in a.iter().zip(b) {
            assert_eq!(x.seed, y.seed);
            assert_eq!(x.discrepancy, y.discrepancy);
        }
    }

    #[test]
    fn discrepancies_live_in_the_unit_interval() {
        let report = run_bvm(&small_config()).unwrap();
        for r in &report.records {
            assert!((0.0..=1.0).contains(&r.discrepancy));
        }
        assert_eq!(report.reference_sd, 1.0);
        assert_eq!(report.rows.len(), 2);
    }

    #[test]
    fn mismatched_reference_scale_inflates_the_discrepancy() {
        let base = run_bvm(&small_config()).unwrap();
        let mut cfg = small_config();
        cfg.reference_sd = Some(4.0);
        let shifted = run_bvm(&cfg).unwrap();
        for (a, b) in base.rows.iter().zip(&shifted.rows) {
            assert!(
                b.mean_discrepancy > a.mean_discrepancy + 0.2,
                "n = {}: {} vs {}",
                a.n,
                b.mean_discrepancy,
                a.mean_discrepancy
            );
        }
    }

    #[test]
    fn reruns_are_identical() {
        let a = run_bvm(&small_config()).unwrap();
        let b = run_bvm(&small_config()).unwrap();
        assert_eq!(a, b);
    }
}
