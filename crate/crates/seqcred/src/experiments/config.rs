//! JSON experiment configuration: schema, validation, and resolution into
//! runtime objects (truth signal, prior, norm, truncation level).
//!
//! Unknown JSON fields are rejected. Fields that a given experiment kind
//! does not consume are rejected too, so a config never silently carries
//! dead settings.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::norms::{EllipsoidWeightSpec, MultiscaleWeightSpec};
use crate::credible_sets::NormSpec;
use crate::sequence_model::{IndexMode, SignalVector};
use crate::{invalid, Error, Result};

/// Hard ceiling on the truncation level; `round(n)` is clamped to this.
pub const MAX_TRUNCATION: usize = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentKind {
    Coverage,
    Freedman,
    Scaling,
    Bvm,
    Figure1,
}

impl ExperimentKind {
    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::Coverage => "coverage",
            ExperimentKind::Freedman => "freedman",
            ExperimentKind::Scaling => "scaling",
            ExperimentKind::Bvm => "bvm",
            ExperimentKind::Figure1 => "figure1",
        }
    }
}

/// True signal: either a named generator with its parameters or a CSV path.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruthSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitude: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<String>,
}

impl TruthSpec {
    pub fn polynomial(beta: f64) -> Self {
        Self { generator: Some("polynomial".into()), beta: Some(beta), amplitude: None, q: None, csv: None }
    }

    pub fn zero() -> Self {
        Self { generator: Some("zero".into()), beta: None, amplitude: None, q: None, csv: None }
    }

    fn validate(&self) -> Result<()> {
        match (&self.generator, &self.csv) {
            (Some(_), Some(_)) => {
                return Err(invalid("truth spec cannot give both a generator and a csv path"))
            }
            (None, None) => {
                return Err(invalid("truth spec needs a generator name or a csv path"))
            }
            _ => {}
        }
        if self.csv.is_some() {
            if self.beta.is_some() || self.amplitude.is_some() || self.q.is_some() {
                return Err(invalid("csv truth spec does not take generator parameters"));
            }
            return Ok(());
        }
        match self.generator.as_deref().unwrap() {
            "polynomial" => {
                if self.beta.is_none() {
                    return Err(invalid("polynomial truth requires `beta`"));
                }
                if self.q.is_some() {
                    return Err(invalid("polynomial truth does not take `q`"));
                }
            }
            "lacunary" => {
                let q = match self.q {
                    Some(q) => q,
                    None => return Err(invalid("lacunary truth requires `q`")),
                };
                if !(q >= 2.0) || q.fract() != 0.0 || q > u32::MAX as f64 {
                    return Err(invalid(format!(
                        "lacunary truth needs an integer gap base q >= 2, got {q}"
                    )));
                }
                if self.beta.is_some() || self.amplitude.is_some() {
                    return Err(invalid("lacunary truth takes only `q`"));
                }
            }
            "zero" => {
                if self.beta.is_some() || self.amplitude.is_some() || self.q.is_some() {
                    return Err(invalid("zero truth takes no parameters"));
                }
            }
            other => {
                return Err(invalid(format!(
                    "unknown truth generator `{other}` (expected polynomial, lacunary, or zero)"
                )))
            }
        }
        Ok(())
    }

    /// Materialize the truth at truncation `k` in the given index mode.
    pub fn build(&self, k: usize, multiscale: bool) -> Result<SignalVector> {
        if let Some(path) = &self.csv {
            let sig = SignalVector::read_csv(Path::new(path))?;
            let is_multi = matches!(sig.mode(), IndexMode::Multiscale { .. });
            if is_multi != multiscale {
                return Err(invalid(format!(
                    "truth signal from {path} uses {} indexing but the norm requires {}",
                    if is_multi { "multiscale" } else { "single" },
                    if multiscale { "multiscale" } else { "single" },
                )));
            }
            if sig.len() != k {
                return Err(invalid(format!(
                    "truth signal from {path} has {} coefficients but the run uses K = {k}",
                    sig.len()
                )));
            }
            return Ok(sig);
        }
        let coeffs: Vec<f64> = match self.generator.as_deref().unwrap() {
            "polynomial" => {
                let beta = self.beta.unwrap();
                let c = self.amplitude.unwrap_or(1.0);
                crate::sequence_model::polynomial_signal(beta, c, k)?.coeffs().to_vec()
            }
            "lacunary" => {
                crate::sequence_model::lacunary_signal(self.q.unwrap() as u64, k)?
                    .coeffs()
                    .to_vec()
            }
            "zero" => vec![0.0; k],
            _ => unreachable!("validated generator"),
        };
        if multiscale {
            SignalVector::new_multiscale(coeffs)
        } else {
            SignalVector::new_single(coeffs)
        }
    }
}

/// Prior: fixed regularity `gamma`, or a grid for empirical Bayes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PriorSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_grid: Option<Vec<f64>>,
    pub tau: f64,
}

impl PriorSpec {
    pub fn fixed(gamma: f64, tau: f64) -> Self {
        Self { gamma: Some(gamma), gamma_grid: None, tau }
    }

    pub fn empirical_bayes(grid: Vec<f64>, tau: f64) -> Self {
        Self { gamma: None, gamma_grid: Some(grid), tau }
    }

    fn validate(&self) -> Result<()> {
        if !(self.tau > 0.0) || !self.tau.is_finite() {
            return Err(invalid(format!("prior tau must be positive, got {}", self.tau)));
        }
        match (&self.gamma, &self.gamma_grid) {
            (Some(_), Some(_)) => Err(invalid("prior takes `gamma` or `gamma_grid`, not both")),
            (None, None) => Err(invalid("prior needs `gamma` or `gamma_grid`")),
            (Some(g), None) => {
                if !(*g > 0.0) || !g.is_finite() {
                    return Err(invalid(format!("prior gamma must be positive, got {g}")));
                }
                Ok(())
            }
            (None, Some(grid)) => {
                if grid.is_empty() {
                    return Err(invalid("empirical Bayes grid must be nonempty"));
                }
                if !grid.windows(2).all(|w| w[0] < w[1]) {
                    return Err(invalid("empirical Bayes grid must be strictly increasing"));
                }
                if grid[0] <= 0.0 {
                    return Err(invalid("empirical Bayes grid values must be positive"));
                }
                Ok(())
            }
        }
    }
}

/// Norm selection for balls and distances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormConfig {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights_csv: Option<String>,
}

impl NormConfig {
    pub fn l2() -> Self {
        Self { name: "l2".into(), delta: None, weights_csv: None }
    }

    pub fn ellipsoid() -> Self {
        Self { name: "ellipsoid".into(), delta: None, weights_csv: None }
    }

    pub fn multiscale() -> Self {
        Self { name: "multiscale".into(), delta: None, weights_csv: None }
    }

    fn validate(&self) -> Result<()> {
        match self.name.as_str() {
            "l2" => {
                if self.delta.is_some() || self.weights_csv.is_some() {
                    return Err(invalid("l2 norm takes no parameters"));
                }
            }
            "ellipsoid" => {
                if let Some(d) = self.delta {
                    if !(d > 1.0) || !d.is_finite() {
                        return Err(invalid(format!("ellipsoid delta must exceed 1, got {d}")));
                    }
                }
            }
            "multiscale" => {
                if self.delta.is_some() {
                    return Err(invalid("multiscale norm does not take `delta`"));
                }
            }
            other => {
                return Err(invalid(format!(
                    "unknown norm `{other}` (expected l2, ellipsoid, or multiscale)"
                )))
            }
        }
        Ok(())
    }

    pub fn is_multiscale(&self) -> bool {
        self.name == "multiscale"
    }

    /// Resolve to a concrete norm at truncation `k`.
    pub fn build(&self, k: usize) -> Result<NormSpec> {
        match self.name.as_str() {
            "l2" => Ok(NormSpec::L2),
            "ellipsoid" => {
                let spec = match &self.weights_csv {
                    Some(path) => {
                        let loaded = EllipsoidWeightSpec::read_csv(
                            Path::new(path),
                            self.delta.unwrap_or(2.0),
                        )?;
                        if loaded.len() < k {
                            return Err(invalid(format!(
                                "ellipsoid weights from {path} cover {} coordinates, run needs {k}",
                                loaded.len()
                            )));
                        }
                        loaded
                    }
                    None => EllipsoidWeightSpec::default_for(k),
                };
                Ok(NormSpec::Ellipsoid(spec))
            }
            "multiscale" => {
                let max_level = max_level_for(k)?;
                let spec = match &self.weights_csv {
                    Some(path) => {
                        let loaded = MultiscaleWeightSpec::read_csv(Path::new(path))?;
                        if loaded.max_level() != max_level {
                            return Err(invalid(format!(
                                "multiscale weights from {path} stop at level {}, run needs {max_level}",
                                loaded.max_level()
                            )));
                        }
                        loaded
                    }
                    None => MultiscaleWeightSpec::default_for_max_level(max_level),
                };
                Ok(NormSpec::Multiscale(spec))
            }
            _ => unreachable!("validated norm name"),
        }
    }
}

/// Replication count: one number for all grid points, or one per point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Replications {
    Scalar(usize),
    PerN(Vec<usize>),
}

/// Full experiment description. See `configs/` in the repo root for worked
/// examples of every kind.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub truth: TruthSpec,
    pub prior: PriorSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_grid: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blowup: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub norm: Option<NormConfig>,
    pub draws: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub replications: Option<Replications>,
    pub master_seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference_sd: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subsample: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<String>,
    /// Replaces the random noise sequence in every replication; for
    /// degenerate-noise tests from Rust only, never part of the JSON schema.
    #[serde(skip)]
    pub noise_override: Option<Vec<f64>>,
}

/// Largest truncation of the form `2^(J+1) - 1` not exceeding `limit`
/// (multiscale signals need every level complete).
pub fn multiscale_truncation(limit: usize) -> Result<usize> {
    if limit == 0 {
        return Err(invalid("truncation limit must be at least 1"));
    }
    let mut k = 1usize;
    while 2 * k + 1 <= limit {
        k = 2 * k + 1;
    }
    Ok(k)
}

fn max_level_for(k: usize) -> Result<u32> {
    if k == 0 || !(k + 1).is_power_of_two() {
        return Err(invalid(format!(
            "multiscale truncation must have the form 2^(J+1)-1, got {k}"
        )));
    }
    Ok((k + 1).trailing_zeros() - 1)
}

impl ExperimentConfig {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let config: ExperimentConfig =
            serde_json::from_str(s).map_err(|e| Error::Parse(format!("config: {e}")))?;
        config.validate_strict()?;
        Ok(config)
    }

    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("config {}: {e}", path.display())))?;
        Self::from_json_str(&text)
    }

    /// The n values this run sweeps (a single-element vector for scalar-n
    /// kinds).
    pub fn n_values(&self) -> Vec<f64> {
        match (&self.n, &self.n_grid) {
            (Some(n), _) => vec![*n],
            (None, Some(grid)) => grid.clone(),
            (None, None) => Vec::new(),
        }
    }

    /// Replications for grid position `idx`.
    pub fn replications_for(&self, idx: usize) -> usize {
        match &self.replications {
            Some(Replications::Scalar(r)) => *r,
            Some(Replications::PerN(rs)) => rs[idx],
            None => 1,
        }
    }

    /// Truncation level for a given n: an explicit `k` wins; otherwise
    /// `round(n)` clamped to [`MAX_TRUNCATION`], shrunk to the nearest
    /// complete multiscale pyramid when the norm needs one.
    pub fn resolve_k(&self, n: f64) -> Result<usize> {
        let multiscale = self.norm.as_ref().is_some_and(|m| m.is_multiscale());
        if let Some(k) = self.k {
            if k == 0 {
                return Err(invalid("truncation k must be at least 1"));
            }
            if multiscale {
                max_level_for(k)?;
            }
            return Ok(k);
        }
        if let Some(csv) = &self.truth.csv {
            // CSV truth fixes its own length.
            let sig = SignalVector::read_csv(Path::new(csv))?;
            return Ok(sig.len());
        }
        let rounded = (n.round() as usize).clamp(1, MAX_TRUNCATION);
        if multiscale {
            multiscale_truncation(rounded)
        } else {
            Ok(rounded)
        }
    }

    /// Build the truth signal at truncation `k` in the mode the norm wants.
    pub fn build_truth(&self, k: usize) -> Result<SignalVector> {
        let multiscale = self.norm.as_ref().is_some_and(|m| m.is_multiscale());
        self.truth.build(k, multiscale)
    }

    fn require(&self, present: bool, field: &str) -> Result<()> {
        if present {
            Ok(())
        } else {
            Err(invalid(format!(
                "missing required field `{field}` for {} runs",
                self.kind.name()
            )))
        }
    }

    fn forbid(&self, absent: bool, field: &str) -> Result<()> {
        if absent {
            Ok(())
        } else {
            Err(invalid(format!(
                "field `{field}` is not used by {} runs",
                self.kind.name()
            )))
        }
    }

    /// Structural validation shared by all entry points. Runners call this;
    /// it accepts any n-grid ordering (duplicates included).
    pub fn validate(&self) -> Result<()> {
        self.truth.validate()?;
        self.prior.validate()?;
        if let Some(norm) = &self.norm {
            norm.validate()?;
        }
        if self.draws == 0 {
            return Err(invalid("draws must be at least 1"));
        }
        if let Some(a) = self.alpha {
            if !(a > 0.0 && a < 1.0) {
                return Err(invalid(format!("alpha must be in (0, 1), got {a}")));
            }
        }
        if let Some(l) = self.blowup {
            if !(l >= 1.0) || !l.is_finite() {
                return Err(invalid(format!("blowup must be at least 1, got {l}")));
            }
        }
        if let Some(n) = self.n {
            if !(n >= 1.0) || !n.is_finite() {
                return Err(invalid(format!("n must be a finite value >= 1, got {n}")));
            }
        }
        if let Some(grid) = &self.n_grid {
            if grid.iter().any(|n| !(*n >= 1.0) || !n.is_finite()) {
                return Err(invalid("n_grid values must be finite and >= 1"));
            }
        }
        if self.n.is_some() && self.n_grid.is_some() {
            return Err(invalid("give `n` or `n_grid`, not both"));
        }
        if let Some(Replications::Scalar(0)) = self.replications {
            return Err(invalid("replications must be at least 1"));
        }
        if let Some(Replications::PerN(rs)) = &self.replications {
            if rs.is_empty() || rs.contains(&0) {
                return Err(invalid("per-n replications must be nonempty and positive"));
            }
            let grid_len = self.n_grid.as_ref().map_or(0, |g| g.len());
            if rs.len() != grid_len {
                return Err(invalid(format!(
                    "per-n replications has {} entries but n_grid has {grid_len}",
                    rs.len()
                )));
            }
        }
        if let Some(r) = self.reference_sd {
            if !(r > 0.0) || !r.is_finite() {
                return Err(invalid(format!("reference_sd must be positive, got {r}")));
            }
        }
        if let Some(s) = self.subsample {
            if s == 0 {
                return Err(invalid("subsample must be at least 1"));
            }
        }

        match self.kind {
            ExperimentKind::Coverage => {
                self.require(self.n.is_some(), "n")?;
                self.forbid(self.n_grid.is_none(), "n_grid")?;
                self.require(self.alpha.is_some(), "alpha")?;
                self.require(self.norm.is_some(), "norm")?;
                self.require(self.replications.is_some(), "replications")?;
                self.forbid(self.reference_sd.is_none(), "reference_sd")?;
                self.forbid(self.subsample.is_none(), "subsample")?;
            }
            ExperimentKind::Freedman => {
                self.require(self.n_grid.is_some(), "n_grid")?;
                self.forbid(self.n.is_none(), "n")?;
                if self.n_grid.as_ref().unwrap().len() < 2 {
                    return Err(invalid("freedman needs an n_grid with at least 2 points"));
                }
                self.require(self.norm.is_some(), "norm")?;
                if self.norm.as_ref().unwrap().name != "l2" {
                    return Err(invalid("freedman runs use the l2 norm"));
                }
                self.require(self.replications.is_some(), "replications")?;
                self.forbid(self.alpha.is_none(), "alpha")?;
                self.forbid(self.blowup.is_none(), "blowup")?;
                self.forbid(self.reference_sd.is_none(), "reference_sd")?;
                self.forbid(self.subsample.is_none(), "subsample")?;
            }
            ExperimentKind::Scaling => {
                self.require(self.n_grid.is_some(), "n_grid")?;
                self.forbid(self.n.is_none(), "n")?;
                if self.n_grid.as_ref().unwrap().len() < 3 {
                    return Err(invalid("scaling needs an n_grid with at least 3 points"));
                }
                self.require(self.alpha.is_some(), "alpha")?;
                self.require(self.norm.is_some(), "norm")?;
                let name = &self.norm.as_ref().unwrap().name;
                if name != "ellipsoid" && name != "multiscale" {
                    return Err(invalid("scaling runs use the ellipsoid or multiscale norm"));
                }
                self.require(self.replications.is_some(), "replications")?;
                self.forbid(self.blowup.is_none(), "blowup")?;
                self.forbid(self.reference_sd.is_none(), "reference_sd")?;
                self.forbid(self.subsample.is_none(), "subsample")?;
            }
            ExperimentKind::Bvm => {
                self.require(self.n_grid.is_some(), "n_grid")?;
                self.forbid(self.n.is_none(), "n")?;
                if self.n_grid.as_ref().unwrap().len() < 2 {
                    return Err(invalid("bvm needs an n_grid with at least 2 points"));
                }
                self.require(self.norm.is_some(), "norm")?;
                let name = &self.norm.as_ref().unwrap().name;
                if name != "ellipsoid" && name != "multiscale" {
                    return Err(invalid("bvm runs use the ellipsoid or multiscale norm"));
                }
                self.require(self.replications.is_some(), "replications")?;
                self.forbid(self.alpha.is_none(), "alpha")?;
                self.forbid(self.blowup.is_none(), "blowup")?;
                self.forbid(self.subsample.is_none(), "subsample")?;
            }
            ExperimentKind::Figure1 => {
                self.require(self.n.is_some(), "n")?;
                self.forbid(self.n_grid.is_none(), "n_grid")?;
                self.require(self.alpha.is_some(), "alpha")?;
                self.forbid(self.norm.is_none(), "norm")?;
                self.forbid(self.replications.is_none(), "replications")?;
                self.forbid(self.reference_sd.is_none(), "reference_sd")?;
            }
        }
        Ok(())
    }

    /// File-level validation: everything in [`validate`] plus a strictly
    /// increasing n-grid (library callers may pass duplicated grid values,
    /// e.g. to confirm determinism).
    pub fn validate_strict(&self) -> Result<()> {
        self.validate()?;
        if let Some(grid) = &self.n_grid {
            if !grid.windows(2).all(|w| w[0] < w[1]) {
                return Err(invalid("n_grid must be strictly increasing"));
            }
        }
        Ok(())
    }
}
