//! The norm zoo: `l2`, Sobolev, weighted-ellipsoid, and multiscale sup-norm.
//!
//! Weighted norms carry explicit weight specs with validity flags. The flags
//! are finite-range proxies for the growth conditions the asymptotic theory
//! needs (ratios must diverge); divergence is not decidable from a finite
//! prefix, so the checks test monotonicity over the stored range and the
//! defaults are constructed to pass them exactly.

use std::fmt::Write as _;
use std::path::Path;

use crate::sequence_model::{IndexMode, SignalVector};
use crate::{invalid, mismatch, Error, Result};

/// Relative slack for the weight-ratio monotonicity checks; absorbs `powf`
/// rounding so constant ratios count as nondecreasing.
const RATIO_SLACK: f64 = 1e-12;

/// `sqrt(sum theta_k^2)`.
pub fn l2_norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// `sqrt(sum theta_k^2 * k^(2 beta))`; `beta = 0` reduces to [`l2_norm`].
///
/// Panics if `beta` is negative: regularity exponents are validated at every
/// config boundary, so a negative value here is a programming error.
pub fn sobolev_norm(x: &[f64], beta: f64) -> f64 {
    assert!(beta >= 0.0, "sobolev_norm needs beta >= 0, got {beta}");
    x.iter()
        .enumerate()
        .map(|(i, v)| v * v * ((i + 1) as f64).powf(2.0 * beta))
        .sum::<f64>()
        .sqrt()
}

/// Weights `w_1..w_K` for the ellipsoid norm `sqrt(sum theta_k^2 / w_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EllipsoidWeightSpec {
    weights: Vec<f64>,
    delta: f64,
}

impl EllipsoidWeightSpec {
    /// Explicit weights. All must be positive and finite; `delta > 1` is the
    /// growth exponent the validity flag tests against.
    pub fn new(weights: Vec<f64>, delta: f64) -> Result<Self> {
        if weights.is_empty() {
            return Err(invalid("ellipsoid weight spec needs at least one weight"));
        }
        if let Some(i) = weights.iter().position(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(invalid(format!(
                "ellipsoid weight {} must be positive and finite",
                i + 1
            )));
        }
        if !(delta > 1.0) {
            return Err(invalid(format!("ellipsoid delta must exceed 1, got {delta}")));
        }
        Ok(Self { weights, delta })
    }

    /// Default weights `w_k = k * (1 + ln k)^2` with `delta = 2`: the
    /// simplest choice whose ratio to `k * (1 + ln k)^delta` is nondecreasing
    /// and which keeps `sum g_k^2 / w_k` convergent under white noise.
    pub fn default_for(k: usize) -> Self {
        let weights = (1..=k.max(1))
            .map(|i| {
                let kf = i as f64;
                kf * (1.0 + kf.ln()).powi(2)
            })
            .collect();
        Self { weights, delta: 2.0 }
    }

    /// Finite-range growth check: `w_k / (k * (1 + ln k)^delta)` must be
    /// nondecreasing over the stored range (within [`RATIO_SLACK`]).
    pub fn is_valid(&self) -> bool {
        let mut prev = f64::NEG_INFINITY;
        for (i, &w) in self.weights.iter().enumerate() {
            let kf = (i + 1) as f64;
            let ratio = w / (kf * (1.0 + kf.ln()).powf(self.delta));
            if ratio < prev * (1.0 - RATIO_SLACK) - RATIO_SLACK {
                return false;
            }
            prev = prev.max(ratio);
        }
        true
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// CSV with columns `index,weight`.
    pub fn to_csv(&self) -> String {
        weights_to_csv(&self.weights)
    }

    pub fn from_csv(text: &str, delta: f64) -> Result<Self> {
        Self::new(weights_from_csv(text)?, delta)
    }

    pub fn read_csv(path: &Path, delta: f64) -> Result<Self> {
        Self::from_csv(&std::fs::read_to_string(path)?, delta)
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }
}

/// Per-level weights `w_0..w_J` for the multiscale sup-norm.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiscaleWeightSpec {
    weights: Vec<f64>,
}

impl MultiscaleWeightSpec {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(invalid("multiscale weight spec needs at least one level"));
        }
        if let Some(l) = weights.iter().position(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(invalid(format!(
                "multiscale weight for level {l} must be positive and finite"
            )));
        }
        Ok(Self { weights })
    }

    /// Default weights `w_l = sqrt(l+1) * (1 + ln(l+1))`: simplest sequence
    /// whose ratio to `sqrt(l+1)` grows.
    pub fn default_for_max_level(max_level: u32) -> Self {
        let weights = (0..=max_level as usize)
            .map(|l| {
                let lf = (l + 1) as f64;
                lf.sqrt() * (1.0 + lf.ln())
            })
            .collect();
        Self { weights }
    }

    /// Finite-range growth check: `w_l / sqrt(l+1)` nondecreasing.
    pub fn is_valid(&self) -> bool {
        let mut prev = f64::NEG_INFINITY;
        for (l, &w) in self.weights.iter().enumerate() {
            let ratio = w / ((l + 1) as f64).sqrt();
            if ratio < prev * (1.0 - RATIO_SLACK) - RATIO_SLACK {
                return false;
            }
            prev = prev.max(ratio);
        }
        true
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn max_level(&self) -> u32 {
        (self.weights.len() - 1) as u32
    }

    /// Length of a compatible multiscale signal: `2^(J+1) - 1`.
    pub fn signal_len(&self) -> usize {
        (1usize << (self.max_level() + 1)) - 1
    }

    /// CSV with columns `index,weight` (index = level).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,weight\n");
        for (l, w) in self.weights.iter().enumerate() {
            let _ = writeln!(out, "{l},{w}");
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        Self::new(weights_from_csv(text)?)
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        Self::from_csv(&std::fs::read_to_string(path)?)
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }
}

fn weights_to_csv(weights: &[f64]) -> String {
    let mut out = String::from("index,weight\n");
    for (i, w) in weights.iter().enumerate() {
        let _ = writeln!(out, "{},{}", i + 1, w);
    }
    out
}

fn weights_from_csv(text: &str) -> Result<Vec<f64>> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty weight CSV".into()))?;
    if header.trim() != "index,weight" {
        return Err(Error::Parse(format!(
            "expected header 'index,weight', got '{header}'"
        )));
    }
    let mut weights = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let (_, w) = line.split_once(',').ok_or_else(|| {
            Error::Parse(format!("weight CSV line {}: expected 2 fields", lineno + 2))
        })?;
        let w: f64 = w.trim().parse().map_err(|_| {
            Error::Parse(format!("weight CSV line {}: bad weight", lineno + 2))
        })?;
        weights.push(w);
    }
    Ok(weights)
}

/// `sqrt(sum theta_k^2 / w_k)`. The weight list may be longer than the
/// signal (extra weights are ignored) but never shorter.
pub fn ellipsoid_norm(x: &[f64], spec: &EllipsoidWeightSpec) -> Result<f64> {
    if spec.len() < x.len() {
        return Err(mismatch(format!(
            "ellipsoid spec has {} weights, signal has {} coefficients",
            spec.len(),
            x.len()
        )));
    }
    Ok(x.iter()
        .zip(spec.weights())
        .map(|(v, w)| v * v / w)
        .sum::<f64>()
        .sqrt())
}

/// `sup_l max_k |theta_{l,k}| / w_l` for a multiscale-mode signal.
pub fn multiscale_norm(theta: &SignalVector, spec: &MultiscaleWeightSpec) -> Result<f64> {
    match theta.mode() {
        IndexMode::Multiscale { max_level } if max_level == spec.max_level() => {
            multiscale_norm_slice(theta.coeffs(), spec)
        }
        IndexMode::Multiscale { max_level } => Err(mismatch(format!(
            "signal has max level {max_level}, weight spec has max level {}",
            spec.max_level()
        ))),
        IndexMode::Single => Err(mismatch("multiscale norm needs a multiscale-mode signal")),
    }
}

/// Multiscale sup-norm over a raw coefficient slice in the linear
/// `i = 2^l + k` layout. Used for posterior draws, which share the center's
/// layout without carrying a mode tag.
pub fn multiscale_norm_slice(x: &[f64], spec: &MultiscaleWeightSpec) -> Result<f64> {
    if x.len() != spec.signal_len() {
        return Err(mismatch(format!(
            "multiscale slice has length {}, spec expects {}",
            x.len(),
            spec.signal_len()
        )));
    }
    let mut sup: f64 = 0.0;
    let mut start = 0usize;
    for (l, &w) in spec.weights().iter().enumerate() {
        let width = 1usize << l;
        let level_max = x[start..start + width]
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs()));
        sup = sup.max(level_max / w);
        start += width;
    }
    Ok(sup)
}
