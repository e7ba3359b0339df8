//! Truncated sequence-space signals and noisy observations
//! `y_k = theta_k + g_k / sqrt(n)`.
//!
//! Signals are finite truncations `theta_1..theta_K` of an `l2` sequence,
//! in one of two layouts: plain single indexing, or the wavelet-style
//! multiscale layout where the coefficient at level `l`, position `k` sits
//! at linear index `i = 2^l + k`. A multiscale signal always has
//! `K = 2^(J+1) - 1` for its maximal level `J`.
//!
//! Observation noise comes from an explicit random source, or from an
//! injected deterministic vector: the injection channel makes every
//! stochastic downstream routine unit-testable without tolerances.

use std::fmt::Write as _;
use std::path::Path;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::{invalid, mismatch, Error, Result};

/// Coefficient layout of a [`SignalVector`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndexMode {
    /// Plain `theta_1..theta_K`.
    Single,
    /// Wavelet-style `(level, position)` layout with maximal level `J`;
    /// requires `K = 2^(J+1) - 1`.
    Multiscale { max_level: u32 },
}

/// Finite truncation of a sequence-space signal.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalVector {
    coeffs: Vec<f64>,
    mode: IndexMode,
}

impl SignalVector {
    /// Single-indexed signal from raw coefficients. All entries must be finite.
    pub fn new_single(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(invalid("signal needs at least one coefficient"));
        }
        if let Some(i) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(invalid(format!("coefficient {} is not finite", i + 1)));
        }
        Ok(Self { coeffs, mode: IndexMode::Single })
    }

    /// Multiscale signal; the length must be `2^(J+1) - 1` for some `J >= 0`,
    /// which determines the maximal level.
    pub fn new_multiscale(coeffs: Vec<f64>) -> Result<Self> {
        let len = coeffs.len();
        if !(len + 1).is_power_of_two() || len == 0 {
            return Err(invalid(format!(
                "multiscale length must be 2^(J+1)-1, got {len}"
            )));
        }
        if let Some(i) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(invalid(format!("coefficient {} is not finite", i + 1)));
        }
        let max_level = (len + 1).trailing_zeros() - 1;
        Ok(Self { coeffs, mode: IndexMode::Multiscale { max_level } })
    }

    /// Zero signal of length `k` in single-index mode.
    pub fn zeros(k: usize) -> Self {
        Self { coeffs: vec![0.0; k.max(1)], mode: IndexMode::Single }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn mode(&self) -> IndexMode {
        self.mode
    }

    /// Truncation level `K`.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Serialize as CSV with columns `index,level,position,value`.
    /// Level and position stay empty in single-index mode.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,level,position,value\n");
        for (i, v) in self.coeffs.iter().enumerate() {
            let idx = i + 1;
            match self.mode {
                IndexMode::Single => {
                    let _ = writeln!(out, "{idx},,,{v}");
                }
                IndexMode::Multiscale { .. } => {
                    let (l, k) = multiscale_unindex(idx).expect("valid index");
                    let _ = writeln!(out, "{idx},{l},{k},{v}");
                }
            }
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }

    /// Parse the CSV form produced by [`SignalVector::to_csv`]. Rows may
    /// arrive in any order but must cover indices `1..=K` exactly; the mode
    /// is inferred from the level column.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty signal CSV".into()))?;
        if header.trim() != "index,level,position,value" {
            return Err(Error::Parse(format!(
                "expected header 'index,level,position,value', got '{header}'"
            )));
        }
        let mut rows: Vec<(usize, Option<(u32, usize)>, f64)> = Vec::new();
        for (lineno, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 4 {
                return Err(Error::Parse(format!(
                    "signal CSV line {}: expected 4 fields, got {}",
                    lineno + 2,
                    fields.len()
                )));
            }
            let idx: usize = fields[0].trim().parse().map_err(|_| {
                Error::Parse(format!("signal CSV line {}: bad index", lineno + 2))
            })?;
            let value: f64 = fields[3].trim().parse().map_err(|_| {
                Error::Parse(format!("signal CSV line {}: bad value", lineno + 2))
            })?;
            let level = fields[1].trim();
            let position = fields[2].trim();
            let lk = match (level.is_empty(), position.is_empty()) {
                (true, true) => None,
                (false, false) => {
                    let l: u32 = level.parse().map_err(|_| {
                        Error::Parse(format!("signal CSV line {}: bad level", lineno + 2))
                    })?;
                    let k: usize = position.parse().map_err(|_| {
                        Error::Parse(format!(
                            "signal CSV line {}: bad position",
                            lineno + 2
                        ))
                    })?;
                    Some((l, k))
                }
                _ => {
                    return Err(Error::Parse(format!(
                        "signal CSV line {}: level and position must both be set or both empty",
                        lineno + 2
                    )))
                }
            };
            rows.push((idx, lk, value));
        }
        if rows.is_empty() {
            return Err(Error::Parse("signal CSV has no data rows".into()));
        }
        let multiscale = rows[0].1.is_some();
        let k_max = rows.len();
        let mut coeffs = vec![f64::NAN; k_max];
        for (idx, lk, value) in &rows {
            if lk.is_some() != multiscale {
                return Err(Error::Parse("signal CSV mixes index modes".into()));
            }
            if *idx < 1 || *idx > k_max {
                return Err(Error::Parse(format!(
                    "signal CSV index {idx} outside 1..={k_max}"
                )));
            }
            if let Some((l, k)) = lk {
                let expect = multiscale_index(*l, *k)?;
                if expect != *idx {
                    return Err(Error::Parse(format!(
                        "signal CSV index {idx} does not match level {l} position {k}"
                    )));
                }
            }
            if !coeffs[*idx - 1].is_nan() {
                return Err(Error::Parse(format!("signal CSV repeats index {idx}")));
            }
            coeffs[*idx - 1] = *value;
        }
        if coeffs.iter().any(|c| c.is_nan()) {
            return Err(Error::Parse("signal CSV does not cover 1..=K".into()));
        }
        if multiscale {
            Self::new_multiscale(coeffs)
        } else {
            Self::new_single(coeffs)
        }
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_csv(&text)
    }
}

/// Linear index of the level-`l`, position-`k` coefficient: `i = 2^l + k`.
pub fn multiscale_index(level: u32, position: usize) -> Result<usize> {
    if level >= usize::BITS - 1 {
        return Err(invalid(format!("level {level} too large")));
    }
    let width = 1usize << level;
    if position >= width {
        return Err(invalid(format!(
            "position {position} out of range for level {level} (max {})",
            width - 1
        )));
    }
    Ok(width + position)
}

/// Inverse of [`multiscale_index`].
pub fn multiscale_unindex(index: usize) -> Result<(u32, usize)> {
    if index == 0 {
        return Err(invalid("multiscale linear index starts at 1"));
    }
    let level = usize::BITS - 1 - index.leading_zeros();
    Ok((level, index - (1usize << level)))
}

/// Canonical exactly-`beta`-regular test signal `theta_k = c * k^(-1/2-beta)`.
pub fn polynomial_signal(beta: f64, c: f64, k: usize) -> Result<SignalVector> {
    if !(beta > 0.0) {
        return Err(invalid(format!("polynomial signal needs beta > 0, got {beta}")));
    }
    if k == 0 {
        return Err(invalid("polynomial signal needs K >= 1"));
    }
    let coeffs = (1..=k)
        .map(|i| c * (i as f64).powf(-0.5 - beta))
        .collect();
    SignalVector::new_single(coeffs)
}

/// Negative-control signal with long zero gaps: `theta_k = q^-j` at
/// `k = q^(2j)` for integer `j >= 0`, zero elsewhere.
pub fn lacunary_signal(q: u64, k: usize) -> Result<SignalVector> {
    if q < 2 {
        return Err(invalid(format!("lacunary signal needs gap base q >= 2, got {q}")));
    }
    if k == 0 {
        return Err(invalid("lacunary signal needs K >= 1"));
    }
    let mut coeffs = vec![0.0; k];
    let mut j = 0u32;
    loop {
        let spike = (q as f64).powi(2 * j as i32);
        if spike > k as f64 {
            break;
        }
        coeffs[spike as usize - 1] = (q as f64).powi(-(j as i32));
        j += 1;
    }
    SignalVector::new_single(coeffs)
}

/// One draw of the sequence model at noise precision `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Observation {
    y: Vec<f64>,
    n: f64,
    seed_tag: u64,
    mode: IndexMode,
}

impl Observation {
    pub fn y(&self) -> &[f64] {
        &self.y
    }

    /// Inverse noise variance; per-coordinate noise sd is `1/sqrt(n)`.
    pub fn n(&self) -> f64 {
        self.n
    }

    /// Seed the noise was drawn from; 0 for injected noise.
    pub fn seed_tag(&self) -> u64 {
        self.seed_tag
    }

    pub fn mode(&self) -> IndexMode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }
}

/// Observe `y_k = theta_k + g_k / sqrt(n)` with standard normals `g_k` drawn
/// from `rng`. `seed_tag` records the seed behind `rng` so downstream reports
/// can reference it; it does not influence the draw.
pub fn generate_observation<R: Rng + ?Sized>(
    theta0: &SignalVector,
    n: f64,
    rng: &mut R,
    seed_tag: u64,
) -> Result<Observation> {
    if !(n > 0.0) || !n.is_finite() {
        return Err(invalid(format!("noise precision n must be positive, got {n}")));
    }
    let scale = 1.0 / n.sqrt();
    let y = theta0
        .coeffs()
        .iter()
        .map(|&t| t + scale * rng.sample::<f64, _>(StandardNormal))
        .collect();
    Ok(Observation { y, n, seed_tag: seed_tag, mode: theta0.mode() })
}

/// Observe with an injected deterministic noise vector `g` (same length as
/// the signal): `y_k = theta_k + g_k / sqrt(n)` exactly. The seed tag is 0.
pub fn generate_observation_with_noise(
    theta0: &SignalVector,
    n: f64,
    g: &[f64],
) -> Result<Observation> {
    if !(n > 0.0) || !n.is_finite() {
        return Err(invalid(format!("noise precision n must be positive, got {n}")));
    }
    if g.len() != theta0.len() {
        return Err(mismatch(format!(
            "injected noise has length {}, signal has length {}",
            g.len(),
            theta0.len()
        )));
    }
    let scale = 1.0 / n.sqrt();
    let y = theta0
        .coeffs()
        .iter()
        .zip(g)
        .map(|(&t, &gk)| t + scale * gk)
        .collect();
    Ok(Observation { y, n, seed_tag: 0, mode: theta0.mode() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seeding::replication_rng;
    use proptest::prelude::*;

    #[test]
    fn injected_noise_follows_the_formula_exactly() {
        let theta = SignalVector::new_single(vec![0.0, 0.0, 0.0]).unwrap();
        let obs = generate_observation_with_noise(&theta, 4.0, &[1.0, -1.0, 2.0]).unwrap();
        assert_eq!(obs.y(), &[0.5, -0.5, 1.0]);

        let theta = SignalVector::new_single(vec![1.0, 2.0]).unwrap();
        let obs = generate_observation_with_noise(&theta, 17.3, &[0.0, 0.0]).unwrap();
        assert_eq!(obs.y(), &[1.0, 2.0], "zero noise is the identity");
    }

    #[test]
    fn injected_noise_length_mismatch_is_an_error() {
        let theta = SignalVector::new_single(vec![1.0, 2.0]).unwrap();
        assert!(generate_observation_with_noise(&theta, 1.0, &[0.0]).is_err());
        let mut rng = replication_rng(0, 0, 0);
        assert!(generate_observation(&theta, 0.0, &mut rng, 0).is_err());
        assert!(generate_observation(&theta, -2.0, &mut rng, 0).is_err());
    }

    #[test]
    fn observation_noise_matches_the_model_law() {
        // theta0 = 0, n = 1, K = 1000: across 10^4 draws the first coordinate
        // must average to ~0 with variance ~1.
        let theta = SignalVector::zeros(1000);
        let draws = 10_000usize;
        let mut sum = 0.0;
        let mut sumsq = 0.0;
        for rep in 0..draws {
            let mut rng = replication_rng(2024, 0, rep as u64);
            let obs = generate_observation(&theta, 1.0, &mut rng, rep as u64).unwrap();
            sum += obs.y()[0];
            sumsq += obs.y()[0] * obs.y()[0];
        }
        let mean = sum / draws as f64;
        let var = sumsq / draws as f64 - mean * mean;
        assert!(mean.abs() < 4.0 / (draws as f64).sqrt(), "mean {mean}");
        assert!((var - 1.0).abs() < 0.05, "variance {var}");
    }

    #[test]
    fn observation_is_reproducible_for_fixed_seed() {
        let theta = polynomial_signal(1.0, 1.0, 64).unwrap();
        let a = generate_observation(&theta, 100.0, &mut replication_rng(9, 0, 3), 3).unwrap();
        let b = generate_observation(&theta, 100.0, &mut replication_rng(9, 0, 3), 3).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn multiscale_index_round_trips() {
        assert_eq!(multiscale_index(0, 0).unwrap(), 1);
        assert_eq!(multiscale_index(1, 1).unwrap(), 3);
        assert_eq!(multiscale_index(2, 3).unwrap(), 7);
        assert!(multiscale_index(1, 2).is_err());

        // Exhaustive bijection onto 1..2^(J+1)-1 for J <= 10.
        for j in 0..=10u32 {
            let k_total = (1usize << (j + 1)) - 1;
            let mut seen = vec![false; k_total + 1];
            for l in 0..=j {
                for k in 0..(1usize << l) {
                    let i = multiscale_index(l, k).unwrap();
                    assert!(i >= 1 && i <= k_total);
                    assert!(!seen[i], "index {i} hit twice");
                    seen[i] = true;
                    assert_eq!(multiscale_unindex(i).unwrap(), (l, k));
                }
            }
            assert!(seen[1..].iter().all(|&s| s), "J={j} leaves gaps");
        }
    }

    #[test]
    fn polynomial_signal_matches_formula() {
        let s = polynomial_signal(0.5, 1.0, 3).unwrap();
        let got = s.coeffs();
        assert!((got[0] - 1.0).abs() < 1e-15);
        assert!((got[1] - 0.5).abs() < 1e-15);
        assert!((got[2] - 1.0 / 3.0).abs() < 1e-15);

        let z = polynomial_signal(1.0, 0.0, 5).unwrap();
        assert!(z.coeffs().iter().all(|&c| c == 0.0));
    }

    #[test]
    fn lacunary_signal_spikes_at_even_powers() {
        let s = lacunary_signal(2, 20).unwrap();
        for (i, &v) in s.coeffs().iter().enumerate() {
            let k = i + 1;
            let expect = match k {
                1 => 1.0,
                4 => 0.5,
                16 => 0.25,
                _ => 0.0,
            };
            assert_eq!(v, expect, "k={k}");
        }
        assert_eq!(lacunary_signal(2, 1).unwrap().coeffs(), &[1.0]);
    }

    #[test]
    fn multiscale_constructor_enforces_length() {
        assert!(SignalVector::new_multiscale(vec![1.0, 2.0, 3.0]).is_ok());
        assert!(SignalVector::new_multiscale(vec![1.0, 2.0]).is_err());
        let s = SignalVector::new_multiscale(vec![0.0; 15]).unwrap();
        assert_eq!(s.mode(), IndexMode::Multiscale { max_level: 3 });
    }

    #[test]
    fn signal_csv_round_trips_both_modes() {
        let single = polynomial_signal(1.0, 2.0, 7).unwrap();
        let parsed = SignalVector::from_csv(&single.to_csv()).unwrap();
        assert_eq!(parsed, single);

        let multi = SignalVector::new_multiscale(vec![2.0, 1.0, 3.0]).unwrap();
        let csv = multi.to_csv();
        assert!(csv.contains("1,0,0,2"));
        assert!(csv.contains("3,1,1,3"));
        let parsed = SignalVector::from_csv(&csv).unwrap();
        assert_eq!(parsed, multi);
    }

    #[test]
    fn signal_csv_rejects_inconsistent_rows() {
        assert!(SignalVector::from_csv("index,level,position,value\n1,0,,1.0\n").is_err());
        assert!(SignalVector::from_csv("index,level,position,value\n2,,,1.0\n").is_err());
        assert!(SignalVector::from_csv("nope\n1,,,1.0\n").is_err());
        // level/position inconsistent with linear index
        assert!(SignalVector::from_csv(
            "index,level,position,value\n1,0,0,1.0\n2,1,1,0.5\n3,1,0,0.25\n"
        )
        .is_err());
    }

    proptest! {
        #[test]
        fn polynomial_is_strictly_decreasing(beta in 0.05f64..4.0, k in 2usize..200) {
            let s = polynomial_signal(beta, 1.0, k).unwrap();
            for w in s.coeffs().windows(2) {
                prop_assert!(w[0] > w[1]);
            }
        }

        #[test]
        fn injected_zero_noise_is_identity(n in 0.01f64..1e6, k in 1usize..64) {
            let theta = polynomial_signal(0.7, 1.3, k).unwrap();
            let obs = generate_observation_with_noise(&theta, n, &vec![0.0; k]).unwrap();
            prop_assert_eq!(obs.y(), theta.coeffs());
        }
    }
}
