//! Stereo width and mono fold-down checks built on the mid/side decomposition.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::AnalysisError;
use crate::audio_io::{to_mid_side, AudioBuffer};

const BLOCK_SECS: f64 = 0.4;
const BLOCK_GATE_RMS: f64 = 1e-3; // -60 dBFS

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StereoCategory {
    Mono,
    Narrow,
    Balanced,
    Wide,
}

impl StereoCategory {
    pub const ALL: [StereoCategory; 4] =
        [StereoCategory::Mono, StereoCategory::Narrow, StereoCategory::Balanced, StereoCategory::Wide];

    pub fn as_str(self) -> &'static str {
        match self {
            StereoCategory::Mono => "mono",
            StereoCategory::Narrow => "narrow",
            StereoCategory::Balanced => "balanced",
            StereoCategory::Wide => "wide",
        }
    }
}

impl fmt::Display for StereoCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Side/mid energy ratio boundaries in dB.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StereoThresholds {
    pub mono_db: f64,
    pub narrow_db: f64,
    pub wide_db: f64,
}

impl Default for StereoThresholds {
    fn default() -> Self {
        StereoThresholds { mono_db: -60.0, narrow_db: -18.0, wide_db: -6.0 }
    }
}

impl StereoThresholds {
    pub fn categorize(&self, side_mid_db: f64) -> StereoCategory {
        if side_mid_db < self.mono_db {
            StereoCategory::Mono
        } else if side_mid_db < self.narrow_db {
            StereoCategory::Narrow
        } else if side_mid_db > self.wide_db {
            StereoCategory::Wide
        } else {
            StereoCategory::Balanced
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StereoResult {
    /// Mean absolute per-block level difference between left and right.
    pub ild_db: f64,
    #[serde(with = "crate::report::nonfinite")]
    pub side_mid_energy_ratio_db: f64,
    pub category: StereoCategory,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MonoThresholds {
    /// Fold-down energy loss below this is incompatible.
    pub min_folddown_db: f64,
    /// Mid/side correlation magnitude above this is incompatible.
    pub max_abs_correlation: f64,
}

impl Default for MonoThresholds {
    fn default() -> Self {
        MonoThresholds { min_folddown_db: -6.0, max_abs_correlation: 0.6 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonoCompatResult {
    pub mid_side_correlation: f64,
    /// Mono energy relative to the mean stereo channel energy.
    #[serde(with = "crate::report::nonfinite")]
    pub folddown_loss_db: f64,
    pub compatible: bool,
}

fn energy(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

/// 10·log10(num/den) with 0/0 mapped to -inf and x/0 to +inf.
fn energy_ratio_db(num: f64, den: f64) -> f64 {
    match (num > 0.0, den > 0.0) {
        (false, _) => f64::NEG_INFINITY,
        (true, false) => f64::INFINITY,
        (true, true) => 10.0 * (num / den).log10(),
    }
}

pub fn stereo_width(buffer: &AudioBuffer, thresholds: &StereoThresholds) -> Result<StereoResult, AnalysisError> {
    let (left, right) = buffer.stereo_pair()?;
    let block = ((BLOCK_SECS * buffer.sample_rate() as f64).round() as usize).clamp(1, left.len().max(1));

    let mut ild_sum = 0.0;
    let mut ild_blocks = 0usize;
    for (l, r) in left.chunks_exact(block).zip(right.chunks_exact(block)) {
        let rms_l = (energy(l) / block as f64).sqrt();
        let rms_r = (energy(r) / block as f64).sqrt();
        if rms_l > BLOCK_GATE_RMS && rms_r > BLOCK_GATE_RMS {
            ild_sum += (20.0 * (rms_l / rms_r).log10()).abs();
            ild_blocks += 1;
        }
    }
    let ild_db = if ild_blocks > 0 { ild_sum / ild_blocks as f64 } else { 0.0 };

    let (mid, side) = to_mid_side(buffer)?;
    let ratio = energy_ratio_db(energy(&side), energy(&mid));
    Ok(StereoResult {
        ild_db,
        side_mid_energy_ratio_db: ratio,
        category: thresholds.categorize(ratio),
    })
}

fn pearson(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    if a.is_empty() {
        return 0.0;
    }
    let mean_a = a.iter().sum::<f64>() / n;
    let mean_b = b.iter().sum::<f64>() / n;
    let (mut cov, mut var_a, mut var_b) = (0.0, 0.0, 0.0);
    for (&x, &y) in a.iter().zip(b) {
        let (dx, dy) = (x - mean_a, y - mean_b);
        cov += dx * dy;
        var_a += dx * dx;
        var_b += dy * dy;
    }
    if var_a <= 0.0 || var_b <= 0.0 {
        return 0.0;
    }
    (cov / (var_a.sqrt() * var_b.sqrt())).clamp(-1.0, 1.0)
}

pub fn mono_compatibility(buffer: &AudioBuffer, thresholds: &MonoThresholds) -> Result<MonoCompatResult, AnalysisError> {
    let (left, right) = buffer.stereo_pair()?;
    let (mid, side) = to_mid_side(buffer)?;
    let correlation = pearson(&mid, &side);
    let stereo_energy = (energy(left) + energy(right)) / 2.0;
    let folddown = if stereo_energy > 0.0 { energy_ratio_db(energy(&mid), stereo_energy) } else { 0.0 };
    Ok(MonoCompatResult {
        mid_side_correlation: correlation,
        folddown_loss_db: folddown,
        compatible: folddown >= thresholds.min_folddown_db
            && correlation.abs() <= thresholds.max_abs_correlation,
    })
}
