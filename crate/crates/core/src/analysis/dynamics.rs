use std::fmt;

use serde::{Deserialize, Serialize};

use super::profile::GenreProfiles;
use super::AnalysisError;
use crate::audio_io::AudioBuffer;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CompressionVerdict {
    Undercompressed,
    Optimal,
    Overcompressed,
}

impl CompressionVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            CompressionVerdict::Undercompressed => "undercompressed",
            CompressionVerdict::Optimal => "optimal",
            CompressionVerdict::Overcompressed => "overcompressed",
        }
    }
}

impl fmt::Display for CompressionVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompressionResult {
    pub dynamic_range_db: f64,
    pub verdict: CompressionVerdict,
    pub genre_used: String,
}

/// Crest-factor dynamic range: 20·log10(max|x| / mean|x|) over all channels pooled.
pub fn dynamic_range(buffer: &AudioBuffer) -> Result<f64, AnalysisError> {
    let peak = buffer.samples().fold(0.0f64, |m, x| m.max(x.abs()));
    if peak == 0.0 || buffer.is_empty() {
        return Err(AnalysisError::SilentInput);
    }
    // Averaging |x|/peak makes a constant signal sum to exactly n.
    let n = buffer.len() * buffer.channel_count();
    let mean_ratio = buffer.samples().map(|x| x.abs() / peak).sum::<f64>() / n as f64;
    Ok((-20.0 * mean_ratio.log10()).max(0.0))
}

pub fn classify_compression(dr_db: f64, genre: &str, profiles: &GenreProfiles) -> CompressionResult {
    let profile = profiles.resolve(genre);
    let verdict = if dr_db > profile.dr_high_db {
        CompressionVerdict::Undercompressed
    } else if dr_db < profile.dr_low_db {
        CompressionVerdict::Overcompressed
    } else {
        CompressionVerdict::Optimal
    };
    CompressionResult { dynamic_range_db: dr_db, verdict, genre_used: profile.genre.clone() }
}
