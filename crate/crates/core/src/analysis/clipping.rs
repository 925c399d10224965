use std::fmt;

use serde::{Deserialize, Serialize};

use crate::audio_io::AudioBuffer;

/// Samples at or above this magnitude count as clipped. Sits one 16-bit step
/// below 1.0 so integer positive full scale (32767/32768) qualifies.
pub const CLIP_THRESHOLD: f64 = 1.0 - 1.0 / 32768.0;

/// Counts strictly above this are major clipping.
pub const MAJOR_CLIPPING_COUNT: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClippingSeverity {
    None,
    Minor,
    Major,
}

impl ClippingSeverity {
    pub fn from_count(count: u64) -> ClippingSeverity {
        match count {
            0 => ClippingSeverity::None,
            c if c > MAJOR_CLIPPING_COUNT => ClippingSeverity::Major,
            _ => ClippingSeverity::Minor,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ClippingSeverity::None => "none",
            ClippingSeverity::Minor => "minor",
            ClippingSeverity::Major => "major",
        }
    }
}

impl fmt::Display for ClippingSeverity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClippingReport {
    pub clipped_sample_count: u64,
    pub severity: ClippingSeverity,
}

pub fn detect_clipping(buffer: &AudioBuffer) -> ClippingReport {
    let count = buffer.samples().filter(|x| x.abs() >= CLIP_THRESHOLD).count() as u64;
    ClippingReport {
        clipped_sample_count: count,
        severity: ClippingSeverity::from_count(count),
    }
}
