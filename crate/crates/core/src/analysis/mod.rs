//! The eight per-track analyzers and the driver that runs them together.

mod clipping;
mod config;
mod dynamics;
mod loudness;
mod phase;
mod profile;
mod stereo;
mod tonal;
mod track;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::audio_io::AudioError;
use crate::dsp::DspError;

pub use config::ConfigError;
pub use clipping::{detect_clipping, ClippingReport, ClippingSeverity, CLIP_THRESHOLD, MAJOR_CLIPPING_COUNT};
pub use dynamics::{classify_compression, dynamic_range, CompressionResult, CompressionVerdict};
pub use loudness::{integrated_loudness, measure_loudness, true_peak, LoudnessResult};
pub use phase::{phase_issues, phase_issues_with_threshold, PhaseResult, PHASE_ISSUE_THRESHOLD_RAD};
pub use profile::{normalize_genre, GenreProfile, GenreProfiles, ProfileError, DEFAULT_GENRE};
pub use stereo::{
    mono_compatibility, stereo_width, MonoCompatResult, MonoThresholds, StereoCategory, StereoResult,
    StereoThresholds,
};
pub use tonal::{band_energy_fractions, classify_bands, tonal_profile, BandClass, TonalProfile, BANDS, BAND_NAMES};
pub use track::{analyze_track, AnalysisConfig};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("input too short: need {needed_secs:.3} s, have {actual_secs:.3} s")]
    TooShort { needed_secs: f64, actual_secs: f64 },
    #[error("input is silent")]
    SilentInput,
    #[error("analysis needs a stereo input")]
    NotStereo,
    #[error(transparent)]
    Dsp(#[from] DspError),
    #[error("{0}")]
    Audio(String),
}

impl From<AudioError> for AnalysisError {
    fn from(err: AudioError) -> Self {
        match err {
            AudioError::NotStereo(_) => AnalysisError::NotStereo,
            other => AnalysisError::Audio(other.to_string()),
        }
    }
}

/// Whether the user submitted a mix or a finished master.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrackKind {
    Mix,
    Master,
}

impl TrackKind {
    pub const ALL: [TrackKind; 2] = [TrackKind::Mix, TrackKind::Master];

    pub fn as_str(self) -> &'static str {
        match self {
            TrackKind::Mix => "mix",
            TrackKind::Master => "master",
        }
    }
}

impl fmt::Display for TrackKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Error)]
#[error("unknown track kind `{0}` (expected mix or master)")]
pub struct ParseKindError(pub String);

impl FromStr for TrackKind {
    type Err = ParseKindError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_lowercase().as_str() {
            "mix" | "mixed" | "mixes" => Ok(TrackKind::Mix),
            "master" | "mastered" | "masters" => Ok(TrackKind::Master),
            _ => Err(ParseKindError(s.to_string())),
        }
    }
}
