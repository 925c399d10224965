use std::fmt;

use serde::{Deserialize, Serialize};

use super::profile::{GenreProfile, GenreProfiles};
use super::AnalysisError;
use crate::audio_io::AudioBuffer;
use crate::dsp::{frame_starts, FrameAnalyzer, Window, FRAME_SIZE, HOP_SIZE};

/// Band edges in Hz. The last band includes its upper edge.
pub const BANDS: [(f64, f64); 4] = [(20.0, 250.0), (250.0, 2000.0), (2000.0, 8000.0), (8000.0, 20000.0)];
pub const BAND_NAMES: [&str; 4] = ["low", "low_mid", "high_mid", "high"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BandClass {
    Low,
    Medium,
    High,
}

impl BandClass {
    pub fn as_str(self) -> &'static str {
        match self {
            BandClass::Low => "low",
            BandClass::Medium => "medium",
            BandClass::High => "high",
        }
    }
}

impl fmt::Display for BandClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TonalProfile {
    pub band_energy_fraction: [f64; 4],
    pub band_class: [BandClass; 4],
}

fn band_of(freq: f64) -> Option<usize> {
    BANDS.iter().enumerate().find_map(|(i, &(lo, hi))| {
        let inside = freq >= lo && (freq < hi || (i == BANDS.len() - 1 && freq <= hi));
        inside.then_some(i)
    })
}

/// Share of 20 Hz–20 kHz power in each band, from the frame-averaged power spectrum.
pub fn band_energy_fractions(buffer: &AudioBuffer) -> Result<[f64; 4], AnalysisError> {
    if buffer.len() < FRAME_SIZE {
        return Err(AnalysisError::TooShort {
            needed_secs: FRAME_SIZE as f64 / buffer.sample_rate() as f64,
            actual_secs: buffer.duration_secs(),
        });
    }
    let mut fft = FrameAnalyzer::new(FRAME_SIZE, Window::Hann, buffer.sample_rate() as f64)?;
    let bin_band: Vec<Option<usize>> = (0..=FRAME_SIZE / 2).map(|k| band_of(fft.bin_frequency(k))).collect();

    let mut power = [0.0; 4];
    for channel in buffer.channels() {
        for start in frame_starts(channel.len(), FRAME_SIZE, HOP_SIZE) {
            let bins = fft.complex_bins(&channel[start..start + FRAME_SIZE])?;
            for (c, band) in bins.iter().zip(&bin_band) {
                if let Some(b) = band {
                    power[*b] += c.norm_sqr();
                }
            }
        }
    }

    let total: f64 = power.iter().sum();
    if total > 0.0 {
        Ok(power.map(|p| p / total))
    } else {
        Ok([0.0; 4])
    }
}

pub fn classify_bands(fractions: &[f64; 4], profile: &GenreProfile) -> [BandClass; 4] {
    std::array::from_fn(|k| {
        if fractions[k] < profile.band_low[k] {
            BandClass::Low
        } else if fractions[k] > profile.band_high[k] {
            BandClass::High
        } else {
            BandClass::Medium
        }
    })
}

pub fn tonal_profile(buffer: &AudioBuffer, genre: &str, profiles: &GenreProfiles) -> Result<TonalProfile, AnalysisError> {
    let fractions = band_energy_fractions(buffer)?;
    Ok(TonalProfile {
        band_class: classify_bands(&fractions, profiles.resolve(genre)),
        band_energy_fraction: fractions,
    })
}
