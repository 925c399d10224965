use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::AnalysisError;
use crate::audio_io::AudioBuffer;
use crate::dsp::{frame_starts, principal_phase, FrameAnalyzer, Window, FRAME_SIZE, HOP_SIZE};

pub const PHASE_ISSUE_THRESHOLD_RAD: f64 = 1.7;
const MIN_FREQ_HZ: f64 = 20.0;
const MAX_FREQ_HZ: f64 = 20_000.0;
const BIN_GATE_AMPLITUDE: f64 = 1e-3; // -60 dBFS

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseResult {
    pub mean_abs_phase_diff_rad: f64,
    pub has_issue: bool,
    /// Number of (frame, bin) pairs that passed the level gate.
    pub qualifying_bins: u64,
}

pub fn phase_issues(buffer: &AudioBuffer) -> Result<PhaseResult, AnalysisError> {
    phase_issues_with_threshold(buffer, PHASE_ISSUE_THRESHOLD_RAD)
}

/// Unweighted mean of |φL − φR| over every STFT bin in 20 Hz–20 kHz where both
/// channels are above -60 dBFS.
pub fn phase_issues_with_threshold(buffer: &AudioBuffer, threshold_rad: f64) -> Result<PhaseResult, AnalysisError> {
    let (left, right) = buffer.stereo_pair()?;
    if left.len() < FRAME_SIZE {
        return Err(AnalysisError::TooShort {
            needed_secs: FRAME_SIZE as f64 / buffer.sample_rate() as f64,
            actual_secs: buffer.duration_secs(),
        });
    }
    let rate = buffer.sample_rate() as f64;
    let mut left_fft = FrameAnalyzer::new(FRAME_SIZE, Window::Hann, rate)?;
    let mut right_fft = FrameAnalyzer::new(FRAME_SIZE, Window::Hann, rate)?;
    let window_sum = FRAME_SIZE as f64 / 2.0;
    let gate = BIN_GATE_AMPLITUDE * window_sum / 2.0;

    let bins: Vec<usize> = (0..=FRAME_SIZE / 2)
        .filter(|&k| {
            let f = left_fft.bin_frequency(k);
            (MIN_FREQ_HZ..=MAX_FREQ_HZ).contains(&f)
        })
        .collect();

    let mut sum = 0.0;
    let mut count = 0u64;
    for start in frame_starts(left.len(), FRAME_SIZE, HOP_SIZE) {
        let l = left_fft.complex_bins(&left[start..start + FRAME_SIZE])?;
        let r = right_fft.complex_bins(&right[start..start + FRAME_SIZE])?;
        for &k in &bins {
            if l[k].norm() > gate && r[k].norm() > gate {
                sum += principal_phase(l[k].arg() - r[k].arg()).abs();
                count += 1;
            }
        }
    }

    let mean = if count > 0 { (sum / count as f64).min(PI) } else { 0.0 };
    Ok(PhaseResult {
        mean_abs_phase_diff_rad: mean,
        has_issue: mean > threshold_rad,
        qualifying_bins: count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signals::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn identical_channels() {
        let n = white_noise(48000, 1, 0.5);
        let r = phase_issues(&AudioBuffer::stereo(n.clone(), n, 48000).unwrap()).unwrap();
        assert_eq!(r.mean_abs_phase_diff_rad, 0.0);
        assert!(!r.has_issue);
        assert!(r.qualifying_bins > 0);
    }

    #[test]
    fn inverted_polarity_is_pi() {
        let n = white_noise(48000, 2, 0.5);
        let inv = n.iter().map(|x| -x).collect();
        let r = phase_issues(&AudioBuffer::stereo(n, inv, 48000).unwrap()).unwrap();
        assert_abs_diff_eq!(r.mean_abs_phase_diff_rad, PI, epsilon = 1e-9);
        assert!(r.has_issue);
    }

    #[test]
    fn scaling_one_channel_keeps_phase() {
        let n = white_noise(48000, 3, 0.5);
        let half = n.iter().map(|x| 0.5 * x).collect();
        let r = phase_issues(&AudioBuffer::stereo(n, half, 48000).unwrap()).unwrap();
        assert!(r.mean_abs_phase_diff_rad < 1e-9);
        assert!(!r.has_issue);
    }

    #[test]
    fn silence_has_no_qualifying_bins() {
        let r = phase_issues(&AudioBuffer::stereo(vec![0.0; 8192], vec![0.0; 8192], 48000).unwrap()).unwrap();
        assert_eq!(r.qualifying_bins, 0);
        assert_eq!(r.mean_abs_phase_diff_rad, 0.0);
        assert!(!r.has_issue);
    }

    #[test]
    fn too_short_and_mono() {
        let short = AudioBuffer::stereo(vec![0.1; 100], vec![0.1; 100], 48000).unwrap();
        assert!(matches!(phase_issues(&short), Err(AnalysisError::TooShort { .. })));
        let mono = AudioBuffer::mono(vec![0.1; 10000], 48000).unwrap();
        assert!(matches!(phase_issues(&mono), Err(AnalysisError::NotStereo)));
    }

    #[test]
    fn uncorrelated_noise_averages_half_pi() {
        // independent phases: |Δφ| uniform on [0, π]
        let buf = AudioBuffer::stereo(white_noise(480_000, 4, 0.5), white_noise(480_000, 5, 0.5), 48000).unwrap();
        let r = phase_issues(&buf).unwrap();
        assert_abs_diff_eq!(r.mean_abs_phase_diff_rad, PI / 2.0, epsilon = 0.02);
        assert!(!r.has_issue);
    }
}
