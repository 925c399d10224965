use serde::{Deserialize, Serialize};

use super::AnalysisError;
use crate::audio_io::AudioBuffer;
use crate::dsp::{biquad_filter, k_weighting, oversample_4x, Oversampler};

const BLOCK_SECS: f64 = 0.4;
const STEP_SECS: f64 = 0.1;
const ABSOLUTE_GATE_LUFS: f64 = -70.0;
const RELATIVE_GATE_LU: f64 = -10.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoudnessResult {
    /// `None` when every block falls below the absolute gate.
    pub integrated_lufs: Option<f64>,
    /// `-inf` for digital silence.
    #[serde(with = "crate::report::nonfinite")]
    pub true_peak_dbtp: f64,
}

fn block_loudness(power: f64) -> f64 {
    -0.691 + 10.0 * power.log10()
}

/// Gated integrated loudness in LUFS. `Ok(None)` means fully gated (e.g. silence).
pub fn integrated_loudness(buffer: &AudioBuffer) -> Result<Option<f64>, AnalysisError> {
    let rate = buffer.sample_rate() as f64;
    let block = (BLOCK_SECS * rate).round() as usize;
    let step = (STEP_SECS * rate).round() as usize;
    if buffer.len() < block {
        return Err(AnalysisError::TooShort {
            needed_secs: BLOCK_SECS,
            actual_secs: buffer.duration_secs(),
        });
    }
    let (shelf, high_pass) = k_weighting(buffer.sample_rate())?;

    // Prefix sums of squared K-weighted samples, one per channel.
    let prefix: Vec<Vec<f64>> = buffer
        .channels()
        .iter()
        .map(|ch| {
            let weighted = biquad_filter(&biquad_filter(ch, &shelf), &high_pass);
            let mut acc = 0.0;
            std::iter::once(0.0)
                .chain(weighted.iter().map(|y| {
                    acc += y * y;
                    acc
                }))
                .collect()
        })
        .collect();

    let block_count = (buffer.len() - block) / step + 1;
    let powers: Vec<f64> = (0..block_count)
        .map(|j| {
            let start = j * step;
            // channel weights are 1.0 for left/right/mono
            prefix
                .iter()
                .map(|p| (p[start + block] - p[start]) / block as f64)
                .sum()
        })
        .collect();

    let above_absolute: Vec<f64> = powers
        .iter()
        .copied()
        .filter(|&p| p > 0.0 && block_loudness(p) > ABSOLUTE_GATE_LUFS)
        .collect();
    if above_absolute.is_empty() {
        return Ok(None);
    }
    let mean_abs = above_absolute.iter().sum::<f64>() / above_absolute.len() as f64;
    let relative_gate = block_loudness(mean_abs) + RELATIVE_GATE_LU;

    let gated: Vec<f64> = above_absolute
        .into_iter()
        .filter(|&p| block_loudness(p) > relative_gate)
        .collect();
    if gated.is_empty() {
        return Ok(None);
    }
    let mean = gated.iter().sum::<f64>() / gated.len() as f64;
    Ok(Some(block_loudness(mean)))
}

/// Peak of the 4x-oversampled signal over all channels, in dBTP.
/// Peak of the 4x oversampled signal in dBTP. Every original sample counts;
/// interpolated points count only where the filter does not reach past the
/// ends of the file, so the implicit step from silence cannot add overshoot.
pub fn true_peak(buffer: &AudioBuffer) -> f64 {
    let peak = buffer
        .channels()
        .iter()
        .map(|ch| {
            let sample_peak = ch.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let up = oversample_4x(ch);
            let interior = Oversampler::interior(ch.len());
            up[interior.start * 4..interior.end * 4]
                .iter()
                .fold(sample_peak, |m, v| m.max(v.abs()))
        })
        .fold(0.0f64, f64::max);
    if peak > 0.0 {
        20.0 * peak.log10()
    } else {
        f64::NEG_INFINITY
    }
}

pub fn measure_loudness(buffer: &AudioBuffer) -> Result<LoudnessResult, AnalysisError> {
    Ok(LoudnessResult {
        integrated_lufs: integrated_loudness(buffer)?,
        true_peak_dbtp: true_peak(buffer),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signals::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_4, PI};

    #[test]
    fn conformance_sine_minus_23() {
        let buf = stereo_sine(997.0, db_to_amp(-23.0), 20.0, 48000);
        let l = integrated_loudness(&buf).unwrap().unwrap();
        assert_abs_diff_eq!(l, -23.0, epsilon = 0.1);
    }

    #[test]
    fn conformance_sine_minus_33_at_44k1() {
        let buf = stereo_sine(997.0, db_to_amp(-33.0), 20.0, 44100);
        let l = integrated_loudness(&buf).unwrap().unwrap();
        assert_abs_diff_eq!(l, -33.0, epsilon = 0.1);
    }

    #[test]
    fn silence_is_undefined() {
        let buf = AudioBuffer::stereo(vec![0.0; 5 * 48000], vec![0.0; 5 * 48000], 48000).unwrap();
        assert_eq!(integrated_loudness(&buf).unwrap(), None);
        assert_eq!(true_peak(&buf), f64::NEG_INFINITY);
    }

    #[test]
    fn too_short() {
        let buf = AudioBuffer::mono(vec![0.1; 100], 48000).unwrap();
        assert!(matches!(integrated_loudness(&buf), Err(AnalysisError::TooShort { .. })));
    }

    #[test]
    fn relative_gate_drops_quiet_section() {
        // 10 s at -20 dBFS then 10 s at -50 dBFS: the quiet half sits 30 LU below
        // the ungated mean and must not pull the result down.
        let loud = mono_sine(997.0, db_to_amp(-20.0), 10.0, 48000);
        let quiet = mono_sine(997.0, db_to_amp(-50.0), 10.0, 48000);
        let mut ch = loud.channels()[0].clone();
        ch.extend_from_slice(&quiet.channels()[0]);
        let both = AudioBuffer::mono(ch, 48000).unwrap();
        let only_loud = integrated_loudness(&loud).unwrap().unwrap();
        let gated = integrated_loudness(&both).unwrap().unwrap();
        assert!((gated - only_loud).abs() < 0.1, "{gated} vs {only_loud}");
    }

    #[test]
    fn quarter_rate_sine_true_peak() {
        let x: Vec<f64> = (0..48000).map(|n| (PI * n as f64 / 2.0 + FRAC_PI_4).sin()).collect();
        let buf = AudioBuffer::mono(x, 48000).unwrap();
        assert_abs_diff_eq!(true_peak(&buf), 0.0, epsilon = 0.3);
    }

    #[test]
    fn dc_true_peak() {
        let buf = AudioBuffer::mono(vec![0.5; 4800], 48000).unwrap();
        assert_abs_diff_eq!(true_peak(&buf), -6.02, epsilon = 0.1);
    }
}
