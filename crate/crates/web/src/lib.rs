//! Browser demo entry points. Every function takes plain numbers or a JSON
//! string and returns a JSON string, so the page needs no generated types and
//! the same code is tested natively.

use mixqa::analysis::{
    mono_compatibility, phase_issues, stereo_width, true_peak, MonoThresholds, StereoCategory, StereoThresholds,
    PHASE_ISSUE_THRESHOLD_RAD,
};
use mixqa::audio_io::AudioBuffer;
use mixqa::dsp::Oversampler;
use mixqa::signals::white_noise;
use mixqa::stats::{chi_square_test, cramers_v, ContingencyTable};
use serde::Deserialize;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

const RATE: u32 = 48_000;
const TONE_LEN: usize = 1024;
const VIEW_START: usize = 500;
const VIEW_LEN: usize = 24;
const ANALOG_STEPS: usize = 32;

fn error(msg: impl std::fmt::Display) -> String {
    json!({ "error": msg.to_string() }).to_string()
}

/// JSON cannot carry infinities; silence reports null.
fn db(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

fn amp_db(x: f64) -> f64 {
    20.0 * x.abs().log10()
}

/// A sine at `freq` cycles per sample, its 4x interpolation and the continuous
/// waveform over a short window, with the three peak readings.
#[wasm_bindgen]
pub fn true_peak_curve(freq: f64, phase_deg: f64, level_db: f64) -> String {
    if !(freq > 0.0 && freq < 0.5) {
        return error("frequency must lie strictly between 0 and 0.5 cycles per sample");
    }
    if !level_db.is_finite() || level_db > 20.0 {
        return error("level must be a finite dB value up to +20");
    }
    let amp = 10f64.powf(level_db / 20.0);
    let phase = phase_deg.to_radians();
    let wave = |t: f64| amp * (2.0 * std::f64::consts::PI * freq * t + phase).sin();
    let signal: Vec<f64> = (0..TONE_LEN).map(|n| wave(n as f64)).collect();

    let os = Oversampler::new();
    let up = os.process(&signal);
    let view = VIEW_START..VIEW_START + VIEW_LEN;
    let samples: Vec<[f64; 2]> = view.clone().map(|n| [n as f64, signal[n]]).collect();
    let interpolated: Vec<[f64; 2]> = (view.start * 4..view.end * 4).map(|i| [i as f64 / 4.0, up[i]]).collect();
    let analog: Vec<[f64; 2]> = (0..VIEW_LEN * ANALOG_STEPS)
        .map(|k| {
            let t = view.start as f64 + k as f64 / ANALOG_STEPS as f64;
            [t, wave(t)]
        })
        .collect();

    let sample_peak = signal.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let buffer = AudioBuffer::mono(signal, RATE).expect("non-empty mono buffer");
    json!({
        "samples": samples,
        "interpolated": interpolated,
        "analog": analog,
        "sample_peak_dbfs": db(amp_db(sample_peak)),
        "true_peak_dbtp": db(true_peak(&buffer)),
        "analog_peak_dbfs": level_db,
        "filter_response_db": os.response_db(freq),
    })
    .to_string()
}

/// Stereo noise scene: a shared mid signal plus `width` of independent side
/// noise, the right channel optionally delayed and polarity-inverted.
#[wasm_bindgen]
pub fn stereo_scene(width: f64, delay_samples: u32, invert_right: bool, seed: u32) -> String {
    if !(0.0..=4.0).contains(&width) {
        return error("width must lie between 0 and 4");
    }
    if delay_samples > 480 {
        return error("delay is limited to 480 samples");
    }
    let len = RATE as usize;
    let d = delay_samples as usize;
    let mid = white_noise(len + d, seed as u64 * 2 + 1, 0.4);
    let side = white_noise(len + d, seed as u64 * 2 + 2, 0.4);
    let left: Vec<f64> = (0..len).map(|n| mid[n + d] + width * side[n + d]).collect();
    let sign = if invert_right { -1.0 } else { 1.0 };
    let right: Vec<f64> = (0..len).map(|n| sign * (mid[n] - width * side[n])).collect();

    let lr_corr = {
        let (mut sl, mut sr, mut slr) = (0.0, 0.0, 0.0);
        for (l, r) in left.iter().zip(&right) {
            sl += l * l;
            sr += r * r;
            slr += l * r;
        }
        if sl > 0.0 && sr > 0.0 { slr / (sl * sr).sqrt() } else { 0.0 }
    };
    // goniometer: side on x, mid on y, every 16th sample
    let scope: Vec<[f64; 2]> = left
        .iter()
        .zip(&right)
        .step_by(16)
        .map(|(l, r)| [(l - r) / 2.0, (l + r) / 2.0])
        .collect();

    let buffer = AudioBuffer::stereo(left, right, RATE).expect("equal-length stereo buffer");
    let stereo = stereo_width(&buffer, &StereoThresholds::default());
    let mono = mono_compatibility(&buffer, &MonoThresholds::default());
    let phase = phase_issues(&buffer);

    let mut issues = Vec::new();
    if let Ok(s) = &stereo {
        if matches!(s.category, StereoCategory::Mono | StereoCategory::Narrow) {
            issues.push("stereo field issues");
        }
    }
    if mono.as_ref().is_ok_and(|m| !m.compatible) {
        issues.push("lack of mono compatibility");
    }
    if phase.as_ref().is_ok_and(|p| p.has_issue) {
        issues.push("phase issues");
    }
    let section = |r: Result<Value, String>| r.unwrap_or_else(|e| json!({ "error": e }));
    json!({
        "lr_correlation": lr_corr,
        "stereo": section(stereo.map(|s| json!({
            "category": s.category.as_str(),
            "side_mid_db": db(s.side_mid_energy_ratio_db),
            "ild_db": s.ild_db,
        })).map_err(|e| e.to_string())),
        "mono": section(mono.map(|m| json!({
            "compatible": m.compatible,
            "folddown_db": db(m.folddown_loss_db),
            "mid_side_correlation": m.mid_side_correlation,
        })).map_err(|e| e.to_string())),
        "phase": section(phase.map(|p| json!({
            "mean_abs_diff_rad": p.mean_abs_phase_diff_rad,
            "threshold_rad": PHASE_ISSUE_THRESHOLD_RAD,
            "has_issue": p.has_issue,
            "bins": p.qualifying_bins,
        })).map_err(|e| e.to_string())),
        "issues": issues,
        "scope": scope,
    })
    .to_string()
}

#[derive(Deserialize)]
struct TableInput {
    #[serde(default)]
    rows: Vec<String>,
    #[serde(default)]
    cols: Vec<String>,
    counts: Vec<Vec<u64>>,
}

/// Chi-square test and Cramér's V on `{"rows": [..], "cols": [..], "counts": [[..]]}`.
/// Labels are optional.
#[wasm_bindgen]
pub fn contingency(input: &str) -> String {
    let input: TableInput = match serde_json::from_str(input) {
        Ok(t) => t,
        Err(e) => return error(format!("bad table: {e}")),
    };
    let r = input.counts.len();
    let c = input.counts.first().map_or(0, Vec::len);
    let label = |given: Vec<String>, n: usize, prefix: &str| {
        if given.len() == n { given } else { (1..=n).map(|i| format!("{prefix}{i}")).collect() }
    };
    let table = match ContingencyTable::new(label(input.rows, r, "row "), label(input.cols, c, "col "), input.counts) {
        Ok(t) => t,
        Err(e) => return error(e),
    };
    match (chi_square_test(&table), cramers_v(&table)) {
        (Ok(chi), Ok(v)) => json!({
            "statistic": chi.statistic,
            "dof": chi.dof,
            "p_value": chi.p_value,
            "cramers_v": v,
            "n": chi.table.n,
            "rows": chi.table.row_labels,
            "cols": chi.table.col_labels,
            "expected": chi.expected,
            "residuals": chi.residuals,
        })
        .to_string(),
        (Err(e), _) | (_, Err(e)) => error(e),
    }
}
