//! Deterministic synthetic signals for tests, demos and calibration checks.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::audio_io::AudioBuffer;

pub fn db_to_amp(db: f64) -> f64 {
    10f64.powf(db / 20.0)
}

/// `amplitude · sin(2π·freq·n/rate + phase)` for `secs` seconds.
pub fn sine(freq: f64, amplitude: f64, phase: f64, secs: f64, rate: u32) -> Vec<f64> {
    let len = (secs * rate as f64).round() as usize;
    let w = 2.0 * PI * freq / rate as f64;
    (0..len).map(|n| amplitude * (w * n as f64 + phase).sin()).collect()
}

pub fn mono_sine(freq: f64, amplitude: f64, secs: f64, rate: u32) -> AudioBuffer {
    AudioBuffer::mono(sine(freq, amplitude, 0.0, secs, rate), rate).expect("valid buffer")
}

/// The same sine on both channels.
pub fn stereo_sine(freq: f64, amplitude: f64, secs: f64, rate: u32) -> AudioBuffer {
    let x = sine(freq, amplitude, 0.0, secs, rate);
    AudioBuffer::stereo(x.clone(), x, rate).expect("valid buffer")
}

/// Uniform white noise in [-amplitude, amplitude), reproducible from `seed`.
pub fn white_noise(len: usize, seed: u64, amplitude: f64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..len).map(|_| amplitude * rng.gen_range(-1.0..1.0)).collect()
}
