//! Signal-processing primitives shared by the analyzers.

mod biquad;
mod oversample;
mod spectrum;

use thiserror::Error;

pub use biquad::{biquad_filter, k_weighting, BiquadCoefficients, MIN_K_WEIGHTING_RATE};
pub use oversample::{oversample_4x, Oversampler};
pub use spectrum::{
    frame_starts, inverse_frame, principal_phase, stft_frame, FrameAnalyzer, Spectrum, Window,
    FRAME_SIZE, HOP_SIZE,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DspError {
    #[error("sample rate {0} Hz is below the 8000 Hz minimum")]
    UnsupportedRate(u32),
    #[error("frame length {0} is not a power of two (or does not match the analyzer)")]
    BadFrameLength(usize),
}
