use std::f64::consts::PI;
use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::DspError;

pub const FRAME_SIZE: usize = 4096;
pub const HOP_SIZE: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Window {
    Hann,
    Rectangular,
}

impl Window {
    /// Periodic window coefficients of length `n`.
    pub fn coefficients(self, n: usize) -> Vec<f64> {
        match self {
            Window::Hann => (0..n)
                .map(|i| 0.5 - 0.5 * (2.0 * PI * i as f64 / n as f64).cos())
                .collect(),
            Window::Rectangular => vec![1.0; n],
        }
    }
}

/// One-sided spectrum of a real frame: fft_size/2 + 1 bins.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub bin_frequencies: Vec<f64>,
    pub magnitudes: Vec<f64>,
    /// Principal values in (-π, π].
    pub phases: Vec<f64>,
    pub fft_size: usize,
    /// Sum of the window coefficients, for amplitude normalization.
    pub window_sum: f64,
}

impl Spectrum {
    /// Bin magnitude scaled so a full-scale bin-centred sine reads 1.0.
    pub fn amplitude(&self, bin: usize) -> f64 {
        2.0 * self.magnitudes[bin] / self.window_sum
    }
}

/// Reusable windowed FFT analyzer for a fixed frame length.
pub struct FrameAnalyzer {
    fft: Arc<dyn Fft<f64>>,
    window: Vec<f64>,
    window_sum: f64,
    sample_rate: f64,
    buffer: Vec<Complex64>,
}

impl FrameAnalyzer {
    pub fn new(fft_size: usize, window: Window, sample_rate: f64) -> Result<Self, DspError> {
        if fft_size < 2 || !fft_size.is_power_of_two() {
            return Err(DspError::BadFrameLength(fft_size));
        }
        let window = window.coefficients(fft_size);
        let window_sum = window.iter().sum();
        Ok(FrameAnalyzer {
            fft: FftPlanner::new().plan_fft_forward(fft_size),
            window,
            window_sum,
            sample_rate,
            buffer: vec![Complex64::default(); fft_size],
        })
    }

    pub fn fft_size(&self) -> usize {
        self.window.len()
    }

    pub fn bin_frequency(&self, bin: usize) -> f64 {
        bin as f64 * self.sample_rate / self.fft_size() as f64
    }

    /// Windowed complex bins 0..=N/2. The slice is overwritten by the next call.
    pub fn complex_bins(&mut self, frame: &[f64]) -> Result<&[Complex64], DspError> {
        let n = self.fft_size();
        if frame.len() != n {
            return Err(DspError::BadFrameLength(frame.len()));
        }
        for ((slot, &x), &w) in self.buffer.iter_mut().zip(frame).zip(&self.window) {
            *slot = Complex64::new(x * w, 0.0);
        }
        self.fft.process(&mut self.buffer);
        Ok(&self.buffer[..=n / 2])
    }

    pub fn analyze(&mut self, frame: &[f64]) -> Result<Spectrum, DspError> {
        let n = self.fft_size();
        let bins = self.complex_bins(frame)?.to_vec();
        Ok(Spectrum {
            bin_frequencies: (0..bins.len()).map(|k| self.bin_frequency(k)).collect(),
            magnitudes: bins.iter().map(|c| c.norm()).collect(),
            phases: bins.iter().map(|c| principal_phase(c.arg())).collect(),
            fft_size: n,
            window_sum: self.window_sum,
        })
    }
}

/// Map an angle into (-π, π].
pub fn principal_phase(angle: f64) -> f64 {
    let mut a = angle % (2.0 * PI);
    if a <= -PI {
        a += 2.0 * PI;
    } else if a > PI {
        a -= 2.0 * PI;
    }
    a
}

/// Windowed real FFT of a single power-of-two frame.
pub fn stft_frame(frame: &[f64], window: Window, sample_rate: f64) -> Result<Spectrum, DspError> {
    FrameAnalyzer::new(frame.len(), window, sample_rate)?.analyze(frame)
}

/// Inverse of a rectangular-window `stft_frame`.
pub fn inverse_frame(spectrum: &Spectrum) -> Vec<f64> {
    let n = spectrum.fft_size;
    let mut full = vec![Complex64::default(); n];
    for (k, (&m, &p)) in spectrum.magnitudes.iter().zip(&spectrum.phases).enumerate() {
        let c = Complex64::from_polar(m, p);
        full[k] = c;
        if k != 0 && k != n / 2 {
            full[n - k] = c.conj();
        }
    }
    FftPlanner::new().plan_fft_inverse(n).process(&mut full);
    full.iter().map(|c| c.re / n as f64).collect()
}

/// Start offsets of full frames over a signal of `len` samples.
pub fn frame_starts(len: usize, frame: usize, hop: usize) -> impl Iterator<Item = usize> {
    let count = if len < frame { 0 } else { (len - frame) / hop + 1 };
    (0..count).map(move |i| i * hop)
}
