use std::f64::consts::PI;
use std::sync::OnceLock;

pub const FACTOR: usize = 4;
pub const TAPS_PER_PHASE: usize = 48;
const HALF_SPAN: i64 = (FACTOR * TAPS_PER_PHASE / 2) as i64;
const KAISER_BETA: f64 = 8.0;

/// Polyphase 4x interpolator: Kaiser-windowed sinc, 48 taps per phase.
///
/// Phase 0 is a unit impulse, so every original sample reappears unchanged at
/// index 4n. The other phases are normalized to unity DC gain.
#[derive(Debug, Clone)]
pub struct Oversampler {
    phases: [[f64; TAPS_PER_PHASE]; FACTOR],
}

impl Oversampler {
    pub fn new() -> Oversampler {
        let mut phases = [[0.0; TAPS_PER_PHASE]; FACTOR];
        let i0_beta = bessel_i0(KAISER_BETA);
        for (p, taps) in phases.iter_mut().enumerate() {
            // taps[i] multiplies x[n - j] with j = i - 24, i.e. offset t = 4j + p.
            for (i, tap) in taps.iter_mut().enumerate() {
                let j = i as i64 - (TAPS_PER_PHASE / 2) as i64;
                let t = FACTOR as i64 * j + p as i64;
                *tap = if p == 0 {
                    if j == 0 { 1.0 } else { 0.0 }
                } else {
                    let r = t as f64 / HALF_SPAN as f64;
                    let window = bessel_i0(KAISER_BETA * (1.0 - r * r).max(0.0).sqrt()) / i0_beta;
                    sinc(t as f64 / FACTOR as f64) * window
                };
            }
            let sum: f64 = taps.iter().sum();
            taps.iter_mut().for_each(|t| *t /= sum);
        }
        Oversampler { phases }
    }

    /// Filter impulse response at the upsampled rate, indexed by offset -96..96,
    /// scaled for unity passband gain.
    pub fn impulse_response(&self) -> Vec<(i64, f64)> {
        let mut out = Vec::with_capacity(FACTOR * TAPS_PER_PHASE);
        for (p, taps) in self.phases.iter().enumerate() {
            for (i, &h) in taps.iter().enumerate() {
                let j = i as i64 - (TAPS_PER_PHASE / 2) as i64;
                out.push((FACTOR as i64 * j + p as i64, h / FACTOR as f64));
            }
        }
        out.sort_by_key(|&(t, _)| t);
        out
    }

    /// Magnitude response in dB at `freq`, given as a fraction of the original sample rate.
    pub fn response_db(&self, freq: f64) -> f64 {
        let (mut re, mut im) = (0.0, 0.0);
        for (t, h) in self.impulse_response() {
            let w = 2.0 * PI * freq * t as f64 / FACTOR as f64;
            re += h * w.cos();
            im -= h * w.sin();
        }
        10.0 * (re * re + im * im).log10()
    }

    /// Interpolate by 4, treating samples beyond either end as zero.
    pub fn process(&self, signal: &[f64]) -> Vec<f64> {
        let n = signal.len() as i64;
        let half = (TAPS_PER_PHASE / 2) as i64;
        let mut out = Vec::with_capacity(signal.len() * FACTOR);
        for idx in 0..n {
            for taps in &self.phases {
                // x[idx - j] for j in -24..24
                let acc: f64 = taps
                    .iter()
                    .enumerate()
                    .filter_map(|(i, &h)| {
                        let j = idx + half - i as i64;
                        (0..n).contains(&j).then(|| h * signal[j as usize])
                    })
                    .sum();
                out.push(acc);
            }
        }
        out
    }

    /// Input indices whose interpolated neighbours depend only on real samples,
    /// not on the zero padding past either end.
    pub fn interior(len: usize) -> std::ops::Range<usize> {
        let before = TAPS_PER_PHASE / 2 - 1;
        let after = TAPS_PER_PHASE / 2;
        before.min(len)..len.saturating_sub(after).max(before.min(len))
    }
}

impl Default for Oversampler {
    fn default() -> Self {
        Oversampler::new()
    }
}

pub fn oversample_4x(signal: &[f64]) -> Vec<f64> {
    static SHARED: OnceLock<Oversampler> = OnceLock::new();
    SHARED.get_or_init(Oversampler::new).process(signal)
}

fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        (PI * x).sin() / (PI * x)
    }
}

/// Zeroth-order modified Bessel function of the first kind (power series).
fn bessel_i0(x: f64) -> f64 {
    let q = x * x / 4.0;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..200 {
        term *= q / (k * k) as f64;
        sum += term;
        if term < sum * 1e-17 {
            break;
        }
    }
    sum
}
