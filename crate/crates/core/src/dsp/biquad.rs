use std::f64::consts::PI;

use rustfft::num_complex::Complex64;

use super::DspError;

/// Second-order IIR section with a0 normalized to 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiquadCoefficients {
    pub b0: f64,
    pub b1: f64,
    pub b2: f64,
    pub a1: f64,
    pub a2: f64,
}

impl BiquadCoefficients {
    pub const IDENTITY: BiquadCoefficients =
        BiquadCoefficients { b0: 1.0, b1: 0.0, b2: 0.0, a1: 0.0, a2: 0.0 };

    /// Both poles strictly inside the unit circle (Jury conditions for a quadratic).
    pub fn is_stable(&self) -> bool {
        self.a2.abs() < 1.0 && self.a1.abs() < 1.0 + self.a2
    }

    /// Complex response H(e^{jw}) at `freq_hz`.
    pub fn response(&self, freq_hz: f64, sample_rate: f64) -> Complex64 {
        let w = 2.0 * PI * freq_hz / sample_rate;
        let z1 = Complex64::from_polar(1.0, -w);
        let z2 = z1 * z1;
        (self.b0 + z1 * self.b1 + z2 * self.b2) / (1.0 + z1 * self.a1 + z2 * self.a2)
    }

    pub fn gain_db(&self, freq_hz: f64, sample_rate: f64) -> f64 {
        20.0 * self.response(freq_hz, sample_rate).norm().log10()
    }
}

// Published 48 kHz K-weighting coefficients.
const SHELF_48K: BiquadCoefficients = BiquadCoefficients {
    b0: 1.53512485958697,
    b1: -2.69169618940638,
    b2: 1.19839281085285,
    a1: -1.69065929318241,
    a2: 0.73248077421585,
};
const HIGH_PASS_48K: BiquadCoefficients = BiquadCoefficients {
    b0: 1.0,
    b1: -2.0,
    b2: 1.0,
    a1: -1.99004745483398,
    a2: 0.99007225036621,
};

// Analog prototype parameters that reproduce the 48 kHz table under the bilinear transform.
const SHELF_F0: f64 = 1681.974450955533;
const SHELF_GAIN_DB: f64 = 3.999843853973347;
const SHELF_Q: f64 = 0.7071752369554196;
const HIGH_PASS_F0: f64 = 38.13547087602444;
const HIGH_PASS_Q: f64 = 0.5003270373238773;

pub const MIN_K_WEIGHTING_RATE: u32 = 8000;

/// The two K-weighting stages: high-frequency shelf, then high-pass.
pub fn k_weighting(sample_rate: u32) -> Result<(BiquadCoefficients, BiquadCoefficients), DspError> {
    if sample_rate < MIN_K_WEIGHTING_RATE {
        return Err(DspError::UnsupportedRate(sample_rate));
    }
    if sample_rate == 48000 {
        return Ok((SHELF_48K, HIGH_PASS_48K));
    }
    let rate = sample_rate as f64;

    let k = (PI * SHELF_F0 / rate).tan();
    let vh = 10f64.powf(SHELF_GAIN_DB / 20.0);
    let vb = vh.powf(0.4996667741545416);
    let a0 = 1.0 + k / SHELF_Q + k * k;
    let shelf = BiquadCoefficients {
        b0: (vh + vb * k / SHELF_Q + k * k) / a0,
        b1: 2.0 * (k * k - vh) / a0,
        b2: (vh - vb * k / SHELF_Q + k * k) / a0,
        a1: 2.0 * (k * k - 1.0) / a0,
        a2: (1.0 - k / SHELF_Q + k * k) / a0,
    };

    let k = (PI * HIGH_PASS_F0 / rate).tan();
    let a0 = 1.0 + k / HIGH_PASS_Q + k * k;
    let high_pass = BiquadCoefficients {
        b0: 1.0,
        b1: -2.0,
        b2: 1.0,
        a1: 2.0 * (k * k - 1.0) / a0,
        a2: (1.0 - k / HIGH_PASS_Q + k * k) / a0,
    };

    Ok((shelf, high_pass))
}

/// Direct form I, zero initial state.
pub fn biquad_filter(signal: &[f64], c: &BiquadCoefficients) -> Vec<f64> {
    let (mut x1, mut x2, mut y1, mut y2) = (0.0, 0.0, 0.0, 0.0);
    signal
        .iter()
        .map(|&x0| {
            let y0 = c.b0 * x0 + c.b1 * x1 + c.b2 * x2 - c.a1 * y1 - c.a2 * y2;
            x2 = x1;
            x1 = x0;
            y2 = y1;
            y1 = y0;
            y0
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn combined_gain_db(rate: u32, freq: f64) -> f64 {
        let (s1, s2) = k_weighting(rate).unwrap();
        s1.gain_db(freq, rate as f64) + s2.gain_db(freq, rate as f64)
    }

    #[test]
    fn published_48k_table() {
        let (s1, s2) = k_weighting(48000).unwrap();
        assert_eq!(s1.b0, 1.53512485958697);
        assert_eq!(s2.a1, -1.99004745483398);
    }

    #[test]
    fn prototype_reproduces_published_table() {
        // Derive at a rate infinitesimally off 48 kHz through the analog path.
        let rate = 48000.0;
        let k = (PI * SHELF_F0 / rate).tan();
        let vh = 10f64.powf(SHELF_GAIN_DB / 20.0);
        let vb = vh.powf(0.4996667741545416);
        let a0 = 1.0 + k / SHELF_Q + k * k;
        assert_abs_diff_eq!((vh + vb * k / SHELF_Q + k * k) / a0, SHELF_48K.b0, epsilon = 1e-9);
        assert_abs_diff_eq!(2.0 * (k * k - 1.0) / a0, SHELF_48K.a1, epsilon = 1e-9);
        let k = (PI * HIGH_PASS_F0 / rate).tan();
        let a0 = 1.0 + k / HIGH_PASS_Q + k * k;
        assert_abs_diff_eq!((1.0 - k / HIGH_PASS_Q + k * k) / a0, HIGH_PASS_48K.a2, epsilon = 1e-9);
    }

    #[test]
    fn gain_near_plus_0_69_db_at_997_hz() {
        assert_abs_diff_eq!(combined_gain_db(48000, 997.0), 0.691, epsilon = 0.001);
        assert_abs_diff_eq!(combined_gain_db(44100, 997.0), 0.691, epsilon = 0.005);
        // bilinear warping drifts slightly at far-off rates
        for rate in [32000, 88200, 96000, 192000] {
            assert_abs_diff_eq!(combined_gain_db(rate, 997.0), 0.691, epsilon = 0.03);
        }
    }

    #[test]
    fn rate_consistent_at_997_hz() {
        assert!((combined_gain_db(44100, 997.0) - combined_gain_db(48000, 997.0)).abs() < 0.05);
    }

    #[test]
    fn low_frequency_roll_off() {
        // second-order high-pass near 38 Hz: about 14 dB down at 20 Hz, over 20 dB at 10 Hz
        for rate in [44100, 48000, 96000] {
            let at_20 = combined_gain_db(rate, 1000.0) - combined_gain_db(rate, 20.0);
            assert_abs_diff_eq!(at_20, 13.97, epsilon = 0.02);
            assert!(combined_gain_db(rate, 1000.0) - combined_gain_db(rate, 10.0) > 20.0);
        }
    }

    #[test]
    fn stages_are_stable() {
        for rate in [8000, 22050, 44100, 48000, 96000, 192000] {
            let (s1, s2) = k_weighting(rate).unwrap();
            assert!(s1.is_stable() && s2.is_stable(), "rate {rate}");
        }
    }

    #[test]
    fn rejects_low_rates() {
        assert!(matches!(k_weighting(7999), Err(DspError::UnsupportedRate(7999))));
    }

    #[test]
    fn identity_and_zero() {
        let x = [0.5, -0.25, 1.0, 0.0, 3.0];
        assert_eq!(biquad_filter(&x, &BiquadCoefficients::IDENTITY), x.to_vec());
        let (s1, _) = k_weighting(44100).unwrap();
        assert!(biquad_filter(&[0.0; 64], &s1).iter().all(|&y| y == 0.0));
    }

    #[test]
    fn high_pass_kills_dc() {
        let (_, hp) = k_weighting(48000).unwrap();
        let mut x = vec![0.0; 48000 * 2];
        x[0] = 1.0;
        for v in x.iter_mut().skip(1) {
            *v = 0.5;
        }
        let y = biquad_filter(&x, &hp);
        assert!(y.last().unwrap().abs() < 1e-6);
    }
}
