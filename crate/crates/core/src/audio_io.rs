//! WAV ingestion and the in-memory sample representation shared by every analyzer.

use std::fs::File;
use std::io::{self, BufReader, Read};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AudioError {
    #[error("unsupported format: {0}")]
    UnsupportedFormat(String),
    #[error("corrupt file: {0}")]
    CorruptFile(String),
    #[error("expected a stereo buffer, got {0} channel(s)")]
    NotStereo(usize),
    #[error("invalid buffer: {0}")]
    InvalidBuffer(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Deinterleaved floating-point audio. Full scale is ±1.0.
///
/// Always holds one or two channels of equal length at a positive sample rate.
#[derive(Debug, Clone, PartialEq)]
pub struct AudioBuffer {
    channels: Vec<Vec<f64>>,
    sample_rate: u32,
}

impl AudioBuffer {
    pub fn new(channels: Vec<Vec<f64>>, sample_rate: u32) -> Result<Self, AudioError> {
        if sample_rate == 0 {
            return Err(AudioError::InvalidBuffer("sample rate must be positive".into()));
        }
        if channels.is_empty() || channels.len() > 2 {
            return Err(AudioError::InvalidBuffer(format!(
                "{} channels, expected 1 or 2",
                channels.len()
            )));
        }
        let len = channels[0].len();
        if channels.iter().any(|c| c.len() != len) {
            return Err(AudioError::InvalidBuffer("channels differ in length".into()));
        }
        Ok(AudioBuffer { channels, sample_rate })
    }

    pub fn mono(samples: Vec<f64>, sample_rate: u32) -> Result<Self, AudioError> {
        Self::new(vec![samples], sample_rate)
    }

    pub fn stereo(left: Vec<f64>, right: Vec<f64>, sample_rate: u32) -> Result<Self, AudioError> {
        Self::new(vec![left, right], sample_rate)
    }

    pub fn channels(&self) -> &[Vec<f64>] {
        &self.channels
    }

    pub fn channel_count(&self) -> usize {
        self.channels.len()
    }

    pub fn sample_rate(&self) -> u32 {
        self.sample_rate
    }

    /// Samples per channel.
    pub fn len(&self) -> usize {
        self.channels[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_stereo(&self) -> bool {
        self.channels.len() == 2
    }

    pub fn duration_secs(&self) -> f64 {
        self.len() as f64 / self.sample_rate as f64
    }

    /// Left and right channels, or `NotStereo`.
    pub fn stereo_pair(&self) -> Result<(&[f64], &[f64]), AudioError> {
        match self.channels.as_slice() {
            [l, r] => Ok((l, r)),
            other => Err(AudioError::NotStereo(other.len())),
        }
    }

    /// Every sample of every channel, channel by channel.
    pub fn samples(&self) -> impl Iterator<Item = f64> + '_ {
        self.channels.iter().flat_map(|c| c.iter().copied())
    }

    /// A copy with every sample multiplied by `gain`.
    pub fn scaled(&self, gain: f64) -> AudioBuffer {
        AudioBuffer {
            channels: self
                .channels
                .iter()
                .map(|c| c.iter().map(|x| x * gain).collect())
                .collect(),
            sample_rate: self.sample_rate,
        }
    }

    /// A copy with left and right exchanged. Mono buffers are returned unchanged.
    pub fn swapped(&self) -> AudioBuffer {
        let mut channels = self.channels.clone();
        channels.reverse();
        AudioBuffer { channels, sample_rate: self.sample_rate }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Encoding {
    PcmInt,
    PcmFloat,
}

/// Container facts read straight from the WAV header.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FileMeta {
    pub sample_rate: u32,
    pub bit_depth: u16,
    pub channel_count: u16,
    pub duration_secs: f64,
    pub encoding: Encoding,
}

impl FileMeta {
    /// Metadata for a buffer that did not come from a file (32-bit float).
    pub fn for_buffer(buffer: &AudioBuffer) -> FileMeta {
        FileMeta {
            sample_rate: buffer.sample_rate(),
            bit_depth: 32,
            channel_count: buffer.channel_count() as u16,
            duration_secs: buffer.duration_secs(),
            encoding: Encoding::PcmFloat,
        }
    }
}

pub fn decode_audio(path: impl AsRef<Path>) -> Result<(AudioBuffer, FileMeta), AudioError> {
    let file = File::open(path)?;
    decode_reader(BufReader::new(file))
}

pub fn decode_bytes(bytes: &[u8]) -> Result<(AudioBuffer, FileMeta), AudioError> {
    decode_reader(io::Cursor::new(bytes))
}

/// Decode a RIFF/WAVE stream holding 16/24/32-bit integer or 32-bit float PCM.
///
/// Integer samples are divided by 2^(bits-1); float samples pass through untouched,
/// including values beyond ±1.0.
pub fn decode_reader<R: Read>(reader: R) -> Result<(AudioBuffer, FileMeta), AudioError> {
    let reader = hound::WavReader::new(reader).map_err(map_hound_error)?;
    let spec = reader.spec();

    if spec.channels == 0 || spec.channels > 2 {
        return Err(AudioError::UnsupportedFormat(format!(
            "{} channels (only mono and stereo are accepted)",
            spec.channels
        )));
    }
    if spec.sample_rate == 0 {
        return Err(AudioError::CorruptFile("sample rate of zero".into()));
    }

    let encoding = match (spec.sample_format, spec.bits_per_sample) {
        (hound::SampleFormat::Int, 16 | 24 | 32) => Encoding::PcmInt,
        (hound::SampleFormat::Float, 32) => Encoding::PcmFloat,
        (format, bits) => {
            return Err(AudioError::UnsupportedFormat(format!(
                "{bits}-bit {format:?} samples"
            )))
        }
    };

    let channel_count = spec.channels as usize;
    let frames = reader.duration() as usize;
    let mut channels = vec![Vec::with_capacity(frames); channel_count];

    match encoding {
        Encoding::PcmInt => {
            let scale = 1.0 / (1u64 << (spec.bits_per_sample - 1)) as f64;
            for (i, sample) in reader.into_samples::<i32>().enumerate() {
                let s = sample.map_err(map_hound_error)?;
                channels[i % channel_count].push(s as f64 * scale);
            }
        }
        Encoding::PcmFloat => {
            for (i, sample) in reader.into_samples::<f32>().enumerate() {
                let s = sample.map_err(map_hound_error)?;
                channels[i % channel_count].push(s as f64);
            }
        }
    }

    if channels.iter().any(|c| c.len() != frames) {
        return Err(AudioError::CorruptFile(format!(
            "data chunk holds fewer samples than its header declares ({frames} frames)"
        )));
    }

    let meta = FileMeta {
        sample_rate: spec.sample_rate,
        bit_depth: spec.bits_per_sample,
        channel_count: spec.channels,
        duration_secs: frames as f64 / spec.sample_rate as f64,
        encoding,
    };
    let buffer = AudioBuffer::new(channels, spec.sample_rate)?;
    Ok((buffer, meta))
}

fn map_hound_error(err: hound::Error) -> AudioError {
    match err {
        // hound reports a short data chunk as a generic io error
        hound::Error::IoError(e)
            if e.kind() == io::ErrorKind::UnexpectedEof || e.to_string().contains("enough bytes") =>
        {
            AudioError::CorruptFile("unexpected end of data".into())
        }
        hound::Error::IoError(e) => AudioError::Io(e),
        hound::Error::FormatError(msg) => {
            if msg.contains("RIFF") || msg.contains("WAVE") {
                AudioError::UnsupportedFormat(format!("not a RIFF/WAVE file ({msg})"))
            } else {
                AudioError::CorruptFile(msg.to_string())
            }
        }
        hound::Error::Unsupported => {
            AudioError::UnsupportedFormat("compressed or unsupported WAV codec".into())
        }
        hound::Error::TooWide | hound::Error::InvalidSampleFormat => {
            AudioError::UnsupportedFormat(err.to_string())
        }
        hound::Error::UnfinishedSample => AudioError::CorruptFile(err.to_string()),
    }
}

/// Split a stereo buffer into mid = (L+R)/2 and side = (L-R)/2.
pub fn to_mid_side(buffer: &AudioBuffer) -> Result<(Vec<f64>, Vec<f64>), AudioError> {
    let (left, right) = buffer.stereo_pair()?;
    Ok(left
        .iter()
        .zip(right)
        .map(|(&l, &r)| ((l + r) * 0.5, (l - r) * 0.5))
        .unzip())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn write_wav(spec: hound::WavSpec, write: impl FnOnce(&mut hound::WavWriter<io::Cursor<&mut Vec<u8>>>)) -> Vec<u8> {
        let mut bytes = Vec::new();
        {
            let mut w = hound::WavWriter::new(io::Cursor::new(&mut bytes), spec).unwrap();
            write(&mut w);
            w.finalize().unwrap();
        }
        bytes
    }

    fn int_spec(channels: u16, sample_rate: u32, bits: u16) -> hound::WavSpec {
        hound::WavSpec { channels, sample_rate, bits_per_sample: bits, sample_format: hound::SampleFormat::Int }
    }

    #[test]
    fn int16_negative_full_scale_maps_to_minus_one() {
        let bytes = write_wav(int_spec(1, 44100, 16), |w| {
            w.write_sample(-32768i16).unwrap();
            w.write_sample(32767i16).unwrap();
            w.write_sample(0i16).unwrap();
        });
        let (buf, meta) = decode_bytes(&bytes).unwrap();
        assert_eq!(buf.channels()[0], vec![-1.0, 32767.0 / 32768.0, 0.0]);
        assert_eq!(meta.encoding, Encoding::PcmInt);
    }

    #[test]
    fn stereo_header_arithmetic() {
        let bytes = write_wav(int_spec(2, 48000, 16), |w| {
            for _ in 0..480_000 {
                w.write_sample(0i16).unwrap();
                w.write_sample(0i16).unwrap();
            }
        });
        let (buf, meta) = decode_bytes(&bytes).unwrap();
        assert_eq!(meta.bit_depth, 16);
        assert_eq!(meta.sample_rate, 48000);
        assert_eq!(meta.channel_count, 2);
        assert_eq!(meta.duration_secs, 10.0);
        assert_eq!(buf.len(), 480_000);
    }

    #[test]
    fn float_overs_are_preserved() {
        let spec = hound::WavSpec { channels: 1, sample_rate: 48000, bits_per_sample: 32, sample_format: hound::SampleFormat::Float };
        let bytes = write_wav(spec, |w| {
            w.write_sample(1.25f32).unwrap();
            w.write_sample(-0.5f32).unwrap();
        });
        let (buf, meta) = decode_bytes(&bytes).unwrap();
        assert_eq!(buf.channels()[0], vec![1.25, -0.5]);
        assert_eq!(meta.encoding, Encoding::PcmFloat);
    }

    #[test]
    fn int24_scaling() {
        let bytes = write_wav(int_spec(1, 48000, 24), |w| {
            w.write_sample(-(1i32 << 23)).unwrap();
            w.write_sample(1i32 << 22).unwrap();
        });
        let (buf, _) = decode_bytes(&bytes).unwrap();
        assert_eq!(buf.channels()[0], vec![-1.0, 0.5]);
    }

    #[test]
    fn rejects_multichannel() {
        let bytes = write_wav(int_spec(3, 48000, 16), |w| {
            for _ in 0..3 {
                w.write_sample(0i16).unwrap();
            }
        });
        assert!(matches!(decode_bytes(&bytes), Err(AudioError::UnsupportedFormat(_))));
    }

    #[test]
    fn rejects_8_bit() {
        let bytes = write_wav(int_spec(1, 48000, 8), |w| w.write_sample(0i8).unwrap());
        assert!(matches!(decode_bytes(&bytes), Err(AudioError::UnsupportedFormat(_))));
    }

    #[test]
    fn rejects_non_wav() {
        let err = decode_bytes(b"ID3\x03\x00\x00\x00\x00\x00\x00 definitely an mp3").unwrap_err();
        assert!(matches!(err, AudioError::UnsupportedFormat(_)), "{err:?}");
    }

    #[test]
    fn truncated_data_chunk_is_corrupt() {
        let bytes = write_wav(int_spec(2, 48000, 16), |w| {
            for i in 0..1000 {
                w.write_sample(i as i16).unwrap();
            }
        });
        let cut = &bytes[..bytes.len() - 101];
        let err = decode_bytes(cut).unwrap_err();
        assert!(matches!(err, AudioError::CorruptFile(_)), "{err:?}");
    }

    #[test]
    fn mid_side_definitions() {
        let buf = AudioBuffer::stereo(vec![1.0, 0.0], vec![0.0, 1.0], 48000).unwrap();
        let (mid, side) = to_mid_side(&buf).unwrap();
        assert_eq!(mid, vec![0.5, 0.5]);
        assert_eq!(side, vec![0.5, -0.5]);

        let l = vec![0.3, -0.7, 0.1];
        let same = AudioBuffer::stereo(l.clone(), l.clone(), 48000).unwrap();
        assert!(to_mid_side(&same).unwrap().1.iter().all(|&s| s == 0.0));

        let inv = AudioBuffer::stereo(l.clone(), l.iter().map(|x| -x).collect(), 48000).unwrap();
        let (mid, side) = to_mid_side(&inv).unwrap();
        assert!(mid.iter().all(|&m| m == 0.0));
        assert_eq!(side, l);
    }

    #[test]
    fn mid_side_needs_stereo() {
        let buf = AudioBuffer::mono(vec![0.0; 4], 48000).unwrap();
        assert!(matches!(to_mid_side(&buf), Err(AudioError::NotStereo(1))));
    }

    #[test]
    fn buffer_invariants() {
        assert!(AudioBuffer::new(vec![vec![0.0; 3], vec![0.0; 2]], 48000).is_err());
        assert!(AudioBuffer::mono(vec![0.0], 0).is_err());
        assert!(AudioBuffer::new(vec![], 48000).is_err());
    }

    proptest! {
        // Exact for dyadic-rational inputs such as those decoded from integer PCM.
        #[test]
        fn mid_side_reconstructs_channels(pairs in prop::collection::vec((-32768i32..32768, -32768i32..32768), 1..64)) {
            let l: Vec<f64> = pairs.iter().map(|p| p.0 as f64 / 32768.0).collect();
            let r: Vec<f64> = pairs.iter().map(|p| p.1 as f64 / 32768.0).collect();
            let buf = AudioBuffer::stereo(l.clone(), r.clone(), 44100).unwrap();
            let (mid, side) = to_mid_side(&buf).unwrap();
            for i in 0..l.len() {
                prop_assert_eq!(mid[i] + side[i], l[i]);
                prop_assert_eq!(mid[i] - side[i], r[i]);
            }
        }

        #[test]
        fn integer_pcm_stays_in_range(samples in prop::collection::vec(any::<i16>(), 1..256)) {
            let bytes = write_wav(int_spec(1, 22050, 16), |w| {
                for &s in &samples {
                    w.write_sample(s).unwrap();
                }
            });
            let (a, _) = decode_bytes(&bytes).unwrap();
            let (b, _) = decode_bytes(&bytes).unwrap();
            prop_assert_eq!(&a, &b);
            prop_assert!(a.samples().all(|x| (-1.0..=1.0).contains(&x)));
        }
    }
}
