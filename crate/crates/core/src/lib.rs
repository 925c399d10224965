pub mod analysis;
pub mod audio_io;
pub mod dsp;
pub mod report;
pub mod signals;
pub mod stats;
