//! Loading an [`AnalysisConfig`] from TOML.
//!
//! ```toml
//! profiles = "genres.toml"      # genre profile file, relative to this file
//! phase_threshold_rad = 1.7
//!
//! [stereo]
//! narrow_db = -20.0
//!
//! [issues]
//! master_too_loud_lufs = -16.0
//! master_stereo = { categories = ["mono"], wide_with_phase_issue = true }
//! ```
//!
//! Genre profiles may instead be given inline as `[genres.<name>]` tables.
//! Every key is optional.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

use super::{AnalysisConfig, GenreProfiles, MonoThresholds, ProfileError, StereoThresholds};
use crate::report::IssueConfig;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("cannot parse config: {0}")]
    Parse(#[from] toml::de::Error),
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error("invalid config: {0}")]
    Invalid(String),
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct ConfigFile {
    profiles: Option<PathBuf>,
    genres: Option<toml::Table>,
    phase_threshold_rad: Option<f64>,
    stereo: StereoThresholds,
    mono: MonoThresholds,
    issues: IssueConfig,
}

impl AnalysisConfig {
    /// Parse a config; relative profile paths resolve against `base_dir`.
    pub fn from_toml_str(text: &str, base_dir: Option<&Path>) -> Result<AnalysisConfig, ConfigError> {
        let file: ConfigFile = toml::from_str(text)?;
        let profiles = match (file.profiles, file.genres) {
            (Some(_), Some(_)) => {
                return Err(ConfigError::Invalid("give either `profiles` or `[genres]`, not both".into()))
            }
            (Some(path), None) => {
                let path = match base_dir {
                    Some(dir) if path.is_relative() => dir.join(path),
                    _ => path,
                };
                let text = std::fs::read_to_string(&path).map_err(|source| ConfigError::Io { path, source })?;
                GenreProfiles::from_toml_str(&text)?
            }
            (None, Some(table)) => GenreProfiles::from_toml_str(&table.to_string())?,
            (None, None) => GenreProfiles::default(),
        };
        let config = AnalysisConfig {
            profiles,
            stereo: file.stereo,
            mono: file.mono,
            phase_threshold_rad: file.phase_threshold_rad.unwrap_or(super::PHASE_ISSUE_THRESHOLD_RAD),
            issues: file.issues,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<AnalysisConfig, ConfigError> {
        let path = path.as_ref();
        let text =
            std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.to_path_buf(), source })?;
        Self::from_toml_str(&text, path.parent())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let s = &self.stereo;
        if !(s.mono_db < s.narrow_db && s.narrow_db <= s.wide_db) {
            return Err(ConfigError::Invalid(format!(
                "stereo thresholds must satisfy mono_db < narrow_db <= wide_db (got {}, {}, {})",
                s.mono_db, s.narrow_db, s.wide_db
            )));
        }
        if !(0.0..=1.0).contains(&self.mono.max_abs_correlation) {
            return Err(ConfigError::Invalid("mono.max_abs_correlation must be in [0, 1]".into()));
        }
        if !(0.0..=std::f64::consts::PI).contains(&self.phase_threshold_rad) {
            return Err(ConfigError::Invalid("phase_threshold_rad must be in [0, pi]".into()));
        }
        self.issues.validate().map_err(ConfigError::Invalid)
    }
}
