//! Per-genre targets for the compression verdict and tonal band classes.
//!
//! The profile file is TOML with one table per genre. Every field is optional;
//! anything left out is inherited from the `[default]` table, which itself falls
//! back to the built-in default below.
//!
//! ```toml
//! [default]
//! dr_low_db = 8.0
//! dr_high_db = 14.0
//!
//! [electronic]
//! dr_low_db = 6.0
//! band_high = [0.45, 0.55, 0.55, 0.35]
//! ```

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::Deserialize;
use thiserror::Error;

pub const DEFAULT_GENRE: &str = "default";

#[derive(Debug, Error)]
pub enum ProfileError {
    #[error("cannot read profile file: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot parse profile file: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("invalid profile `{genre}`: {reason}")]
    Invalid { genre: String, reason: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenreProfile {
    pub genre: String,
    pub dr_low_db: f64,
    pub dr_high_db: f64,
    pub band_low: [f64; 4],
    pub band_high: [f64; 4],
}

impl GenreProfile {
    pub fn builtin_default() -> GenreProfile {
        GenreProfile {
            genre: DEFAULT_GENRE.to_string(),
            dr_low_db: 8.0,
            dr_high_db: 14.0,
            band_low: [0.05, 0.15, 0.15, 0.05],
            band_high: [0.35, 0.55, 0.55, 0.35],
        }
    }

    fn validate(&self) -> Result<(), ProfileError> {
        let invalid = |reason: String| ProfileError::Invalid { genre: self.genre.clone(), reason };
        if !(self.dr_low_db < self.dr_high_db) {
            return Err(invalid(format!(
                "dr_low_db ({}) must be below dr_high_db ({})",
                self.dr_low_db, self.dr_high_db
            )));
        }
        for k in 0..4 {
            let (lo, hi) = (self.band_low[k], self.band_high[k]);
            if !(0.0 < lo && lo < hi && hi < 1.0) {
                return Err(invalid(format!("band {k}: need 0 < band_low ({lo}) < band_high ({hi}) < 1")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProfileOverrides {
    dr_low_db: Option<f64>,
    dr_high_db: Option<f64>,
    band_low: Option<[f64; 4]>,
    band_high: Option<[f64; 4]>,
}

impl ProfileOverrides {
    fn apply(self, base: &GenreProfile, genre: &str) -> GenreProfile {
        GenreProfile {
            genre: genre.to_string(),
            dr_low_db: self.dr_low_db.unwrap_or(base.dr_low_db),
            dr_high_db: self.dr_high_db.unwrap_or(base.dr_high_db),
            band_low: self.band_low.unwrap_or(base.band_low),
            band_high: self.band_high.unwrap_or(base.band_high),
        }
    }
}

/// A `default` profile plus any number of genre-specific ones.
#[derive(Debug, Clone, PartialEq)]
pub struct GenreProfiles {
    default: GenreProfile,
    genres: BTreeMap<String, GenreProfile>,
}

impl Default for GenreProfiles {
    fn default() -> Self {
        GenreProfiles { default: GenreProfile::builtin_default(), genres: BTreeMap::new() }
    }
}

pub fn normalize_genre(genre: &str) -> String {
    genre.trim().to_lowercase()
}

impl GenreProfiles {
    pub fn from_toml_str(text: &str) -> Result<GenreProfiles, ProfileError> {
        let mut tables: BTreeMap<String, ProfileOverrides> = toml::from_str(text)?;
        let default = tables
            .remove(DEFAULT_GENRE)
            .unwrap_or_default()
            .apply(&GenreProfile::builtin_default(), DEFAULT_GENRE);
        default.validate()?;

        let mut genres = BTreeMap::new();
        for (name, overrides) in tables {
            let key = normalize_genre(&name);
            let profile = overrides.apply(&default, &key);
            profile.validate()?;
            genres.insert(key, profile);
        }
        Ok(GenreProfiles { default, genres })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<GenreProfiles, ProfileError> {
        Self::from_toml_str(&fs::read_to_string(path)?)
    }

    pub fn default_profile(&self) -> &GenreProfile {
        &self.default
    }

    /// The genre's profile, or the default when the genre is unknown.
    pub fn resolve(&self, genre: &str) -> &GenreProfile {
        self.genres.get(&normalize_genre(genre)).unwrap_or(&self.default)
    }

    pub fn genres(&self) -> impl Iterator<Item = &GenreProfile> {
        self.genres.values()
    }
}
