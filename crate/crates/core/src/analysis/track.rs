use super::{
    classify_compression, detect_clipping, dynamic_range, measure_loudness, mono_compatibility,
    phase_issues_with_threshold, stereo_width, tonal_profile, GenreProfiles, MonoThresholds, StereoThresholds,
    TrackKind, PHASE_ISSUE_THRESHOLD_RAD,
};
use crate::audio_io::{AudioBuffer, FileMeta};
use crate::report::{classify_issues, AnalysisReport, IssueConfig, Section};

/// Everything an operator can tune about a track analysis.
#[derive(Debug, Clone)]
pub struct AnalysisConfig {
    pub profiles: GenreProfiles,
    pub stereo: StereoThresholds,
    pub mono: MonoThresholds,
    pub phase_threshold_rad: f64,
    pub issues: IssueConfig,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            profiles: GenreProfiles::default(),
            stereo: StereoThresholds::default(),
            mono: MonoThresholds::default(),
            phase_threshold_rad: PHASE_ISSUE_THRESHOLD_RAD,
            issues: IssueConfig::default(),
        }
    }
}

/// Run every analyzer on one decoded track and attach its issue set.
///
/// A failing analyzer is recorded in its own section; the others still run.
/// Stereo-only analyzers are marked not applicable for mono input.
pub fn analyze_track(
    track_id: &str,
    buffer: &AudioBuffer,
    meta: &FileMeta,
    kind: TrackKind,
    genre: &str,
    config: &AnalysisConfig,
) -> AnalysisReport {
    let mut report = AnalysisReport {
        track_id: track_id.to_string(),
        kind,
        genre: genre.to_string(),
        file_meta: meta.clone(),
        loudness: measure_loudness(buffer).into(),
        clipping: detect_clipping(buffer),
        compression: dynamic_range(buffer)
            .map(|dr| classify_compression(dr, genre, &config.profiles))
            .into(),
        stereo: if buffer.is_stereo() {
            stereo_width(buffer, &config.stereo).into()
        } else {
            Section::NotApplicable
        },
        mono_compat: if buffer.is_stereo() {
            mono_compatibility(buffer, &config.mono).into()
        } else {
            Section::NotApplicable
        },
        phase: if buffer.is_stereo() {
            phase_issues_with_threshold(buffer, config.phase_threshold_rad).into()
        } else {
            Section::NotApplicable
        },
        tonal: tonal_profile(buffer, genre, &config.profiles).into(),
        issues: Default::default(),
    };
    report.issues = classify_issues(&report.issue_inputs(), kind, &config.issues);
    report
}
