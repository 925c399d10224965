//! Issue taxonomy, per-track reports and corpus-level issue ranking.

mod issues;
pub mod nonfinite;
mod render;

use std::collections::BTreeSet;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::analysis::{
    AnalysisError, ClippingReport, CompressionResult, LoudnessResult, MonoCompatResult, PhaseResult, StereoResult,
    TonalProfile, TrackKind,
};
use crate::audio_io::FileMeta;

pub use issues::{
    classify_issues, rank_issue_sets, IssueConfig, IssueInputs, IssueKind, IssuePrevalence, LoudnessInput,
    LoudnessVerdict, ParseIssueError, RankError, StereoIssueRule,
};
pub use render::{render_report, rounded, ReportFormat, SCHEMA_VERSION};

/// One analyzer's slot in a report.
///
/// In JSON a measured section is the result object itself, a not-applicable
/// section is `null` and a failed one is `{"error": "..."}`.
#[derive(Debug, Clone, PartialEq)]
pub enum Section<T> {
    Measured(T),
    NotApplicable,
    Failed(String),
}

impl<T> Section<T> {
    pub fn measured(&self) -> Option<&T> {
        match self {
            Section::Measured(v) => Some(v),
            _ => None,
        }
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Section<U> {
        match self {
            Section::Measured(v) => Section::Measured(f(v)),
            Section::NotApplicable => Section::NotApplicable,
            Section::Failed(e) => Section::Failed(e),
        }
    }
}

impl<T> From<Result<T, AnalysisError>> for Section<T> {
    fn from(result: Result<T, AnalysisError>) -> Self {
        match result {
            Ok(v) => Section::Measured(v),
            Err(e) => Section::Failed(e.to_string()),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct FailedRepr {
    error: String,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum SectionRepr<T> {
    Failed(FailedRepr),
    Measured(T),
}

impl<T: Serialize> Serialize for Section<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Section::Measured(v) => v.serialize(serializer),
            Section::NotApplicable => serializer.serialize_none(),
            Section::Failed(e) => FailedRepr { error: e.clone() }.serialize(serializer),
        }
    }
}

impl<'de, T: Deserialize<'de>> Deserialize<'de> for Section<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        Ok(match Option::<SectionRepr<T>>::deserialize(deserializer)? {
            None => Section::NotApplicable,
            Some(SectionRepr::Failed(f)) => Section::Failed(f.error),
            Some(SectionRepr::Measured(v)) => Section::Measured(v),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub track_id: String,
    pub kind: TrackKind,
    pub genre: String,
    pub file_meta: FileMeta,
    pub loudness: Section<LoudnessResult>,
    pub clipping: ClippingReport,
    pub compression: Section<CompressionResult>,
    pub stereo: Section<StereoResult>,
    pub mono_compat: Section<MonoCompatResult>,
    pub phase: Section<PhaseResult>,
    pub tonal: Section<TonalProfile>,
    pub issues: BTreeSet<IssueKind>,
}

impl AnalysisReport {
    pub fn issue_inputs(&self) -> IssueInputs {
        IssueInputs {
            loudness: match self.loudness.measured() {
                Some(LoudnessResult { integrated_lufs: Some(lufs), .. }) => LoudnessInput::Measured(*lufs),
                Some(LoudnessResult { integrated_lufs: None, .. }) => LoudnessInput::Undefined,
                None => LoudnessInput::Unknown,
            },
            clipping: Some(self.clipping.severity),
            compression: self.compression.measured().map(|c| c.verdict),
            stereo: self.stereo.measured().map(|s| s.category),
            phase_issue: self.phase.measured().map(|p| p.has_issue),
            mono_compatible: self.mono_compat.measured().map(|m| m.compatible),
        }
    }

    /// Recompute the issue set from this report's own fields.
    pub fn reclassify(&self, config: &IssueConfig) -> BTreeSet<IssueKind> {
        classify_issues(&self.issue_inputs(), self.kind, config)
    }
}

/// Issue prevalence over `reports`, optionally restricted to one track kind.
pub fn rank_issues<'a, I>(reports: I, kind: Option<TrackKind>) -> Result<Vec<IssuePrevalence>, RankError>
where
    I: IntoIterator<Item = &'a AnalysisReport>,
{
    rank_issue_sets(
        reports
            .into_iter()
            .filter(|r| kind.is_none_or(|k| r.kind == k))
            .map(|r| &r.issues),
    )
}
