use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::{ClippingSeverity, CompressionVerdict, StereoCategory, TrackKind};

/// The eight issue categories a track can be flagged with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IssueKind {
    TooLoud,
    TooQuiet,
    Clipping,
    Overcompression,
    Undercompression,
    StereoFieldIssues,
    PhaseIssues,
    LackOfMonoCompatibility,
}

impl IssueKind {
    pub const ALL: [IssueKind; 8] = [
        IssueKind::TooLoud,
        IssueKind::TooQuiet,
        IssueKind::Clipping,
        IssueKind::Overcompression,
        IssueKind::Undercompression,
        IssueKind::StereoFieldIssues,
        IssueKind::PhaseIssues,
        IssueKind::LackOfMonoCompatibility,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            IssueKind::TooLoud => "too_loud",
            IssueKind::TooQuiet => "too_quiet",
            IssueKind::Clipping => "clipping",
            IssueKind::Overcompression => "overcompression",
            IssueKind::Undercompression => "undercompression",
            IssueKind::StereoFieldIssues => "stereo_field_issues",
            IssueKind::PhaseIssues => "phase_issues",
            IssueKind::LackOfMonoCompatibility => "lack_of_mono_compatibility",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            IssueKind::TooLoud => "too loud",
            IssueKind::TooQuiet => "too quiet",
            IssueKind::Clipping => "clipping",
            IssueKind::Overcompression => "overcompression",
            IssueKind::Undercompression => "undercompression",
            IssueKind::StereoFieldIssues => "stereo field issues",
            IssueKind::PhaseIssues => "phase issues",
            IssueKind::LackOfMonoCompatibility => "lack of mono compatibility",
        }
    }

    /// One actionable sentence for the text report.
    pub fn advice(self) -> &'static str {
        match self {
            IssueKind::TooLoud => "Integrated loudness is above target; streaming normalization will turn it down, so back off the limiter.",
            IssueKind::TooQuiet => "Integrated loudness is below target; raise the level to improve headroom use and signal-to-noise ratio.",
            IssueKind::Clipping => "Samples reach digital full scale; lower the output gain or use a true-peak limiter.",
            IssueKind::Overcompression => "Dynamic range is below the genre range; reduce compression or limiting.",
            IssueKind::Undercompression => "Dynamic range is above the genre range; consider more compression to control peaks.",
            IssueKind::StereoFieldIssues => "The stereo image is too narrow for the genre; widen panning or stereo effects.",
            IssueKind::PhaseIssues => "Left and right channels are largely out of phase; check polarity and timing between sources.",
            IssueKind::LackOfMonoCompatibility => "The mix loses energy or balance when summed to mono; check for anti-phase stereo content.",
        }
    }
}

impl fmt::Display for IssueKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Error)]
#[error("unknown issue `{0}`")]
pub struct ParseIssueError(pub String);

impl FromStr for IssueKind {
    type Err = ParseIssueError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().to_lowercase().replace([' ', '-'], "_");
        IssueKind::ALL
            .into_iter()
            .find(|k| k.as_str() == key)
            .ok_or_else(|| ParseIssueError(s.to_string()))
    }
}

/// Integrated loudness as far as issue classification is concerned.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LoudnessInput {
    Measured(f64),
    /// Fully gated: treated as too quiet.
    Undefined,
    /// Not measured or not recorded: no loudness verdict.
    Unknown,
    /// A verdict recorded upstream (e.g. in a dataset) that overrides thresholds.
    Verdict(Option<LoudnessVerdict>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LoudnessVerdict {
    TooLoud,
    TooQuiet,
}

/// The fields issue classification reads, from a report or a dataset row.
#[derive(Debug, Clone, PartialEq)]
pub struct IssueInputs {
    pub loudness: LoudnessInput,
    pub clipping: Option<ClippingSeverity>,
    pub compression: Option<CompressionVerdict>,
    pub stereo: Option<StereoCategory>,
    pub phase_issue: Option<bool>,
    pub mono_compatible: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StereoIssueRule {
    /// Categories that count as a stereo field issue.
    pub categories: Vec<StereoCategory>,
    /// Also flag wide tracks that have a phase issue.
    pub wide_with_phase_issue: bool,
}

impl Default for StereoIssueRule {
    fn default() -> Self {
        StereoIssueRule {
            categories: vec![StereoCategory::Mono, StereoCategory::Narrow],
            wide_with_phase_issue: false,
        }
    }
}

/// Policy thresholds for turning measurements into issues.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IssueConfig {
    pub mix_too_loud_lufs: f64,
    pub mix_too_quiet_lufs: f64,
    pub master_too_loud_lufs: f64,
    pub master_too_quiet_lufs: f64,
    pub mix_stereo: StereoIssueRule,
    pub master_stereo: StereoIssueRule,
}

impl Default for IssueConfig {
    fn default() -> Self {
        IssueConfig {
            mix_too_loud_lufs: -17.5,
            mix_too_quiet_lufs: -23.0,
            master_too_loud_lufs: -14.0,
            master_too_quiet_lufs: -24.0,
            mix_stereo: StereoIssueRule::default(),
            master_stereo: StereoIssueRule::default(),
        }
    }
}

impl IssueConfig {
    pub fn loudness_window(&self, kind: TrackKind) -> (f64, f64) {
        match kind {
            TrackKind::Mix => (self.mix_too_quiet_lufs, self.mix_too_loud_lufs),
            TrackKind::Master => (self.master_too_quiet_lufs, self.master_too_loud_lufs),
        }
    }

    pub fn stereo_rule(&self, kind: TrackKind) -> &StereoIssueRule {
        match kind {
            TrackKind::Mix => &self.mix_stereo,
            TrackKind::Master => &self.master_stereo,
        }
    }

    /// Quiet thresholds must sit below loud thresholds.
    pub fn validate(&self) -> Result<(), String> {
        for kind in TrackKind::ALL {
            let (quiet, loud) = self.loudness_window(kind);
            if !(quiet < loud) {
                return Err(format!("{kind}: too-quiet threshold {quiet} must be below too-loud threshold {loud}"));
            }
        }
        Ok(())
    }
}

pub fn classify_issues(inputs: &IssueInputs, kind: TrackKind, config: &IssueConfig) -> BTreeSet<IssueKind> {
    let mut issues = BTreeSet::new();
    let (quiet, loud) = config.loudness_window(kind);

    match inputs.loudness {
        LoudnessInput::Measured(lufs) if lufs > loud => {
            issues.insert(IssueKind::TooLoud);
        }
        LoudnessInput::Measured(lufs) if lufs < quiet => {
            issues.insert(IssueKind::TooQuiet);
        }
        LoudnessInput::Undefined | LoudnessInput::Verdict(Some(LoudnessVerdict::TooQuiet)) => {
            issues.insert(IssueKind::TooQuiet);
        }
        LoudnessInput::Verdict(Some(LoudnessVerdict::TooLoud)) => {
            issues.insert(IssueKind::TooLoud);
        }
        _ => {}
    }

    if matches!(inputs.clipping, Some(s) if s != ClippingSeverity::None) {
        issues.insert(IssueKind::Clipping);
    }
    match inputs.compression {
        Some(CompressionVerdict::Overcompressed) => {
            issues.insert(IssueKind::Overcompression);
        }
        Some(CompressionVerdict::Undercompressed) => {
            issues.insert(IssueKind::Undercompression);
        }
        _ => {}
    }
    if let Some(category) = inputs.stereo {
        let rule = config.stereo_rule(kind);
        let wide_phase = rule.wide_with_phase_issue
            && category == StereoCategory::Wide
            && inputs.phase_issue == Some(true);
        if rule.categories.contains(&category) || wide_phase {
            issues.insert(IssueKind::StereoFieldIssues);
        }
    }
    if inputs.phase_issue == Some(true) {
        issues.insert(IssueKind::PhaseIssues);
    }
    if inputs.mono_compatible == Some(false) {
        issues.insert(IssueKind::LackOfMonoCompatibility);
    }
    issues
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IssuePrevalence {
    pub issue: IssueKind,
    pub count: u64,
    pub prevalence: f64,
}

#[derive(Debug, Error, PartialEq)]
pub enum RankError {
    #[error("cannot rank issues over an empty corpus")]
    EmptyCorpus,
}

/// All eight issues by the fraction of tracks carrying them, most common first;
/// ties go alphabetically by issue name.
pub fn rank_issue_sets<'a, I>(sets: I) -> Result<Vec<IssuePrevalence>, RankError>
where
    I: IntoIterator<Item = &'a BTreeSet<IssueKind>>,
{
    let mut counts = [0u64; 8];
    let mut total = 0u64;
    for set in sets {
        total += 1;
        for issue in set {
            counts[IssueKind::ALL.iter().position(|k| k == issue).expect("known issue")] += 1;
        }
    }
    if total == 0 {
        return Err(RankError::EmptyCorpus);
    }
    let mut ranked: Vec<IssuePrevalence> = IssueKind::ALL
        .iter()
        .zip(counts)
        .map(|(&issue, count)| IssuePrevalence { issue, count, prevalence: count as f64 / total as f64 })
        .collect();
    ranked.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.issue.as_str().cmp(b.issue.as_str())));
    Ok(ranked)
}
