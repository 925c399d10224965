use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::chisq::ContingencyTable;
use super::dataset::{DatasetRow, DatasetTable, Field, LoudnessFlag};
use super::StatsError;
use crate::analysis::TrackKind;
use crate::report::{
    classify_issues, rank_issue_sets, IssueConfig, IssueInputs, IssuePrevalence, LoudnessInput, LoudnessVerdict,
};

/// Labels in first-appearance order.
#[derive(Debug, Default)]
struct LabelIndex {
    labels: Vec<String>,
    index: BTreeMap<String, usize>,
}

impl LabelIndex {
    fn get_or_insert(&mut self, label: &str) -> usize {
        if let Some(&i) = self.index.get(label) {
            return i;
        }
        self.labels.push(label.to_string());
        self.index.insert(label.to_string(), self.labels.len() - 1);
        self.labels.len() - 1
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GroupBy {
    pub kind: bool,
    pub genre: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct GroupKey {
    pub kind: Option<TrackKind>,
    pub genre: Option<String>,
}

impl fmt::Display for GroupKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = [self.kind.map(|k| k.to_string()), self.genre.clone()].into_iter().flatten().collect();
        if parts.is_empty() {
            f.write_str("all")
        } else {
            f.write_str(&parts.join("/"))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CategoryShare {
    pub category: String,
    pub count: u64,
    pub proportion: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrequencyGroup {
    pub group: GroupKey,
    pub total: u64,
    /// Rows in the group with the field missing.
    pub excluded: u64,
    pub categories: Vec<CategoryShare>,
}

pub fn frequency_distribution(
    table: &DatasetTable,
    field: Field,
    group_by: GroupBy,
    kind: Option<TrackKind>,
) -> Result<Vec<FrequencyGroup>, StatsError> {
    if field.is_numeric() {
        return Err(StatsError::WrongFieldType { field, expected: "categorical" });
    }
    let mut labels = LabelIndex::default();
    let mut groups: BTreeMap<GroupKey, (Vec<u64>, u64)> = BTreeMap::new();
    for row in table.filtered(kind) {
        let key = GroupKey {
            kind: group_by.kind.then_some(row.kind),
            genre: if group_by.genre { Some(row.genre.clone().unwrap_or_else(|| "unknown".into())) } else { None },
        };
        let entry = groups.entry(key).or_default();
        match row.categorical(field)? {
            Some(label) => {
                let i = labels.get_or_insert(&label);
                if entry.0.len() <= i {
                    entry.0.resize(i + 1, 0);
                }
                entry.0[i] += 1;
            }
            None => entry.1 += 1,
        }
    }
    Ok(groups
        .into_iter()
        .map(|(group, (mut counts, excluded))| {
            counts.resize(labels.labels.len(), 0);
            let total: u64 = counts.iter().sum();
            FrequencyGroup {
                group,
                total,
                excluded,
                categories: labels
                    .labels
                    .iter()
                    .zip(counts)
                    .map(|(category, count)| CategoryShare {
                        category: category.clone(),
                        count,
                        proportion: if total > 0 { count as f64 / total as f64 } else { 0.0 },
                    })
                    .collect(),
            }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Above,
    Below,
    AtOrAbove,
    AtOrBelow,
}

impl Direction {
    fn test(self, value: f64, threshold: f64) -> bool {
        match self {
            Direction::Above => value > threshold,
            Direction::Below => value < threshold,
            Direction::AtOrAbove => value >= threshold,
            Direction::AtOrBelow => value <= threshold,
        }
    }
}

impl FromStr for Direction {
    type Err = StatsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_lowercase().replace('-', "_").as_str() {
            "above" | "gt" => Ok(Direction::Above),
            "below" | "lt" => Ok(Direction::Below),
            "at_or_above" | "ge" => Ok(Direction::AtOrAbove),
            "at_or_below" | "le" => Ok(Direction::AtOrBelow),
            _ => Err(StatsError::BadParameter(format!("unknown direction `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Exceedance {
    pub percentage: f64,
    pub count: u64,
    pub denominator: u64,
    pub excluded: u64,
}

pub fn threshold_exceedance(
    table: &DatasetTable,
    field: Field,
    threshold: f64,
    direction: Direction,
    kind: Option<TrackKind>,
) -> Result<Exceedance, StatsError> {
    if !field.is_numeric() {
        return Err(StatsError::WrongFieldType { field, expected: "numeric" });
    }
    let (mut count, mut denominator, mut excluded) = (0, 0, 0);
    for row in table.filtered(kind) {
        match row.numeric(field)? {
            Some(v) => {
                denominator += 1;
                if direction.test(v, threshold) {
                    count += 1;
                }
            }
            None => excluded += 1,
        }
    }
    let percentage = if denominator > 0 { 100.0 * count as f64 / denominator as f64 } else { 0.0 };
    Ok(Exceedance { percentage, count, denominator, excluded })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Crosstab {
    pub table: ContingencyTable,
    /// Rows with either field missing.
    pub excluded: u64,
}

pub fn crosstab(table: &DatasetTable, a: Field, b: Field, kind: Option<TrackKind>) -> Result<Crosstab, StatsError> {
    let rows: Vec<&DatasetRow> = table.filtered(kind).collect();
    let mut pairs = Vec::with_capacity(rows.len());
    let mut excluded = 0;
    for row in rows {
        match (row.categorical(a)?, row.categorical(b)?) {
            (Some(x), Some(y)) => pairs.push((x, y)),
            _ => excluded += 1,
        }
    }
    Ok(Crosstab { table: crosstab_pairs(pairs)?, excluded })
}

/// Count label pairs into a table, labels in first-appearance order.
pub fn crosstab_pairs<A: AsRef<str>, B: AsRef<str>>(
    pairs: impl IntoIterator<Item = (A, B)>,
) -> Result<ContingencyTable, StatsError> {
    let (mut rows, mut cols) = (LabelIndex::default(), LabelIndex::default());
    let mut cells: Vec<(usize, usize)> = Vec::new();
    for (a, b) in pairs {
        cells.push((rows.get_or_insert(a.as_ref()), cols.get_or_insert(b.as_ref())));
    }
    let mut counts = vec![vec![0u64; cols.labels.len()]; rows.labels.len()];
    for (i, j) in cells {
        counts[i][j] += 1;
    }
    ContingencyTable::new(rows.labels, cols.labels, counts)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    pub field: Field,
    /// `bins + 1` edges; the last bin may be narrower than the rest.
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    /// Density per unit on the x axis; integrates to 1 over in-range rows.
    pub densities: Vec<f64>,
    pub out_of_range: u64,
    pub excluded: u64,
}

impl Histogram {
    /// Edges of the fullest bin (the first one on ties).
    pub fn mode_bin(&self) -> Option<(f64, f64)> {
        let max = *self.counts.iter().max()?;
        if max == 0 {
            return None;
        }
        let i = self.counts.iter().position(|&c| c == max)?;
        Some((self.edges[i], self.edges[i + 1]))
    }

    pub fn in_range(&self) -> u64 {
        self.counts.iter().sum()
    }
}

pub fn histogram_range(field: Field) -> Result<(f64, f64), StatsError> {
    match field {
        Field::IntegratedLufs => Ok((-60.0, 6.0)),
        Field::TruePeakDbtp => Ok((-30.0, 6.0)),
        other => Err(StatsError::WrongFieldType { field: other, expected: "numeric" }),
    }
}

/// Histogram of a loudness field over its fixed range. Bins are half-open
/// `[lo, hi)` except the last, which also takes its upper edge.
pub fn loudness_histogram(
    table: &DatasetTable,
    field: Field,
    kind: Option<TrackKind>,
    bin_width: f64,
) -> Result<Histogram, StatsError> {
    let (lo, hi) = histogram_range(field)?;
    let values: Vec<Option<f64>> = table.filtered(kind).map(|r| r.numeric(field)).collect::<Result<_, _>>()?;
    histogram_of(field, values, lo, hi, bin_width)
}

pub fn histogram_of(
    field: Field,
    values: impl IntoIterator<Item = Option<f64>>,
    lo: f64,
    hi: f64,
    bin_width: f64,
) -> Result<Histogram, StatsError> {
    if !(bin_width > 0.0 && bin_width.is_finite() && lo < hi) {
        return Err(StatsError::BadParameter(format!("bin width must be positive, got {bin_width}")));
    }
    let bins = ((hi - lo) / bin_width - 1e-9).ceil().max(1.0) as usize;
    let mut edges: Vec<f64> = (0..bins).map(|i| lo + i as f64 * bin_width).collect();
    edges.push(hi);

    let mut counts = vec![0u64; bins];
    let (mut out_of_range, mut excluded) = (0, 0);
    for v in values {
        match v {
            None => excluded += 1,
            Some(x) if !(lo..=hi).contains(&x) => out_of_range += 1,
            Some(x) => {
                let i = (((x - lo) / bin_width).floor() as usize).min(bins - 1);
                // guard against rounding at interior edges
                let i = if x < edges[i] { i - 1 } else if i + 1 < bins && x >= edges[i + 1] { i + 1 } else { i };
                counts[i] += 1;
            }
        }
    }
    let total: u64 = counts.iter().sum();
    let densities = counts
        .iter()
        .enumerate()
        .map(|(i, &c)| if total > 0 { c as f64 / (total as f64 * (edges[i + 1] - edges[i])) } else { 0.0 })
        .collect();
    Ok(Histogram { field, edges, counts, densities, out_of_range, excluded })
}

/// Issue inputs for a dataset row. An upstream loudness verdict, when the
/// dataset has one, takes precedence over re-thresholding integrated loudness.
pub fn row_issue_inputs(row: &DatasetRow, table: &DatasetTable) -> IssueInputs {
    let loudness = if table.has_field(Field::LoudnessIssue) {
        match row.loudness_issue {
            Some(LoudnessFlag::TooLoud) => LoudnessInput::Verdict(Some(LoudnessVerdict::TooLoud)),
            Some(LoudnessFlag::TooQuiet) => LoudnessInput::Verdict(Some(LoudnessVerdict::TooQuiet)),
            Some(LoudnessFlag::Ok) => LoudnessInput::Verdict(None),
            None => LoudnessInput::Unknown,
        }
    } else {
        row.integrated_lufs.map_or(LoudnessInput::Unknown, LoudnessInput::Measured)
    };
    IssueInputs {
        loudness,
        clipping: row.clipping,
        compression: row.compression,
        stereo: row.stereo_field,
        phase_issue: row.phase_issue,
        mono_compatible: row.mono_compatible,
    }
}

/// Issue ranking over the dataset's per-track flags.
pub fn rank_dataset(
    table: &DatasetTable,
    kind: Option<TrackKind>,
    config: &IssueConfig,
) -> Result<Vec<IssuePrevalence>, StatsError> {
    let sets: Vec<_> = table
        .filtered(kind)
        .map(|row| classify_issues(&row_issue_inputs(row, table), row.kind, config))
        .collect();
    Ok(rank_issue_sets(&sets)?)
}
