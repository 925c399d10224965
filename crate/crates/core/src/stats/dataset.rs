//! Typed ingestion of the per-track metrics CSV.
//!
//! Raw column names are bound to canonical fields by a [`ColumnMapping`]:
//!
//! ```toml
//! [columns]
//! track_kind = "Type"
//! integrated_lufs = "LUFS"
//!
//! [aliases.compression]
//! "too compressed" = "over"
//!
//! [invert]
//! mono_compatible = true   # the column holds "has a mono issue"
//! ```
//!
//! Fields not listed under `[columns]` are looked up by their canonical name.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::fs::File;
use std::io::Read;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::StatsError;
use crate::analysis::{BandClass, ClippingSeverity, CompressionVerdict, StereoCategory, TrackKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Field {
    TrackKind,
    Genre,
    IntegratedLufs,
    TruePeakDbtp,
    Clipping,
    MonoCompatible,
    PhaseIssue,
    Compression,
    StereoField,
    TonalLow,
    TonalLowMid,
    TonalHighMid,
    TonalHigh,
    /// Optional upstream too-loud/too-quiet verdict.
    LoudnessIssue,
}

impl Field {
    pub const ALL: [Field; 14] = [
        Field::TrackKind,
        Field::Genre,
        Field::IntegratedLufs,
        Field::TruePeakDbtp,
        Field::Clipping,
        Field::MonoCompatible,
        Field::PhaseIssue,
        Field::Compression,
        Field::StereoField,
        Field::TonalLow,
        Field::TonalLowMid,
        Field::TonalHighMid,
        Field::TonalHigh,
        Field::LoudnessIssue,
    ];

    pub const TONAL: [Field; 4] = [Field::TonalLow, Field::TonalLowMid, Field::TonalHighMid, Field::TonalHigh];

    pub fn as_str(self) -> &'static str {
        match self {
            Field::TrackKind => "track_kind",
            Field::Genre => "genre",
            Field::IntegratedLufs => "integrated_lufs",
            Field::TruePeakDbtp => "true_peak_dbtp",
            Field::Clipping => "clipping",
            Field::MonoCompatible => "mono_compatible",
            Field::PhaseIssue => "phase_issue",
            Field::Compression => "compression",
            Field::StereoField => "stereo_field",
            Field::TonalLow => "tonal_low",
            Field::TonalLowMid => "tonal_low_mid",
            Field::TonalHighMid => "tonal_high_mid",
            Field::TonalHigh => "tonal_high",
            Field::LoudnessIssue => "loudness_issue",
        }
    }

    pub fn is_numeric(self) -> bool {
        matches!(self, Field::IntegratedLufs | Field::TruePeakDbtp)
    }

    pub fn is_boolean(self) -> bool {
        matches!(self, Field::MonoCompatible | Field::PhaseIssue)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Field {
    type Err = StatsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = normalize(s).replace([' ', '-'], "_");
        let key = match key.as_str() {
            "kind" | "type" => "track_kind",
            "lufs" | "loudness" => "integrated_lufs",
            "true_peak" | "dbtp" => "true_peak_dbtp",
            "stereo" => "stereo_field",
            "mono_compatibility" => "mono_compatible",
            "phase" => "phase_issue",
            other => other,
        };
        Field::ALL
            .into_iter()
            .find(|f| f.as_str() == key)
            .ok_or_else(|| StatsError::UnknownField(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LoudnessFlag {
    Ok,
    TooLoud,
    TooQuiet,
}

impl LoudnessFlag {
    pub fn as_str(self) -> &'static str {
        match self {
            LoudnessFlag::Ok => "ok",
            LoudnessFlag::TooLoud => "too_loud",
            LoudnessFlag::TooQuiet => "too_quiet",
        }
    }
}

/// One track's metrics. `None` means missing or outside the field's vocabulary.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetRow {
    pub kind: TrackKind,
    pub genre: Option<String>,
    pub integrated_lufs: Option<f64>,
    pub true_peak_dbtp: Option<f64>,
    pub clipping: Option<ClippingSeverity>,
    pub mono_compatible: Option<bool>,
    pub phase_issue: Option<bool>,
    pub compression: Option<CompressionVerdict>,
    pub stereo_field: Option<StereoCategory>,
    pub tonal: [Option<BandClass>; 4],
    pub loudness_issue: Option<LoudnessFlag>,
}

impl DatasetRow {
    pub fn empty(kind: TrackKind) -> DatasetRow {
        DatasetRow {
            kind,
            genre: None,
            integrated_lufs: None,
            true_peak_dbtp: None,
            clipping: None,
            mono_compatible: None,
            phase_issue: None,
            compression: None,
            stereo_field: None,
            tonal: [None; 4],
            loudness_issue: None,
        }
    }

    pub fn numeric(&self, field: Field) -> Result<Option<f64>, StatsError> {
        match field {
            Field::IntegratedLufs => Ok(self.integrated_lufs),
            Field::TruePeakDbtp => Ok(self.true_peak_dbtp),
            other => Err(StatsError::WrongFieldType { field: other, expected: "numeric" }),
        }
    }

    /// The field's category label, e.g. `"minor"` or `"true"`.
    pub fn categorical(&self, field: Field) -> Result<Option<String>, StatsError> {
        fn s<T>(v: Option<T>, f: impl FnOnce(T) -> &'static str) -> Option<String> {
            v.map(|x| f(x).to_string())
        }
        let bool_label = |b: bool| if b { "true" } else { "false" };
        Ok(match field {
            Field::TrackKind => Some(self.kind.as_str().to_string()),
            Field::Genre => self.genre.clone(),
            Field::Clipping => s(self.clipping, ClippingSeverity::as_str),
            Field::MonoCompatible => s(self.mono_compatible, bool_label),
            Field::PhaseIssue => s(self.phase_issue, bool_label),
            Field::Compression => s(self.compression, CompressionVerdict::as_str),
            Field::StereoField => s(self.stereo_field, StereoCategory::as_str),
            Field::TonalLow => s(self.tonal[0], BandClass::as_str),
            Field::TonalLowMid => s(self.tonal[1], BandClass::as_str),
            Field::TonalHighMid => s(self.tonal[2], BandClass::as_str),
            Field::TonalHigh => s(self.tonal[3], BandClass::as_str),
            Field::LoudnessIssue => s(self.loudness_issue, LoudnessFlag::as_str),
            Field::IntegratedLufs | Field::TruePeakDbtp => {
                return Err(StatsError::WrongFieldType { field, expected: "categorical" })
            }
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct DatasetTable {
    pub rows: Vec<DatasetRow>,
    /// Data rows in the file, before any were dropped.
    pub raw_rows: u64,
    /// Rows dropped because the track kind was missing or unrecognized.
    pub dropped_rows: u64,
    /// Per field, cells that were present but outside the vocabulary.
    pub invalid_values: BTreeMap<Field, u64>,
    /// Fields with no column in the file.
    pub missing_fields: Vec<Field>,
}

impl DatasetTable {
    pub fn has_field(&self, field: Field) -> bool {
        !self.missing_fields.contains(&field)
    }

    pub fn count_kind(&self, kind: TrackKind) -> usize {
        self.rows.iter().filter(|r| r.kind == kind).count()
    }

    pub fn filtered(&self, kind: Option<TrackKind>) -> impl Iterator<Item = &DatasetRow> {
        self.rows.iter().filter(move |r| kind.is_none_or(|k| r.kind == k))
    }
}

/// Binds canonical fields to raw CSV headers and raw values to vocabulary.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ColumnMapping {
    #[serde(default)]
    pub columns: BTreeMap<Field, String>,
    #[serde(default)]
    pub aliases: BTreeMap<Field, BTreeMap<String, String>>,
    #[serde(default)]
    pub invert: BTreeMap<Field, bool>,
}

impl ColumnMapping {
    pub fn from_toml_str(text: &str) -> Result<ColumnMapping, StatsError> {
        let mapping: ColumnMapping = toml::from_str(text).map_err(|e| StatsError::Mapping(e.to_string()))?;
        for field in mapping.invert.keys() {
            if !field.is_boolean() {
                return Err(StatsError::Mapping(format!("`invert` only applies to boolean fields, not {field}")));
            }
        }
        Ok(mapping)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<ColumnMapping, StatsError> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    fn column_for(&self, field: Field) -> (&str, bool) {
        match self.columns.get(&field) {
            Some(c) => (c.as_str(), true),
            None => (field.as_str(), false),
        }
    }

    fn alias<'a>(&'a self, field: Field, raw: &'a str) -> String {
        let norm = normalize(raw);
        self.aliases
            .get(&field)
            .and_then(|m| m.iter().find(|(k, _)| normalize(k) == norm).map(|(_, v)| normalize(v)))
            .unwrap_or(norm)
    }
}

pub(crate) fn normalize(s: &str) -> String {
    s.trim().to_lowercase()
}

fn parse_bool(v: &str) -> Option<bool> {
    match v {
        "true" | "t" | "yes" | "y" | "1" | "1.0" => Some(true),
        "false" | "f" | "no" | "n" | "0" | "0.0" => Some(false),
        _ => None,
    }
}

fn parse_clipping(v: &str) -> Option<ClippingSeverity> {
    match v {
        "none" | "no" | "no clipping" | "false" | "0" => Some(ClippingSeverity::None),
        "minor" | "some" | "light" | "minor clipping" => Some(ClippingSeverity::Minor),
        "major" | "severe" | "heavy" | "major clipping" => Some(ClippingSeverity::Major),
        _ => None,
    }
}

fn parse_compression(v: &str) -> Option<CompressionVerdict> {
    match v {
        "under" | "undercompressed" | "undercompression" | "under-compressed" | "under compressed" => {
            Some(CompressionVerdict::Undercompressed)
        }
        "optimal" | "ok" | "good" | "normal" => Some(CompressionVerdict::Optimal),
        "over" | "overcompressed" | "overcompression" | "over-compressed" | "over compressed" => {
            Some(CompressionVerdict::Overcompressed)
        }
        _ => None,
    }
}

fn parse_stereo(v: &str) -> Option<StereoCategory> {
    StereoCategory::ALL.into_iter().find(|c| c.as_str() == v)
}

fn parse_band(v: &str) -> Option<BandClass> {
    match v {
        "low" => Some(BandClass::Low),
        "medium" | "mid" | "normal" => Some(BandClass::Medium),
        "high" => Some(BandClass::High),
        _ => None,
    }
}

fn parse_loudness_flag(v: &str) -> Option<LoudnessFlag> {
    match v {
        "ok" | "none" | "fine" | "false" => Some(LoudnessFlag::Ok),
        "too_loud" | "too loud" | "loud" => Some(LoudnessFlag::TooLoud),
        "too_quiet" | "too quiet" | "quiet" => Some(LoudnessFlag::TooQuiet),
        _ => None,
    }
}

fn parse_number(v: &str) -> Option<f64> {
    match v {
        "-inf" | "-infinity" => Some(f64::NEG_INFINITY),
        _ => v.parse::<f64>().ok().filter(|x| x.is_finite()),
    }
}

/// Set `field` on `row` from a normalized cell. Returns false when the cell
/// is outside the vocabulary.
fn assign(row: &mut DatasetRow, field: Field, v: &str, invert: bool) -> bool {
    match field {
        Field::TrackKind => true,
        Field::Genre => {
            row.genre = Some(v.to_string());
            true
        }
        Field::IntegratedLufs => {
            row.integrated_lufs = parse_number(v);
            row.integrated_lufs.is_some()
        }
        Field::TruePeakDbtp => {
            row.true_peak_dbtp = parse_number(v);
            row.true_peak_dbtp.is_some()
        }
        Field::Clipping => {
            row.clipping = parse_clipping(v);
            row.clipping.is_some()
        }
        Field::MonoCompatible => {
            row.mono_compatible = parse_bool(v).map(|b| b != invert);
            row.mono_compatible.is_some()
        }
        Field::PhaseIssue => {
            row.phase_issue = parse_bool(v).map(|b| b != invert);
            row.phase_issue.is_some()
        }
        Field::Compression => {
            row.compression = parse_compression(v);
            row.compression.is_some()
        }
        Field::StereoField => {
            row.stereo_field = parse_stereo(v);
            row.stereo_field.is_some()
        }
        Field::TonalLow | Field::TonalLowMid | Field::TonalHighMid | Field::TonalHigh => {
            let k = Field::TONAL.iter().position(|&f| f == field).expect("tonal field");
            row.tonal[k] = parse_band(v);
            row.tonal[k].is_some()
        }
        Field::LoudnessIssue => {
            row.loudness_issue = parse_loudness_flag(v);
            row.loudness_issue.is_some()
        }
    }
}

fn is_missing(v: &str) -> bool {
    matches!(v, "" | "na" | "n/a" | "nan" | "null" | "none_given")
}

pub fn load_dataset(path: impl AsRef<Path>, mapping: &ColumnMapping) -> Result<DatasetTable, StatsError> {
    read_dataset(File::open(path)?, mapping)
}

pub fn read_dataset<R: Read>(reader: R, mapping: &ColumnMapping) -> Result<DatasetTable, StatsError> {
    let mut csv = csv::ReaderBuilder::new().flexible(true).trim(csv::Trim::All).from_reader(reader);
    let headers: HashMap<String, usize> = csv
        .headers()?
        .iter()
        .enumerate()
        .map(|(i, h)| (normalize(h.trim_start_matches('\u{feff}')), i))
        .collect();

    let mut table = DatasetTable::default();
    let mut bound: Vec<(Field, usize, bool)> = Vec::new();
    let mut kind_col = None;
    for field in Field::ALL {
        let (column, explicit) = mapping.column_for(field);
        match headers.get(&normalize(column)) {
            Some(&idx) => {
                if field == Field::TrackKind {
                    kind_col = Some(idx);
                }
                bound.push((field, idx, mapping.invert.get(&field).copied().unwrap_or(false)));
            }
            None if explicit || field == Field::TrackKind => {
                return Err(StatsError::MissingColumn { field, column: column.to_string() });
            }
            None => table.missing_fields.push(field),
        }
    }
    let kind_col = kind_col.expect("track kind is bound");

    let mut record = csv::StringRecord::new();
    while csv.read_record(&mut record)? {
        if record.iter().all(str::is_empty) {
            continue;
        }
        table.raw_rows += 1;
        let kind = record
            .get(kind_col)
            .map(|raw| mapping.alias(Field::TrackKind, raw))
            .and_then(|v| v.parse::<TrackKind>().ok());
        let Some(kind) = kind else {
            table.dropped_rows += 1;
            continue;
        };
        let mut row = DatasetRow::empty(kind);
        for &(field, idx, invert) in &bound {
            let value = mapping.alias(field, record.get(idx).unwrap_or(""));
            if is_missing(&value) {
                continue;
            }
            if !assign(&mut row, field, &value, invert) {
                *table.invalid_values.entry(field).or_insert(0) += 1;
            }
        }
        table.rows.push(row);
    }
    if table.raw_rows == 0 {
        return Err(StatsError::EmptyFile);
    }
    Ok(table)
}

/// What is in a CSV's columns, to help write a [`ColumnMapping`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HeaderReport {
    pub rows_scanned: u64,
    pub columns: Vec<ColumnSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ColumnSummary {
    pub name: String,
    pub non_empty: u64,
    pub distinct_values: usize,
    /// Up to eight distinct values, in first-appearance order.
    pub samples: Vec<String>,
    /// The canonical field this column would bind to without a mapping.
    pub default_binding: Option<Field>,
}

const SAMPLE_LIMIT: usize = 8;
const DISTINCT_LIMIT: usize = 1000;

pub fn header_report<R: Read>(reader: R, max_rows: u64) -> Result<HeaderReport, StatsError> {
    let mut csv = csv::ReaderBuilder::new().flexible(true).trim(csv::Trim::All).from_reader(reader);
    let names: Vec<String> = csv.headers()?.iter().map(|h| h.trim_start_matches('\u{feff}').to_string()).collect();
    let mut non_empty = vec![0u64; names.len()];
    let mut distinct: Vec<Vec<String>> = vec![Vec::new(); names.len()];
    let mut rows = 0;
    let mut record = csv::StringRecord::new();
    while rows < max_rows && csv.read_record(&mut record)? {
        rows += 1;
        for (i, cell) in record.iter().enumerate().take(names.len()) {
            if cell.is_empty() {
                continue;
            }
            non_empty[i] += 1;
            if distinct[i].len() < DISTINCT_LIMIT && !distinct[i].iter().any(|d| d == cell) {
                distinct[i].push(cell.to_string());
            }
        }
    }
    if rows == 0 {
        return Err(StatsError::EmptyFile);
    }
    let columns = names
        .into_iter()
        .zip(non_empty)
        .zip(distinct)
        .map(|((name, non_empty), values)| ColumnSummary {
            default_binding: Field::ALL.into_iter().find(|f| f.as_str() == normalize(&name)),
            name,
            non_empty,
            distinct_values: values.len(),
            samples: values.into_iter().take(SAMPLE_LIMIT).collect(),
        })
        .collect();
    Ok(HeaderReport { rows_scanned: rows, columns })
}

impl fmt::Display for HeaderReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} rows scanned, {} columns", self.rows_scanned, self.columns.len())?;
        for c in &self.columns {
            let binding = c.default_binding.map(|b| format!(" -> {b}")).unwrap_or_default();
            let more = if c.distinct_values > c.samples.len() { ", ..." } else { "" };
            writeln!(
                f,
                "  {:<24} {:>8} non-empty, {:>4}{} distinct: {}{}{}",
                c.name,
                c.non_empty,
                c.distinct_values,
                if c.distinct_values >= DISTINCT_LIMIT { "+" } else { "" },
                c.samples.join(" | "),
                more,
                binding
            )?;
        }
        Ok(())
    }
}
