//! Corpus statistics over a per-track metrics table.

mod chisq;
mod dataset;
mod svg;
mod tables;

use thiserror::Error;

use crate::report::RankError;

pub use chisq::{
    chi_square_sf, chi_square_test, cramers_v, gamma_q, ln_gamma, ChiSquareResult, ContingencyTable,
};
pub use dataset::{
    header_report, load_dataset, read_dataset, ColumnMapping, ColumnSummary, DatasetRow, DatasetTable, Field,
    HeaderReport, LoudnessFlag,
};
pub use svg::{render_bar_chart_svg, render_histogram_svg, render_histograms_svg, BarChart, ChartLabels, Series};
pub use tables::{
    crosstab, crosstab_pairs, frequency_distribution, histogram_of, histogram_range, loudness_histogram, rank_dataset,
    row_issue_inputs, threshold_exceedance, CategoryShare, Crosstab, Direction, Exceedance, FrequencyGroup, GroupBy,
    GroupKey, Histogram,
};

#[derive(Debug, Error)]
pub enum StatsError {
    #[error("cannot read dataset: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("dataset has a header but no rows")]
    EmptyFile,
    #[error("column `{column}` for field {field} not found in the header")]
    MissingColumn { field: Field, column: String },
    #[error("bad column mapping: {0}")]
    Mapping(String),
    #[error("unknown field `{0}`")]
    UnknownField(String),
    #[error("field {field} is not {expected}")]
    WrongFieldType { field: Field, expected: &'static str },
    #[error("table is {rows}x{cols} after dropping empty rows and columns; need at least 2x2")]
    DegenerateTable { rows: usize, cols: usize },
    #[error("counts do not match the label dimensions")]
    ShapeMismatch,
    #[error("nothing to plot")]
    EmptySeries,
    #[error("{0}")]
    BadParameter(String),
    #[error(transparent)]
    Rank(#[from] RankError),
}
