use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mixqa::analysis::TrackKind;

#[derive(Debug, Parser)]
#[command(name = "mixqa", version, about = "Mix and master quality analysis")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Analyze one WAV file and print its report.
    Analyze(AnalyzeArgs),
    /// Analyze a directory of WAV files or a manifest CSV and rank issues.
    Batch(BatchArgs),
    /// Run a statistical analysis over a metrics dataset.
    Stats(StatsArgs),
    /// Summarize a dataset's columns to help write a column mapping.
    Headers(HeadersArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Mix,
    Master,
}

impl From<KindArg> for TrackKind {
    fn from(k: KindArg) -> TrackKind {
        match k {
            KindArg::Mix => TrackKind::Mix,
            KindArg::Master => TrackKind::Master,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormatArg {
    Json,
    Text,
}

/// Settings shared by `analyze` and `batch`.
#[derive(Debug, Clone, Args)]
pub struct AnalysisOptions {
    /// Genre used for dynamics and tonal targets.
    #[arg(long, default_value = "default")]
    pub genre: String,

    #[arg(long, value_enum, default_value = "json")]
    pub format: ReportFormatArg,

    /// Analysis config file (TOML).
    #[arg(long, env = "MIXQA_CONFIG")]
    pub config: Option<PathBuf>,

    /// Genre profile file (TOML); overrides `profiles` in the config.
    #[arg(long)]
    pub profiles: Option<PathBuf>,

    #[command(flatten)]
    pub thresholds: ThresholdOverrides,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ThresholdOverrides {
    /// Mixes louder than this (LUFS) are too loud.
    #[arg(long, allow_hyphen_values = true, value_name = "LUFS")]
    pub mix_too_loud: Option<f64>,
    /// Mixes quieter than this (LUFS) are too quiet.
    #[arg(long, allow_hyphen_values = true, value_name = "LUFS")]
    pub mix_too_quiet: Option<f64>,
    /// Masters louder than this (LUFS) are too loud.
    #[arg(long, allow_hyphen_values = true, value_name = "LUFS")]
    pub master_too_loud: Option<f64>,
    /// Masters quieter than this (LUFS) are too quiet.
    #[arg(long, allow_hyphen_values = true, value_name = "LUFS")]
    pub master_too_quiet: Option<f64>,
    /// Mean absolute phase difference (rad) above which a phase issue is flagged.
    #[arg(long, value_name = "RAD")]
    pub phase_threshold: Option<f64>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    pub file: PathBuf,

    #[arg(long, value_enum)]
    pub kind: KindArg,

    #[command(flatten)]
    pub options: AnalysisOptions,

    /// Write the report here instead of standard output.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BatchArgs {
    /// A directory (searched recursively for .wav files) or a manifest CSV
    /// with columns path, kind, genre.
    pub input: PathBuf,

    /// Kind for files whose manifest row gives none.
    #[arg(long, value_enum)]
    pub kind: Option<KindArg>,

    #[command(flatten)]
    pub options: AnalysisOptions,

    /// Also write one report per track into this directory.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,

    /// Write the batch document here instead of standard output.
    #[arg(long, short)]
    pub out: Option<PathBuf>,

    /// Worker threads; defaults to the number of cores.
    #[arg(long, short = 'j', value_parser = clap::value_parser!(u16).range(1..))]
    pub parallelism: Option<u16>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AnalysisName {
    Freq,
    Crosstab,
    Chi2,
    #[value(name = "cramers_v", alias = "cramers-v")]
    CramersV,
    Exceedance,
    Histogram,
    Rank,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StatsFormat {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DirectionArg {
    Above,
    Below,
    AtOrAbove,
    AtOrBelow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GroupByArg {
    Kind,
    Genre,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    /// Dataset CSV.
    pub data: PathBuf,

    /// Column mapping file (TOML).
    #[arg(long)]
    pub mapping: Option<PathBuf>,

    #[arg(long, value_enum)]
    pub analysis: AnalysisName,

    /// Restrict to one track kind.
    #[arg(long, value_enum)]
    pub kind: Option<KindArg>,

    /// Field for freq, exceedance and histogram.
    #[arg(long)]
    pub field: Option<String>,

    /// Row field for crosstab, chi2 and cramers_v.
    #[arg(long)]
    pub a: Option<String>,

    /// Column field for crosstab, chi2 and cramers_v.
    #[arg(long)]
    pub b: Option<String>,

    /// Threshold for exceedance, in the field's unit
    #[arg(long, allow_hyphen_values = true)]
    pub threshold: Option<f64>,

    /// Side of the threshold to count [default: above]
    #[arg(long, value_enum)]
    pub direction: Option<DirectionArg>,

    /// Grouping for freq (repeatable or comma separated).
    #[arg(long, value_enum, value_delimiter = ',')]
    pub group_by: Vec<GroupByArg>,

    /// Histogram bin width in dB.
    #[arg(long, default_value_t = 1.0)]
    pub bin_width: f64,

    /// Output format; the default depends on the analysis.
    #[arg(long, value_enum)]
    pub format: Option<StatsFormat>,

    /// Analysis config (TOML) for rank thresholds.
    #[arg(long, env = "MIXQA_CONFIG")]
    pub config: Option<PathBuf>,

    /// Write the artifact here instead of standard output.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct HeadersArgs {
    pub data: PathBuf,

    /// Rows to scan.
    #[arg(long, default_value_t = 10_000)]
    pub rows: u64,

    #[arg(long)]
    pub json: bool,
}
