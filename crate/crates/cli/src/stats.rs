use std::fs::File;

use mixqa::analysis::TrackKind;
use mixqa::stats::{
    chi_square_test, cramers_v, crosstab, frequency_distribution, header_report, load_dataset, loudness_histogram,
    rank_dataset, render_bar_chart_svg, render_histograms_svg, threshold_exceedance, BarChart, ChartLabels,
    ColumnMapping, DatasetTable, Direction, Field, GroupBy, Histogram, Series, StatsError,
};
use serde::Serialize;
use serde_json::json;

use crate::args::{AnalysisName, DirectionArg, GroupByArg, HeadersArgs, StatsArgs, StatsFormat};
use crate::config::load_config_file;
use crate::output::{emit, json_bytes};
use crate::CliError;

fn kind_label(kind: Option<TrackKind>) -> &'static str {
    kind.map_or("all", TrackKind::as_str)
}

fn parse_field(name: Option<&str>, flag: &str) -> Result<Field, CliError> {
    let name = name.ok_or_else(|| CliError::Usage(format!("this analysis needs --{flag}")))?;
    name.parse().map_err(|e: StatsError| CliError::Usage(e.to_string()))
}

/// Data-dependent failures are input errors; asking for the wrong kind of
/// field is a usage error.
fn stats_err(e: StatsError) -> CliError {
    match e {
        StatsError::UnknownField(_) | StatsError::WrongFieldType { .. } | StatsError::BadParameter(_) => {
            CliError::Usage(e.to_string())
        }
        other => CliError::Input(other.to_string()),
    }
}

fn require(table: &DatasetTable, field: Field) -> Result<(), CliError> {
    if table.has_field(field) {
        Ok(())
    } else {
        Err(CliError::Input(format!("not reproducible: the dataset has no column for `{field}`")))
    }
}

fn pick_format(requested: Option<StatsFormat>, default: StatsFormat, allowed: &[StatsFormat]) -> Result<StatsFormat, CliError> {
    let f = requested.unwrap_or(default);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        Err(CliError::Usage(format!("format {f:?} is not available for this analysis").to_lowercase()))
    }
}

fn csv_bytes(header: &[&str], rows: Vec<Vec<String>>) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    w.into_inner().expect("in-memory write")
}

pub fn run_headers(args: HeadersArgs) -> Result<(), CliError> {
    let file = File::open(&args.data).map_err(|e| CliError::Input(format!("{}: {e}", args.data.display())))?;
    let report = header_report(file, args.rows).map_err(|e| CliError::Input(e.to_string()))?;
    if args.json {
        emit(None, &json_bytes(&report))
    } else {
        emit(None, report.to_string().as_bytes())
    }
}

pub fn run_stats(args: StatsArgs) -> Result<(), CliError> {
    let mapping = match &args.mapping {
        Some(p) => ColumnMapping::load(p).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?,
        None => ColumnMapping::default(),
    };
    let table = load_dataset(&args.data, &mapping).map_err(|e| CliError::Input(format!("{}: {e}", args.data.display())))?;
    eprintln!(
        "mixqa: {} rows read, {} loaded ({} mixes, {} masters), {} dropped for an unrecognized kind",
        table.raw_rows,
        table.rows.len(),
        table.count_kind(TrackKind::Mix),
        table.count_kind(TrackKind::Master),
        table.dropped_rows
    );
    for (field, n) in &table.invalid_values {
        eprintln!("mixqa: {n} values of {field} outside the vocabulary treated as missing");
    }
    let kind = args.kind.map(TrackKind::from);

    let bytes = match args.analysis {
        AnalysisName::Freq => freq(&args, &table, kind)?,
        AnalysisName::Crosstab => crosstab_cmd(&args, &table, kind)?,
        AnalysisName::Chi2 | AnalysisName::CramersV => association(&args, &table, kind)?,
        AnalysisName::Exceedance => exceedance(&args, &table, kind)?,
        AnalysisName::Histogram => histogram(&args, &table, kind)?,
        AnalysisName::Rank => rank(&args, &table, kind)?,
    };
    emit(args.out.as_deref(), &bytes)
}

fn freq(args: &StatsArgs, table: &DatasetTable, kind: Option<TrackKind>) -> Result<Vec<u8>, CliError> {
    let field = parse_field(args.field.as_deref(), "field")?;
    require(table, field)?;
    let group_by = GroupBy {
        kind: args.group_by.contains(&GroupByArg::Kind),
        genre: args.group_by.contains(&GroupByArg::Genre),
    };
    let groups = frequency_distribution(table, field, group_by, kind).map_err(stats_err)?;
    let excluded: u64 = groups.iter().map(|g| g.excluded).sum();
    eprintln!("mixqa: {field}: {excluded} rows excluded for a missing value");
    let format = pick_format(args.format, StatsFormat::Csv, &[StatsFormat::Csv, StatsFormat::Json, StatsFormat::Svg])?;
    Ok(match format {
        StatsFormat::Json => json_bytes(&json!({ "field": field, "kind": kind_label(kind), "groups": groups })),
        StatsFormat::Csv => csv_bytes(
            &["group", "category", "count", "proportion", "group_total", "group_excluded"],
            groups
                .iter()
                .flat_map(|g| {
                    g.categories.iter().map(move |c| {
                        vec![
                            g.group.to_string(),
                            c.category.clone(),
                            c.count.to_string(),
                            c.proportion.to_string(),
                            g.total.to_string(),
                            g.excluded.to_string(),
                        ]
                    })
                })
                .collect(),
        ),
        StatsFormat::Svg => {
            let categories = groups.first().map(|g| g.categories.iter().map(|c| c.category.clone()).collect()).unwrap_or_default();
            let chart = BarChart {
                categories,
                series: groups
                    .iter()
                    .map(|g| Series {
                        name: g.group.to_string(),
                        values: g.categories.iter().map(|c| 100.0 * c.proportion).collect(),
                    })
                    .collect(),
            };
            let labels = ChartLabels {
                title: format!("{field} ({})", kind_label(kind)),
                x_label: field.to_string(),
                y_label: "percent of tracks".into(),
            };
            render_bar_chart_svg(&chart, &labels).map_err(stats_err)?
        }
    })
}

fn crosstab_cmd(args: &StatsArgs, table: &DatasetTable, kind: Option<TrackKind>) -> Result<Vec<u8>, CliError> {
    let (a, b) = (parse_field(args.a.as_deref(), "a")?, parse_field(args.b.as_deref(), "b")?);
    require(table, a)?;
    require(table, b)?;
    let ct = crosstab(table, a, b, kind).map_err(stats_err)?;
    eprintln!("mixqa: {a} x {b}: n = {}, {} rows excluded for a missing value", ct.table.n, ct.excluded);
    let t = &ct.table;
    let format = pick_format(args.format, StatsFormat::Csv, &[StatsFormat::Csv, StatsFormat::Json, StatsFormat::Svg])?;
    Ok(match format {
        StatsFormat::Json => json_bytes(&json!({ "a": a, "b": b, "kind": kind_label(kind), "excluded": ct.excluded, "table": t })),
        StatsFormat::Csv => {
            let corner = format!("{a}\\{b}");
            let mut header = vec![corner.as_str()];
            header.extend(t.col_labels.iter().map(String::as_str));
            let rows = t
                .row_labels
                .iter()
                .zip(&t.counts)
                .map(|(label, counts)| std::iter::once(label.clone()).chain(counts.iter().map(u64::to_string)).collect())
                .collect();
            csv_bytes(&header, rows)
        }
        StatsFormat::Svg => {
            // one series per row category, as percentages of that row
            let chart = BarChart {
                categories: t.col_labels.clone(),
                series: t
                    .row_labels
                    .iter()
                    .zip(t.row_proportions())
                    .map(|(name, p)| Series { name: name.clone(), values: p.iter().map(|v| 100.0 * v).collect() })
                    .collect(),
            };
            let labels = ChartLabels {
                title: format!("{b} by {a} ({})", kind_label(kind)),
                x_label: b.to_string(),
                y_label: format!("percent within {a}"),
            };
            render_bar_chart_svg(&chart, &labels).map_err(stats_err)?
        }
    })
}

fn association(args: &StatsArgs, table: &DatasetTable, kind: Option<TrackKind>) -> Result<Vec<u8>, CliError> {
    let (a, b) = (parse_field(args.a.as_deref(), "a")?, parse_field(args.b.as_deref(), "b")?);
    require(table, a)?;
    require(table, b)?;
    pick_format(args.format, StatsFormat::Json, &[StatsFormat::Json])?;
    let ct = crosstab(table, a, b, kind).map_err(stats_err)?;
    let chi = chi_square_test(&ct.table).map_err(stats_err)?;
    let v = cramers_v(&ct.table).map_err(stats_err)?;
    eprintln!("mixqa: {a} x {b}: n = {}, {} rows excluded for a missing value", ct.table.n, ct.excluded);
    let mut doc = json!({
        "a": a,
        "b": b,
        "kind": kind_label(kind),
        "n": ct.table.n,
        "excluded": ct.excluded,
        "statistic": chi.statistic,
        "dof": chi.dof,
        "p_value": chi.p_value,
        "cramers_v": v,
    });
    if args.analysis == AnalysisName::Chi2 {
        doc["row_labels"] = json!(chi.table.row_labels);
        doc["col_labels"] = json!(chi.table.col_labels);
        doc["observed"] = json!(chi.table.counts);
        doc["expected"] = json!(chi.expected);
        doc["standardized_residuals"] = json!(chi.residuals);
    }
    Ok(json_bytes(&doc))
}

fn exceedance(args: &StatsArgs, table: &DatasetTable, kind: Option<TrackKind>) -> Result<Vec<u8>, CliError> {
    let field = parse_field(args.field.as_deref(), "field")?;
    let threshold = args.threshold.ok_or_else(|| CliError::Usage("exceedance needs --threshold".into()))?;
    let direction = match args.direction.unwrap_or(DirectionArg::Above) {
        DirectionArg::Above => Direction::Above,
        DirectionArg::Below => Direction::Below,
        DirectionArg::AtOrAbove => Direction::AtOrAbove,
        DirectionArg::AtOrBelow => Direction::AtOrBelow,
    };
    require(table, field)?;
    let e = threshold_exceedance(table, field, threshold, direction, kind).map_err(stats_err)?;
    eprintln!("mixqa: {field}: {} rows excluded for a missing value", e.excluded);
    #[derive(Serialize)]
    struct Out<'a> {
        field: Field,
        kind: &'a str,
        threshold: f64,
        direction: Direction,
        percentage: f64,
        count: u64,
        denominator: u64,
        excluded: u64,
    }
    let out = Out {
        field,
        kind: kind_label(kind),
        threshold,
        direction,
        percentage: e.percentage,
        count: e.count,
        denominator: e.denominator,
        excluded: e.excluded,
    };
    Ok(match pick_format(args.format, StatsFormat::Json, &[StatsFormat::Json, StatsFormat::Csv])? {
        StatsFormat::Csv => csv_bytes(
            &["field", "kind", "threshold", "direction", "percentage", "count", "denominator", "excluded"],
            vec![vec![
                field.to_string(),
                out.kind.to_string(),
                threshold.to_string(),
                serde_json::to_value(direction).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default(),
                e.percentage.to_string(),
                e.count.to_string(),
                e.denominator.to_string(),
                e.excluded.to_string(),
            ]],
        ),
        _ => json_bytes(&out),
    })
}

fn histogram(args: &StatsArgs, table: &DatasetTable, kind: Option<TrackKind>) -> Result<Vec<u8>, CliError> {
    let field = parse_field(Some(args.field.as_deref().unwrap_or("integrated_lufs")), "field")?;
    require(table, field)?;
    let kinds: Vec<TrackKind> = match kind {
        Some(k) => vec![k],
        None => TrackKind::ALL.into_iter().filter(|&k| table.count_kind(k) > 0).collect(),
    };
    let hists: Vec<(TrackKind, Histogram)> = kinds
        .iter()
        .map(|&k| loudness_histogram(table, field, Some(k), args.bin_width).map(|h| (k, h)))
        .collect::<Result<_, _>>()
        .map_err(stats_err)?;
    for (k, h) in &hists {
        let mode = h.mode_bin().map(|(lo, hi)| format!("[{lo}, {hi})")).unwrap_or_else(|| "none".into());
        eprintln!(
            "mixqa: {field} {k}: {} in range, {} out of range, {} missing; mode bin {mode}",
            h.in_range(),
            h.out_of_range,
            h.excluded
        );
    }
    Ok(match pick_format(args.format, StatsFormat::Svg, &[StatsFormat::Svg, StatsFormat::Csv, StatsFormat::Json])? {
        StatsFormat::Svg => {
            let unit = if field == Field::IntegratedLufs { "LUFS" } else { "dBTP" };
            let series: Vec<(&str, &Histogram)> = hists.iter().map(|(k, h)| (k.as_str(), h)).collect();
            let labels = ChartLabels {
                title: format!("{field} distribution"),
                x_label: unit.into(),
                y_label: format!("density per {unit}"),
            };
            render_histograms_svg(&series, &labels).map_err(stats_err)?
        }
        StatsFormat::Csv => csv_bytes(
            &["kind", "lo", "hi", "count", "density"],
            hists
                .iter()
                .flat_map(|(k, h)| {
                    (0..h.counts.len()).map(move |i| {
                        vec![
                            k.to_string(),
                            h.edges[i].to_string(),
                            h.edges[i + 1].to_string(),
                            h.counts[i].to_string(),
                            h.densities[i].to_string(),
                        ]
                    })
                })
                .collect(),
        ),
        StatsFormat::Json => json_bytes(
            &hists.iter().map(|(k, h)| json!({ "kind": k, "histogram": h, "mode_bin": h.mode_bin() })).collect::<Vec<_>>(),
        ),
    })
}

fn rank(args: &StatsArgs, table: &DatasetTable, kind: Option<TrackKind>) -> Result<Vec<u8>, CliError> {
    let config = load_config_file(args.config.as_deref())?;
    let kinds: Vec<TrackKind> = match kind {
        Some(k) => vec![k],
        None => TrackKind::ALL.into_iter().filter(|&k| table.count_kind(k) > 0).collect(),
    };
    let source = if table.has_field(Field::LoudnessIssue) { "loudness_issue column" } else { "integrated_lufs thresholds" };
    eprintln!("mixqa: loudness issues taken from the {source}");
    let mut rankings = Vec::new();
    for k in kinds {
        rankings.push((k, rank_dataset(table, Some(k), &config.issues).map_err(stats_err)?));
    }
    Ok(match pick_format(args.format, StatsFormat::Csv, &[StatsFormat::Csv, StatsFormat::Json])? {
        StatsFormat::Json => json_bytes(
            &rankings.iter().map(|(k, r)| json!({ "kind": k, "issues": r })).collect::<Vec<_>>(),
        ),
        _ => csv_bytes(
            &["kind", "rank", "issue", "count", "prevalence"],
            rankings
                .iter()
                .flat_map(|(k, r)| {
                    r.iter().enumerate().map(move |(i, p)| {
                        vec![k.to_string(), (i + 1).to_string(), p.issue.to_string(), p.count.to_string(), p.prevalence.to_string()]
                    })
                })
                .collect(),
        ),
    })
}
