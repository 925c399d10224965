//! Minimal, dependency-free SVG bar charts.
//!
//! Bars are the only `rect` elements in the output; legend swatches and axes
//! use `path` and `line`, so tests can count bars structurally.

use std::fmt::Write as _;

use super::tables::Histogram;
use super::StatsError;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 64.0;
const RIGHT: f64 = 24.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 64.0;
const PALETTE: [&str; 6] = ["#3b6ea5", "#d9822b", "#5a9e4b", "#b8455a", "#7d5ba6", "#8c7a5b"];

#[derive(Debug, Clone, PartialEq)]
pub struct ChartLabels {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub values: Vec<f64>,
}

/// Categories along x, one bar per series in each category.
#[derive(Debug, Clone, PartialEq)]
pub struct BarChart {
    pub categories: Vec<String>,
    pub series: Vec<Series>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// A "nice" axis maximum and tick step covering `max`.
fn nice_scale(max: f64) -> (f64, f64) {
    if !(max > 0.0) {
        return (1.0, 0.25);
    }
    let raw = max / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 2.5, 5.0, 10.0].iter().map(|m| m * mag).find(|&s| s >= raw).unwrap_or(10.0 * mag);
    ((max / step).ceil() * step, step)
}

fn fmt_tick(v: f64) -> String {
    let s = format!("{v:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".to_string() } else { s.to_string() }
}

pub fn render_bar_chart_svg(chart: &BarChart, labels: &ChartLabels) -> Result<Vec<u8>, StatsError> {
    let n_cat = chart.categories.len();
    if n_cat == 0 || chart.series.is_empty() || chart.series.iter().any(|s| s.values.len() != n_cat) {
        return Err(StatsError::EmptySeries);
    }
    let max = chart.series.iter().flat_map(|s| &s.values).cloned().filter(|v| v.is_finite()).fold(0.0, f64::max);
    let (y_max, step) = nice_scale(max);
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let y_of = |v: f64| TOP + plot_h * (1.0 - v / y_max);
    let slot = plot_w / n_cat as f64;
    let gap = if chart.series.len() > 1 || n_cat <= 12 { slot * 0.15 } else { 0.0 };
    let bar_w = (slot - 2.0 * gap) / chart.series.len() as f64;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<title>{}</title>"#, escape(&labels.title));
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="22" text-anchor="middle" font-size="15">{}</text>"#,
        WIDTH / 2.0,
        escape(&labels.title)
    );

    // y grid and ticks
    let mut tick = 0.0;
    while tick <= y_max + step * 1e-9 {
        let y = y_of(tick);
        let _ = writeln!(
            out,
            r##"<line x1="{LEFT:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#ddd"/>"##,
            WIDTH - RIGHT
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            LEFT - 6.0,
            y + 4.0,
            fmt_tick(tick)
        );
        tick += step;
    }

    for (s, series) in chart.series.iter().enumerate() {
        let color = PALETTE[s % PALETTE.len()];
        let _ = writeln!(out, r#"<g fill="{color}">"#);
        for (c, &v) in series.values.iter().enumerate() {
            let v = if v.is_finite() { v.max(0.0) } else { 0.0 };
            let x = LEFT + c as f64 * slot + gap + s as f64 * bar_w;
            let y = y_of(v);
            let _ = writeln!(
                out,
                r#"<rect x="{x:.2}" y="{y:.2}" width="{bar_w:.2}" height="{:.2}"><title>{}: {}</title></rect>"#,
                TOP + plot_h - y,
                escape(&chart.categories[c]),
                fmt_tick(v)
            );
        }
        let _ = writeln!(out, "</g>");
    }

    // x labels, thinned so they do not overlap
    let every = (n_cat as f64 / (plot_w / 48.0)).ceil().max(1.0) as usize;
    for (c, cat) in chart.categories.iter().enumerate().step_by(every) {
        let x = LEFT + (c as f64 + 0.5) * slot;
        let _ = writeln!(
            out,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            TOP + plot_h + 16.0,
            escape(cat)
        );
    }

    let _ = writeln!(
        out,
        r##"<line x1="{LEFT:.2}" y1="{TOP:.2}" x2="{LEFT:.2}" y2="{:.2}" stroke="#333"/>"##,
        TOP + plot_h
    );
    let _ = writeln!(
        out,
        r##"<line x1="{LEFT:.2}" y1="{0:.2}" x2="{1:.2}" y2="{0:.2}" stroke="#333"/>"##,
        TOP + plot_h,
        WIDTH - RIGHT
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 16.0,
        escape(&labels.x_label)
    );
    let _ = writeln!(
        out,
        r#"<text x="16" y="{0:.2}" text-anchor="middle" transform="rotate(-90 16 {0:.2})">{1}</text>"#,
        TOP + plot_h / 2.0,
        escape(&labels.y_label)
    );

    if chart.series.len() > 1 {
        for (s, series) in chart.series.iter().enumerate() {
            let x = WIDTH - RIGHT - 140.0;
            let y = TOP + 8.0 + s as f64 * 18.0;
            let _ = writeln!(
                out,
                r#"<path d="M{x:.2} {:.2}h12v12h-12z" fill="{}"/><text x="{:.2}" y="{:.2}">{}</text>"#,
                y - 10.0,
                PALETTE[s % PALETTE.len()],
                x + 18.0,
                y,
                escape(&series.name)
            );
        }
    }
    out.push_str("</svg>\n");
    Ok(out.into_bytes())
}

/// A histogram as a one-series bar chart labelled by lower bin edge.
pub fn render_histogram_svg(histogram: &Histogram, labels: &ChartLabels) -> Result<Vec<u8>, StatsError> {
    render_histograms_svg(&[("density", histogram)], labels)
}

/// Several histograms with identical edges, drawn as grouped series.
pub fn render_histograms_svg(series: &[(&str, &Histogram)], labels: &ChartLabels) -> Result<Vec<u8>, StatsError> {
    let first = series.first().ok_or(StatsError::EmptySeries)?.1;
    if series.iter().any(|(_, h)| h.edges != first.edges) {
        return Err(StatsError::BadParameter("histograms must share bin edges".into()));
    }
    let chart = BarChart {
        categories: first.edges[..first.edges.len() - 1].iter().map(|&e| fmt_tick(e)).collect(),
        series: series
            .iter()
            .map(|(name, h)| Series { name: name.to_string(), values: h.densities.clone() })
            .collect(),
    };
    render_bar_chart_svg(&chart, labels)
}
