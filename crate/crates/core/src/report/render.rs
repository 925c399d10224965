use std::fmt::Write as _;

use serde::Serialize;

use super::{AnalysisReport, Section};
use crate::analysis::BAND_NAMES;

/// Bumped whenever a field is added, removed or changes meaning.
pub const SCHEMA_VERSION: &str = "1.0";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Text,
}

#[derive(Serialize)]
struct Envelope<'a> {
    schema_version: &'static str,
    #[serde(flatten)]
    report: &'a AnalysisReport,
}

fn round_to(x: f64, decimals: i32) -> f64 {
    if !x.is_finite() {
        return x;
    }
    let scale = 10f64.powi(decimals);
    let r = (x * scale).round() / scale;
    // avoid "-0.0"
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// A copy with every metric rounded to its published precision: LUFS and dBTP
/// to 0.1, other decibel values to 0.01, ratios, fractions and radians to 0.001.
pub fn rounded(report: &AnalysisReport) -> AnalysisReport {
    let mut r = report.clone();
    r.file_meta.duration_secs = round_to(r.file_meta.duration_secs, 3);
    if let Section::Measured(l) = &mut r.loudness {
        l.integrated_lufs = l.integrated_lufs.map(|v| round_to(v, 1));
        l.true_peak_dbtp = round_to(l.true_peak_dbtp, 1);
    }
    if let Section::Measured(c) = &mut r.compression {
        c.dynamic_range_db = round_to(c.dynamic_range_db, 2);
    }
    if let Section::Measured(s) = &mut r.stereo {
        s.ild_db = round_to(s.ild_db, 2);
        s.side_mid_energy_ratio_db = round_to(s.side_mid_energy_ratio_db, 2);
    }
    if let Section::Measured(m) = &mut r.mono_compat {
        m.mid_side_correlation = round_to(m.mid_side_correlation, 3);
        m.folddown_loss_db = round_to(m.folddown_loss_db, 2);
    }
    if let Section::Measured(p) = &mut r.phase {
        p.mean_abs_phase_diff_rad = round_to(p.mean_abs_phase_diff_rad, 3);
    }
    if let Section::Measured(t) = &mut r.tonal {
        t.band_energy_fraction = t.band_energy_fraction.map(|v| round_to(v, 3));
    }
    r
}

pub fn render_report(report: &AnalysisReport, format: ReportFormat) -> Vec<u8> {
    match format {
        ReportFormat::Json => {
            let envelope = Envelope { schema_version: SCHEMA_VERSION, report: &rounded(report) };
            let mut out = serde_json::to_vec_pretty(&envelope).expect("report serializes");
            out.push(b'\n');
            out
        }
        ReportFormat::Text => render_text(&rounded(report)).into_bytes(),
    }
}

fn fmt_db(x: f64, decimals: usize) -> String {
    if x.is_finite() {
        format!("{x:.decimals$}")
    } else if x > 0.0 {
        "+inf".to_string()
    } else {
        "-inf".to_string()
    }
}

fn section_line<T>(out: &mut String, label: &str, section: &Section<T>, body: impl FnOnce(&T) -> String) {
    let text = match section {
        Section::Measured(v) => body(v),
        Section::NotApplicable => "n/a (mono input)".to_string(),
        Section::Failed(e) => format!("not measured ({e})"),
    };
    let _ = writeln!(out, "  {label:<16}{text}");
}

fn render_text(r: &AnalysisReport) -> String {
    let mut out = String::new();
    let m = &r.file_meta;
    let _ = writeln!(out, "Track: {}", r.track_id);
    let _ = writeln!(out, "Kind: {}   Genre: {}", r.kind, r.genre);
    let _ = writeln!(
        out,
        "Format: {} Hz, {}-bit, {} ch, {:.3} s",
        m.sample_rate, m.bit_depth, m.channel_count, m.duration_secs
    );
    out.push_str("\nMetrics\n");
    section_line(&mut out, "Loudness", &r.loudness, |l| {
        let integrated = match l.integrated_lufs {
            Some(v) => format!("{v:.1} LUFS"),
            None => "undefined (fully gated)".to_string(),
        };
        format!("{integrated}, true peak {} dBTP", fmt_db(l.true_peak_dbtp, 1))
    });
    let _ = writeln!(
        out,
        "  {:<16}{} ({} samples)",
        "Clipping", r.clipping.severity, r.clipping.clipped_sample_count
    );
    section_line(&mut out, "Dynamics", &r.compression, |c| {
        format!("{:.2} dB, {} for {}", c.dynamic_range_db, c.verdict, c.genre_used)
    });
    section_line(&mut out, "Stereo width", &r.stereo, |s| {
        format!("{}, side/mid {} dB, ILD {:.2} dB", s.category, fmt_db(s.side_mid_energy_ratio_db, 2), s.ild_db)
    });
    section_line(&mut out, "Mono fold-down", &r.mono_compat, |mc| {
        format!(
            "{}, loss {} dB, M/S correlation {:.3}",
            if mc.compatible { "compatible" } else { "incompatible" },
            fmt_db(mc.folddown_loss_db, 2),
            mc.mid_side_correlation
        )
    });
    section_line(&mut out, "Phase", &r.phase, |p| {
        format!(
            "mean |dphi| {:.3} rad{}",
            p.mean_abs_phase_diff_rad,
            if p.has_issue { ", out of phase" } else { "" }
        )
    });
    section_line(&mut out, "Tonal balance", &r.tonal, |t| {
        BAND_NAMES
            .iter()
            .zip(t.band_energy_fraction.iter().zip(&t.band_class))
            .map(|(name, (f, c))| format!("{name} {f:.3} ({c})"))
            .collect::<Vec<_>>()
            .join(", ")
    });

    out.push_str("\nIssues\n");
    if r.issues.is_empty() {
        out.push_str("  No issues detected.\n");
    }
    for issue in &r.issues {
        let _ = writeln!(out, "  - {}: {}", issue.label(), issue.advice());
    }
    out
}
