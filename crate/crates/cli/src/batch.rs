use std::fs;
use std::path::{Path, PathBuf};

use mixqa::analysis::{analyze_track, AnalysisConfig, TrackKind};
use mixqa::audio_io::decode_audio;
use mixqa::report::{rank_issues, render_report, rounded, AnalysisReport, IssuePrevalence, ReportFormat, SCHEMA_VERSION};
use rayon::prelude::*;
use serde::Serialize;

use crate::args::{AnalyzeArgs, BatchArgs, ReportFormatArg};
use crate::config::analysis_config;
use crate::output::{emit, json_bytes};
use crate::CliError;

fn report_format(f: ReportFormatArg) -> ReportFormat {
    match f {
        ReportFormatArg::Json => ReportFormat::Json,
        ReportFormatArg::Text => ReportFormat::Text,
    }
}

fn analyze_file(path: &Path, track_id: &str, kind: TrackKind, genre: &str, config: &AnalysisConfig) -> Result<AnalysisReport, String> {
    let (buffer, meta) = decode_audio(path).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(analyze_track(track_id, &buffer, &meta, kind, genre, config))
}

pub fn run_analyze(args: AnalyzeArgs) -> Result<(), CliError> {
    let config = analysis_config(&args.options)?;
    let track_id = args.file.display().to_string();
    let report = analyze_file(&args.file, &track_id, args.kind.into(), &args.options.genre, &config)
        .map_err(CliError::Input)?;
    emit(args.out.as_deref(), &render_report(&report, report_format(args.options.format)))
}

#[derive(Debug, Clone)]
struct Job {
    path: PathBuf,
    track_id: String,
    kind: Option<TrackKind>,
    genre: Option<String>,
}

fn is_wav(path: &Path) -> bool {
    path.extension().and_then(|e| e.to_str()).is_some_and(|e| e.eq_ignore_ascii_case("wav"))
}

fn walk(dir: &Path, root: &Path, jobs: &mut Vec<Job>) -> std::io::Result<()> {
    let mut entries: Vec<PathBuf> = fs::read_dir(dir)?.map(|e| e.map(|e| e.path())).collect::<Result<_, _>>()?;
    entries.sort();
    for path in entries {
        if path.is_dir() {
            walk(&path, root, jobs)?;
        } else if is_wav(&path) {
            let rel = path.strip_prefix(root).unwrap_or(&path);
            let track_id = rel.components().map(|c| c.as_os_str().to_string_lossy()).collect::<Vec<_>>().join("/");
            jobs.push(Job { path, track_id, kind: None, genre: None });
        }
    }
    Ok(())
}

fn read_manifest(path: &Path) -> Result<Vec<Job>, CliError> {
    let input_err = |e: &dyn std::fmt::Display| CliError::Input(format!("{}: {e}", path.display()));
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).flexible(true).from_path(path).map_err(|e| input_err(&e))?;
    let headers: Vec<String> = reader.headers().map_err(|e| input_err(&e))?.iter().map(|h| h.to_lowercase()).collect();
    let col = |name: &str| headers.iter().position(|h| h == name);
    let path_col = col("path").ok_or_else(|| input_err(&"manifest needs a `path` column"))?;
    let (kind_col, genre_col) = (col("kind"), col("genre"));
    let base = path.parent().unwrap_or(Path::new(""));

    let mut jobs = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| input_err(&e))?;
        let cell = |c: Option<usize>| c.and_then(|c| record.get(c)).filter(|v| !v.is_empty());
        let Some(raw) = cell(Some(path_col)) else { continue };
        let kind = match cell(kind_col) {
            Some(k) => Some(k.parse::<TrackKind>().map_err(|e| input_err(&format!("row {}: {e}", line + 2)))?),
            None => None,
        };
        let file = Path::new(raw);
        jobs.push(Job {
            path: if file.is_relative() { base.join(file) } else { file.to_path_buf() },
            track_id: raw.to_string(),
            kind,
            genre: cell(genre_col).map(str::to_string),
        });
    }
    Ok(jobs)
}

#[derive(Serialize)]
struct Failure {
    track_id: String,
    error: String,
}

#[derive(Serialize)]
struct Ranking {
    kind: &'static str,
    tracks: usize,
    issues: Vec<IssuePrevalence>,
}

#[derive(Serialize)]
struct BatchDocument {
    schema_version: &'static str,
    tracks_total: usize,
    tracks_analyzed: usize,
    reports: Vec<AnalysisReport>,
    failures: Vec<Failure>,
    ranking: Vec<Ranking>,
}

fn rankings(reports: &[AnalysisReport]) -> Vec<Ranking> {
    let mut out = Vec::new();
    let groups: [(&'static str, Option<TrackKind>); 3] =
        [("all", None), ("mix", Some(TrackKind::Mix)), ("master", Some(TrackKind::Master))];
    for (name, kind) in groups {
        let tracks = reports.iter().filter(|r| kind.is_none_or(|k| r.kind == k)).count();
        if let Ok(issues) = rank_issues(reports, kind) {
            out.push(Ranking { kind: name, tracks, issues });
        }
    }
    out
}

fn render_text(doc: &BatchDocument) -> Vec<u8> {
    let mut out = String::new();
    for report in &doc.reports {
        out.push_str(&String::from_utf8_lossy(&render_report(report, ReportFormat::Text)));
        out.push_str("\n----\n\n");
    }
    for f in &doc.failures {
        out.push_str(&format!("FAILED {}: {}\n", f.track_id, f.error));
    }
    out.push_str(&format!("\n{} of {} tracks analyzed\n", doc.tracks_analyzed, doc.tracks_total));
    for r in &doc.ranking {
        out.push_str(&format!("\nIssue ranking ({}, {} tracks)\n", r.kind, r.tracks));
        for (i, p) in r.issues.iter().enumerate() {
            out.push_str(&format!("  {}. {:<28} {:>6.2}%  ({})\n", i + 1, p.issue.label(), 100.0 * p.prevalence, p.count));
        }
    }
    out.into_bytes()
}

fn per_track_name(track_id: &str, format: ReportFormatArg) -> String {
    let stem: String = track_id
        .chars()
        .map(|c| if c == '/' || c == '\\' { '_' } else { c })
        .collect();
    let stem = stem.strip_suffix(".wav").or_else(|| stem.strip_suffix(".WAV")).unwrap_or(&stem).to_string();
    match format {
        ReportFormatArg::Json => format!("{stem}.json"),
        ReportFormatArg::Text => format!("{stem}.txt"),
    }
}

pub fn run_batch(args: BatchArgs) -> Result<(), CliError> {
    let config = analysis_config(&args.options)?;
    let is_manifest = args.input.is_file()
        && args.input.extension().and_then(|e| e.to_str()).is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    let mut jobs = if is_manifest {
        read_manifest(&args.input)?
    } else if args.input.is_dir() {
        if args.kind.is_none() {
            return Err(CliError::Usage("--kind is required when batching a directory".into()));
        }
        let mut jobs = Vec::new();
        walk(&args.input, &args.input, &mut jobs)
            .map_err(|e| CliError::Input(format!("{}: {e}", args.input.display())))?;
        jobs
    } else {
        return Err(CliError::Input(format!("{} is neither a directory nor a manifest CSV", args.input.display())));
    };
    jobs.sort_by(|a, b| a.track_id.cmp(&b.track_id));

    let default_kind = args.kind.map(TrackKind::from);
    let threads = args.parallelism.map(usize::from).unwrap_or(0);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))?;
    let results: Vec<Result<AnalysisReport, String>> = pool.install(|| {
        jobs.par_iter()
            .map(|job| {
                let kind = job
                    .kind
                    .or(default_kind)
                    .ok_or_else(|| "no kind in the manifest row and no --kind given".to_string())?;
                let genre = job.genre.as_deref().unwrap_or(&args.options.genre);
                analyze_file(&job.path, &job.track_id, kind, genre, &config)
            })
            .collect()
    });

    let mut reports = Vec::new();
    let mut failures = Vec::new();
    for (job, result) in jobs.iter().zip(results) {
        match result {
            Ok(r) => reports.push(r),
            Err(error) => {
                eprintln!("mixqa: skipped {}: {error}", job.track_id);
                failures.push(Failure { track_id: job.track_id.clone(), error });
            }
        }
    }
    if reports.is_empty() {
        return Err(CliError::Input(format!("no track in {} could be analyzed", args.input.display())));
    }

    if let Some(dir) = &args.out_dir {
        fs::create_dir_all(dir).map_err(|e| CliError::Usage(format!("cannot create {}: {e}", dir.display())))?;
        for r in &reports {
            let path = dir.join(per_track_name(&r.track_id, args.options.format));
            emit(Some(&path), &render_report(r, report_format(args.options.format)))?;
        }
    }

    let doc = BatchDocument {
        schema_version: SCHEMA_VERSION,
        tracks_total: jobs.len(),
        tracks_analyzed: reports.len(),
        ranking: rankings(&reports),
        reports: reports.iter().map(rounded).collect(),
        failures,
    };
    eprintln!("mixqa: analyzed {} of {} tracks", doc.tracks_analyzed, doc.tracks_total);
    let bytes = match args.options.format {
        ReportFormatArg::Json => json_bytes(&doc),
        ReportFormatArg::Text => render_text(&doc),
    };
    emit(args.out.as_deref(), &bytes)
}
