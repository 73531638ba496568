use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use termweave::{
    check_roundtrip, emit_docs, emit_schema, load_default, load_from_file, parse_named, serialize,
    to_tbx, to_tei, ConvertError, ConvertOptions, Diagnostic, Document, LossRecord, Registry,
    Severity, ValidationReport, Validator,
};

use crate::inputs::{collect, Input};
use crate::{Exit, Format, Target};

/// Buffered output of one file, emitted in input order.
#[derive(Default)]
struct Report {
    stdout: String,
    stderr: String,
    exit: Option<Exit>,
}

impl Report {
    fn raise(&mut self, e: Exit) {
        self.exit = Some(self.exit.map_or(e, |x| x.max(e)));
    }
}

fn emit(reports: Vec<Report>) -> Exit {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let mut out = stdout.lock();
    let mut err = stderr.lock();
    let mut exit = Exit::Ok;
    for r in reports {
        let _ = out.write_all(r.stdout.as_bytes());
        let _ = err.write_all(r.stderr.as_bytes());
        exit = exit.max(r.exit.unwrap_or(Exit::Ok));
    }
    let _ = out.flush();
    exit
}

fn for_each_input(paths: &[PathBuf], f: impl Fn(&Input) -> Report + Sync) -> Vec<Report> {
    collect(paths)
        .par_iter()
        .map(|i| match i {
            Ok(input) => f(input),
            Err(msg) => Report {
                stderr: format!("termweave: {msg}\n"),
                exit: Some(Exit::Fatal),
                ..Default::default()
            },
        })
        .collect()
}

fn load_registry(path: Option<&Path>) -> Result<Registry, String> {
    match path {
        None => Ok(load_default()),
        Some(p) => {
            load_from_file(p).map_err(|e| format!("termweave: registry {}: {e}", p.display()))
        }
    }
}

/// Reads and parses one file. On failure the report already carries the
/// message and exit code.
fn read_document(input: &Input, report: &mut Report) -> Option<(Document, Vec<Diagnostic>)> {
    let bytes = match fs::read(&input.path) {
        Ok(b) => b,
        Err(e) => {
            report.stderr += &format!("termweave: {}: {e}\n", input.display);
            report.raise(Exit::Fatal);
            return None;
        }
    };
    let parsed = parse_named(&input.display, &bytes, None);
    let mut diags = parsed.diagnostics;
    parsed.source_map.locate(&mut diags);
    match parsed.document {
        Some(doc) => Some((doc, diags)),
        None => {
            for d in &diags {
                report.stderr += &d.to_line(&input.display);
                report.stderr.push('\n');
            }
            report.raise(Exit::Fatal);
            None
        }
    }
}

pub fn validate(paths: &[PathBuf], registry: Option<&Path>, format: Format) -> Exit {
    let validator = match load_registry(registry)
        .and_then(|r| Validator::new(&r).map_err(|e| format!("termweave: {e}")))
    {
        Ok(v) => v,
        Err(msg) => {
            eprintln!("{msg}");
            return Exit::Fatal;
        }
    };
    let reports = for_each_input(paths, |input| {
        let mut report = Report::default();
        let bytes = match fs::read(&input.path) {
            Ok(b) => b,
            Err(e) => {
                report.stderr = format!("termweave: {}: {e}\n", input.display);
                report.raise(Exit::Fatal);
                return report;
            }
        };
        let parsed = parse_named(&input.display, &bytes, None);
        let mut diags = parsed.diagnostics;
        if let Some(doc) = &parsed.document {
            diags.extend(validator.validate(doc).diagnostics);
        } else {
            report.raise(Exit::Fatal);
        }
        parsed.source_map.locate(&mut diags);
        let result = ValidationReport::new(diags);
        if !result.is_valid() {
            report.raise(Exit::Errors);
        }
        match format {
            Format::Lines => {
                for d in &result.diagnostics {
                    report.stdout += &d.to_line(&input.display);
                    report.stdout.push('\n');
                }
            }
            Format::Text => {
                report.stdout += &format!(
                    "{}: {} ({} errors, {} warnings, {} infos)\n",
                    input.display,
                    if result.is_valid() {
                        "valid"
                    } else {
                        "invalid"
                    },
                    result.count(Severity::Error),
                    result.count(Severity::Warning),
                    result.count(Severity::Info),
                );
                for d in &result.diagnostics {
                    report.stdout += &format!("  {d}\n");
                }
            }
        }
        report
    });
    if reports.is_empty() {
        println!("0 files");
    }
    emit(reports)
}

fn loss_line(file: &str, l: &LossRecord, severity: Severity) -> String {
    let clean = |s: &str| s.replace(['\t', '\n', '\r'], " ");
    format!(
        "{}\tLOSS\t{severity}\t{}\t-\t-\t{}\n",
        clean(file),
        l.path,
        clean(&l.description)
    )
}

pub fn convert(paths: &[PathBuf], to: Target, opts: ConvertOptions, out: Option<&Path>) -> Exit {
    let inputs = collect(paths);
    if out.is_none() && inputs.len() != 1 {
        eprintln!("termweave: --out is required unless exactly one input file is given");
        return Exit::Usage;
    }
    let reports = for_each_input(paths, |input| {
        let mut report = Report::default();
        let Some((doc, diags)) = read_document(input, &mut report) else {
            return report;
        };
        for d in &diags {
            report.stderr += &d.to_line(&input.display);
            report.stderr.push('\n');
        }
        if diags.iter().any(Diagnostic::is_error) {
            report.raise(Exit::Errors);
        }
        let converted = match to {
            Target::Tei => to_tei(&doc, &opts),
            Target::Tbx => to_tbx(&doc, &opts),
        };
        let result = match converted {
            Ok(r) => r,
            Err(ConvertError::AlreadyInDialect(d)) => {
                report.stderr += &format!("termweave: {}: input is already {d}\n", input.display);
                report.raise(Exit::Errors);
                return report;
            }
            Err(ConvertError::Loss {
                losses,
                diagnostics,
            }) => {
                for d in &diagnostics {
                    report.stderr += &d.to_line(&input.display);
                    report.stderr.push('\n');
                }
                for l in &losses {
                    report.stderr += &loss_line(&input.display, l, Severity::Error);
                }
                report.raise(Exit::Loss);
                return report;
            }
        };
        for d in &result.diagnostics {
            report.stderr += &d.to_line(&input.display);
            report.stderr.push('\n');
        }
        for l in &result.loss_records {
            report.stderr += &loss_line(&input.display, l, Severity::Warning);
        }
        let bytes = match serialize(&result.document) {
            Ok(b) => b,
            Err(e) => {
                report.stderr += &format!("termweave: {}: {e}\n", input.display);
                report.raise(Exit::Errors);
                return report;
            }
        };
        match out {
            None => report.stdout = String::from_utf8(bytes).expect("serializer writes UTF-8"),
            Some(dir) => {
                let target = dir.join(&input.relative);
                let written = target
                    .parent()
                    .map_or(Ok(()), fs::create_dir_all)
                    .and_then(|_| fs::write(&target, &bytes));
                if let Err(e) = written {
                    report.stderr += &format!("termweave: {}: {e}\n", target.display());
                    report.raise(Exit::Fatal);
                }
            }
        }
        report
    });
    emit(reports)
}

pub fn schema(registry: Option<&Path>, docs: bool) -> Exit {
    let reg = match load_registry(registry) {
        Ok(r) => r,
        Err(msg) => {
            eprintln!("{msg}");
            return Exit::Fatal;
        }
    };
    let text = if docs {
        emit_docs(&reg)
    } else {
        emit_schema(&reg)
    };
    match text {
        Ok(t) => {
            print!("{t}");
            Exit::Ok
        }
        Err(e) => {
            eprintln!("termweave: {e}");
            Exit::Fatal
        }
    }
}

pub fn roundtrip(paths: &[PathBuf]) -> Exit {
    let reports = for_each_input(paths, |input| {
        let mut report = Report::default();
        let Some((doc, _)) = read_document(input, &mut report) else {
            return report;
        };
        let rt = check_roundtrip(&doc);
        match &rt.divergence {
            None => report.stdout = format!("{}: equal\n", input.display),
            Some(p) => {
                report.stdout = format!("{}: differs at {p}\n", input.display);
                report.raise(Exit::Errors);
            }
        }
        for l in &rt.loss_records {
            report.stderr += &loss_line(&input.display, l, Severity::Warning);
        }
        report
    });
    if reports.is_empty() {
        println!("0 files");
    }
    emit(reports)
}
