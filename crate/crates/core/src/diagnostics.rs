//! Coded findings shared by every pipeline stage.

use std::collections::BTreeMap;
use std::fmt;

use crate::model::NodePath;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Severity {
    Error,
    Warning,
    Info,
}

impl Severity {
    pub fn as_str(self) -> &'static str {
        match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
            Severity::Info => "info",
        }
    }
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The published diagnostic code table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Code {
    /// Input is not well-formed UTF-8 XML.
    NotXml,
    UnknownElement,
    UnknownNamespace,
    EmptyDocument,
    ContentModel,
    MissingLang,
    UnknownDataCategory,
    DataCategoryLevel,
    DataValue,
    DuplicateId,
    DanglingPointer,
    ExternalPointer,
    DuplicateLanguage,
    HiTargetMigrated,
    AmbiguousTarget,
}

impl Code {
    pub const ALL: [Code; 15] = [
        Code::NotXml,
        Code::UnknownElement,
        Code::UnknownNamespace,
        Code::EmptyDocument,
        Code::ContentModel,
        Code::MissingLang,
        Code::UnknownDataCategory,
        Code::DataCategoryLevel,
        Code::DataValue,
        Code::DuplicateId,
        Code::DanglingPointer,
        Code::ExternalPointer,
        Code::DuplicateLanguage,
        Code::HiTargetMigrated,
        Code::AmbiguousTarget,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Code::NotXml => "TBX000",
            Code::UnknownElement => "TBX001",
            Code::UnknownNamespace => "TBX002",
            Code::EmptyDocument => "TBX003",
            Code::ContentModel => "TBX010",
            Code::MissingLang => "TBX011",
            Code::UnknownDataCategory => "TBX020",
            Code::DataCategoryLevel => "TBX021",
            Code::DataValue => "TBX022",
            Code::DuplicateId => "TBX030",
            Code::DanglingPointer => "TBX031",
            Code::ExternalPointer => "TBX032",
            Code::DuplicateLanguage => "TBX040",
            Code::HiTargetMigrated => "TBX050",
            Code::AmbiguousTarget => "TBX051",
        }
    }

    pub fn parse(s: &str) -> Option<Code> {
        Code::ALL.into_iter().find(|c| c.as_str() == s)
    }

    pub fn severity(self) -> Severity {
        match self {
            Code::UnknownDataCategory | Code::DuplicateLanguage | Code::AmbiguousTarget => {
                Severity::Warning
            }
            Code::EmptyDocument | Code::ExternalPointer | Code::HiTargetMigrated => Severity::Info,
            _ => Severity::Error,
        }
    }

    pub fn summary(self) -> &'static str {
        match self {
            Code::NotXml => "input is not well-formed UTF-8 XML",
            Code::UnknownElement => "unknown element",
            Code::UnknownNamespace => "unknown namespace",
            Code::EmptyDocument => "empty document",
            Code::ContentModel => "content-model violation",
            Code::MissingLang => "missing or malformed xml:lang",
            Code::UnknownDataCategory => "unknown data category",
            Code::DataCategoryLevel => "data category at wrong level",
            Code::DataValue => "picklist or date value violation",
            Code::DuplicateId => "duplicate or malformed xml:id",
            Code::DanglingPointer => "dangling or malformed local pointer",
            Code::ExternalPointer => "external pointer",
            Code::DuplicateLanguage => "duplicate language section",
            Code::HiTargetMigrated => "hi/@target migrated to ref",
            Code::AmbiguousTarget => "ambiguous pointer target",
        }
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Line, column (both 1-based, column in characters) and byte offset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SourceLocation {
    pub line: u32,
    pub column: u32,
    pub byte_offset: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub code: Code,
    pub severity: Severity,
    pub path: NodePath,
    pub location: Option<SourceLocation>,
    pub message: String,
}

impl Diagnostic {
    pub fn new(code: Code, path: NodePath, message: impl Into<String>) -> Self {
        Diagnostic {
            code,
            severity: code.severity(),
            path,
            location: None,
            message: message.into(),
        }
    }

    pub fn at(mut self, location: Option<SourceLocation>) -> Self {
        self.location = location;
        self
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }

    /// Tab-separated record: file, code, severity, path, line, column, message.
    pub fn to_line(&self, file: &str) -> String {
        let (line, col) = match self.location {
            Some(l) => (l.line.to_string(), l.column.to_string()),
            None => ("-".to_string(), "-".to_string()),
        };
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}",
            one_line(file),
            self.code,
            self.severity,
            self.path,
            line,
            col,
            one_line(&self.message)
        )
    }
}

fn one_line(s: &str) -> String {
    s.chars()
        .map(|c| {
            if matches!(c, '\t' | '\n' | '\r') {
                ' '
            } else {
                c
            }
        })
        .collect()
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(l) = self.location {
            write!(f, "{}:{}: ", l.line, l.column)?;
        }
        write!(
            f,
            "{}[{}] {}: {}",
            self.severity, self.code, self.path, self.message
        )
    }
}

/// Locations of parsed elements, keyed by model path.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SourceMap(BTreeMap<NodePath, SourceLocation>);

impl SourceMap {
    pub fn insert(&mut self, path: NodePath, loc: SourceLocation) {
        self.0.insert(path, loc);
    }

    pub fn get(&self, path: &NodePath) -> Option<SourceLocation> {
        self.0.get(path).copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Fills in missing locations from the map.
    pub fn locate(&self, diagnostics: &mut [Diagnostic]) {
        for d in diagnostics {
            if d.location.is_none() {
                d.location = self.get(&d.path);
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    Invalid,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub diagnostics: Vec<Diagnostic>,
    pub counts: BTreeMap<Severity, usize>,
    pub verdict: Verdict,
}

impl ValidationReport {
    pub fn new(diagnostics: Vec<Diagnostic>) -> Self {
        let mut counts = BTreeMap::new();
        for s in [Severity::Error, Severity::Warning, Severity::Info] {
            counts.insert(s, 0);
        }
        for d in &diagnostics {
            *counts.entry(d.severity).or_insert(0) += 1;
        }
        let verdict = if counts[&Severity::Error] > 0 {
            Verdict::Invalid
        } else {
            Verdict::Valid
        };
        ValidationReport {
            diagnostics,
            counts,
            verdict,
        }
    }

    pub fn count(&self, s: Severity) -> usize {
        self.counts.get(&s).copied().unwrap_or(0)
    }

    pub fn is_valid(&self) -> bool {
        self.verdict == Verdict::Valid
    }

    pub fn codes(&self) -> Vec<Code> {
        self.diagnostics.iter().map(|d| d.code).collect()
    }
}
