#![allow(dead_code)]

pub mod gen;
pub mod oracle;

use std::path::{Path, PathBuf};

use termweave::{parse_named, Document, ParseResult};

pub fn fixtures_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn fixture(rel: &str) -> PathBuf {
    fixtures_dir().join(rel)
}

pub fn parse_fixture(rel: &str) -> ParseResult {
    let path = fixture(rel);
    let bytes = std::fs::read(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    parse_named(rel, &bytes, None)
}

pub fn load(rel: &str) -> Document {
    let r = parse_fixture(rel);
    r.document
        .unwrap_or_else(|| panic!("{rel}: {:?}", r.diagnostics))
}

/// Every XML fixture, relative to the fixture root, sorted.
pub fn corpus() -> Vec<String> {
    fn walk(dir: &Path, root: &Path, out: &mut Vec<String>) {
        for e in std::fs::read_dir(dir).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                walk(&p, root, out);
            } else if p.extension().is_some_and(|x| x == "xml") {
                out.push(
                    p.strip_prefix(root)
                        .unwrap()
                        .to_string_lossy()
                        .replace('\\', "/"),
                );
            }
        }
    }
    let root = fixtures_dir();
    let mut out = Vec::new();
    walk(&root, &root, &mut out);
    out.sort();
    out
}

/// Corpus fixtures that parse to a document.
pub fn parsed_corpus() -> Vec<(String, Document)> {
    corpus()
        .into_iter()
        .filter_map(|f| parse_fixture(&f).document.map(|d| (f, d)))
        .collect()
}
