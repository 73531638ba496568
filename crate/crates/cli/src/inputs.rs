use std::path::{Path, PathBuf};

use walkdir::WalkDir;

/// One input file and the name it is reported and written under.
#[derive(Debug, Clone)]
pub struct Input {
    pub path: PathBuf,
    /// Shown in reports: the path as given, or below the given directory.
    pub display: String,
    /// Relative output path under `--out`.
    pub relative: PathBuf,
}

/// Expands directories into their `*.xml` files, recursively and sorted.
/// Missing paths are returned as errors in input order.
pub fn collect(paths: &[PathBuf]) -> Vec<Result<Input, String>> {
    let mut out = Vec::new();
    for p in paths {
        if p.is_dir() {
            let mut files: Vec<PathBuf> = WalkDir::new(p)
                .sort_by_file_name()
                .into_iter()
                .filter_map(Result::ok)
                .filter(|e| {
                    e.file_type().is_file() && e.path().extension().is_some_and(|x| x == "xml")
                })
                .map(|e| e.into_path())
                .collect();
            files.sort();
            for f in files {
                let relative = f
                    .strip_prefix(p)
                    .map(Path::to_path_buf)
                    .unwrap_or_else(|_| f.clone());
                out.push(Ok(Input {
                    display: f.display().to_string(),
                    relative,
                    path: f,
                }));
            }
        } else if p.exists() {
            out.push(Ok(Input {
                display: p.display().to_string(),
                relative: p
                    .file_name()
                    .map(PathBuf::from)
                    .unwrap_or_else(|| p.clone()),
                path: p.clone(),
            }));
        } else {
            out.push(Err(format!("{}: no such file or directory", p.display())));
        }
    }
    out
}
