//! Result reporting and atomic file output.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::Value;

use crate::error::CliError;

/// Relative `--out` paths are resolved against this directory when it is set.
pub const OUT_DIR_ENV: &str = "COMPACTA_OUT_DIR";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    /// A check found a counterexample (exit code 1).
    Fail,
}

/// What a command produced. `artifact` is the file-shaped product (JSON or
/// CSV text) written to `--out`, or to stdout in text mode without `--out`.
#[derive(Debug)]
pub struct Outcome {
    pub status: Status,
    pub text: String,
    pub json: Value,
    pub artifact: Option<String>,
}

impl Outcome {
    pub fn report(text: String, json: Value) -> Self {
        Outcome {
            status: Status::Pass,
            text,
            json,
            artifact: None,
        }
    }

    pub fn check(passed: bool, text: String, json: Value) -> Self {
        Outcome {
            status: if passed { Status::Pass } else { Status::Fail },
            text,
            json,
            artifact: None,
        }
    }

    pub fn with_artifact(mut self, artifact: String) -> Self {
        self.artifact = Some(artifact);
        self
    }
}

pub fn resolve(path: &Path, out_dir: Option<&Path>) -> PathBuf {
    match out_dir {
        Some(dir) if path.is_relative() => dir.join(path),
        _ => path.to_path_buf(),
    }
}

/// Writes through a temporary file in the target directory and renames it
/// into place.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let wrap = |source| CliError::Write {
        path: path.display().to_string(),
        source,
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    std::fs::create_dir_all(&dir).map_err(wrap)?;
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(wrap)?;
    tmp.write_all(contents.as_bytes()).map_err(wrap)?;
    tmp.flush().map_err(wrap)?;
    tmp.persist(path).map_err(|e| wrap(e.error))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sub/out.txt");
        write_atomic(&path, "a").unwrap();
        write_atomic(&path, "b").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "b");
        assert_eq!(
            std::fs::read_dir(dir.path().join("sub")).unwrap().count(),
            1
        );
    }

    #[test]
    fn relative_paths_use_out_dir() {
        let dir = Path::new("/tmp/x");
        assert_eq!(resolve(Path::new("a.csv"), Some(dir)), dir.join("a.csv"));
        assert_eq!(
            resolve(Path::new("/abs.csv"), Some(dir)),
            PathBuf::from("/abs.csv")
        );
        assert_eq!(resolve(Path::new("a.csv"), None), PathBuf::from("a.csv"));
    }
}
