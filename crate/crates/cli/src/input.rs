//! Loading graphs, literals and bounds from command-line arguments.

use shadow_core::graph::{builtin, builtin_names, parse_graph_with, ParseOptions};
use shadow_core::shadowing::SearchBounds;
use shadow_core::{Error, GraphPresentation, Threshold};
use std::path::Path;

/// Errors surfaced to the user with exit status 64.
#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error("{0}")]
    Core(#[from] Error),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {message}")]
    Json { path: String, message: String },
    #[error("`{0}` is neither a readable file nor a builtin ({1})")]
    NoGraph(String, String),
    #[error("{0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, InputError>;

pub fn positive(s: &str) -> std::result::Result<Threshold, String> {
    let v: Threshold = s.trim().parse().map_err(|_| format!("`{s}` is not a natural number"))?;
    if v == Threshold::from(0u32) {
        return Err("exponents and ranks start at 1".into());
    }
    Ok(v)
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| InputError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// A graph from a presentation file, or a builtin by name.
pub fn graph(arg: &str, allow_undecided_sinks: bool) -> Result<GraphPresentation> {
    let path = Path::new(arg);
    if path.is_file() {
        let options = ParseOptions { allow_undecided_sinks };
        return Ok(parse_graph_with(&read(path)?, options)?);
    }
    if builtin_names().contains(&arg) {
        return Ok(builtin(arg)?);
    }
    Err(InputError::NoGraph(arg.to_string(), builtin_names().join(", ")))
}

/// A literal given inline, or the trimmed contents of the file it names.
pub fn literal(arg: &str) -> Result<String> {
    let path = Path::new(arg);
    if !arg.is_empty() && path.is_file() {
        return Ok(read(path)?.trim().to_string());
    }
    Ok(arg.to_string())
}

pub fn bounds(path: Option<&Path>) -> Result<SearchBounds> {
    let Some(path) = path else {
        return Ok(SearchBounds::default());
    };
    let text = read(path)?;
    let b: SearchBounds = serde_json::from_str(&text).map_err(|e| InputError::Json {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    b.validate()?;
    Ok(b)
}

pub fn json_file(path: &Path) -> Result<serde_json::Value> {
    serde_json::from_str(&read(path)?).map_err(|e| InputError::Json {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}
