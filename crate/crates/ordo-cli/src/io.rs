use std::path::{Path, PathBuf};

use ordo_core::digraph::io::{parse_dg, parse_dg_signed, BoundsFile};
use ordo_core::{Digraph, ExtendedValue};
use serde::de::DeserializeOwned;

use crate::report::CliError;

pub fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

pub fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

pub fn graph(path: &Path) -> Result<Digraph, CliError> {
    parse_dg(&read(path)?).map_err(|source| CliError::Parse { path: path.to_owned(), source })
}

pub fn signed_graph(path: &Path) -> Result<(Digraph, Vec<ExtendedValue>), CliError> {
    parse_dg_signed(&read(path)?).map_err(|source| CliError::Parse { path: path.to_owned(), source })
}

pub fn bounds(path: Option<&PathBuf>) -> Result<BoundsFile, CliError> {
    match path {
        None => Ok(BoundsFile::default()),
        Some(p) => BoundsFile::parse(&read(p)?).map_err(|source| CliError::Parse { path: p.clone(), source }),
    }
}

pub fn json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    serde_json::from_str(&read(path)?).map_err(|e| CliError::Json { path: path.to_owned(), msg: e.to_string() })
}

/// Converts a bounds-file parse failure into a CLI error tied to `path`.
pub fn at(path: Option<&PathBuf>) -> impl Fn(ordo_core::digraph::io::ParseError) -> CliError + '_ {
    move |source| CliError::Parse { path: path.cloned().unwrap_or_else(|| PathBuf::from("<bounds>")), source }
}
