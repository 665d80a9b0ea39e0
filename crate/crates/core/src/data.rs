//! Bundled table data, overridable by a directory on disk.

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

pub const DATA_DIR_ENV: &str = "ARTINHEXA_DATA";

pub const TABLE1: &str = include_str!("../data/table1.tsv");
pub const TABLE2: &str = include_str!("../data/table2.tsv");
pub const TABLE3: &str = include_str!("../data/table3.tsv");
pub const SYMMETRIES: &str = include_str!("../data/symmetries.tsv");
pub const EXAMPLES: &str = include_str!("../data/examples.tsv");

/// Where table files are read from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DataSource {
    Bundled,
    Dir(PathBuf),
}

impl DataSource {
    /// `$ARTINHEXA_DATA` when set, otherwise the bundled copies.
    pub fn from_env() -> Self {
        match std::env::var_os(DATA_DIR_ENV) {
            Some(dir) if !dir.is_empty() => DataSource::Dir(PathBuf::from(dir)),
            _ => DataSource::Bundled,
        }
    }

    pub fn read(&self, name: &str) -> Result<String> {
        match self {
            DataSource::Bundled => bundled(name)
                .map(str::to_owned)
                .ok_or_else(|| Error::data(name, "no bundled file with this name")),
            DataSource::Dir(dir) => read_file(&dir.join(name)),
        }
    }
}

fn bundled(name: &str) -> Option<&'static str> {
    Some(match name {
        "table1.tsv" => TABLE1,
        "table2.tsv" => TABLE2,
        "table3.tsv" => TABLE3,
        "symmetries.tsv" => SYMMETRIES,
        "examples.tsv" => EXAMPLES,
        _ => return None,
    })
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::data(path.display().to_string(), e.to_string()))
}

pub fn table_file_name(id: u8) -> String {
    format!("table{id}.tsv")
}
