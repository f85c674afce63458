//! JSON config files. Every key mirrors a command-line flag; flags win when both are given.

use std::path::{Path, PathBuf};

use normred::{Error, Field, Result};
use serde::Deserialize;

/// A number or a list of numbers, so `"d": 4` and `"d": [3, 4, 5]` both work.
#[derive(Clone, Debug, Deserialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum OneOrMany {
    One(u64),
    Many(Vec<u64>),
}

impl OneOrMany {
    pub fn into_vec(self) -> Vec<u64> {
        match self {
            OneOrMany::One(v) => vec![v],
            OneOrMany::Many(v) => v,
        }
    }
}

#[derive(Clone, Debug, Default, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub d: Option<OneOrMany>,
    pub g: Option<OneOrMany>,
    pub b: Option<u64>,
    pub r: Option<OneOrMany>,
    pub degrees: Option<Vec<u64>>,
    pub field: Option<String>,
    pub nmax: Option<u32>,
    pub umax: Option<u32>,
    pub window: Option<u32>,
    pub seed: Option<u64>,
    pub json: Option<PathBuf>,
    pub csv: Option<PathBuf>,
    pub file: Option<PathBuf>,
    pub graph_out: Option<PathBuf>,
    pub criterion: Option<OneOrMany>,
    #[serde(default)]
    pub sequential: bool,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(FileConfig::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Usage(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::Usage(format!("config {}: {e}", path.display())))
    }
}

/// Flag value if given, else the file value.
pub fn pick<T>(flag: Option<T>, file: Option<T>) -> Option<T> {
    flag.or(file)
}

pub fn list(flag: Option<Vec<u64>>, file: Option<OneOrMany>) -> Option<Vec<u64>> {
    flag.or_else(|| file.map(OneOrMany::into_vec))
}

pub fn require<T>(value: Option<T>, flag: &str) -> Result<T> {
    value.ok_or_else(|| Error::Usage(format!("missing --{flag}")))
}

pub fn narrow(v: u64, flag: &str) -> Result<u32> {
    u32::try_from(v).map_err(|_| Error::Usage(format!("--{flag} {v} is out of range")))
}

pub fn parse_field(flag: Option<String>, file: Option<String>) -> Result<Field> {
    match pick(flag, file) {
        Some(s) => s.parse(),
        None => Ok(Field::default()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalars_and_lists() {
        let c: FileConfig = serde_json::from_str(r#"{"d": 4, "r": [1, 2], "field": "fp:32003"}"#).unwrap();
        assert_eq!(list(None, c.d.clone()), Some(vec![4]));
        assert_eq!(list(Some(vec![5]), c.d), Some(vec![5]));
        assert_eq!(list(None, c.r), Some(vec![1, 2]));
        assert_eq!(parse_field(None, c.field).unwrap(), Field::Prime(32003));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(serde_json::from_str::<FileConfig>(r#"{"depth": 3}"#).is_err());
    }

    #[test]
    fn char_two_is_a_usage_error() {
        let e = parse_field(Some("fp:2".into()), None).unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }
}
