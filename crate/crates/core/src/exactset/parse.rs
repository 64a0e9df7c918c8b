use super::{set_build, FiniteSet, Scalar};
use crate::error::{Error, Result};

/// A set read from text, with the line numbers of dropped duplicates.
#[derive(Clone, Debug)]
pub struct ParsedSet {
    pub set: FiniteSet,
    pub duplicate_lines: Vec<usize>,
}

/// Parses the set file format: one integer or `p/q` per line, `#` comments and
/// blank lines ignored.
pub fn parse_set_text(text: &str) -> Result<ParsedSet> {
    let mut values = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let mut duplicate_lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let x: Scalar = line.parse().map_err(|e| match e {
            Error::Parse { msg, .. } => Error::Parse { line: i + 1, msg },
            Error::Domain(msg) => Error::Parse { line: i + 1, msg },
            other => other,
        })?;
        if !seen.insert(x.clone()) {
            duplicate_lines.push(i + 1);
        }
        values.push(x);
    }
    let set = set_build(values)?.set;
    Ok(ParsedSet { set, duplicate_lines })
}

pub fn read_set_file(path: impl AsRef<std::path::Path>) -> Result<ParsedSet> {
    parse_set_text(&std::fs::read_to_string(path)?)
}
