//! Solver-facing text formats and the JSON manifest.
//!
//! Text formats write 17 significant digits, which round-trips every `f64`.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

pub mod cbf;
pub mod hexfloat;
pub mod manifest;
pub mod mps;
pub mod sdpa;

pub(crate) fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub(crate) fn parse_num(tok: &str, line: usize, field: &str) -> Result<f64> {
    tok.parse::<f64>()
        .map_err(|e| Error::parse(line, field, format!("`{tok}`: {e}")))
}

pub(crate) fn parse_usize(tok: &str, line: usize, field: &str) -> Result<usize> {
    tok.parse::<usize>()
        .map_err(|e| Error::parse(line, field, format!("`{tok}`: {e}")))
}

pub(crate) fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub(crate) fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

/// Meaningful lines with their 1-based numbers; blank and comment lines dropped.
pub(crate) fn content_lines<'a>(text: &'a str, comment: &'a [char]) -> impl Iterator<Item = (usize, &'a str)> + 'a {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end()))
        .filter(move |(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with(comment))
}
