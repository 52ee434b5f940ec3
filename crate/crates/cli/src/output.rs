//! Rendering: rationals cross the boundary as `"p/q"` strings, floats as
//! shortest round-trip decimals.

use std::fs;
use std::path::Path;

use serde_json::Value as Json;

use momentspace::moments::WireNumber;
use momentspace::numeric::Scalar;
use momentspace::{Error, Result};

use crate::args::Format;

/// A result in both output formats.
pub struct Output {
    pub json: Json,
    pub csv: String,
    pub default: Format,
}

impl Output {
    pub fn render(&self, format: Option<Format>) -> Result<String> {
        Ok(match format.unwrap_or(self.default) {
            Format::Json => {
                let mut s = serde_json::to_string(&self.json).map_err(|e| Error::Io(e.to_string()))?;
                s.push('\n');
                s
            }
            Format::Csv => self.csv.clone(),
        })
    }
}

pub fn text<S: Scalar>(v: &S) -> String {
    v.to_value().to_string()
}

pub fn json<S: Scalar>(v: &S) -> Json {
    match WireNumber::from_value(&v.to_value()) {
        WireNumber::Text(s) => Json::String(s),
        WireNumber::Number(x) => Json::from(x),
    }
}

pub fn row<S: Scalar>(values: &[S]) -> String {
    let mut s = values.iter().map(text).collect::<Vec<_>>().join(",");
    s.push('\n');
    s
}

pub fn float(v: f64) -> String {
    format!("{v}\n")
}

pub fn emit(content: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, content).map_err(|e| Error::Io(format!("{}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}
