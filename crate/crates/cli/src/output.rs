// SPDX-License-Identifier: Apache-2.0

//! Number formatting, CSV assembly and atomic file output.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde_json::{Map, Value};
use tempfile::NamedTempFile;

use crate::error::{CliError, CliResult};

/// Shortest decimal form of `x` rounded to 15 significant digits.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let rounded = round15(x);
    if (1e-5..1e16).contains(&rounded.abs()) {
        format!("{rounded}")
    } else {
        format!("{rounded:e}")
    }
}

fn round15(x: f64) -> f64 {
    format!("{x:.14e}").parse().expect("formatted float parses")
}

/// JSON number rounded to 15 significant digits; non-finite values become strings.
pub fn json_num(x: f64) -> Value {
    if x.is_finite() {
        let r = if x == 0.0 { 0.0 } else { round15(x) };
        serde_json::Number::from_f64(r).map(Value::Number).expect("finite")
    } else {
        Value::String(fmt_num(x))
    }
}

pub fn json_opt(x: Option<f64>) -> Value {
    x.map_or(Value::Null, json_num)
}

/// One-line JSON object with sorted keys.
pub fn json_line(fields: Map<String, Value>) -> String {
    let mut s = serde_json::to_string(&Value::Object(fields)).expect("serialisable");
    s.push('\n');
    s
}

/// `# thermowit v<version> cmd=<name> params=k1=v1,k2=v2` with keys sorted.
pub fn provenance(cmd: &str, params: &BTreeMap<String, String>) -> String {
    let joined: Vec<String> = params.iter().map(|(k, v)| format!("{k}={v}")).collect();
    format!("# thermowit v{} cmd={cmd} params={}\n", thermowit_core::VERSION, joined.join(","))
}

/// CSV text: provenance line, column header, rows; LF line endings.
pub fn csv_text(cmd: &str, params: &BTreeMap<String, String>, header: &[&str], rows: &[Vec<String>]) -> String {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(row).expect("in-memory write");
    }
    let body = String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields");
    provenance(cmd, params) + &body
}

/// Writes `text` to `path` through a temporary file in the same directory,
/// so a failed run never leaves a partial file behind.
pub fn write_atomic(path: &Path, text: &str) -> CliResult<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let io = |context: String| move |source| CliError::Io { context, source };
    let mut tmp = NamedTempFile::new_in(dir).map_err(io(format!("cannot create a file in {}", dir.display())))?;
    tmp.write_all(text.as_bytes()).map_err(io(format!("cannot write {}", path.display())))?;
    tmp.persist(path)
        .map_err(|e| CliError::Io { context: format!("cannot write {}", path.display()), source: e.error })?;
    Ok(())
}
