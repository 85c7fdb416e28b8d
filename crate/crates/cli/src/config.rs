// SPDX-License-Identifier: Apache-2.0

//! Parameter resolution: command-line flag, then config file, then default.
//!
//! A config file holds flag names (kebab-case) as keys, either at top level
//! or in a table named after the subcommand; the table wins over top-level
//! keys. Tables for other subcommands are ignored. A key in the command's own
//! table must be one of its flags; a top-level key must be a flag of some
//! command.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use toml::{Table, Value};

use crate::error::{input, CliResult};

/// Every flag name any subcommand reads from a config file.
const KNOWN_KEYS: &[&str] = &[
    "beta",
    "control",
    "count",
    "d",
    "d-list",
    "d-max",
    "beta-list",
    "dimension-only",
    "dims",
    "energies",
    "energy",
    "entropies",
    "entropy",
    "epsilon",
    "g",
    "hamiltonian",
    "kind",
    "lambda-steps",
    "levels",
    "margin",
    "max-leakage",
    "n-max",
    "out",
    "q",
    "resolution",
    "samples",
    "seed",
    "state",
    "steps",
    "tau",
];

/// Resolved parameters of one run, plus the record used for provenance.
pub struct Params {
    cmd: String,
    values: BTreeMap<String, Value>,
    /// Keys that came from the command's own table.
    own: BTreeSet<String>,
    used: BTreeSet<String>,
    record: BTreeMap<String, String>,
}

/// A value that can come from a flag or a config entry.
pub trait Param: Sized {
    fn from_toml(v: &Value) -> Option<Self>;
    fn describe(&self) -> String;
}

impl Param for f64 {
    fn from_toml(v: &Value) -> Option<Self> {
        match v {
            Value::Float(x) => Some(*x),
            Value::Integer(i) => Some(*i as f64),
            Value::String(s) => parse_real(s).ok(),
            _ => None,
        }
    }
    fn describe(&self) -> String {
        crate::output::fmt_num(*self)
    }
}

impl Param for usize {
    fn from_toml(v: &Value) -> Option<Self> {
        v.as_integer().and_then(|i| usize::try_from(i).ok())
    }
    fn describe(&self) -> String {
        self.to_string()
    }
}

impl Param for u64 {
    fn from_toml(v: &Value) -> Option<Self> {
        v.as_integer().and_then(|i| u64::try_from(i).ok())
    }
    fn describe(&self) -> String {
        self.to_string()
    }
}

impl Param for bool {
    fn from_toml(v: &Value) -> Option<Self> {
        v.as_bool()
    }
    fn describe(&self) -> String {
        self.to_string()
    }
}

impl Param for String {
    fn from_toml(v: &Value) -> Option<Self> {
        match v {
            Value::String(s) => Some(s.clone()),
            Value::Float(x) => Some(crate::output::fmt_num(*x)),
            Value::Integer(i) => Some(i.to_string()),
            Value::Array(items) => {
                let parts: Option<Vec<String>> = items.iter().map(String::from_toml).collect();
                parts.map(|p| p.join(","))
            }
            _ => None,
        }
    }
    fn describe(&self) -> String {
        self.clone()
    }
}

impl Param for PathBuf {
    fn from_toml(v: &Value) -> Option<Self> {
        v.as_str().map(PathBuf::from)
    }
    fn describe(&self) -> String {
        self.display().to_string()
    }
}

impl Params {
    pub fn new(cmd: &str, config: Option<&Path>) -> CliResult<Self> {
        let mut values = BTreeMap::new();
        let mut own = BTreeSet::new();
        if let Some(path) = config {
            let text = std::fs::read_to_string(path)
                .map_err(|e| input(format!("cannot read config {}: {e}", path.display())))?;
            let table: Table = text.parse().map_err(|e| input(format!("config {}: {e}", path.display())))?;
            let mut section = None;
            for (k, v) in table {
                match v {
                    Value::Table(t) if k == cmd => section = Some(t),
                    Value::Table(_) => {}
                    other => {
                        values.insert(k, other);
                    }
                }
            }
            for (k, v) in section.unwrap_or_default() {
                own.insert(k.clone());
                values.insert(k, v);
            }
        }
        Ok(Self { cmd: cmd.to_string(), values, own, used: BTreeSet::new(), record: BTreeMap::new() })
    }

    pub fn command(&self) -> &str {
        &self.cmd
    }

    fn lookup<T: Param>(&mut self, key: &str, flag: Option<T>) -> CliResult<Option<T>> {
        self.used.insert(key.to_string());
        if flag.is_some() {
            return Ok(flag);
        }
        match self.values.get(key) {
            None => Ok(None),
            Some(v) => {
                T::from_toml(v).map(Some).ok_or_else(|| input(format!("config key `{key}` has an invalid value {v}")))
            }
        }
    }

    /// Optional parameter; recorded for provenance when present.
    pub fn optional<T: Param>(&mut self, key: &str, flag: Option<T>) -> CliResult<Option<T>> {
        let v = self.lookup(key, flag)?;
        if let Some(x) = &v {
            self.record.insert(key.to_string(), x.describe());
        }
        Ok(v)
    }

    /// Parameter with a default value.
    pub fn with_default<T: Param>(&mut self, key: &str, flag: Option<T>, default: T) -> CliResult<T> {
        let v = self.lookup(key, flag)?.unwrap_or(default);
        self.record.insert(key.to_string(), v.describe());
        Ok(v)
    }

    pub fn required<T: Param>(&mut self, key: &str, flag: Option<T>) -> CliResult<T> {
        self.optional(key, flag)?.ok_or_else(|| input(format!("missing required parameter --{key}")))
    }

    /// Parameter that affects only where output goes; not recorded.
    pub fn unrecorded<T: Param>(&mut self, key: &str, flag: Option<T>) -> CliResult<Option<T>> {
        self.lookup(key, flag)
    }

    /// Rejects config keys this command does not read, except top-level
    /// keys that another command reads.
    pub fn finish(&self) -> CliResult<BTreeMap<String, String>> {
        let stray =
            |k: &&String| !self.used.contains(*k) && (self.own.contains(*k) || !KNOWN_KEYS.contains(&k.as_str()));
        if let Some(k) = self.values.keys().find(stray) {
            return Err(input(format!("unknown config key `{k}` for {}", self.cmd)));
        }
        Ok(self.record.clone())
    }
}

/// Real number, also accepting `pi`, `k*pi`, `pi/m` and `k*pi/m`.
pub fn parse_real(s: &str) -> CliResult<f64> {
    let t = s.trim();
    let bad = || input(format!("cannot parse `{s}` as a number"));
    if let Some(pos) = t.find("pi") {
        let (head, tail) = (&t[..pos], &t[pos + 2..]);
        let coef = match head.trim().trim_end_matches('*').trim() {
            "" => 1.0,
            "-" => -1.0,
            c => c.parse::<f64>().map_err(|_| bad())?,
        };
        let div = match tail.trim() {
            "" => 1.0,
            d => d.strip_prefix('/').ok_or_else(bad)?.trim().parse::<f64>().map_err(|_| bad())?,
        };
        let v = coef * PI / div;
        return if v.is_finite() { Ok(v) } else { Err(bad()) };
    }
    let v: f64 = t.parse().map_err(|_| bad())?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}

pub fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> CliResult<Vec<T>> {
    let items: Result<Vec<T>, _> = s.split(',').map(|x| x.trim().parse::<T>()).collect();
    match items {
        Ok(v) if !v.is_empty() => Ok(v),
        _ => Err(input(format!("cannot parse `{s}` as a comma-separated list of {what}"))),
    }
}

pub fn parse_real_list(s: &str) -> CliResult<Vec<f64>> {
    s.split(',').map(parse_real).collect()
}
