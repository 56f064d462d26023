//! Scenario configuration: `[section]` headers with `key = value` pairs.
//!
//! A config names its scenario in `[scenario] name = "…"`; every other key is
//! read by the scenario's resolver through a [`Reader`], which records the
//! value actually used (given or defaulted) into the resolved config.  Keys
//! that no resolver asked for are rejected with the nearest valid key as a
//! suggestion.  Command-line overrides (`--set section.key=value`, or a bare
//! `key=value` when the key name is unambiguous) take precedence over the
//! file.
//!
//! A metadata sidecar written by a previous run can be used as a config: its
//! `[config]` table is the resolved config of that run.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use toml::{Table, Value};

/// Failure classes with their process exit codes.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Bad config, unknown key or out-of-range parameter (exit 2).
    Validation(String),
    /// Non-positive-definite matrix, spectral failure and the like (exit 3).
    Numerical(String),
    /// Output could not be written (exit 1).
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Output(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "invalid configuration: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
            CliError::Output(m) => write!(f, "cannot write output: {m}"),
        }
    }
}

impl From<oscnet::Error> for CliError {
    fn from(e: oscnet::Error) -> Self {
        if e.is_validation() {
            CliError::Validation(e.to_string())
        } else {
            CliError::Numerical(e.to_string())
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

/// One `--set` override.
#[derive(Debug, Clone)]
struct Override {
    key: String,
    value: Value,
    used: bool,
}

/// Parse `key=value`; the value is read as a TOML value, falling back to a
/// plain string (so `--set model=rwa` works without quotes).
fn parse_override(text: &str) -> CliResult<Override> {
    let (key, raw) = text
        .split_once('=')
        .ok_or_else(|| invalid(format!("override '{text}' is not of the form key=value")))?;
    let key = key.trim().to_string();
    if key.is_empty() {
        return Err(invalid(format!("override '{text}' has an empty key")));
    }
    let raw = raw.trim();
    let value = toml::from_str::<Table>(&format!("v = {raw}"))
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| Value::String(raw.to_string()));
    Ok(Override { key, value, used: false })
}

/// Parsed config text plus overrides, before resolution.
#[derive(Debug, Clone)]
pub struct Source {
    sections: Table,
    overrides: Vec<Override>,
}

impl Source {
    pub fn parse(text: &str, overrides: &[String]) -> CliResult<Self> {
        let mut table: Table = toml::from_str(text).map_err(|e| invalid(format!("cannot parse config: {e}")))?;
        // A sidecar carries the resolved config under [config].
        if let Some(Value::Table(inner)) = table.remove("config") {
            table = inner;
        } else {
            table.remove("meta");
        }
        for (name, value) in &table {
            if !value.is_table() {
                return Err(invalid(format!("top-level key '{name}' must sit inside a [section]")));
            }
        }
        let overrides = overrides.iter().map(|s| parse_override(s)).collect::<CliResult<_>>()?;
        Ok(Self { sections: table, overrides })
    }

    /// Add an override with an already typed value (used for dedicated
    /// command-line flags such as `--out`).
    pub fn push_override(&mut self, key: &str, value: Value) {
        self.overrides.push(Override { key: key.to_string(), value, used: false });
    }

    pub fn reader(self) -> Reader {
        Reader { source: self, asked: BTreeSet::new(), resolved: Table::new() }
    }
}

/// Typed access to a [`Source`] that records every key asked for.
#[derive(Debug)]
pub struct Reader {
    source: Source,
    asked: BTreeSet<(String, String)>,
    resolved: Table,
}

fn type_name(v: &Value) -> &'static str {
    match v {
        Value::String(_) => "a string",
        Value::Integer(_) => "an integer",
        Value::Float(_) => "a number",
        Value::Boolean(_) => "a boolean",
        Value::Datetime(_) => "a date",
        Value::Array(_) => "a list",
        Value::Table(_) => "a table",
    }
}

fn as_float(v: &Value) -> Option<f64> {
    match v {
        Value::Float(x) => Some(*x),
        Value::Integer(i) => Some(*i as f64),
        _ => None,
    }
}

impl Reader {
    fn raw(&mut self, section: &str, key: &str) -> Option<Value> {
        self.asked.insert((section.to_string(), key.to_string()));
        let dotted = format!("{section}.{key}");
        // Later overrides win.
        if let Some(o) = self.source.overrides.iter_mut().rev().find(|o| o.key == dotted || o.key == key) {
            o.used = true;
            let v = o.value.clone();
            let dup = dotted.clone();
            for other in self.source.overrides.iter_mut().filter(|o| o.key == dup || o.key == key) {
                other.used = true;
            }
            return Some(v);
        }
        self.source.sections.get(section).and_then(|s| s.get(key)).cloned()
    }

    fn record(&mut self, section: &str, key: &str, value: Value) {
        let slot = self.resolved.entry(section.to_string()).or_insert_with(|| Value::Table(Table::new()));
        if let Value::Table(t) = slot {
            t.insert(key.to_string(), value);
        }
    }

    fn wrong(section: &str, key: &str, want: &str, got: &Value) -> CliError {
        invalid(format!("key '{section}.{key}' must be {want}, found {} ({got})", type_name(got)))
    }

    /// A number; integers are accepted.
    pub fn float(&mut self, section: &str, key: &str, default: f64) -> CliResult<f64> {
        let x = match self.raw(section, key) {
            None => default,
            Some(v) => as_float(&v).ok_or_else(|| Self::wrong(section, key, "a number", &v))?,
        };
        if !x.is_finite() {
            return Err(invalid(format!("key '{section}.{key}' must be finite")));
        }
        self.record(section, key, Value::Float(x));
        Ok(x)
    }

    /// A number that may be absent; absent keys stay absent when resolved.
    pub fn opt_float(&mut self, section: &str, key: &str) -> CliResult<Option<f64>> {
        match self.raw(section, key) {
            None => Ok(None),
            Some(_) => self.float(section, key, 0.0).map(Some),
        }
    }

    /// A nonnegative integer.
    pub fn count(&mut self, section: &str, key: &str, default: usize) -> CliResult<usize> {
        let n = match self.raw(section, key) {
            None => default,
            Some(Value::Integer(i)) if i >= 0 => i as usize,
            Some(v) => return Err(Self::wrong(section, key, "a nonnegative integer", &v)),
        };
        self.record(section, key, Value::Integer(n as i64));
        Ok(n)
    }

    /// A string.
    pub fn string(&mut self, section: &str, key: &str, default: &str) -> CliResult<String> {
        let s = match self.raw(section, key) {
            None => default.to_string(),
            Some(Value::String(s)) => s,
            Some(v) => return Err(Self::wrong(section, key, "a string", &v)),
        };
        self.record(section, key, Value::String(s.clone()));
        Ok(s)
    }

    /// A string parsed into `T`; the canonical spelling is recorded.
    pub fn parsed<T, E>(&mut self, section: &str, key: &str, default: &str, canonical: impl Fn(&T) -> String) -> CliResult<T>
    where
        T: FromStr<Err = E>,
        E: fmt::Display,
    {
        let s = self.string(section, key, default)?;
        let v = s.parse::<T>().map_err(|e| invalid(format!("key '{section}.{key}': {e}")))?;
        self.record(section, key, Value::String(canonical(&v)));
        Ok(v)
    }

    /// A list of numbers.
    pub fn float_list(&mut self, section: &str, key: &str, default: &[f64]) -> CliResult<Vec<f64>> {
        let xs = match self.raw(section, key) {
            None => default.to_vec(),
            Some(Value::Array(items)) => items
                .iter()
                .map(|v| as_float(v).ok_or_else(|| Self::wrong(section, key, "a list of numbers", v)))
                .collect::<CliResult<_>>()?,
            Some(v) => return Err(Self::wrong(section, key, "a list of numbers", &v)),
        };
        if xs.iter().any(|x| !x.is_finite()) {
            return Err(invalid(format!("key '{section}.{key}' must contain finite numbers")));
        }
        self.record(section, key, Value::Array(xs.iter().map(|&x| Value::Float(x)).collect()));
        Ok(xs)
    }

    /// A list of nonnegative integers.
    pub fn count_list(&mut self, section: &str, key: &str, default: &[usize]) -> CliResult<Vec<usize>> {
        let xs = match self.raw(section, key) {
            None => default.to_vec(),
            Some(Value::Array(items)) => items
                .iter()
                .map(|v| match v {
                    Value::Integer(i) if *i >= 0 => Ok(*i as usize),
                    other => Err(Self::wrong(section, key, "a list of nonnegative integers", other)),
                })
                .collect::<CliResult<_>>()?,
            Some(v) => return Err(Self::wrong(section, key, "a list of nonnegative integers", &v)),
        };
        self.record(section, key, Value::Array(xs.iter().map(|&x| Value::Integer(x as i64)).collect()));
        Ok(xs)
    }

    /// A list of strings.
    pub fn string_list(&mut self, section: &str, key: &str, default: &[&str]) -> CliResult<Vec<String>> {
        let xs: Vec<String> = match self.raw(section, key) {
            None => default.iter().map(|s| s.to_string()).collect(),
            Some(Value::Array(items)) => items
                .iter()
                .map(|v| v.as_str().map(str::to_string).ok_or_else(|| Self::wrong(section, key, "a list of strings", v)))
                .collect::<CliResult<_>>()?,
            Some(Value::String(s)) => s.split(',').map(|p| p.trim().to_string()).filter(|p| !p.is_empty()).collect(),
            Some(v) => return Err(Self::wrong(section, key, "a list of strings", &v)),
        };
        self.record(section, key, Value::Array(xs.iter().cloned().map(Value::String).collect()));
        Ok(xs)
    }

    /// The resolved config so far.
    pub fn resolved(&self) -> &Table {
        &self.resolved
    }

    /// All keys this resolver asked for, as `section.key`.
    pub fn known(&self) -> Vec<String> {
        self.asked.iter().map(|(s, k)| format!("{s}.{k}")).collect()
    }

    /// Reject anything not asked for and return the resolved config.
    pub fn finish(self) -> CliResult<Table> {
        let known = self.known();
        for (section, body) in &self.source.sections {
            if let Value::Table(keys) = body {
                if keys.is_empty() && !known.iter().any(|k| k.starts_with(&format!("{section}."))) {
                    return Err(invalid(format!("unknown section '[{section}]'")));
                }
                for key in keys.keys() {
                    if !self.asked.contains(&(section.clone(), key.clone())) {
                        return Err(unknown_key(&format!("{section}.{key}"), &known));
                    }
                }
            }
        }
        if let Some(o) = self.source.overrides.iter().find(|o| !o.used) {
            return Err(unknown_key(&o.key, &known));
        }
        Ok(self.resolved)
    }
}

/// Error naming `key` and the closest valid key.
fn unknown_key(key: &str, known: &[String]) -> CliError {
    let bare = |k: &str| k.rsplit('.').next().unwrap_or(k).to_string();
    let best = known
        .iter()
        .map(|k| {
            let d = if key.contains('.') { strsim::levenshtein(key, k) } else { strsim::levenshtein(key, &bare(k)) };
            (d, k)
        })
        .min();
    match best {
        Some((_, k)) => invalid(format!("unknown key '{key}' (did you mean '{k}'?)")),
        None => invalid(format!("unknown key '{key}'")),
    }
}
