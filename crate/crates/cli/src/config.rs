//! Run configuration: flat `key = value` files, flags, and the meta line.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde_json::{json, Value};

use crate::error::{bad, CliError, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const META_PREFIX: &str = "# meta ";

/// Every parameter key accepted anywhere.
pub const PARAM_KEYS: &[&str] = &[
    "a", "gamma", "t-min", "t-max", "ratio", "beta", "theta", "R", "s", "p", "data", "curve", "x", "delta", "n-x",
    "k-max",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Propagate,
    Maximal,
    Rate,
    Counterexample,
    Sharpness,
    Sobolev,
    LpDecompose,
}

impl Command {
    pub const ALL: [Command; 7] = [
        Command::Propagate,
        Command::Maximal,
        Command::Rate,
        Command::Counterexample,
        Command::Sharpness,
        Command::Sobolev,
        Command::LpDecompose,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Propagate => "propagate",
            Command::Maximal => "maximal",
            Command::Rate => "rate",
            Command::Counterexample => "counterexample",
            Command::Sharpness => "sharpness",
            Command::Sobolev => "sobolev",
            Command::LpDecompose => "lp-decompose",
        }
    }

    pub fn keys(self) -> &'static [&'static str] {
        match self {
            Command::Propagate | Command::Maximal => &["a", "gamma", "t-min", "t-max", "ratio", "data", "x"],
            Command::Rate => &["a", "gamma", "t-min", "t-max", "ratio", "beta", "data", "curve", "x", "delta"],
            Command::Counterexample => &["theta", "a", "gamma", "n-x"],
            Command::Sharpness => &["R", "a", "gamma"],
            Command::Sobolev => &["data", "s", "p"],
            Command::LpDecompose => &["data", "k-max"],
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| bad("command", format!("unknown command `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(bad("format", format!("expected csv or json, got `{s}`"))),
        }
    }
}

/// Partial settings from a file or from flags.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    pub command: Option<Command>,
    pub params: BTreeMap<String, String>,
    pub output_path: Option<PathBuf>,
    pub format: Option<Format>,
}

impl Settings {
    /// `other` wins on every key it sets.
    pub fn overlay(mut self, other: Settings) -> Settings {
        self.command = other.command.or(self.command);
        self.params.extend(other.params);
        self.output_path = other.output_path.or(self.output_path);
        self.format = other.format.or(self.format);
        self
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "command" => self.command = Some(value.parse()?),
            "out" => self.output_path = Some(PathBuf::from(value)),
            "format" => self.format = Some(value.parse()?),
            k if PARAM_KEYS.contains(&k) => {
                self.params.insert(k.to_string(), value.to_string());
            }
            k => return Err(CliError::UnknownKey(k.to_string())),
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub params: BTreeMap<String, String>,
    pub output_path: Option<PathBuf>,
    pub format: Format,
}

impl RunConfig {
    pub fn from_settings(s: Settings) -> Result<Self> {
        let command = s.command.ok_or_else(|| bad("command", "no command given"))?;
        for key in s.params.keys() {
            if !command.keys().contains(&key.as_str()) {
                return Err(CliError::UnusedKey { key: key.clone(), command: command.name() });
            }
        }
        Ok(Self { command, params: s.params, output_path: s.output_path, format: s.format.unwrap_or_default() })
    }

    pub fn meta_value(&self) -> Value {
        json!({
            "tool": "landau-lab",
            "version": VERSION,
            "command": self.command.name(),
            "format": self.format.name(),
            "out": self.output_path.as_ref().map(|p| p.to_string_lossy().into_owned()),
            "params": self.params,
        })
    }

    /// Single-line header written ahead of CSV output.
    pub fn meta_line(&self) -> String {
        format!("{META_PREFIX}{}", self.meta_value())
    }

    pub fn from_meta_value(v: &Value) -> Result<Self> {
        let err = |m: &str| CliError::Meta(m.to_string());
        let obj = v.as_object().ok_or_else(|| err("not an object"))?;
        let command = obj.get("command").and_then(Value::as_str).ok_or_else(|| err("missing command"))?;
        let format = obj.get("format").and_then(Value::as_str).ok_or_else(|| err("missing format"))?;
        let output_path = match obj.get("out") {
            None | Some(Value::Null) => None,
            Some(Value::String(s)) => Some(PathBuf::from(s)),
            Some(_) => return Err(err("out must be a string or null")),
        };
        let mut settings = Settings {
            command: Some(command.parse()?),
            output_path,
            format: Some(format.parse()?),
            ..Settings::default()
        };
        let params = obj.get("params").and_then(Value::as_object).ok_or_else(|| err("missing params"))?;
        for (k, v) in params {
            let v = v.as_str().ok_or_else(|| err("param values must be strings"))?;
            if !PARAM_KEYS.contains(&k.as_str()) {
                return Err(CliError::UnknownKey(k.clone()));
            }
            settings.set(k, v)?;
        }
        Self::from_settings(settings)
    }

    pub fn parse_meta(line: &str) -> Result<Self> {
        let body = line
            .trim_end_matches(['\r', '\n'])
            .strip_prefix(META_PREFIX)
            .ok_or_else(|| CliError::Meta(format!("expected prefix `{META_PREFIX}`")))?;
        let v: Value = serde_json::from_str(body).map_err(|e| CliError::Meta(e.to_string()))?;
        Self::from_meta_value(&v)
    }
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<Settings> {
    let mut out = Settings::default();
    let mut seen = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = match raw.find('#') {
            Some(j) => &raw[..j],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let cfg_err = |msg: String| CliError::Config { line: line_no, msg };
        let (key, value) = line.split_once('=').ok_or_else(|| cfg_err("expected `key = value`".into()))?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || value.is_empty() {
            return Err(cfg_err("expected `key = value`".into()));
        }
        if let Some(prev) = seen.insert(key.to_string(), line_no) {
            return Err(cfg_err(format!("duplicate key `{key}` (first set on line {prev})")));
        }
        out.set(key, value).map_err(|e| cfg_err(e.to_string()))?;
    }
    Ok(out)
}

pub fn load_config(path: &Path) -> Result<Settings> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    parse_config(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_sets_nothing() {
        assert_eq!(parse_config("").unwrap(), Settings::default());
        assert_eq!(parse_config("# only a comment\n\n").unwrap(), Settings::default());
    }

    #[test]
    fn parses_keys_and_comments() {
        let s = parse_config("command = sharpness\nR = 1000 # big\n  gamma=2\nformat = json\n").unwrap();
        assert_eq!(s.command, Some(Command::Sharpness));
        assert_eq!(s.params["R"], "1000");
        assert_eq!(s.params["gamma"], "2");
        assert_eq!(s.format, Some(Format::Json));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = parse_config("a = 2\n\nbogus line\n").unwrap_err();
        assert_eq!(e.to_string(), "line 3: expected `key = value`");
        let e = parse_config("a = 2\nzeta = 1\n").unwrap_err();
        assert_eq!(e.to_string(), "line 2: unknown key `zeta`");
        let e = parse_config("a = 2\na = 3\n").unwrap_err();
        assert!(e.to_string().starts_with("line 2: duplicate key"));
        let e = parse_config("format = xml\n").unwrap_err();
        assert!(e.to_string().starts_with("line 1: format"));
    }

    #[test]
    fn overlay_prefers_later() {
        let file = parse_config("gamma = 2\na = 1\n").unwrap();
        let mut flags = Settings::default();
        flags.set("gamma", "3").unwrap();
        let merged = file.overlay(flags);
        assert_eq!(merged.params["gamma"], "3");
        assert_eq!(merged.params["a"], "1");
    }

    #[test]
    fn unused_keys_rejected() {
        let mut s = parse_config("command = sharpness\ntheta = 0.001\n").unwrap();
        assert!(matches!(RunConfig::from_settings(s.clone()), Err(CliError::UnusedKey { .. })));
        s.params.clear();
        assert!(RunConfig::from_settings(s).is_ok());
    }

    #[test]
    fn meta_round_trip() {
        let s = parse_config("command = rate\ncurve = power\nbeta = 0.5\nx = 0.5,1\nout = a b,\"c\".csv\n").unwrap();
        let cfg = RunConfig::from_settings(s).unwrap();
        let line = cfg.meta_line();
        assert!(!line.contains('\n'));
        assert_eq!(RunConfig::parse_meta(&line).unwrap(), cfg);
        assert!(RunConfig::parse_meta("meta {}").is_err());
        assert!(RunConfig::parse_meta("# meta {\"command\": 1}").is_err());
    }
}
