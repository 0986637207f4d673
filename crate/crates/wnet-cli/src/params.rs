//! Parameter tables, config-file loading and resolution.
//!
//! Every subcommand declares its parameters once in a [`ParamSpec`] table.
//! The same table builds the clap arguments, accepts the matching keys from a
//! TOML config file, applies defaults and checks domains, so flags, config
//! keys and error messages always agree.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use anyhow::{bail, Context};
use sha2::{Digest, Sha256};

/// How a parameter's text is parsed and checked.
#[derive(Clone, Copy, Debug)]
pub enum Kind {
    /// Real in `[0, 1]`.
    Prob,
    /// Any finite real.
    Real,
    /// Real `> 0`.
    Positive,
    /// Real `>= 0`.
    NonNegative,
    /// Integer `>= min`.
    Int { min: i64 },
    /// One of the listed words.
    Choice(&'static [&'static str]),
    /// Comma-separated reals, each `>= min`, strictly ascending.
    Reals { min: f64 },
    /// Free text, validated by the command.
    Text,
}

pub struct ParamSpec {
    pub name: &'static str,
    pub kind: Kind,
    /// Default in flag syntax; empty means "unset".
    pub default: &'static str,
    pub help: &'static str,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Real(f64),
    Int(i64),
    Word(String),
    Reals(Vec<f64>),
    Unset,
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Real(v) => write!(f, "{v}"),
            Value::Int(v) => write!(f, "{v}"),
            Value::Word(s) => write!(f, "{s}"),
            Value::Reals(vs) => {
                let parts: Vec<String> = vs.iter().map(|v| v.to_string()).collect();
                write!(f, "{}", parts.join(","))
            }
            Value::Unset => f.write_str("-"),
        }
    }
}

/// Marks errors that must exit with the "invalid input" status.
#[derive(Debug)]
pub struct InvalidInput(pub String);

impl fmt::Display for InvalidInput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InvalidInput {}

fn invalid(msg: String) -> anyhow::Error {
    InvalidInput(msg).into()
}

fn parse_real(key: &str, text: &str) -> anyhow::Result<f64> {
    text.trim()
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| {
            invalid(format!(
                "invalid value for {key}: {text:?} is not a finite number"
            ))
        })
}

pub fn parse_value(key: &str, kind: Kind, text: &str) -> anyhow::Result<Value> {
    if text.is_empty() {
        return Ok(Value::Unset);
    }
    Ok(match kind {
        Kind::Prob => {
            let v = parse_real(key, text)?;
            if !(0.0..=1.0).contains(&v) {
                return Err(invalid(format!(
                    "invalid value for {key}: {v} (expected 0 <= {key} <= 1)"
                )));
            }
            Value::Real(v)
        }
        Kind::Real => Value::Real(parse_real(key, text)?),
        Kind::NonNegative => {
            let v = parse_real(key, text)?;
            if v < 0.0 {
                return Err(invalid(format!(
                    "invalid value for {key}: {v} (expected {key} >= 0)"
                )));
            }
            Value::Real(v)
        }
        Kind::Positive => {
            let v = parse_real(key, text)?;
            if v <= 0.0 {
                return Err(invalid(format!(
                    "invalid value for {key}: {v} (expected {key} > 0)"
                )));
            }
            Value::Real(v)
        }
        Kind::Int { min } => {
            let v: i64 = text.trim().parse().map_err(|_| {
                invalid(format!(
                    "invalid value for {key}: {text:?} is not an integer"
                ))
            })?;
            if v < min {
                return Err(invalid(format!(
                    "invalid value for {key}: {v} (expected {key} >= {min})"
                )));
            }
            Value::Int(v)
        }
        Kind::Choice(options) => {
            let t = text.trim();
            if !options.contains(&t) {
                return Err(invalid(format!(
                    "invalid value for {key}: {t:?} (expected one of {})",
                    options.join(", ")
                )));
            }
            Value::Word(t.to_string())
        }
        Kind::Reals { min } => {
            let vs = text
                .split(',')
                .map(|part| parse_real(key, part))
                .collect::<anyhow::Result<Vec<_>>>()?;
            if let Some(v) = vs.iter().find(|&&v| v < min) {
                return Err(invalid(format!(
                    "invalid value for {key}: {v} (expected values >= {min})"
                )));
            }
            if vs.windows(2).any(|w| w[0] >= w[1]) {
                return Err(invalid(format!(
                    "invalid value for {key}: values must be strictly ascending"
                )));
            }
            Value::Reals(vs)
        }
        Kind::Text => Value::Word(text.trim().to_string()),
    })
}

/// A TOML config value rendered in flag syntax.
fn toml_to_text(key: &str, v: &toml::Value) -> anyhow::Result<String> {
    Ok(match v {
        toml::Value::String(s) => s.clone(),
        toml::Value::Integer(i) => i.to_string(),
        toml::Value::Float(f) => f.to_string(),
        toml::Value::Boolean(b) => b.to_string(),
        toml::Value::Array(items) => items
            .iter()
            .map(|item| match item {
                toml::Value::Array(_) | toml::Value::Table(_) => Err(invalid(format!(
                    "invalid value for {key}: nested arrays are not supported"
                ))),
                other => toml_to_text(key, other),
            })
            .collect::<anyhow::Result<Vec<_>>>()?
            .join(","),
        _ => {
            return Err(invalid(format!(
                "invalid value for {key}: tables are not supported"
            )))
        }
    })
}

/// Flat `key = value` TOML document. Keys may use `-` or `_`.
pub fn load_config(path: &Path) -> anyhow::Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))
        .map_err(|e| invalid(format!("{e:#}")))?;
    let doc: toml::Table = text
        .parse()
        .map_err(|e| invalid(format!("parsing config {}: {e}", path.display())))?;
    let mut out = BTreeMap::new();
    for (key, value) in &doc {
        let key = key.replace('_', "-");
        out.insert(key.clone(), toml_to_text(&key, value)?);
    }
    Ok(out)
}

/// Fully resolved, validated parameters of one run.
#[derive(Clone, Debug)]
pub struct Resolved {
    pub command: String,
    pub values: BTreeMap<&'static str, Value>,
}

impl Resolved {
    /// Flags win over config values, config values over defaults. Config
    /// keys outside `specs` are rejected.
    pub fn resolve<'a>(
        command: &str,
        specs: impl Iterator<Item = &'a ParamSpec> + Clone,
        flags: &BTreeMap<&'static str, String>,
        config: &BTreeMap<String, String>,
    ) -> anyhow::Result<Self> {
        if let Some(key) = config
            .keys()
            .find(|k| !specs.clone().any(|s| s.name == k.as_str()))
        {
            bail!(invalid(format!("unknown config key {key:?} for {command}")));
        }
        let mut values = BTreeMap::new();
        for spec in specs {
            let text = flags
                .get(spec.name)
                .or_else(|| config.get(spec.name))
                .map(String::as_str)
                .unwrap_or(spec.default);
            values.insert(spec.name, parse_value(spec.name, spec.kind, text)?);
        }
        Ok(Resolved {
            command: command.to_string(),
            values,
        })
    }

    pub fn get(&self, key: &str) -> &Value {
        self.values.get(key).unwrap_or(&Value::Unset)
    }

    pub fn real(&self, key: &str) -> Option<f64> {
        match self.get(key) {
            Value::Real(v) => Some(*v),
            Value::Int(v) => Some(*v as f64),
            _ => None,
        }
    }

    pub fn int(&self, key: &str) -> Option<i64> {
        match self.get(key) {
            Value::Int(v) => Some(*v),
            _ => None,
        }
    }

    pub fn word(&self, key: &str) -> Option<&str> {
        match self.get(key) {
            Value::Word(s) => Some(s),
            _ => None,
        }
    }

    pub fn reals(&self, key: &str) -> Option<&[f64]> {
        match self.get(key) {
            Value::Reals(v) => Some(v),
            _ => None,
        }
    }

    /// `key = value` lines in key order, prefixed by the command. The output
    /// path is left out: it does not change the computed data.
    pub fn canonical(&self) -> String {
        let mut s = format!("command = {}\n", self.command);
        for (k, v) in self.values.iter().filter(|(k, _)| **k != "out") {
            s.push_str(&format!("{k} = {v}\n"));
        }
        s
    }

    /// First 12 hex digits of the SHA-256 of [`Resolved::canonical`].
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.canonical().as_bytes());
        hex::encode(digest)[..12].to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SPECS: [ParamSpec; 2] = [
        ParamSpec {
            name: "p",
            kind: Kind::Prob,
            default: "0",
            help: "",
        },
        ParamSpec {
            name: "states",
            kind: Kind::Text,
            default: "wmod",
            help: "",
        },
    ];

    #[test]
    fn flags_override_config() {
        let mut flags = BTreeMap::new();
        flags.insert("p", "0.2".to_string());
        let mut config = BTreeMap::new();
        config.insert("p".to_string(), "0.5".to_string());
        let r = Resolved::resolve("x", SPECS.iter(), &flags, &config).unwrap();
        assert_eq!(r.real("p"), Some(0.2));
        let r = Resolved::resolve("x", SPECS.iter(), &BTreeMap::new(), &config).unwrap();
        assert_eq!(r.real("p"), Some(0.5));
    }

    #[test]
    fn domain_errors_name_the_key() {
        let err = parse_value("p", Kind::Prob, "1.5").unwrap_err();
        assert!(err.to_string().contains("p"));
        assert!(err.downcast_ref::<InvalidInput>().is_some());
        let mut config = BTreeMap::new();
        config.insert("bogus".to_string(), "1".to_string());
        let err = Resolved::resolve("x", SPECS.iter(), &BTreeMap::new(), &config).unwrap_err();
        assert!(err.to_string().contains("bogus"));
    }

    #[test]
    fn reals_must_ascend() {
        assert!(parse_value("m-grid", Kind::Reals { min: 0.0 }, "1,2,2").is_err());
        assert_eq!(
            parse_value("m-grid", Kind::Reals { min: 0.0 }, "1, 2.5").unwrap(),
            Value::Reals(vec![1.0, 2.5])
        );
    }
}
