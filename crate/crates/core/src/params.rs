//! Typed parameter maps for scenarios and the model registry.
//!
//! Config files are flat TOML tables:
//!
//! ```toml
//! # soft-Coulomb run at a coarser resolution
//! n = 512
//! kappa = 1.0
//! soft = 0.5
//! ```
//!
//! Every key must be declared by the consumer; unknown keys are rejected so a
//! typo cannot silently fall back to a default.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Bool(bool),
    Int(i64),
    Float(f64),
    Text(String),
}

impl std::fmt::Display for ParamValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ParamValue::Bool(b) => write!(f, "{b}"),
            ParamValue::Int(i) => write!(f, "{i}"),
            ParamValue::Float(x) => write!(f, "{x}"),
            ParamValue::Text(s) => write!(f, "{s}"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ParamMap(BTreeMap<String, ParamValue>);

impl ParamMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let table: toml::Table = text.parse().map_err(|e: toml::de::Error| Error::Parse(e.to_string()))?;
        let mut map = ParamMap::new();
        for (k, v) in table {
            let pv = match v {
                toml::Value::Boolean(b) => ParamValue::Bool(b),
                toml::Value::Integer(i) => ParamValue::Int(i),
                toml::Value::Float(x) => ParamValue::Float(x),
                toml::Value::String(s) => ParamValue::Text(s),
                other => {
                    return Err(Error::Parse(format!(
                        "key '{k}': only scalar values are supported, found {}",
                        other.type_str()
                    )))
                }
            };
            map.0.insert(k, pv);
        }
        Ok(map)
    }

    pub fn set(&mut self, key: &str, value: ParamValue) -> &mut Self {
        self.0.insert(key.to_string(), value);
        self
    }

    pub fn with(mut self, key: &str, value: impl Into<ParamValue>) -> Self {
        self.0.insert(key.to_string(), value.into());
        self
    }

    pub fn get(&self, key: &str) -> Option<&ParamValue> {
        self.0.get(key)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &ParamValue)> {
        self.0.iter()
    }

    /// Overlay `other` on top of `self`.
    pub fn merged(&self, other: &ParamMap) -> ParamMap {
        let mut out = self.clone();
        for (k, v) in &other.0 {
            out.0.insert(k.clone(), v.clone());
        }
        out
    }

    /// Fails on any key not listed in `allowed`.
    pub fn ensure_known(&self, allowed: &[&str]) -> Result<()> {
        for k in self.0.keys() {
            if !allowed.contains(&k.as_str()) {
                return Err(Error::InvalidParameter(format!(
                    "unknown key '{k}' (allowed: {})",
                    allowed.join(", ")
                )));
            }
        }
        Ok(())
    }

    pub fn f64_or(&self, key: &str, default: f64) -> Result<f64> {
        match self.0.get(key) {
            None => Ok(default),
            Some(ParamValue::Float(x)) => Ok(*x),
            Some(ParamValue::Int(i)) => Ok(*i as f64),
            Some(other) => Err(Error::InvalidParameter(format!("'{key}' must be a number, found {other}"))),
        }
    }

    pub fn usize_or(&self, key: &str, default: usize) -> Result<usize> {
        match self.0.get(key) {
            None => Ok(default),
            Some(ParamValue::Int(i)) if *i >= 0 => Ok(*i as usize),
            Some(other) => Err(Error::InvalidParameter(format!(
                "'{key}' must be a non-negative integer, found {other}"
            ))),
        }
    }

    pub fn bool_or(&self, key: &str, default: bool) -> Result<bool> {
        match self.0.get(key) {
            None => Ok(default),
            Some(ParamValue::Bool(b)) => Ok(*b),
            Some(other) => Err(Error::InvalidParameter(format!("'{key}' must be true or false, found {other}"))),
        }
    }

    pub fn str_or<'a>(&'a self, key: &str, default: &'a str) -> Result<&'a str> {
        match self.0.get(key) {
            None => Ok(default),
            Some(ParamValue::Text(s)) => Ok(s),
            Some(other) => Err(Error::InvalidParameter(format!("'{key}' must be a string, found {other}"))),
        }
    }
}

impl From<f64> for ParamValue {
    fn from(x: f64) -> Self {
        ParamValue::Float(x)
    }
}

impl From<i64> for ParamValue {
    fn from(i: i64) -> Self {
        ParamValue::Int(i)
    }
}

impl From<usize> for ParamValue {
    fn from(i: usize) -> Self {
        ParamValue::Int(i as i64)
    }
}

impl From<bool> for ParamValue {
    fn from(b: bool) -> Self {
        ParamValue::Bool(b)
    }
}

impl From<&str> for ParamValue {
    fn from(s: &str) -> Self {
        ParamValue::Text(s.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_flat_toml() {
        let p = ParamMap::from_toml("n = 64\nkappa = 1.5\nlabel = \"x\"\nwilson = true\n").unwrap();
        assert_eq!(p.usize_or("n", 0).unwrap(), 64);
        assert_eq!(p.f64_or("kappa", 0.0).unwrap(), 1.5);
        assert_eq!(p.f64_or("n", 0.0).unwrap(), 64.0);
        assert_eq!(p.str_or("label", "").unwrap(), "x");
        assert!(p.bool_or("wilson", false).unwrap());
        assert_eq!(p.f64_or("missing", 2.0).unwrap(), 2.0);
    }

    #[test]
    fn rejects_nested_tables_and_unknown_keys() {
        assert!(ParamMap::from_toml("[grid]\nn = 3").is_err());
        let p = ParamMap::from_toml("n = 3\nnn = 4").unwrap();
        assert!(p.ensure_known(&["n"]).is_err());
        assert!(p.usize_or("n", 0).is_ok());
        assert!(ParamMap::from_toml("n = -3").unwrap().usize_or("n", 0).is_err());
    }
}
