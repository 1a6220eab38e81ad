//! Parameter-file ingestion.
//!
//! Two formats are accepted:
//!
//! 1. Flat key-value text, one `key = value [unit]` per line, `#` comments.
//!    Keys are exactly `X`, `l`, `c`, `L_c`, `L_2`, `C_q`, `E_J`, `C_R`,
//!    `Phi_ext`; anything else is a hard error. All nine keys are required.
//! 2. A JSON object with the same nine keys holding SI numbers. A top-level
//!    `"params"` object is used when present, so the JSON emitted by the CLI
//!    can be fed back in unchanged.

use std::path::Path;

use crate::error::{Error, Result};
use crate::params::CircuitParams;
use crate::units::{parse_quantity, Dimension};

pub const PARAM_KEYS: [&str; 9] = [
    "X", "l", "c", "L_c", "L_2", "C_q", "E_J", "C_R", "Phi_ext",
];

fn key_dimension(key: &str) -> Dimension {
    match key {
        "X" => Dimension::Length,
        "l" => Dimension::InductancePerLength,
        "c" => Dimension::CapacitancePerLength,
        "L_c" | "L_2" => Dimension::Inductance,
        "C_q" | "C_R" => Dimension::Capacitance,
        "E_J" => Dimension::Energy,
        "Phi_ext" => Dimension::Flux,
        _ => unreachable!("key_dimension called with unvalidated key"),
    }
}

/// Physical dimension of a parameter key, for callers that accept per-key
/// quantities (e.g. sweep values).
pub fn param_dimension(key: &str) -> Option<Dimension> {
    key_index(key).map(|_| key_dimension(key))
}

/// Overwrite one parameter by its external key name.
pub fn set_param(params: &mut CircuitParams<f64>, key: &str, value: f64) -> Result<()> {
    match key {
        "X" => params.length = value,
        "l" => params.inductance_per_length = value,
        "c" => params.capacitance_per_length = value,
        "L_c" => params.coupling_inductance = value,
        "L_2" => params.loop_inductance = value,
        "C_q" => params.junction_capacitance = value,
        "E_J" => params.josephson_energy = value,
        "C_R" => params.termination_capacitance = value,
        "Phi_ext" => params.external_flux = value,
        other => return Err(Error::UnknownKey { key: other.into() }),
    }
    Ok(())
}

fn assemble(values: &[Option<f64>; 9]) -> Result<CircuitParams<f64>> {
    for (i, v) in values.iter().enumerate() {
        if v.is_none() {
            return Err(Error::MissingKey {
                key: PARAM_KEYS[i].into(),
            });
        }
    }
    Ok(CircuitParams {
        length: values[0].unwrap(),
        inductance_per_length: values[1].unwrap(),
        capacitance_per_length: values[2].unwrap(),
        coupling_inductance: values[3].unwrap(),
        loop_inductance: values[4].unwrap(),
        junction_capacitance: values[5].unwrap(),
        josephson_energy: values[6].unwrap(),
        termination_capacitance: values[7].unwrap(),
        external_flux: values[8].unwrap(),
    })
}

fn key_index(key: &str) -> Option<usize> {
    PARAM_KEYS.iter().position(|k| *k == key)
}

fn parse_flat(text: &str) -> Result<CircuitParams<f64>> {
    let mut values: [Option<f64>; 9] = [None; 9];
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| Error::Config {
            line: lineno + 1,
            message: "expected `key = value`".into(),
        })?;
        let key = key.trim();
        let idx = key_index(key).ok_or_else(|| Error::UnknownKey { key: key.into() })?;
        if values[idx].is_some() {
            return Err(Error::Config {
                line: lineno + 1,
                message: format!("duplicate key `{key}`"),
            });
        }
        values[idx] = Some(parse_quantity(value, key_dimension(key))?);
    }
    assemble(&values)
}

fn parse_json(text: &str) -> Result<CircuitParams<f64>> {
    let root: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Config {
        line: e.line(),
        message: e.to_string(),
    })?;
    let obj = match root.get("params") {
        Some(serde_json::Value::Object(m)) => m,
        _ => root.as_object().ok_or_else(|| Error::Config {
            line: 0,
            message: "top level must be a JSON object".into(),
        })?,
    };
    let mut values: [Option<f64>; 9] = [None; 9];
    for (key, value) in obj {
        let idx = key_index(key).ok_or_else(|| Error::UnknownKey { key: key.clone() })?;
        let num = value.as_f64().ok_or_else(|| Error::Config {
            line: 0,
            message: format!("key `{key}` must be a number in SI units"),
        })?;
        values[idx] = Some(num);
    }
    assemble(&values)
}

/// Parse configuration text, auto-detecting flat vs JSON format.
pub fn parse_config(text: &str) -> Result<CircuitParams<f64>> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse_flat(text)
    }
}

/// Read and parse a configuration file.
pub fn load_config(path: impl AsRef<Path>) -> Result<CircuitParams<f64>> {
    let text = std::fs::read_to_string(path)?;
    parse_config(&text)
}
