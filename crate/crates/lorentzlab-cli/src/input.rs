//! Reading command arguments: files or inline text, comma lists, labels.

use std::path::Path;

use lorentzlab::poly::PolyJson;
use lorentzlab::{HomPoly, VarSet, Q};
use serde::de::DeserializeOwned;

use crate::InputError;

/// File contents when `arg` names an existing file, else `arg` itself.
fn source(arg: &str) -> Result<(String, String), InputError> {
    let p = Path::new(arg);
    if p.is_file() {
        let text = std::fs::read_to_string(p).map_err(|e| InputError(format!("{arg}: {e}")))?;
        Ok((text, arg.to_string()))
    } else {
        Ok((arg.to_string(), "inline polynomial".to_string()))
    }
}

/// A polynomial in the text grammar or as `{vars, degree?, terms}` JSON.
pub fn poly(arg: &str) -> Result<HomPoly, InputError> {
    let (text, name) = source(arg)?;
    let parsed = if text.trim_start().starts_with('{') {
        let j: PolyJson = serde_json::from_str(&text).map_err(|e| InputError(format!("{name}: {e}")))?;
        HomPoly::from_json(&j)
    } else {
        HomPoly::parse(text.trim())
    };
    parsed.map_err(|e| InputError(format!("{name}: {e}")))
}

pub fn json<T: DeserializeOwned>(path: &str) -> Result<T, InputError> {
    let text = std::fs::read_to_string(path).map_err(|e| InputError(format!("{path}: {e}")))?;
    serde_json::from_str(&text).map_err(|e| InputError(format!("{path}: {e}")))
}

/// `1,1/2,3` as rationals; `field` names the argument in errors.
pub fn rationals(s: &str, field: &str) -> Result<Vec<Q>, InputError> {
    s.split(',')
        .map(|t| t.trim().parse::<Q>().map_err(|e| InputError(format!("{field}: `{}`: {e}", t.trim()))))
        .collect()
}

pub fn labels(s: &str) -> Vec<String> {
    s.split(',').map(|t| t.trim().to_string()).filter(|t| !t.is_empty()).collect()
}

pub fn indices(vars: &VarSet, labels: &[String], field: &str) -> Result<Vec<usize>, InputError> {
    labels
        .iter()
        .map(|l| vars.index_of(l).ok_or_else(|| InputError(format!("{field}: unknown variable `{l}`"))))
        .collect()
}

pub fn hints(raw: &[String], n: usize) -> Result<Vec<Vec<Q>>, InputError> {
    raw.iter()
        .map(|h| {
            let v = rationals(h, "--hint")?;
            if v.len() != n {
                return Err(InputError(format!("--hint: expected {n} entries, got {}", v.len())));
            }
            Ok(v)
        })
        .collect()
}
