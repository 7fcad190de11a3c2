//! Folds a JSON config file into the argument list.

use std::ffi::OsString;
use std::path::Path;

use serde_json::Value;

use crate::error::{CliError, CliResult};

/// Path given with `--config`, if any.
pub fn config_path(argv: &[OsString]) -> Option<OsString> {
    let mut iter = argv.iter();
    while let Some(arg) = iter.next() {
        let text = arg.to_string_lossy();
        if text == "--config" {
            return iter.next().cloned();
        }
        if let Some(rest) = text.strip_prefix("--config=") {
            return Some(rest.into());
        }
    }
    None
}

fn given(argv: &[OsString], flag: &str) -> bool {
    argv.iter().any(|a| {
        let a = a.to_string_lossy();
        a == flag || a.starts_with(&format!("{flag}="))
    })
}

fn scalar(key: &str, value: &Value) -> CliResult<String> {
    match value {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        _ => Err(CliError::Usage(format!("config key {key:?} must hold a string, number, boolean or array"))),
    }
}

/// Appends `--key value` for every config entry not already on the command
/// line. `snake_case` keys map to `--kebab-case` flags, arrays become
/// comma-separated lists and `true` becomes a bare flag.
pub fn merge_config(argv: Vec<OsString>, path: &Path) -> CliResult<Vec<OsString>> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let value: Value = serde_json::from_str(&text).map_err(|e| CliError::input(path, e))?;
    let Value::Object(entries) = value else {
        return Err(CliError::input(path, "config must be a JSON object"));
    };
    let mut extra = Vec::new();
    for (key, value) in &entries {
        let flag = format!("--{}", key.replace('_', "-"));
        if flag == "--config" || given(&argv, &flag) {
            continue;
        }
        match value {
            Value::Bool(true) => extra.push(flag.into()),
            Value::Bool(false) | Value::Null => {}
            Value::Array(items) => {
                let parts = items.iter().map(|v| scalar(key, v)).collect::<CliResult<Vec<_>>>()?;
                extra.push(flag.into());
                extra.push(parts.join(",").into());
            }
            other => {
                extra.push(flag.into());
                extra.push(scalar(key, other)?.into());
            }
        }
    }
    let mut out = argv;
    out.extend(extra);
    Ok(out)
}
