//! Loading experiment configurations from presets, TOML files and
//! `key=value` overrides.

use std::fs;
use std::path::Path;

use toml::{Table, Value};

use crate::model::{preset, ExperimentConfig};
use crate::{Error, Result};

/// Resolves the configuration of a run.
///
/// `preset_name` and a `preset = "…"` key in the file are equivalent. A
/// preset may be refined by `flow` and `output` sections of the file, but
/// not combined with `mesh` or `model` sections. Overrides are applied last.
pub fn load_config(
    preset_name: Option<&str>,
    config_path: Option<&Path>,
    overrides: &[String],
) -> Result<ExperimentConfig> {
    let mut file_table = match config_path {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            text.parse::<Table>()
                .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?
        }
        None => Table::new(),
    };
    let file_preset = match file_table.remove("preset") {
        Some(Value::String(s)) => Some(s),
        Some(other) => return Err(Error::Config(format!("preset must be a string, got {other}"))),
        None => None,
    };
    let name = match (preset_name, file_preset.as_deref()) {
        (Some(a), Some(b)) if a != b => {
            return Err(Error::Config(format!(
                "--preset {a} conflicts with preset = \"{b}\" in the config file"
            )))
        }
        (Some(a), _) => Some(a.to_string()),
        (None, b) => b.map(str::to_string),
    };
    let mut root = match &name {
        Some(name) => {
            for section in ["mesh", "model"] {
                if file_table.contains_key(section) {
                    return Err(Error::Config(format!(
                        "a preset cannot be combined with a [{section}] section; use --set {section}.KEY=VALUE"
                    )));
                }
            }
            let base = Value::try_from(preset(name)?).map_err(|e| Error::Config(e.to_string()))?;
            let mut base = match base {
                Value::Table(t) => t,
                _ => unreachable!("configuration serializes to a table"),
            };
            merge(&mut base, file_table);
            base
        }
        None => {
            if config_path.is_none() {
                return Err(Error::Config("either --preset or --config is required".into()));
            }
            file_table
        }
    };
    for item in overrides {
        apply_override(&mut root, item)?;
    }
    Value::Table(root)
        .try_into::<ExperimentConfig>()
        .map_err(|e| Error::Config(e.to_string()))
}

fn merge(base: &mut Table, patch: Table) {
    for (key, value) in patch {
        match (base.get_mut(&key), value) {
            (Some(Value::Table(b)), Value::Table(p)) => merge(b, p),
            (_, v) => {
                base.insert(key, v);
            }
        }
    }
}

/// Parses the right-hand side of an override as a TOML value, falling back
/// to a bare string.
pub fn parse_value(text: &str) -> Value {
    format!("v = {text}")
        .parse::<Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| Value::String(text.to_string()))
}

/// Applies `section.key=value` to a configuration table.
pub fn apply_override(root: &mut Table, item: &str) -> Result<()> {
    let (key, value) = item
        .split_once('=')
        .ok_or_else(|| Error::Config(format!("override '{item}' is not of the form key=value")))?;
    let path: Vec<&str> = key.trim().split('.').collect();
    if path.iter().any(|p| p.is_empty()) {
        return Err(Error::Config(format!("malformed override key '{key}'")));
    }
    let mut table = root;
    for part in &path[..path.len() - 1] {
        let entry = table
            .entry(part.to_string())
            .or_insert_with(|| Value::Table(Table::new()));
        table = match entry {
            Value::Table(t) => t,
            _ => {
                return Err(Error::Config(format!(
                    "override key '{key}': '{part}' is not a section"
                )))
            }
        };
    }
    table.insert(path[path.len() - 1].to_string(), parse_value(value.trim()));
    Ok(())
}

/// The resolved configuration as TOML.
pub fn effective_config(config: &ExperimentConfig) -> String {
    toml::to_string(config).unwrap_or_default()
}
