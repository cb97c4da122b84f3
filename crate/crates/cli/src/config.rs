//! Run configuration: built-in defaults, an optional JSON file, then
//! dotted command-line overrides such as `--model.delta_y 0.4`.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use squo_core::{ModelSpec, ScanConfig, SolverConfig, Tolerances};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct OutputConfig {
    pub path: Option<PathBuf>,
    pub format: Format,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub model: ModelSpec,
    pub solver: SolverConfig,
    pub scan: ScanConfig,
    pub tolerances: Tolerances,
    pub output: OutputConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            model: ModelSpec::periodic(12, 0.4, 0.0, 0.5).expect("default model is valid"),
            solver: SolverConfig::default(),
            scan: ScanConfig::default(),
            tolerances: Tolerances::default(),
            output: OutputConfig::default(),
        }
    }
}

/// Leaves restricted to a fixed set of strings.
const CHOICES: &[(&str, &[&str])] = &[
    ("model.boundary", &["periodic", "open"]),
    ("output.format", &["csv", "json"]),
];

impl RunConfig {
    pub fn to_value(&self) -> Value {
        serde_json::to_value(self).expect("config serializes")
    }

    /// Layer `file` and `overrides` on top of `base`, then validate.
    pub fn load(base: &RunConfig, file: Option<&Path>, overrides: &[(String, String)]) -> Result<Self, CliError> {
        let template = base.to_value();
        let mut merged = template.clone();
        if let Some(path) = file {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            let layer: Value = serde_json::from_str(&text).map_err(|e| CliError::Validation {
                field: None,
                message: format!("{}: not valid JSON: {e}", path.display()),
            })?;
            merge(&template, &mut merged, &layer, "")?;
        }
        for (key, raw) in overrides {
            let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.clone()));
            let mut layer = value;
            for part in key.rsplit('.') {
                let mut map = Map::new();
                map.insert(part.to_string(), layer);
                layer = Value::Object(map);
            }
            merge(&template, &mut merged, &layer, "")?;
        }
        let config: RunConfig = serde_json::from_value(merged).map_err(|e| CliError::Validation {
            field: None,
            message: format!("config: {e}"),
        })?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.model.validate()?;
        self.solver.validate()?;
        self.scan.validate()?;
        self.tolerances.validate()?;
        Ok(())
    }
}

/// Recursive merge that only accepts keys and JSON types present in
/// `template`. `null` template leaves accept a string or `null`.
fn merge(template: &Value, target: &mut Value, layer: &Value, path: &str) -> Result<(), CliError> {
    let join = |key: &str| if path.is_empty() { key.to_string() } else { format!("{path}.{key}") };
    match (template, layer) {
        (Value::Object(tmpl), Value::Object(items)) => {
            let target = target.as_object_mut().expect("target mirrors template");
            for (key, value) in items {
                let field = join(key);
                let Some(sub) = tmpl.get(key) else {
                    return Err(CliError::validation(&field, format!("unknown config field `{field}`")));
                };
                merge(sub, target.get_mut(key).expect("target mirrors template"), value, &field)?;
            }
            Ok(())
        }
        (Value::Object(_), _) => Err(CliError::validation(path, format!("`{path}` must be an object"))),
        (_, Value::Object(_)) => Err(CliError::validation(path, format!("`{path}` is not a section"))),
        (tmpl, value) => {
            check_leaf(tmpl, value, path)?;
            *target = value.clone();
            Ok(())
        }
    }
}

fn check_leaf(template: &Value, value: &Value, path: &str) -> Result<(), CliError> {
    let fail = |expected: &str| {
        Err(CliError::validation(
            path,
            format!("`{path}` expects {expected}, got {value}"),
        ))
    };
    match template {
        Value::Number(n) if n.is_u64() => match value.as_u64() {
            Some(_) => Ok(()),
            None => fail("a non-negative integer"),
        },
        Value::Number(_) => match value {
            Value::Number(_) => Ok(()),
            _ => fail("a number"),
        },
        Value::Bool(_) => match value {
            Value::Bool(_) => Ok(()),
            _ => fail("true or false"),
        },
        Value::String(_) => {
            let Value::String(s) = value else {
                return fail("a string");
            };
            match CHOICES.iter().find(|(name, _)| *name == path) {
                Some((_, allowed)) if !allowed.contains(&s.as_str()) => fail(&format!("one of {allowed:?}")),
                _ => Ok(()),
            }
        }
        Value::Null => match value {
            Value::Null | Value::String(_) => Ok(()),
            _ => fail("a string or null"),
        },
        _ => fail("a scalar"),
    }
}

/// Pull `--a.b value` and `--a.b=value` pairs out of an argument list;
/// everything else is returned untouched.
pub fn split_overrides(args: Vec<String>) -> Result<(Vec<String>, Vec<(String, String)>), CliError> {
    let mut rest = Vec::new();
    let mut overrides = Vec::new();
    let mut iter = args.into_iter();
    while let Some(arg) = iter.next() {
        let Some(flag) = arg.strip_prefix("--").filter(|f| f.contains('.')) else {
            rest.push(arg);
            continue;
        };
        match flag.split_once('=') {
            Some((key, value)) => overrides.push((key.to_string(), value.to_string())),
            None => {
                let value = iter
                    .next()
                    .ok_or_else(|| CliError::validation(flag, format!("`--{flag}` needs a value")))?;
                overrides.push((flag.to_string(), value));
            }
        }
    }
    Ok((rest, overrides))
}
