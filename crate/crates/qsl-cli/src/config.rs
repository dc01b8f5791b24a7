use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use qsl_core::models::Preset;
use serde_json::Value;

use crate::experiments::Experiment;

/// One validation problem, tied to the offending field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub field: String,
    pub message: String,
}

impl Diagnostic {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            field: field.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ParamValue {
    Number(f64),
    List(Vec<f64>),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kind {
    Number,
    Integer,
    List,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Range {
    Any,
    Positive,
    NonNegative,
    /// Inclusive lower and upper bounds.
    Between(f64, f64),
}

impl Range {
    fn check(&self, x: f64) -> Option<String> {
        if !x.is_finite() {
            return Some(format!("must be finite, got {x}"));
        }
        match *self {
            Range::Any => None,
            Range::Positive if x <= 0.0 => Some(format!("must be positive, got {x}")),
            Range::NonNegative if x < 0.0 => Some(format!("must be non-negative, got {x}")),
            Range::Between(lo, hi) if x < lo || x > hi => Some(format!("must lie in [{lo}, {hi}], got {x}")),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub enum Default {
    Required,
    Number(f64),
    List(&'static [f64]),
}

/// Declared parameter of an experiment.
#[derive(Debug, Clone, Copy)]
pub struct ParamSpec {
    pub name: &'static str,
    pub kind: Kind,
    pub range: Range,
    pub default: Default,
    pub help: &'static str,
}

impl ParamSpec {
    pub const fn new(name: &'static str, kind: Kind, range: Range, default: Default, help: &'static str) -> Self {
        Self { name, kind, range, default, help }
    }

    fn check(&self, value: &ParamValue) -> Option<String> {
        match (self.kind, value) {
            (Kind::List, ParamValue::List(v)) => {
                if v.is_empty() {
                    return Some("must not be empty".into());
                }
                v.iter()
                    .enumerate()
                    .find_map(|(i, x)| self.range.check(*x).map(|m| format!("element {i} {m}")))
            }
            (Kind::List, ParamValue::Number(_)) => Some("expected a list of numbers".into()),
            (_, ParamValue::List(_)) => Some("expected a single number".into()),
            (Kind::Integer, ParamValue::Number(x)) => {
                if x.fract() != 0.0 || !x.is_finite() {
                    Some(format!("must be an integer, got {x}"))
                } else if *x < 1.0 && matches!(self.range, Range::Positive) {
                    Some(format!("must be a positive integer, got {x}"))
                } else {
                    self.range.check(*x)
                }
            }
            (Kind::Number, ParamValue::Number(x)) => self.range.check(*x),
        }
    }
}

/// Fully resolved numeric parameters of a run.
#[derive(Debug, Clone, PartialEq, std::default::Default)]
pub struct Params {
    values: BTreeMap<String, ParamValue>,
}

impl Params {
    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, ParamValue)>) -> Self {
        Self {
            values: pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
        }
    }

    pub fn insert(&mut self, name: &str, value: ParamValue) {
        self.values.insert(name.to_string(), value);
    }

    /// Scalar parameter; panics if the schema did not declare it, which is a programming error.
    pub fn number(&self, name: &str) -> f64 {
        match self.values.get(name) {
            Some(ParamValue::Number(x)) => *x,
            other => panic!("parameter {name} is not a resolved number: {other:?}"),
        }
    }

    pub fn integer(&self, name: &str) -> usize {
        self.number(name) as usize
    }

    pub fn list(&self, name: &str) -> &[f64] {
        match self.values.get(name) {
            Some(ParamValue::List(v)) => v,
            other => panic!("parameter {name} is not a resolved list: {other:?}"),
        }
    }

    pub fn get(&self, name: &str) -> Option<&ParamValue> {
        self.values.get(name)
    }

    pub fn to_json(&self) -> Value {
        let map = self
            .values
            .iter()
            .map(|(k, v)| (k.clone(), param_json(v)))
            .collect();
        Value::Object(map)
    }
}

/// Parsed configuration before validation against an experiment schema.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Option<String>,
    pub preset: Option<String>,
    pub seed: u64,
    pub output_path: Option<String>,
    pub parameters: BTreeMap<String, ParamValue>,
}

impl ExperimentConfig {
    /// Parses the flat JSON object; structural problems come back as diagnostics.
    pub fn parse(text: &str) -> Result<Self, Vec<Diagnostic>> {
        let value: Value = serde_json::from_str(text).map_err(|e| vec![Diagnostic::new("config", format!("not valid JSON: {e}"))])?;
        let Value::Object(map) = value else {
            return Err(vec![Diagnostic::new("config", "top level must be a JSON object")]);
        };
        let mut diags = Vec::new();
        let mut cfg = ExperimentConfig {
            experiment: None,
            preset: None,
            seed: 0,
            output_path: None,
            parameters: BTreeMap::new(),
        };
        let text_field = |key: &str, v: &Value, diags: &mut Vec<Diagnostic>| match v {
            Value::String(s) => Some(s.clone()),
            _ => {
                diags.push(Diagnostic::new(key, "expected a string"));
                None
            }
        };
        for (key, v) in &map {
            match key.as_str() {
                "experiment" => cfg.experiment = text_field(key, v, &mut diags),
                "preset" => cfg.preset = text_field(key, v, &mut diags),
                "output_path" => cfg.output_path = text_field(key, v, &mut diags),
                "seed" => match v.as_u64() {
                    Some(s) => cfg.seed = s,
                    None => diags.push(Diagnostic::new("seed", format!("must be a non-negative integer, got {v}"))),
                },
                _ => match json_param(v) {
                    Some(p) => {
                        cfg.parameters.insert(key.clone(), p);
                    }
                    None => diags.push(Diagnostic::new(key.as_str(), format!("expected a number or a list of numbers, got {v}"))),
                },
            }
        }
        if diags.is_empty() {
            Ok(cfg)
        } else {
            Err(diags)
        }
    }

    pub fn load(path: &Path) -> Result<Self, Vec<Diagnostic>> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| vec![Diagnostic::new("config", format!("cannot read {}: {e}", path.display()))])?;
        Self::parse(&text)
    }

    pub fn to_json(&self) -> Value {
        let mut map = serde_json::Map::new();
        if let Some(e) = &self.experiment {
            map.insert("experiment".into(), Value::String(e.clone()));
        }
        if let Some(p) = &self.preset {
            map.insert("preset".into(), Value::String(p.clone()));
        }
        map.insert("seed".into(), serde_json::json!(self.seed));
        if let Some(o) = &self.output_path {
            map.insert("output_path".into(), Value::String(o.clone()));
        }
        for (k, v) in &self.parameters {
            map.insert(k.clone(), param_json(v));
        }
        Value::Object(map)
    }

    /// Names the experiment; when both the command line and the file name one they must agree.
    pub fn experiment_tag(&self, requested: Option<&str>) -> Result<Experiment, Vec<Diagnostic>> {
        for tag in [requested, self.experiment.as_deref()].into_iter().flatten() {
            Experiment::from_str(tag).map_err(|m| vec![Diagnostic::new("experiment", m)])?;
        }
        let tag = match (requested, self.experiment.as_deref()) {
            (Some(a), Some(b)) if a != b => {
                return Err(vec![Diagnostic::new(
                    "experiment",
                    format!("command line requests '{a}' but the config names '{b}'"),
                )])
            }
            (Some(a), _) => a,
            (None, Some(b)) => b,
            (None, None) => return Err(vec![Diagnostic::new("experiment", "missing experiment tag")]),
        };
        Experiment::from_str(tag).map_err(|m| vec![Diagnostic::new("experiment", m)])
    }

    /// Defaults, then preset values, then explicit values; reports every problem found.
    pub fn resolve(&self, experiment: Experiment) -> Result<Params, Vec<Diagnostic>> {
        let mut diags = Vec::new();
        let schema = experiment.schema();
        let mut params = Params::default();
        for param in &schema {
            match param.default {
                Default::Number(x) => params.insert(param.name, ParamValue::Number(x)),
                Default::List(v) => params.insert(param.name, ParamValue::List(v.to_vec())),
                Default::Required => {}
            }
        }
        if let Some(name) = &self.preset {
            match Preset::from_str(name) {
                Ok(preset) => match experiment.preset_values(preset) {
                    Some(values) => {
                        for (k, v) in values.values {
                            params.values.insert(k, v);
                        }
                    }
                    None => diags.push(Diagnostic::new(
                        "preset",
                        format!("preset '{name}' does not apply to experiment '{}'", experiment.tag()),
                    )),
                },
                Err(e) => diags.push(Diagnostic::new("preset", e.to_string())),
            }
        }
        for (k, v) in &self.parameters {
            match schema.iter().find(|s| s.name == k) {
                Some(_) => params.insert(k, v.clone()),
                None => {
                    let names: Vec<_> = schema.iter().map(|s| s.name).collect();
                    diags.push(Diagnostic::new(
                        k.as_str(),
                        format!("unknown parameter for '{}', expected one of {}", experiment.tag(), names.join(", ")),
                    ));
                }
            }
        }
        for param in &schema {
            match params.get(param.name) {
                None => diags.push(Diagnostic::new(param.name, format!("missing required parameter ({})", param.help))),
                Some(v) => {
                    if let Some(m) = param.check(v) {
                        diags.push(Diagnostic::new(param.name, m));
                    }
                }
            }
        }
        if diags.is_empty() {
            diags.extend(experiment.cross_check(&params));
        }
        if diags.is_empty() {
            Ok(params)
        } else {
            Err(diags)
        }
    }
}

pub(crate) fn number_json(x: f64) -> Value {
    if x.fract() == 0.0 && x.abs() < 9.0e15 {
        Value::from(x as i64)
    } else {
        Value::from(x)
    }
}

pub(crate) fn param_json(v: &ParamValue) -> Value {
    match v {
        ParamValue::Number(x) => number_json(*x),
        ParamValue::List(l) => Value::Array(l.iter().map(|x| number_json(*x)).collect()),
    }
}

fn json_param(v: &Value) -> Option<ParamValue> {
    match v {
        Value::Number(n) => n.as_f64().map(ParamValue::Number),
        Value::Array(items) => items.iter().map(Value::as_f64).collect::<Option<Vec<_>>>().map(ParamValue::List),
        _ => None,
    }
}
