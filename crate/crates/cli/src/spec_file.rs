//! JSON map and homeomorphism spec files.

use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::{Map, Value};
use symrig_core::{HomeoSpec, MapSpec};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MapFile {
    #[serde(rename = "piecewise_linear_full_branch")]
    PiecewiseLinear { cuts: Vec<f64> },
    Linear { degree: u32 },
    SmoothSine { degree: u32, epsilon: f64 },
    Conjugated { base: Box<MapFile>, homeo: HomeoFile },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HomeoFile {
    Identity,
    SineHomeo { c: f64 },
    Compose { parts: Vec<HomeoFile> },
}

impl From<MapFile> for MapSpec {
    fn from(m: MapFile) -> Self {
        match m {
            MapFile::PiecewiseLinear { cuts } => MapSpec::PiecewiseLinear { cuts },
            MapFile::Linear { degree } => MapSpec::Linear { degree },
            MapFile::SmoothSine { degree, epsilon } => MapSpec::SmoothSine { degree, epsilon },
            MapFile::Conjugated { base, homeo } => MapSpec::Conjugated {
                base: Box::new((*base).into()),
                homeo: homeo.into(),
            },
        }
    }
}

impl From<&MapSpec> for MapFile {
    fn from(m: &MapSpec) -> Self {
        match m {
            MapSpec::PiecewiseLinear { cuts } => MapFile::PiecewiseLinear { cuts: cuts.clone() },
            MapSpec::Linear { degree } => MapFile::Linear { degree: *degree },
            MapSpec::SmoothSine { degree, epsilon } => MapFile::SmoothSine {
                degree: *degree,
                epsilon: *epsilon,
            },
            MapSpec::Conjugated { base, homeo } => MapFile::Conjugated {
                base: Box::new(base.as_ref().into()),
                homeo: homeo.into(),
            },
        }
    }
}

impl From<HomeoFile> for HomeoSpec {
    fn from(h: HomeoFile) -> Self {
        match h {
            HomeoFile::Identity => HomeoSpec::Identity,
            HomeoFile::SineHomeo { c } => HomeoSpec::SineHomeo { c },
            HomeoFile::Compose { parts } => HomeoSpec::Compose(parts.into_iter().map(Into::into).collect()),
        }
    }
}

impl From<&HomeoSpec> for HomeoFile {
    fn from(h: &HomeoSpec) -> Self {
        match h {
            HomeoSpec::Identity => HomeoFile::Identity,
            HomeoSpec::SineHomeo { c } => HomeoFile::SineHomeo { c: *c },
            HomeoSpec::Compose(parts) => HomeoFile::Compose {
                parts: parts.iter().map(Into::into).collect(),
            },
        }
    }
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn syntax(path: &Path, text: &str) -> CliResult<Value> {
    serde_json::from_str(text).map_err(|e| {
        CliError::Validation(format!("{}:{}:{}: {e}", path.display(), e.line(), e.column()))
    })
}

type Field<T> = Result<T, String>;

fn object<'v>(v: &'v Value, at: &str, allowed: &[&str]) -> Field<&'v Map<String, Value>> {
    let obj = v.as_object().ok_or_else(|| format!("{at}: expected an object"))?;
    if let Some(k) = obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(format!("{at}.{k}: unknown field, expected one of {}", allowed.join(", ")));
    }
    Ok(obj)
}

fn field<'v>(obj: &'v Map<String, Value>, at: &str, key: &str) -> Field<&'v Value> {
    obj.get(key).ok_or_else(|| format!("{at}.{key}: missing field"))
}

fn number(obj: &Map<String, Value>, at: &str, key: &str) -> Field<f64> {
    field(obj, at, key)?
        .as_f64()
        .ok_or_else(|| format!("{at}.{key}: expected a number"))
}

fn degree(obj: &Map<String, Value>, at: &str) -> Field<u32> {
    field(obj, at, "degree")?
        .as_u64()
        .and_then(|d| u32::try_from(d).ok())
        .ok_or_else(|| format!("{at}.degree: expected a non-negative integer"))
}

fn kind<'v>(v: &'v Value, at: &str) -> Field<&'v str> {
    v.get("kind")
        .ok_or_else(|| format!("{at}.kind: missing field"))?
        .as_str()
        .ok_or_else(|| format!("{at}.kind: expected a string"))
}

fn map_from_value(v: &Value, at: &str) -> Field<MapFile> {
    match kind(v, at)? {
        "piecewise_linear_full_branch" => {
            let obj = object(v, at, &["kind", "cuts"])?;
            let cuts = field(obj, at, "cuts")?
                .as_array()
                .ok_or_else(|| format!("{at}.cuts: expected an array"))?
                .iter()
                .enumerate()
                .map(|(i, c)| c.as_f64().ok_or_else(|| format!("{at}.cuts[{i}]: expected a number")))
                .collect::<Field<Vec<f64>>>()?;
            Ok(MapFile::PiecewiseLinear { cuts })
        }
        "linear" => {
            let obj = object(v, at, &["kind", "degree"])?;
            Ok(MapFile::Linear { degree: degree(obj, at)? })
        }
        "smooth_sine" => {
            let obj = object(v, at, &["kind", "degree", "epsilon"])?;
            Ok(MapFile::SmoothSine {
                degree: degree(obj, at)?,
                epsilon: number(obj, at, "epsilon")?,
            })
        }
        "conjugated" => {
            let obj = object(v, at, &["kind", "base", "homeo"])?;
            let base = map_from_value(field(obj, at, "base")?, &format!("{at}.base"))?;
            let homeo = homeo_from_value(field(obj, at, "homeo")?, &format!("{at}.homeo"))?;
            Ok(MapFile::Conjugated {
                base: Box::new(base),
                homeo,
            })
        }
        other => Err(format!(
            "{at}.kind: unknown map kind {other:?}, expected piecewise_linear_full_branch, linear, smooth_sine or conjugated"
        )),
    }
}

fn homeo_from_value(v: &Value, at: &str) -> Field<HomeoFile> {
    match kind(v, at)? {
        "identity" => {
            object(v, at, &["kind"])?;
            Ok(HomeoFile::Identity)
        }
        "sine_homeo" => {
            let obj = object(v, at, &["kind", "c"])?;
            Ok(HomeoFile::SineHomeo { c: number(obj, at, "c")? })
        }
        "compose" => {
            let obj = object(v, at, &["kind", "parts"])?;
            let parts = field(obj, at, "parts")?
                .as_array()
                .ok_or_else(|| format!("{at}.parts: expected an array"))?
                .iter()
                .enumerate()
                .map(|(i, p)| homeo_from_value(p, &format!("{at}.parts[{i}]")))
                .collect::<Field<Vec<_>>>()?;
            Ok(HomeoFile::Compose { parts })
        }
        other => Err(format!(
            "{at}.kind: unknown homeomorphism kind {other:?}, expected identity, sine_homeo or compose"
        )),
    }
}

fn schema<T>(path: &Path, r: Field<T>) -> CliResult<T> {
    r.map_err(|msg| CliError::Validation(format!("{}: {msg}", path.display())))
}

pub fn parse_map(path: &Path, text: &str) -> CliResult<MapSpec> {
    let v = syntax(path, text)?;
    schema(path, map_from_value(&v, "$")).map(Into::into)
}

pub fn parse_homeo(path: &Path, text: &str) -> CliResult<HomeoSpec> {
    let v = syntax(path, text)?;
    schema(path, homeo_from_value(&v, "$")).map(Into::into)
}

/// Reads a map spec without validating it.
pub fn read_map(path: &Path) -> CliResult<MapSpec> {
    parse_map(path, &read(path)?)
}

pub fn read_homeo(path: &Path) -> CliResult<HomeoSpec> {
    parse_homeo(path, &read(path)?)
}

/// Compact canonical JSON, used in report headers.
pub fn map_json(spec: &MapSpec) -> String {
    serde_json::to_string(&MapFile::from(spec)).expect("map specs serialize")
}

pub fn homeo_json(spec: &HomeoSpec) -> String {
    serde_json::to_string(&HomeoFile::from(spec)).expect("homeo specs serialize")
}
