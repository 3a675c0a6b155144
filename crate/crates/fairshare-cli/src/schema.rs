//! On-disk JSON formats. Field order in the result types is load-bearing:
//! serialization follows declaration order, and results are expected to
//! survive a parse/emit round trip byte for byte.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

/// Either players valuing commodities, or claimants against an estate.
#[derive(Debug, Clone)]
pub enum Instance {
    Bargaining(BargainingInstance),
    Claims(ClaimsInstance),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BargainingInstance {
    pub schema_version: u32,
    pub players: usize,
    pub commodities: usize,
    pub utilities: Vec<Vec<f64>>,
    pub disagreement: Disagreement,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
}

/// Disagreement utilities directly, or per-commodity entitlements that are
/// valued row by row and summed.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Disagreement {
    Utilities(Vec<f64>),
    Bundles(Vec<Vec<f64>>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClaimsInstance {
    pub schema_version: u32,
    pub claims: Vec<f64>,
    pub estate: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BargainingResultFile {
    pub schema_version: u32,
    pub method: String,
    pub players: usize,
    pub commodities: usize,
    pub epsilon: f64,
    pub utilities: Vec<f64>,
    pub allocation: Vec<Vec<f64>>,
    pub shared_commodities: usize,
    pub trace: TraceJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TraceJson {
    Midpoints { steps: Vec<TraceStepJson> },
    Claims { rule: String, pivot: usize, level: f64, claims: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceStepJson {
    pub step: usize,
    pub midpoint: Vec<f64>,
    pub ideals: Vec<f64>,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClaimsResultFile {
    pub schema_version: u32,
    pub method: String,
    pub claimants: usize,
    pub estate: f64,
    pub total_claims: f64,
    pub applied_rule: String,
    pub claims: Vec<f64>,
    pub awards: Vec<f64>,
}

#[derive(Debug, Clone)]
pub enum ResultFile {
    Bargaining(BargainingResultFile),
    Claims(ClaimsResultFile),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckJson {
    pub name: String,
    pub passed: bool,
    pub measured: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyReportFile {
    pub schema_version: u32,
    pub checks: Vec<CheckJson>,
    pub overall: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BargainingCompareFile {
    pub schema_version: u32,
    pub results: Vec<BargainingResultFile>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClaimsCompareFile {
    pub schema_version: u32,
    pub results: Vec<ClaimsResultFile>,
}

/// Renders any serializable document the way every command writes JSON:
/// pretty, two-space indent, trailing newline.
pub fn to_json_string<T: Serialize>(doc: &T) -> String {
    let mut text = serde_json::to_string_pretty(doc).expect("documents serialize");
    text.push('\n');
    text
}

fn read_value(path: &Path) -> Result<serde_json::Value, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn check_version(version: u32, path: &Path) -> Result<(), CliError> {
    if version != SCHEMA_VERSION {
        return Err(CliError::Parse(format!(
            "{}: unsupported schema_version {version}, expected {SCHEMA_VERSION}",
            path.display()
        )));
    }
    Ok(())
}

/// Loads an instance, telling the two kinds apart by their distinctive
/// top-level key.
pub fn load_instance(path: &Path) -> Result<Instance, CliError> {
    let value = read_value(path)?;
    let keys = value
        .as_object()
        .ok_or_else(|| CliError::Parse(format!("{}: top level must be an object", path.display())))?;
    let parse_err = |e: serde_json::Error| CliError::Parse(format!("{}: {e}", path.display()));
    let instance = if keys.contains_key("claims") {
        let inst: ClaimsInstance = serde_json::from_value(value).map_err(parse_err)?;
        check_version(inst.schema_version, path)?;
        Instance::Claims(inst)
    } else if keys.contains_key("utilities") {
        let inst: BargainingInstance = serde_json::from_value(value).map_err(parse_err)?;
        check_version(inst.schema_version, path)?;
        Instance::Bargaining(inst)
    } else {
        return Err(CliError::Parse(format!(
            "{}: an instance needs either a utilities or a claims field",
            path.display()
        )));
    };
    Ok(instance)
}

/// Loads a result file, told apart the same way.
pub fn load_result(path: &Path) -> Result<ResultFile, CliError> {
    let value = read_value(path)?;
    let keys = value
        .as_object()
        .ok_or_else(|| CliError::Parse(format!("{}: top level must be an object", path.display())))?;
    let parse_err = |e: serde_json::Error| CliError::Parse(format!("{}: {e}", path.display()));
    let result = if keys.contains_key("awards") {
        let res: ClaimsResultFile = serde_json::from_value(value).map_err(parse_err)?;
        check_version(res.schema_version, path)?;
        ResultFile::Claims(res)
    } else if keys.contains_key("allocation") {
        let res: BargainingResultFile = serde_json::from_value(value).map_err(parse_err)?;
        check_version(res.schema_version, path)?;
        ResultFile::Bargaining(res)
    } else {
        return Err(CliError::Parse(format!(
            "{}: a result needs either an allocation or an awards field",
            path.display()
        )));
    };
    Ok(result)
}
