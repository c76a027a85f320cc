use std::fs;
use std::path::Path;

use serde_json::Value;

use super::{Scenario, ScenarioError};

pub const SCHEMA_VERSION: u64 = 1;

pub fn scenario_to_json(scenario: &Scenario) -> String {
    let mut s = serde_json::to_string_pretty(scenario).expect("scenario serializes");
    s.push('\n');
    s
}

/// Parses in three stages so that syntax errors, version mismatches and
/// shape mismatches surface as distinct errors.
pub fn scenario_from_json(text: &str) -> Result<Scenario, ScenarioError> {
    let value: Value = serde_json::from_str(text).map_err(|e| ScenarioError::Malformed(e.to_string()))?;
    let obj = value.as_object().ok_or_else(|| ScenarioError::Schema("top level is not an object".into()))?;
    let version = obj
        .get("version")
        .ok_or_else(|| ScenarioError::Schema("missing `version`".into()))?
        .as_u64()
        .ok_or_else(|| ScenarioError::Schema("`version` is not a non-negative integer".into()))?;
    if version != SCHEMA_VERSION {
        return Err(ScenarioError::UnsupportedVersion(version));
    }
    let scenario: Scenario = serde_json::from_value(value).map_err(|e| ScenarioError::Schema(e.to_string()))?;
    scenario.validate()?;
    Ok(scenario)
}

pub fn save_scenario(scenario: &Scenario, path: impl AsRef<Path>) -> Result<(), ScenarioError> {
    fs::write(path, scenario_to_json(scenario))?;
    Ok(())
}

pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario, ScenarioError> {
    scenario_from_json(&fs::read_to_string(path)?)
}
