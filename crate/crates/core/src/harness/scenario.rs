use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::HarnessError;
use crate::attacker::check_feasible_destination;
use crate::defense::DEFAULT_TOLERANCE;
use crate::{GameState, Vec2f};

pub const SCHEMA_VERSION: u32 = 1;

/// UAVs per localization group: one checker plus four neighbors.
pub const GROUP_SIZE: usize = 5;

/// Horizon multiplier applied to the longest straight route when `tau` is omitted.
const DEFAULT_TAU_FACTOR: f64 = 3.0;

const PAPER_LIKE: &str = include_str!("../../scenarios/paper_like.json");

/// On-disk scenario document. Optional fields fall back to defaults in
/// [`Scenario`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    #[serde(default = "default_schema_version")]
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub starts: Vec<Vec2f>,
    pub real_dests: Vec<Vec2f>,
    pub attacker_dests: Vec<Vec2f>,
    pub step_length: f64,
    pub e_max: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<usize>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

fn default_schema_version() -> u32 {
    SCHEMA_VERSION
}

/// A validated five-UAV scenario.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Scenario {
    pub name: String,
    pub starts: Vec<Vec2f>,
    pub real_dests: Vec<Vec2f>,
    pub attacker_dests: Vec<Vec2f>,
    /// Update distance, meters.
    pub step_length: f64,
    pub e_max: f64,
    /// Explicit horizon; `None` derives it from the routes (see [`Scenario::horizon`]).
    pub tau: Option<usize>,
    pub seed: u64,
    pub tolerance: f64,
}

impl Scenario {
    pub fn from_file(file: ScenarioFile) -> Result<Self, HarnessError> {
        if file.schema_version != SCHEMA_VERSION {
            return Err(HarnessError::Schema {
                path: "schema_version".into(),
                message: format!(
                    "unsupported version {} (expected {SCHEMA_VERSION})",
                    file.schema_version
                ),
            });
        }
        let scenario = Scenario {
            name: file.name.unwrap_or_else(|| "scenario".into()),
            starts: file.starts,
            real_dests: file.real_dests,
            attacker_dests: file.attacker_dests,
            step_length: file.step_length,
            e_max: file.e_max,
            tau: file.tau,
            seed: file.seed,
            tolerance: file.tolerance.unwrap_or(DEFAULT_TOLERANCE),
        };
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn to_file(&self) -> ScenarioFile {
        ScenarioFile {
            schema_version: SCHEMA_VERSION,
            name: Some(self.name.clone()),
            starts: self.starts.clone(),
            real_dests: self.real_dests.clone(),
            attacker_dests: self.attacker_dests.clone(),
            step_length: self.step_length,
            e_max: self.e_max,
            tau: self.tau,
            seed: self.seed,
            tolerance: Some(self.tolerance),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("scenario serializes")
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let invariant = |path: String, message: String| HarnessError::Invariant { path, message };
        for (field, points) in [
            ("starts", &self.starts),
            ("real_dests", &self.real_dests),
            ("attacker_dests", &self.attacker_dests),
        ] {
            if points.len() != GROUP_SIZE {
                return Err(invariant(
                    field.into(),
                    format!("expected {GROUP_SIZE} entries, got {}", points.len()),
                ));
            }
            if let Some(i) = points.iter().position(|p| !p.is_finite()) {
                return Err(invariant(
                    format!("{field}[{i}]"),
                    "non-finite coordinate".into(),
                ));
            }
        }
        for (name, value) in [
            ("step_length", self.step_length),
            ("e_max", self.e_max),
            ("tolerance", self.tolerance),
        ] {
            if !(value > 0.0 && value.is_finite()) {
                return Err(invariant(
                    name.into(),
                    format!("must be positive, got {value}"),
                ));
            }
        }
        for i in 0..GROUP_SIZE {
            let gap = self.starts[i].distance(self.real_dests[i]);
            if gap <= self.e_max {
                return Err(invariant(
                    format!("starts[{i}]"),
                    format!(
                        "start is {gap} m from its real destination; it must be more than e_max = {} m away",
                        self.e_max
                    ),
                ));
            }
            if self.starts[i] == self.attacker_dests[i] {
                return Err(invariant(
                    format!("attacker_dests[{i}]"),
                    "coincides with the start".into(),
                ));
            }
        }
        Ok(())
    }

    /// UAVs whose attacker destination lies on the wrong side of the
    /// dominant travel axis. Such destinations are legal but unreachable.
    pub fn warnings(&self) -> Vec<String> {
        (0..GROUP_SIZE)
            .filter(|&i| {
                !check_feasible_destination(self.starts[i], self.real_dests[i], self.attacker_dests[i])
            })
            .map(|i| {
                format!(
                    "UAV {}: attacker destination is opposite the dominant travel direction; the spoofer cannot reach it",
                    i + 1
                )
            })
            .collect()
    }

    /// Explicit `tau`, else three times the longest route in updates.
    pub fn horizon(&self) -> usize {
        self.tau.unwrap_or_else(|| {
            let longest = self
                .starts
                .iter()
                .zip(&self.real_dests)
                .map(|(s, d)| s.distance(*d))
                .fold(0.0, f64::max);
            (DEFAULT_TAU_FACTOR * longest / self.step_length).ceil() as usize
        })
    }

    pub fn game_state(&self) -> Result<GameState<f64>, crate::Error> {
        GameState::new(
            &self.starts,
            &self.real_dests,
            &self.attacker_dests,
            self.step_length,
            self.e_max,
        )
    }

    /// First 16 hex digits of the SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_string(&self.to_file()).expect("scenario serializes");
        let digest = Sha256::digest(canonical.as_bytes());
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Mean distance between attacker and real destinations.
    pub fn mean_dest_gap(&self) -> f64 {
        self.real_dests
            .iter()
            .zip(&self.attacker_dests)
            .map(|(r, a)| r.distance(*a))
            .sum::<f64>()
            / GROUP_SIZE as f64
    }
}

pub fn parse_scenario(text: &str) -> Result<Scenario, HarnessError> {
    let file: ScenarioFile = serde_json::from_str(text).map_err(|e| {
        use serde_json::error::Category;
        match e.classify() {
            Category::Data => HarnessError::Schema {
                path: field_of(&e.to_string()),
                message: e.to_string(),
            },
            _ => HarnessError::Parse(e.to_string()),
        }
    })?;
    Scenario::from_file(file)
}

pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario, HarnessError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| HarnessError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    parse_scenario(&text)
}

/// The bundled reconstruction of the five-UAV layout used by the experiments.
pub fn paper_like() -> Scenario {
    parse_scenario(PAPER_LIKE).expect("bundled scenario is valid")
}

// serde_json names the offending field in backticks, e.g. "missing field `starts`".
fn field_of(message: &str) -> String {
    let mut parts = message.split('`');
    match (parts.next(), parts.next()) {
        (Some(_), Some(field)) if !field.is_empty() => field.to_string(),
        _ => "$".to_string(),
    }
}
