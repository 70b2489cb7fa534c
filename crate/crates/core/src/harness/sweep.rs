use std::path::Path;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::output::{write_cells, Summary, SweepEcho};
use super::{streams, HarnessError, Scenario};
use crate::game::run_episode;
use crate::metrics::{capture_report, deviation_series};
use crate::{CaptureReport, DefenderPolicy, DeviationSeries, EpisodeRecord};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    EMax,
    StepLength,
    DestShift,
}

impl SweepVariable {
    pub fn name(self) -> &'static str {
        match self {
            SweepVariable::EMax => "e_max",
            SweepVariable::StepLength => "step_length",
            SweepVariable::DestShift => "dest_shift",
        }
    }
}

impl std::str::FromStr for SweepVariable {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "e_max" => Ok(SweepVariable::EMax),
            "step_length" | "step" => Ok(SweepVariable::StepLength),
            "dest_shift" => Ok(SweepVariable::DestShift),
            _ => Err(format!(
                "unknown sweep variable `{s}` (expected e_max, step_length or dest_shift)"
            )),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub values: Vec<f64>,
    pub policies: Vec<DefenderPolicy>,
    pub attacker_enabled: bool,
}

impl SweepSpec {
    pub fn new(variable: SweepVariable, values: Vec<f64>, policies: Vec<DefenderPolicy>) -> Self {
        Self {
            variable,
            values,
            policies,
            attacker_enabled: true,
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.values.is_empty() {
            return Err(HarnessError::Sweep("no values".into()));
        }
        if self.values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(HarnessError::Sweep(
                "values must be strictly increasing".into(),
            ));
        }
        let lower_ok = |v: f64| match self.variable {
            SweepVariable::DestShift => v >= 0.0,
            _ => v > 0.0,
        };
        if let Some(v) = self
            .values
            .iter()
            .find(|v| !v.is_finite() || !lower_ok(**v))
        {
            return Err(HarnessError::Sweep(format!(
                "value {v} out of range for {}",
                self.variable.name()
            )));
        }
        if self.policies.is_empty() {
            return Err(HarnessError::Sweep("no policies".into()));
        }
        for (i, p) in self.policies.iter().enumerate() {
            if self.policies[..i].contains(p) {
                return Err(HarnessError::Sweep(format!("policy `{p}` listed twice")));
            }
        }
        Ok(())
    }

    /// The scenario for one sweep value.
    pub fn apply(&self, base: &Scenario, value: f64) -> Result<Scenario, HarnessError> {
        let scenario = match self.variable {
            SweepVariable::EMax => Scenario {
                e_max: value,
                ..base.clone()
            },
            SweepVariable::StepLength => Scenario {
                step_length: value,
                ..base.clone()
            },
            SweepVariable::DestShift => {
                let mut rng = streams::rng(base.seed, streams::DEST_SHIFT);
                dest_shift(base, value, ShiftDistribution::Uniform, &mut rng)
            }
        };
        scenario.validate()?;
        Ok(scenario)
    }
}

/// How per-UAV shift amounts are drawn around the requested mean.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ShiftDistribution {
    /// Uniform on `[0, 2 * mean]`.
    Uniform,
    /// Exactly `mean` for every UAV.
    Constant,
}

/// Moves each attacker destination along x toward its real destination by a
/// random amount with mean `shift`, never past the real destination's x.
pub fn dest_shift<R: Rng + ?Sized>(
    scenario: &Scenario,
    shift: f64,
    distribution: ShiftDistribution,
    rng: &mut R,
) -> Scenario {
    let mut out = scenario.clone();
    for (a, r) in out.attacker_dests.iter_mut().zip(&scenario.real_dests) {
        let amount = match distribution {
            ShiftDistribution::Constant => shift,
            ShiftDistribution::Uniform if shift > 0.0 => rng.random_range(0.0..=2.0 * shift),
            ShiftDistribution::Uniform => 0.0,
        };
        let gap = r.x - a.x;
        a.x += amount.min(gap.abs()) * gap.signum();
    }
    out
}

/// One simulated cell with its per-UAV metrics.
#[derive(Clone, Debug)]
pub struct CellResult {
    pub label: String,
    pub variable: Option<SweepVariable>,
    pub value: Option<f64>,
    pub scenario: Scenario,
    pub record: EpisodeRecord<f64>,
    pub deviations: Vec<DeviationSeries<f64>>,
    pub captures: Vec<CaptureReport<f64>>,
}

impl CellResult {
    pub fn mean_theta_index(&self) -> f64 {
        self.deviations.iter().map(|d| d.theta_index).sum::<f64>() / self.deviations.len() as f64
    }

    pub fn captured(&self) -> Vec<usize> {
        self.captures
            .iter()
            .enumerate()
            .filter(|(_, c)| c.captured)
            .map(|(i, _)| i)
            .collect()
    }
}

pub fn run_cell(
    scenario: &Scenario,
    policy: DefenderPolicy,
    attacker_enabled: bool,
    label: String,
) -> Result<CellResult, HarnessError> {
    let initial = scenario.game_state()?;
    let mut rng = streams::rng(scenario.seed, streams::POLICY);
    let record = run_episode(
        &initial,
        policy,
        scenario.horizon(),
        attacker_enabled,
        &mut rng,
    )?;
    let n = initial.len();
    let deviations = (0..n)
        .map(|i| {
            deviation_series(
                &record.trajectory(i),
                &record.no_attack_trajectory(i),
                &record.attack_trajectory(i),
            )
        })
        .collect();
    let captures = (0..n)
        .map(|i| {
            let uav = &record.final_state.uavs[i];
            capture_report(
                &record.trajectory(i),
                uav.ever_deflected,
                uav.attacker_dest,
                scenario.e_max,
            )
        })
        .collect();
    Ok(CellResult {
        label,
        variable: None,
        value: None,
        scenario: scenario.clone(),
        record,
        deviations,
        captures,
    })
}

fn format_value(v: f64) -> String {
    format!("{v}")
}

/// Runs every (value, policy) cell and writes per-cell CSVs plus `summary.json`.
pub fn run_sweep(
    scenario: &Scenario,
    sweep: &SweepSpec,
    out_dir: &Path,
) -> Result<Vec<CellResult>, HarnessError> {
    sweep.validate()?;
    scenario.validate()?;
    let jobs: Vec<(f64, DefenderPolicy)> = sweep
        .values
        .iter()
        .flat_map(|v| sweep.policies.iter().map(move |p| (*v, *p)))
        .collect();
    let cells = jobs
        .par_iter()
        .map(|&(value, policy)| {
            let cell_scenario = sweep.apply(scenario, value)?;
            let label = format!(
                "{}_{}_{}",
                sweep.variable.name(),
                format_value(value),
                policy
            );
            let mut cell = run_cell(&cell_scenario, policy, sweep.attacker_enabled, label)?;
            cell.variable = Some(sweep.variable);
            cell.value = Some(value);
            Ok(cell)
        })
        .collect::<Result<Vec<_>, HarnessError>>()?;
    let summary = Summary::new(scenario, Some(SweepEcho::from(sweep)), &cells);
    write_cells(out_dir, scenario, &cells, &summary)?;
    Ok(cells)
}

/// A single episode written with the same layout as a sweep cell.
pub fn run_single(
    scenario: &Scenario,
    policy: DefenderPolicy,
    attacker_enabled: bool,
    out_dir: &Path,
) -> Result<CellResult, HarnessError> {
    scenario.validate()?;
    let cell = run_cell(scenario, policy, attacker_enabled, format!("run_{policy}"))?;
    let cells = vec![cell];
    let summary = Summary::new(scenario, None, &cells);
    write_cells(out_dir, scenario, &cells, &summary)?;
    Ok(cells.into_iter().next().expect("one cell"))
}
