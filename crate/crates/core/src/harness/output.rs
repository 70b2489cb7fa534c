use std::io::Write;
use std::path::Path;

use serde::Serialize;

use super::sweep::{CellResult, ShiftDistribution, SweepSpec, SweepVariable};
use super::{HarnessError, Scenario};
use crate::metrics::DEGENERATE_DENOMINATOR;
use crate::DefenderPolicy;

const TRAJECTORY_HEADER: [&str; 13] = [
    "scenario_hash",
    "cell",
    "seed",
    "step",
    "uav",
    "x",
    "y",
    "x_ref_r",
    "y_ref_r",
    "x_ref_f",
    "y_ref_f",
    "defend",
    "attack",
];

const METRICS_HEADER: [&str; 12] = [
    "scenario_hash",
    "cell",
    "seed",
    "uav",
    "theta_index",
    "retained_steps",
    "raw_theta_min",
    "raw_theta_max",
    "min_dist_attacker_dest",
    "captured",
    "capture_step",
    "ever_deflected",
];

#[derive(Clone, Debug, Serialize)]
pub struct SweepEcho {
    pub variable: SweepVariable,
    pub values: Vec<f64>,
    pub policies: Vec<DefenderPolicy>,
    pub attacker_enabled: bool,
}

impl From<&SweepSpec> for SweepEcho {
    fn from(s: &SweepSpec) -> Self {
        Self {
            variable: s.variable,
            values: s.values.clone(),
            policies: s.policies.clone(),
            attacker_enabled: s.attacker_enabled,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Conventions {
    pub uav_indices: &'static str,
    pub decision_row: &'static str,
    pub theta_average: String,
    pub theta_clamp: &'static str,
    pub dest_shift_distribution: ShiftDistribution,
    pub capture_rule: &'static str,
    pub attack_reference: &'static str,
}

impl Default for Conventions {
    fn default() -> Self {
        Self {
            uav_indices: "1-based in all outputs",
            decision_row: "defend/attack on row `step` are the actions that produced that row's positions; empty on step 0",
            theta_average: format!(
                "mean over steps with |x_r - x_f|^2 >= {DEGENERATE_DENOMINATOR} m^2"
            ),
            theta_clamp: "per-step theta clamped to [0, 1]; raw extremes in metrics CSV",
            dest_shift_distribution: ShiftDistribution::Uniform,
            capture_rule: "deflected at least once and within e_max of the attacker destination",
            attack_reference: "each UAV spoofed at every step until it passes the attacker destination, no defense",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CellSummary {
    pub label: String,
    pub variable: Option<SweepVariable>,
    pub value: Option<f64>,
    pub policy: DefenderPolicy,
    pub tau: usize,
    pub e_max: f64,
    pub step_length: f64,
    pub mean_dest_gap: f64,
    pub mean_theta_index: f64,
    pub theta_index: Vec<f64>,
    pub captured_count: usize,
    /// 1-based.
    pub captured_uavs: Vec<usize>,
    pub min_dist_attacker_dest: Vec<f64>,
    pub j_attacker: f64,
    pub j_defender: f64,
}

impl From<&CellResult> for CellSummary {
    fn from(c: &CellResult) -> Self {
        let captured = c.captured();
        Self {
            label: c.label.clone(),
            variable: c.variable,
            value: c.value,
            policy: c.record.policy,
            tau: c.record.tau(),
            e_max: c.scenario.e_max,
            step_length: c.scenario.step_length,
            mean_dest_gap: c.scenario.mean_dest_gap(),
            mean_theta_index: c.mean_theta_index(),
            theta_index: c.deviations.iter().map(|d| d.theta_index).collect(),
            captured_count: captured.len(),
            captured_uavs: captured.iter().map(|i| i + 1).collect(),
            min_dist_attacker_dest: c
                .captures
                .iter()
                .map(|r| r.min_distance_to_attacker_dest)
                .collect(),
            j_attacker: c.record.total_attacker_utility(),
            j_defender: c.record.total_defender_utility(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub schema_version: u32,
    pub tool: &'static str,
    pub version: &'static str,
    pub scenario_hash: String,
    pub seed: u64,
    pub scenario: Scenario,
    pub sweep: Option<SweepEcho>,
    pub conventions: Conventions,
    pub cells: Vec<CellSummary>,
}

impl Summary {
    pub fn new(scenario: &Scenario, sweep: Option<SweepEcho>, cells: &[CellResult]) -> Self {
        Self {
            schema_version: 1,
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            scenario_hash: scenario.hash(),
            seed: scenario.seed,
            scenario: scenario.clone(),
            sweep,
            conventions: Conventions::default(),
            cells: cells.iter().map(CellSummary::from).collect(),
        }
    }
}

fn index_field(i: Option<usize>) -> String {
    i.map(|i| (i + 1).to_string()).unwrap_or_default()
}

fn opt_field(v: Option<f64>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

fn trajectory_csv(hash: &str, cell: &CellResult) -> Result<Vec<u8>, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(TRAJECTORY_HEADER)?;
    let seed = cell.scenario.seed.to_string();
    let rec = &cell.record;
    for (t, row) in rec.positions.iter().enumerate() {
        let decision = t.checked_sub(1).map(|k| rec.decisions[k]);
        for (i, p) in row.iter().enumerate() {
            let r = rec.no_attack_ref[t][i];
            let f = rec.attack_ref[t][i];
            w.write_record([
                hash.to_string(),
                cell.label.clone(),
                seed.clone(),
                t.to_string(),
                (i + 1).to_string(),
                p.x.to_string(),
                p.y.to_string(),
                r.x.to_string(),
                r.y.to_string(),
                f.x.to_string(),
                f.y.to_string(),
                index_field(decision.and_then(|d| d.defend)),
                index_field(decision.and_then(|d| d.attack)),
            ])?;
        }
    }
    w.into_inner().map_err(|e| e.into_error().into())
}

fn metrics_csv(hash: &str, cell: &CellResult) -> Result<Vec<u8>, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(METRICS_HEADER)?;
    let seed = cell.scenario.seed.to_string();
    for (i, (dev, cap)) in cell.deviations.iter().zip(&cell.captures).enumerate() {
        let uav = &cell.record.final_state.uavs[i];
        w.write_record([
            hash.to_string(),
            cell.label.clone(),
            seed.clone(),
            (i + 1).to_string(),
            dev.theta_index.to_string(),
            dev.retained_steps().to_string(),
            opt_field(dev.raw_range.map(|r| r.0)),
            opt_field(dev.raw_range.map(|r| r.1)),
            cap.min_distance_to_attacker_dest.to_string(),
            cap.captured.to_string(),
            cap.capture_step.map(|s| s.to_string()).unwrap_or_default(),
            uav.ever_deflected.to_string(),
        ])?;
    }
    w.into_inner().map_err(|e| e.into_error().into())
}

/// Writes `bytes` to a temporary file in `dir` and renames it into place.
fn write_atomic(dir: &Path, name: &str, bytes: &[u8]) -> Result<(), HarnessError> {
    let target = dir.join(name);
    let wrap = |source| HarnessError::Write {
        path: target.clone(),
        source,
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(wrap)?;
    tmp.write_all(bytes).map_err(wrap)?;
    tmp.as_file().sync_all().map_err(wrap)?;
    tmp.persist(&target).map_err(|e| wrap(e.error))?;
    Ok(())
}

/// Emits `trajectories_<cell>.csv` and `metrics_<cell>.csv` for every cell,
/// then `summary.json` once all cells are on disk.
pub fn write_cells(
    out_dir: &Path,
    scenario: &Scenario,
    cells: &[CellResult],
    summary: &Summary,
) -> Result<(), HarnessError> {
    std::fs::create_dir_all(out_dir).map_err(|source| HarnessError::Write {
        path: out_dir.to_path_buf(),
        source,
    })?;
    let hash = scenario.hash();
    let csv_err = |name: &str, e: csv::Error| HarnessError::Write {
        path: out_dir.join(name),
        source: std::io::Error::other(e),
    };
    for cell in cells {
        let name = format!("trajectories_{}.csv", cell.label);
        let bytes = trajectory_csv(&hash, cell).map_err(|e| csv_err(&name, e))?;
        write_atomic(out_dir, &name, &bytes)?;
        let name = format!("metrics_{}.csv", cell.label);
        let bytes = metrics_csv(&hash, cell).map_err(|e| csv_err(&name, e))?;
        write_atomic(out_dir, &name, &bytes)?;
    }
    let mut json = serde_json::to_vec_pretty(summary).expect("summary serializes");
    json.push(b'\n');
    write_atomic(out_dir, "summary.json", &json)
}
