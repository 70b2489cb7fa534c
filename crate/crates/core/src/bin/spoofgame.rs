use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use spoofgame::harness::{
    load_scenario, run_single, run_sweep, CellResult, HarnessError, Scenario, SweepSpec,
    SweepVariable,
};
use spoofgame::DefenderPolicy;

/// Simulate GPS spoofing against a five-UAV fleet defended by cooperative localization.
#[derive(Debug, Parser)]
#[command(name = "spoofgame", version)]
struct Cli {
    /// Override the scenario's random seed.
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one episode and write its trajectory, metrics and summary.
    Run {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long, default_value = "stackelberg")]
        policy: DefenderPolicy,
        #[arg(long)]
        out: PathBuf,
        /// Let every UAV fly honestly.
        #[arg(long)]
        no_attacker: bool,
    },
    /// Run a grid of episodes over one parameter and a set of policies.
    Sweep {
        #[arg(long)]
        scenario: PathBuf,
        /// e_max, step_length or dest_shift.
        #[arg(long)]
        var: SweepVariable,
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<f64>,
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "stackelberg,random,deterministic,none"
        )]
        policies: Vec<DefenderPolicy>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        no_attacker: bool,
    },
    /// Check a scenario file and report feasibility warnings.
    Validate {
        #[arg(long)]
        scenario: PathBuf,
    },
}

fn load(path: &PathBuf, seed: Option<u64>) -> Result<Scenario, HarnessError> {
    let mut scenario = load_scenario(path)?;
    if let Some(seed) = seed {
        scenario.seed = seed;
    }
    for warning in scenario.warnings() {
        eprintln!("warning: {warning}");
    }
    Ok(scenario)
}

fn report(cell: &CellResult) {
    let captured: Vec<String> = cell
        .captured()
        .iter()
        .map(|i| (i + 1).to_string())
        .collect();
    println!(
        "{:<32} mean_theta={:.4} captured=[{}] J_d={:.6e}",
        cell.label,
        cell.mean_theta_index(),
        captured.join(","),
        cell.record.total_defender_utility()
    );
}

fn execute(cli: Cli) -> Result<(), HarnessError> {
    match cli.command {
        Command::Run {
            scenario,
            policy,
            out,
            no_attacker,
        } => {
            let scenario = load(&scenario, cli.seed)?;
            let cell = run_single(&scenario, policy, !no_attacker, &out)?;
            report(&cell);
        }
        Command::Sweep {
            scenario,
            var,
            values,
            policies,
            out,
            no_attacker,
        } => {
            let scenario = load(&scenario, cli.seed)?;
            let mut sweep = SweepSpec::new(var, values, policies);
            sweep.attacker_enabled = !no_attacker;
            for cell in run_sweep(&scenario, &sweep, &out)? {
                report(&cell);
            }
        }
        Command::Validate { scenario } => {
            let scenario = load(&scenario, cli.seed)?;
            println!(
                "ok: {} (hash {}, horizon {} steps)",
                scenario.name,
                scenario.hash(),
                scenario.horizon()
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return ExitCode::from(if err.use_stderr() { 1 } else { 0 });
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error[{}]: {err}", err.code());
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
