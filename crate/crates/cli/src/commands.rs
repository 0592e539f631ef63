//! Subcommand definitions and dispatch.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use lgi_core::lgi::fine_feasible;
use lgi_core::protocols::Gate;
use lgi_core::pulses::{
    compile_component, fidelity, sequence_unitary_with_drift, verify_decomposition, Component,
    ComponentParams, NmrPair,
};
use lgi_core::qcore::detector_propagator;
use lgi_core::regimes::{
    budget_grid, ctvm_error_budget, detector_lg3_curve, equidistant_lg3_curve, lg3_bound_shift,
    linspace, scan_initial_states, signal_region,
};
use lgi_core::{ComplexMatrix, InequalityReport, MomentSet, PulseSequence};
use serde_json::json;

use crate::config::{eval_expr, parse_config, ExperimentConfig};
use crate::error::{CliError, CliResult};
use crate::report::{self, Format};
use crate::runner::run_experiment_suite;

fn number(s: &str) -> Result<f64, String> {
    eval_expr(s)
}

#[derive(Debug, Parser)]
#[command(
    name = "lgi-lab",
    version,
    about = "Two- and three-time Leggett-Garg inequality experiments"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Points per grid axis (scan, budget, curve).
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    /// Overrides the sampling seed of a run config.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate the experiments of a config and evaluate all inequalities.
    Run { config: PathBuf },
    /// Classify pure initial states `(0, v_y, v_z)` by LG2 outcome.
    Scan { config: PathBuf },
    /// Velocity-detector error budget over a (λ, ωt) grid, or at one point.
    Budget {
        #[arg(long, value_parser = number, default_value = "0.5")]
        lambda_max: f64,
        #[arg(long, value_parser = number, default_value = "pi/2")]
        omega_t_max: f64,
        /// Minimum detectable click probability.
        #[arg(long, value_parser = number, default_value = "0.01")]
        floor: f64,
        /// Rounding applied before comparing with the floor.
        #[arg(long, value_parser = number, default_value = "0.001")]
        resolution: f64,
        /// Single point `λ,ωt`; also reports the LG3 bound shift.
        #[arg(long, value_parser = number, value_delimiter = ',')]
        at: Option<Vec<f64>>,
    },
    /// LG3 curves at equidistant times: `equidistant` or `detector`.
    Curve {
        name: String,
        /// Couplings for the detector curve.
        #[arg(long, value_parser = number, value_delimiter = ',', default_value = "0,0.05,0.11")]
        lambdas: Vec<f64>,
    },
    /// Evaluate inequalities and joint feasibility for moments from a JSON file.
    Check {
        moments: PathBuf,
        #[arg(long, value_parser = number, default_value = "0")]
        bound: f64,
    },
    /// Fidelity of a pulse sequence against a target gate.
    Verify {
        sequence: PathBuf,
        /// identity, cnot, anti_cnot, detector1 or detector2.
        target: String,
        #[arg(long, value_parser = number, default_value = "0.11")]
        lambda: f64,
        #[arg(long, value_parser = number, default_value = "3*pi/10")]
        omega_t: f64,
        #[arg(long, value_parser = number, default_value = "215.15")]
        j_coupling: f64,
        /// Pulse duration in seconds for the drift-aware fidelity.
        #[arg(long, value_parser = number)]
        drift: Option<f64>,
        /// Exit with code 2 if the fidelity is lower.
        #[arg(long, value_parser = number)]
        min_fidelity: Option<f64>,
    },
    /// Print the pulse sequence of a named component.
    Compile {
        /// P, P1, P2, Uc, Uac, Dat, Uv1 or Uv2.
        component: String,
        #[arg(long, value_parser = number, default_value = "0.11")]
        lambda: f64,
        #[arg(long, value_parser = number, default_value = "3*pi/10")]
        omega_t: f64,
        #[arg(long, value_parser = number, default_value = "1")]
        a: f64,
        #[arg(long, value_parser = number, default_value = "0.1")]
        tau: f64,
    },
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

pub fn load_config(path: &Path) -> CliResult<ExperimentConfig> {
    parse_config(&read(path)?)
}

fn grid(cli: &Cli, default: usize) -> CliResult<usize> {
    match cli.grid.unwrap_or(default) {
        n if n >= 2 => Ok(n),
        _ => Err(CliError::Usage("--grid needs at least 2 points".into())),
    }
}

fn render<S: serde::Serialize>(
    format: Format,
    value: &S,
    csv: impl FnOnce() -> CliResult<String>,
) -> CliResult<String> {
    match format {
        Format::Json => report::to_json(value),
        Format::Csv => csv(),
    }
}

/// Runs one command and returns its rendered output.
pub fn execute(cli: &Cli) -> CliResult<String> {
    match &cli.command {
        Command::Run { config } => {
            let mut cfg = load_config(config)?;
            if let Some(seed) = cli.seed {
                cfg.seed = seed;
            }
            let r = run_experiment_suite(&cfg)?;
            render(cli.format, &r, || report::run_csv(&r))
        }
        Command::Scan { config } => {
            let cfg = load_config(config)?;
            let map = scan_initial_states(cfg.omega_t, grid(cli, 101)?, cfg.times)?;
            render(cli.format, &map, || report::scan_csv(&map))
        }
        Command::Budget {
            lambda_max,
            omega_t_max,
            floor,
            resolution,
            at,
        } => match at {
            Some(point) => {
                let &[lambda, omega_t] = point.as_slice() else {
                    return Err(CliError::Usage("--at takes `lambda,omega_t`".into()));
                };
                let budget = ctvm_error_budget(lambda, omega_t)?;
                let shift = lg3_bound_shift(lambda, omega_t)?;
                let out = json!({ "budget": budget, "bound_shift": shift });
                render(cli.format, &out, || {
                    report::key_value_csv(&[
                        ("lambda", lambda.to_string()),
                        ("omega_t", omega_t.to_string()),
                        ("multi_sign_prob", budget.multi_sign_prob.to_string()),
                        ("back_action_prob", budget.back_action_prob.to_string()),
                        ("approx_deviation", budget.approx_deviation.to_string()),
                        ("p1_signal", budget.p1_signal.to_string()),
                        ("shift_3.1", shift.shifts[0].to_string()),
                        ("shift_3.2", shift.shifts[1].to_string()),
                        ("shift_3.3", shift.shifts[2].to_string()),
                        ("shift_3.4", shift.shifts[3].to_string()),
                        ("quoted_shift", shift.quoted.to_string()),
                    ])
                })
            }
            None => {
                let n = grid(cli, 51)?;
                let lambdas = linspace(0.0, *lambda_max, n)?;
                let omega_ts = linspace(0.0, *omega_t_max, n)?;
                let cells = budget_grid(&lambdas, &omega_ts)?;
                let signal = signal_region(&lambdas, &omega_ts, *floor, *resolution)?;
                let out = json!({ "cells": cells, "signal": signal });
                render(cli.format, &out, || report::budget_csv(&cells, &signal))
            }
        },
        Command::Curve { name, lambdas } => {
            let n = grid(cli, 201)?;
            match name.as_str() {
                "equidistant" => {
                    let rows = equidistant_lg3_curve::<f64>(n)?;
                    render(cli.format, &rows, || report::equidistant_csv(&rows))
                }
                "detector" => {
                    let rows = detector_lg3_curve(lambdas, n)?;
                    render(cli.format, &rows, || report::detector_curve_csv(&rows))
                }
                other => Err(CliError::Usage(format!(
                    "unknown curve `{other}` (equidistant|detector)"
                ))),
            }
        }
        Command::Check { moments, bound } => {
            let text = read(moments)?;
            let m: MomentSet = serde_json::from_str(&text)
                .map_err(|e| CliError::invalid("moments", e.to_string()))?;
            m.validate()
                .map_err(|e| CliError::invalid("moments", e.to_string()))?;
            let r = InequalityReport::evaluate(&m, *bound);
            let f = fine_feasible(&m);
            let out = json!({ "moments": m, "inequalities": r, "feasibility": f });
            render(cli.format, &out, || report::check_csv(&r, &f))
        }
        Command::Verify {
            sequence,
            target,
            lambda,
            omega_t,
            j_coupling,
            drift,
            min_fidelity,
        } => {
            let seq: PulseSequence = read(sequence)?
                .parse()
                .map_err(|e: lgi_core::Error| CliError::invalid("sequence", e.to_string()))?;
            let pair = NmrPair {
                j_coupling_hz: *j_coupling,
            };
            let goal = target_unitary(target, *lambda, *omega_t)?;
            let ideal = verify_decomposition(&seq, &goal, &pair)?;
            let drifted = match drift {
                Some(tau) => {
                    let u = sequence_unitary_with_drift(&seq, &pair, *tau)?;
                    Some(fidelity(&u, &goal)?)
                }
                None => None,
            };
            if let Some(min) = min_fidelity {
                let worst = drifted.map_or(ideal, |d| d.min(ideal));
                if worst < *min {
                    return Err(CliError::Invariant(format!(
                        "fidelity {worst} is below the required {min}"
                    )));
                }
            }
            let out = json!({
                "target": target,
                "elements": seq.len(),
                "fidelity": ideal,
                "drift_fidelity": drifted,
            });
            render(cli.format, &out, || {
                let mut rows = vec![
                    ("target", target.clone()),
                    ("elements", seq.len().to_string()),
                    ("fidelity", ideal.to_string()),
                ];
                if let Some(d) = drifted {
                    rows.push(("drift_fidelity", d.to_string()));
                }
                report::key_value_csv(&rows)
            })
        }
        Command::Compile {
            component,
            lambda,
            omega_t,
            a,
            tau,
        } => {
            let c = Component::parse(component)
                .map_err(|e| CliError::invalid("component", e.to_string()))?;
            let params = ComponentParams {
                lambda: *lambda,
                omega_t: *omega_t,
                a: *a,
                tau: *tau,
            };
            let seq = compile_component(c, &params)?;
            match cli.format {
                Format::Csv => Ok(seq.to_string()),
                Format::Json => report::to_json(&json!({
                    "component": c.name(),
                    "elements": seq.len(),
                    "sequence": seq.to_string(),
                })),
            }
        }
    }
}

fn target_unitary(name: &str, lambda: f64, omega_t: f64) -> CliResult<ComplexMatrix> {
    Ok(match name {
        "identity" => ComplexMatrix::identity(4),
        "cnot" => Gate::Cnot.matrix(),
        "anti_cnot" => Gate::AntiCnot.matrix(),
        "detector1" => detector_propagator(1.0, lambda, omega_t)?,
        "detector2" => detector_propagator(1.0, lambda, 2.0 * omega_t)?,
        other => {
            return Err(CliError::Usage(format!(
                "unknown target `{other}` (identity|cnot|anti_cnot|detector1|detector2)"
            )))
        }
    })
}
