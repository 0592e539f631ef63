//! JSON and CSV renderings. JSON objects come out with sorted keys and CSV
//! tables carry a header row, so equal inputs give byte-identical output.

use lgi_core::lgi::JointFeasibility;
use lgi_core::regimes::{BudgetCell, DetectorCurveRow, SignalGrid};
use lgi_core::{InequalityReport, RegionMap};
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::runner::RunReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

pub fn to_json<S: Serialize>(value: &S) -> CliResult<String> {
    // Going through `Value` sorts object keys.
    let v = serde_json::to_value(value).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut s = serde_json::to_string_pretty(&v).map_err(|e| CliError::Usage(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

type Table = csv::Writer<Vec<u8>>;

fn table(header: &[&str], fill: impl FnOnce(&mut Table) -> csv::Result<()>) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let run = |w: &mut Table| -> csv::Result<()> {
        w.write_record(header)?;
        fill(w)?;
        w.flush()?;
        Ok(())
    };
    run(&mut w).map_err(|e| CliError::Usage(e.to_string()))?;
    let bytes = w.into_inner().map_err(|e| CliError::Usage(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Usage(e.to_string()))
}

const RUN_HEADER: [&str; 6] = [
    "section",
    "label",
    "value",
    "bound",
    "satisfied",
    "provenance",
];

fn inequality_rows(w: &mut Table, r: &InequalityReport, provenance: &str) -> csv::Result<()> {
    for (section, entries) in [("lg2", &r.lg2), ("lg3", &r.lg3)] {
        for e in entries {
            w.write_record([
                section,
                e.label,
                &e.value.to_string(),
                &e.bound.to_string(),
                &e.satisfied.to_string(),
                provenance,
            ])?;
        }
    }
    w.write_record(["regime", "regime", r.regime.as_str(), "", "", provenance])
}

fn feasibility_rows(w: &mut Table, f: &JointFeasibility<f64>, provenance: &str) -> csv::Result<()> {
    w.write_record([
        "feasibility",
        "feasible",
        &f.feasible.to_string(),
        "",
        "",
        provenance,
    ])?;
    w.write_record([
        "feasibility",
        "t_lo",
        &f.t_lo.to_string(),
        "",
        "",
        provenance,
    ])?;
    w.write_record([
        "feasibility",
        "t_hi",
        &f.t_hi.to_string(),
        "",
        "",
        provenance,
    ])
}

/// Long-format table: one value per row, grouped by section.
pub fn run_csv(r: &RunReport) -> CliResult<String> {
    let prov = r.provenance.as_str();
    table(&RUN_HEADER, |w| {
        for (k, v) in moment_pairs(&r.moments) {
            w.write_record(["moment", k, &v.to_string(), "", "", prov])?;
        }
        if let Some(se) = &r.stderr {
            for (k, v) in moment_pairs(se) {
                w.write_record(["stderr", k, &v.to_string(), "", "", prov])?;
            }
        }
        inequality_rows(w, &r.inequalities, prov)?;
        feasibility_rows(w, &r.feasibility, prov)?;
        for p in &r.probabilities {
            let label = format!("{}.{}.{}", p.moment, p.circuit, p.outcome);
            w.write_record([
                "probability",
                &label,
                &p.probability.to_string(),
                "",
                "",
                "exact",
            ])?;
        }
        if let Some(s) = &r.bound_shift {
            for (e, (shift, bound)) in r
                .inequalities
                .lg3
                .iter()
                .zip(s.shifts.iter().zip(s.adjusted_bounds))
            {
                w.write_record([
                    "bound_shift",
                    e.label,
                    &shift.to_string(),
                    &bound.to_string(),
                    "",
                    "exact",
                ])?;
            }
            w.write_record([
                "bound_shift",
                "quoted",
                &s.quoted.to_string(),
                "",
                "",
                "exact",
            ])?;
        }
        if let Some(c) = &r.calibration {
            w.write_record([
                "calibration",
                "gamma_eff",
                &c.gamma_eff.to_string(),
                "",
                "",
                "exact",
            ])?;
            w.write_record([
                "calibration",
                "effective_delay",
                &c.effective_delay.to_string(),
                "",
                "",
                "exact",
            ])?;
        }
        Ok(())
    })
}

fn moment_pairs(m: &lgi_core::MomentSet) -> [(&'static str, f64); 6] {
    [
        ("q1", m.q1),
        ("q2", m.q2),
        ("q3", m.q3),
        ("c12", m.c12),
        ("c23", m.c23),
        ("c13", m.c13),
    ]
}

pub fn scan_csv(map: &RegionMap) -> CliResult<String> {
    let mut buf = Vec::new();
    map.write_csv(&mut buf)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    String::from_utf8(buf).map_err(|e| CliError::Usage(e.to_string()))
}

pub fn budget_csv(cells: &[BudgetCell<f64>], signal: &SignalGrid<f64>) -> CliResult<String> {
    let header = [
        "lambda",
        "omega_t",
        "multi_sign_prob",
        "back_action_prob",
        "approx_deviation",
        "p1_signal",
        "detectable",
    ];
    table(&header, |w| {
        for (c, detectable) in cells.iter().zip(&signal.detectable) {
            let b = &c.budget;
            w.write_record([
                c.lambda.to_string(),
                c.omega_t.to_string(),
                b.multi_sign_prob.to_string(),
                b.back_action_prob.to_string(),
                b.approx_deviation.to_string(),
                b.p1_signal.to_string(),
                detectable.to_string(),
            ])?;
        }
        Ok(())
    })
}

pub fn equidistant_csv(rows: &[[f64; 3]]) -> CliResult<String> {
    table(&["omega_t_over_pi", "lg3a", "lg3b"], |w| {
        for r in rows {
            w.write_record(r.map(|x| x.to_string()))?;
        }
        Ok(())
    })
}

pub fn detector_curve_csv(rows: &[DetectorCurveRow<f64>]) -> CliResult<String> {
    let header = [
        "omega_t_over_pi",
        "lambda",
        "lg3a_ideal",
        "lg3a_ctvm",
        "lg3b_ideal",
        "lg3b_ctvm",
    ];
    table(&header, |w| {
        for r in rows {
            w.write_record(
                [
                    r.omega_t_over_pi,
                    r.lambda,
                    r.lg3a_ideal,
                    r.lg3a_ctvm,
                    r.lg3b_ideal,
                    r.lg3b_ctvm,
                ]
                .map(|x| x.to_string()),
            )?;
        }
        Ok(())
    })
}

/// Same layout as the run table, for a single supplied moment set.
pub fn check_csv(r: &InequalityReport, f: &JointFeasibility<f64>) -> CliResult<String> {
    table(&RUN_HEADER, |w| {
        inequality_rows(w, r, "exact")?;
        feasibility_rows(w, f, "exact")
    })
}

pub fn key_value_csv(rows: &[(&str, String)]) -> CliResult<String> {
    table(&["key", "value"], |w| {
        for (k, v) in rows {
            w.write_record([*k, v.as_str()])?;
        }
        Ok(())
    })
}
