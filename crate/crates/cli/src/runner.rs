use lgi_core::lgi::{fine_feasible, Moment, Pair};
use lgi_core::noise::{calibrate_damping, DampedSpin, DampingTargets};
use lgi_core::protocols::{
    correlator_from_probs, ctvm_correlator, ctvm_p1, expectation_q, expectation_with, inm_circuit,
    inm_circuit_with, projective_two_time, projective_two_time_with, sample_counts,
    sampled_expectation, sampled_inm_correlator, Gate, P1Mode,
};
use lgi_core::qcore::{density_from_bloch, QubitMap};
use lgi_core::regimes::{lg3_bound_shift, BoundShift};
use lgi_core::{
    CalibratedDamping, DetectorModel, InequalityReport, JointFeasibility, MomentSet, QubitState,
    RelaxationParams, SpinModel, TwoTimeProbabilities,
};
use serde::Serialize;

use crate::config::{BoundMode, ExperimentConfig, Protocol};
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Exact,
    Sampled,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Exact => "exact",
            Provenance::Sampled => "sampled",
        }
    }
}

/// One outcome probability of one measurement circuit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbabilityRow {
    pub moment: &'static str,
    /// `single`, `projective`, `cnot`, `anti_cnot` or `detector`.
    pub circuit: &'static str,
    /// Signs of `Q` at the measured times, followed by the ancilla bit for
    /// the INM circuits; `0`/`1` for the detector.
    pub outcome: &'static str,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub config: ExperimentConfig,
    pub provenance: Provenance,
    pub moments: MomentSet,
    /// Standard errors of the sampled moments.
    pub stderr: Option<MomentSet>,
    pub inequalities: InequalityReport,
    pub feasibility: JointFeasibility,
    pub probabilities: Vec<ProbabilityRow>,
    pub bound_shift: Option<BoundShift<f64>>,
    pub calibration: Option<CalibratedDamping>,
    pub version: &'static str,
}

const PAIR_MOMENTS: [Moment; 3] = [Moment::C12, Moment::C23, Moment::C13];
const SINGLE_MOMENTS: [Moment; 3] = [Moment::Q1, Moment::Q2, Moment::Q3];

/// Draws shots on consecutive generator streams so every experiment of a run
/// is independent yet reproducible from one seed.
struct Sampler {
    shots: Option<usize>,
    seed: u64,
    stream: u64,
}

impl Sampler {
    fn next_stream(&mut self) -> u64 {
        self.stream += 1;
        self.stream
    }

    fn expectation(&mut self, q: f64) -> CliResult<(f64, f64)> {
        let stream = self.next_stream();
        match self.shots {
            None => Ok((q, 0.0)),
            Some(n) => {
                let e = sampled_expectation((1.0 + q) / 2.0, n, self.seed, stream)?;
                Ok((e.mean, e.stderr))
            }
        }
    }

    fn two_time(&mut self, p: &TwoTimeProbabilities) -> CliResult<(f64, f64)> {
        let stream = self.next_stream();
        match self.shots {
            None => Ok((correlator_from_probs(p), 0.0)),
            Some(n) => {
                let k = sample_counts(&p.as_array(), n, self.seed, stream)?;
                let c = (k[0] as f64 - k[1] as f64 - k[2] as f64 + k[3] as f64) / n as f64;
                Ok((c, ((1.0 - c * c).max(0.0) / n as f64).sqrt()))
            }
        }
    }

    fn inm(&mut self, cnot: &[f64; 4], anti: &[f64; 4]) -> CliResult<(f64, f64)> {
        let stream = self.next_stream();
        match self.shots {
            None => {
                let kept = TwoTimeProbabilities::new(cnot[0], cnot[2], anti[0], anti[2])?;
                Ok((correlator_from_probs(&kept), 0.0))
            }
            Some(n) => {
                let e = sampled_inm_correlator(cnot, anti, n, self.seed, stream)?;
                Ok((e.mean, e.stderr))
            }
        }
    }

    fn detector(&mut self, p1: f64, lambda: f64) -> CliResult<(f64, f64)> {
        let stream = self.next_stream();
        let (p1, p1_err) = match self.shots {
            None => (p1, 0.0),
            Some(n) => {
                let k = sample_counts(&[1.0 - p1, p1], n, self.seed, stream)?;
                let p = k[1] as f64 / n as f64;
                (p, (p * (1.0 - p) / n as f64).sqrt())
            }
        };
        let c = ctvm_correlator(p1, lambda)?;
        Ok((c.value, p1_err / (2.0 * lambda * lambda)))
    }
}

fn push_rows(
    rows: &mut Vec<ProbabilityRow>,
    moment: Moment,
    circuit: &'static str,
    outcomes: &[&'static str],
    probs: &[f64],
) {
    for (&outcome, &probability) in outcomes.iter().zip(probs) {
        rows.push(ProbabilityRow {
            moment: moment.name(),
            circuit,
            outcome,
            probability,
        });
    }
}

const SIGNS: [&str; 2] = ["+", "-"];
const PAIR_SIGNS: [&str; 4] = ["++", "+-", "-+", "--"];
const INM_OUTCOMES: [&str; 4] = ["+0", "+1", "-0", "-1"];
const DETECTOR_OUTCOMES: [&str; 2] = ["0", "1"];

fn resolve_damping(
    cfg: &ExperimentConfig,
    model: &SpinModel,
    initial: &QubitState,
) -> CliResult<(Option<RelaxationParams>, Option<CalibratedDamping>)> {
    let Some(params) = cfg.relaxation else {
        return Ok((None, None));
    };
    if cfg.calibrate.is_empty() {
        return Ok((Some(params), None));
    }
    let spin = DampedSpin {
        model: *model,
        params,
        step_time: cfg.step_time(),
    };
    let fit = calibrate_damping(
        &DampingTargets(cfg.calibration_targets()),
        &spin,
        initial,
        cfg.times,
    )?;
    let fitted = RelaxationParams {
        delay: fit.effective_delay,
        ..params
    };
    Ok((Some(fitted), Some(fit)))
}

/// Runs the single-time and two-time experiments of `cfg`, then evaluates
/// all sixteen inequalities on the assembled moments.
///
/// Exact projective and INM runs are cross-checked against each other; a
/// disagreement above `1e-10` is reported as an invariant breach.
pub fn run_experiment_suite(cfg: &ExperimentConfig) -> CliResult<RunReport> {
    let report = simulate(cfg)?;
    let partner = match cfg.protocol {
        Protocol::Projective => Protocol::Inm,
        Protocol::Inm => Protocol::Projective,
        Protocol::Ctvm => return Ok(report),
    };
    if cfg.shots.is_none() {
        let other = simulate(&ExperimentConfig {
            protocol: partner,
            ..cfg.clone()
        })?;
        for k in Moment::ALL {
            let gap = (report.moments.get(k) - other.moments.get(k)).abs();
            if gap.is_nan() || gap > CROSS_CHECK_TOL {
                return Err(CliError::Invariant(format!(
                    "{} differs between {} and {} by {gap}",
                    k.name(),
                    cfg.protocol.as_str(),
                    partner.as_str()
                )));
            }
        }
    }
    Ok(report)
}

const CROSS_CHECK_TOL: f64 = 1e-10;

fn simulate(cfg: &ExperimentConfig) -> CliResult<RunReport> {
    let model = SpinModel::new(cfg.omega)?;
    let initial = density_from_bloch(&cfg.initial)?;
    let t = cfg.step_time();
    let (relaxation, calibration) = resolve_damping(cfg, &model, &initial)?;
    let damped = relaxation.map(|params| DampedSpin {
        model,
        params,
        step_time: t,
    });

    let mut sampler = Sampler {
        shots: cfg.shots,
        seed: cfg.seed,
        stream: 0,
    };
    let mut rows = Vec::new();
    let mut values = [0.0; 6];
    let mut errors = [0.0; 6];

    for (i, key) in SINGLE_MOMENTS.into_iter().enumerate() {
        let q = match &damped {
            Some(s) => expectation_with(&initial, &s.block(cfg.times[i])?)?,
            None => expectation_q(&cfg.initial, &model, cfg.times[i] * t),
        };
        let p_plus = (1.0 + q) / 2.0;
        push_rows(&mut rows, key, "single", &SIGNS, &[p_plus, 1.0 - p_plus]);
        (values[i], errors[i]) = sampler.expectation(q)?;
    }

    for (k, (pair, key)) in Pair::ALL.into_iter().zip(PAIR_MOMENTS).enumerate() {
        let (i, j) = pair.indices();
        let (ti, tj) = (cfg.times[i] * t, cfg.times[j] * t);
        let blocks = match &damped {
            Some(s) => Some((
                s.block(cfg.times[i])?,
                s.block(cfg.times[j] - cfg.times[i])?,
            )),
            None => None,
        };
        let (value, err) = match cfg.protocol {
            Protocol::Projective => {
                let p = match &blocks {
                    Some((a, b)) => projective_two_time_with(&initial, a, b)?,
                    None => projective_two_time(&initial, &model, ti, tj)?,
                };
                push_rows(&mut rows, key, "projective", &PAIR_SIGNS, &p.as_array());
                sampler.two_time(&p)?
            }
            Protocol::Inm => {
                let run = |gate| match &blocks {
                    Some((a, b)) => inm_circuit_with(&initial, a, b, gate),
                    None => inm_circuit(&initial, &model, ti, tj, gate),
                };
                let (cnot, anti) = (run(Gate::Cnot)?, run(Gate::AntiCnot)?);
                push_rows(&mut rows, key, "cnot", &INM_OUTCOMES, &cnot);
                push_rows(&mut rows, key, "anti_cnot", &INM_OUTCOMES, &anti);
                sampler.inm(&cnot, &anti)?
            }
            Protocol::Ctvm => {
                let lambda = cfg.lambda.expect("validated: ctvm has lambda");
                let detector = DetectorModel::new(cfg.omega, lambda)?;
                let at_first = model.evolution_map(ti)?.apply(&initial)?;
                let p1 = ctvm_p1(&at_first, &detector, tj - ti, P1Mode::Exact)?;
                push_rows(
                    &mut rows,
                    key,
                    "detector",
                    &DETECTOR_OUTCOMES,
                    &[1.0 - p1, p1],
                );
                sampler.detector(p1, lambda)?
            }
        };
        values[3 + k] = value;
        errors[3 + k] = err;
    }

    let moments = MomentSet::new(
        values[0], values[1], values[2], values[3], values[4], values[5],
    )?;
    let bound_shift = match (cfg.protocol, cfg.lambda) {
        (Protocol::Ctvm, Some(lambda)) => Some(lg3_bound_shift(lambda, cfg.omega_t)?),
        _ => None,
    };
    let inequalities = match (cfg.bound_mode, &bound_shift) {
        (BoundMode::CtvmShifted, Some(s)) => {
            InequalityReport::evaluate_with_bounds(&moments, 0.0, s.adjusted_bounds)
        }
        _ => InequalityReport::evaluate(&moments, 0.0),
    };
    let stderr = cfg.shots.map(|_| MomentSet {
        q1: errors[0],
        q2: errors[1],
        q3: errors[2],
        c12: errors[3],
        c23: errors[4],
        c13: errors[5],
    });

    Ok(RunReport {
        config: cfg.clone(),
        provenance: if cfg.shots.is_some() {
            Provenance::Sampled
        } else {
            Provenance::Exact
        },
        moments,
        stderr,
        feasibility: fine_feasible(&moments),
        inequalities,
        probabilities: rows,
        bound_shift,
        calibration,
        version: env!("CARGO_PKG_VERSION"),
    })
}
