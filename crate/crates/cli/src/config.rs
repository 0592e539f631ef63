//! Flat `key = value` experiment configuration.
//!
//! ```text
//! # set-2, velocity detector
//! omega_t = 3*pi/10
//! protocol = ctvm
//! lambda = 0.11
//! initial.vx = 0.951
//! initial.vz = 0.309
//! ```
//!
//! Numeric values accept products and quotients of numbers, `pi` and
//! `sqrt(..)`, e.g. `1/sqrt(2)` or `-pi/4`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use lgi_core::lgi::Moment;
use lgi_core::{BlochVector, RelaxationParams};
use serde::Serialize;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Protocol {
    Projective,
    Inm,
    Ctvm,
}

impl Protocol {
    pub fn as_str(self) -> &'static str {
        match self {
            Protocol::Projective => "projective",
            Protocol::Inm => "inm",
            Protocol::Ctvm => "ctvm",
        }
    }
}

impl FromStr for Protocol {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "projective" => Ok(Protocol::Projective),
            "inm" => Ok(Protocol::Inm),
            "ctvm" => Ok(Protocol::Ctvm),
            _ => Err(format!("unknown protocol `{s}` (projective|inm|ctvm)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundMode {
    Zero,
    CtvmShifted,
}

impl FromStr for BoundMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "zero" => Ok(BoundMode::Zero),
            "ctvm_shifted" => Ok(BoundMode::CtvmShifted),
            _ => Err(format!("unknown bound mode `{s}` (zero|ctvm_shifted)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    /// Angular frequency of `H = ωX/2`.
    pub omega: f64,
    /// Rotation angle `ωt` of one interval.
    pub omega_t: f64,
    /// Measurement times in units of `t`.
    pub times: [f64; 3],
    pub initial: BlochVector,
    pub protocol: Protocol,
    pub lambda: Option<f64>,
    pub relaxation: Option<RelaxationParams>,
    /// Moment targets for fitting the per-interval damping.
    pub calibrate: BTreeMap<String, f64>,
    /// Shots per circuit; absent means exact probabilities.
    pub shots: Option<usize>,
    pub seed: u64,
    pub bound_mode: BoundMode,
}

impl ExperimentConfig {
    /// Free-evolution time of one interval.
    pub fn step_time(&self) -> f64 {
        self.omega_t / self.omega
    }

    pub fn calibration_targets(&self) -> Vec<(Moment, f64)> {
        self.calibrate
            .iter()
            .map(|(k, &v)| (Moment::parse(k).expect("validated moment key"), v))
            .collect()
    }
}

impl fmt::Display for ExperimentConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "omega = {}", self.omega)?;
        writeln!(f, "omega_t = {}", self.omega_t)?;
        writeln!(
            f,
            "times = {}, {}, {}",
            self.times[0], self.times[1], self.times[2]
        )?;
        writeln!(f, "initial.vx = {}", self.initial.x)?;
        writeln!(f, "initial.vy = {}", self.initial.y)?;
        writeln!(f, "initial.vz = {}", self.initial.z)?;
        writeln!(f, "protocol = {}", self.protocol.as_str())?;
        if let Some(l) = self.lambda {
            writeln!(f, "lambda = {l}")?;
        }
        if let Some(r) = &self.relaxation {
            writeln!(f, "relaxation.t1 = {}", r.t1)?;
            writeln!(f, "relaxation.t2 = {}", r.t2)?;
            writeln!(f, "relaxation.delay = {}", r.delay)?;
            writeln!(f, "relaxation.equilibrium_z = {}", r.equilibrium_z)?;
        }
        for (k, v) in &self.calibrate {
            writeln!(f, "calibrate.{k} = {v}")?;
        }
        if let Some(n) = self.shots {
            writeln!(f, "shots = {n}")?;
        }
        writeln!(f, "seed = {}", self.seed)?;
        let mode = match self.bound_mode {
            BoundMode::Zero => "zero",
            BoundMode::CtvmShifted => "ctvm_shifted",
        };
        writeln!(f, "bound_mode = {mode}")
    }
}

const KEYS: &[&str] = &[
    "omega",
    "omega_t",
    "times",
    "initial.vx",
    "initial.vy",
    "initial.vz",
    "protocol",
    "lambda",
    "relaxation.t1",
    "relaxation.t2",
    "relaxation.delay",
    "relaxation.equilibrium_z",
    "shots",
    "seed",
    "bound_mode",
];

struct Entry {
    line: usize,
    column: usize,
    value: String,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> CliError {
    CliError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

pub fn parse_config(text: &str) -> CliResult<ExperimentConfig> {
    let mut entries: BTreeMap<String, Entry> = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        let eq = body.find('=').ok_or_else(|| {
            syntax(
                line,
                body.len() - body.trim_start().len() + 1,
                "expected `key = value`",
            )
        })?;
        let key = body[..eq].trim();
        let value = body[eq + 1..].trim();
        let key_col = body.len() - body.trim_start().len() + 1;
        if key.is_empty() {
            return Err(syntax(line, key_col, "missing key"));
        }
        if value.is_empty() {
            return Err(syntax(line, eq + 2, format!("missing value for `{key}`")));
        }
        let known = KEYS.contains(&key)
            || key
                .strip_prefix("calibrate.")
                .is_some_and(|m| Moment::parse(m).is_some());
        if !known {
            return Err(syntax(line, key_col, format!("unknown key `{key}`")));
        }
        let value_col = eq + 2 + (body[eq + 1..].len() - body[eq + 1..].trim_start().len());
        let entry = Entry {
            line,
            column: value_col,
            value: value.to_string(),
        };
        if let Some(prev) = entries.insert(key.to_string(), entry) {
            return Err(syntax(
                line,
                key_col,
                format!("duplicate key `{key}` (first on line {})", prev.line),
            ));
        }
    }
    build(&entries)
}

fn number(entries: &BTreeMap<String, Entry>, key: &str) -> CliResult<Option<f64>> {
    entries
        .get(key)
        .map(|e| eval_expr(&e.value).map_err(|m| syntax(e.line, e.column, format!("`{key}`: {m}"))))
        .transpose()
}

fn parsed<T: FromStr<Err = String>>(
    entries: &BTreeMap<String, Entry>,
    key: &str,
) -> CliResult<Option<T>> {
    entries
        .get(key)
        .map(|e| {
            e.value
                .parse::<T>()
                .map_err(|m| syntax(e.line, e.column, m))
        })
        .transpose()
}

fn integer<T: FromStr>(entries: &BTreeMap<String, Entry>, key: &str) -> CliResult<Option<T>> {
    entries
        .get(key)
        .map(|e| {
            e.value.parse::<T>().map_err(|_| {
                syntax(
                    e.line,
                    e.column,
                    format!("`{key}` must be a non-negative integer"),
                )
            })
        })
        .transpose()
}

fn build(entries: &BTreeMap<String, Entry>) -> CliResult<ExperimentConfig> {
    let omega_t = number(entries, "omega_t")?
        .ok_or_else(|| CliError::invalid("omega_t", "missing required key omega_t"))?;
    let omega = number(entries, "omega")?.unwrap_or(1.0);
    if !omega.is_finite() || omega <= 0.0 {
        return Err(CliError::invalid("omega", "must be positive"));
    }
    if !omega_t.is_finite() || omega_t <= 0.0 {
        return Err(CliError::invalid("omega_t", "must be positive"));
    }

    let times = match entries.get("times") {
        None => [0.0, 1.0, 2.0],
        Some(e) => {
            let parts = e
                .value
                .split(',')
                .map(|p| {
                    eval_expr(p.trim())
                        .map_err(|m| syntax(e.line, e.column, format!("`times`: {m}")))
                })
                .collect::<CliResult<Vec<f64>>>()?;
            <[f64; 3]>::try_from(parts).map_err(|_| {
                syntax(
                    e.line,
                    e.column,
                    "`times` needs three comma-separated values",
                )
            })?
        }
    };
    if times[0] < 0.0 || !(times[0] < times[1] && times[1] < times[2]) {
        return Err(CliError::invalid(
            "times",
            "must be non-negative and strictly increasing",
        ));
    }

    let initial = BlochVector::new(
        number(entries, "initial.vx")?.unwrap_or(0.0),
        number(entries, "initial.vy")?.unwrap_or(0.0),
        number(entries, "initial.vz")?.unwrap_or(0.0),
    )
    .map_err(|e| CliError::invalid("initial", e.to_string()))?;

    let protocol = parsed::<Protocol>(entries, "protocol")?.unwrap_or(Protocol::Inm);
    let lambda = number(entries, "lambda")?;
    if protocol == Protocol::Ctvm && !lambda.is_some_and(|l| l > 0.0) {
        return Err(CliError::invalid(
            "lambda",
            "protocol = ctvm requires lambda > 0",
        ));
    }
    if protocol != Protocol::Ctvm && lambda.is_some() {
        return Err(CliError::invalid(
            "lambda",
            "only used with protocol = ctvm",
        ));
    }

    let relaxation_keys = [
        "relaxation.t1",
        "relaxation.t2",
        "relaxation.delay",
        "relaxation.equilibrium_z",
    ];
    let relaxation = if relaxation_keys.iter().any(|k| entries.contains_key(*k)) {
        let req = |k: &str| -> CliResult<f64> {
            number(entries, k)?
                .ok_or_else(|| CliError::invalid(k, "required when any relaxation key is set"))
        };
        let p = RelaxationParams::with_equilibrium(
            req("relaxation.t1")?,
            req("relaxation.t2")?,
            number(entries, "relaxation.delay")?.unwrap_or(0.1),
            number(entries, "relaxation.equilibrium_z")?.unwrap_or(1.0),
        )
        .map_err(|e| CliError::invalid("relaxation", e.to_string()))?;
        Some(p)
    } else {
        None
    };
    if relaxation.is_some() && protocol == Protocol::Ctvm {
        return Err(CliError::invalid(
            "relaxation",
            "relaxation is supported for the projective and inm protocols",
        ));
    }

    let mut calibrate = BTreeMap::new();
    for (k, _) in entries.iter().filter(|(k, _)| k.starts_with("calibrate.")) {
        let v = number(entries, k)?.expect("present");
        if !(-1.0..=1.0).contains(&v) {
            return Err(CliError::invalid(k.as_str(), "target must lie in [-1, 1]"));
        }
        calibrate.insert(k["calibrate.".len()..].to_string(), v);
    }
    if !calibrate.is_empty() && relaxation.is_none() {
        return Err(CliError::invalid(
            "calibrate",
            "calibration needs relaxation.t1 and relaxation.t2",
        ));
    }

    let shots = integer::<usize>(entries, "shots")?;
    if shots == Some(0) {
        return Err(CliError::invalid("shots", "must be at least 1"));
    }
    let seed = integer::<u64>(entries, "seed")?.unwrap_or(0);
    let bound_mode = parsed::<BoundMode>(entries, "bound_mode")?.unwrap_or(BoundMode::Zero);
    if bound_mode == BoundMode::CtvmShifted && protocol != Protocol::Ctvm {
        return Err(CliError::invalid(
            "bound_mode",
            "ctvm_shifted requires protocol = ctvm",
        ));
    }

    Ok(ExperimentConfig {
        omega,
        omega_t,
        times,
        initial,
        protocol,
        lambda,
        relaxation,
        calibrate,
        shots,
        seed,
        bound_mode,
    })
}

/// Evaluates `factor (('*' | '/') factor)*` where a factor is an optionally
/// negated number, `pi` or `sqrt(expr)`.
pub fn eval_expr(src: &str) -> Result<f64, String> {
    let mut p = ExprParser {
        s: src.as_bytes(),
        pos: 0,
    };
    let v = p.product()?;
    p.skip_ws();
    if p.pos != p.s.len() {
        return Err(format!("unexpected `{}` in `{src}`", &src[p.pos..]));
    }
    if !v.is_finite() {
        return Err(format!("`{src}` is not finite"));
    }
    Ok(v)
}

struct ExprParser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl ExprParser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, prefix: &str) -> bool {
        self.skip_ws();
        if self.s[self.pos..].starts_with(prefix.as_bytes()) {
            self.pos += prefix.len();
            true
        } else {
            false
        }
    }

    fn product(&mut self) -> Result<f64, String> {
        let mut v = self.factor()?;
        loop {
            if self.eat("*") {
                v *= self.factor()?;
            } else if self.eat("/") {
                v /= self.factor()?;
            } else {
                return Ok(v);
            }
        }
    }

    fn factor(&mut self) -> Result<f64, String> {
        if self.eat("-") {
            return Ok(-self.factor()?);
        }
        if self.eat("pi") || self.eat("π") {
            return Ok(std::f64::consts::PI);
        }
        if self.eat("sqrt(") {
            let v = self.product()?;
            if !self.eat(")") {
                return Err("missing `)`".into());
            }
            return Ok(v.sqrt());
        }
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len()
            && (self.s[self.pos].is_ascii_digit()
                || matches!(self.s[self.pos], b'.' | b'e' | b'E')
                || (matches!(self.s[self.pos], b'+' | b'-')
                    && self.pos > start
                    && matches!(self.s[self.pos - 1], b'e' | b'E')))
        {
            self.pos += 1;
        }
        let tok = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
        let v: f64 = tok.parse().map_err(|_| {
            if tok.is_empty() {
                "expected a number".to_string()
            } else {
                format!("invalid number `{tok}`")
            }
        })?;
        // `0.3pi` reads as `0.3 * pi`.
        if self.s[self.pos..].starts_with(b"pi") {
            self.pos += 2;
            return Ok(v * std::f64::consts::PI);
        }
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    const SET2_CTVM: &str = "omega_t = 3*pi/10\nprotocol = ctvm\nlambda = 0.11\ninitial.vx = 0.951\ninitial.vy = 0\ninitial.vz = 0.309\n";

    #[test]
    fn expressions() {
        assert!((eval_expr("3*pi/10").unwrap() - 0.3 * PI).abs() < 1e-15);
        assert!((eval_expr("0.3pi").unwrap() - 0.3 * PI).abs() < 1e-15);
        assert!((eval_expr("1/sqrt(2)").unwrap() - 0.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(eval_expr("-pi / 4").unwrap(), -PI / 4.0);
        assert_eq!(eval_expr("1e-3").unwrap(), 1e-3);
        assert!(eval_expr("3*").is_err());
        assert!(eval_expr("2 pi").is_err());
        assert!(eval_expr("1/0").is_err());
    }

    #[test]
    fn set_two_ctvm_config_parses() {
        let c = parse_config(SET2_CTVM).unwrap();
        assert_eq!(c.protocol, Protocol::Ctvm);
        assert_eq!(c.lambda, Some(0.11));
        assert_eq!(c.times, [0.0, 1.0, 2.0]);
        assert_eq!(c.bound_mode, BoundMode::Zero);
        assert_eq!(c.shots, None);
        assert_eq!(parse_config(&c.to_string()).unwrap(), c);
    }

    #[test]
    fn empty_file_misses_omega_t() {
        let err = parse_config("").unwrap_err();
        assert!(err.to_string().contains("missing required key omega_t"));
        assert_eq!(err.exit_code(), 1);
    }

    #[test]
    fn ctvm_needs_positive_lambda() {
        let err = parse_config("omega_t = 1\nprotocol = ctvm\nlambda = 0\n").unwrap_err();
        assert!(matches!(err, CliError::Invalid { ref field, .. } if field == "lambda"));
    }

    #[test]
    fn unknown_keys_report_their_line() {
        let err = parse_config("omega_t = 1\n\n  colour = red\n").unwrap_err();
        assert!(
            matches!(
                err,
                CliError::Syntax {
                    line: 3,
                    column: 3,
                    ..
                }
            ),
            "{err}"
        );
        let err = parse_config("omega_t = 1\nomega_t = 2\n").unwrap_err();
        assert!(matches!(err, CliError::Syntax { line: 2, .. }));
        let err = parse_config("omega_t = abc\n").unwrap_err();
        assert!(
            matches!(
                err,
                CliError::Syntax {
                    line: 1,
                    column: 11,
                    ..
                }
            ),
            "{err}"
        );
        let err = parse_config("omega_t 1\n").unwrap_err();
        assert!(matches!(err, CliError::Syntax { line: 1, .. }));
    }

    #[test]
    fn invariants_are_named() {
        for (text, field) in [
            ("omega_t = 1\ntimes = 0, 2, 1\n", "times"),
            (
                "omega_t = 1\ninitial.vx = 0.9\ninitial.vz = 0.9\n",
                "initial",
            ),
            ("omega_t = 1\nrelaxation.t1 = 1\n", "relaxation.t2"),
            ("omega_t = 1\ncalibrate.q2 = 0.45\n", "calibrate"),
            ("omega_t = 1\nbound_mode = ctvm_shifted\n", "bound_mode"),
            ("omega_t = 1\nshots = 0\n", "shots"),
        ] {
            let err = parse_config(text).unwrap_err();
            assert!(
                matches!(err, CliError::Invalid { field: ref f, .. } if f == field),
                "{text}: {err}"
            );
        }
    }

    #[test]
    fn calibration_targets_parse() {
        let c = parse_config(
            "omega_t = pi/2\nrelaxation.t1 = 8.66\nrelaxation.t2 = 1.10\nrelaxation.equilibrium_z = 0\ncalibrate.q2 = 0.45\n",
        )
        .unwrap();
        assert_eq!(c.calibration_targets(), vec![(Moment::Q2, 0.45)]);
        assert_eq!(c.relaxation.unwrap().delay, 0.1);
    }
}
