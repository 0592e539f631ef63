//! Gate-level pulse sequences on the system ⊗ ancilla pair: named circuit
//! components, ideal and drift-aware evaluation, gradient channels, a
//! decomposition verifier and a pulse-length calibration fit.

mod calibration;
mod eval;
mod library;

pub use calibration::{fit_cosine, CosineFit};

pub use eval::{
    apply_sequence, element_unitary, fidelity, sequence_unitary_ideal, sequence_unitary_with_drift,
    verify_decomposition, NmrPair,
};
pub use library::{
    compile_component, Component, ComponentLibrary, ComponentParams, DetectorAngles,
};

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::qcore::RotationAxis;
use crate::scalar::Real;

/// Which qubit(s) a rotation addresses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Target {
    System,
    Ancilla,
    Both,
}

/// Off-diagonal entries a gradient removes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GradientMask {
    AllCoherences,
    /// Upper-triangle positions `(row, col)`; the mirrored entry is cleared too.
    Entries(Vec<(usize, usize)>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum SequenceElement<T> {
    /// `exp(−i σ θ/2)` for `σ ∈ {X, Y, Z}`.
    Rotation {
        axis: RotationAxis,
        angle: T,
        target: Target,
    },
    /// `exp(−i Z⊗Z θ/2)`.
    ZzEvolution {
        angle: T,
    },
    /// Free evolution under the scalar coupling.
    Delay {
        duration: T,
    },
    Gradient {
        mask: GradientMask,
    },
}

impl<T: Real> SequenceElement<T> {
    pub fn rot(axis: RotationAxis, angle: T, target: Target) -> Self {
        SequenceElement::Rotation {
            axis,
            angle,
            target,
        }
    }

    pub fn zz(angle: T) -> Self {
        SequenceElement::ZzEvolution { angle }
    }

    pub fn delay(duration: T) -> Self {
        SequenceElement::Delay { duration }
    }

    pub fn gradient() -> Self {
        SequenceElement::Gradient {
            mask: GradientMask::AllCoherences,
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            SequenceElement::Rotation { axis, angle, .. } => {
                if *axis == RotationAxis::ZZ {
                    return Err(crate::error::invalid("axis", "use a ZZ element"));
                }
                finite(*angle, "rotation angle")
            }
            SequenceElement::ZzEvolution { angle } => finite(*angle, "zz angle"),
            SequenceElement::Delay { duration } => {
                finite(*duration, "delay")?;
                if *duration < T::zero() {
                    return Err(Error::NegativeTime(format!("delay {duration}")));
                }
                Ok(())
            }
            SequenceElement::Gradient { mask } => match mask {
                GradientMask::AllCoherences => Ok(()),
                GradientMask::Entries(e) => {
                    if e.iter().all(|&(r, c)| r < c && c < 4) {
                        Ok(())
                    } else {
                        Err(crate::error::invalid(
                            "mask",
                            "entries must satisfy row < col < 4",
                        ))
                    }
                }
            },
        }
    }
}

fn finite<T: Real>(v: T, what: &'static str) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}

/// Elements in time order: `elements[0]` acts first.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PulseSequence<T> {
    elements: Vec<SequenceElement<T>>,
}

impl<T: Real> PulseSequence<T> {
    pub fn new(elements: Vec<SequenceElement<T>>) -> Result<Self> {
        for e in &elements {
            e.validate()?;
        }
        Ok(Self { elements })
    }

    pub fn empty() -> Self {
        Self {
            elements: Vec::new(),
        }
    }

    pub fn elements(&self) -> &[SequenceElement<T>] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn has_gradient(&self) -> bool {
        self.elements
            .iter()
            .any(|e| matches!(e, SequenceElement::Gradient { .. }))
    }

    /// `self` followed by `other`.
    pub fn then(mut self, other: &PulseSequence<T>) -> Self {
        self.elements.extend(other.elements.iter().cloned());
        self
    }

    pub fn push(&mut self, e: SequenceElement<T>) -> Result<()> {
        e.validate()?;
        self.elements.push(e);
        Ok(())
    }
}

fn axis_name(a: RotationAxis) -> &'static str {
    match a {
        RotationAxis::X => "X",
        RotationAxis::Y => "Y",
        RotationAxis::Z => "Z",
        RotationAxis::ZZ => "ZZ",
    }
}

fn target_name(t: Target) -> &'static str {
    match t {
        Target::System => "system",
        Target::Ancilla => "ancilla",
        Target::Both => "both",
    }
}

impl<T: Real> fmt::Display for PulseSequence<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.elements {
            match e {
                SequenceElement::Rotation {
                    axis,
                    angle,
                    target,
                } => writeln!(
                    f,
                    "ROT {} {} {}",
                    axis_name(*axis),
                    angle,
                    target_name(*target)
                )?,
                SequenceElement::ZzEvolution { angle } => writeln!(f, "ZZ {angle}")?,
                SequenceElement::Delay { duration } => writeln!(f, "DELAY {duration}")?,
                SequenceElement::Gradient { mask } => match mask {
                    GradientMask::AllCoherences => writeln!(f, "GRAD")?,
                    GradientMask::Entries(e) => {
                        write!(f, "GRAD")?;
                        for (r, c) in e {
                            write!(f, " {r},{c}")?;
                        }
                        writeln!(f)?;
                    }
                },
            }
        }
        Ok(())
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::SequenceParse {
        line,
        message: message.into(),
    }
}

fn parse_number<T: Real>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    let v: f64 = tok
        .parse()
        .map_err(|_| parse_err(line, format!("invalid {what} `{tok}`")))?;
    if !v.is_finite() {
        return Err(parse_err(line, format!("non-finite {what}")));
    }
    Ok(T::lit(v))
}

impl<T: Real> FromStr for PulseSequence<T> {
    type Err = Error;

    /// One element per line: `ROT axis angle target`, `ZZ angle`,
    /// `DELAY seconds`, `GRAD [row,col ...]`; `#` starts a comment.
    fn from_str(text: &str) -> Result<Self> {
        let mut elements = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let mut toks = body.split_whitespace();
            let keyword = toks.next().unwrap().to_ascii_uppercase();
            let element = match keyword.as_str() {
                "ROT" => {
                    let axis = match toks.next().map(str::to_ascii_uppercase).as_deref() {
                        Some("X") => RotationAxis::X,
                        Some("Y") => RotationAxis::Y,
                        Some("Z") => RotationAxis::Z,
                        Some(other) => {
                            return Err(parse_err(line, format!("unknown axis `{other}`")))
                        }
                        None => return Err(parse_err(line, "missing axis")),
                    };
                    let angle = parse_number(toks.next(), line, "angle")?;
                    let target = match toks.next().map(str::to_ascii_lowercase).as_deref() {
                        Some("system") => Target::System,
                        Some("ancilla") => Target::Ancilla,
                        Some("both") => Target::Both,
                        Some(other) => {
                            return Err(parse_err(line, format!("unknown target `{other}`")))
                        }
                        None => return Err(parse_err(line, "missing target")),
                    };
                    SequenceElement::rot(axis, angle, target)
                }
                "ZZ" => SequenceElement::zz(parse_number(toks.next(), line, "angle")?),
                "DELAY" => {
                    let d: T = parse_number(toks.next(), line, "duration")?;
                    if d < T::zero() {
                        return Err(parse_err(line, "negative duration"));
                    }
                    SequenceElement::delay(d)
                }
                "GRAD" => {
                    let entries = toks
                        .by_ref()
                        .map(|t| {
                            let (r, c) = t
                                .split_once(',')
                                .ok_or_else(|| parse_err(line, format!("bad mask entry `{t}`")))?;
                            let r: usize =
                                r.parse().map_err(|_| parse_err(line, "bad mask row"))?;
                            let c: usize =
                                c.parse().map_err(|_| parse_err(line, "bad mask col"))?;
                            Ok((r, c))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    let mask = if entries.is_empty() {
                        GradientMask::AllCoherences
                    } else {
                        GradientMask::Entries(entries)
                    };
                    SequenceElement::Gradient { mask }
                }
                other => return Err(parse_err(line, format!("unknown element `{other}`"))),
            };
            if let Some(extra) = toks.next() {
                return Err(parse_err(line, format!("unexpected token `{extra}`")));
            }
            element
                .validate()
                .map_err(|e| parse_err(line, e.to_string()))?;
            elements.push(element);
        }
        Ok(Self { elements })
    }
}
