//! The sixteen inequalities: four three-time LG3s on the correlators
//! and twelve two-time LG2s on each (⟨Qᵢ⟩, ⟨Qⱼ⟩, Cᵢⱼ) triple, plus
//! two-time probability assembly, the NSIT defect and joint feasibility.

mod fine;
mod report;

pub use fine::{fine_feasible, JointFeasibility};
pub use report::{
    classify_regime, write_inequality_csv, InequalityEntry, InequalityReport, Regime,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::protocols::TwoTimeProbabilities;
use crate::scalar::Real;

/// One of the six measured moments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Moment {
    Q1,
    Q2,
    Q3,
    C12,
    C23,
    C13,
}

impl Moment {
    pub const ALL: [Moment; 6] = [
        Moment::Q1,
        Moment::Q2,
        Moment::Q3,
        Moment::C12,
        Moment::C23,
        Moment::C13,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Moment::Q1 => "q1",
            Moment::Q2 => "q2",
            Moment::Q3 => "q3",
            Moment::C12 => "c12",
            Moment::C23 => "c23",
            Moment::C13 => "c13",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|m| m.name() == s)
    }
}

/// `⟨Q₁⟩, ⟨Q₂⟩, ⟨Q₃⟩, C₁₂, C₂₃, C₁₃`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct MomentSet<T> {
    pub q1: T,
    pub q2: T,
    pub q3: T,
    pub c12: T,
    pub c23: T,
    pub c13: T,
}

impl<T: Real> MomentSet<T> {
    pub fn new(q1: T, q2: T, q3: T, c12: T, c23: T, c13: T) -> Result<Self> {
        let m = Self {
            q1,
            q2,
            q3,
            c12,
            c23,
            c13,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn zero() -> Self {
        Self {
            q1: T::zero(),
            q2: T::zero(),
            q3: T::zero(),
            c12: T::zero(),
            c23: T::zero(),
            c13: T::zero(),
        }
    }

    /// Checks every entry is finite and in `[−1, 1]`.
    pub fn validate(&self) -> Result<()> {
        for k in Moment::ALL {
            let v = self.get(k);
            if !v.is_finite() {
                return Err(Error::NonFinite(k.name()));
            }
            if v.abs() > T::one() + T::strict_tol() {
                return Err(Error::OutOfDomain {
                    name: k.name(),
                    value: v.to_f64_lossy(),
                    domain: "[-1, 1]",
                });
            }
        }
        Ok(())
    }

    pub fn get(&self, k: Moment) -> T {
        match k {
            Moment::Q1 => self.q1,
            Moment::Q2 => self.q2,
            Moment::Q3 => self.q3,
            Moment::C12 => self.c12,
            Moment::C23 => self.c23,
            Moment::C13 => self.c13,
        }
    }

    pub fn set(&mut self, k: Moment, v: T) {
        match k {
            Moment::Q1 => self.q1 = v,
            Moment::Q2 => self.q2 = v,
            Moment::Q3 => self.q3 = v,
            Moment::C12 => self.c12 = v,
            Moment::C23 => self.c23 = v,
            Moment::C13 => self.c13 = v,
        }
    }

    /// `(⟨Qᵢ⟩, ⟨Qⱼ⟩, Cᵢⱼ)` for a time pair.
    pub fn pair_moments(&self, pair: Pair) -> (T, T, T) {
        match pair {
            Pair::P12 => (self.q1, self.q2, self.c12),
            Pair::P23 => (self.q2, self.q3, self.c23),
            Pair::P13 => (self.q1, self.q3, self.c13),
        }
    }
}

/// Time pair, ordered 12, 23, 13.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pair {
    #[serde(rename = "12")]
    P12,
    #[serde(rename = "23")]
    P23,
    #[serde(rename = "13")]
    P13,
}

impl Pair {
    pub const ALL: [Pair; 3] = [Pair::P12, Pair::P23, Pair::P13];

    /// Zero-based measurement indices `(i, j)`.
    pub fn indices(self) -> (usize, usize) {
        match self {
            Pair::P12 => (0, 1),
            Pair::P23 => (1, 2),
            Pair::P13 => (0, 2),
        }
    }
}

/// An inequality left-hand side with its conventional label (`2.1`…`3.4`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Labeled<T> {
    pub label: &'static str,
    pub value: T,
}

const LG2_LABELS: [&str; 12] = [
    "2.1", "2.2", "2.3", "2.4", "2.5", "2.6", "2.7", "2.8", "2.9", "2.10", "2.11", "2.12",
];
const LG3_LABELS: [&str; 4] = ["3.1", "3.2", "3.3", "3.4"];

/// Sign pattern `(s_i, s_j)` of the four LG2s of a pair, in label order.
const LG2_SIGNS: [(i8, i8); 4] = [(1, 1), (-1, 1), (1, -1), (-1, -1)];

fn sign<T: Real>(s: i8) -> T {
    if s > 0 {
        T::one()
    } else {
        -T::one()
    }
}

fn lg2_value<T: Real>(qi: T, qj: T, cij: T, si: i8, sj: i8) -> T {
    let (si, sj) = (sign::<T>(si), sign::<T>(sj));
    T::one() + si * qi + sj * qj + si * sj * cij
}

/// `1 + sᵢ⟨Qᵢ⟩ + sⱼ⟨Qⱼ⟩ + sᵢsⱼCᵢⱼ` for pairs 12, 23, 13.
pub fn eval_lg2<T: Real>(m: &MomentSet<T>) -> [Labeled<T>; 12] {
    let mut out = [Labeled {
        label: "",
        value: T::zero(),
    }; 12];
    for (p, pair) in Pair::ALL.into_iter().enumerate() {
        let (qi, qj, c) = m.pair_moments(pair);
        for (k, &(si, sj)) in LG2_SIGNS.iter().enumerate() {
            let idx = 4 * p + k;
            out[idx] = Labeled {
                label: LG2_LABELS[idx],
                value: lg2_value(qi, qj, c, si, sj),
            };
        }
    }
    out
}

/// The four three-time inequalities.
pub fn eval_lg3<T: Real>(m: &MomentSet<T>) -> [Labeled<T>; 4] {
    let one = T::one();
    let values = [
        one + m.c12 + m.c23 + m.c13,
        one - m.c12 - m.c23 + m.c13,
        one + m.c12 - m.c23 - m.c13,
        one - m.c12 + m.c23 - m.c13,
    ];
    let mut out = [Labeled {
        label: "",
        value: T::zero(),
    }; 4];
    for k in 0..4 {
        out[k] = Labeled {
            label: LG3_LABELS[k],
            value: values[k],
        };
    }
    out
}

/// The pair's LG2 left-hand sides divided by four, as `p(sᵢ, sⱼ)`.
pub fn assemble_two_time<T: Real>(m: &MomentSet<T>, pair: Pair) -> TwoTimeProbabilities<T> {
    let (qi, qj, c) = m.pair_moments(pair);
    let quarter = T::lit(0.25);
    let p = |si, sj| quarter * lg2_value(qi, qj, c, si, sj);
    TwoTimeProbabilities {
        p_pp: p(1, 1),
        p_pm: p(1, -1),
        p_mp: p(-1, 1),
        p_mm: p(-1, -1),
    }
}

/// Total-variation distance between two `[p(+), p(−)]` distributions.
pub fn nsit_defect<T: Real>(p_marginalized: [T; 2], p_direct: [T; 2]) -> T {
    let half = T::lit(0.5);
    let d =
        half * ((p_marginalized[0] - p_direct[0]).abs() + (p_marginalized[1] - p_direct[1]).abs());
    d.min(T::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocols::correlator_from_probs;

    fn set1() -> MomentSet<f64> {
        MomentSet::new(0.71, 0.45, -0.61, 0.0, 0.0, -0.86).unwrap()
    }

    fn set2() -> MomentSet<f64> {
        MomentSet::new(0.3090, 0.1816, -0.0955, 0.5878, 0.5878, -0.3090).unwrap()
    }

    fn round2(x: f64) -> f64 {
        (x * 100.0).round() / 100.0
    }

    fn value(ls: &[Labeled<f64>], label: &str) -> f64 {
        ls.iter().find(|l| l.label == label).unwrap().value
    }

    #[test]
    fn lg3_examples() {
        assert_eq!(round2(value(&eval_lg3(&set2()), "3.2")), -0.48);
        assert!((value(&eval_lg3(&set1()), "3.1") - 0.14).abs() < 1e-12);
        assert!(eval_lg3(&MomentSet::<f64>::zero())
            .iter()
            .all(|l| l.value == 1.0));
    }

    #[test]
    fn lg2_examples() {
        assert!((value(&eval_lg2(&set1()), "2.4") + 0.16).abs() < 1e-12);
        assert_eq!(round2(value(&eval_lg2(&set2()), "2.1")), 2.08);
        assert!(eval_lg2(&MomentSet::<f64>::zero())
            .iter()
            .all(|l| l.value == 1.0));
        let labels: Vec<_> = eval_lg2(&set2()).iter().map(|l| l.label).collect();
        assert_eq!(labels, LG2_LABELS);
    }

    #[test]
    fn assembly_examples() {
        let p = assemble_two_time(&MomentSet::<f64>::zero(), Pair::P12);
        assert_eq!(p.as_array(), [0.25; 4]);
        let p = assemble_two_time(&set1(), Pair::P12);
        assert!((p.p_mm + 0.04).abs() < 1e-12);
        assert!(!p.is_nonnegative());
        let p = assemble_two_time(&set2(), Pair::P12);
        assert!(p.is_nonnegative());
        assert!((correlator_from_probs(&p) - 0.5878).abs() < 1e-12);
    }

    #[test]
    fn nsit_examples() {
        assert_eq!(nsit_defect([0.3, 0.7], [0.3, 0.7]), 0.0);
        assert!((nsit_defect([0.6f64, 0.4], [0.5, 0.5]) - 0.1).abs() < 1e-15);
    }

    #[test]
    fn moments_outside_unit_interval_rejected() {
        assert!(matches!(
            MomentSet::new(0.0, 0.0, 0.0, -1.2, 0.0, 0.0),
            Err(Error::OutOfDomain { name: "c12", .. })
        ));
    }

    #[test]
    fn moment_names_round_trip() {
        for k in Moment::ALL {
            assert_eq!(Moment::parse(k.name()), Some(k));
        }
        assert_eq!(Moment::parse("c21"), None);
    }
}
