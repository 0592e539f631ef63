use std::io;

use serde::{Deserialize, Serialize};

use super::{eval_lg2, eval_lg3, Labeled, MomentSet};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    BothSatisfied,
    Lg2OnlyViolated,
    Lg3OnlyViolated,
    BothViolated,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::BothSatisfied => "both_satisfied",
            Regime::Lg2OnlyViolated => "lg2_only_violated",
            Regime::Lg3OnlyViolated => "lg3_only_violated",
            Regime::BothViolated => "both_violated",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InequalityEntry<T> {
    pub label: &'static str,
    pub value: T,
    pub bound: T,
    pub satisfied: bool,
}

/// All sixteen inequalities evaluated against their bounds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityReport<T> {
    pub lg2: Vec<InequalityEntry<T>>,
    pub lg3: Vec<InequalityEntry<T>>,
    pub bound: T,
    pub regime: Regime,
}

fn entry<T: Real>(l: Labeled<T>, bound: T) -> InequalityEntry<T> {
    InequalityEntry {
        label: l.label,
        value: l.value,
        bound,
        satisfied: l.value >= bound - T::strict_tol(),
    }
}

impl<T: Real> InequalityReport<T> {
    /// Every inequality compared against the same bound.
    pub fn evaluate(m: &MomentSet<T>, bound: T) -> Self {
        Self::evaluate_with_bounds(m, bound, [bound; 4])
    }

    /// LG2s against `bound`, each LG3 against its own bound.
    pub fn evaluate_with_bounds(m: &MomentSet<T>, bound: T, lg3_bounds: [T; 4]) -> Self {
        let lg2: Vec<_> = eval_lg2(m).into_iter().map(|l| entry(l, bound)).collect();
        let lg3: Vec<_> = eval_lg3(m)
            .into_iter()
            .zip(lg3_bounds)
            .map(|(l, b)| entry(l, b))
            .collect();
        let mut report = Self {
            lg2,
            lg3,
            bound,
            regime: Regime::BothSatisfied,
        };
        report.regime = classify_regime(&report);
        report
    }

    pub fn lg2_all_satisfied(&self) -> bool {
        self.lg2.iter().all(|e| e.satisfied)
    }

    pub fn lg3_all_satisfied(&self) -> bool {
        self.lg3.iter().all(|e| e.satisfied)
    }

    pub fn entries(&self) -> impl Iterator<Item = &InequalityEntry<T>> {
        self.lg2.iter().chain(self.lg3.iter())
    }

    pub fn value(&self, label: &str) -> Option<T> {
        self.entries().find(|e| e.label == label).map(|e| e.value)
    }
}

pub fn classify_regime<T: Real>(report: &InequalityReport<T>) -> Regime {
    match (report.lg2_all_satisfied(), report.lg3_all_satisfied()) {
        (true, true) => Regime::BothSatisfied,
        (false, true) => Regime::Lg2OnlyViolated,
        (true, false) => Regime::Lg3OnlyViolated,
        (false, false) => Regime::BothViolated,
    }
}

/// Sixteen rows `label,value,satisfied`.
pub fn write_inequality_csv<T: Real, W: io::Write>(
    report: &InequalityReport<T>,
    out: W,
) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["label", "value", "satisfied"])?;
    for e in report.entries() {
        w.write_record([e.label, &e.value.to_string(), &e.satisfied.to_string()])?;
    }
    w.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regimes_of_reference_sets() {
        let set1 = MomentSet::new(0.71, 0.45, -0.61, 0.0, 0.0, -0.86).unwrap();
        let set2 = MomentSet::new(0.31, 0.18, -0.10, 0.59, 0.59, -0.31).unwrap();
        assert_eq!(
            InequalityReport::evaluate(&set1, 0.0).regime,
            Regime::Lg2OnlyViolated
        );
        assert_eq!(
            InequalityReport::evaluate(&set2, 0.0).regime,
            Regime::Lg3OnlyViolated
        );
        assert_eq!(
            InequalityReport::evaluate(&MomentSet::<f64>::zero(), 0.0).regime,
            Regime::BothSatisfied
        );
    }

    #[test]
    fn lowered_bound_can_rescue_a_violation() {
        let m = MomentSet::new(0.0, 0.0, 0.0, 0.52, 0.52, 0.0).unwrap();
        let strict = InequalityReport::evaluate(&m, 0.0);
        assert!(!strict.lg3_all_satisfied());
        let relaxed = InequalityReport::evaluate_with_bounds(&m, 0.0, [0.0, -0.05, 0.0, 0.0]);
        assert!(relaxed.lg3_all_satisfied());
    }

    #[test]
    fn csv_has_sixteen_rows() {
        let r = InequalityReport::evaluate(&MomentSet::<f64>::zero(), 0.0);
        let mut buf = Vec::new();
        write_inequality_csv(&r, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines.len(), 17);
        assert_eq!(lines[0], "label,value,satisfied");
        assert_eq!(lines[1], "2.1,1,true");
        assert_eq!(lines[16], "3.4,1,true");
    }

    #[test]
    fn json_shape() {
        let r = InequalityReport::evaluate(&MomentSet::<f64>::zero(), 0.0);
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["regime"], "both_satisfied");
        assert_eq!(v["lg2"].as_array().unwrap().len(), 12);
        assert_eq!(v["lg3"][0]["label"], "3.1");
    }
}
