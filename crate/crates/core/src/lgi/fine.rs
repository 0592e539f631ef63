use serde::Serialize;

use super::MomentSet;
use crate::scalar::Real;

/// Admissible range of the triple correlator `T = ⟨Q₁Q₂Q₃⟩` for which all
/// eight joint probabilities are non-negative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JointFeasibility<T> {
    pub feasible: bool,
    pub t_lo: T,
    pub t_hi: T,
    /// `p(s₁, s₂, s₃)` at index `4 b₁ + 2 b₂ + b₃` with `b = 0` for `s = +1`.
    pub witness: Option<[T; 8]>,
}

fn signs(idx: usize) -> [i32; 3] {
    [
        if idx & 4 == 0 { 1 } else { -1 },
        if idx & 2 == 0 { 1 } else { -1 },
        if idx & 1 == 0 { 1 } else { -1 },
    ]
}

/// Eight times `p(s)` without the triple term.
fn base<T: Real>(m: &MomentSet<T>, s: [i32; 3]) -> T {
    let f = |k: i32| T::from_i32(k).unwrap();
    T::one()
        + f(s[0]) * m.q1
        + f(s[1]) * m.q2
        + f(s[2]) * m.q3
        + f(s[0] * s[1]) * m.c12
        + f(s[1] * s[2]) * m.c23
        + f(s[0] * s[2]) * m.c13
}

/// Decides whether a three-time joint distribution with the given one- and
/// two-time marginals exists.
pub fn fine_feasible<T: Real>(m: &MomentSet<T>) -> JointFeasibility<T> {
    let mut t_lo = T::neg_infinity();
    let mut t_hi = T::infinity();
    let mut bases = [T::zero(); 8];
    for (idx, b) in bases.iter_mut().enumerate() {
        let s = signs(idx);
        *b = base(m, s);
        if s[0] * s[1] * s[2] > 0 {
            t_lo = t_lo.max(-*b);
        } else {
            t_hi = t_hi.min(*b);
        }
    }
    let feasible = t_lo <= t_hi + T::strict_tol();
    let witness = feasible.then(|| {
        let t = (t_lo + t_hi) / T::lit(2.0);
        let mut w = [T::zero(); 8];
        for (idx, p) in w.iter_mut().enumerate() {
            let s = signs(idx);
            let triple = T::from_i32(s[0] * s[1] * s[2]).unwrap();
            *p = ((bases[idx] + triple * t) / T::lit(8.0)).max(T::zero());
        }
        let total: T = w.iter().copied().sum();
        w.map(|p| p / total)
    });
    JointFeasibility {
        feasible,
        t_lo,
        t_hi,
        witness,
    }
}
