use std::io;

use rayon::prelude::*;
use serde::Serialize;

use super::linspace;
use crate::error::{invalid, Result};
use crate::lgi::{eval_lg2, MomentSet};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CellClass {
    Lg2AllSatisfied,
    Lg2Violated,
    OutsideBall,
}

impl CellClass {
    pub fn as_str(self) -> &'static str {
        match self {
            CellClass::Lg2AllSatisfied => "lg2_all_satisfied",
            CellClass::Lg2Violated => "lg2_violated",
            CellClass::OutsideBall => "outside_ball",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegionCell<T> {
    pub v_y: T,
    pub v_z: T,
    pub class: CellClass,
}

/// Row-major over `v_y` (outer) and `v_z` (inner), both on `[−1, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionMap<T> {
    pub omega_t: T,
    pub n_grid: usize,
    pub times: [T; 3],
    pub cells: Vec<RegionCell<T>>,
}

impl<T: Real> RegionMap<T> {
    pub fn cell(&self, i_y: usize, i_z: usize) -> &RegionCell<T> {
        &self.cells[i_y * self.n_grid + i_z]
    }

    pub fn write_csv<W: io::Write>(&self, out: W) -> io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["v_y", "v_z", "class"])?;
        for c in &self.cells {
            w.write_record([
                c.v_y.to_string(),
                c.v_z.to_string(),
                c.class.as_str().into(),
            ])?;
        }
        w.flush()
    }
}

/// LG2 classification of the pure-precession moments of the state with
/// Bloch components `(0, v_y, v_z)`, measured at `times × ωt`.
pub fn classify_point<T: Real>(v_y: T, v_z: T, omega_t: T, times: [T; 3]) -> CellClass {
    if v_y * v_y + v_z * v_z > T::one() + T::strict_tol() {
        return CellClass::OutsideBall;
    }
    let theta = times.map(|k| k * omega_t);
    let q = theta.map(|th| v_z * th.cos() + v_y * th.sin());
    let m = MomentSet {
        q1: q[0],
        q2: q[1],
        q3: q[2],
        c12: (theta[1] - theta[0]).cos(),
        c23: (theta[2] - theta[1]).cos(),
        c13: (theta[2] - theta[0]).cos(),
    };
    if eval_lg2(&m).iter().all(|l| l.value >= -T::strict_tol()) {
        CellClass::Lg2AllSatisfied
    } else {
        CellClass::Lg2Violated
    }
}

pub fn scan_initial_states<T: Real>(
    omega_t: T,
    n_grid: usize,
    times: [T; 3],
) -> Result<RegionMap<T>> {
    if n_grid < 2 {
        return Err(invalid("n_grid", "must be at least 2"));
    }
    if !omega_t.is_finite() || times.iter().any(|t| !t.is_finite()) {
        return Err(crate::Error::NonFinite("scan parameter"));
    }
    let axis = linspace(-T::one(), T::one(), n_grid)?;
    let cells = (0..n_grid * n_grid)
        .into_par_iter()
        .map(|idx| {
            let (v_y, v_z) = (axis[idx / n_grid], axis[idx % n_grid]);
            RegionCell {
                v_y,
                v_z,
                class: classify_point(v_y, v_z, omega_t, times),
            }
        })
        .collect();
    Ok(RegionMap {
        omega_t,
        n_grid,
        times,
        cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

    const TIMES: [f64; 3] = [0.0, 1.0, 2.0];

    #[test]
    fn centre_cell_is_satisfied() {
        let map = scan_initial_states(FRAC_PI_2, 5, TIMES).unwrap();
        assert_eq!(map.cell(2, 2).class, CellClass::Lg2AllSatisfied);
        assert_eq!(map.cells.len(), 25);
    }

    #[test]
    fn rho1_violates() {
        assert_eq!(
            classify_point(FRAC_1_SQRT_2, FRAC_1_SQRT_2, FRAC_PI_2, TIMES),
            CellClass::Lg2Violated
        );
        assert_eq!(
            classify_point(1.0, 0.5, FRAC_PI_2, TIMES),
            CellClass::OutsideBall
        );
    }

    #[test]
    fn scan_matches_pointwise_classification() {
        let map = scan_initial_states(0.9, 21, TIMES).unwrap();
        for c in &map.cells {
            assert_eq!(c.class, classify_point(c.v_y, c.v_z, 0.9, TIMES));
        }
    }

    #[test]
    fn csv_header_and_rows() {
        let map = scan_initial_states(FRAC_PI_2, 3, TIMES).unwrap();
        let mut buf = Vec::new();
        map.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "v_y,v_z,class");
        assert_eq!(lines.len(), 10);
        assert_eq!(lines[1], "-1,-1,outside_ball");
    }

    #[test]
    fn tiny_grid_rejected() {
        assert!(scan_initial_states(1.0, 1, TIMES).is_err());
    }
}
