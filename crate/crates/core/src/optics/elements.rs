//! Single-element unitaries in their local mode basis.
//!
//! Conventions (all agree with any other choice up to global phase):
//!
//! - half-wave plate at fast-axis angle `t`: `[[cos 2t, sin 2t], [sin 2t, -cos 2t]]`
//! - quarter-wave plate: `R(t) diag(1, i) R(-t)` with `R` the real rotation
//! - beam splitter of reflectivity `r`: `[[sqrt(1-r), i sqrt(r)], [i sqrt(r), sqrt(1-r)]]`
//! - PBS on `(in1_h, in1_v, in2_h, in2_v)`: h transmitted and v reflected, both
//!   with phase +1
//! - phase plate: `diag(1, e^{i theta})` on `(h, v)`

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Matrices are accepted as unitary when `U U^dagger` is within this of the
/// identity, elementwise.
pub const UNITARITY_TOL: f64 = 1e-12;

/// A small unitary acting on an ordered list of target modes. Entry
/// `(j, i)` is the amplitude for a photon entering mode `i` to leave in
/// mode `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalUnitary(DMatrix<Complex64>);

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub(crate) fn unitarity_defect(m: &DMatrix<Complex64>) -> f64 {
    let n = m.nrows();
    let prod = m * m.adjoint();
    let id = DMatrix::<Complex64>::identity(n, n);
    (prod - id).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

impl LocalUnitary {
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                found: matrix.ncols(),
            });
        }
        let defect = unitarity_defect(&matrix);
        if defect > UNITARITY_TOL {
            return Err(Error::NotUnitary(defect));
        }
        Ok(LocalUnitary(matrix))
    }

    pub fn from_2x2(m: [[Complex64; 2]; 2]) -> Result<Self> {
        Self::new(DMatrix::from_row_slice(2, 2, &[m[0][0], m[0][1], m[1][0], m[1][1]]))
    }

    pub fn identity(dim: usize) -> Self {
        LocalUnitary(DMatrix::identity(dim, dim))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    /// `self` applied after `first`.
    pub fn after(&self, first: &LocalUnitary) -> Result<LocalUnitary> {
        if self.dim() != first.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: first.dim(),
            });
        }
        Ok(LocalUnitary(&self.0 * &first.0))
    }

    pub fn adjoint(&self) -> LocalUnitary {
        LocalUnitary(self.0.adjoint())
    }

    /// Equality up to a global phase, elementwise within `tol`.
    pub fn eq_up_to_phase(&self, other: &LocalUnitary, tol: f64) -> bool {
        if self.dim() != other.dim() {
            return false;
        }
        let (idx, _) = other
            .0
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
            .expect("nonempty");
        let phase = self.0.as_slice()[idx] / other.0.as_slice()[idx];
        if (phase.norm() - 1.0).abs() > tol {
            return false;
        }
        self.0
            .iter()
            .zip(other.0.iter())
            .all(|(a, b)| (a - b * phase).norm() <= tol)
    }
}

/// Real rotation of the polarization plane by `angle`.
pub fn rotation(angle: f64) -> LocalUnitary {
    let (s, co) = angle.sin_cos();
    LocalUnitary(DMatrix::from_row_slice(
        2,
        2,
        &[c(co, 0.0), c(-s, 0.0), c(s, 0.0), c(co, 0.0)],
    ))
}

pub fn hwp(angle: f64) -> LocalUnitary {
    let (s, co) = (2.0 * angle).sin_cos();
    LocalUnitary(DMatrix::from_row_slice(
        2,
        2,
        &[c(co, 0.0), c(s, 0.0), c(s, 0.0), c(-co, 0.0)],
    ))
}

pub fn qwp(angle: f64) -> LocalUnitary {
    let retarder = DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 1.0)]);
    LocalUnitary(rotation(angle).0 * retarder * rotation(-angle).0)
}

pub fn beamsplitter(reflectivity: f64) -> Result<LocalUnitary> {
    if !(0.0..=1.0).contains(&reflectivity) {
        return Err(Error::InvalidParameter(format!(
            "reflectivity {reflectivity} outside [0, 1]"
        )));
    }
    let t = c((1.0 - reflectivity).sqrt(), 0.0);
    let r = c(0.0, reflectivity.sqrt());
    Ok(LocalUnitary(DMatrix::from_row_slice(2, 2, &[t, r, r, t])))
}

/// Balanced (50/50) beam splitter.
pub fn balanced_bs() -> LocalUnitary {
    beamsplitter(0.5).expect("valid reflectivity")
}

pub fn pbs() -> LocalUnitary {
    let o = c(0.0, 0.0);
    let l = c(1.0, 0.0);
    // rows/cols: in1_h, in1_v, in2_h, in2_v
    LocalUnitary(DMatrix::from_row_slice(
        4,
        4,
        &[
            l, o, o, o, //
            o, o, o, l, //
            o, o, l, o, //
            o, l, o, o,
        ],
    ))
}

pub fn phase_plate(theta: f64) -> LocalUnitary {
    LocalUnitary(DMatrix::from_row_slice(
        2,
        2,
        &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), Complex64::from_polar(1.0, theta)],
    ))
}

/// Uniform phase shift on a single mode, e.g. an arm-length difference.
pub fn phase_shift(phi: f64) -> LocalUnitary {
    LocalUnitary(DMatrix::from_element(1, 1, Complex64::from_polar(1.0, phi)))
}

/// SU(2) element from Euler angles; covers every polarization rotation up to
/// global phase.
pub fn su2(alpha: f64, beta: f64, gamma: f64) -> LocalUnitary {
    let (sb, cb) = (beta / 2.0).sin_cos();
    let e = |phi: f64| Complex64::from_polar(1.0, phi);
    LocalUnitary(DMatrix::from_row_slice(
        2,
        2,
        &[
            e(-(alpha + gamma) / 2.0) * cb,
            -e(-(alpha - gamma) / 2.0) * sb,
            e((alpha - gamma) / 2.0) * sb,
            e((alpha + gamma) / 2.0) * cb,
        ],
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_8, PI};

    #[test]
    fn all_elements_unitary() {
        for a in [0.0, 0.3, FRAC_PI_8, FRAC_PI_4, 1.7] {
            for u in [hwp(a), qwp(a), phase_plate(a), rotation(a), su2(a, 2.0 * a, -a)] {
                assert!(unitarity_defect(u.matrix()) < 1e-14);
            }
        }
        assert!(unitarity_defect(pbs().matrix()) < 1e-15);
        for r in [0.0, 0.25, 0.5, 1.0] {
            assert!(unitarity_defect(beamsplitter(r).unwrap().matrix()) < 1e-15);
        }
        assert!(beamsplitter(1.5).is_err());
        assert!(beamsplitter(-0.1).is_err());
    }

    #[test]
    fn two_quarter_waves_make_a_half_wave() {
        let q = qwp(FRAC_PI_4);
        assert!(q.after(&q).unwrap().eq_up_to_phase(&hwp(FRAC_PI_4), 1e-14));
    }

    #[test]
    fn hwp_45_swaps_h_and_v() {
        let m = hwp(FRAC_PI_4);
        assert!(m.matrix()[(0, 0)].norm() < 1e-15);
        assert!((m.matrix()[(1, 0)].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn zero_angle_plates_are_diagonal() {
        for u in [hwp(0.0), qwp(0.0), phase_plate(0.0)] {
            assert!(u.matrix()[(0, 1)].norm() == 0.0 && u.matrix()[(1, 0)].norm() == 0.0);
        }
        assert!(phase_plate(0.0).eq_up_to_phase(&LocalUnitary::identity(2), 0.0));
        assert!(beamsplitter(0.0)
            .unwrap()
            .eq_up_to_phase(&LocalUnitary::identity(2), 0.0));
        let pi = phase_plate(PI);
        assert!((pi.matrix()[(1, 1)] + c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn non_unitary_rejected() {
        let m = [[c(1.0, 0.0), c(1.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]];
        assert!(matches!(LocalUnitary::from_2x2(m), Err(Error::NotUnitary(_))));
    }
}
