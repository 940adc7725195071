use num_complex::Complex64;

use super::elements::LocalUnitary;
use crate::error::Result;

/// An orthonormal pair of polarization states `(p+, p-)`, i.e. an axis
/// through the Poincare sphere. Jones vectors are in `(h, v)` components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizationAxis {
    plus: [Complex64; 2],
    minus: [Complex64; 2],
}

impl PolarizationAxis {
    /// Builds the axis through `plus`; `minus` is its orthogonal partner
    /// `(-conj(v), conj(h))`.
    pub fn through(plus: [Complex64; 2]) -> Self {
        let n = (plus[0].norm_sqr() + plus[1].norm_sqr()).sqrt();
        let plus = [plus[0] / n, plus[1] / n];
        PolarizationAxis {
            plus,
            minus: [-plus[1].conj(), plus[0].conj()],
        }
    }

    pub fn hv() -> Self {
        Self::through([Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)])
    }

    /// Linear +45 / -45.
    pub fn pm() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        PolarizationAxis {
            plus: [Complex64::new(s, 0.0), Complex64::new(s, 0.0)],
            minus: [Complex64::new(s, 0.0), Complex64::new(-s, 0.0)],
        }
    }

    /// Circular; `r = (1, i)/sqrt2`, `l = (1, -i)/sqrt2`.
    pub fn rl() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        PolarizationAxis {
            plus: [Complex64::new(s, 0.0), Complex64::new(0.0, s)],
            minus: [Complex64::new(s, 0.0), Complex64::new(0.0, -s)],
        }
    }

    /// The basis measured by detectors `h` and `v` placed behind `analyzer`:
    /// `p+ = analyzer^dagger |h>`, `p- = analyzer^dagger |v>`.
    pub fn from_analyzer(analyzer: &LocalUnitary) -> Self {
        let m = analyzer.matrix();
        PolarizationAxis {
            plus: [m[(0, 0)].conj(), m[(0, 1)].conj()],
            minus: [m[(1, 0)].conj(), m[(1, 1)].conj()],
        }
    }

    pub fn plus(&self) -> [Complex64; 2] {
        self.plus
    }

    pub fn minus(&self) -> [Complex64; 2] {
        self.minus
    }

    /// Unitary whose columns are `p+` and `p-`.
    pub fn basis_matrix(&self) -> LocalUnitary {
        LocalUnitary::from_2x2([
            [self.plus[0], self.minus[0]],
            [self.plus[1], self.minus[1]],
        ])
        .expect("orthonormal axis")
    }

    /// Analyzer that routes `p+` to the `h` detector and `p-` to `v`.
    pub fn analyzer(&self) -> Result<LocalUnitary> {
        Ok(self.basis_matrix().adjoint())
    }
}
