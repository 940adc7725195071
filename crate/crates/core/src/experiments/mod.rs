//! Polarization-correlation scans and the visibility model.
//!
//! All scans use threshold detectors: a series value is the probability
//! that each listed detector clicks, whatever else happens.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fock::{Ensemble, ModeLabel, PureState};
use crate::herald::{ensemble_probability, DetectionPattern, NoonBasis};
use crate::optics::{apply_unitary, compose, hwp, on_polarization, phase_plate, LocalUnitary};
use crate::source::{
    partially_distinguishable_two_pairs, pdc_state, DistinguishabilityModel, PdcParams,
};

/// Pair-generation parameter used for the fringe scans.
pub const FRINGE_TAU: f64 = 0.1;

/// Pair truncation for the fringe scans: the four-fold series needs two
/// pairs, the two-fold series sees one.
pub const FRINGE_N_MAX: u32 = 2;

/// Points on the default visibility-model grid.
pub const ALPHA_GRID_POINTS: usize = 101;

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub values: Vec<f64>,
}

impl Series {
    /// `(max - min) / (max + min)` over the sampled points; 0 for a curve
    /// that is identically zero.
    pub fn visibility(&self) -> f64 {
        visibility(&self.values)
    }

    /// Abscissa indices where the series attains its minimum within `tol`.
    pub fn argmin(&self, tol: f64) -> Vec<usize> {
        let min = self.values.iter().copied().fold(f64::INFINITY, f64::min);
        (0..self.values.len()).filter(|&i| self.values[i] <= min + tol).collect()
    }

    pub fn argmax(&self, tol: f64) -> Vec<usize> {
        let max = self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (0..self.values.len()).filter(|&i| self.values[i] >= max - tol).collect()
    }
}

pub fn visibility(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    if max + min <= 0.0 {
        0.0
    } else {
        (max - min) / (max + min)
    }
}

/// Sampled curves over a common abscissa (radians).
#[derive(Debug, Clone, PartialEq)]
pub struct ScanResult {
    pub abscissa: Vec<f64>,
    pub series: Vec<Series>,
}

impl ScanResult {
    pub fn series(&self, name: &str) -> Option<&Series> {
        self.series.iter().find(|s| s.name == name)
    }
}

/// `n` points from `start`, spaced by `(end - start) / n` when `closed` is
/// false (end excluded) or `(end - start) / (n - 1)` when it is true.
pub fn uniform_grid(start: f64, end: f64, n: usize, closed: bool) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let step = (end - start) / if closed { (n - 1) as f64 } else { n as f64 };
            (0..n).map(|k| start + k as f64 * step).collect()
        }
    }
}

/// Half-wave plate angles from -90 to 90 degrees in half-degree steps.
pub fn fig2_grid() -> Vec<f64> {
    (-180..=180).map(|k| (k as f64 * 0.5).to_radians()).collect()
}

/// 720 phases on `[0, 2 pi)`.
pub fn fig3_grid() -> Vec<f64> {
    uniform_grid(0.0, 2.0 * PI, 720, false)
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidParameter("empty scan grid".into()));
    }
    if grid.iter().any(|x| !x.is_finite()) || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter("scan grid must be finite and strictly increasing".into()));
    }
    Ok(())
}

/// Detector pairings recorded by the scans.
fn fourfold() -> DetectionPattern {
    DetectionPattern::threshold(&["a_h", "a_v", "b_h", "b_v"], &[]).expect("static pattern")
}

fn twofold() -> DetectionPattern {
    DetectionPattern::threshold(&["a_h", "b_v"], &[]).expect("static pattern")
}

fn evolve(source: &Ensemble, on_a: &LocalUnitary, on_b: &LocalUnitary) -> Result<Ensemble> {
    let reg = source.registry();
    let u = compose(&on_polarization(on_b, "b", reg)?, &on_polarization(on_a, "a", reg)?)?;
    source.try_map(|s| apply_unitary(&u, s))
}

fn scan<F>(grid: &[f64], point: F) -> Result<ScanResult>
where
    F: Fn(f64) -> Result<(f64, f64)> + Sync,
{
    check_grid(grid)?;
    let points = grid.par_iter().map(|&x| point(x)).collect::<Result<Vec<_>>>()?;
    let (four, two): (Vec<f64>, Vec<f64>) = points.into_iter().unzip();
    Ok(ScanResult {
        abscissa: grid.to_vec(),
        series: vec![
            Series {
                name: "twofold".into(),
                values: two,
            },
            Series {
                name: "fourfold".into(),
                values: four,
            },
        ],
    })
}

/// `(fourfold, twofold)` with `basis_a` on path `a` and a half-wave plate at
/// `angle` on path `b`.
pub fn visibility_point(source: &Ensemble, basis_a: &LocalUnitary, angle: f64) -> Result<(f64, f64)> {
    let e = evolve(source, basis_a, &hwp(angle))?;
    Ok((ensemble_probability(&e, &fourfold())?, ensemble_probability(&e, &twofold())?))
}

/// Coincidences while the `b` half-wave plate angle runs over `grid`.
pub fn visibility_scan(source: &Ensemble, basis_a: &LocalUnitary, grid: &[f64]) -> Result<ScanResult> {
    scan(grid, |t| visibility_point(source, basis_a, t))
}

/// Analyzer on `a` for the hv-fixed and pm-fixed settings of the
/// visibility scan.
pub fn fixed_basis(name: &str) -> Result<LocalUnitary> {
    match name {
        "hv" => Ok(LocalUnitary::identity(2)),
        "pm" => Ok(NoonBasis::Pm.analyzer()),
        "rl" => Ok(NoonBasis::Rl.analyzer()),
        other => Err(Error::InvalidParameter(format!("unknown analyzer basis {other}"))),
    }
}

/// The fringe-scan source: down-conversion at [`FRINGE_TAU`] truncated at
/// [`FRINGE_N_MAX`] pairs.
pub fn fringe_source() -> Ensemble {
    Ensemble::pure(pdc_state(PdcParams::new(FRINGE_TAU, FRINGE_N_MAX).expect("static")).state)
}

/// `(fourfold, twofold)` for analyzer `basis` on `a` and phase plate
/// `theta` then `hwp(22.5)` on `b`.
pub fn fringe_point(source: &Ensemble, basis: NoonBasis, theta: f64) -> Result<(f64, f64)> {
    let on_b = hwp(PI / 8.0).after(&phase_plate(theta))?;
    let e = evolve(source, &basis.analyzer(), &on_b)?;
    Ok((ensemble_probability(&e, &fourfold())?, ensemble_probability(&e, &twofold())?))
}

pub fn fringe_scan(source: &Ensemble, basis: NoonBasis, grid: &[f64]) -> Result<ScanResult> {
    scan(grid, |t| fringe_point(source, basis, t))
}

/// `k / (n - 1)` for `k = 0..n`.
pub fn alpha_grid(n: usize) -> Vec<f64> {
    uniform_grid(0.0, 1.0, n, true)
}

/// Four-fold visibility of the partial-distinguishability model for each
/// alpha, with `a` fixed in hv and the `b` plate scanned over the
/// half-degree grid.
pub fn alpha_visibility_curve(alphas: &[f64]) -> Result<Vec<(f64, f64)>> {
    let grid = fig2_grid();
    let hv = LocalUnitary::identity(2);
    alphas
        .iter()
        .map(|&a| {
            let e = partially_distinguishable_two_pairs(DistinguishabilityModel::new(a)?)?;
            let s = visibility_scan(&e, &hv, &grid)?;
            Ok((a, s.series("fourfold").expect("fourfold series").visibility()))
        })
        .collect()
}

/// Inverts a monotone `(alpha, V)` table by linear interpolation.
pub fn alpha_from_visibility(v: f64, curve: &[(f64, f64)]) -> Result<f64> {
    if curve.len() < 2 {
        return Err(Error::InvalidParameter("visibility curve needs two points".into()));
    }
    if curve.windows(2).any(|w| w[1].1 < w[0].1 || w[1].0 <= w[0].0) {
        return Err(Error::InvalidParameter("visibility curve is not monotone".into()));
    }
    let (lo, hi) = (curve[0].1, curve[curve.len() - 1].1);
    if !(lo..=hi).contains(&v) {
        return Err(Error::OutOfModelRange { value: v, lo, hi });
    }
    let k = curve.windows(2).position(|w| v <= w[1].1).expect("v within range");
    let ((a0, v0), (a1, v1)) = (curve[k], curve[k + 1]);
    if v1 == v0 {
        return Ok(a0);
    }
    Ok(a0 + (a1 - a0) * (v - v0) / (v1 - v0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairRatio {
    pub tau: f64,
    pub p2: f64,
    pub p3: f64,
    pub ratio: f64,
}

/// Three-pair to two-pair emission ratio, read off the photon-number
/// distribution of path `a` of the truncated down-conversion state.
pub fn pair_ratio_report(tau: f64) -> Result<PairRatio> {
    if tau.is_nan() || tau <= 0.0 {
        return Err(Error::InvalidParameter(format!("tau must be > 0, got {tau}")));
    }
    let s: PureState = pdc_state(PdcParams::new(tau, 4)?).state;
    let dist = s.photon_number_distribution(&[ModeLabel::h("a"), ModeLabel::v("a")])?;
    let p2 = dist.get(&2).copied().unwrap_or(0.0);
    let p3 = dist.get(&3).copied().unwrap_or(0.0);
    Ok(PairRatio {
        tau,
        p2,
        p3,
        ratio: p3 / p2,
    })
}

#[cfg(test)]
mod tests;
