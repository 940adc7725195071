//! Concrete heralding schemes: a path is optionally split by balanced beam
//! splitters into leaves, each leaf gets a polarization element, and every
//! leaf must register one `h` and one `v` photon.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::detect::{detect_ensemble, DetectionPattern, Detector, DetectorModel, HeraldOutcome};
use crate::error::{Error, Result};
use crate::fock::{Ensemble, ModeLabel, ModeRegistry, OccupationVector, Polarization, PureState};
use crate::optics::{
    apply_unitary, balanced_bs, compose, hwp, on_paths, on_polarization, qwp, LocalUnitary, ModeUnitary,
    PolarizationAxis,
};
use crate::poly::OpPolynomial;

/// Leaf half-wave plate angles (degrees) of the eight-photon cascade. A
/// half-wave plate at `t` turns the leaf's `h`/`v` pair into two opposite
/// points at longitude `4t` on the linear great circle; these four angles
/// place the eight points equidistantly.
pub const NOON8_HWP_ANGLES_DEG: [f64; 4] = [0.0, 11.25, 22.5, 33.75];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NoonBasis {
    Pm,
    Rl,
}

impl NoonBasis {
    /// Element in front of the `h`/`v` detector pair.
    pub fn analyzer(self) -> LocalUnitary {
        match self {
            NoonBasis::Pm => hwp(PI / 8.0),
            NoonBasis::Rl => qwp(PI / 4.0),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            NoonBasis::Pm => "pm",
            NoonBasis::Rl => "rl",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SplitScheme {
    input: String,
    leaves: Vec<String>,
    splits: Vec<(String, String)>,
    plates: Vec<LocalUnitary>,
}

impl SplitScheme {
    /// `leaves[0]` takes over the input path; other leaves start in vacuum.
    /// `splits` are applied in order, then `plates[k]` on `leaves[k]`.
    pub fn new(
        input: &str,
        leaves: &[&str],
        splits: &[(&str, &str)],
        plates: Vec<LocalUnitary>,
    ) -> Result<Self> {
        if leaves.is_empty() || leaves.len() != plates.len() {
            return Err(Error::InvalidParameter("one plate per leaf required".into()));
        }
        for p in &plates {
            if p.dim() != 2 {
                return Err(Error::DimensionMismatch {
                    expected: 2,
                    found: p.dim(),
                });
            }
        }
        for (x, y) in splits {
            if !leaves.contains(x) || !leaves.contains(y) || x == y {
                return Err(Error::InvalidParameter(format!("split {x}/{y} is not between leaves")));
            }
        }
        let mut sorted = leaves.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != leaves.len() {
            return Err(Error::DuplicateMode("repeated leaf".into()));
        }
        Ok(SplitScheme {
            input: input.to_string(),
            leaves: leaves.iter().map(|s| s.to_string()).collect(),
            splits: splits.iter().map(|(x, y)| (x.to_string(), y.to_string())).collect(),
            plates,
        })
    }

    /// Analyzer directly on path `a`.
    pub fn noon2(basis: NoonBasis) -> Self {
        Self::new("a", &["a"], &[], vec![basis.analyzer()]).expect("static scheme")
    }

    /// One balanced splitter, `hwp(22.5)` on one output and `qwp(45)` on the
    /// other.
    pub fn noon4() -> Self {
        Self::new(
            "a",
            &["a'", "a''"],
            &[("a'", "a''")],
            vec![hwp(PI / 8.0), qwp(PI / 4.0)],
        )
        .expect("static scheme")
    }

    /// Two levels of balanced splitters into four leaves with half-wave
    /// plates at [`NOON8_HWP_ANGLES_DEG`].
    pub fn noon8() -> Self {
        Self::noon8_with_angles(NOON8_HWP_ANGLES_DEG)
    }

    pub fn noon8_with_angles(angles_deg: [f64; 4]) -> Self {
        Self::new(
            "a",
            &["a1", "a2", "a3", "a4"],
            &[("a1", "a3"), ("a1", "a2"), ("a3", "a4")],
            angles_deg.iter().map(|d| hwp(d.to_radians())).collect(),
        )
        .expect("static scheme")
    }

    pub fn input(&self) -> &str {
        &self.input
    }

    pub fn leaves(&self) -> &[String] {
        &self.leaves
    }

    /// Photons the pattern consumes.
    pub fn photons(&self) -> usize {
        2 * self.leaves.len()
    }

    pub fn pattern(&self) -> DetectionPattern {
        let counts = self
            .leaves
            .iter()
            .flat_map(|l| {
                [Polarization::H, Polarization::V]
                    .map(|p| (Detector::new(l, Some(p)).expect("leaf name checked"), 1))
            })
            .collect();
        DetectionPattern::new(DetectorModel::Pnr, counts).expect("distinct leaves")
    }

    fn unitary(&self, registry: &ModeRegistry) -> Result<ModeUnitary> {
        let mut u = ModeUnitary::identity(registry.clone());
        for (x, y) in &self.splits {
            u = compose(&on_paths(&balanced_bs(), x, y, registry)?, &u)?;
        }
        for (leaf, plate) in self.leaves.iter().zip(&self.plates) {
            u = compose(&on_polarization(plate, leaf, registry)?, &u)?;
        }
        Ok(u)
    }

    /// Moves the input onto the first leaf, adds the remaining leaves (one
    /// copy per tag on the input) and runs the optics.
    pub fn prepare(&self, s: &PureState) -> Result<PureState> {
        let tags = s.registry().tags_of(&self.input);
        if tags.is_empty() {
            return Err(Error::UnknownMode(self.input.clone()));
        }
        for leaf in &self.leaves {
            if *leaf != self.input && !s.registry().spatial_indices(leaf).is_empty() {
                return Err(Error::OverlappingModes(format!("path {leaf} already present")));
            }
        }
        let s = if self.leaves[0] == self.input {
            s.clone()
        } else {
            s.rename_spatial(&self.input, &self.leaves[0])?
        };
        let mut extra = Vec::new();
        for leaf in &self.leaves[1..] {
            for tag in &tags {
                for pol in [Polarization::H, Polarization::V] {
                    let mut l = ModeLabel::new(leaf, pol)?;
                    if let Some(t) = tag {
                        l = l.with_tag(t)?;
                    }
                    extra.push(l);
                }
            }
        }
        let s = s.with_modes(&extra)?;
        apply_unitary(&self.unitary(s.registry())?, &s)
    }

    /// Fock-space simulation of the optics followed by detection.
    pub fn herald(&self, e: &Ensemble) -> Result<HeraldOutcome> {
        let prepared = e.try_map(|s| self.prepare(s))?;
        detect_ensemble(&prepared, &self.pattern())
    }

    /// The detection operator pulled back through the optics onto the
    /// input path's `(h, v)` annihilators.
    pub fn detection_operator(&self) -> Result<OpPolynomial> {
        let names: Vec<&str> = self.leaves.iter().map(String::as_str).collect();
        let registry = ModeRegistry::polarization_pairs(&names);
        let u = self.unitary(&registry)?;
        let modes: Vec<ModeLabel> = names
            .iter()
            .flat_map(|l| [ModeLabel::h(l), ModeLabel::v(l)])
            .collect();
        // P after U equals lift(U) Q with Q = transform(P, U^dagger); Q then
        // hits the input state directly.
        let pulled = OpPolynomial::product_of(registry, &modes)?.transform(&u.adjoint())?;
        let rest: Vec<ModeLabel> = modes[2..].to_vec();
        let on_first = pulled.restrict_to_vacuum(&rest)?;
        OpPolynomial::from_terms(
            ModeRegistry::polarization_pairs(&[&self.input]),
            on_first.monomials().map(|(e, c)| (e.to_vec(), c)),
        )
    }

    /// Heralding computed by applying [`Self::detection_operator`] to the
    /// state and projecting the input path onto vacuum. Untagged states only.
    pub fn herald_by_operator(&self, s: &PureState) -> Result<HeraldOutcome> {
        let op = embed_polynomial(&self.detection_operator()?, s.registry())?;
        let hit = op.apply(s)?;
        let input: Vec<usize> = s.registry().spatial_indices(&self.input);
        let rest = s.registry().without(&input);
        let terms = hit.terms().filter(|(o, _)| input.iter().all(|&i| o.counts()[i] == 0)).map(|(o, a)| {
            let kept: Vec<u16> = o
                .counts()
                .iter()
                .enumerate()
                .filter(|(i, _)| !input.contains(i))
                .map(|(_, &n)| n)
                .collect();
            (OccupationVector::new(kept), *a)
        });
        let branch = PureState::from_terms(rest, terms)?;
        let probability = branch.norm_sqr();
        if probability < crate::fock::PRUNE_TOL {
            return Ok(HeraldOutcome {
                probability: 0.0,
                conditional: None,
            });
        }
        Ok(HeraldOutcome {
            probability,
            conditional: Some(super::Conditional::Pure(branch.normalize()?)),
        })
    }
}

/// Re-expresses `p` over a registry containing all its modes.
fn embed_polynomial(p: &OpPolynomial, registry: &ModeRegistry) -> Result<OpPolynomial> {
    let map = p
        .registry()
        .labels()
        .iter()
        .map(|l| registry.require(l))
        .collect::<Result<Vec<_>>>()?;
    OpPolynomial::from_terms(
        registry.clone(),
        p.monomials().map(|(e, c)| {
            let mut x = vec![0u16; registry.len()];
            for (i, &k) in e.iter().enumerate() {
                x[map[i]] = k;
            }
            (x, c)
        }),
    )
}

/// `(|n,0> + e^{i phase}|0,n>)/sqrt2` on path `spatial`, where the first slot
/// counts photons polarized along `axis.plus()` and the second along
/// `axis.minus()`.
pub fn noon_state(n: u16, spatial: &str, axis: &PolarizationAxis, phase: f64) -> Result<PureState> {
    let registry = ModeRegistry::polarization_pairs(&[spatial]);
    let hv = PureState::from_terms(
        registry.clone(),
        [
            (OccupationVector::new(vec![n, 0]), Complex64::new(1.0, 0.0)),
            (OccupationVector::new(vec![0, n]), Complex64::from_polar(1.0, phase)),
        ],
    )?
    .normalize()?;
    let basis = on_polarization(&axis.basis_matrix(), spatial, &registry)?;
    apply_unitary(&basis, &hv)
}

/// Expected conditional state of path `b` when `psi_n^-` is heralded on
/// path `a` by a detection operator `op` (over `a_h`, `a_v`) that expands
/// to two monomials along `axis`. Writing `op = c+ a_+^n + c- a_-^n`, the
/// singlet pairs `a_+` with `b_-` and `a_-` with `b_+`, so `b` ends in
/// `c- |n,0> + c+ |0,n>` along that axis.
pub fn predicted_noon(op: &OpPolynomial, axis: &PolarizationAxis) -> Result<PureState> {
    let n = op.degree() as u16;
    let rotated = op.in_axis_basis("a", axis)?;
    if rotated.len() != 2 {
        return Err(Error::InvalidParameter(format!(
            "detection operator has {} monomials along the axis, expected 2",
            rotated.len()
        )));
    }
    let c_plus = rotated.coefficient(&[n, 0]);
    let c_minus = rotated.coefficient(&[0, n]);
    if c_plus.norm() == 0.0 || c_minus.norm() == 0.0 || (c_plus.norm() - c_minus.norm()).abs() > 1e-10 * c_plus.norm() {
        return Err(Error::InvalidParameter("operator is not a balanced NOON projector".into()));
    }
    noon_state(n, "b", axis, (c_plus / c_minus).arg())
}

/// NOON-2 / NOON-4 targets in the lab `h`/`v` basis on path `b`: the `pm`
/// analyzer yields the minus sign, `rl` the plus sign.
pub fn noon2_target(basis: NoonBasis) -> PureState {
    let phase = match basis {
        NoonBasis::Pm => PI,
        NoonBasis::Rl => 0.0,
    };
    noon_state(2, "b", &PolarizationAxis::hv(), phase).expect("static state")
}

pub fn noon4_target() -> PureState {
    noon_state(4, "b", &PolarizationAxis::hv(), PI).expect("static state")
}

pub fn noon8_target() -> Result<PureState> {
    predicted_noon(&SplitScheme::noon8().detection_operator()?, &PolarizationAxis::rl())
}

pub fn herald_noon2(e: &Ensemble, basis: NoonBasis) -> Result<HeraldOutcome> {
    SplitScheme::noon2(basis).herald(e)
}

pub fn herald_noon4(e: &Ensemble) -> Result<HeraldOutcome> {
    SplitScheme::noon4().herald(e)
}

pub fn herald_noon8(e: &Ensemble) -> Result<HeraldOutcome> {
    SplitScheme::noon8().herald(e)
}

/// Operator-level view of the four-photon scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct Noon4OperatorReport {
    /// Detection operator pulled back onto `a`; proportional to
    /// `a_h^4 - a_v^4`.
    pub operator: OpPolynomial,
    /// Coefficient `c` of `a_h^4`.
    pub coefficient: Complex64,
    /// Probability that four photons entering the splitter leave two and
    /// two: `|c|^2 4! / (|c'|^2 2! |c''|^2 2!)`, with `c'`, `c''` the
    /// single-leaf coefficients of `a_h^2` before the splitter.
    pub split_factor: f64,
    /// `|c|^2 || (a_h^4 - a_v^4) s ||^2` for the supplied state.
    pub probability: f64,
}

pub fn noon4_operator_report(s: &PureState) -> Result<Noon4OperatorReport> {
    let scheme = SplitScheme::noon4();
    let operator = scheme.detection_operator()?;
    let coefficient = operator.coefficient(&[4, 0]);
    let leaf_coeff = |plate: &LocalUnitary| -> Result<f64> {
        let leaf = SplitScheme::new("a", &["a"], &[], vec![plate.clone()])?;
        Ok(leaf.detection_operator()?.coefficient(&[2, 0]).norm_sqr())
    };
    let c1 = leaf_coeff(&scheme.plates[0])?;
    let c2 = leaf_coeff(&scheme.plates[1])?;
    let split_factor = coefficient.norm_sqr() * 24.0 / (c1 * 2.0 * c2 * 2.0);
    let probability = scheme.herald_by_operator(s)?.probability;
    Ok(Noon4OperatorReport {
        operator,
        coefficient,
        split_factor,
        probability,
    })
}
