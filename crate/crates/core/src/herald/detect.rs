//! Projective photon counting.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::mode::parse_spatial;
use crate::fock::{strip, Ensemble, ModeLabel, ModeRegistry, OccupationVector, Polarization, PureState, PRUNE_TOL};

/// A detector sees every mode on its path with its polarization (or both
/// polarizations when `pol` is `None`), regardless of internal tag.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Detector {
    spatial: String,
    pol: Option<Polarization>,
}

impl Detector {
    pub fn new(spatial: &str, pol: Option<Polarization>) -> Result<Self> {
        Ok(Detector {
            spatial: parse_spatial(spatial)?,
            pol,
        })
    }

    pub fn matches(&self, label: &ModeLabel) -> bool {
        label.spatial() == self.spatial && self.pol.is_none_or(|p| p == label.pol())
    }

    fn overlaps(&self, other: &Detector) -> bool {
        self.spatial == other.spatial && (self.pol.is_none() || other.pol.is_none() || self.pol == other.pol)
    }
}

impl FromStr for Detector {
    type Err = Error;

    /// `a_h`, `a_v`, or a bare path `a`.
    fn from_str(s: &str) -> Result<Self> {
        if s.contains('_') {
            let l: ModeLabel = s.parse()?;
            if l.tag().is_some() {
                return Err(Error::InvalidParameter(format!(
                    "detector {s}: detectors cannot resolve internal tags"
                )));
            }
            Detector::new(l.spatial(), Some(l.pol()))
        } else {
            Detector::new(s, None)
        }
    }
}

impl fmt::Display for Detector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.pol {
            Some(p) => write!(f, "{}_{}", self.spatial, p.as_str()),
            None => write!(f, "{}", self.spatial),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum DetectorModel {
    /// Photon-number resolving: the count must match exactly.
    #[default]
    Pnr,
    /// Click/no-click: a nonzero required count means "at least one photon",
    /// zero means "dark".
    Threshold,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetectionPattern {
    model: DetectorModel,
    counts: BTreeMap<Detector, u16>,
}

impl DetectionPattern {
    pub fn new(model: DetectorModel, counts: BTreeMap<Detector, u16>) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::InvalidParameter("detection pattern constrains no mode".into()));
        }
        let ds: Vec<&Detector> = counts.keys().collect();
        for (i, a) in ds.iter().enumerate() {
            for b in &ds[i + 1..] {
                if a.overlaps(b) {
                    return Err(Error::OverlappingModes(format!("detectors {a} and {b}")));
                }
            }
        }
        Ok(DetectionPattern { model, counts })
    }

    fn parse(model: DetectorModel, spec: &[(&str, u16)]) -> Result<Self> {
        let mut counts = BTreeMap::new();
        for (d, n) in spec {
            if counts.insert(d.parse()?, *n).is_some() {
                return Err(Error::OverlappingModes(d.to_string()));
            }
        }
        Self::new(model, counts)
    }

    /// Exact counts, e.g. `pnr(&[("a_h", 1), ("a_v", 1)])`.
    pub fn pnr(spec: &[(&str, u16)]) -> Result<Self> {
        Self::parse(DetectorModel::Pnr, spec)
    }

    /// Click on each of `clicks`, nothing on each of `dark`.
    pub fn threshold(clicks: &[&str], dark: &[&str]) -> Result<Self> {
        let spec: Vec<(&str, u16)> = clicks
            .iter()
            .map(|d| (*d, 1))
            .chain(dark.iter().map(|d| (*d, 0)))
            .collect();
        Self::parse(DetectorModel::Threshold, &spec)
    }

    pub fn model(&self) -> DetectorModel {
        self.model
    }

    pub fn counts(&self) -> &BTreeMap<Detector, u16> {
        &self.counts
    }

    /// Registry indices seen by each detector, in pattern order.
    fn resolve(&self, registry: &ModeRegistry) -> Result<Vec<(Vec<usize>, u16)>> {
        self.counts
            .iter()
            .map(|(d, &n)| {
                let idx: Vec<usize> = registry
                    .labels()
                    .iter()
                    .enumerate()
                    .filter(|(_, l)| d.matches(l))
                    .map(|(i, _)| i)
                    .collect();
                if idx.is_empty() {
                    Err(Error::UnknownMode(d.to_string()))
                } else {
                    Ok((idx, n))
                }
            })
            .collect()
    }

    fn accepts(&self, resolved: &[(Vec<usize>, u16)], occ: &OccupationVector) -> bool {
        resolved.iter().all(|(idx, want)| {
            let got: u32 = idx.iter().map(|&i| occ.counts()[i] as u32).sum();
            match self.model {
                DetectorModel::Pnr => got == *want as u32,
                DetectorModel::Threshold => (got > 0) == (*want > 0),
            }
        })
    }
}

/// Post-measurement state of the unmeasured modes. It is a mixture whenever
/// distinct physical outcomes (different tags, or different counts under the
/// threshold model) are consistent with the pattern.
#[derive(Debug, Clone, PartialEq)]
pub enum Conditional {
    Pure(PureState),
    Mixed(Ensemble),
}

impl Conditional {
    pub fn registry(&self) -> &ModeRegistry {
        match self {
            Conditional::Pure(s) => s.registry(),
            Conditional::Mixed(e) => e.registry(),
        }
    }

    pub fn as_pure(&self) -> Option<&PureState> {
        match self {
            Conditional::Pure(s) => Some(s),
            Conditional::Mixed(e) => e.as_pure(),
        }
    }

    pub fn to_ensemble(&self) -> Ensemble {
        match self {
            Conditional::Pure(s) => Ensemble::pure(s.clone()),
            Conditional::Mixed(e) => e.clone(),
        }
    }

    /// `<t| rho |t>`.
    pub fn fidelity(&self, target: &PureState) -> Result<f64> {
        match self {
            Conditional::Pure(s) => fidelity(s, target),
            Conditional::Mixed(e) => e
                .components()
                .iter()
                .map(|(w, s)| Ok(w * fidelity(s, target)?))
                .sum(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Conditional::Pure(s) => s.to_json(),
            Conditional::Mixed(e) => e.to_json(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HeraldOutcome {
    pub probability: f64,
    /// `None` when the herald never fires.
    pub conditional: Option<Conditional>,
}

impl HeraldOutcome {
    pub fn fires(&self) -> bool {
        self.conditional.is_some()
    }

    fn never() -> Self {
        HeraldOutcome {
            probability: 0.0,
            conditional: None,
        }
    }
}

/// Unnormalized conditional branches, one per distinct measured occupation.
fn branches(s: &PureState, pat: &DetectionPattern) -> Result<(ModeRegistry, Vec<PureState>)> {
    let resolved = pat.resolve(s.registry())?;
    let mut measured: Vec<usize> = resolved.iter().flat_map(|(i, _)| i.iter().copied()).collect();
    measured.sort_unstable();
    let rest = s.registry().without(&measured);
    let mut groups: BTreeMap<Vec<u16>, BTreeMap<OccupationVector, Complex64>> = BTreeMap::new();
    for (occ, amp) in s.terms() {
        if !pat.accepts(&resolved, occ) {
            continue;
        }
        let key: Vec<u16> = measured.iter().map(|&i| occ.counts()[i]).collect();
        *groups
            .entry(key)
            .or_default()
            .entry(strip(occ, &measured))
            .or_default() += amp;
    }
    let branches = groups
        .into_values()
        .map(|terms| PureState::from_terms(rest.clone(), terms))
        .collect::<Result<Vec<_>>>()?;
    Ok((rest, branches))
}

fn assemble(branches: Vec<PureState>) -> Result<HeraldOutcome> {
    let branches: Vec<PureState> = branches.into_iter().filter(|b| !b.is_zero()).collect();
    let probability: f64 = branches.iter().map(PureState::norm_sqr).sum();
    if probability < PRUNE_TOL {
        return Ok(HeraldOutcome::never());
    }
    let conditional = if branches.len() == 1 {
        Conditional::Pure(branches[0].normalize()?)
    } else {
        Conditional::Mixed(Ensemble::from_branches(branches)?)
    };
    Ok(HeraldOutcome {
        probability,
        conditional: Some(conditional),
    })
}

/// Measures the pattern's modes and keeps the rest.
pub fn detect(s: &PureState, pat: &DetectionPattern) -> Result<HeraldOutcome> {
    let (_, b) = branches(s, pat)?;
    assemble(b)
}

pub fn detect_ensemble(e: &Ensemble, pat: &DetectionPattern) -> Result<HeraldOutcome> {
    let mut all = Vec::new();
    for (w, s) in e.components() {
        let (_, b) = branches(s, pat)?;
        let scale = Complex64::new(w.sqrt(), 0.0);
        all.extend(b.into_iter().map(|x| x.scale(scale)));
    }
    assemble(all)
}

/// Probability that the pattern fires, without building the conditional.
pub fn probability(s: &PureState, pat: &DetectionPattern) -> Result<f64> {
    let resolved = pat.resolve(s.registry())?;
    Ok(s.terms()
        .filter(|(o, _)| pat.accepts(&resolved, o))
        .map(|(_, a)| a.norm_sqr())
        .sum::<f64>()
        + 0.0)
}

pub fn ensemble_probability(e: &Ensemble, pat: &DetectionPattern) -> Result<f64> {
    let p: f64 = e
        .components()
        .iter()
        .map(|(w, s)| Ok(w * probability(s, pat)?))
        .sum::<Result<f64>>()?;
    // An empty float sum is -0.0.
    Ok(p + 0.0)
}

/// The unnormalized projection onto terms the pattern accepts, keeping
/// every mode. Idempotent.
pub fn project(s: &PureState, pat: &DetectionPattern) -> Result<PureState> {
    let resolved = pat.resolve(s.registry())?;
    PureState::from_terms(
        s.registry().clone(),
        s.terms()
            .filter(|(o, _)| pat.accepts(&resolved, o))
            .map(|(o, a)| (o.clone(), *a)),
    )
}

/// `|<target|s>|^2` for unit-norm states.
pub fn fidelity(s: &PureState, target: &PureState) -> Result<f64> {
    Ok(target.inner_product(s)?.norm_sqr())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatternJson {
    #[serde(default)]
    pub model: DetectorModel,
    pub counts: BTreeMap<String, u16>,
}

impl TryFrom<PatternJson> for DetectionPattern {
    type Error = Error;

    fn try_from(j: PatternJson) -> Result<Self> {
        let mut counts = BTreeMap::new();
        for (d, n) in j.counts {
            if counts.insert(d.parse::<Detector>()?, n).is_some() {
                return Err(Error::OverlappingModes(d));
            }
        }
        DetectionPattern::new(j.model, counts)
    }
}

impl From<&DetectionPattern> for PatternJson {
    fn from(p: &DetectionPattern) -> Self {
        PatternJson {
            model: p.model,
            counts: p.counts.iter().map(|(d, n)| (d.to_string(), *n)).collect(),
        }
    }
}

impl DetectionPattern {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let j: PatternJson = serde_json::from_str(s)?;
        DetectionPattern::try_from(j)
    }
}
