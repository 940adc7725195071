//! Canonical JSON forms of states and ensembles.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::ensemble::Ensemble;
use super::mode::ModeRegistry;
use super::state::{OccupationVector, PureState};
use crate::error::{Error, Result};

/// Upper bound on modes accepted from external input.
pub const MAX_MODES: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub occ: Vec<u16>,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateJson {
    pub modes: Vec<String>,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentJson {
    pub weight: f64,
    pub state: StateJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleJson {
    pub components: Vec<ComponentJson>,
}

impl From<&PureState> for StateJson {
    fn from(s: &PureState) -> Self {
        StateJson {
            modes: s.registry().names(),
            terms: s
                .terms()
                .map(|(o, a)| TermJson {
                    occ: o.counts().to_vec(),
                    re: a.re,
                    im: a.im,
                })
                .collect(),
        }
    }
}

impl TryFrom<StateJson> for PureState {
    type Error = Error;

    /// Modes may be listed in any order; occupations are permuted into the
    /// canonical registry order.
    fn try_from(j: StateJson) -> Result<Self> {
        if j.modes.len() > MAX_MODES {
            return Err(Error::Parse(format!("more than {MAX_MODES} modes")));
        }
        let registry = ModeRegistry::parse(&j.modes)?;
        let perm: Vec<usize> = j
            .modes
            .iter()
            .map(|n| {
                let label = n.parse().expect("parsed above");
                registry.index_of(&label).expect("present")
            })
            .collect();
        let mut terms = Vec::with_capacity(j.terms.len());
        for t in j.terms {
            if t.occ.len() != perm.len() {
                return Err(Error::DimensionMismatch {
                    expected: perm.len(),
                    found: t.occ.len(),
                });
            }
            if !(t.re.is_finite() && t.im.is_finite()) {
                return Err(Error::Parse("non-finite amplitude".into()));
            }
            let mut occ = vec![0u16; perm.len()];
            for (i, &n) in t.occ.iter().enumerate() {
                occ[perm[i]] = n;
            }
            terms.push((OccupationVector::new(occ), Complex64::new(t.re, t.im)));
        }
        PureState::from_terms(registry, terms)
    }
}

impl From<&Ensemble> for EnsembleJson {
    fn from(e: &Ensemble) -> Self {
        EnsembleJson {
            components: e
                .components()
                .iter()
                .map(|(w, s)| ComponentJson {
                    weight: *w,
                    state: s.into(),
                })
                .collect(),
        }
    }
}

impl TryFrom<EnsembleJson> for Ensemble {
    type Error = Error;

    fn try_from(j: EnsembleJson) -> Result<Self> {
        let components = j
            .components
            .into_iter()
            .map(|c| Ok((c.weight, PureState::try_from(c.state)?)))
            .collect::<Result<Vec<_>>>()?;
        Ensemble::new(components)
    }
}

impl PureState {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(StateJson::from(self)).expect("state serializes")
    }

    pub fn from_json_str(s: &str) -> Result<PureState> {
        let j: StateJson = serde_json::from_str(s)?;
        PureState::try_from(j)
    }
}

impl Ensemble {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(EnsembleJson::from(self)).expect("ensemble serializes")
    }

    pub fn from_json_str(s: &str) -> Result<Ensemble> {
        let j: EnsembleJson = serde_json::from_str(s)?;
        Ensemble::try_from(j)
    }
}
