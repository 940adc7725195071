use super::mode::ModeRegistry;
use super::state::PureState;
use crate::error::{Error, Result};

/// Weighted mixture of pure states over a shared registry.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    components: Vec<(f64, PureState)>,
}

const WEIGHT_TOL: f64 = 1e-12;

impl Ensemble {
    pub fn new(components: Vec<(f64, PureState)>) -> Result<Self> {
        let first = components
            .first()
            .ok_or_else(|| Error::InvalidParameter("empty ensemble".into()))?;
        let registry = first.1.registry().clone();
        let mut total = 0.0;
        for (w, s) in &components {
            if !(w.is_finite() && *w >= 0.0) {
                return Err(Error::InvalidParameter(format!("bad weight {w}")));
            }
            if s.registry() != &registry {
                return Err(Error::RegistryMismatch(
                    "ensemble components use different registries".into(),
                ));
            }
            total += w;
        }
        if (total - 1.0).abs() > WEIGHT_TOL {
            return Err(Error::InvalidParameter(format!(
                "ensemble weights sum to {total}"
            )));
        }
        Ok(Ensemble { components })
    }

    /// Normalizes unnormalized branches into a mixture; the weight of each
    /// branch is its squared norm. Errors if every branch is zero.
    pub fn from_branches(branches: Vec<PureState>) -> Result<Self> {
        let total: f64 = branches.iter().map(PureState::norm_sqr).sum();
        if total == 0.0 {
            return Err(Error::ZeroState);
        }
        let components = branches
            .into_iter()
            .filter(|b| !b.is_zero())
            .map(|b| Ok((b.norm_sqr() / total, b.normalize()?)))
            .collect::<Result<Vec<_>>>()?;
        Ensemble::new(components)
    }

    pub fn pure(state: PureState) -> Self {
        Ensemble {
            components: vec![(1.0, state)],
        }
    }

    pub fn components(&self) -> &[(f64, PureState)] {
        &self.components
    }

    pub fn registry(&self) -> &ModeRegistry {
        self.components[0].1.registry()
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// The single component, when the ensemble is a pure state.
    pub fn as_pure(&self) -> Option<&PureState> {
        match self.components.as_slice() {
            [(_, s)] => Some(s),
            _ => None,
        }
    }

    /// Applies the same map to every component.
    pub fn try_map<F>(&self, mut f: F) -> Result<Ensemble>
    where
        F: FnMut(&PureState) -> Result<PureState>,
    {
        let components = self
            .components
            .iter()
            .map(|(w, s)| Ok((*w, f(s)?)))
            .collect::<Result<Vec<_>>>()?;
        Ensemble::new(components)
    }
}

impl From<PureState> for Ensemble {
    fn from(s: PureState) -> Self {
        Ensemble::pure(s)
    }
}
