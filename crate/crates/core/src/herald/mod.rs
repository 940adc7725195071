//! Photon-counting detection and heralded state preparation.

mod detect;
mod schemes;

pub use detect::{
    detect, detect_ensemble, ensemble_probability, fidelity, probability, project, Conditional,
    DetectionPattern, Detector, DetectorModel, HeraldOutcome, PatternJson,
};
pub use schemes::{
    herald_noon2, herald_noon4, herald_noon8, noon2_target, noon4_target, noon4_operator_report,
    noon8_target, noon_state, predicted_noon, Noon4OperatorReport, NoonBasis, SplitScheme,
    NOON8_HWP_ANGLES_DEG,
};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::fock::json::StateJson;
use crate::fock::{Ensemble, PureState};
use crate::optics::circuit::ElementJson;
use crate::optics::Circuit;

/// Heralding scheme as it appears in configs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "scheme", rename_all = "lowercase", deny_unknown_fields)]
pub enum HeraldSpec {
    Noon2 {
        basis: NoonBasis,
    },
    Noon4,
    Noon8,
    Custom {
        circuit: Vec<ElementJson>,
        pattern: PatternJson,
        #[serde(default)]
        target: Option<StateJson>,
    },
}

/// A heralding run together with the state it was aiming for.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemeOutcome {
    pub outcome: HeraldOutcome,
    pub target: Option<PureState>,
}

impl SchemeOutcome {
    /// `None` when the herald never fires, there is no target, or the
    /// conditional lives on different modes (e.g. tagged sources).
    pub fn fidelity(&self) -> Option<f64> {
        let c = self.outcome.conditional.as_ref()?;
        let t = self.target.as_ref()?;
        c.fidelity(t).ok()
    }

    pub fn report(&self) -> serde_json::Value {
        serde_json::json!({
            "probability": self.outcome.probability,
            "conditional": self.outcome.conditional.as_ref().map(Conditional::to_json),
            "fidelity_vs_target": self.fidelity(),
        })
    }
}

impl HeraldSpec {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let spec: HeraldSpec = serde_json::from_str(s)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if let HeraldSpec::Custom {
            circuit,
            pattern,
            target,
        } = self
        {
            Circuit::from_json(circuit.clone())?;
            DetectionPattern::try_from(pattern.clone())?;
            if let Some(t) = target {
                PureState::try_from(t.clone())?.normalize()?;
            }
        }
        Ok(())
    }

    pub fn run(&self, source: &Ensemble) -> Result<SchemeOutcome> {
        Ok(match self {
            HeraldSpec::Noon2 { basis } => SchemeOutcome {
                outcome: herald_noon2(source, *basis)?,
                target: Some(noon2_target(*basis)),
            },
            HeraldSpec::Noon4 => SchemeOutcome {
                outcome: herald_noon4(source)?,
                target: Some(noon4_target()),
            },
            HeraldSpec::Noon8 => SchemeOutcome {
                outcome: herald_noon8(source)?,
                target: Some(noon8_target()?),
            },
            HeraldSpec::Custom {
                circuit,
                pattern,
                target,
            } => {
                let circuit = Circuit::from_json(circuit.clone())?;
                let pattern = DetectionPattern::try_from(pattern.clone())?;
                let missing = circuit.missing_modes(source.registry())?;
                let evolved = source.try_map(|s| circuit.apply(&s.with_modes(&missing)?))?;
                SchemeOutcome {
                    outcome: detect_ensemble(&evolved, &pattern)?,
                    target: target
                        .clone()
                        .map(|t| PureState::try_from(t)?.normalize())
                        .transpose()?,
                }
            }
        })
    }
}
