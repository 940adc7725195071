//! Down-conversion source states.
//!
//! The pair-emission state is
//! `cosh^-2(tau) sum_n sqrt(n+1) tanh^n(tau) |psi_n>`, where `|psi_n>` is the
//! polarization singlet of `n` pairs shared between paths `a` and `b`:
//! `(n+1)^-1/2 sum_m (-1)^m |n-m, m>_a |m, n-m>_b`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::json::StateJson;
use crate::fock::{Ensemble, ModeLabel, ModeRegistry, OccupationVector, PureState};

/// Default pair-number truncation; the discarded mass is below 1e-6 for
/// `tau <= 0.2`.
pub const DEFAULT_N_MAX: u32 = 4;

/// Upper bound on pair numbers accepted from external input.
pub const MAX_PAIRS: u32 = 16;

const TAG_I: &str = "I";
const TAG_II: &str = "II";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PdcParams {
    pub tau: f64,
    pub n_max: u32,
}

impl PdcParams {
    pub fn new(tau: f64, n_max: u32) -> Result<Self> {
        if !(tau.is_finite() && tau >= 0.0) {
            return Err(Error::InvalidParameter(format!("tau must be >= 0, got {tau}")));
        }
        if n_max > MAX_PAIRS {
            return Err(Error::InvalidParameter(format!("n_max above {MAX_PAIRS}")));
        }
        Ok(PdcParams { tau, n_max })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistinguishabilityModel {
    alpha: f64,
}

impl DistinguishabilityModel {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::InvalidParameter(format!("alpha {alpha} outside [0, 1]")));
        }
        Ok(DistinguishabilityModel { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

/// A truncated source state together with the probability it leaves out.
#[derive(Debug, Clone, PartialEq)]
pub struct PdcState {
    pub state: PureState,
    pub truncation_deficit: f64,
}

fn ab_labels(tag: Option<&str>) -> Result<[ModeLabel; 4]> {
    let base = [ModeLabel::h("a"), ModeLabel::v("a"), ModeLabel::h("b"), ModeLabel::v("b")];
    match tag {
        None => Ok(base),
        Some(t) => {
            let [ah, av, bh, bv] = base;
            Ok([ah.with_tag(t)?, av.with_tag(t)?, bh.with_tag(t)?, bv.with_tag(t)?])
        }
    }
}

fn singlet_terms(n: u32) -> impl Iterator<Item = ([u16; 4], f64)> {
    let amp = 1.0 / ((n + 1) as f64).sqrt();
    (0..=n).map(move |m| {
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        let (hi, lo) = ((n - m) as u16, m as u16);
        // a_h, a_v, b_h, b_v
        ([hi, lo, lo, hi], sign * amp)
    })
}

/// `|psi_n>` on `a_h, a_v, b_h, b_v`.
pub fn singlet_term(n: u32) -> PureState {
    singlet_term_tagged(n, None, &ModeRegistry::ab()).expect("standard registry")
}

/// `|psi_n>` on the copies of `a_h, a_v, b_h, b_v` carrying `tag`, embedded
/// in `registry` with every other mode in vacuum.
pub fn singlet_term_tagged(n: u32, tag: Option<&str>, registry: &ModeRegistry) -> Result<PureState> {
    let labels = ab_labels(tag)?;
    let idx = labels
        .iter()
        .map(|l| registry.require(l))
        .collect::<Result<Vec<_>>>()?;
    let terms = singlet_terms(n).map(|(occ4, amp)| {
        let mut occ = vec![0u16; registry.len()];
        for (k, &i) in idx.iter().enumerate() {
            occ[i] = occ4[k];
        }
        (OccupationVector::new(occ), Complex64::new(amp, 0.0))
    });
    PureState::from_terms(registry.clone(), terms)
}

/// The down-conversion state truncated at `n_max` pairs, without
/// renormalization.
pub fn pdc_state(p: PdcParams) -> PdcState {
    let t = p.tau.tanh();
    let prefactor = 1.0 / p.tau.cosh().powi(2);
    let mut terms = Vec::new();
    for n in 0..=p.n_max {
        let block = ((n + 1) as f64).sqrt() * t.powi(n as i32) * prefactor;
        for (occ, amp) in singlet_terms(n) {
            terms.push((OccupationVector::new(occ.to_vec()), Complex64::new(block * amp, 0.0)));
        }
    }
    let state = PureState::from_terms(ModeRegistry::ab(), terms).expect("four modes");
    // sum_{n > N} (n+1) x^n (1-x)^2 with x = tanh^2
    let x = t * t;
    let n = p.n_max as f64;
    let truncation_deficit = x.powi(p.n_max as i32 + 1) * ((n + 2.0) - (n + 1.0) * x);
    PdcState {
        state,
        truncation_deficit,
    }
}

/// Registry of `a_h, a_v, b_h, b_v` carrying tags `I` and `II`.
pub fn labeled_registry() -> ModeRegistry {
    let labels = [TAG_I, TAG_II]
        .iter()
        .flat_map(|t| ab_labels(Some(t)).expect("valid tags"))
        .collect::<Vec<_>>();
    ModeRegistry::new(labels).expect("distinct labels")
}

/// Two pairs of which a fraction `alpha` is fully indistinguishable
/// (`|psi_2>`) and the rest are two singlets told apart by an unobserved
/// internal label. The label is traced out, so the result is an incoherent
/// mixture. Detectors see `a_h_I` and `a_h_II` as the same mode `a_h`.
pub fn partially_distinguishable_two_pairs(m: DistinguishabilityModel) -> Result<Ensemble> {
    let registry = labeled_registry();
    let mut components = Vec::new();
    if m.alpha > 0.0 {
        components.push((m.alpha, singlet_term_tagged(2, Some(TAG_I), &registry)?));
    }
    if m.alpha < 1.0 {
        let one = singlet_term_tagged(1, Some(TAG_I), &registry)?;
        let two = singlet_term_tagged(1, Some(TAG_II), &registry)?;
        // Both live on the full registry; combine the disjoint supports.
        let mut terms = Vec::new();
        for (o1, a1) in one.terms() {
            for (o2, a2) in two.terms() {
                let occ: Vec<u16> = o1.counts().iter().zip(o2.counts()).map(|(x, y)| x + y).collect();
                terms.push((OccupationVector::new(occ), a1 * a2));
            }
        }
        components.push((1.0 - m.alpha, PureState::from_terms(registry, terms)?));
    }
    Ensemble::new(components)
}

/// Source description as it appears in configs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum SourceSpec {
    Pdc {
        tau: f64,
        #[serde(default = "default_n_max")]
        n_max: u32,
    },
    Singlet {
        n: u32,
    },
    Eq4 {
        alpha: f64,
    },
    State {
        state: StateJson,
    },
}

fn default_n_max() -> u32 {
    DEFAULT_N_MAX
}

impl SourceSpec {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let spec: SourceSpec = serde_json::from_str(s)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SourceSpec::Pdc { tau, n_max } => PdcParams::new(*tau, *n_max).map(|_| ()),
            SourceSpec::Singlet { n } if *n > MAX_PAIRS => {
                Err(Error::InvalidParameter(format!("n above {MAX_PAIRS}")))
            }
            SourceSpec::Singlet { .. } => Ok(()),
            SourceSpec::Eq4 { alpha } => DistinguishabilityModel::new(*alpha).map(|_| ()),
            SourceSpec::State { state } => PureState::try_from(state.clone()).map(|_| ()),
        }
    }

    /// Builds the source; pure sources become single-component ensembles.
    /// Explicit states are normalized.
    pub fn build(&self) -> Result<Ensemble> {
        self.validate()?;
        Ok(match self {
            SourceSpec::Pdc { tau, n_max } => {
                Ensemble::pure(pdc_state(PdcParams::new(*tau, *n_max)?).state)
            }
            SourceSpec::Singlet { n } => Ensemble::pure(singlet_term(*n)),
            SourceSpec::Eq4 { alpha } => {
                partially_distinguishable_two_pairs(DistinguishabilityModel::new(*alpha)?)?
            }
            SourceSpec::State { state } => {
                Ensemble::pure(PureState::try_from(state.clone())?.normalize()?)
            }
        })
    }
}
