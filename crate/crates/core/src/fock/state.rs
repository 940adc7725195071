use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use super::mode::{ModeLabel, ModeRegistry};
use crate::error::{Error, Result};

/// Terms with `|amp|^2` below this are dropped.
pub const PRUNE_TOL: f64 = 1e-24;

/// Photon count per mode, in registry order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OccupationVector(Vec<u16>);

impl OccupationVector {
    pub fn new(counts: Vec<u16>) -> Self {
        OccupationVector(counts)
    }

    pub fn zeros(len: usize) -> Self {
        OccupationVector(vec![0; len])
    }

    pub fn counts(&self) -> &[u16] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> u32 {
        self.0.iter().map(|&n| n as u32).sum()
    }

    pub(crate) fn counts_mut(&mut self) -> &mut [u16] {
        &mut self.0
    }
}

impl From<Vec<u16>> for OccupationVector {
    fn from(v: Vec<u16>) -> Self {
        OccupationVector(v)
    }
}

impl fmt::Display for OccupationVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|")?;
        for (i, n) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, ">")
    }
}

/// A (not necessarily normalized) superposition of Fock basis states.
///
/// Terms are kept in canonical occupation order, so iteration and
/// serialization are deterministic.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    registry: ModeRegistry,
    terms: BTreeMap<OccupationVector, Complex64>,
}

impl PureState {
    /// The zero vector.
    pub fn zero(registry: ModeRegistry) -> Self {
        PureState {
            registry,
            terms: BTreeMap::new(),
        }
    }

    pub fn vacuum(registry: ModeRegistry) -> Self {
        let n = registry.len();
        Self::basis(registry, OccupationVector::zeros(n)).expect("vacuum matches registry")
    }

    pub fn basis(registry: ModeRegistry, occ: impl Into<OccupationVector>) -> Result<Self> {
        Self::from_terms(registry, [(occ.into(), Complex64::new(1.0, 0.0))])
    }

    /// Builds a state from `(occupation, amplitude)` pairs, summing repeated
    /// occupations.
    pub fn from_terms<I>(registry: ModeRegistry, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (OccupationVector, Complex64)>,
    {
        let mut state = PureState::zero(registry);
        for (occ, amp) in terms {
            if occ.len() != state.registry.len() {
                return Err(Error::DimensionMismatch {
                    expected: state.registry.len(),
                    found: occ.len(),
                });
            }
            state.accumulate(occ, amp);
        }
        state.prune();
        Ok(state)
    }

    pub(crate) fn from_map_unchecked(
        registry: ModeRegistry,
        terms: BTreeMap<OccupationVector, Complex64>,
    ) -> Self {
        let mut s = PureState { registry, terms };
        s.prune();
        s
    }

    pub(crate) fn accumulate(&mut self, occ: OccupationVector, amp: Complex64) {
        *self.terms.entry(occ).or_default() += amp;
    }

    pub(crate) fn prune(&mut self) {
        self.terms.retain(|_, a| a.norm_sqr() >= PRUNE_TOL);
    }

    pub fn registry(&self) -> &ModeRegistry {
        &self.registry
    }

    pub fn terms(&self) -> impl Iterator<Item = (&OccupationVector, &Complex64)> {
        self.terms.iter()
    }

    pub fn amplitude(&self, occ: &[u16]) -> Complex64 {
        self.terms
            .get(&OccupationVector(occ.to_vec()))
            .copied()
            .unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.terms.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    fn check_same_registry(&self, other: &PureState) -> Result<()> {
        if self.registry != other.registry {
            return Err(Error::RegistryMismatch(format!(
                "{:?} vs {:?}",
                self.registry.names(),
                other.registry.names()
            )));
        }
        Ok(())
    }

    pub fn scale(&self, factor: Complex64) -> PureState {
        let terms = self
            .terms
            .iter()
            .map(|(o, a)| (o.clone(), a * factor))
            .collect();
        PureState::from_map_unchecked(self.registry.clone(), terms)
    }

    pub fn add(&self, other: &PureState) -> Result<PureState> {
        self.check_same_registry(other)?;
        let mut out = self.clone();
        for (o, a) in &other.terms {
            out.accumulate(o.clone(), *a);
        }
        out.prune();
        Ok(out)
    }

    pub fn apply_annihilation(&self, mode: &ModeLabel) -> Result<PureState> {
        let idx = self.registry.require(mode)?;
        Ok(self.annihilate_at(idx, 1))
    }

    pub fn apply_creation(&self, mode: &ModeLabel) -> Result<PureState> {
        let idx = self.registry.require(mode)?;
        let mut out = PureState::zero(self.registry.clone());
        for (occ, amp) in &self.terms {
            let mut next = occ.clone();
            let n = next.0[idx];
            next.0[idx] = n + 1;
            out.accumulate(next, amp * ((n as f64 + 1.0).sqrt()));
        }
        out.prune();
        Ok(out)
    }

    /// Applies `a^power` on mode `idx`: |n> -> sqrt(n!/(n-power)!) |n-power>.
    pub(crate) fn annihilate_at(&self, idx: usize, power: u16) -> PureState {
        let mut out = PureState::zero(self.registry.clone());
        for (occ, amp) in &self.terms {
            let n = occ.0[idx];
            if n < power {
                continue;
            }
            let mut next = occ.clone();
            next.0[idx] = n - power;
            out.accumulate(next, amp * falling_factorial_sqrt(n, power));
        }
        out.prune();
        out
    }

    /// `<self|other>`, conjugate-linear in `self`.
    pub fn inner_product(&self, other: &PureState) -> Result<Complex64> {
        self.check_same_registry(other)?;
        let (small, large, flip) = if self.terms.len() <= other.terms.len() {
            (self, other, false)
        } else {
            (other, self, true)
        };
        let mut acc = Complex64::default();
        for (occ, a) in &small.terms {
            if let Some(b) = large.terms.get(occ) {
                acc += a.conj() * b;
            }
        }
        Ok(if flip { acc.conj() } else { acc })
    }

    pub fn normalize(&self) -> Result<PureState> {
        let norm = self.norm();
        if self.is_zero() || norm == 0.0 {
            return Err(Error::ZeroState);
        }
        Ok(self.scale(Complex64::new(1.0 / norm, 0.0)))
    }

    pub fn tensor(&self, other: &PureState) -> Result<PureState> {
        if !self.registry.is_disjoint(&other.registry) {
            return Err(Error::OverlappingModes(format!(
                "{:?} and {:?}",
                self.registry.names(),
                other.registry.names()
            )));
        }
        let registry = self.registry.union(&other.registry)?;
        let left = position_map(&self.registry, &registry);
        let right = position_map(&other.registry, &registry);
        let mut out = PureState::zero(registry);
        for (o1, a1) in &self.terms {
            for (o2, a2) in &other.terms {
                let mut occ = OccupationVector::zeros(out.registry.len());
                for (i, &n) in o1.0.iter().enumerate() {
                    occ.0[left[i]] = n;
                }
                for (i, &n) in o2.0.iter().enumerate() {
                    occ.0[right[i]] = n;
                }
                out.accumulate(occ, a1 * a2);
            }
        }
        out.prune();
        Ok(out)
    }

    /// Re-expresses the state on a larger registry, new modes in vacuum.
    pub fn extend(&self, registry: &ModeRegistry) -> Result<PureState> {
        for l in self.registry.labels() {
            registry.require(l)?;
        }
        let map = position_map(&self.registry, registry);
        let terms = self
            .terms
            .iter()
            .map(|(o, a)| {
                let mut occ = OccupationVector::zeros(registry.len());
                for (i, &n) in o.0.iter().enumerate() {
                    occ.0[map[i]] = n;
                }
                (occ, *a)
            })
            .collect();
        Ok(PureState::from_map_unchecked(registry.clone(), terms))
    }

    /// Adds vacuum modes for any of `labels` missing from the registry.
    pub fn with_modes(&self, labels: &[ModeLabel]) -> Result<PureState> {
        let extra = ModeRegistry::new(
            labels
                .iter()
                .filter(|l| !self.registry.contains(l))
                .cloned()
                .collect::<std::collections::BTreeSet<_>>(),
        )?;
        if extra.is_empty() {
            return Ok(self.clone());
        }
        self.extend(&self.registry.union(&extra)?)
    }

    /// Renames every mode on spatial path `from` to path `to`.
    pub fn rename_spatial(&self, from: &str, to: &str) -> Result<PureState> {
        crate::fock::mode::parse_spatial(to)?;
        let labels: Vec<ModeLabel> = self
            .registry
            .labels()
            .iter()
            .map(|l| {
                if l.spatial() == from {
                    l.with_spatial(to)
                } else {
                    l.clone()
                }
            })
            .collect();
        let registry = ModeRegistry::new(labels.clone())?;
        let map: Vec<usize> = labels
            .iter()
            .map(|l| registry.index_of(l).expect("label present"))
            .collect();
        let terms = self
            .terms
            .iter()
            .map(|(o, a)| {
                let mut occ = OccupationVector::zeros(registry.len());
                for (i, &n) in o.0.iter().enumerate() {
                    occ.0[map[i]] = n;
                }
                (occ, *a)
            })
            .collect();
        Ok(PureState::from_map_unchecked(registry, terms))
    }

    /// Removes modes that are empty in every term.
    pub fn drop_vacuum_modes(&self, labels: &[ModeLabel]) -> Result<PureState> {
        let mut removed = Vec::new();
        for l in labels {
            let idx = self.registry.require(l)?;
            if self.terms.keys().any(|o| o.0[idx] != 0) {
                return Err(Error::InvalidParameter(format!("mode {l} is occupied")));
            }
            removed.push(idx);
        }
        let registry = self.registry.without(&removed);
        let terms = self
            .terms
            .iter()
            .map(|(o, a)| (strip(o, &removed), *a))
            .collect();
        Ok(PureState::from_map_unchecked(registry, terms))
    }

    /// Probability of each total photon count over `modes`.
    pub fn photon_number_distribution(&self, modes: &[ModeLabel]) -> Result<BTreeMap<u32, f64>> {
        let idx = modes
            .iter()
            .map(|m| self.registry.require(m))
            .collect::<Result<Vec<_>>>()?;
        let mut dist = BTreeMap::new();
        for (occ, amp) in &self.terms {
            let n: u32 = idx.iter().map(|&i| occ.0[i] as u32).sum();
            *dist.entry(n).or_insert(0.0) += amp.norm_sqr();
        }
        Ok(dist)
    }

    /// Termwise comparison with absolute tolerance on each amplitude.
    pub fn approx_eq(&self, other: &PureState, tol: f64) -> bool {
        if self.registry != other.registry {
            return false;
        }
        let keys: std::collections::BTreeSet<_> =
            self.terms.keys().chain(other.terms.keys()).collect();
        keys.into_iter().all(|k| {
            let a = self.terms.get(k).copied().unwrap_or_default();
            let b = other.terms.get(k).copied().unwrap_or_default();
            (a - b).norm() <= tol
        })
    }
}

impl fmt::Display for PureState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (occ, a)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({:.6}{:+.6}i){occ}", a.re, a.im)?;
        }
        Ok(())
    }
}

/// sqrt(n! / (n-k)!)
pub(crate) fn falling_factorial_sqrt(n: u16, k: u16) -> f64 {
    ((n - k + 1)..=n).map(|m| m as f64).product::<f64>().sqrt()
}

fn position_map(from: &ModeRegistry, to: &ModeRegistry) -> Vec<usize> {
    from.labels()
        .iter()
        .map(|l| to.index_of(l).expect("subset registry"))
        .collect()
}

pub(crate) fn strip(occ: &OccupationVector, removed: &[usize]) -> OccupationVector {
    OccupationVector(
        occ.0
            .iter()
            .enumerate()
            .filter(|(i, _)| !removed.contains(i))
            .map(|(_, &n)| n)
            .collect(),
    )
}
