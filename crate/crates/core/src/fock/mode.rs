//! Mode labels and the ordered mode registry every state carries.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Polarization {
    H,
    V,
}

impl Polarization {
    pub fn as_str(self) -> &'static str {
        match self {
            Polarization::H => "h",
            Polarization::V => "v",
        }
    }

    pub fn index(self) -> usize {
        match self {
            Polarization::H => 0,
            Polarization::V => 1,
        }
    }
}

/// A single bosonic mode: a spatial path, a polarization, and an optional
/// internal tag that detectors cannot resolve.
///
/// Labels order lexicographically by `(spatial, polarization, tag)`, with
/// untagged modes before tagged ones.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModeLabel {
    spatial: String,
    pol: Polarization,
    tag: Option<String>,
}

fn valid_spatial(s: &str) -> bool {
    !s.is_empty()
        && s.len() <= 32
        && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '\'')
}

fn valid_tag(s: &str) -> bool {
    !s.is_empty() && s.len() <= 16 && s.chars().all(|c| c.is_ascii_alphanumeric())
}

impl ModeLabel {
    pub fn new(spatial: &str, pol: Polarization) -> Result<Self> {
        if !valid_spatial(spatial) {
            return Err(Error::InvalidLabel(spatial.to_string()));
        }
        Ok(ModeLabel {
            spatial: spatial.to_string(),
            pol,
            tag: None,
        })
    }

    pub fn h(spatial: &str) -> Self {
        Self::new(spatial, Polarization::H).expect("valid spatial name")
    }

    pub fn v(spatial: &str) -> Self {
        Self::new(spatial, Polarization::V).expect("valid spatial name")
    }

    pub fn with_tag(mut self, tag: &str) -> Result<Self> {
        if !valid_tag(tag) {
            return Err(Error::InvalidLabel(format!("{self}_{tag}")));
        }
        self.tag = Some(tag.to_string());
        Ok(self)
    }

    pub fn spatial(&self) -> &str {
        &self.spatial
    }

    pub fn pol(&self) -> Polarization {
        self.pol
    }

    pub fn tag(&self) -> Option<&str> {
        self.tag.as_deref()
    }

    pub fn untagged(&self) -> ModeLabel {
        ModeLabel {
            tag: None,
            ..self.clone()
        }
    }

    pub(crate) fn with_spatial(&self, spatial: &str) -> ModeLabel {
        ModeLabel {
            spatial: spatial.to_string(),
            ..self.clone()
        }
    }
}

impl fmt::Display for ModeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.spatial, self.pol.as_str())?;
        if let Some(tag) = &self.tag {
            write!(f, "_{tag}")?;
        }
        Ok(())
    }
}

impl FromStr for ModeLabel {
    type Err = Error;

    /// Parses `spatial_pol` or `spatial_pol_tag`, e.g. `a'_h` or `b_v_II`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidLabel(s.to_string());
        let mut parts = s.split('_');
        let spatial = parts.next().ok_or_else(bad)?;
        let pol = match parts.next() {
            Some("h") => Polarization::H,
            Some("v") => Polarization::V,
            _ => return Err(bad()),
        };
        let label = ModeLabel::new(spatial, pol).map_err(|_| bad())?;
        let label = match parts.next() {
            Some(tag) => label.with_tag(tag).map_err(|_| bad())?,
            None => label,
        };
        if parts.next().is_some() {
            return Err(bad());
        }
        Ok(label)
    }
}

/// Parses a bare spatial-mode name as used by beam-splitter targets.
pub fn parse_spatial(s: &str) -> Result<String> {
    if valid_spatial(s) {
        Ok(s.to_string())
    } else {
        Err(Error::InvalidLabel(s.to_string()))
    }
}

/// Ordered, duplicate-free set of modes. Cheap to clone.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModeRegistry {
    labels: Arc<[ModeLabel]>,
}

impl ModeRegistry {
    pub fn new<I: IntoIterator<Item = ModeLabel>>(labels: I) -> Result<Self> {
        let mut labels: Vec<ModeLabel> = labels.into_iter().collect();
        labels.sort();
        for w in labels.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateMode(w[0].to_string()));
            }
        }
        Ok(ModeRegistry {
            labels: labels.into(),
        })
    }

    pub fn empty() -> Self {
        ModeRegistry {
            labels: Vec::new().into(),
        }
    }

    /// The four modes `a_h, a_v, b_h, b_v`.
    pub fn ab() -> Self {
        Self::polarization_pairs(&["a", "b"])
    }

    /// `s_h, s_v` for each spatial name.
    pub fn polarization_pairs(spatial: &[&str]) -> Self {
        Self::new(
            spatial
                .iter()
                .flat_map(|s| [ModeLabel::h(s), ModeLabel::v(s)]),
        )
        .expect("distinct spatial names")
    }

    pub fn parse<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        let labels = names
            .iter()
            .map(|n| n.as_ref().parse())
            .collect::<Result<Vec<ModeLabel>>>()?;
        Self::new(labels)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[ModeLabel] {
        &self.labels
    }

    pub fn get(&self, index: usize) -> Option<&ModeLabel> {
        self.labels.get(index)
    }

    pub fn index_of(&self, label: &ModeLabel) -> Option<usize> {
        self.labels.binary_search(label).ok()
    }

    pub fn require(&self, label: &ModeLabel) -> Result<usize> {
        self.index_of(label)
            .ok_or_else(|| Error::UnknownMode(label.to_string()))
    }

    pub fn contains(&self, label: &ModeLabel) -> bool {
        self.index_of(label).is_some()
    }

    /// Indices of all modes on a spatial path, any polarization or tag.
    pub fn spatial_indices(&self, spatial: &str) -> Vec<usize> {
        self.labels
            .iter()
            .enumerate()
            .filter(|(_, l)| l.spatial == spatial)
            .map(|(i, _)| i)
            .collect()
    }

    /// Distinct tags present on a spatial path (`None` for untagged modes).
    pub fn tags_of(&self, spatial: &str) -> Vec<Option<String>> {
        let mut tags: Vec<Option<String>> = self
            .labels
            .iter()
            .filter(|l| l.spatial == spatial)
            .map(|l| l.tag.clone())
            .collect();
        tags.sort();
        tags.dedup();
        tags
    }

    pub fn is_disjoint(&self, other: &ModeRegistry) -> bool {
        other.labels.iter().all(|l| !self.contains(l))
    }

    pub fn union(&self, other: &ModeRegistry) -> Result<ModeRegistry> {
        let mut all: Vec<ModeLabel> = self.labels.to_vec();
        for l in other.labels.iter() {
            if !self.contains(l) {
                all.push(l.clone());
            }
        }
        ModeRegistry::new(all)
    }

    pub fn without(&self, removed: &[usize]) -> ModeRegistry {
        let labels: Vec<ModeLabel> = self
            .labels
            .iter()
            .enumerate()
            .filter(|(i, _)| !removed.contains(i))
            .map(|(_, l)| l.clone())
            .collect();
        ModeRegistry {
            labels: labels.into(),
        }
    }

    pub fn names(&self) -> Vec<String> {
        self.labels.iter().map(ToString::to_string).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn label_round_trip() {
        for s in ["a_h", "a'_v", "a''_h", "b_v_II", "a1_h_I"] {
            let l: ModeLabel = s.parse().unwrap();
            assert_eq!(l.to_string(), s);
        }
    }

    #[test]
    fn bad_labels() {
        for s in ["", "a", "a_x", "_h", "a_h_", "a_h_I_J", "a b_h", "a_h_I'"] {
            assert!(s.parse::<ModeLabel>().is_err(), "{s}");
        }
    }

    #[test]
    fn ordering_is_spatial_then_pol_then_tag() {
        let r = ModeRegistry::parse(&["b_h", "a_v_I", "a_h", "a'_h", "a_v", "a_h_II"]).unwrap();
        assert_eq!(
            r.names(),
            ["a_h", "a_h_II", "a_v", "a_v_I", "a'_h", "b_h"]
        );
    }

    #[test]
    fn duplicates_rejected() {
        assert!(matches!(
            ModeRegistry::parse(&["a_h", "a_h"]),
            Err(Error::DuplicateMode(_))
        ));
    }
}
