//! Ordered optical circuits and their JSON form.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::elements::{beamsplitter, hwp, phase_plate, qwp, LocalUnitary};
use super::unitary::{
    apply_unitary, compose, embed_many, on_paths, on_polarization, pbs_on_paths, ModeUnitary,
};
use crate::error::{Error, Result};
use crate::fock::mode::parse_spatial;
use crate::fock::{ModeLabel, ModeRegistry, PureState};

/// Upper bound on circuit length accepted from external input.
pub const MAX_ELEMENTS: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Element {
    Hwp(f64),
    Qwp(f64),
    Bs(f64),
    Pbs,
    Phase(f64),
}

/// Either a single mode (`a_h`) or a whole spatial path (`a`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Target {
    Mode(ModeLabel),
    Path(String),
}

impl Target {
    pub fn parse(s: &str) -> Result<Target> {
        if s.contains('_') {
            Ok(Target::Mode(s.parse()?))
        } else {
            Ok(Target::Path(parse_spatial(s)?))
        }
    }

    fn as_str(&self) -> String {
        match self {
            Target::Mode(l) => l.to_string(),
            Target::Path(p) => p.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlacedElement {
    pub element: Element,
    pub targets: Vec<Target>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Circuit {
    elements: Vec<PlacedElement>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ElementJson {
    Hwp { angle_deg: f64, targets: Vec<String> },
    Qwp { angle_deg: f64, targets: Vec<String> },
    Bs { r: f64, targets: Vec<String> },
    Pbs { targets: Vec<String> },
    Phase { theta_deg: f64, targets: Vec<String> },
}

impl PlacedElement {
    pub fn new(element: Element, targets: Vec<Target>) -> Result<Self> {
        let paths = targets.iter().filter(|t| matches!(t, Target::Path(_))).count();
        let modes = targets.len() - paths;
        let ok = match element {
            Element::Hwp(_) | Element::Qwp(_) | Element::Phase(_) => {
                (paths == 1 && modes == 0) || (paths == 0 && modes == 2)
            }
            Element::Bs(_) => (paths == 2 && modes == 0) || (paths == 0 && modes == 2),
            Element::Pbs => paths == 2 && modes == 0,
        };
        if !ok {
            return Err(Error::InvalidParameter(format!(
                "{element:?} cannot act on targets {:?}",
                targets.iter().map(Target::as_str).collect::<Vec<_>>()
            )));
        }
        if targets.iter().collect::<BTreeSet<_>>().len() != targets.len() {
            return Err(Error::OverlappingModes("repeated target".into()));
        }
        let angle = match element {
            Element::Hwp(a) | Element::Qwp(a) | Element::Phase(a) => a,
            Element::Bs(r) => r,
            Element::Pbs => 0.0,
        };
        if !angle.is_finite() {
            return Err(Error::InvalidParameter("non-finite element parameter".into()));
        }
        if let Element::Bs(r) = element {
            beamsplitter(r)?;
        }
        Ok(PlacedElement { element, targets })
    }

    fn local(&self) -> LocalUnitary {
        match self.element {
            Element::Hwp(a) => hwp(a),
            Element::Qwp(a) => qwp(a),
            Element::Phase(t) => phase_plate(t),
            Element::Bs(r) => beamsplitter(r).expect("validated"),
            Element::Pbs => super::elements::pbs(),
        }
    }

    pub fn unitary(&self, registry: &ModeRegistry) -> Result<ModeUnitary> {
        let u = self.local();
        match (self.element, self.targets.as_slice()) {
            (Element::Pbs, [Target::Path(a), Target::Path(b)]) => pbs_on_paths(a, b, registry),
            (Element::Bs(_), [Target::Path(a), Target::Path(b)]) => on_paths(&u, a, b, registry),
            (_, [Target::Path(a)]) => on_polarization(&u, a, registry),
            (_, [Target::Mode(l1), Target::Mode(l2)]) => {
                embed_many(&u, &label_groups(l1, l2, registry)?, registry)
            }
            _ => unreachable!("validated in PlacedElement::new"),
        }
    }
}

/// `[l1, l2]` itself, or one copy per tag when the registry only carries
/// tagged versions of the untagged labels.
fn label_groups(l1: &ModeLabel, l2: &ModeLabel, registry: &ModeRegistry) -> Result<Vec<Vec<ModeLabel>>> {
    if registry.contains(l1) && registry.contains(l2) {
        return Ok(vec![vec![l1.clone(), l2.clone()]]);
    }
    let mut groups = Vec::new();
    if l1.tag().is_none() && l2.tag().is_none() {
        for tag in registry.tags_of(l1.spatial()).into_iter().flatten() {
            let t1 = l1.clone().with_tag(&tag)?;
            let t2 = l2.clone().with_tag(&tag)?;
            if registry.contains(&t1) && registry.contains(&t2) {
                groups.push(vec![t1, t2]);
            }
        }
    }
    if groups.is_empty() {
        let missing = if registry.contains(l1) { l2 } else { l1 };
        return Err(Error::UnknownMode(missing.to_string()));
    }
    Ok(groups)
}

impl Circuit {
    pub fn new() -> Self {
        Circuit::default()
    }

    pub fn push(mut self, element: Element, targets: &[&str]) -> Result<Self> {
        let targets = targets.iter().map(|t| Target::parse(t)).collect::<Result<_>>()?;
        self.elements.push(PlacedElement::new(element, targets)?);
        Ok(self)
    }

    pub fn elements(&self) -> &[PlacedElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// The whole circuit as one mode unitary (first element applied first).
    pub fn unitary(&self, registry: &ModeRegistry) -> Result<ModeUnitary> {
        let mut acc = ModeUnitary::identity(registry.clone());
        for e in &self.elements {
            acc = compose(&e.unitary(registry)?, &acc)?;
        }
        Ok(acc)
    }

    /// Applies the elements one at a time, which keeps each lift sparse.
    pub fn apply(&self, state: &PureState) -> Result<PureState> {
        let mut s = state.clone();
        for e in &self.elements {
            s = apply_unitary(&e.unitary(s.registry())?, &s)?;
        }
        Ok(s)
    }

    /// Modes referenced by the circuit that are absent from `registry`, one
    /// copy per internal tag the registry uses.
    pub fn missing_modes(&self, registry: &ModeRegistry) -> Result<Vec<ModeLabel>> {
        let mut tags: Vec<Option<String>> =
            registry.labels().iter().map(|l| l.tag().map(str::to_string)).collect();
        tags.sort();
        tags.dedup();
        if tags.is_empty() {
            tags.push(None);
        }
        let tagged = |l: ModeLabel| -> Result<Vec<ModeLabel>> {
            tags.iter()
                .map(|t| match t {
                    Some(t) => l.clone().with_tag(t),
                    None => Ok(l.clone()),
                })
                .collect()
        };
        let mut out = BTreeSet::new();
        for e in &self.elements {
            for t in &e.targets {
                match t {
                    Target::Path(p) => {
                        if registry.spatial_indices(p).is_empty() {
                            out.extend(tagged(ModeLabel::h(p))?);
                            out.extend(tagged(ModeLabel::v(p))?);
                        }
                    }
                    Target::Mode(l) => {
                        let present = registry.contains(l)
                            || registry
                                .labels()
                                .iter()
                                .any(|r| l.tag().is_none() && r.untagged() == *l);
                        if !present {
                            if l.tag().is_some() {
                                out.insert(l.clone());
                            } else {
                                out.extend(tagged(l.clone())?);
                            }
                        }
                    }
                }
            }
        }
        Ok(out.into_iter().collect())
    }

    pub fn to_json(&self) -> Vec<ElementJson> {
        self.elements
            .iter()
            .map(|e| {
                let targets = e.targets.iter().map(Target::as_str).collect();
                match e.element {
                    Element::Hwp(a) => ElementJson::Hwp { angle_deg: a.to_degrees(), targets },
                    Element::Qwp(a) => ElementJson::Qwp { angle_deg: a.to_degrees(), targets },
                    Element::Bs(r) => ElementJson::Bs { r, targets },
                    Element::Pbs => ElementJson::Pbs { targets },
                    Element::Phase(t) => ElementJson::Phase { theta_deg: t.to_degrees(), targets },
                }
            })
            .collect()
    }

    pub fn from_json(elements: Vec<ElementJson>) -> Result<Circuit> {
        if elements.len() > MAX_ELEMENTS {
            return Err(Error::Parse(format!("more than {MAX_ELEMENTS} elements")));
        }
        let mut circuit = Circuit::new();
        for e in elements {
            let (element, targets) = match e {
                ElementJson::Hwp { angle_deg, targets } => (Element::Hwp(angle_deg.to_radians()), targets),
                ElementJson::Qwp { angle_deg, targets } => (Element::Qwp(angle_deg.to_radians()), targets),
                ElementJson::Bs { r, targets } => (Element::Bs(r), targets),
                ElementJson::Pbs { targets } => (Element::Pbs, targets),
                ElementJson::Phase { theta_deg, targets } => (Element::Phase(theta_deg.to_radians()), targets),
            };
            let targets = targets.iter().map(|t| Target::parse(t)).collect::<Result<_>>()?;
            circuit.elements.push(PlacedElement::new(element, targets)?);
        }
        Ok(circuit)
    }

    pub fn from_json_str(s: &str) -> Result<Circuit> {
        Self::from_json(serde_json::from_str(s)?)
    }
}
