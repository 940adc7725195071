use std::collections::{BTreeMap, BTreeSet};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use super::elements::{unitarity_defect, LocalUnitary, UNITARITY_TOL};
use crate::error::{Error, Result};
use crate::fock::{ModeLabel, ModeRegistry, OccupationVector, PureState};

/// Single-photon unitary over every mode of a registry. Entry `(j, i)` is
/// the amplitude for mode `i` to scatter into mode `j`, so the Fock-space
/// lift replaces each `a_i^dagger` by `sum_j U[j][i] a_j^dagger`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeUnitary {
    registry: ModeRegistry,
    matrix: DMatrix<Complex64>,
}

impl ModeUnitary {
    pub fn new(registry: ModeRegistry, matrix: DMatrix<Complex64>) -> Result<Self> {
        let n = registry.len();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: matrix.nrows().max(matrix.ncols()),
            });
        }
        let defect = unitarity_defect(&matrix);
        if defect > UNITARITY_TOL {
            return Err(Error::NotUnitary(defect));
        }
        Ok(ModeUnitary { registry, matrix })
    }

    pub fn identity(registry: ModeRegistry) -> Self {
        let n = registry.len();
        ModeUnitary {
            registry,
            matrix: DMatrix::identity(n, n),
        }
    }

    pub fn registry(&self) -> &ModeRegistry {
        &self.registry
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn entry(&self, to: usize, from: usize) -> Complex64 {
        self.matrix[(to, from)]
    }

    pub fn adjoint(&self) -> ModeUnitary {
        ModeUnitary {
            registry: self.registry.clone(),
            matrix: self.matrix.adjoint(),
        }
    }

    /// Modes whose column differs from the identity.
    pub fn active_modes(&self) -> Vec<usize> {
        let n = self.registry.len();
        (0..n)
            .filter(|&i| {
                (0..n).any(|j| {
                    let expect = if i == j { 1.0 } else { 0.0 };
                    self.matrix[(j, i)] != Complex64::new(expect, 0.0)
                })
            })
            .collect()
    }
}

/// `second` applied after `first`, i.e. the matrix product `second * first`.
pub fn compose(second: &ModeUnitary, first: &ModeUnitary) -> Result<ModeUnitary> {
    if second.registry != first.registry {
        return Err(Error::RegistryMismatch("composing unitaries".into()));
    }
    Ok(ModeUnitary {
        registry: first.registry.clone(),
        matrix: &second.matrix * &first.matrix,
    })
}

/// Places a local unitary on `targets` (in the local basis order) and acts as
/// the identity elsewhere.
pub fn embed(u: &LocalUnitary, targets: &[ModeLabel], registry: &ModeRegistry) -> Result<ModeUnitary> {
    if targets.len() != u.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.dim(),
            found: targets.len(),
        });
    }
    let idx = targets
        .iter()
        .map(|t| registry.require(t))
        .collect::<Result<Vec<_>>>()?;
    if idx.iter().collect::<BTreeSet<_>>().len() != idx.len() {
        return Err(Error::OverlappingModes(format!("{targets:?}")));
    }
    let n = registry.len();
    let mut m = DMatrix::<Complex64>::identity(n, n);
    for (a, &ia) in idx.iter().enumerate() {
        for (b, &ib) in idx.iter().enumerate() {
            m[(ia, ib)] = u.matrix()[(a, b)];
        }
    }
    Ok(ModeUnitary {
        registry: registry.clone(),
        matrix: m,
    })
}

/// Embeds the same local unitary on several disjoint target groups at once.
pub fn embed_many(
    u: &LocalUnitary,
    groups: &[Vec<ModeLabel>],
    registry: &ModeRegistry,
) -> Result<ModeUnitary> {
    let mut acc = ModeUnitary::identity(registry.clone());
    let mut used = BTreeSet::new();
    for g in groups {
        for l in g {
            if !used.insert(l.clone()) {
                return Err(Error::OverlappingModes(l.to_string()));
            }
        }
        acc = compose(&embed(u, g, registry)?, &acc)?;
    }
    Ok(acc)
}

/// Target groups `(s_h_t, s_v_t)` for every tag `t` present on path `s`.
pub fn polarization_groups(spatial: &str, registry: &ModeRegistry) -> Result<Vec<Vec<ModeLabel>>> {
    let mut groups = Vec::new();
    for tag in registry.tags_of(spatial) {
        let mut h = ModeLabel::h(spatial);
        let mut v = ModeLabel::v(spatial);
        if let Some(t) = &tag {
            h = h.with_tag(t)?;
            v = v.with_tag(t)?;
        }
        registry.require(&h)?;
        registry.require(&v)?;
        groups.push(vec![h, v]);
    }
    if groups.is_empty() {
        return Err(Error::UnknownMode(spatial.to_string()));
    }
    Ok(groups)
}

/// Target groups `(s1_p_t, s2_p_t)` for each polarization and tag carried by
/// both paths.
pub fn path_pair_groups(s1: &str, s2: &str, registry: &ModeRegistry) -> Result<Vec<Vec<ModeLabel>>> {
    if s1 == s2 {
        return Err(Error::OverlappingModes(s1.to_string()));
    }
    let mut groups = Vec::new();
    for l in registry.labels().iter().filter(|l| l.spatial() == s1) {
        let partner = l.with_spatial(s2);
        if !registry.contains(&partner) {
            return Err(Error::UnknownMode(partner.to_string()));
        }
        groups.push(vec![l.clone(), partner]);
    }
    let count2 = registry.spatial_indices(s2).len();
    if groups.is_empty() || count2 != groups.len() {
        return Err(Error::RegistryMismatch(format!(
            "paths {s1} and {s2} do not carry the same modes"
        )));
    }
    Ok(groups)
}

/// Polarization element (waveplate, phase plate) on every tag of a path.
pub fn on_polarization(u: &LocalUnitary, spatial: &str, registry: &ModeRegistry) -> Result<ModeUnitary> {
    embed_many(u, &polarization_groups(spatial, registry)?, registry)
}

/// Two-path element (beam splitter) applied per polarization and tag.
pub fn on_paths(u: &LocalUnitary, s1: &str, s2: &str, registry: &ModeRegistry) -> Result<ModeUnitary> {
    embed_many(u, &path_pair_groups(s1, s2, registry)?, registry)
}

/// Polarizing beam splitter between two paths, per tag.
pub fn pbs_on_paths(s1: &str, s2: &str, registry: &ModeRegistry) -> Result<ModeUnitary> {
    let mut groups = Vec::new();
    for tag in registry.tags_of(s1) {
        let mut g = Vec::new();
        for (s, pol) in [(s1, "h"), (s1, "v"), (s2, "h"), (s2, "v")] {
            let mut l: ModeLabel = format!("{s}_{pol}").parse()?;
            if let Some(t) = &tag {
                l = l.with_tag(t)?;
            }
            g.push(l);
        }
        groups.push(g);
    }
    if groups.is_empty() {
        return Err(Error::UnknownMode(s1.to_string()));
    }
    embed_many(&super::elements::pbs(), &groups, registry)
}

/// Lifts a mode unitary to Fock space and applies it.
///
/// Only modes touched by the unitary are expanded. Each distinct occupation of
/// those modes is expanded once (in parallel) and the results are merged in
/// canonical term order, so the output is deterministic.
pub fn apply_unitary(u: &ModeUnitary, s: &PureState) -> Result<PureState> {
    if u.registry() != s.registry() {
        return Err(Error::RegistryMismatch(format!(
            "unitary over {:?}, state over {:?}",
            u.registry().names(),
            s.registry().names()
        )));
    }
    let active = u.active_modes();
    if active.is_empty() {
        return Ok(s.clone());
    }
    // Column k of the active block: where a photon entering active[k] can go.
    let columns: Vec<Vec<(usize, Complex64)>> = active
        .iter()
        .map(|&i| {
            active
                .iter()
                .enumerate()
                .filter_map(|(k, &j)| {
                    let z = u.entry(j, i);
                    (z != Complex64::new(0.0, 0.0)).then_some((k, z))
                })
                .collect()
        })
        .collect();

    let subs: BTreeSet<Vec<u16>> = s
        .terms()
        .map(|(o, _)| active.iter().map(|&i| o.counts()[i]).collect())
        .collect();
    let subs: Vec<Vec<u16>> = subs.into_iter().collect();
    let expansions: Vec<Vec<(Vec<u16>, Complex64)>> =
        subs.par_iter().map(|sub| expand(sub, &columns)).collect();
    let table: BTreeMap<&Vec<u16>, &Vec<(Vec<u16>, Complex64)>> =
        subs.iter().zip(expansions.iter()).collect();

    let mut out: BTreeMap<OccupationVector, Complex64> = BTreeMap::new();
    for (occ, amp) in s.terms() {
        let sub: Vec<u16> = active.iter().map(|&i| occ.counts()[i]).collect();
        for (out_sub, coef) in table[&sub] {
            let mut next = occ.clone();
            for (k, &i) in active.iter().enumerate() {
                next.counts_mut()[i] = out_sub[k];
            }
            *out.entry(next).or_default() += amp * coef;
        }
    }
    Ok(PureState::from_map_unchecked(s.registry().clone(), out))
}

/// Image of one Fock basis state of the active block.
fn expand(sub: &[u16], columns: &[Vec<(usize, Complex64)>]) -> Vec<(Vec<u16>, Complex64)> {
    let m = sub.len();
    let mut poly: BTreeMap<Vec<u16>, Complex64> = BTreeMap::new();
    poly.insert(vec![0; m], Complex64::new(1.0, 0.0));
    let mut input_norm = 1.0;
    for (k, &n) in sub.iter().enumerate() {
        input_norm *= factorial(n);
        for _ in 0..n {
            let mut next: BTreeMap<Vec<u16>, Complex64> = BTreeMap::new();
            for (e, c) in &poly {
                for &(j, z) in &columns[k] {
                    let mut e2 = e.clone();
                    e2[j] += 1;
                    *next.entry(e2).or_default() += c * z;
                }
            }
            poly = next;
        }
    }
    let scale = 1.0 / input_norm.sqrt();
    poly.into_iter()
        .map(|(e, c)| {
            let out_norm: f64 = e.iter().map(|&n| factorial(n)).product();
            let amp = c * (scale * out_norm.sqrt());
            (e, amp)
        })
        .filter(|(_, a)| a.norm_sqr() >= crate::fock::PRUNE_TOL)
        .collect()
}

pub(crate) fn factorial(n: u16) -> f64 {
    (1..=n).map(|k| k as f64).product()
}
