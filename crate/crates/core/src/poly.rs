//! Polynomials in commuting annihilation operators.
//!
//! Detection events are represented by products of annihilation operators
//! (a coincidence between detectors `a_h` and `a_v` is `a_h a_v`). Optical
//! elements act on such operators by linear substitution, and applying the
//! resulting polynomial to a state gives the unnormalized conditional state
//! of the undetected modes.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::json::MAX_MODES;
use crate::fock::{falling_factorial_sqrt, ModeLabel, ModeRegistry, OccupationVector, PureState};
use crate::optics::{ModeUnitary, PolarizationAxis};

/// Coefficients with magnitude below this are dropped.
pub const COEFF_PRUNE: f64 = 1e-12;

/// Default absolute tolerance for coefficient comparison.
pub const COEFF_TOL: f64 = 1e-10;

/// Upper bound on total degree accepted from external input.
pub const MAX_DEGREE: u32 = 64;

/// Sum of monomials, keyed by exponent vector in registry order. Keys are
/// kept in lexicographic order and never carry a zero coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct OpPolynomial {
    registry: ModeRegistry,
    terms: BTreeMap<Vec<u16>, Complex64>,
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

impl OpPolynomial {
    pub fn zero(registry: ModeRegistry) -> Self {
        OpPolynomial {
            registry,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(registry: ModeRegistry, c: Complex64) -> Self {
        let n = registry.len();
        Self::from_terms(registry, [(vec![0; n], c)]).expect("constant term fits")
    }

    pub fn from_terms<I>(registry: ModeRegistry, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u16>, Complex64)>,
    {
        let mut p = OpPolynomial::zero(registry);
        for (e, c) in terms {
            if e.len() != p.registry.len() {
                return Err(Error::DimensionMismatch {
                    expected: p.registry.len(),
                    found: e.len(),
                });
            }
            *p.terms.entry(e).or_default() += c;
        }
        p.prune();
        Ok(p)
    }

    /// The single annihilation operator of `mode`.
    pub fn mode(registry: ModeRegistry, mode: &ModeLabel) -> Result<Self> {
        Self::linear(registry, &[(mode.clone(), one())])
    }

    /// `sum_k c_k a_k`.
    pub fn linear(registry: ModeRegistry, terms: &[(ModeLabel, Complex64)]) -> Result<Self> {
        let n = registry.len();
        let mut out = Vec::with_capacity(terms.len());
        for (l, c) in terms {
            let mut e = vec![0; n];
            e[registry.require(l)?] = 1;
            out.push((e, *c));
        }
        Self::from_terms(registry, out)
    }

    /// Annihilator of polarization state `jones` on path `spatial`:
    /// `conj(e_h) a_h + conj(e_v) a_v`.
    pub fn polarized(registry: ModeRegistry, spatial: &str, jones: [Complex64; 2]) -> Result<Self> {
        Self::linear(
            registry,
            &[
                (ModeLabel::new(spatial, crate::fock::Polarization::H)?, jones[0].conj()),
                (ModeLabel::new(spatial, crate::fock::Polarization::V)?, jones[1].conj()),
            ],
        )
    }

    /// Product of the listed annihilation operators, e.g. a coincidence
    /// detection operator.
    pub fn product_of(registry: ModeRegistry, modes: &[ModeLabel]) -> Result<Self> {
        let mut e = vec![0u16; registry.len()];
        for m in modes {
            e[registry.require(m)?] += 1;
        }
        Self::from_terms(registry, [(e, one())])
    }

    fn prune(&mut self) {
        self.terms.retain(|_, c| c.norm() >= COEFF_PRUNE);
    }

    pub fn registry(&self) -> &ModeRegistry {
        &self.registry
    }

    pub fn monomials(&self) -> impl Iterator<Item = (&[u16], Complex64)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), *c))
    }

    pub fn coefficient(&self, exponents: &[u16]) -> Complex64 {
        self.terms.get(exponents).copied().unwrap_or_default()
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

    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&k| k as u32).sum())
            .max()
            .unwrap_or(0)
    }

    fn check_registry(&self, other: &ModeRegistry) -> Result<()> {
        if &self.registry != other {
            return Err(Error::RegistryMismatch(format!(
                "polynomial over {:?}, operand over {:?}",
                self.registry.names(),
                other.names()
            )));
        }
        Ok(())
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut p = self.clone();
        for v in p.terms.values_mut() {
            *v *= c;
        }
        p.prune();
        p
    }

    pub fn add(&self, other: &OpPolynomial) -> Result<Self> {
        self.check_registry(&other.registry)?;
        let mut p = self.clone();
        for (e, c) in &other.terms {
            *p.terms.entry(e.clone()).or_default() += c;
        }
        p.prune();
        Ok(p)
    }

    /// Distributive product; annihilation operators commute, so like terms
    /// are collected by adding exponent vectors.
    pub fn multiply(&self, other: &OpPolynomial) -> Result<Self> {
        self.check_registry(&other.registry)?;
        let mut terms: BTreeMap<Vec<u16>, Complex64> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u16> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                *terms.entry(e).or_default() += c1 * c2;
            }
        }
        let mut p = OpPolynomial {
            registry: self.registry.clone(),
            terms,
        };
        p.prune();
        Ok(p)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = OpPolynomial::constant(self.registry.clone(), one());
        for _ in 0..k {
            acc = acc.multiply(self).expect("same registry");
        }
        acc
    }

    /// Applies the operator to a state; the result is not renormalized.
    pub fn apply(&self, state: &PureState) -> Result<PureState> {
        self.check_registry(state.registry())?;
        let mut out: BTreeMap<OccupationVector, Complex64> = BTreeMap::new();
        for (occ, amp) in state.terms() {
            for (e, c) in &self.terms {
                if occ.counts().iter().zip(e).any(|(n, k)| n < k) {
                    continue;
                }
                let mut factor = 1.0;
                let mut next = occ.counts().to_vec();
                for (i, &k) in e.iter().enumerate() {
                    if k > 0 {
                        factor *= falling_factorial_sqrt(next[i], k);
                        next[i] -= k;
                    }
                }
                *out.entry(OccupationVector::new(next)).or_default() += amp * c * factor;
            }
        }
        PureState::from_terms(state.registry().clone(), out)
    }

    /// Linear substitution `a_i -> sum_j m[(i, j)] a_j`.
    pub fn substitute(&self, m: &DMatrix<Complex64>) -> Result<Self> {
        let n = self.registry.len();
        if m.nrows() != n || m.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: m.nrows(),
            });
        }
        let images: Vec<OpPolynomial> = (0..n)
            .map(|i| {
                let terms = (0..n).filter_map(|j| {
                    let z = m[(i, j)];
                    (z != Complex64::new(0.0, 0.0)).then(|| {
                        let mut e = vec![0u16; n];
                        e[j] = 1;
                        (e, z)
                    })
                });
                OpPolynomial::from_terms(self.registry.clone(), terms).expect("sized")
            })
            .collect();
        let mut acc = OpPolynomial::zero(self.registry.clone());
        let mut powers: BTreeMap<(usize, u16), OpPolynomial> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut term = OpPolynomial::constant(self.registry.clone(), *c);
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let pw = powers
                    .entry((i, k))
                    .or_insert_with(|| images[i].pow(k as u32));
                term = term.multiply(pw)?;
            }
            for (e2, c2) in term.terms {
                *acc.terms.entry(e2).or_default() += c2;
            }
        }
        acc.prune();
        Ok(acc)
    }

    /// The operator that acts after `u` as `self` acted before it:
    /// `transform(p, U).apply(lift(U) s) == lift(U) (p.apply(s))`.
    ///
    /// This is the substitution `a_i -> sum_j conj(U[j][i]) a_j`.
    pub fn transform(&self, u: &ModeUnitary) -> Result<Self> {
        self.check_registry(u.registry())?;
        self.substitute(&u.matrix().adjoint())
    }

    /// Rewrites the `(h, v)` operators of path `spatial` in terms of the axis
    /// operators `p+`, `p-`, which then occupy the `h` and `v` slots.
    pub fn in_axis_basis(&self, spatial: &str, axis: &PolarizationAxis) -> Result<Self> {
        let h = self.registry.require(&ModeLabel::h(spatial))?;
        let v = self.registry.require(&ModeLabel::v(spatial))?;
        let n = self.registry.len();
        let mut m = DMatrix::<Complex64>::identity(n, n);
        let basis = axis.basis_matrix();
        let b = basis.matrix();
        for (r, &ir) in [h, v].iter().enumerate() {
            for (col, &ic) in [h, v].iter().enumerate() {
                m[(ir, ic)] = b[(r, col)];
            }
        }
        self.substitute(&m)
    }

    /// Drops every monomial touching one of `modes` (which are known to be in
    /// vacuum) and removes those modes from the registry.
    pub fn restrict_to_vacuum(&self, modes: &[ModeLabel]) -> Result<Self> {
        let idx = modes
            .iter()
            .map(|m| self.registry.require(m))
            .collect::<Result<Vec<_>>>()?;
        let registry = self.registry.without(&idx);
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| idx.iter().all(|&i| e[i] == 0))
            .map(|(e, c)| {
                let kept: Vec<u16> = e
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| !idx.contains(i))
                    .map(|(_, &k)| k)
                    .collect();
                (kept, *c)
            });
        Self::from_terms(registry, terms)
    }

    pub fn approx_eq(&self, other: &OpPolynomial, tol: f64) -> bool {
        self.registry == other.registry && self.diff_within(other, one(), tol)
    }

    /// Equality up to a unit-modulus global factor.
    pub fn eq_up_to_phase(&self, other: &OpPolynomial, tol: f64) -> bool {
        match self.ratio_to(other) {
            Some(r) => (r.norm() - 1.0).abs() <= tol && self.diff_within(other, r, tol),
            None => self.is_zero() && other.is_zero(),
        }
    }

    /// The scalar `r` with `self == r * other`, if one exists within `tol`.
    pub fn proportional_to(&self, other: &OpPolynomial, tol: f64) -> Option<Complex64> {
        let r = self.ratio_to(other)?;
        (self.registry == other.registry && self.diff_within(other, r, tol)).then_some(r)
    }

    fn ratio_to(&self, other: &OpPolynomial) -> Option<Complex64> {
        let (e, c) = other
            .terms
            .iter()
            .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))?;
        Some(self.coefficient(e) / c)
    }

    fn diff_within(&self, other: &OpPolynomial, ratio: Complex64, tol: f64) -> bool {
        let keys: std::collections::BTreeSet<&Vec<u16>> =
            self.terms.keys().chain(other.terms.keys()).collect();
        keys.into_iter().all(|k| {
            let a = self.terms.get(k).copied().unwrap_or_default();
            let b = other.terms.get(k).copied().unwrap_or_default();
            (a - b * ratio).norm() <= tol
        })
    }
}

/// The product `prod_{m=0}^{n-1} (p+ + e^{i(2 pi m + theta)/n} p-)` of `n`
/// annihilators whose polarizations sit equidistantly on the great circle
/// perpendicular to `axis`, expressed in the `(h, v)` operators of path
/// `spatial`. Expanded, it equals `p+^n - e^{i(n pi + theta)} p-^n`.
pub fn bunching_product(
    n: u32,
    theta: f64,
    axis: &PolarizationAxis,
    spatial: &str,
) -> Result<OpPolynomial> {
    if n == 0 {
        return Err(Error::InvalidParameter("bunching product needs n >= 1".into()));
    }
    let registry = ModeRegistry::new([ModeLabel::new(spatial, crate::fock::Polarization::H)?, ModeLabel::v(spatial)])?;
    let p_plus = OpPolynomial::polarized(registry.clone(), spatial, axis.plus())?;
    let p_minus = OpPolynomial::polarized(registry.clone(), spatial, axis.minus())?;
    let mut acc = OpPolynomial::constant(registry, one());
    for m in 0..n {
        let phase = Complex64::from_polar(1.0, (2.0 * PI * m as f64 + theta) / n as f64);
        let q = p_plus.add(&p_minus.scale(phase))?;
        acc = acc.multiply(&q)?;
    }
    Ok(acc)
}

fn fmt_real(x: f64) -> String {
    let s = format!("{x:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".to_string() } else { s.to_string() }
}

impl fmt::Display for OpPolynomial {
    /// Renders e.g. `a_h^2 - a_v^2`, highest exponent vector first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names = self.registry.names();
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let ops: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &p)| p > 0)
                .map(|(i, &p)| {
                    if p == 1 {
                        names[i].clone()
                    } else {
                        format!("{}^{p}", names[i])
                    }
                })
                .collect();
            let ops = ops.join(" ");
            let real = c.im.abs() < COEFF_PRUNE;
            let imag = c.re.abs() < COEFF_PRUNE;
            let (neg, body) = if real {
                let mag = c.re.abs();
                let body = if (mag - 1.0).abs() < COEFF_PRUNE && !ops.is_empty() {
                    String::new()
                } else {
                    fmt_real(mag)
                };
                (c.re < 0.0, body)
            } else if imag {
                (c.im < 0.0, format!("{}i", fmt_real(c.im.abs())))
            } else {
                (false, format!("({}{}{}i)", fmt_real(c.re), if c.im < 0.0 { "-" } else { "+" }, fmt_real(c.im.abs())))
            };
            let sep = match (k, neg) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            };
            let gap = if body.is_empty() || ops.is_empty() { "" } else { " " };
            write!(f, "{sep}{body}{gap}{ops}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonomialJson {
    pub exp: Vec<u16>,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolynomialJson {
    pub modes: Vec<String>,
    pub monomials: Vec<MonomialJson>,
}

impl From<&OpPolynomial> for PolynomialJson {
    fn from(p: &OpPolynomial) -> Self {
        PolynomialJson {
            modes: p.registry.names(),
            monomials: p
                .terms
                .iter()
                .map(|(e, c)| MonomialJson {
                    exp: e.clone(),
                    re: c.re,
                    im: c.im,
                })
                .collect(),
        }
    }
}

impl TryFrom<PolynomialJson> for OpPolynomial {
    type Error = Error;

    fn try_from(j: PolynomialJson) -> Result<Self> {
        if j.modes.len() > MAX_MODES {
            return Err(Error::Parse(format!("more than {MAX_MODES} modes")));
        }
        let registry = ModeRegistry::parse(&j.modes)?;
        let perm: Vec<usize> = j
            .modes
            .iter()
            .map(|n| registry.index_of(&n.parse().expect("parsed")).expect("present"))
            .collect();
        let mut terms = Vec::with_capacity(j.monomials.len());
        for m in j.monomials {
            if m.exp.len() != perm.len() {
                return Err(Error::DimensionMismatch {
                    expected: perm.len(),
                    found: m.exp.len(),
                });
            }
            if m.exp.iter().map(|&k| k as u32).sum::<u32>() > MAX_DEGREE {
                return Err(Error::Parse(format!("degree above {MAX_DEGREE}")));
            }
            if !(m.re.is_finite() && m.im.is_finite()) {
                return Err(Error::Parse("non-finite coefficient".into()));
            }
            let mut e = vec![0u16; perm.len()];
            for (i, &k) in m.exp.iter().enumerate() {
                e[perm[i]] = k;
            }
            terms.push((e, Complex64::new(m.re, m.im)));
        }
        OpPolynomial::from_terms(registry, terms)
    }
}

impl OpPolynomial {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(PolynomialJson::from(self)).expect("polynomial serializes")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let j: PolynomialJson = serde_json::from_str(s)?;
        OpPolynomial::try_from(j)
    }
}
