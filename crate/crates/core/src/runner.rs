//! JSON experiment configs and the artifacts they produce.
//!
//! A config is `{"experiment": id, "params": {...}}`. Running it yields a
//! table (written as CSV) and a summary (written as JSON). Every number is
//! printed with Rust's shortest round-trip formatting and every JSON object
//! has sorted keys, so identical configs produce identical bytes.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::experiments::{
    alpha_from_visibility, alpha_grid, alpha_visibility_curve, fixed_basis, fringe_scan,
    fringe_source, pair_ratio_report, uniform_grid, visibility_scan, ScanResult, ALPHA_GRID_POINTS,
};
use crate::fock::{Ensemble, PureState};
use crate::herald::{
    fidelity, noon4_operator_report, probability, Conditional, DetectionPattern, HeraldSpec, NoonBasis,
    SchemeOutcome, SplitScheme, NOON8_HWP_ANGLES_DEG,
};
use crate::optics::{apply_unitary, embed_many, polarization_groups, su2, PolarizationAxis};
use crate::source::{singlet_term, SourceSpec};

/// Largest accepted scan grid.
pub const MAX_GRID_POINTS: usize = 100_000;

/// Largest accepted number of random trials.
pub const MAX_TRIALS: usize = 10_000;

/// Built-in experiments: id, description, anchor.
pub const EXPERIMENTS: &[(&str, &str, &str)] = &[
    ("fig2", "four-fold and two-fold coincidences while rotating the b analyzer", "polarization-basis visibility scan"),
    ("fig3", "coincidences versus birefringent phase on b after heralding on a", "birefringent-phase fringe scan"),
    ("alpha", "four-fold visibility versus indistinguishability, and its inversion", "indistinguishability from four-fold visibility"),
    ("pair_ratio", "three-pair to two-pair emission ratio of the down-conversion state", "multi-pair emission ratio"),
    ("noon2", "two-photon NOON state heralded by a coincidence in a rotated basis", "two-photon non-local bunching herald"),
    ("noon4", "four-photon NOON state heralded through a beam splitter and two analyzers", "four-photon herald, split analyzers"),
    ("noon8", "eight-photon NOON state heralded through a two-level splitter cascade", "eight-photon herald, rl basis"),
    ("herald", "user-defined circuit and detection pattern applied to a source", "custom herald"),
    ("any_basis", "heralding in seeded random analyzer bases; bunching in the complementary bases", "any-basis non-local bunching"),
    ("rotation", "singlet fidelity under seeded random common polarization rotations", "rotational invariance of the pair state"),
];

/// Experiment ids with descriptions and anchors, in fixed order.
pub fn list_experiments() -> Vec<(&'static str, &'static str, &'static str)> {
    EXPERIMENTS.to_vec()
}

pub fn anchor_of(id: &str) -> Option<&'static str> {
    EXPERIMENTS.iter().find(|e| e.0 == id).map(|e| e.2)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub experiment: String,
    #[serde(default = "empty_object")]
    pub params: Value,
}

fn empty_object() -> Value {
    json!({})
}

impl RunConfig {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let c: RunConfig = serde_json::from_str(s)?;
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        self.plan().map(|_| ())
    }

    fn plan(&self) -> Result<Plan> {
        fn p<T: DeserializeOwned>(v: &Value) -> Result<T> {
            let v = if v.is_null() { json!({}) } else { v.clone() };
            Ok(serde_json::from_value(v)?)
        }
        let plan = match self.experiment.as_str() {
            "fig2" => Plan::Fig2(p(&self.params)?),
            "fig3" => Plan::Fig3(p(&self.params)?),
            "alpha" => Plan::Alpha(p(&self.params)?),
            "pair_ratio" => Plan::PairRatio(p(&self.params)?),
            "noon2" => Plan::Noon2(p(&self.params)?),
            "noon4" => Plan::Noon4(p(&self.params)?),
            "noon8" => Plan::Noon8(p(&self.params)?),
            "herald" => Plan::Herald(p(&self.params)?),
            "any_basis" => Plan::AnyBasis(p(&self.params)?),
            "rotation" => Plan::Rotation(p(&self.params)?),
            other => return Err(Error::InvalidParameter(format!("unknown experiment {other:?}"))),
        };
        plan.validate()?;
        Ok(plan)
    }

    pub fn run(&self) -> Result<Artifacts> {
        let plan = self.plan()?;
        let (table, mut summary) = plan.execute()?;
        let anchor = anchor_of(&self.experiment).expect("planned experiments are listed");
        if let Value::Object(m) = &mut summary {
            m.insert("experiment".into(), json!(self.experiment));
            m.insert("anchor".into(), json!(anchor));
        }
        Ok(Artifacts {
            experiment: self.experiment.clone(),
            anchor,
            table,
            summary,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

/// Rows under a header; the first column is the abscissa.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => format!("{x}"),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) => json!(x),
            Cell::Text(s) => json!(s),
        }
    }
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for r in &self.rows {
            let cells: Vec<String> = r.iter().map(Cell::csv).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "header": self.header,
            "rows": self.rows.iter().map(|r| r.iter().map(Cell::json).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Artifacts {
    pub experiment: String,
    pub anchor: &'static str,
    pub table: Table,
    pub summary: Value,
}

impl Artifacts {
    pub fn summary_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.summary).expect("summary serializes");
        s.push('\n');
        s
    }

    /// Writes `<stem>.csv` and `<stem>.summary.json` (csv), or a single
    /// `<stem>.json` holding both (json). Returns the written paths.
    pub fn write(&self, dir: &Path, stem: &str, format: OutputFormat) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(dir).map_err(io_err)?;
        let mut written = Vec::new();
        match format {
            OutputFormat::Csv => {
                let csv = dir.join(format!("{stem}.csv"));
                fs::write(&csv, self.table.to_csv()).map_err(io_err)?;
                let sum = dir.join(format!("{stem}.summary.json"));
                fs::write(&sum, self.summary_string()).map_err(io_err)?;
                written.extend([csv, sum]);
            }
            OutputFormat::Json => {
                let path = dir.join(format!("{stem}.json"));
                let doc = json!({"summary": self.summary, "table": self.table.to_json()});
                let mut s = serde_json::to_string_pretty(&doc).expect("serializes");
                s.push('\n');
                fs::write(&path, s).map_err(io_err)?;
                written.push(path);
            }
        }
        Ok(written)
    }
}

fn io_err(e: std::io::Error) -> Error {
    Error::Io(e.to_string())
}

/// JSON for a source: a state document when pure, an ensemble otherwise.
pub fn dump_source(spec: &SourceSpec) -> Result<Value> {
    let e = spec.build()?;
    Ok(match e.as_pure() {
        Some(s) => s.to_json(),
        None => e.to_json(),
    })
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct Fig2Params {
    source: Option<SourceSpec>,
    basis_a: String,
    start_deg: f64,
    stop_deg: f64,
    points: usize,
}

impl Default for Fig2Params {
    fn default() -> Self {
        Fig2Params {
            source: None,
            basis_a: "hv".into(),
            start_deg: -90.0,
            stop_deg: 90.0,
            points: 361,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct Fig3Params {
    source: Option<SourceSpec>,
    basis: NoonBasis,
    points: usize,
}

impl Default for Fig3Params {
    fn default() -> Self {
        Fig3Params {
            source: None,
            basis: NoonBasis::Pm,
            points: 720,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct AlphaParams {
    points: usize,
    visibility: f64,
}

impl Default for AlphaParams {
    fn default() -> Self {
        AlphaParams {
            points: ALPHA_GRID_POINTS,
            visibility: 0.79,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct PairRatioParams {
    tau: Vec<f64>,
}

impl Default for PairRatioParams {
    fn default() -> Self {
        PairRatioParams { tau: vec![0.1] }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
struct NoonParams {
    #[serde(default)]
    source: Option<SourceSpec>,
    #[serde(default)]
    basis: Option<NoonBasis>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
struct HeraldParams {
    source: SourceSpec,
    scheme: HeraldSpec,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct SeededParams {
    seed: u64,
    trials: usize,
    pairs: Vec<u32>,
}

impl SeededParams {
    fn defaults(trials: usize, pairs: &[u32]) -> Self {
        SeededParams {
            seed: 0,
            trials,
            pairs: pairs.to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(transparent)]
struct AnyBasisParams(SeededParams);

impl Default for AnyBasisParams {
    fn default() -> Self {
        AnyBasisParams(SeededParams::defaults(12, &[2]))
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(transparent)]
struct RotationParams(SeededParams);

impl Default for RotationParams {
    fn default() -> Self {
        RotationParams(SeededParams::defaults(20, &[1, 2, 3]))
    }
}

impl Default for SeededParams {
    fn default() -> Self {
        SeededParams::defaults(12, &[2])
    }
}

enum Plan {
    Fig2(Fig2Params),
    Fig3(Fig3Params),
    Alpha(AlphaParams),
    PairRatio(PairRatioParams),
    Noon2(NoonParams),
    Noon4(NoonParams),
    Noon8(NoonParams),
    Herald(HeraldParams),
    AnyBasis(AnyBasisParams),
    Rotation(RotationParams),
}

fn check_points(n: usize, min: usize) -> Result<()> {
    if n < min || n > MAX_GRID_POINTS {
        return Err(Error::InvalidParameter(format!(
            "grid points must lie in [{min}, {MAX_GRID_POINTS}], got {n}"
        )));
    }
    Ok(())
}

fn check_seeded(p: &SeededParams) -> Result<()> {
    if p.trials == 0 || p.trials > MAX_TRIALS {
        return Err(Error::InvalidParameter(format!("trials must lie in [1, {MAX_TRIALS}]")));
    }
    if p.pairs.is_empty() || p.pairs.iter().any(|&n| n == 0 || n > 8) {
        return Err(Error::InvalidParameter("pairs must lie in [1, 8]".into()));
    }
    Ok(())
}

fn source_or(spec: &Option<SourceSpec>, default: impl FnOnce() -> Ensemble) -> Result<Ensemble> {
    match spec {
        Some(s) => s.build(),
        None => Ok(default()),
    }
}

impl Plan {
    fn validate(&self) -> Result<()> {
        match self {
            Plan::Fig2(p) => {
                check_points(p.points, 2)?;
                fixed_basis(&p.basis_a)?;
                if !(p.start_deg.is_finite() && p.stop_deg.is_finite() && p.stop_deg > p.start_deg) {
                    return Err(Error::InvalidParameter("need start_deg < stop_deg".into()));
                }
                p.source.as_ref().map(SourceSpec::validate).transpose()?;
            }
            Plan::Fig3(p) => {
                check_points(p.points, 2)?;
                p.source.as_ref().map(SourceSpec::validate).transpose()?;
            }
            Plan::Alpha(p) => {
                check_points(p.points, 2)?;
                if !(0.0..=1.0).contains(&p.visibility) {
                    return Err(Error::InvalidParameter("visibility must lie in [0, 1]".into()));
                }
            }
            Plan::PairRatio(p) => {
                if p.tau.is_empty() || p.tau.len() > MAX_GRID_POINTS {
                    return Err(Error::InvalidParameter("tau list is empty or too long".into()));
                }
                if p.tau.iter().any(|t| !(t.is_finite() && *t > 0.0 && *t <= 5.0)) {
                    return Err(Error::InvalidParameter("tau must lie in (0, 5]".into()));
                }
            }
            Plan::Noon2(p) | Plan::Noon4(p) | Plan::Noon8(p) => {
                p.source.as_ref().map(SourceSpec::validate).transpose()?;
                if matches!(self, Plan::Noon4(_) | Plan::Noon8(_)) && p.basis.is_some() {
                    return Err(Error::InvalidParameter("basis applies to noon2 only".into()));
                }
            }
            Plan::Herald(p) => {
                p.source.validate()?;
                p.scheme.validate()?;
            }
            Plan::AnyBasis(p) => check_seeded(&p.0)?,
            Plan::Rotation(p) => check_seeded(&p.0)?,
        }
        Ok(())
    }

    fn execute(&self) -> Result<(Table, Value)> {
        match self {
            Plan::Fig2(p) => {
                let src = source_or(&p.source, || Ensemble::pure(singlet_term(2)))?;
                let grid: Vec<f64> = uniform_grid(p.start_deg, p.stop_deg, p.points, true)
                    .into_iter()
                    .map(f64::to_radians)
                    .collect();
                let scan = visibility_scan(&src, &fixed_basis(&p.basis_a)?, &grid)?;
                let four = scan.series("fourfold").expect("fourfold");
                let minima: Vec<f64> = four.argmin(1e-12).iter().map(|&i| grid[i].to_degrees()).collect();
                let summary = json!({
                    "basis_a": p.basis_a,
                    "grid_points": p.points,
                    "grid_step_deg": (p.stop_deg - p.start_deg) / (p.points - 1) as f64,
                    "visibility": visibilities(&scan),
                    "minima_angles": minima,
                    "fourfold_min": four.values.iter().copied().fold(f64::INFINITY, f64::min),
                });
                Ok((scan_table(&scan, "b_hwp_deg", true), summary))
            }
            Plan::Fig3(p) => {
                let src = source_or(&p.source, fringe_source)?;
                let grid = uniform_grid(0.0, 2.0 * PI, p.points, false);
                let scan = fringe_scan(&src, p.basis, &grid)?;
                let four = scan.series("fourfold").expect("fourfold");
                let at = |i: usize| format!("{:?}", grid[i]);
                let summary = json!({
                    "basis_a": p.basis.as_str(),
                    "grid_points": p.points,
                    "visibility": visibilities(&scan),
                    "fourfold_max_at": at(four.argmax(1e-15)[0]),
                    "fourfold_min_at": at(four.argmin(1e-15)[0]),
                });
                Ok((scan_table(&scan, "theta_b_rad", false), summary))
            }
            Plan::Alpha(p) => {
                let curve = alpha_visibility_curve(&alpha_grid(p.points))?;
                let alpha = alpha_from_visibility(p.visibility, &curve)?;
                let table = Table {
                    header: vec!["alpha".into(), "fourfold_visibility".into()],
                    rows: curve.iter().map(|&(a, v)| vec![Cell::Num(a), Cell::Num(v)]).collect(),
                };
                let summary = json!({
                    "grid_points": p.points,
                    "visibility_at_alpha_0": curve[0].1,
                    "visibility_at_alpha_1": curve[curve.len() - 1].1,
                    "measured_visibility": p.visibility,
                    "alpha": alpha,
                });
                Ok((table, summary))
            }
            Plan::PairRatio(p) => {
                let reports = p.tau.iter().map(|&t| pair_ratio_report(t)).collect::<Result<Vec<_>>>()?;
                let table = Table {
                    header: ["tau", "p2", "p3", "ratio"].map(String::from).to_vec(),
                    rows: reports
                        .iter()
                        .map(|r| [r.tau, r.p2, r.p3, r.ratio].map(Cell::Num).to_vec())
                        .collect(),
                };
                let first = reports[0];
                let summary = json!({
                    "tau": first.tau,
                    "ratio": first.ratio,
                    "closed_form": 4.0 / 3.0 * first.tau.tanh().powi(2),
                    "below_two_percent": first.ratio < 0.02,
                });
                Ok((table, summary))
            }
            Plan::Noon2(p) => {
                let basis = p.basis.unwrap_or(NoonBasis::Pm);
                let src = source_or(&p.source, || Ensemble::pure(singlet_term(2)))?;
                let out = HeraldSpec::Noon2 { basis }.run(&src)?;
                let mut summary = herald_summary(&out)?;
                summary["basis"] = json!(basis.as_str());
                Ok((conditional_table(&out), summary))
            }
            Plan::Noon4(p) => {
                let src = source_or(&p.source, || Ensemble::pure(singlet_term(4)))?;
                let out = HeraldSpec::Noon4.run(&src)?;
                let mut summary = herald_summary(&out)?;
                if let Some(s) = src.as_pure() {
                    if s.registry() == singlet_term(0).registry() {
                        let rep = noon4_operator_report(s)?;
                        summary["operator"] = json!(rep.operator.to_string());
                        summary["operator_probability"] = json!(rep.probability);
                        summary["split_factor"] = json!(rep.split_factor);
                    }
                }
                Ok((conditional_table(&out), summary))
            }
            Plan::Noon8(p) => {
                let src = source_or(&p.source, || Ensemble::pure(singlet_term(8)))?;
                let out = HeraldSpec::Noon8.run(&src)?;
                let mut summary = herald_summary(&out)?;
                summary["hwp_angles_deg"] = json!(NOON8_HWP_ANGLES_DEG);
                let op = SplitScheme::noon8().detection_operator()?;
                summary["operator_rl"] = json!(op.in_axis_basis("a", &PolarizationAxis::rl())?.to_string());
                Ok((conditional_table(&out), summary))
            }
            Plan::Herald(p) => {
                let out = p.scheme.run(&p.source.build()?)?;
                Ok((conditional_table(&out), herald_summary(&out)?))
            }
            Plan::AnyBasis(p) => any_basis(&p.0),
            Plan::Rotation(p) => rotation(&p.0),
        }
    }
}

fn visibilities(scan: &ScanResult) -> Value {
    let m: serde_json::Map<String, Value> = scan
        .series
        .iter()
        .map(|s| (s.name.clone(), json!(s.visibility())))
        .collect();
    Value::Object(m)
}

fn scan_table(scan: &ScanResult, abscissa: &str, degrees: bool) -> Table {
    let mut header = vec![abscissa.to_string()];
    header.extend(scan.series.iter().map(|s| s.name.clone()));
    let rows = scan
        .abscissa
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let x = if degrees { x.to_degrees() } else { x };
            let mut r = vec![Cell::Num(x)];
            r.extend(scan.series.iter().map(|s| Cell::Num(s.values[i])));
            r
        })
        .collect();
    Table { header, rows }
}

fn herald_summary(out: &SchemeOutcome) -> Result<Value> {
    if out.outcome.conditional.is_none() {
        return Err(Error::ZeroProbability("the detection pattern cannot occur for this source".into()));
    }
    let mut v = out.report();
    v["fidelity"] = v["fidelity_vs_target"].clone();
    if let Some(t) = &out.target {
        v["target"] = t.to_json();
    }
    Ok(v)
}

/// One row per basis term of the conditional state (first component when
/// mixed), labelled by its occupations.
fn conditional_table(out: &SchemeOutcome) -> Table {
    let (labels, rows) = match out.outcome.conditional.as_ref() {
        Some(c) => {
            let s = match c {
                Conditional::Pure(s) => s.clone(),
                Conditional::Mixed(e) => e.components()[0].1.clone(),
            };
            (s.registry().names(), term_rows(&s))
        }
        None => (Vec::new(), Vec::new()),
    };
    Table {
        header: vec![format!("term[{}]", labels.join(" ")), "re".into(), "im".into()],
        rows,
    }
}

fn term_rows(s: &PureState) -> Vec<Vec<Cell>> {
    s.terms()
        .map(|(o, a)| {
            let occ: Vec<String> = o.counts().iter().map(u16::to_string).collect();
            vec![Cell::Text(occ.join(" ")), Cell::Num(a.re), Cell::Num(a.im)]
        })
        .collect()
}

fn random_su2(rng: &mut ChaCha8Rng) -> crate::optics::LocalUnitary {
    let a = rng.gen_range(0.0..2.0 * PI);
    // cos(beta) uniform gives the invariant measure on the sphere.
    let b = rng.gen_range(-1.0f64..=1.0).acos();
    let g = rng.gen_range(0.0..2.0 * PI);
    su2(a, b, g)
}

/// Complementary axes to `axis`: the equal superpositions of its two
/// states with relative phase 0 and pi/2.
pub fn complementary_axes(axis: &PolarizationAxis) -> [PolarizationAxis; 2] {
    let [p0, p1] = axis.plus();
    let [m0, m1] = axis.minus();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mix = |k: num_complex::Complex64| PolarizationAxis::through([(p0 + k * m0) * s, (p1 + k * m1) * s]);
    [mix(num_complex::Complex64::new(1.0, 0.0)), mix(num_complex::Complex64::new(0.0, 1.0))]
}

/// Per trial: herald probability and the b coincidence probability in each
/// complementary basis.
pub fn any_basis_trials(seed: u64, trials: usize) -> Result<Vec<[f64; 3]>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let src = Ensemble::pure(singlet_term(2));
    let b_pair = DetectionPattern::pnr(&[("b_h", 1), ("b_v", 1)])?;
    (0..trials)
        .map(|_| {
            let w = random_su2(&mut rng);
            let axis = PolarizationAxis::from_analyzer(&w);
            let out = SplitScheme::new("a", &["a"], &[], vec![w])?.herald(&src)?;
            let cond = out
                .conditional
                .as_ref()
                .and_then(Conditional::as_pure)
                .ok_or_else(|| Error::ZeroProbability("random-basis herald".into()))?;
            let mut row = [out.probability, 0.0, 0.0];
            for (k, comp) in complementary_axes(&axis).iter().enumerate() {
                let u = embed_many(&comp.analyzer()?, &polarization_groups("b", cond.registry())?, cond.registry())?;
                row[k + 1] = probability(&apply_unitary(&u, cond)?, &b_pair)?;
            }
            Ok(row)
        })
        .collect()
}

fn any_basis(p: &SeededParams) -> Result<(Table, Value)> {
    let rows = any_basis_trials(p.seed, p.trials)?;
    let table = Table {
        header: ["trial", "herald_probability", "complement1_coincidence", "complement2_coincidence"]
            .map(String::from)
            .to_vec(),
        rows: rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut row = vec![Cell::Num(i as f64)];
                row.extend(r.iter().map(|&x| Cell::Num(x)));
                row
            })
            .collect(),
    };
    let summary = json!({
        "seed": p.seed,
        "trials": p.trials,
        "max_probability_deviation": rows.iter().map(|r| (r[0] - 1.0 / 3.0).abs()).fold(0.0, f64::max),
        "max_complement_coincidence": rows.iter().map(|r| r[1].max(r[2])).fold(0.0, f64::max),
    });
    Ok((table, summary))
}

/// Per trial and pair number: fidelity of the rotated singlet with itself.
pub fn rotation_trials(seed: u64, trials: usize, pairs: &[u32]) -> Result<Vec<(u32, f64)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for _ in 0..trials {
        let w = random_su2(&mut rng);
        for &n in pairs {
            let s = singlet_term(n);
            let reg = s.registry().clone();
            let mut groups = polarization_groups("a", &reg)?;
            groups.extend(polarization_groups("b", &reg)?);
            let u = embed_many(&w, &groups, &reg)?;
            out.push((n, fidelity(&apply_unitary(&u, &s)?, &s)?));
        }
    }
    Ok(out)
}

fn rotation(p: &SeededParams) -> Result<(Table, Value)> {
    let rows = rotation_trials(p.seed, p.trials, &p.pairs)?;
    let table = Table {
        header: ["pairs", "fidelity"].map(String::from).to_vec(),
        rows: rows.iter().map(|&(n, f)| vec![Cell::Num(n as f64), Cell::Num(f)]).collect(),
    };
    let summary = json!({
        "seed": p.seed,
        "trials": p.trials,
        "pairs": p.pairs,
        "min_fidelity": rows.iter().map(|r| r.1).fold(f64::INFINITY, f64::min),
    });
    Ok((table, summary))
}
