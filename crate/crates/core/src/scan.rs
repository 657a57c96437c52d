//! Exhaustive grid scans of fidelity and resources over parameter boxes.
//!
//! A scan evaluates every point of a [`ParamGrid`] against a target state,
//! marks the points whose fidelity lies in the requested band (the
//! "balloon") and those whose photon observables stay within relative
//! windows of the target's, and records the family's resource measures and
//! classifiers. Records always come back sorted by grid index, so the
//! result does not depend on how many worker threads evaluated it.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian_single::{
    displaced_sts1, fidelity_gaussian1, is_nonclassical_sts1, photon_stats, sts1_cm, STS1Params, SingleModeGaussian,
};
use crate::gaussian_two::{
    fidelity_two_mode, gaussian_b_discord, sts2_coeffs, symplectic_spectrum, STS2Params, SEPARABILITY_TOL,
};
use crate::matrix::SymmetricMatrix;
use crate::qubit::{
    classical_fidelity, is_separable_pd, pd_discord, pd_eigenvalues, qubit_fidelity, BlochVector, PauliDiagonalCoeffs,
    PHYSICAL_TOL,
};

/// Parameter edge length at which boundary bisection stops.
pub const REFINE_RESOLUTION: f64 = 1e-4;
const STREAM_CHUNK: usize = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    BlochQubit,
    PauliDiagonal,
    Sts1,
    DisplacedSts1,
    Sts2,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::BlochQubit => "bloch-qubit",
            Family::PauliDiagonal => "pauli-diagonal",
            Family::Sts1 => "sts1",
            Family::DisplacedSts1 => "displaced-sts1",
            Family::Sts2 => "sts2",
        }
    }

    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            Family::BlochQubit => &["rx", "ry", "rz"],
            Family::PauliDiagonal => &["c1", "c2", "c3"],
            Family::Sts1 => &["s", "mu"],
            Family::DisplacedSts1 => &["s", "mu", "x"],
            Family::Sts2 => &["n", "beta", "gamma"],
        }
    }

    pub fn resource_names(self) -> &'static [&'static str] {
        match self {
            Family::BlochQubit => &["sz"],
            Family::PauliDiagonal => &["negativity", "discord", "lambda_min"],
            Family::Sts1 | Family::DisplacedSts1 => &["mean_n", "var_n", "fano"],
            Family::Sts2 => &["dt_minus", "d_minus", "d_plus", "discord", "total_photons"],
        }
    }

    /// Family-specific boolean classifiers.
    pub fn classifier_names(self) -> &'static [&'static str] {
        match self {
            Family::BlochQubit => &[],
            Family::PauliDiagonal | Family::Sts2 => &["separable"],
            Family::Sts1 => &["nonclassical"],
            Family::DisplacedSts1 => &["nonclassical", "subpoissonian"],
        }
    }

    pub fn supports(self, obs: Observable) -> bool {
        matches!(
            (self, obs),
            (Family::Sts1 | Family::DisplacedSts1, Observable::MeanPhotons)
                | (Family::Sts1 | Family::DisplacedSts1, Observable::PhotonVariance)
                | (Family::Sts2, Observable::TotalPhotons)
        )
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Observable {
    MeanPhotons,
    PhotonVariance,
    TotalPhotons,
}

impl Observable {
    fn resource(self) -> &'static str {
        match self {
            Observable::MeanPhotons => "mean_n",
            Observable::PhotonVariance => "var_n",
            Observable::TotalPhotons => "total_photons",
        }
    }
}

/// One grid axis. `steps == 1` pins the parameter at `min` (which must then
/// equal `max`), which is how fixed-parameter slices are expressed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub name: String,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Axis {
    pub fn new(name: &str, min: f64, max: f64, steps: usize) -> Self {
        Self {
            name: name.to_string(),
            min,
            max,
            steps,
        }
    }

    pub fn fixed(name: &str, value: f64) -> Self {
        Self::new(name, value, value, 1)
    }

    pub fn value(&self, i: usize) -> f64 {
        if self.steps <= 1 {
            self.min
        } else {
            self.min + (self.max - self.min) * i as f64 / (self.steps - 1) as f64
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParamGrid {
    pub family: Family,
    pub axes: Vec<Axis>,
}

impl ParamGrid {
    pub fn new(family: Family, axes: Vec<Axis>) -> Result<Self> {
        let grid = Self { family, axes };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        let expected = self.family.param_names();
        for (k, axis) in self.axes.iter().enumerate() {
            if !expected.contains(&axis.name.as_str()) {
                return Err(Error::Config(format!(
                    "axes[{k}].name: unknown axis '{}' for family {} (expected {})",
                    axis.name,
                    self.family,
                    expected.join(", ")
                )));
            }
            if self.axes[..k].iter().any(|a| a.name == axis.name) {
                return Err(Error::Config(format!("axes[{k}].name: duplicate axis '{}'", axis.name)));
            }
            if !(axis.min.is_finite() && axis.max.is_finite()) {
                return Err(Error::Config(format!("axes[{k}]: bounds must be finite")));
            }
            match axis.steps {
                0 => return Err(Error::Config(format!("axes[{k}].steps: must be at least 1"))),
                1 if axis.min != axis.max => {
                    return Err(Error::Config(format!("axes[{k}]: a single-step axis needs min == max")))
                }
                s if s >= 2 && axis.min >= axis.max => {
                    return Err(Error::Config(format!("axes[{k}]: min must be below max")))
                }
                _ => {}
            }
        }
        if self.axes.len() != expected.len() {
            let missing: Vec<_> = expected
                .iter()
                .filter(|n| !self.axes.iter().any(|a| a.name == **n))
                .copied()
                .collect();
            return Err(Error::Config(format!(
                "axes: missing axis {} for family {}",
                missing.join(", "),
                self.family
            )));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.steps).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Per-axis indices of a row-major grid index (last axis fastest).
    pub fn coords(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.axes.len()];
        for (k, axis) in self.axes.iter().enumerate().rev() {
            out[k] = index % axis.steps;
            index /= axis.steps;
        }
        out
    }

    pub fn index_of(&self, coords: &[usize]) -> usize {
        coords.iter().zip(&self.axes).fold(0, |acc, (&c, a)| acc * a.steps + c)
    }

    pub fn point(&self, index: usize) -> Vec<f64> {
        self.coords(index)
            .iter()
            .zip(&self.axes)
            .map(|(&i, a)| a.value(i))
            .collect()
    }

    /// Maps axis-ordered values to the family's canonical parameter order.
    fn canonical(&self, values: &[f64]) -> Vec<f64> {
        self.family
            .param_names()
            .iter()
            .map(|n| {
                let k = self.axes.iter().position(|a| a.name == *n).expect("validated");
                values[k]
            })
            .collect()
    }
}

/// Fidelity band `f_min ≤ F ≤ f_max` around a target given in the family's
/// canonical parameter order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FidelityConstraint {
    pub target: Vec<f64>,
    pub f_min: f64,
    pub f_max: f64,
}

impl FidelityConstraint {
    pub fn threshold(target: Vec<f64>, f_min: f64) -> Self {
        Self {
            target,
            f_min,
            f_max: 1.0,
        }
    }

    pub fn band(target: Vec<f64>, f_min: f64, f_max: f64) -> Self {
        Self { target, f_min, f_max }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.f_min) || !(0.0..=1.0).contains(&self.f_max) {
            return Err(Error::Config("band: f_min and f_max must lie in [0, 1]".into()));
        }
        if self.f_min > self.f_max {
            return Err(Error::Config(format!(
                "band: f_min ({}) exceeds f_max ({})",
                self.f_min, self.f_max
            )));
        }
        Ok(())
    }

    pub fn contains(&self, f: f64) -> bool {
        self.f_min <= f && f <= self.f_max
    }
}

/// `|v − v_target| ≤ rel_tol · v_target` on one photon observable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelativeWindowConstraint {
    pub observable: Observable,
    pub rel_tol: f64,
}

impl RelativeWindowConstraint {
    pub fn new(observable: Observable, rel_tol: f64) -> Self {
        Self { observable, rel_tol }
    }
}

/// Column layout shared by all records of one scan.
#[derive(Debug, Clone, PartialEq)]
pub struct RecordSchema {
    pub family: Family,
    pub axes: Vec<String>,
    pub resources: Vec<&'static str>,
    /// `physical`, the family classifiers, `in_balloon`, `in_window`.
    pub flags: Vec<&'static str>,
}

impl RecordSchema {
    fn new(grid: &ParamGrid) -> Self {
        let mut flags = vec!["physical"];
        flags.extend_from_slice(grid.family.classifier_names());
        flags.extend(["in_balloon", "in_window"]);
        Self {
            family: grid.family,
            axes: grid.axes.iter().map(|a| a.name.clone()).collect(),
            resources: grid.family.resource_names().to_vec(),
            flags,
        }
    }

    pub fn resource_index(&self, name: &str) -> Option<usize> {
        self.resources.iter().position(|r| *r == name)
    }

    pub fn flag_index(&self, name: &str) -> Option<usize> {
        self.flags.iter().position(|f| *f == name)
    }

    pub fn axis_index(&self, name: &str) -> Option<usize> {
        self.axes.iter().position(|a| a == name)
    }

    fn classifier_index(&self, name: &str) -> Result<usize> {
        if !self.family.classifier_names().contains(&name) {
            return Err(Error::Config(format!(
                "unknown classifier '{name}' for family {} (expected {})",
                self.family,
                self.family.classifier_names().join(", ")
            )));
        }
        Ok(self.flag_index(name).expect("classifier listed in flags"))
    }
}

const PHYSICAL: usize = 0;

/// Evaluation of one parameter point.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanRecord {
    pub grid_index: usize,
    /// Parameter values in axis order.
    pub params: Vec<f64>,
    /// NaN for unphysical points.
    pub fidelity: f64,
    /// Values in [`RecordSchema::resources`] order; NaN when undefined.
    pub resources: Vec<f64>,
    /// Values in [`RecordSchema::flags`] order.
    pub flags: Vec<bool>,
}

impl ScanRecord {
    pub fn physical(&self) -> bool {
        self.flags[PHYSICAL]
    }

    pub fn in_balloon(&self) -> bool {
        self.flags[self.flags.len() - 2]
    }

    pub fn in_window(&self) -> bool {
        self.flags[self.flags.len() - 1]
    }
}

/// Records of one scan together with their schema and the target's own
/// resource values.
#[derive(Debug, Clone)]
pub struct ScanOutput {
    pub schema: RecordSchema,
    pub target: ScanRecord,
    pub records: Vec<ScanRecord>,
}

impl ScanOutput {
    pub fn resource(&self, record: &ScanRecord, name: &str) -> Option<f64> {
        self.schema.resource_index(name).map(|k| record.resources[k])
    }

    pub fn flag(&self, record: &ScanRecord, name: &str) -> Option<bool> {
        self.schema.flag_index(name).map(|k| record.flags[k])
    }
}

enum Prepared {
    Bloch(BlochVector),
    Pd([f64; 4]),
    Single(SingleModeGaussian),
    Two(SymmetricMatrix),
}

struct PointValues {
    physical: bool,
    fidelity: f64,
    resources: Vec<f64>,
    classifiers: Vec<bool>,
}

impl PointValues {
    fn unphysical(family: Family) -> Self {
        Self {
            physical: false,
            fidelity: f64::NAN,
            resources: vec![f64::NAN; family.resource_names().len()],
            classifiers: vec![false; family.classifier_names().len()],
        }
    }
}

fn single_mode_point(s: f64, mu: f64, x: f64, displaced: bool) -> Option<(SingleModeGaussian, PointValues)> {
    let p = STS1Params { s, mu };
    p.validate().ok()?;
    let g = if displaced {
        displaced_sts1(p, x).ok()?
    } else {
        sts1_cm(p).ok()?
    };
    let stats = photon_stats(&g).ok()?;
    let fano = stats.fano.unwrap_or(f64::NAN);
    let mut classifiers = vec![is_nonclassical_sts1(p)];
    if displaced {
        classifiers.push(stats.fano.is_some_and(|r| r < 1.0));
    }
    Some((
        g,
        PointValues {
            physical: true,
            fidelity: f64::NAN,
            resources: vec![stats.mean_n, stats.var_n, fano],
            classifiers,
        },
    ))
}

fn evaluate_point(family: Family, canonical: &[f64], target: Option<&Prepared>) -> (Option<Prepared>, PointValues) {
    match family {
        Family::BlochQubit => {
            let r = BlochVector::new(canonical[0], canonical[1], canonical[2]);
            if !r.is_physical() {
                return (None, PointValues::unphysical(family));
            }
            let fidelity = match target {
                Some(Prepared::Bloch(t)) => qubit_fidelity(r, *t).unwrap_or(f64::NAN),
                _ => f64::NAN,
            };
            (
                Some(Prepared::Bloch(r)),
                PointValues {
                    physical: true,
                    fidelity,
                    resources: vec![r.rz],
                    classifiers: vec![],
                },
            )
        }
        Family::PauliDiagonal => {
            let c = PauliDiagonalCoeffs::new(canonical[0], canonical[1], canonical[2]);
            let lambda = pd_eigenvalues(c);
            if lambda.min() < -PHYSICAL_TOL {
                return (None, PointValues::unphysical(family));
            }
            let pt = pd_eigenvalues(PauliDiagonalCoeffs::new(c.c1, -c.c2, c.c3));
            let negativity = (-2.0 * pt.0.iter().filter(|&&x| x < 0.0).sum::<f64>()).max(0.0);
            let separable = is_separable_pd(c).unwrap_or(false);
            let fidelity = match target {
                Some(Prepared::Pd(t)) => classical_fidelity(&lambda.0, t),
                _ => f64::NAN,
            };
            (
                Some(Prepared::Pd(lambda.0)),
                PointValues {
                    physical: true,
                    fidelity,
                    resources: vec![negativity, pd_discord(c).unwrap_or(f64::NAN), lambda.min()],
                    classifiers: vec![separable],
                },
            )
        }
        Family::Sts1 | Family::DisplacedSts1 => {
            let displaced = family == Family::DisplacedSts1;
            let x = if displaced { canonical[2] } else { 0.0 };
            let Some((g, mut values)) = single_mode_point(canonical[0], canonical[1], x, displaced) else {
                return (None, PointValues::unphysical(family));
            };
            if let Some(Prepared::Single(t)) = target {
                values.fidelity = fidelity_gaussian1(&g, t).unwrap_or(f64::NAN);
            }
            (Some(Prepared::Single(g)), values)
        }
        Family::Sts2 => {
            let p = STS2Params {
                n_tot: canonical[0],
                beta: canonical[1],
                gamma: canonical[2],
            };
            let Ok(m) = sts2_coeffs(p) else {
                return (None, PointValues::unphysical(family));
            };
            let Ok(spec) = symplectic_spectrum(m) else {
                return (None, PointValues::unphysical(family));
            };
            let cm = m.covariance_matrix();
            let fidelity = match target {
                Some(Prepared::Two(t)) => fidelity_two_mode(&cm, t).unwrap_or(f64::NAN),
                _ => f64::NAN,
            };
            (
                Some(Prepared::Two(cm)),
                PointValues {
                    physical: true,
                    fidelity,
                    resources: vec![
                        spec.dt_minus,
                        spec.d_minus,
                        spec.d_plus,
                        gaussian_b_discord(p).unwrap_or(f64::NAN),
                        p.n_tot,
                    ],
                    classifiers: vec![spec.dt_minus >= 0.5 - SEPARABILITY_TOL],
                },
            )
        }
    }
}

/// Prepared evaluator for one (grid, band, windows) combination.
pub struct Scanner {
    grid: ParamGrid,
    band: FidelityConstraint,
    schema: RecordSchema,
    prepared: Prepared,
    target_record: ScanRecord,
    /// `(resource index, rel_tol, target value)`
    windows: Vec<(usize, f64, f64)>,
}

impl Scanner {
    pub fn new(grid: ParamGrid, band: FidelityConstraint, windows: &[RelativeWindowConstraint]) -> Result<Self> {
        grid.validate()?;
        band.validate()?;
        let family = grid.family;
        if band.target.len() != family.param_names().len() {
            return Err(Error::Config(format!(
                "target: expected {} values ({}) for family {family}",
                family.param_names().len(),
                family.param_names().join(", ")
            )));
        }
        let (prepared, target_values) = evaluate_point(family, &band.target, None);
        let Some(prepared) = prepared else {
            return Err(Error::Unphysical(format!(
                "target {:?} is not a physical {family} state",
                band.target
            )));
        };
        let schema = RecordSchema::new(&grid);
        let mut resolved = Vec::with_capacity(windows.len());
        for (k, w) in windows.iter().enumerate() {
            if !family.supports(w.observable) {
                return Err(Error::Config(format!(
                    "windows[{k}].observable: {:?} is not defined for family {family}",
                    w.observable
                )));
            }
            if !(w.rel_tol > 0.0 && w.rel_tol < 1.0) {
                return Err(Error::Config(format!(
                    "windows[{k}].rel_tol: must lie in (0, 1), got {}",
                    w.rel_tol
                )));
            }
            let idx = schema
                .resource_index(w.observable.resource())
                .expect("supported observable");
            resolved.push((idx, w.rel_tol, target_values.resources[idx]));
        }
        let mut scanner = Self {
            target_record: ScanRecord {
                grid_index: 0,
                params: Vec::new(),
                fidelity: 1.0,
                resources: Vec::new(),
                flags: Vec::new(),
            },
            grid,
            band,
            schema,
            prepared,
            windows: resolved,
        };
        let target_in_axis_order: Vec<f64> = scanner
            .grid
            .axes
            .iter()
            .map(|a| {
                let k = family
                    .param_names()
                    .iter()
                    .position(|n| *n == a.name)
                    .expect("validated");
                scanner.band.target[k]
            })
            .collect();
        scanner.target_record = scanner.evaluate_params(0, target_in_axis_order);
        Ok(scanner)
    }

    pub fn grid(&self) -> &ParamGrid {
        &self.grid
    }

    pub fn schema(&self) -> &RecordSchema {
        &self.schema
    }

    pub fn target_record(&self) -> &ScanRecord {
        &self.target_record
    }

    fn evaluate_params(&self, grid_index: usize, params: Vec<f64>) -> ScanRecord {
        let canonical = self.grid.canonical(&params);
        let (_, values) = evaluate_point(self.grid.family, &canonical, Some(&self.prepared));
        let in_balloon = values.physical && self.band.contains(values.fidelity);
        let in_window = values.physical
            && self
                .windows
                .iter()
                .all(|&(idx, tol, target)| (values.resources[idx] - target).abs() <= tol * target);
        let mut flags = Vec::with_capacity(self.schema.flags.len());
        flags.push(values.physical);
        flags.extend(values.classifiers);
        flags.push(in_balloon);
        flags.push(in_window);
        ScanRecord {
            grid_index,
            params,
            fidelity: values.fidelity,
            resources: values.resources,
            flags,
        }
    }

    pub fn evaluate(&self, grid_index: usize) -> ScanRecord {
        self.evaluate_params(grid_index, self.grid.point(grid_index))
    }

    /// Evaluates every grid point; the result is in grid-index order.
    pub fn scan(&self) -> ScanOutput {
        let records: Vec<ScanRecord> = (0..self.grid.len()).into_par_iter().map(|i| self.evaluate(i)).collect();
        ScanOutput {
            schema: self.schema.clone(),
            target: self.target_record.clone(),
            records,
        }
    }

    /// Summary of the whole grid without materializing records. Chunks are
    /// folded in parallel and merged in index order, so the result is
    /// independent of the thread count.
    pub fn summarize_streaming(&self, classifiers: &[&str], restrict_to_window: bool) -> Result<RegionSummary> {
        let template = Accumulator::new(&self.schema, classifiers, restrict_to_window)?;
        let n = self.grid.len();
        let chunks: Vec<Accumulator> = (0..n.div_ceil(STREAM_CHUNK))
            .into_par_iter()
            .map(|c| {
                let mut acc = template.clone();
                for i in c * STREAM_CHUNK..((c + 1) * STREAM_CHUNK).min(n) {
                    acc.push(&self.evaluate(i));
                }
                acc
            })
            .collect();
        let mut total = template;
        for c in &chunks {
            total.merge(c);
        }
        Ok(total.finish(&self.schema))
    }

    /// Bisects every grid edge whose endpoints are both physical and in the
    /// balloon but disagree on `classifier`, down to [`REFINE_RESOLUTION`].
    /// Each surviving edge contributes a straddling pair of records (inside
    /// class first). Edges whose midpoints leave the balloon are dropped.
    pub fn refine_boundary(&self, output: &ScanOutput, classifier: &str) -> Result<Vec<ScanRecord>> {
        let flag = self.schema.classifier_index(classifier)?;
        let records = &output.records;
        if records.len() != self.grid.len() {
            return Err(Error::Config("records do not come from this grid".into()));
        }
        let usable = |r: &ScanRecord| r.physical() && r.in_balloon();
        let mut edges = Vec::new();
        for (i, rec) in records.iter().enumerate() {
            if !usable(rec) {
                continue;
            }
            let coords = self.grid.coords(i);
            for (k, axis) in self.grid.axes.iter().enumerate() {
                if coords[k] + 1 >= axis.steps {
                    continue;
                }
                let mut next = coords.clone();
                next[k] += 1;
                let j = self.grid.index_of(&next);
                if usable(&records[j]) && records[j].flags[flag] != rec.flags[flag] {
                    edges.push((i, j));
                }
            }
        }
        let pairs: Vec<Option<[ScanRecord; 2]>> = edges
            .par_iter()
            .map(|&(i, j)| self.bisect(&records[i], &records[j], flag))
            .collect();
        Ok(pairs.into_iter().flatten().flatten().collect())
    }

    fn bisect(&self, a: &ScanRecord, b: &ScanRecord, flag: usize) -> Option<[ScanRecord; 2]> {
        let (mut inside, mut outside) = if a.flags[flag] {
            (a.clone(), b.clone())
        } else {
            (b.clone(), a.clone())
        };
        let origin = a.grid_index;
        let gap = |x: &ScanRecord, y: &ScanRecord| {
            x.params
                .iter()
                .zip(&y.params)
                .fold(0.0_f64, |m, (p, q)| m.max((p - q).abs()))
        };
        while gap(&inside, &outside) > REFINE_RESOLUTION {
            let mid: Vec<f64> = inside
                .params
                .iter()
                .zip(&outside.params)
                .map(|(p, q)| 0.5 * (p + q))
                .collect();
            let rec = self.evaluate_params(origin, mid);
            if !(rec.physical() && rec.in_balloon()) {
                return None;
            }
            if rec.flags[flag] {
                inside = rec;
            } else {
                outside = rec;
            }
        }
        inside.grid_index = origin;
        outside.grid_index = origin;
        Some([inside, outside])
    }
}

pub fn scan(grid: &ParamGrid, fc: &FidelityConstraint, windows: &[RelativeWindowConstraint]) -> Result<ScanOutput> {
    Ok(Scanner::new(grid.clone(), fc.clone(), windows)?.scan())
}

pub fn refine_boundary(grid: &ParamGrid, fc: &FidelityConstraint, classifier: &str) -> Result<Vec<ScanRecord>> {
    let scanner = Scanner::new(grid.clone(), fc.clone(), &[])?;
    let output = scanner.scan();
    scanner.refine_boundary(&output, classifier)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Extrema {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ClassCounts {
    #[serde(rename = "true")]
    pub yes: usize,
    #[serde(rename = "false")]
    pub no: usize,
}

/// Aggregate statistics of one scan. Resource and parameter extrema are
/// taken over the selected points: physical, in the balloon and, when
/// `restricted_to_window` is set, also in the window. Extrema are omitted
/// when no finite value was selected.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionSummary {
    pub total_points: usize,
    pub physical_points: usize,
    pub balloon_points: usize,
    /// Balloon points that also satisfy every window.
    pub window_points: usize,
    pub restricted_to_window: bool,
    pub selected_points: usize,
    pub resources: BTreeMap<String, Extrema>,
    pub params: BTreeMap<String, Extrema>,
    pub class_counts: BTreeMap<String, ClassCounts>,
    pub crosses_boundary: BTreeMap<String, bool>,
}

#[derive(Debug, Clone, Copy)]
struct Stat {
    count: usize,
    min: f64,
    max: f64,
    sum: f64,
}

impl Stat {
    const EMPTY: Stat = Stat {
        count: 0,
        min: f64::INFINITY,
        max: f64::NEG_INFINITY,
        sum: 0.0,
    };

    fn push(&mut self, v: f64) {
        if v.is_finite() {
            self.count += 1;
            self.min = self.min.min(v);
            self.max = self.max.max(v);
            self.sum += v;
        }
    }

    fn merge(&mut self, o: &Stat) {
        self.count += o.count;
        self.min = self.min.min(o.min);
        self.max = self.max.max(o.max);
        self.sum += o.sum;
    }

    fn extrema(&self) -> Option<Extrema> {
        (self.count > 0).then(|| Extrema {
            min: self.min,
            max: self.max,
            mean: self.sum / self.count as f64,
        })
    }
}

#[derive(Debug, Clone)]
struct Accumulator {
    restrict: bool,
    classifiers: Vec<(String, usize)>,
    total: usize,
    physical: usize,
    balloon: usize,
    window: usize,
    selected: usize,
    resources: Vec<Stat>,
    params: Vec<Stat>,
    counts: Vec<(usize, usize)>,
}

impl Accumulator {
    fn new(schema: &RecordSchema, classifiers: &[&str], restrict: bool) -> Result<Self> {
        let classifiers = classifiers
            .iter()
            .map(|c| Ok((c.to_string(), schema.classifier_index(c)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            restrict,
            total: 0,
            physical: 0,
            balloon: 0,
            window: 0,
            selected: 0,
            resources: vec![Stat::EMPTY; schema.resources.len()],
            params: vec![Stat::EMPTY; schema.axes.len()],
            counts: vec![(0, 0); classifiers.len()],
            classifiers,
        })
    }

    fn push(&mut self, r: &ScanRecord) {
        self.total += 1;
        if !r.physical() {
            return;
        }
        self.physical += 1;
        if !r.in_balloon() {
            return;
        }
        self.balloon += 1;
        if r.in_window() {
            self.window += 1;
        }
        if self.restrict && !r.in_window() {
            return;
        }
        self.selected += 1;
        for (s, &v) in self.resources.iter_mut().zip(&r.resources) {
            s.push(v);
        }
        for (s, &v) in self.params.iter_mut().zip(&r.params) {
            s.push(v);
        }
        for ((_, idx), c) in self.classifiers.iter().zip(self.counts.iter_mut()) {
            if r.flags[*idx] {
                c.0 += 1;
            } else {
                c.1 += 1;
            }
        }
    }

    fn merge(&mut self, o: &Accumulator) {
        self.total += o.total;
        self.physical += o.physical;
        self.balloon += o.balloon;
        self.window += o.window;
        self.selected += o.selected;
        for (a, b) in self.resources.iter_mut().zip(&o.resources) {
            a.merge(b);
        }
        for (a, b) in self.params.iter_mut().zip(&o.params) {
            a.merge(b);
        }
        for (a, b) in self.counts.iter_mut().zip(&o.counts) {
            a.0 += b.0;
            a.1 += b.1;
        }
    }

    fn finish(&self, schema: &RecordSchema) -> RegionSummary {
        let named = |names: Vec<String>, stats: &[Stat]| -> BTreeMap<String, Extrema> {
            names
                .into_iter()
                .zip(stats)
                .filter_map(|(n, s)| s.extrema().map(|e| (n, e)))
                .collect()
        };
        RegionSummary {
            total_points: self.total,
            physical_points: self.physical,
            balloon_points: self.balloon,
            window_points: self.window,
            restricted_to_window: self.restrict,
            selected_points: self.selected,
            resources: named(
                schema.resources.iter().map(|s| s.to_string()).collect(),
                &self.resources,
            ),
            params: named(schema.axes.clone(), &self.params),
            class_counts: self
                .classifiers
                .iter()
                .zip(&self.counts)
                .map(|((n, _), &(yes, no))| (n.clone(), ClassCounts { yes, no }))
                .collect(),
            crosses_boundary: self
                .classifiers
                .iter()
                .zip(&self.counts)
                .map(|((n, _), &(yes, no))| (n.clone(), yes > 0 && no > 0))
                .collect(),
        }
    }
}

/// Aggregates a record list from one scan.
pub fn summarize(
    schema: &RecordSchema,
    records: &[ScanRecord],
    classifiers: &[&str],
    restrict_to_window: bool,
) -> Result<RegionSummary> {
    let mut acc = Accumulator::new(schema, classifiers, restrict_to_window)?;
    for r in records {
        acc.push(r);
    }
    Ok(acc.finish(schema))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pd_grid(steps: usize) -> ParamGrid {
        ParamGrid::new(
            Family::PauliDiagonal,
            vec![
                Axis::new("c1", -1.0, 1.0, steps),
                Axis::new("c2", -1.0, 1.0, steps),
                Axis::new("c3", -1.0, 1.0, steps),
            ],
        )
        .unwrap()
    }

    #[test]
    fn grid_indexing_is_row_major() {
        let g = ParamGrid::new(
            Family::Sts1,
            vec![Axis::new("s", 0.5, 1.5, 3), Axis::new("mu", 0.2, 1.0, 5)],
        )
        .unwrap();
        assert_eq!(g.len(), 15);
        assert_eq!(g.coords(7), vec![1, 2]);
        assert_eq!(g.index_of(&[1, 2]), 7);
        assert_eq!(g.point(7), vec![1.0, 0.6000000000000001]);
    }

    #[test]
    fn axis_validation() {
        let bad_name = ParamGrid::new(
            Family::Sts2,
            vec![
                Axis::new("n", 0.0, 1.0, 3),
                Axis::new("delta", 0.0, 1.0, 3),
                Axis::new("gamma", 0.0, 1.0, 3),
            ],
        );
        assert!(matches!(bad_name, Err(Error::Config(m)) if m.contains("delta")));
        let missing = ParamGrid::new(Family::Sts1, vec![Axis::new("s", 0.5, 1.5, 3)]);
        assert!(missing.is_err());
        let inverted = ParamGrid::new(
            Family::Sts1,
            vec![Axis::new("s", 1.5, 0.5, 3), Axis::new("mu", 0.2, 1.0, 3)],
        );
        assert!(inverted.is_err());
        let pinned_wrong = ParamGrid::new(
            Family::Sts1,
            vec![Axis::new("s", 0.5, 1.5, 1), Axis::new("mu", 0.2, 1.0, 3)],
        );
        assert!(pinned_wrong.is_err());
    }

    #[test]
    fn band_validation() {
        let grid = pd_grid(3);
        let err = Scanner::new(grid.clone(), FidelityConstraint::band(vec![0.0; 3], 0.9, 0.8), &[]);
        assert!(err.is_err());
        let unphysical = Scanner::new(grid, FidelityConstraint::threshold(vec![1.0; 3], 0.9), &[]);
        assert!(matches!(unphysical, Err(Error::Unphysical(_))));
    }

    #[test]
    fn window_validation() {
        let grid = pd_grid(3);
        let fc = FidelityConstraint::threshold(vec![0.0; 3], 0.9);
        let w = [RelativeWindowConstraint::new(Observable::MeanPhotons, 0.1)];
        assert!(Scanner::new(grid, fc, &w).is_err());
    }

    #[test]
    fn degenerate_grid_holds_only_the_target() {
        let target = vec![-0.45, -0.45, -0.45];
        let grid = ParamGrid::new(
            Family::PauliDiagonal,
            vec![
                Axis::fixed("c1", -0.45),
                Axis::fixed("c2", -0.45),
                Axis::fixed("c3", -0.45),
            ],
        )
        .unwrap();
        for (f_max, expected) in [(1.0, true), (0.999, false)] {
            let out = scan(&grid, &FidelityConstraint::band(target.clone(), 0.9, f_max), &[]).unwrap();
            assert_eq!(out.records.len(), 1);
            assert!((out.records[0].fidelity - 1.0).abs() < 1e-15);
            assert_eq!(out.records[0].in_balloon(), expected);
        }
    }

    #[test]
    fn unphysical_points_are_flagged_not_dropped() {
        let out = scan(&pd_grid(5), &FidelityConstraint::threshold(vec![0.0; 3], 0.0), &[]).unwrap();
        assert_eq!(out.records.len(), 125);
        let unphysical: Vec<_> = out.records.iter().filter(|r| !r.physical()).collect();
        assert!(!unphysical.is_empty());
        assert!(unphysical.iter().all(|r| !r.in_balloon() && r.fidelity.is_nan()));
    }

    #[test]
    fn summary_of_empty_records() {
        let grid = pd_grid(3);
        let schema = RecordSchema::new(&grid);
        let s = summarize(&schema, &[], &["separable"], false).unwrap();
        assert_eq!(s.total_points, 0);
        assert!(s.resources.is_empty());
        assert!(!s.crosses_boundary["separable"]);
        assert!(summarize(&schema, &[], &["subpoissonian"], false).is_err());
    }

    #[test]
    fn single_class_balloon_does_not_cross() {
        // a tight balloon around the maximally mixed state is all separable
        let out = scan(&pd_grid(21), &FidelityConstraint::threshold(vec![0.0; 3], 0.99), &[]).unwrap();
        let s = summarize(&out.schema, &out.records, &["separable"], false).unwrap();
        assert!(s.balloon_points > 0);
        assert!(!s.crosses_boundary["separable"]);
        assert!(s.balloon_points <= s.physical_points && s.physical_points <= s.total_points);
    }

    #[test]
    fn streaming_summary_matches_materialized() {
        let scanner = Scanner::new(
            pd_grid(21),
            FidelityConstraint::threshold(vec![-0.45, -0.45, -0.45], 0.95),
            &[],
        )
        .unwrap();
        let out = scanner.scan();
        let a = summarize(&out.schema, &out.records, &["separable"], false).unwrap();
        let b = scanner.summarize_streaming(&["separable"], false).unwrap();
        assert_eq!(a.balloon_points, b.balloon_points);
        assert_eq!(a.class_counts, b.class_counts);
        assert_eq!(a.resources["negativity"].max, b.resources["negativity"].max);
    }

    #[test]
    fn refinement_on_single_class_grid_is_empty() {
        let grid = pd_grid(11);
        let pairs = refine_boundary(&grid, &FidelityConstraint::threshold(vec![0.0; 3], 0.99), "separable").unwrap();
        assert!(pairs.is_empty());
    }

    #[test]
    fn refinement_straddles_the_werner_border() {
        let fc = FidelityConstraint::threshold(vec![-0.45, -0.45, -0.45], 0.99);
        let pairs = refine_boundary(&pd_grid(41), &fc, "separable").unwrap();
        assert!(!pairs.is_empty());
        for pair in pairs.chunks(2) {
            let (inside, outside) = (&pair[0], &pair[1]);
            let gap = inside
                .params
                .iter()
                .zip(&outside.params)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            assert!(gap <= REFINE_RESOLUTION);
            assert!(inside.fidelity >= 0.99 && outside.fidelity >= 0.99);
            let c = |p: &[f64]| PauliDiagonalCoeffs::new(p[0], p[1], p[2]);
            assert!(crate::qubit::negativity(c(&inside.params)).unwrap() < 1e-12);
            assert!(crate::qubit::negativity(c(&outside.params)).unwrap() > 1e-12);
        }
    }
}
