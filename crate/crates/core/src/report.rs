//! Scan configuration, expectation checks and the on-disk output format.
//!
//! A run is described by one JSON [`ScanConfig`]: a family, a list of named
//! scans over that family, and a list of [`Expectation`]s evaluated on the
//! scan summaries. Running it produces `records.csv` (every evaluated point
//! of every scan, plus boundary refinements) and `summary.json`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::scan::{
    Axis, Extrema, Family, FidelityConstraint, ParamGrid, RegionSummary, RelativeWindowConstraint, ScanRecord, Scanner,
};

pub const RECORDS_FILE: &str = "records.csv";
pub const SUMMARY_FILE: &str = "summary.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    /// Free-form run name copied into the summary.
    pub name: String,
    pub family: Family,
    /// Output directory, used when the command line gives none.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    pub scans: Vec<ScanSpec>,
    #[serde(default)]
    pub expectations: Vec<Expectation>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Band {
    pub f_min: f64,
    #[serde(default = "one")]
    pub f_max: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanSpec {
    pub label: String,
    /// Target parameters keyed by name.
    pub target: BTreeMap<String, f64>,
    pub axes: Vec<Axis>,
    pub band: Band,
    #[serde(default)]
    pub windows: Vec<RelativeWindowConstraint>,
    /// Classifiers counted in the summary.
    #[serde(default)]
    pub classifiers: Vec<String>,
    /// Classifiers whose boundary is refined by bisection.
    #[serde(default)]
    pub refine: Vec<String>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantifier {
    #[default]
    All,
    Any,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    Resource,
    /// Resource divided by the target's value of it.
    Relative,
    Param,
}

/// A scientific claim checked against the summaries. A failed expectation
/// makes the run exit with status 2.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Expectation {
    /// The selected region contains both classes of `classifier`.
    CrossesBoundary {
        scans: Vec<String>,
        #[serde(default)]
        quantifier: Quantifier,
        classifier: String,
        #[serde(default)]
        within_window: bool,
    },
    NonEmpty {
        scans: Vec<String>,
        #[serde(default)]
        quantifier: Quantifier,
        #[serde(default)]
        within_window: bool,
    },
    /// Inclusive bounds on the extrema of one quantity over the selected
    /// region. Absent extrema fail every bound.
    Bounds {
        scans: Vec<String>,
        #[serde(default)]
        quantifier: Quantifier,
        quantity: Quantity,
        name: String,
        #[serde(default)]
        within_window: bool,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        min_ge: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        min_le: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        max_ge: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        max_le: Option<f64>,
        /// Lower bound on `max − min`.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        span_ge: Option<f64>,
    },
}

impl Expectation {
    fn scans(&self) -> &[String] {
        match self {
            Expectation::CrossesBoundary { scans, .. }
            | Expectation::NonEmpty { scans, .. }
            | Expectation::Bounds { scans, .. } => scans,
        }
    }

    fn quantifier(&self) -> Quantifier {
        match self {
            Expectation::CrossesBoundary { quantifier, .. }
            | Expectation::NonEmpty { quantifier, .. }
            | Expectation::Bounds { quantifier, .. } => *quantifier,
        }
    }
}

impl ScanConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ScanConfig = serde_json::from_str(text).map_err(|e| Error::Config(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("config serializes");
        s.push('\n');
        s
    }

    /// Checks everything that can be checked without evaluating states.
    pub fn validate(&self) -> Result<()> {
        if self.scans.is_empty() {
            return Err(Error::Config("scans: at least one scan is required".into()));
        }
        for (i, spec) in self.scans.iter().enumerate() {
            let at = |m: String| Error::Config(format!("scans[{i}].{m}"));
            if spec.label.is_empty() || spec.label.contains(['"', ',', '\n', '\r']) {
                return Err(at("label: must be non-empty without quotes, commas or newlines".into()));
            }
            if self.scans[..i].iter().any(|s| s.label == spec.label) {
                return Err(at(format!("label: duplicate label '{}'", spec.label)));
            }
            ParamGrid::new(self.family, spec.axes.clone()).map_err(|e| at(strip(e)))?;
            spec.target_vector(self.family).map_err(|e| at(strip(e)))?;
            FidelityConstraint::band(vec![], spec.band.f_min, spec.band.f_max)
                .validate()
                .map_err(|e| at(strip(e)))?;
            for (k, w) in spec.windows.iter().enumerate() {
                if !self.family.supports(w.observable) {
                    return Err(at(format!(
                        "windows[{k}].observable: {:?} is not defined for family {}",
                        w.observable, self.family
                    )));
                }
                if !(w.rel_tol > 0.0 && w.rel_tol < 1.0) {
                    return Err(at(format!("windows[{k}].rel_tol: must lie in (0, 1)")));
                }
            }
            for (field, list) in [("classifiers", &spec.classifiers), ("refine", &spec.refine)] {
                for (k, c) in list.iter().enumerate() {
                    if !self.family.classifier_names().contains(&c.as_str()) {
                        return Err(at(format!(
                            "{field}[{k}]: unknown classifier '{c}' for family {}",
                            self.family
                        )));
                    }
                }
            }
        }
        for (i, e) in self.expectations.iter().enumerate() {
            let at = |m: String| Error::Config(format!("expectations[{i}].{m}"));
            if e.scans().is_empty() {
                return Err(at("scans: must name at least one scan".into()));
            }
            for label in e.scans() {
                let Some(spec) = self.scans.iter().find(|s| &s.label == label) else {
                    return Err(at(format!("scans: no scan labelled '{label}'")));
                };
                match e {
                    Expectation::CrossesBoundary { classifier, .. } => {
                        if !spec.classifiers.contains(classifier) {
                            return Err(at(format!(
                                "classifier: '{classifier}' is not summarized by scan '{label}'"
                            )));
                        }
                    }
                    Expectation::Bounds { quantity, name, .. } => {
                        let known = match quantity {
                            Quantity::Param => spec.axes.iter().any(|a| &a.name == name),
                            _ => self.family.resource_names().contains(&name.as_str()),
                        };
                        if !known {
                            return Err(at(format!("name: unknown {quantity:?} '{name}'")));
                        }
                    }
                    Expectation::NonEmpty { .. } => {}
                }
            }
        }
        Ok(())
    }
}

fn strip(e: Error) -> String {
    match e {
        Error::Config(m) => m,
        other => other.to_string(),
    }
}

impl ScanSpec {
    fn target_vector(&self, family: Family) -> Result<Vec<f64>> {
        let names = family.param_names();
        for key in self.target.keys() {
            if !names.contains(&key.as_str()) {
                return Err(Error::Config(format!(
                    "target: unknown parameter '{key}' for family {family} (expected {})",
                    names.join(", ")
                )));
            }
        }
        names
            .iter()
            .map(|n| {
                self.target
                    .get(*n)
                    .copied()
                    .ok_or_else(|| Error::Config(format!("target: missing parameter '{n}'")))
            })
            .collect()
    }
}

/// Results of one scan of a run.
#[derive(Debug, Clone)]
pub struct ScanResult {
    pub label: String,
    pub scanner_axes: Vec<String>,
    pub resource_names: Vec<&'static str>,
    pub flag_names: Vec<&'static str>,
    pub target: ScanRecord,
    pub records: Vec<ScanRecord>,
    pub refined: Vec<ScanRecord>,
    pub summary: RegionSummary,
    pub window_summary: Option<RegionSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpectationOutcome {
    pub description: String,
    pub passed: bool,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub config: ScanConfig,
    pub scans: Vec<ScanResult>,
    pub outcomes: Vec<ExpectationOutcome>,
}

impl RunOutput {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }

    pub fn scan(&self, label: &str) -> Option<&ScanResult> {
        self.scans.iter().find(|s| s.label == label)
    }
}

/// Evaluates every scan of `config` and checks its expectations.
pub fn run_config(config: &ScanConfig) -> Result<RunOutput> {
    config.validate()?;
    let mut scans = Vec::with_capacity(config.scans.len());
    for (i, spec) in config.scans.iter().enumerate() {
        let grid = ParamGrid::new(config.family, spec.axes.clone())?;
        let fc = FidelityConstraint::band(spec.target_vector(config.family)?, spec.band.f_min, spec.band.f_max);
        let scanner = Scanner::new(grid, fc, &spec.windows).map_err(|e| match e {
            Error::Unphysical(m) => Error::Unphysical(format!("scans[{i}].target: {m}")),
            other => other,
        })?;
        let output = scanner.scan();
        let classifiers: Vec<&str> = spec.classifiers.iter().map(String::as_str).collect();
        let summary = crate::scan::summarize(&output.schema, &output.records, &classifiers, false)?;
        let window_summary = if spec.windows.is_empty() {
            None
        } else {
            Some(crate::scan::summarize(
                &output.schema,
                &output.records,
                &classifiers,
                true,
            )?)
        };
        let mut refined = Vec::new();
        for c in &spec.refine {
            refined.extend(scanner.refine_boundary(&output, c)?);
        }
        scans.push(ScanResult {
            label: spec.label.clone(),
            scanner_axes: output.schema.axes.clone(),
            resource_names: output.schema.resources.clone(),
            flag_names: output.schema.flags.clone(),
            target: output.target,
            records: output.records,
            refined,
            summary,
            window_summary,
        });
    }
    let outcomes = config
        .expectations
        .iter()
        .map(|e| check_expectation(e, &scans))
        .collect();
    Ok(RunOutput {
        config: config.clone(),
        scans,
        outcomes,
    })
}

fn selected(scan: &ScanResult, within_window: bool) -> &RegionSummary {
    if within_window {
        scan.window_summary.as_ref().unwrap_or(&scan.summary)
    } else {
        &scan.summary
    }
}

fn quantity_extrema(scan: &ScanResult, quantity: Quantity, name: &str, within_window: bool) -> Option<Extrema> {
    let summary = selected(scan, within_window);
    match quantity {
        Quantity::Param => summary.params.get(name).copied(),
        Quantity::Resource => summary.resources.get(name).copied(),
        Quantity::Relative => {
            let e = summary.resources.get(name)?;
            relative(e, target_resource(scan, name)?)
        }
    }
}

fn target_resource(scan: &ScanResult, name: &str) -> Option<f64> {
    let k = scan.resource_names.iter().position(|r| *r == name)?;
    let v = scan.target.resources[k];
    (v.is_finite() && v > 0.0).then_some(v)
}

fn relative(e: &Extrema, t: f64) -> Option<Extrema> {
    Some(Extrema {
        min: e.min / t,
        max: e.max / t,
        mean: e.mean / t,
    })
}

fn check_expectation(e: &Expectation, scans: &[ScanResult]) -> ExpectationOutcome {
    let per_scan = |label: &String| -> (bool, String) {
        let scan = scans.iter().find(|s| &s.label == label).expect("validated label");
        match e {
            Expectation::CrossesBoundary {
                classifier,
                within_window,
                ..
            } => {
                let s = selected(scan, *within_window);
                let counts = s.class_counts[classifier];
                (
                    s.crosses_boundary[classifier],
                    format!("{label}: {}/{} {classifier} true/false", counts.yes, counts.no),
                )
            }
            Expectation::NonEmpty { within_window, .. } => {
                let n = selected(scan, *within_window).selected_points;
                (n > 0, format!("{label}: {n} points"))
            }
            Expectation::Bounds {
                quantity,
                name,
                within_window,
                min_ge,
                min_le,
                max_ge,
                max_le,
                span_ge,
                ..
            } => match quantity_extrema(scan, *quantity, name, *within_window) {
                None => (false, format!("{label}: no {name} values")),
                Some(x) => {
                    let ok = min_ge.is_none_or(|b| x.min >= b)
                        && min_le.is_none_or(|b| x.min <= b)
                        && max_ge.is_none_or(|b| x.max >= b)
                        && max_le.is_none_or(|b| x.max <= b)
                        && span_ge.is_none_or(|b| x.max - x.min >= b);
                    (
                        ok,
                        format!("{label}: {name} in [{}, {}]", format_g(x.min), format_g(x.max)),
                    )
                }
            },
        }
    };
    let results: Vec<(bool, String)> = e.scans().iter().map(per_scan).collect();
    let passed = match e.quantifier() {
        Quantifier::All => results.iter().all(|r| r.0),
        Quantifier::Any => results.iter().any(|r| r.0),
    };
    let what = match e {
        Expectation::CrossesBoundary {
            classifier,
            within_window,
            ..
        } => format!("crosses {classifier} boundary{}", window_suffix(*within_window)),
        Expectation::NonEmpty { within_window, .. } => {
            format!("non-empty{}", window_suffix(*within_window))
        }
        Expectation::Bounds {
            quantity,
            name,
            within_window,
            ..
        } => format!(
            "{} {name} bounds{}",
            match quantity {
                Quantity::Resource => "resource",
                Quantity::Relative => "relative",
                Quantity::Param => "param",
            },
            window_suffix(*within_window)
        ),
    };
    let quant = match e.quantifier() {
        Quantifier::All => "all of",
        Quantifier::Any => "any of",
    };
    let details: Vec<String> = results.into_iter().map(|r| r.1).collect();
    ExpectationOutcome {
        description: format!("{what} ({quant} {})", details.join("; ")),
        passed,
    }
}

fn window_suffix(w: bool) -> &'static str {
    if w {
        " within window"
    } else {
        ""
    }
}

/// `%.12g`: twelve significant digits, trailing zeros removed, exponent
/// form outside `1e-4 ≤ |x| < 1e12`.
pub fn format_g(x: f64) -> String {
    const P: i32 = 12;
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{:.*e}", (P - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..P).contains(&exp) {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        trim_zeros(&format!("{:.*}", (P - 1 - exp) as usize, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Header and rows of `records.csv`. All scans of one run share a family
/// and therefore a column layout.
pub fn records_csv(run: &RunOutput) -> String {
    let mut out = String::new();
    let first = &run.scans[0];
    let mut header = vec!["scan".to_string(), "grid_index".to_string()];
    header.extend(run.config.family.param_names().iter().map(|s| s.to_string()));
    header.push("fidelity".into());
    header.extend(first.resource_names.iter().map(|s| s.to_string()));
    header.extend(first.flag_names.iter().map(|s| s.to_string()));
    out.push_str(&header.join(","));
    out.push('\n');
    for scan in &run.scans {
        // columns follow the canonical parameter order, whatever the axis order
        let order: Vec<usize> = run
            .config
            .family
            .param_names()
            .iter()
            .map(|n| scan.scanner_axes.iter().position(|a| a == n).expect("validated"))
            .collect();
        let refine_label = format!("{}/refine", scan.label);
        let rows = scan
            .records
            .iter()
            .map(|r| (scan.label.as_str(), r))
            .chain(scan.refined.iter().map(|r| (refine_label.as_str(), r)));
        for (label, r) in rows {
            let _ = write!(out, "{label},{}", r.grid_index);
            for &k in &order {
                let _ = write!(out, ",{}", format_g(r.params[k]));
            }
            let _ = write!(out, ",{}", format_g(r.fidelity));
            for v in &r.resources {
                let _ = write!(out, ",{}", format_g(*v));
            }
            for f in &r.flags {
                out.push_str(if *f { ",true" } else { ",false" });
            }
            out.push('\n');
        }
    }
    out
}

fn finite(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

fn summary_value(scan: &ScanResult, s: &RegionSummary) -> Value {
    let mut v = serde_json::to_value(s).expect("summary serializes");
    let relative: BTreeMap<String, Extrema> = s
        .resources
        .iter()
        .filter_map(|(name, e)| {
            let t = target_resource(scan, name)?;
            Some((name.clone(), relative(e, t)?))
        })
        .collect();
    v["relative_resources"] = serde_json::to_value(relative).expect("extrema serialize");
    v
}

/// The `summary.json` document. Objects are `serde_json` maps, which keep
/// their keys sorted.
pub fn summary_json(run: &RunOutput) -> String {
    let scans: serde_json::Map<String, Value> = run
        .scans
        .iter()
        .zip(&run.config.scans)
        .map(|(scan, spec)| {
            let target_resources: serde_json::Map<String, Value> = scan
                .resource_names
                .iter()
                .zip(&scan.target.resources)
                .map(|(n, v)| (n.to_string(), finite(*v)))
                .collect();
            let mut entry = json!({
                "axes": spec.axes,
                "band": spec.band,
                "windows": spec.windows,
                "target": spec.target,
                "target_resources": target_resources,
                "refined_pairs": scan.refined.len() / 2,
                "summary": summary_value(scan, &scan.summary),
            });
            if let Some(w) = &scan.window_summary {
                entry["window_summary"] = summary_value(scan, w);
            }
            (scan.label.clone(), entry)
        })
        .collect();
    let doc = json!({
        "name": run.config.name,
        "family": run.config.family,
        "tool": {"name": env!("CARGO_PKG_NAME"), "version": env!("CARGO_PKG_VERSION")},
        "scans": scans,
        "expectations": run.outcomes,
        "passed": run.passed(),
    });
    let mut text = serde_json::to_string_pretty(&doc).expect("summary serializes");
    text.push('\n');
    text
}

/// Writes `records.csv` and `summary.json` into `dir`, creating it.
pub fn write_outputs(run: &RunOutput, dir: &Path) -> Result<()> {
    let io = |what: &str, e: std::io::Error| Error::Config(format!("{what}: {e}"));
    fs::create_dir_all(dir).map_err(|e| io(&dir.display().to_string(), e))?;
    for (name, body) in [(RECORDS_FILE, records_csv(run)), (SUMMARY_FILE, summary_json(run))] {
        let path = dir.join(name);
        fs::write(&path, body).map_err(|e| io(&path.display().to_string(), e))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn format_g_matches_printf() {
        let cases = [
            (0.0, "0"),
            (1.0, "1"),
            (-2.5, "-2.5"),
            (0.1, "0.1"),
            (1.0 / 3.0, "0.333333333333"),
            (123456.789, "123456.789"),
            (1e-5, "1e-05"),
            (2.5e-7, "2.5e-07"),
            (0.0001, "0.0001"),
            (1e12, "1e+12"),
            (999999999999.0, "999999999999"),
            (0.8000000000000003, "0.8"),
            (f64::NAN, "nan"),
        ];
        for (x, s) in cases {
            assert_eq!(format_g(x), s, "{x}");
        }
    }

    fn tiny_config() -> ScanConfig {
        ScanConfig::from_json(
            r#"{
              "name": "tiny",
              "family": "sts1",
              "scans": [{
                "label": "a",
                "target": {"s": 1.0, "mu": 0.9},
                "axes": [{"name": "s", "min": 0.3, "max": 2.0, "steps": 11},
                         {"name": "mu", "min": 0.3, "max": 1.0, "steps": 11}],
                "band": {"f_min": 0.9},
                "classifiers": ["nonclassical"]
              }],
              "expectations": [{"kind": "non_empty", "scans": ["a"]}]
            }"#,
        )
        .unwrap()
    }

    #[test]
    fn config_round_trips() {
        let cfg = tiny_config();
        assert_eq!(ScanConfig::from_json(&cfg.to_json()).unwrap(), cfg);
    }

    #[test]
    fn config_diagnostics_name_the_field() {
        let mut cfg = tiny_config();
        cfg.scans[0].band.f_min = 0.99;
        cfg.scans[0].band.f_max = 0.9;
        let msg = cfg.validate().unwrap_err().to_string();
        assert!(msg.contains("scans[0].band"), "{msg}");

        let mut cfg = tiny_config();
        cfg.scans[0].axes[1].name = "delta".into();
        let msg = cfg.validate().unwrap_err().to_string();
        assert!(msg.contains("scans[0].axes[1].name") && msg.contains("delta"), "{msg}");

        let unknown = ScanConfig::from_json(r#"{"name":"x","family":"sts1","scans":[],"colour":1}"#);
        assert!(unknown.unwrap_err().to_string().contains("colour"));
    }

    #[test]
    fn run_writes_header_and_rows() {
        let run = run_config(&tiny_config()).unwrap();
        let csv = records_csv(&run);
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "scan,grid_index,s,mu,fidelity,mean_n,var_n,fano,physical,nonclassical,in_balloon,in_window"
        );
        assert_eq!(lines.count(), 121);
        assert!(run.passed());
        let summary: Value = serde_json::from_str(&summary_json(&run)).unwrap();
        assert_eq!(summary["scans"]["a"]["summary"]["total_points"], 121);
    }
}
