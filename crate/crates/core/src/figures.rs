//! Preset configurations reproducing the six published figures.

use std::collections::BTreeMap;

use crate::report::{Band, Expectation, Quantifier, Quantity, ScanConfig, ScanSpec};
use crate::scan::{Axis, Family, Observable, RelativeWindowConstraint};

pub const FIGURES: [&str; 6] = ["fig1", "fig2", "fig3", "fig4", "fig5", "fig6"];

/// Points per axis for three-parameter boxes.
pub const BOX_STEPS: usize = 41;
/// Points per axis for two-parameter slices.
pub const SLICE_STEPS: usize = 201;

pub fn preset(id: &str) -> Option<ScanConfig> {
    Some(match id {
        "fig1" => fig1(),
        "fig2" => fig2(),
        "fig3" => fig3(),
        "fig4" => fig4(),
        "fig5" => fig5(),
        "fig6" => fig6(),
        _ => return None,
    })
}

fn target(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

fn labels(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

fn spec(label: &str, t: &[(&str, f64)], axes: Vec<Axis>, f_min: f64, f_max: f64) -> ScanSpec {
    ScanSpec {
        label: label.into(),
        target: target(t),
        axes,
        band: Band { f_min, f_max },
        windows: vec![],
        classifiers: vec![],
        refine: vec![],
    }
}

fn crosses(scans: &[&str], classifier: &str, within_window: bool, quantifier: Quantifier) -> Expectation {
    Expectation::CrossesBoundary {
        scans: labels(scans),
        quantifier,
        classifier: classifier.into(),
        within_window,
    }
}

fn bounds(scan: &str, quantity: Quantity, name: &str, within_window: bool) -> Expectation {
    Expectation::Bounds {
        scans: labels(&[scan]),
        quantifier: Quantifier::All,
        quantity,
        name: name.into(),
        within_window,
        min_ge: None,
        min_le: None,
        max_ge: None,
        max_le: None,
        span_ge: None,
    }
}

fn with_bounds(
    mut e: Expectation,
    lo: (Option<f64>, Option<f64>),
    hi: (Option<f64>, Option<f64>),
    span: Option<f64>,
) -> Expectation {
    if let Expectation::Bounds {
        min_ge,
        min_le,
        max_ge,
        max_le,
        span_ge,
        ..
    } = &mut e
    {
        (*min_ge, *min_le) = lo;
        (*max_ge, *max_le) = hi;
        *span_ge = span;
    }
    e
}

/// Fidelity to |0⟩ over the Bloch ball: the F ≥ 0.9 cap and the
/// 0.925 ± 0.025 shell, whose edges sit at rz = 0.8 and rz = 0.9.
fn fig1() -> ScanConfig {
    let axes = || {
        ["rx", "ry", "rz"]
            .iter()
            .map(|n| Axis::new(n, -1.0, 1.0, BOX_STEPS))
            .collect::<Vec<_>>()
    };
    let zero = [("rx", 0.0), ("ry", 0.0), ("rz", 1.0)];
    let tol = 1e-9;
    ScanConfig {
        name: "fig1".into(),
        family: Family::BlochQubit,
        out: None,
        scans: vec![
            spec("cap-0.9", &zero, axes(), 0.9, 1.0),
            spec("shell-0.925", &zero, axes(), 0.9, 0.95),
        ],
        expectations: vec![
            with_bounds(
                bounds("cap-0.9", Quantity::Param, "rz", false),
                (Some(0.8 - tol), Some(0.8 + tol)),
                (Some(1.0 - tol), None),
                None,
            ),
            with_bounds(
                bounds("shell-0.925", Quantity::Param, "rz", false),
                (Some(0.8 - tol), Some(0.8 + tol)),
                (Some(0.9 - tol), Some(0.9 + tol)),
                None,
            ),
        ],
    }
}

/// Pauli-diagonal balloons at F > 0.95 and F > 0.99 around Werner(0.45)
/// and around the separable state (0.3, −0.3, 0.1), plus the c3 = −0.45
/// slice of the Werner F > 0.95 balloon.
fn fig2() -> ScanConfig {
    let cube = || {
        ["c1", "c2", "c3"]
            .iter()
            .map(|n| Axis::new(n, -1.0, 1.0, BOX_STEPS))
            .collect::<Vec<_>>()
    };
    let werner = [("c1", -0.45), ("c2", -0.45), ("c3", -0.45)];
    let sep = [("c1", 0.3), ("c2", -0.3), ("c3", 0.1)];
    let mut scans = Vec::new();
    for (name, t) in [("werner", &werner), ("separable", &sep)] {
        for f in [0.95, 0.99] {
            let mut s = spec(&format!("{name}-{f}"), t, cube(), f, 1.0);
            s.classifiers = vec!["separable".into()];
            s.refine = vec!["separable".into()];
            scans.push(s);
        }
    }
    let mut slice = spec(
        "werner-0.95-slice",
        &werner,
        vec![
            Axis::new("c1", -1.0, 1.0, SLICE_STEPS),
            Axis::new("c2", -1.0, 1.0, SLICE_STEPS),
            Axis::fixed("c3", -0.45),
        ],
        0.95,
        1.0,
    );
    slice.classifiers = vec!["separable".into()];
    scans.push(slice);
    ScanConfig {
        name: "fig2".into(),
        family: Family::PauliDiagonal,
        out: None,
        scans,
        expectations: vec![
            crosses(
                &["werner-0.95", "werner-0.99", "separable-0.95", "separable-0.99"],
                "separable",
                false,
                Quantifier::All,
            ),
            with_bounds(
                bounds("werner-0.95-slice", Quantity::Resource, "negativity", false),
                (None, Some(0.0)),
                (Some(0.15), None),
                None,
            ),
            with_bounds(
                bounds("werner-0.95-slice", Quantity::Resource, "discord", false),
                (None, None),
                (None, None),
                Some(1e-3),
            ),
        ],
    }
}

fn sts1_windows(var: bool) -> Vec<RelativeWindowConstraint> {
    let mut w = vec![RelativeWindowConstraint::new(Observable::MeanPhotons, 0.1)];
    if var {
        w.push(RelativeWindowConstraint::new(Observable::PhotonVariance, 0.1));
    }
    w
}

/// F > 0.99 balloons of squeezed thermal states around (s, μ) =
/// (1, 0.9), (0.6, 0.7) and (1.6, 0.7), with ±10% windows on the mean
/// photon number alone and on mean and variance together.
fn fig3() -> ScanConfig {
    let axes = || {
        vec![
            Axis::new("s", 0.3, 2.0, SLICE_STEPS),
            Axis::new("mu", 0.3, 1.0, SLICE_STEPS),
        ]
    };
    let targets = [("a", 1.0, 0.9), ("b", 0.6, 0.7), ("c", 1.6, 0.7)];
    let mut scans = Vec::new();
    for (name, s, mu) in targets {
        for (suffix, var) in [("mean", false), ("mean-var", true)] {
            let mut sp = spec(&format!("{name}-{suffix}"), &[("s", s), ("mu", mu)], axes(), 0.99, 1.0);
            sp.windows = sts1_windows(var);
            sp.classifiers = vec!["nonclassical".into()];
            sp.refine = if var { vec![] } else { vec!["nonclassical".into()] };
            scans.push(sp);
        }
    }
    ScanConfig {
        name: "fig3".into(),
        family: Family::Sts1,
        out: None,
        scans,
        expectations: vec![
            crosses(&["a-mean", "b-mean", "c-mean"], "nonclassical", false, Quantifier::All),
            crosses(&["a-mean", "b-mean", "c-mean"], "nonclassical", true, Quantifier::Any),
            crosses(
                &["a-mean-var", "b-mean-var", "c-mean-var"],
                "nonclassical",
                true,
                Quantifier::Any,
            ),
        ],
    }
}

/// F > 0.97 balloons of displaced squeezed thermal states. The box scans
/// use the targets (s, μ, x) = (1.4, 0.9, 0.5) and (1.2, 0.7, 1.5) with the
/// mean and variance windows applied one at a time; the μ = 0.8 slices use
/// (s, x) = (1.5, 1.5) and (1.0, 0.8) with both windows together.
fn fig4() -> ScanConfig {
    let cube = || {
        vec![
            Axis::new("s", 0.3, 2.5, BOX_STEPS),
            Axis::new("mu", 0.3, 1.0, BOX_STEPS),
            Axis::new("x", 0.0, 2.5, BOX_STEPS),
        ]
    };
    let slice = || {
        vec![
            Axis::new("s", 0.3, 2.5, SLICE_STEPS),
            Axis::fixed("mu", 0.8),
            Axis::new("x", 0.0, 2.5, SLICE_STEPS),
        ]
    };
    let classes = || vec!["nonclassical".to_string(), "subpoissonian".to_string()];
    let mut scans = Vec::new();
    let mut box_labels = Vec::new();
    for (name, s, mu, x) in [("sub", 1.4, 0.9, 0.5), ("super", 1.2, 0.7, 1.5)] {
        for (suffix, obs) in [("mean", Observable::MeanPhotons), ("var", Observable::PhotonVariance)] {
            let label = format!("{name}-{suffix}");
            let mut sp = spec(&label, &[("s", s), ("mu", mu), ("x", x)], cube(), 0.97, 1.0);
            sp.windows = vec![RelativeWindowConstraint::new(obs, 0.1)];
            sp.classifiers = classes();
            sp.refine = if suffix == "mean" {
                vec!["subpoissonian".into()]
            } else {
                vec![]
            };
            scans.push(sp);
            box_labels.push(label);
        }
    }
    let mut slice_labels = Vec::new();
    for (name, s, x) in [("sub", 1.5, 1.5), ("super", 1.0, 0.8)] {
        let label = format!("{name}-slice");
        let mut sp = spec(&label, &[("s", s), ("mu", 0.8), ("x", x)], slice(), 0.97, 1.0);
        sp.windows = sts1_windows(true);
        sp.classifiers = classes();
        scans.push(sp);
        slice_labels.push(label);
    }
    let b: Vec<&str> = box_labels.iter().map(String::as_str).collect();
    let sl: Vec<&str> = slice_labels.iter().map(String::as_str).collect();
    ScanConfig {
        name: "fig4".into(),
        family: Family::DisplacedSts1,
        out: None,
        scans,
        expectations: vec![
            crosses(&b, "subpoissonian", false, Quantifier::All),
            crosses(&b, "subpoissonian", true, Quantifier::All),
            crosses(&sl, "subpoissonian", false, Quantifier::All),
        ],
    }
}

fn sts2_box(n_max: f64, beta_max: f64) -> Vec<Axis> {
    vec![
        Axis::new("n", 0.0, n_max, BOX_STEPS),
        Axis::new("beta", 0.0, beta_max, BOX_STEPS),
        Axis::new("gamma", 0.0, 1.0, BOX_STEPS),
    ]
}

/// F > 0.99 balloons around (N, β, γ) = (2.5, 0.2, 0.5) and (1, 0.13, 0.5)
/// against the separability surface, and the 0.95 < F < 0.99 band around
/// the N = 1 two-mode squeezed vacuum with a ±10% window on N.
fn fig5() -> ScanConfig {
    let mut scans = Vec::new();
    for (label, n, beta) in [("entangled", 2.5, 0.2), ("separable", 1.0, 0.13)] {
        let mut sp = spec(
            label,
            &[("n", n), ("beta", beta), ("gamma", 0.5)],
            sts2_box(5.0, 0.5),
            0.99,
            1.0,
        );
        sp.classifiers = vec!["separable".into()];
        sp.refine = vec!["separable".into()];
        scans.push(sp);
    }
    let mut band = spec(
        "tmsv-band",
        &[("n", 1.0), ("beta", 1.0), ("gamma", 0.5)],
        sts2_box(3.0, 1.0),
        0.95,
        0.99,
    );
    band.windows = vec![RelativeWindowConstraint::new(Observable::TotalPhotons, 0.1)];
    band.classifiers = vec!["separable".into()];
    scans.push(band);
    ScanConfig {
        name: "fig5".into(),
        family: Family::Sts2,
        out: None,
        scans,
        expectations: vec![
            crosses(&["entangled", "separable"], "separable", false, Quantifier::All),
            Expectation::NonEmpty {
                scans: labels(&["tmsv-band"]),
                quantifier: Quantifier::All,
                within_window: true,
            },
            with_bounds(
                bounds("tmsv-band", Quantity::Param, "beta", true),
                (None, Some(0.99)),
                (None, None),
                None,
            ),
        ],
    }
}

/// Relative B-discord over the F > 0.95 balloon around (2, 0.2, 0.5),
/// expected to range over 0.38 to 1.88, and over the 0.95 < F < 0.99 band
/// around the N = 2 two-mode squeezed vacuum with a ±10% window on N.
fn fig6() -> ScanConfig {
    let mut balloon = spec(
        "balloon",
        &[("n", 2.0), ("beta", 0.2), ("gamma", 0.5)],
        sts2_box(4.0, 1.0),
        0.95,
        1.0,
    );
    balloon.classifiers = vec!["separable".into()];
    let mut band = spec(
        "tmsv-band",
        &[("n", 2.0), ("beta", 1.0), ("gamma", 0.5)],
        sts2_box(4.0, 1.0),
        0.95,
        0.99,
    );
    band.windows = vec![RelativeWindowConstraint::new(Observable::TotalPhotons, 0.1)];
    band.classifiers = vec!["separable".into()];
    let tol = 0.05;
    ScanConfig {
        name: "fig6".into(),
        family: Family::Sts2,
        out: None,
        scans: vec![balloon, band],
        expectations: vec![
            crosses(&["balloon"], "separable", false, Quantifier::All),
            with_bounds(
                bounds("balloon", Quantity::Relative, "discord", false),
                (Some(0.38 - tol), Some(0.38 + tol)),
                (Some(1.88 - tol), Some(1.88 + tol)),
                None,
            ),
            Expectation::NonEmpty {
                scans: labels(&["tmsv-band"]),
                quantifier: Quantifier::All,
                within_window: true,
            },
        ],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_validate() {
        for id in FIGURES {
            let cfg = preset(id).unwrap();
            cfg.validate().unwrap();
            assert_eq!(ScanConfig::from_json(&cfg.to_json()).unwrap(), cfg);
        }
        assert!(preset("fig7").is_none());
    }
}
