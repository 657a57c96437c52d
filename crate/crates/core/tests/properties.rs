use fidelity_gap::gaussian_single::*;
use fidelity_gap::gaussian_two::*;
use fidelity_gap::qubit::*;
use fidelity_gap::report::format_g;
use fidelity_gap::scan::*;
use proptest::prelude::*;

fn pd_coeffs() -> impl Strategy<Value = PauliDiagonalCoeffs> {
    (-1.0..=1.0f64, -1.0..=1.0f64, -1.0..=1.0f64)
        .prop_map(|(a, b, c)| PauliDiagonalCoeffs::new(a, b, c))
        .prop_filter("physical", |c| is_physical_pd(*c))
}

fn sts1() -> impl Strategy<Value = STS1Params> {
    (0.3..3.0f64, 0.05..=1.0f64).prop_map(|(s, mu)| STS1Params { s, mu })
}

fn sts2() -> impl Strategy<Value = STS2Params> {
    (0.0..5.0f64, 0.0..=1.0f64, 0.0..=1.0f64).prop_map(|(n_tot, beta, gamma)| STS2Params { n_tot, beta, gamma })
}

proptest! {
    #[test]
    fn pd_fidelity_is_a_symmetric_overlap(a in pd_coeffs(), b in pd_coeffs()) {
        let f = pd_fidelity(a, b).unwrap();
        prop_assert!((0.0..=1.0 + 1e-12).contains(&f));
        prop_assert!((f - pd_fidelity(b, a).unwrap()).abs() < 1e-14);
        prop_assert!((pd_fidelity(a, a).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bures_distance_obeys_triangle_inequality(a in pd_coeffs(), b in pd_coeffs(), c in pd_coeffs()) {
        let m = |x| pd_to_density_matrix(x).unwrap();
        let (ma, mb, mc) = (m(a), m(b), m(c));
        let d = |x, y| bures_distance(x, y).unwrap();
        prop_assert!(d(&ma, &mc) <= d(&ma, &mb) + d(&mb, &mc) + 1e-9);
    }

    #[test]
    fn negativity_vanishes_exactly_on_separable_states(c in pd_coeffs()) {
        let n = negativity(c).unwrap();
        prop_assert!(n >= 0.0);
        prop_assert_eq!(is_separable_pd(c).unwrap(), n <= 2e-12);
        prop_assert!(pd_discord(c).unwrap() >= 0.0);
    }

    #[test]
    fn single_mode_fidelity_is_symmetric_and_bounded(
        a in sts1(), b in sts1(), x in 0.0..2.0f64, y in 0.0..2.0f64
    ) {
        let (g, h) = (displaced_sts1(a, x).unwrap(), displaced_sts1(b, y).unwrap());
        let f = fidelity_gaussian1(&g, &h).unwrap();
        prop_assert!(f > 0.0 && f <= 1.0 + 1e-12);
        prop_assert!((f - fidelity_gaussian1(&h, &g).unwrap()).abs() < 1e-12);
        prop_assert!((fidelity_gaussian1(&g, &g).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn nonclassicality_is_invariant_under_inverting_squeezing(p in sts1()) {
        let inv = STS1Params { s: 1.0 / p.s, mu: p.mu };
        prop_assert_eq!(is_nonclassical_sts1(p), is_nonclassical_sts1(inv));
    }

    #[test]
    fn photon_variance_is_nonnegative(p in sts1(), x in 0.0..3.0f64) {
        let st = photon_stats(&displaced_sts1(p, x).unwrap()).unwrap();
        prop_assert!(st.mean_n >= -1e-15 && st.var_n >= -1e-15);
    }

    #[test]
    fn two_mode_fidelity_is_symmetric_and_bounded(p in sts2(), q in sts2()) {
        let f = fidelity_sts2(p, q).unwrap();
        prop_assert!((0.0..=1.0 + 1e-9).contains(&f));
        prop_assert!((f - fidelity_sts2(q, p).unwrap()).abs() < 1e-10);
        prop_assert!((fidelity_sts2(p, p).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn two_mode_states_are_physical_and_classified_consistently(p in sts2()) {
        let s = symplectic_spectrum(sts2_coeffs(p).unwrap()).unwrap();
        prop_assert!(s.d_minus >= 0.5 - 1e-10);
        prop_assert_eq!(is_separable(p).unwrap(), s.dt_minus >= 0.5 - SEPARABILITY_TOL);
        prop_assert!(gaussian_b_discord(p).unwrap() >= -1e-12);
    }

    #[test]
    fn format_g_keeps_twelve_significant_digits(x in prop::num::f64::NORMAL) {
        let back: f64 = format_g(x).parse().unwrap();
        prop_assert!(((back - x) / x).abs() <= 5e-12, "{} -> {}", x, format_g(x));
    }
}

fn pd_box(steps: usize) -> ParamGrid {
    ParamGrid::new(
        Family::PauliDiagonal,
        ["c1", "c2", "c3"]
            .iter()
            .map(|n| Axis::new(n, -1.0, 1.0, steps))
            .collect(),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Refining every axis from n to 2n − 1 points keeps the coarse grid as
    /// a subset, so a crossing once found cannot disappear.
    #[test]
    fn refinement_never_loses_a_crossing(t in pd_coeffs(), f_min in 0.85..0.99f64) {
        let fc = FidelityConstraint::threshold(t.as_array().to_vec(), f_min);
        let crosses = |steps| {
            let out = scan(&pd_box(steps), &fc, &[]).unwrap();
            summarize(&out.schema, &out.records, &["separable"], false).unwrap().crosses_boundary["separable"]
        };
        if crosses(9) {
            prop_assert!(crosses(17));
        }
    }

    #[test]
    fn balloon_and_window_flags_recompute(s in 0.5..1.8f64, mu in 0.4..1.0f64, x in 0.2..1.8f64) {
        let grid = ParamGrid::new(
            Family::DisplacedSts1,
            vec![Axis::new("s", 0.3, 2.5, 15), Axis::new("mu", 0.3, 1.0, 15), Axis::new("x", 0.0, 2.5, 15)],
        ).unwrap();
        let windows = [
            RelativeWindowConstraint::new(Observable::MeanPhotons, 0.1),
            RelativeWindowConstraint::new(Observable::PhotonVariance, 0.1),
        ];
        let target = displaced_sts1(STS1Params { s, mu }, x).unwrap();
        let tstats = photon_stats(&target).unwrap();
        let out = scan(&grid, &FidelityConstraint::threshold(vec![s, mu, x], 0.9), &windows).unwrap();
        let step = (out.records.len() / 100).max(1);
        for r in out.records.iter().step_by(step) {
            let g = displaced_sts1(STS1Params { s: r.params[0], mu: r.params[1] }, r.params[2]).unwrap();
            let f = fidelity_gaussian1(&g, &target).unwrap();
            prop_assert!((f - r.fidelity).abs() < 1e-14);
            prop_assert_eq!(r.in_balloon(), f >= 0.9);
            let st = photon_stats(&g).unwrap();
            let inside = (st.mean_n - tstats.mean_n).abs() <= 0.1 * tstats.mean_n
                && (st.var_n - tstats.var_n).abs() <= 0.1 * tstats.var_n;
            prop_assert_eq!(r.in_window(), inside);
            prop_assert_eq!(out.flag(r, "subpoissonian").unwrap(), st.fano.is_some_and(|v| v < 1.0));
        }
    }

    #[test]
    fn sts2_separable_flag_follows_dt_minus(n in 0.2..4.0f64, beta in 0.0..1.0f64, gamma in 0.0..1.0f64) {
        let grid = ParamGrid::new(
            Family::Sts2,
            vec![Axis::new("n", 0.0, 4.0, 9), Axis::new("beta", 0.0, 1.0, 9), Axis::new("gamma", 0.0, 1.0, 9)],
        ).unwrap();
        let out = scan(&grid, &FidelityConstraint::threshold(vec![n, beta, gamma], 0.9), &[]).unwrap();
        for r in &out.records {
            let dt = out.resource(r, "dt_minus").unwrap();
            prop_assert_eq!(out.flag(r, "separable").unwrap(), dt >= 0.5 - SEPARABILITY_TOL);
        }
    }
}

#[test]
fn scans_are_identical_across_thread_counts() {
    let grid = pd_box(21);
    let fc = FidelityConstraint::threshold(vec![-0.45, -0.45, -0.45], 0.95);
    let run = |k| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .unwrap()
            .install(|| scan(&grid, &fc, &[]).unwrap().records)
    };
    let one = run(1);
    for k in [2, 3, 8] {
        let many = run(k);
        assert_eq!(one.len(), many.len());
        for (a, b) in one.iter().zip(&many) {
            assert_eq!(a.grid_index, b.grid_index);
            assert_eq!(a.fidelity.to_bits(), b.fidelity.to_bits());
            assert_eq!(a.flags, b.flags);
            let bits = |r: &ScanRecord| r.resources.iter().map(|v| v.to_bits()).collect::<Vec<_>>();
            assert_eq!(bits(a), bits(b));
        }
    }
}

#[test]
fn classical_sts1_balloon_refines_across_the_classicality_border() {
    let grid = ParamGrid::new(
        Family::Sts1,
        vec![Axis::new("s", 0.3, 2.0, 41), Axis::new("mu", 0.3, 1.0, 41)],
    )
    .unwrap();
    let fc = FidelityConstraint::threshold(vec![1.0, 0.9], 0.99);
    let pairs = refine_boundary(&grid, &fc, "nonclassical").unwrap();
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
        let nc = |r: &ScanRecord| {
            is_nonclassical_sts1(STS1Params {
                s: r.params[0],
                mu: r.params[1],
            })
        };
        assert!(nc(inside) && !nc(outside));
        // the border is s = μ below the vacuum and s = 1/μ above it
        let (s, mu) = (inside.params[0], inside.params[1]);
        assert!((s - mu).abs() < 2e-4 || (s - 1.0 / mu).abs() < 2e-4);
    }
}
