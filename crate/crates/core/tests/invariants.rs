use dea_frame::buildhull::{build_hull, build_hull_observed, HullEvent};
use dea_frame::datagen::{generate, GenSpec};
use dea_frame::dea::{membership_test, Dataset};
use dea_frame::ehd::{run_ehd, run_ehd_with, EhdOptions};
use dea_frame::oracle::{classify_all, Label};
use dea_frame::phase2::{complement, score_all};
use dea_frame::preprocess::{ascending_prescore_order, initial_subset_size, preprocess, prescore};
use dea_frame::SolveConfig;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-6;

fn spec_strategy() -> impl Strategy<Value = GenSpec> {
    (
        20usize..120,
        1usize..4,
        1usize..3,
        0.05f64..0.5,
        any::<u64>(),
    )
        .prop_map(|(n, m1, m2, d, seed)| GenSpec::new(n, m1, m2, d, seed))
}

/// Small integer grids: many ties, duplicates and weakly efficient points.
fn grid_strategy() -> impl Strategy<Value = Dataset> {
    (1usize..3, 1usize..3, 2usize..25).prop_flat_map(|(m1, m2, n)| {
        prop::collection::vec(prop::collection::vec(1u8..5, m1 + m2), n).prop_map(move |rows| {
            let rows: Vec<Vec<f64>> = rows
                .into_iter()
                .map(|r| r.into_iter().map(f64::from).collect())
                .collect();
            Dataset::from_rows("grid", m1, &rows).unwrap()
        })
    })
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.contains(x))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn buildhull_matches_oracle_with_exact_counts(spec in spec_strategy()) {
        let ds = generate(&spec).unwrap();
        let cfg = SolveConfig::default();
        let truth = classify_all(&ds, &cfg).unwrap();
        let prep = preprocess(&ds);
        for &s in &prep.extreme_seed {
            prop_assert_eq!(truth.labels[s], Label::ExtremeEfficient);
        }
        let r = build_hull(&ds, &prep.extreme_seed, &ascending_prescore_order(&prep), &cfg).unwrap();
        prop_assert_eq!(&r.frame, &truth.frame);
        prop_assert_eq!(r.lp_count, ds.n() - prep.m_hat);
        prop_assert_eq!(r.hyperplane_translations, truth.frame.len() - prep.m_hat);
    }

    #[test]
    fn certificates_and_nesting(spec in spec_strategy()) {
        let ds = generate(&spec).unwrap();
        let cfg = SolveConfig::default();
        let prep = preprocess(&ds);
        let order = ascending_prescore_order(&prep);
        let mut previous: Vec<usize> = prep.extreme_seed.clone();
        let mut failures = Vec::new();
        let r = build_hull_observed(&ds, &prep.extreme_seed, &order, &cfg, |e| match e {
            HullEvent::Member { frame, .. } => {
                if frame.len() != previous.len() {
                    failures.push("frame changed on a member test".to_string());
                }
            }
            HullEvent::Exterior { test, admitted, certificate, frame } => {
                let c = certificate;
                if c.pi.iter().any(|&p| p < -TOL) {
                    failures.push(format!("negative normal {:?}", c.pi));
                }
                for &f in &previous {
                    if c.separation(ds.point(f)) > TOL {
                        failures.push(format!("generator {f} on the wrong side"));
                    }
                }
                if (c.separation(ds.point(*test)) - c.delta).abs() > TOL * (1.0 + c.delta) {
                    failures.push(format!("separation of {test} differs from delta {}", c.delta));
                }
                if !is_subset(&previous, frame) || frame.len() != previous.len() + 1 || !frame.contains(admitted) {
                    failures.push("frames not nested".into());
                }
                previous = frame.to_vec();
            }
        })
        .unwrap();
        prop_assert!(failures.is_empty(), "{:?}", failures);

        // Sizes grow until the last admission, then stay at |F|.
        prop_assert!(r.lp_sizes.windows(2).all(|w| w[0] <= w[1]));
        let full = r.frame.len();
        let first_full = r.lp_sizes.iter().position(|&s| s == full).unwrap_or(r.lp_sizes.len());
        prop_assert!(r.lp_sizes[first_full..].iter().all(|&s| s == full));
    }

    #[test]
    fn buildhull_output_is_order_invariant(spec in spec_strategy(), shuffle_seed in any::<u64>()) {
        let ds = generate(&spec).unwrap();
        let cfg = SolveConfig::default();
        let prep = preprocess(&ds);
        let mut order = ascending_prescore_order(&prep);
        let reference = build_hull(&ds, &prep.extreme_seed, &order, &cfg).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(shuffle_seed);
        for _ in 0..10 {
            order.shuffle(&mut rng);
            let r = build_hull(&ds, &prep.extreme_seed, &order, &cfg).unwrap();
            prop_assert_eq!(&r.frame, &reference.frame);
            prop_assert_eq!(r.lp_count, ds.n() - prep.m_hat);
        }
    }

    #[test]
    fn ehd_identities_and_boundary(spec in spec_strategy()) {
        let ds = generate(&spec).unwrap();
        let cfg = SolveConfig::default();
        let truth = classify_all(&ds, &cfg).unwrap();
        let prep = preprocess(&ds);
        let (n, m_hat) = (ds.n(), prep.m_hat);
        let p = initial_subset_size(n).max(m_hat);
        let r = run_ehd(&ds, p, &prep, &cfg).unwrap();
        prop_assert_eq!(&r.boundary, &truth.frame);
        prop_assert_eq!((r.step2.lp_count, r.step2.lp_size), (p - m_hat, p));
        prop_assert_eq!((r.step3.lp_count, r.step3.lp_size), (n - p, r.b_s.len()));
        let pool = r.b_s.len() + r.ext_b_s.len();
        prop_assert_eq!((r.step4.lp_count, r.step4.lp_size), (pool - m_hat, pool));
        prop_assert_eq!(r.total_lp_count, n - m_hat + r.step4.lp_count);
        prop_assert!(r.step4.lp_size >= truth.frame.len());
        prop_assert!(is_subset(&r.b_s, &r.a_s));
        prop_assert!(r.ext_b_s.iter().all(|i| !r.a_s.contains(i)));
        let mut pool_set: Vec<usize> = r.b_s.iter().chain(&r.ext_b_s).copied().collect();
        pool_set.sort_unstable();
        prop_assert!(is_subset(&truth.frame, &pool_set));
        prop_assert_eq!(r.productivity + r.partial_boundary_found.len(), n - r.step4.lp_count - m_hat);
    }

    #[test]
    fn phase2_matches_oracle_scores(spec in spec_strategy()) {
        let ds = generate(&spec).unwrap();
        let cfg = SolveConfig::default();
        let truth = classify_all(&ds, &cfg).unwrap();
        let targets = complement(ds.n(), &truth.frame);
        let scores = score_all(&ds, &truth.frame, &targets, &cfg).unwrap();
        for (t, phi) in scores.scores {
            prop_assert!((phi - truth.scores[t]).abs() <= 1e-6 * truth.scores[t].max(1.0), "DMU {}", t);
        }
    }

    #[test]
    fn degenerate_grids(ds in grid_strategy()) {
        let cfg = SolveConfig::default();
        let truth = classify_all(&ds, &cfg).unwrap();
        prop_assert!(is_subset(&truth.frame, &truth.boundary));
        prop_assert!(truth.density > 0.0 && truth.density <= 1.0);
        for &f in &truth.frame {
            let rest: Vec<&[f64]> = truth.frame.iter().filter(|&&g| g != f).map(|&g| ds.point(g)).collect();
            if !rest.is_empty() {
                prop_assert!(membership_test(&rest, ds.point(f), &cfg).unwrap().delta > TOL);
            }
        }
        let frame_points: Vec<&[f64]> = ds.points(&truth.frame).collect();
        for i in 0..ds.n() {
            prop_assert!(membership_test(&frame_points, ds.point(i), &cfg).unwrap().is_member);
        }

        let prep = preprocess(&ds);
        for &s in &prep.extreme_seed {
            prop_assert_eq!(truth.labels[s], Label::ExtremeEfficient);
        }
        let bh = build_hull(&ds, &prep.extreme_seed, &ascending_prescore_order(&prep), &cfg).unwrap();
        prop_assert_eq!(&bh.frame, &truth.frame);

        let p = initial_subset_size(ds.n()).max(prep.m_hat);
        let opts = EhdOptions { include_partial_boundary: true };
        let e = run_ehd_with(&ds, p, &prep, &opts, &cfg).unwrap();
        prop_assert!(is_subset(&truth.frame, &e.boundary));
        prop_assert!(is_subset(&e.boundary, &truth.boundary));

        let targets = complement(ds.n(), &e.boundary);
        let scores = score_all(&ds, &e.boundary, &targets, &cfg).unwrap();
        for (t, phi) in scores.scores {
            prop_assert!((phi - truth.scores[t]).abs() <= 1e-6 * truth.scores[t].max(1.0));
        }
    }

    #[test]
    fn prescore_is_permutation_equivariant(spec in spec_strategy(), shuffle_seed in any::<u64>()) {
        let ds = generate(&spec).unwrap();
        let mut perm: Vec<usize> = (0..ds.n()).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(shuffle_seed));
        let base = prescore(&ds);
        let permuted = prescore(&ds.permuted(&perm).unwrap());
        for (k, &i) in perm.iter().enumerate() {
            prop_assert!((permuted[k] - base[i]).abs() < 1e-12);
        }
        prop_assert!(base.iter().all(|&s| (0.0..=1.0).contains(&s)));
    }

    #[test]
    fn prescore_respects_dominance(ds in grid_strategy()) {
        let s = prescore(&ds);
        for p in 0..ds.n() {
            for q in 0..ds.n() {
                let dominates = ds.point(p).iter().zip(ds.point(q)).all(|(a, b)| a >= b);
                if dominates {
                    prop_assert!(s[p] >= s[q] - 1e-12);
                }
            }
        }
    }

    #[test]
    fn generator_is_deterministic(spec in spec_strategy()) {
        prop_assert_eq!(generate(&spec).unwrap(), generate(&spec).unwrap());
    }
}

#[test]
fn realized_density_tracks_target() {
    let cfg = SolveConfig::default();
    for (m1, m2) in [(1, 2), (3, 3)] {
        for d in [0.01, 0.10, 0.25] {
            for seed in 0..10 {
                let ds = generate(&GenSpec::new(200, m1, m2, d, seed)).unwrap();
                let r = classify_all(&ds, &cfg).unwrap();
                assert!(
                    (r.density - d).abs() <= 0.05,
                    "m = {}, d = {d}, seed {seed}: {}",
                    m1 + m2,
                    r.density
                );
            }
        }
    }
}

#[test]
fn small_instance_density_window() {
    let ds = generate(&GenSpec::new(100, 2, 1, 0.25, 7)).unwrap();
    let r = classify_all(&ds, &SolveConfig::default()).unwrap();
    assert!((0.20..=0.30).contains(&r.density), "{}", r.density);
}

#[test]
fn ascending_prescore_order_keeps_lps_small() {
    let cfg = SolveConfig::default();
    for d in [0.10, 0.25] {
        for seed in 0..5 {
            let ds = generate(&GenSpec::new(400, 2, 2, d, seed)).unwrap();
            let prep = preprocess(&ds);
            let asc = ascending_prescore_order(&prep);
            let desc: Vec<usize> = asc.iter().rev().copied().collect();
            let a = build_hull(&ds, &prep.extreme_seed, &asc, &cfg).unwrap();
            let b = build_hull(&ds, &prep.extreme_seed, &desc, &cfg).unwrap();
            assert!(
                a.avg_lp_size <= b.avg_lp_size,
                "d = {d}, seed {seed}: {} > {}",
                a.avg_lp_size,
                b.avg_lp_size
            );
        }
    }
}

#[test]
fn injected_boundary_points_leave_scores_unchanged() {
    let cfg = SolveConfig::default();
    for seed in 0..3 {
        let spec = GenSpec {
            inject_boundary: 6,
            ..GenSpec::new(150, 2, 2, 0.2, seed)
        };
        let ds = generate(&spec).unwrap();
        let truth = classify_all(&ds, &cfg).unwrap();
        assert!(truth.boundary.len() >= truth.frame.len() + 6);
        let prep = preprocess(&ds);
        let opts = EhdOptions {
            include_partial_boundary: true,
        };
        let e = run_ehd_with(
            &ds,
            initial_subset_size(ds.n()).max(prep.m_hat),
            &prep,
            &opts,
            &cfg,
        )
        .unwrap();
        assert!(e.boundary.len() > truth.frame.len());
        assert!(is_subset(&truth.frame, &e.boundary));

        let targets = complement(ds.n(), &e.boundary);
        let via_b = score_all(&ds, &e.boundary, &targets, &cfg).unwrap();
        let via_f = score_all(&ds, &truth.frame, &targets, &cfg).unwrap();
        for ((t, a), (_, b)) in via_b.scores.iter().zip(&via_f.scores) {
            assert!((a - b).abs() <= 1e-6 * a.max(1.0), "DMU {t}: {a} vs {b}");
        }
        let bh_targets = complement(ds.n(), &truth.frame);
        assert!(bh_targets.len() >= targets.len());
    }
}
