mod common;

use std::sync::atomic::{AtomicBool, Ordering};

use proptest::prelude::*;
use subsetharmony::baselines::{ga_run, pso_run, GaConfig, PsoConfig};
use subsetharmony::classifiers::{knn_predict, Classifier, KnnConfig, MlpModel};
use subsetharmony::dataset::{standardize, stratified_kfold, train_test_split, Dataset, SplitSpec};
use subsetharmony::harmony::{hs_run, improvise, Harmony, HarmonyMemory, HsConfig, NeighborMode};
use subsetharmony::harness::{
    subset_size_for, ComparisonReport, ComparisonRow, FractionRow, FractionSweepReport, GridReport,
    Report,
};
use subsetharmony::seed::rng;
use subsetharmony::wrapper::{
    confidence_interval, FnObjective, ObjectiveConfig, Validation, WrapperObjective,
};
use subsetharmony::FeatureSubset;

/// Rows of `d` finite values with labels covering every class at least `per_class` times.
fn labelled_rows(
    max_rows: usize,
    d: usize,
    classes: usize,
    per_class: usize,
) -> impl Strategy<Value = Dataset<f64>> {
    let min_rows = classes * per_class;
    (min_rows..=max_rows.max(min_rows))
        .prop_flat_map(move |n| {
            (
                prop::collection::vec(prop::collection::vec(-1e3f64..1e3, d), n),
                prop::collection::vec(0..classes, n - min_rows),
            )
        })
        .prop_map(move |(rows, extra)| {
            let mut labels: Vec<usize> = (0..classes)
                .flat_map(|c| std::iter::repeat_n(c, per_class))
                .collect();
            labels.extend(extra);
            Dataset::from_rows(rows, labels).unwrap()
        })
}

fn same_evaluation(
    a: &subsetharmony::wrapper::EvaluationResult,
    b: &subsetharmony::wrapper::EvaluationResult,
) -> bool {
    a.accuracy_percent == b.accuracy_percent
        && a.per_fold_accuracy == b.per_fold_accuracy
        && a.correct_count == b.correct_count
        && a.total_count == b.total_count
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn csv_round_trip(d in labelled_rows(12, 3, 3, 1)) {
        let text = d.to_csv_string("class");
        let back = Dataset::<f64>::parse_csv(&text, "class").unwrap();
        prop_assert_eq!(back.n_samples(), d.n_samples());
        prop_assert_eq!(back.feature_names(), d.feature_names());
        for i in 0..d.n_samples() {
            prop_assert_eq!(back.row(i), d.row(i));
            prop_assert_eq!(&back.class_names()[back.labels()[i]], &d.class_names()[d.labels()[i]]);
        }
        prop_assert_eq!(back.to_csv_string("class"), text);
    }

    #[test]
    fn projection_composes(
        d in labelled_rows(6, 6, 2, 1),
        outer in prop::collection::vec(0usize..6, 1..6),
        inner_raw in prop::collection::vec(0usize..100, 1..6),
    ) {
        let inner: Vec<usize> = inner_raw.iter().map(|i| i % outer.len()).collect();
        let composed: Vec<usize> = inner.iter().map(|&i| outer[i]).collect();
        let twice = d.project(&outer).unwrap().project(&inner).unwrap();
        let once = d.project(&composed).unwrap();
        for i in 0..d.n_samples() {
            prop_assert_eq!(twice.row(i), once.row(i));
        }
    }

    #[test]
    fn kfold_is_balanced_per_class(d in labelled_rows(40, 1, 3, 5), k in 2usize..=5, seed in any::<u64>()) {
        let folds = stratified_kfold(&d, k, seed).unwrap();
        prop_assert_eq!(folds.fold_of_sample().len(), d.n_samples());
        let mut seen = vec![0usize; d.n_samples()];
        for f in 0..k {
            for i in folds.test_indices(f) {
                seen[i] += 1;
            }
            let mut train = folds.train_indices(f);
            train.extend(folds.test_indices(f));
            train.sort_unstable();
            prop_assert_eq!(train, (0..d.n_samples()).collect::<Vec<_>>());
        }
        prop_assert!(seen.iter().all(|&c| c == 1));
        for members in d.indices_by_class() {
            let mut per_fold = vec![0usize; k];
            for i in members {
                per_fold[folds.fold_of_sample()[i]] += 1;
            }
            let (lo, hi) = (per_fold.iter().min().unwrap(), per_fold.iter().max().unwrap());
            prop_assert!(hi - lo <= 1, "class spread {:?}", per_fold);
        }
    }

    #[test]
    fn holdout_split_partitions_each_class(d in labelled_rows(30, 2, 2, 2), frac in 0.05f64..0.95, seed in any::<u64>()) {
        let (train, test) = train_test_split(&d, SplitSpec::new(frac, seed).unwrap()).unwrap();
        prop_assert_eq!(train.n_samples() + test.n_samples(), d.n_samples());
        let (tr, te, all) = (train.class_counts(), test.class_counts(), d.class_counts());
        for c in 0..all.len() {
            prop_assert_eq!(tr[c] + te[c], all[c]);
            prop_assert!(tr[c] >= 1 && te[c] >= 1);
        }
    }

    #[test]
    fn standardized_training_columns(d in labelled_rows(20, 3, 2, 2)) {
        let (train, _) = standardize(&d, &d).unwrap();
        for j in 0..3 {
            let col: Vec<f64> = train.rows().map(|r| r[j]).collect();
            let n = col.len() as f64;
            let mean = col.iter().sum::<f64>() / n;
            let var = col.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
            prop_assert!(mean.abs() < 1e-9);
            prop_assert!((var - 1.0).abs() < 1e-9 || col.iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn cache_is_transparent(d in labelled_rows(24, 5, 2, 3), picks in prop::collection::vec(prop::sample::subsequence((0..5).collect::<Vec<_>>(), 1..=5), 1..6)) {
        let cfg = ObjectiveConfig {
            classifier: Classifier::Knn(KnnConfig { k_neighbors: 3 }),
            ..ObjectiveConfig::default()
        };
        let obj = WrapperObjective::new(&d, cfg).unwrap();
        for cols in &picks {
            let s = FeatureSubset::new(cols.clone(), 5).unwrap();
            let first = obj.evaluate(&s).unwrap();
            let cached = obj.evaluate(&s).unwrap();
            let fresh = obj.evaluate_uncached(&s).unwrap();
            prop_assert!(same_evaluation(&first, &cached) && same_evaluation(&first, &fresh));
        }
        prop_assert!(obj.cache().hits() >= picks.len());
    }

    #[test]
    fn pooled_accuracy_is_micro_average(d in labelled_rows(30, 3, 3, 3), folds in 2usize..=3) {
        let cfg = ObjectiveConfig {
            classifier: Classifier::Knn(KnnConfig::default()),
            validation: Validation::StratifiedKFold { folds },
            ..ObjectiveConfig::default()
        };
        let obj = WrapperObjective::new(&d, cfg).unwrap();
        let r = obj.evaluate(&FeatureSubset::full(3).unwrap()).unwrap();
        prop_assert_eq!(r.total_count, d.n_samples());
        prop_assert_eq!(r.per_fold_accuracy.len(), folds);
        prop_assert!((r.accuracy_percent - 100.0 * r.correct_count as f64 / r.total_count as f64).abs() < 1e-12);
        let (lo, hi) = r.confidence_interval(0.95).unwrap();
        let p = r.accuracy_percent / 100.0;
        prop_assert!(0.0 <= lo && lo <= p + 1e-12 && p <= hi + 1e-12 && hi <= 1.0);
    }

    #[test]
    fn knn_commutes_with_sample_order(train in labelled_rows(15, 2, 3, 1), test in labelled_rows(8, 2, 1, 1), k in 1usize..5, shift in 0usize..8) {
        let cfg = KnnConfig { k_neighbors: k };
        let base = knn_predict(&train, &cfg, &test).unwrap();
        let n = test.n_samples();
        let order: Vec<usize> = (0..n).map(|i| (i + shift) % n).collect();
        let permuted = knn_predict(&train, &cfg, &test.select_rows(&order)).unwrap();
        let expected: Vec<usize> = order.iter().map(|&i| base[i]).collect();
        prop_assert_eq!(permuted, expected);
        prop_assert!(base.iter().all(|&c| c < train.n_classes()));
    }

    #[test]
    fn softmax_is_a_distribution(ni in 1usize..6, nh in 1usize..6, no in 2usize..5, seed in any::<u64>(), x in prop::collection::vec(-50.0f64..50.0, 6)) {
        let m = MlpModel::<f64>::random(ni, nh, no, seed);
        let p = m.probabilities(&x[..ni]).unwrap();
        prop_assert_eq!(p.len(), no);
        prop_assert!(p.iter().all(|&v| (0.0..=1.0).contains(&v)));
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn wilson_interval_brackets_estimate(correct in 0usize..200, extra in 0usize..200) {
        let n = correct + extra + 1;
        let p = correct as f64 / n as f64;
        let (lo, hi) = confidence_interval(p, n, 0.95).unwrap();
        prop_assert!(0.0 <= lo && lo <= p && p <= hi && hi <= 1.0);
    }

    #[test]
    fn improvisation_stays_legal(
        n in 1usize..25,
        k_raw in 0usize..25,
        hms in 1usize..8,
        hmcr in 0.0f64..=1.0,
        par in 0.0f64..=1.0,
        band in 0.0f64..6.0,
        column_mode in any::<bool>(),
        seed in any::<u64>(),
    ) {
        let k = 1 + k_raw % n;
        let mut r = rng(seed);
        let harmonies = (0..hms)
            .map(|i| Harmony { subset: FeatureSubset::random(k, n, &mut r).unwrap(), fitness: i as f64 })
            .collect();
        let memory = HarmonyMemory::from_harmonies(harmonies).unwrap();
        let cfg = HsConfig {
            hms, hmcr, par, bandwidth: band,
            neighbor_mode: if column_mode { NeighborMode::MemoryColumn } else { NeighborMode::IndexLine },
            ..HsConfig::new(n, k)
        };
        for _ in 0..20 {
            let s = improvise(&memory, &cfg, &mut r);
            prop_assert!(s.len() == k && s.is_valid_for(n), "{} with n={}", s, n);
        }
    }

    #[test]
    fn hs_runs_are_reproducible(seed in any::<u64>(), hms in 1usize..6) {
        let obj = FnObjective::new(9, |s: &FeatureSubset| s.indices().iter().map(|&i| (i * i) as f64).sum());
        let cfg = HsConfig { hms, max_iterations: 25, seed, ..HsConfig::new(9, 3) };
        let (a, ha) = hs_run(&cfg, &obj).unwrap();
        let (b, hb) = hs_run(&cfg, &obj).unwrap();
        prop_assert_eq!(a, b);
        prop_assert_eq!(ha.iterations, hb.iterations);
        prop_assert_eq!(ha.evaluations, hms + 25);
    }

    #[test]
    fn baselines_only_propose_legal_subsets(n in 2usize..15, k_raw in 0usize..15, seed in any::<u64>()) {
        let k = 1 + k_raw % n;
        let bad = AtomicBool::new(false);
        let obj = FnObjective::new(n, |s: &FeatureSubset| {
            if s.len() != k || !s.is_valid_for(n) {
                bad.store(true, Ordering::Relaxed);
            }
            s.indices().iter().map(|&i| ((i * 37) % 11) as f64).sum()
        });
        let ga = ga_run(&GaConfig { generations: 15, seed, ..GaConfig::new(n, k) }, &obj).unwrap();
        let pso = pso_run(&PsoConfig { iterations: 15, seed, ..PsoConfig::new(n, k) }, &obj).unwrap();
        prop_assert!(!bad.load(Ordering::Relaxed));
        for out in [&ga, &pso] {
            prop_assert!(out.best_per_step.windows(2).all(|w| w[0] <= w[1]));
            prop_assert_eq!(out.best.len(), k);
        }
    }

    #[test]
    fn grid_report_round_trips(
        iters in prop::collection::vec(1usize..500, 1..5),
        hms in prop::collection::vec(1usize..100, 1..5),
        seed in any::<u64>(),
    ) {
        use rand::Rng;
        let mut r = rng(seed);
        let cells: Vec<Vec<f64>> = iters.iter().map(|_| hms.iter().map(|_| r.random_range(0.0..=100.0)).collect()).collect();
        let g = GridReport::new(iters.clone(), hms.clone(), cells.clone()).unwrap();
        let back = GridReport::from_csv(&g.to_csv()).unwrap();
        prop_assert_eq!(back.iterations(), &iters[..]);
        prop_assert_eq!(back.hms(), &hms[..]);
        for (a, b) in back.cells().iter().flatten().zip(cells.iter().flatten()) {
            prop_assert!((a - b).abs() <= 0.005 + 1e-9);
        }
        // Independent argmax with the same tie order.
        let mut best = (0, 0);
        for rr in 0..iters.len() {
            for c in 0..hms.len() {
                let key = |(r2, c2): (usize, usize)| (cells[r2][c2], std::cmp::Reverse(iters[r2]), std::cmp::Reverse(hms[c2]));
                if key((rr, c)) > key(best) {
                    best = (rr, c);
                }
            }
        }
        prop_assert_eq!(g.best_cell(), best);
        prop_assert_eq!(g.to_csv(), GridReport::from_csv(&g.to_csv()).unwrap().to_csv());
    }

    #[test]
    fn comparison_and_fraction_reports_round_trip(
        rows in prop::collection::vec(("[A-Z]{2,4}", 1usize..100, 0.0f64..=100.0, prop::option::of(0.0f64..5000.0)), 1..5),
    ) {
        let report = ComparisonReport {
            rows: rows.iter().map(|(n, k, a, t)| ComparisonRow {
                optimizer: n.clone(), subset_size: *k, accuracy_percent: *a, execution_seconds: *t,
            }).collect(),
        };
        let back = ComparisonReport::from_csv(&report.to_csv()).unwrap();
        for (x, y) in back.rows.iter().zip(&report.rows) {
            prop_assert_eq!(&x.optimizer, &y.optimizer);
            prop_assert_eq!(x.subset_size, y.subset_size);
            prop_assert!((x.accuracy_percent - y.accuracy_percent).abs() <= 0.005 + 1e-9);
            match (x.execution_seconds, y.execution_seconds) {
                (Some(a), Some(b)) => prop_assert!((a - b).abs() <= 5e-7 + 1e-9),
                (None, None) => {}
                other => prop_assert!(false, "timing mismatch {:?}", other),
            }
        }
        let fr = FractionSweepReport {
            rows: rows.iter().map(|(_, k, a, _)| FractionRow {
                fraction_percent: (*k as f64).min(100.0), subset_size: *k, accuracy_percent: *a,
            }).collect(),
        };
        let back = FractionSweepReport::from_csv(&fr.to_csv()).unwrap();
        prop_assert_eq!(back.rows.len(), fr.rows.len());
        for (x, y) in back.rows.iter().zip(&fr.rows) {
            prop_assert_eq!(x.fraction_percent, y.fraction_percent);
            prop_assert!((x.accuracy_percent - y.accuracy_percent).abs() <= 0.005 + 1e-9);
        }
    }
}

#[test]
fn fraction_sizes_follow_floor_rule() {
    for n in 1..=200usize {
        for pct in [15usize, 30, 45, 60, 75, 90] {
            let expected = (pct * n / 100).max(1);
            assert_eq!(subset_size_for(pct as f64, n), expected, "{pct}% of {n}");
        }
    }
}
