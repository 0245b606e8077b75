mod common;

use common::*;
use morphtda::classify::TrainConfig;
use morphtda::eval::{
    balanced_subsample, cross_db, five_fold_cv, frr_far, stratified_folds, EvalConfig, EvalError, FoldPooling,
    LabeledDataset,
};
use morphtda::{FeatureKind, FeatureVector, Label};
use proptest::prelude::*;
use rand::seq::SliceRandom;

fn dataset(rows: &[FeatureVector], name: &str) -> LabeledDataset {
    LabeledDataset::from_rows(rows, FeatureKind::BsD0, name).unwrap()
}

fn labels() -> impl Strategy<Value = (Vec<Label>, Vec<Label>)> {
    prop::collection::vec((any::<bool>(), any::<bool>()), 2..60).prop_map(|v| {
        let mut truth: Vec<Label> = v.iter().map(|p| if p.0 { Label::Morph } else { Label::Genuine }).collect();
        truth[0] = Label::Genuine;
        truth[1] = Label::Morph;
        let pred = v.iter().map(|p| if p.1 { Label::Morph } else { Label::Genuine }).collect();
        (pred, truth)
    })
}

proptest! {
    #[test]
    fn rates_ignore_sample_order((pred, truth) in labels(), seed in any::<u64>()) {
        let base = frr_far(&pred, &truth).unwrap();
        let mut pairs: Vec<(Label, Label)> = pred.iter().copied().zip(truth.iter().copied()).collect();
        pairs.shuffle(&mut rng(seed));
        let (p, t): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
        prop_assert_eq!(frr_far(&p, &t).unwrap(), base);
    }

    #[test]
    fn rates_count_errors_directly((pred, truth) in labels()) {
        let (frr, far) = frr_far(&pred, &truth).unwrap();
        let count = |class: Label| {
            let n = truth.iter().filter(|&&t| t == class).count();
            let wrong = pred.iter().zip(&truth).filter(|(p, t)| **t == class && **p != class).count();
            100.0 * wrong as f64 / n as f64
        };
        prop_assert_eq!(frr, count(Label::Genuine));
        prop_assert_eq!(far, count(Label::Morph));
    }

    #[test]
    fn folds_are_balanced(n_g in 1usize..80, extra in 0usize..80, k in 2usize..8, seed in any::<u64>()) {
        let n_m = n_g + extra;
        let [g, m] = stratified_folds(n_g, n_m, k, seed);
        prop_assert!(g.iter().all(|&f| f < k) && m.iter().all(|&f| f < k));
        for f in 0..k {
            let a = g.iter().filter(|&&x| x == f).count();
            let b = m.iter().filter(|&&x| x == f).count();
            prop_assert!(a.abs_diff(n_g / k) <= 1 && b.abs_diff(n_m / k) <= 1);
            if extra == 0 {
                prop_assert!(a.abs_diff(b) <= 1);
            }
        }
    }

    #[test]
    fn subsampling_is_seeded(n_g in 2usize..20, extra in 1usize..30, seed in any::<u64>()) {
        let rows = gaussian_blobs(n_g + extra, 1, 1.0, seed);
        let mut ds = dataset(&rows, "x");
        ds.genuine.truncate(n_g);
        let a = balanced_subsample(&ds, seed).unwrap();
        prop_assert_eq!(&a, &balanced_subsample(&ds, seed).unwrap());
        prop_assert_eq!(a.genuine.len(), n_g);
        prop_assert_eq!(a.morph.len(), n_g);
        prop_assert_eq!(&a.genuine, &ds.genuine);
        for m in &a.morph {
            prop_assert!(ds.morph.contains(m));
        }
    }
}

#[test]
fn different_seeds_draw_different_subsets() {
    let rows = gaussian_blobs(50, 1, 1.0, 3);
    let mut ds = dataset(&rows, "x");
    ds.genuine.truncate(10);
    let draws: std::collections::HashSet<Vec<String>> = (0..5)
        .map(|s| {
            balanced_subsample(&ds, s)
                .unwrap()
                .morph
                .iter()
                .map(|m| m.sample_id.clone())
                .collect()
        })
        .collect();
    assert!(draws.len() > 1);
}

#[test]
fn separable_data_has_no_errors() {
    let ds = dataset(&gaussian_blobs(30, 2, 6.0, 1), "separable");
    let report = five_fold_cv(&ds, &TrainConfig::default(), &EvalConfig::default()).unwrap();
    assert_eq!((report.frr_avg, report.far_avg), (0.0, 0.0));
    assert_eq!(report.per_run.len(), 10 * 5);
    let cross = cross_db(&ds, &ds, &TrainConfig::default(), &EvalConfig::default()).unwrap();
    assert_eq!((cross.frr_avg, cross.far_avg), (0.0, 0.0));
    assert_eq!(cross.frr_std, None);
}

#[test]
fn random_labels_sit_at_chance() {
    let mut rows = gaussian_blobs(60, 4, 0.0, 21);
    let mut r = rng(22);
    let mut labels: Vec<Label> = rows.iter().map(|x| x.label).collect();
    labels.shuffle(&mut r);
    for (row, l) in rows.iter_mut().zip(labels) {
        row.label = l;
    }
    let report = five_fold_cv(&dataset(&rows, "noise"), &TrainConfig::default(), &EvalConfig::default()).unwrap();
    assert!((35.0..=65.0).contains(&report.frr_avg), "FRR {}", report.frr_avg);
    assert!((35.0..=65.0).contains(&report.far_avg), "FAR {}", report.far_avg);
}

#[test]
fn shifted_domain_raises_acceptance() {
    let cfg = EvalConfig {
        seed: 5,
        ..Default::default()
    };
    let train = dataset(&gaussian_blobs(60, 3, 1.5, 31), "home");
    let in_domain = five_fold_cv(&train, &TrainConfig::default(), &cfg).unwrap();
    // Move the morph class of the second domain halfway towards the genuine one.
    let mut away = gaussian_blobs(60, 3, 1.5, 32);
    for row in away.iter_mut().filter(|r| r.label == Label::Morph) {
        row.values.iter_mut().for_each(|v| *v -= 1.5);
    }
    let shifted = cross_db(&train, &dataset(&away, "away"), &TrainConfig::default(), &cfg).unwrap();
    assert!(
        shifted.far_avg > in_domain.far_avg,
        "shifted FAR {} vs in-domain {}",
        shifted.far_avg,
        in_domain.far_avg
    );
}

#[test]
fn reports_are_self_consistent() {
    let ds = dataset(&gaussian_blobs(25, 2, 1.0, 41), "overlap");
    for pooling in [FoldPooling::Pooled, FoldPooling::PerFold] {
        let cfg = EvalConfig {
            seed: 8,
            repeats: 6,
            pooling,
            ..Default::default()
        };
        let report = five_fold_cv(&ds, &TrainConfig::default(), &cfg).unwrap();
        let rates = report.run_rates();
        let frr: Vec<f64> = rates.iter().map(|x| x.0).collect();
        let far: Vec<f64> = rates.iter().map(|x| x.1).collect();
        assert!((mean(&frr) - report.frr_avg).abs() <= 1e-12);
        assert!((mean(&far) - report.far_avg).abs() <= 1e-12);
        assert!((sample_std(&frr) - report.frr_std.unwrap()).abs() <= 1e-12);
        assert!((sample_std(&far) - report.far_std).abs() <= 1e-12);
        let again = five_fold_cv(&ds, &TrainConfig::default(), &cfg).unwrap();
        assert_eq!(again.to_json(), report.to_json());
        assert_eq!(morphtda::EvalReport::from_json(&report.to_json()).unwrap(), report);
    }
}

#[test]
fn mismatched_kinds_are_rejected() {
    let a = dataset(&gaussian_blobs(10, 2, 1.0, 1), "a");
    let mut rows = gaussian_blobs(10, 2, 1.0, 2);
    rows.iter_mut().for_each(|r| r.kind = FeatureKind::BsD1);
    let b = LabeledDataset::from_rows(&rows, FeatureKind::BsD1, "b").unwrap();
    assert!(matches!(
        cross_db(&a, &b, &TrainConfig::default(), &EvalConfig::default()),
        Err(EvalError::KindMismatch(FeatureKind::BsD0, FeatureKind::BsD1))
    ));
}

#[test]
fn too_few_morphs() {
    let rows = gaussian_blobs(10, 1, 1.0, 1);
    let mut ds = dataset(&rows, "x");
    ds.morph.truncate(4);
    assert!(matches!(
        balanced_subsample(&ds, 0),
        Err(EvalError::TooFewMorphs { needed: 10, have: 4 })
    ));
}
