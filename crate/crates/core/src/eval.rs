//! Evaluation protocols: balanced morph subsampling, repeated stratified
//! k-fold cross-validation and cross-database testing, reported as FRR/FAR.
//!
//! Morph is the positive class. FRR is the share of genuine samples predicted
//! morph, FAR the share of morphs predicted genuine, both in percent.

use rand::seq::index;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classify::{predict, train_svm, SvmError, SvmModel, TrainConfig};
use crate::featurize::{sample_std, FeatureKind, FeatureVector, Label};

#[derive(Debug, Error, PartialEq)]
pub enum EvalError {
    #[error("truth labels must contain both classes")]
    MissingClass,
    #[error("{0} predictions for {1} labels")]
    LengthMismatch(usize, usize),
    #[error("need at least {needed} morphs to balance, have {have}")]
    TooFewMorphs { needed: usize, have: usize },
    #[error("feature kinds differ: {0} vs {1}")]
    KindMismatch(FeatureKind, FeatureKind),
    #[error("feature lengths differ: {0} vs {1}")]
    LengthDiffers(usize, usize),
    #[error("dataset `{0}` has no samples")]
    EmptyDataset(String),
    #[error("sample `{0}` is filed under the wrong class")]
    LabelMismatch(String),
    #[error("invalid evaluation config: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Svm(#[from] SvmError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledDataset {
    pub genuine: Vec<FeatureVector>,
    pub morph: Vec<FeatureVector>,
    pub db_name: String,
}

impl LabeledDataset {
    /// Splits rows of one kind by label; rows of other kinds are ignored.
    pub fn from_rows(rows: &[FeatureVector], kind: FeatureKind, db_name: impl Into<String>) -> Result<Self, EvalError> {
        let (genuine, morph): (Vec<_>, Vec<_>) = rows
            .iter()
            .filter(|r| r.kind == kind)
            .cloned()
            .partition(|r| r.label == Label::Genuine);
        let ds = Self {
            genuine,
            morph,
            db_name: db_name.into(),
        };
        ds.validate()?;
        Ok(ds)
    }

    pub fn validate(&self) -> Result<(), EvalError> {
        let first = self
            .genuine
            .first()
            .or(self.morph.first())
            .ok_or_else(|| EvalError::EmptyDataset(self.db_name.clone()))?;
        for (rows, label) in [(&self.genuine, Label::Genuine), (&self.morph, Label::Morph)] {
            for r in rows.iter() {
                if r.label != label {
                    return Err(EvalError::LabelMismatch(r.sample_id.clone()));
                }
                if r.kind != first.kind {
                    return Err(EvalError::KindMismatch(first.kind, r.kind));
                }
                if r.values.len() != first.values.len() {
                    return Err(EvalError::LengthDiffers(first.values.len(), r.values.len()));
                }
            }
        }
        Ok(())
    }

    pub fn kind(&self) -> Option<FeatureKind> {
        self.genuine.first().or(self.morph.first()).map(|f| f.kind)
    }

    pub fn dim(&self) -> Option<usize> {
        self.genuine.first().or(self.morph.first()).map(|f| f.values.len())
    }

    pub fn len(&self) -> usize {
        self.genuine.len() + self.morph.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Confusion {
    /// morph predicted morph
    pub tp: usize,
    /// genuine predicted genuine
    pub tn: usize,
    /// genuine predicted morph (false rejection)
    pub fp: usize,
    /// morph predicted genuine (false acceptance)
    #[serde(rename = "fn")]
    pub fn_: usize,
}

impl Confusion {
    pub fn record(&mut self, truth: Label, predicted: Label) {
        match (truth, predicted) {
            (Label::Morph, Label::Morph) => self.tp += 1,
            (Label::Genuine, Label::Genuine) => self.tn += 1,
            (Label::Genuine, Label::Morph) => self.fp += 1,
            (Label::Morph, Label::Genuine) => self.fn_ += 1,
        }
    }

    pub fn add(&mut self, other: &Confusion) {
        self.tp += other.tp;
        self.tn += other.tn;
        self.fp += other.fp;
        self.fn_ += other.fn_;
    }

    /// `None` where the class is absent.
    pub fn frr(&self) -> Option<f64> {
        let genuine = self.tn + self.fp;
        (genuine > 0).then(|| 100.0 * self.fp as f64 / genuine as f64)
    }

    pub fn far(&self) -> Option<f64> {
        let morph = self.tp + self.fn_;
        (morph > 0).then(|| 100.0 * self.fn_ as f64 / morph as f64)
    }

    pub fn accuracy(&self) -> f64 {
        let total = self.tp + self.tn + self.fp + self.fn_;
        (self.tp + self.tn) as f64 / total as f64
    }
}

pub fn frr_far(predictions: &[Label], truth: &[Label]) -> Result<(f64, f64), EvalError> {
    if predictions.len() != truth.len() {
        return Err(EvalError::LengthMismatch(predictions.len(), truth.len()));
    }
    let mut c = Confusion::default();
    for (&t, &p) in truth.iter().zip(predictions) {
        c.record(t, p);
    }
    match (c.frr(), c.far()) {
        (Some(frr), Some(far)) => Ok((frr, far)),
        _ => Err(EvalError::MissingClass),
    }
}

/// Keeps every genuine sample and draws as many morphs without replacement.
/// Drawn morphs keep their original relative order.
pub fn balanced_subsample(ds: &LabeledDataset, seed: u64) -> Result<LabeledDataset, EvalError> {
    let needed = ds.genuine.len();
    if ds.morph.len() < needed {
        return Err(EvalError::TooFewMorphs {
            needed,
            have: ds.morph.len(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked = index::sample(&mut rng, ds.morph.len(), needed).into_vec();
    picked.sort_unstable();
    Ok(LabeledDataset {
        genuine: ds.genuine.clone(),
        morph: picked.into_iter().map(|i| ds.morph[i].clone()).collect(),
        db_name: ds.db_name.clone(),
    })
}

/// Fold assignment per class: `fold_of[class][i]` for sample `i`. Each class
/// is shuffled and dealt round-robin, so fold sizes within a class differ by
/// at most one.
pub fn stratified_folds(n_genuine: usize, n_morph: usize, folds: usize, seed: u64) -> [Vec<usize>; 2] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut deal = |n: usize| {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        let mut fold_of = vec![0; n];
        for (pos, &i) in order.iter().enumerate() {
            fold_of[i] = pos % folds;
        }
        fold_of
    };
    let g = deal(n_genuine);
    let m = deal(n_morph);
    [g, m]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FoldPooling {
    /// Sum the fold confusions of a run, then compute rates.
    Pooled,
    /// Average the per-fold rates of a run.
    PerFold,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Protocol {
    #[serde(rename = "FCV5")]
    Fcv5,
    CrossDb,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    pub repeats: usize,
    pub folds: usize,
    pub seed: u64,
    pub pooling: FoldPooling,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self {
            repeats: 10,
            folds: 5,
            seed: 0,
            pooling: FoldPooling::Pooled,
        }
    }
}

impl EvalConfig {
    fn validate(&self) -> Result<(), EvalError> {
        if self.repeats == 0 {
            return Err(EvalError::InvalidConfig("repeats must be at least 1".into()));
        }
        if self.folds < 2 {
            return Err(EvalError::InvalidConfig("folds must be at least 2".into()));
        }
        Ok(())
    }

    /// Independent seeds for the subsample, fold split and trainer of each run.
    fn run_seeds(&self) -> Vec<[u64; 3]> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        (0..self.repeats).map(|_| [rng.gen(), rng.gen(), rng.gen()]).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub run: usize,
    pub fold: Option<usize>,
    pub counts: Confusion,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelectedModel {
    pub run: usize,
    pub fold: usize,
    pub validation_frr: f64,
    pub validation_far: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub protocol: Protocol,
    pub kind: Option<FeatureKind>,
    pub train_db: String,
    pub test_db: Option<String>,
    pub seed: u64,
    pub repeats: usize,
    pub folds: usize,
    pub pooling: FoldPooling,
    pub frr_avg: f64,
    /// Absent when the genuine test set is identical across repeats.
    pub frr_std: Option<f64>,
    pub far_avg: f64,
    pub far_std: f64,
    pub per_run: Vec<RunRecord>,
    pub selected_model: Option<SelectedModel>,
}

impl EvalReport {
    /// Per-run (FRR, FAR) recomputed from the stored confusion counts.
    pub fn run_rates(&self) -> Vec<(f64, f64)> {
        (0..self.repeats)
            .map(|run| {
                let records: Vec<&Confusion> = self
                    .per_run
                    .iter()
                    .filter(|r| r.run == run)
                    .map(|r| &r.counts)
                    .collect();
                run_rates(&records, self.pooling)
            })
            .collect()
    }

    pub fn mean_accuracy(&self) -> f64 {
        let per_run: Vec<f64> = (0..self.repeats)
            .map(|run| {
                let mut c = Confusion::default();
                self.per_run
                    .iter()
                    .filter(|r| r.run == run)
                    .for_each(|r| c.add(&r.counts));
                c.accuracy()
            })
            .collect();
        per_run.iter().sum::<f64>() / per_run.len() as f64
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }
}

fn run_rates(records: &[&Confusion], pooling: FoldPooling) -> (f64, f64) {
    match pooling {
        FoldPooling::Pooled => {
            let mut c = Confusion::default();
            records.iter().for_each(|r| c.add(r));
            (c.frr().unwrap_or(0.0), c.far().unwrap_or(0.0))
        }
        FoldPooling::PerFold => {
            let avg = |xs: Vec<f64>| {
                if xs.is_empty() {
                    0.0
                } else {
                    xs.iter().sum::<f64>() / xs.len() as f64
                }
            };
            (
                avg(records.iter().filter_map(|r| r.frr()).collect()),
                avg(records.iter().filter_map(|r| r.far()).collect()),
            )
        }
    }
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn evaluate(model: &SvmModel, samples: &[&FeatureVector]) -> Result<Confusion, EvalError> {
    let mut c = Confusion::default();
    for s in samples {
        let (predicted, _) = predict(model, &s.values)?;
        c.record(s.label, predicted);
    }
    Ok(c)
}

struct FoldOutcome {
    run: usize,
    fold: usize,
    counts: Confusion,
    model: SvmModel,
}

fn cross_validate(
    ds: &LabeledDataset,
    train_cfg: &TrainConfig,
    cfg: &EvalConfig,
) -> Result<Vec<FoldOutcome>, EvalError> {
    cfg.validate()?;
    ds.validate()?;
    let seeds = cfg.run_seeds();
    let runs: Vec<Vec<FoldOutcome>> = seeds
        .par_iter()
        .enumerate()
        .map(|(run, &[sub_seed, fold_seed, svm_seed])| {
            let balanced = balanced_subsample(ds, sub_seed)?;
            let [g_fold, m_fold] =
                stratified_folds(balanced.genuine.len(), balanced.morph.len(), cfg.folds, fold_seed);
            (0..cfg.folds)
                .into_par_iter()
                .map(|fold| {
                    let mut train = Vec::new();
                    let mut test = Vec::new();
                    for (samples, fold_of) in [(&balanced.genuine, &g_fold), (&balanced.morph, &m_fold)] {
                        for (s, &f) in samples.iter().zip(fold_of) {
                            if f == fold {
                                test.push(s);
                            } else {
                                train.push(s.clone());
                            }
                        }
                    }
                    let fold_cfg = TrainConfig {
                        seed: svm_seed.wrapping_add(fold as u64),
                        ..train_cfg.clone()
                    };
                    let model = train_svm(&train, &fold_cfg)?;
                    let counts = evaluate(&model, &test)?;
                    Ok(FoldOutcome {
                        run,
                        fold,
                        counts,
                        model,
                    })
                })
                .collect::<Result<Vec<_>, EvalError>>()
        })
        .collect::<Result<Vec<_>, EvalError>>()?;
    Ok(runs.into_iter().flatten().collect())
}

/// Repeated balanced k-fold cross-validation; averages and sample standard
/// deviations are taken over the per-run rates.
pub fn five_fold_cv(ds: &LabeledDataset, train_cfg: &TrainConfig, cfg: &EvalConfig) -> Result<EvalReport, EvalError> {
    let outcomes = cross_validate(ds, train_cfg, cfg)?;
    let per_run: Vec<RunRecord> = outcomes
        .iter()
        .map(|o| RunRecord {
            run: o.run,
            fold: Some(o.fold),
            counts: o.counts,
        })
        .collect();
    let mut report = EvalReport {
        protocol: Protocol::Fcv5,
        kind: ds.kind(),
        train_db: ds.db_name.clone(),
        test_db: None,
        seed: cfg.seed,
        repeats: cfg.repeats,
        folds: cfg.folds,
        pooling: cfg.pooling,
        frr_avg: 0.0,
        frr_std: None,
        far_avg: 0.0,
        far_std: 0.0,
        per_run,
        selected_model: None,
    };
    let rates = report.run_rates();
    let frr: Vec<f64> = rates.iter().map(|r| r.0).collect();
    let far: Vec<f64> = rates.iter().map(|r| r.1).collect();
    report.frr_avg = mean(&frr);
    report.frr_std = Some(sample_std(&frr));
    report.far_avg = mean(&far);
    report.far_std = sample_std(&far);
    Ok(report)
}

/// Trains with repeated k-fold CV on `train_ds`, keeps the fold model with the
/// lowest validation FRR + FAR (then lowest FAR, run, fold), and tests it on
/// `repeats` balanced draws of `test_ds`.
pub fn cross_db(
    train_ds: &LabeledDataset,
    test_ds: &LabeledDataset,
    train_cfg: &TrainConfig,
    cfg: &EvalConfig,
) -> Result<EvalReport, EvalError> {
    train_ds.validate()?;
    test_ds.validate()?;
    if let (Some(a), Some(b)) = (train_ds.kind(), test_ds.kind()) {
        if a != b {
            return Err(EvalError::KindMismatch(a, b));
        }
    }
    if let (Some(a), Some(b)) = (train_ds.dim(), test_ds.dim()) {
        if a != b {
            return Err(EvalError::LengthDiffers(a, b));
        }
    }
    if test_ds.morph.len() < test_ds.genuine.len() {
        return Err(EvalError::TooFewMorphs {
            needed: test_ds.genuine.len(),
            have: test_ds.morph.len(),
        });
    }

    let outcomes = cross_validate(train_ds, train_cfg, cfg)?;
    let score = |o: &FoldOutcome| {
        let frr = o.counts.frr().unwrap_or(0.0);
        let far = o.counts.far().unwrap_or(0.0);
        (frr + far, far)
    };
    let best = outcomes
        .iter()
        .min_by(|a, b| {
            let (sa, fa) = score(a);
            let (sb, fb) = score(b);
            sa.total_cmp(&sb)
                .then(fa.total_cmp(&fb))
                .then(a.run.cmp(&b.run))
                .then(a.fold.cmp(&b.fold))
        })
        .expect("at least one fold");

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5EED_C0DE_D1B5_0001);
    let test_seeds: Vec<u64> = (0..cfg.repeats).map(|_| rng.gen()).collect();
    let per_run = test_seeds
        .par_iter()
        .enumerate()
        .map(|(run, &seed)| {
            let balanced = balanced_subsample(test_ds, seed)?;
            let samples: Vec<&FeatureVector> = balanced.genuine.iter().chain(&balanced.morph).collect();
            Ok(RunRecord {
                run,
                fold: None,
                counts: evaluate(&best.model, &samples)?,
            })
        })
        .collect::<Result<Vec<_>, EvalError>>()?;

    let mut report = EvalReport {
        protocol: Protocol::CrossDb,
        kind: train_ds.kind(),
        train_db: train_ds.db_name.clone(),
        test_db: Some(test_ds.db_name.clone()),
        seed: cfg.seed,
        repeats: cfg.repeats,
        folds: cfg.folds,
        pooling: FoldPooling::Pooled,
        frr_avg: 0.0,
        frr_std: None,
        far_avg: 0.0,
        far_std: 0.0,
        per_run,
        selected_model: Some(SelectedModel {
            run: best.run,
            fold: best.fold,
            validation_frr: best.counts.frr().unwrap_or(0.0),
            validation_far: best.counts.far().unwrap_or(0.0),
        }),
    };
    let rates = report.run_rates();
    let frr: Vec<f64> = rates.iter().map(|r| r.0).collect();
    let far: Vec<f64> = rates.iter().map(|r| r.1).collect();
    report.frr_avg = mean(&frr);
    report.far_avg = mean(&far);
    report.far_std = sample_std(&far);
    Ok(report)
}

/// Aligned text table, one column per report:
///
/// ```text
/// Error  Stats.  MCIQ   BB_D0
/// FRR    Avg     0.77   3.23
///        Stdev   1.56   3.57
/// ```
pub fn render_table(columns: &[(String, &EvalReport)]) -> String {
    let fmt = |v: Option<f64>| v.map_or_else(|| "---".to_string(), |x| format!("{x:.2}"));
    let mut rows: Vec<[String; 2]> = vec![
        ["Error".into(), "Stats.".into()],
        ["FRR".into(), "Avg".into()],
        ["".into(), "Stdev".into()],
        ["FAR".into(), "Avg".into()],
        ["".into(), "Stdev".into()],
    ];
    let mut cells: Vec<Vec<String>> = vec![Vec::new(); rows.len()];
    for (name, r) in columns {
        cells[0].push(name.clone());
        cells[1].push(fmt(Some(r.frr_avg)));
        cells[2].push(fmt(r.frr_std));
        cells[3].push(fmt(Some(r.far_avg)));
        cells[4].push(fmt(Some(r.far_std)));
    }
    let width = cells
        .iter()
        .flatten()
        .map(|c| c.len())
        .max()
        .unwrap_or(0)
        .max(6);
    let mut out = String::new();
    for (head, line) in rows.iter_mut().zip(&cells) {
        let mut s = format!("{:<7}{:<8}", head[0], head[1]);
        for c in line {
            s.push_str(&format!("{c:>width$}  "));
        }
        out.push_str(s.trim_end());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(id: usize, x: f64, label: Label) -> FeatureVector {
        FeatureVector::new(FeatureKind::BsD0, vec![x, 0.5 * x], format!("s{id}"), label)
    }

    fn separable(n_genuine: usize, n_morph: usize) -> LabeledDataset {
        LabeledDataset {
            genuine: (0..n_genuine).map(|i| sample(i, -1.0 - 0.01 * i as f64, Label::Genuine)).collect(),
            morph: (0..n_morph).map(|i| sample(1000 + i, 1.0 + 0.01 * i as f64, Label::Morph)).collect(),
            db_name: "toy".into(),
        }
    }

    #[test]
    fn rates_counting() {
        use Label::*;
        assert_eq!(frr_far(&[Genuine, Morph], &[Genuine, Morph]).unwrap(), (0.0, 0.0));
        assert_eq!(frr_far(&[Morph, Genuine], &[Genuine, Morph]).unwrap(), (100.0, 100.0));
        let mut truth = vec![Genuine; 10];
        truth.extend(vec![Morph; 10]);
        let mut pred = truth.clone();
        pred[0] = Morph;
        pred[1] = Morph;
        pred[15] = Genuine;
        assert_eq!(frr_far(&pred, &truth).unwrap(), (20.0, 10.0));
        assert_eq!(frr_far(&[Genuine], &[Genuine]), Err(EvalError::MissingClass));
        assert_eq!(frr_far(&[Genuine], &[]), Err(EvalError::LengthMismatch(1, 0)));
    }

    #[test]
    fn subsample_sizes() {
        let ds = separable(102, 1000);
        let b = balanced_subsample(&ds, 1).unwrap();
        assert_eq!((b.genuine.len(), b.morph.len()), (102, 102));
        let ds = separable(67, 1000);
        let b = balanced_subsample(&ds, 1).unwrap();
        assert_eq!((b.genuine.len(), b.morph.len()), (67, 67));
        let ds = separable(10, 10);
        assert_eq!(balanced_subsample(&ds, 9).unwrap(), ds);
        assert!(matches!(
            balanced_subsample(&separable(5, 4), 0),
            Err(EvalError::TooFewMorphs { needed: 5, have: 4 })
        ));
    }

    #[test]
    fn subsample_reproducible_and_seed_sensitive() {
        let ds = separable(20, 200);
        let a = balanced_subsample(&ds, 7).unwrap();
        assert_eq!(a, balanced_subsample(&ds, 7).unwrap());
        assert_ne!(a.morph, balanced_subsample(&ds, 8).unwrap().morph);
    }

    #[test]
    fn folds_are_stratified() {
        let [g, m] = stratified_folds(23, 23, 5, 3);
        for fold in 0..5 {
            let ng = g.iter().filter(|&&f| f == fold).count();
            let nm = m.iter().filter(|&&f| f == fold).count();
            assert!(ng.abs_diff(nm) <= 1);
            assert!((4..=5).contains(&ng));
        }
    }

    #[test]
    fn separable_cv_is_perfect() {
        let ds = separable(30, 60);
        let r = five_fold_cv(&ds, &TrainConfig::default(), &EvalConfig::default()).unwrap();
        assert_eq!((r.frr_avg, r.far_avg), (0.0, 0.0));
        assert_eq!(r.per_run.len(), 50);
    }

    #[test]
    fn per_fold_pooling_matches_records() {
        let ds = separable(12, 40);
        let cfg = EvalConfig {
            pooling: FoldPooling::PerFold,
            repeats: 3,
            ..EvalConfig::default()
        };
        let r = five_fold_cv(&ds, &TrainConfig::default(), &cfg).unwrap();
        let rates = r.run_rates();
        assert_eq!(rates.len(), 3);
        assert_eq!(r.frr_avg, mean(&rates.iter().map(|x| x.0).collect::<Vec<_>>()));
    }

    #[test]
    fn cross_db_self_consistency() {
        let ds = separable(20, 50);
        let r = cross_db(&ds, &ds, &TrainConfig::default(), &EvalConfig::default()).unwrap();
        assert_eq!((r.frr_avg, r.far_avg), (0.0, 0.0));
        assert!(r.frr_std.is_none());
        assert!(r.selected_model.is_some());
        assert_eq!(r.per_run.len(), 10);
    }

    #[test]
    fn cross_db_kind_mismatch() {
        let a = separable(5, 5);
        let mut b = separable(5, 5);
        for s in b.genuine.iter_mut().chain(b.morph.iter_mut()) {
            s.kind = FeatureKind::BsD1;
        }
        assert_eq!(
            cross_db(&a, &b, &TrainConfig::default(), &EvalConfig::default()),
            Err(EvalError::KindMismatch(FeatureKind::BsD0, FeatureKind::BsD1))
        );
    }

    #[test]
    fn dataset_validation() {
        let mut ds = separable(3, 3);
        ds.morph[0].values.push(1.0);
        assert!(matches!(ds.validate(), Err(EvalError::LengthDiffers(2, 3))));
        let mut ds = separable(3, 3);
        ds.genuine[1].label = Label::Morph;
        assert!(matches!(ds.validate(), Err(EvalError::LabelMismatch(_))));
        let empty = LabeledDataset {
            genuine: vec![],
            morph: vec![],
            db_name: "e".into(),
        };
        assert!(matches!(empty.validate(), Err(EvalError::EmptyDataset(_))));
    }

    #[test]
    fn table_layout() {
        let ds = separable(10, 10);
        let r = cross_db(&ds, &ds, &TrainConfig::default(), &EvalConfig { repeats: 2, ..EvalConfig::default() }).unwrap();
        let t = render_table(&[("MCIQ".into(), &r)]);
        let lines: Vec<&str> = t.lines().collect();
        assert_eq!(lines.len(), 5);
        assert!(lines[0].starts_with("Error  Stats."));
        assert!(lines[2].contains("---"));
    }
}
