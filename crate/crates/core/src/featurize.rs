//! Fixed-length feature vectors: barcode binning (Betti curve sampled at
//! integer filtration values), barcode statistics, and the shared CSV format.

use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::persistence::PersistenceBarcode;

pub const MCIQ_LEN: usize = 50;
pub const BS_LEN: usize = 10;
pub const DEFAULT_OMEGA: usize = 24;

#[derive(Debug, Error)]
pub enum FeatureError {
    #[error("unknown feature kind `{0}`")]
    UnknownKind(String),
    #[error("unknown label `{0}` (expected genuine or morph)")]
    UnknownLabel(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FeatureKind {
    #[serde(rename = "MCIQ")]
    Mciq,
    #[serde(rename = "BB_D0")]
    BbD0,
    #[serde(rename = "BB_D1")]
    BbD1,
    #[serde(rename = "BS_D0")]
    BsD0,
    #[serde(rename = "BS_D1")]
    BsD1,
}

impl FeatureKind {
    pub const ALL: [FeatureKind; 5] = [
        FeatureKind::Mciq,
        FeatureKind::BbD0,
        FeatureKind::BbD1,
        FeatureKind::BsD0,
        FeatureKind::BsD1,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FeatureKind::Mciq => "MCIQ",
            FeatureKind::BbD0 => "BB_D0",
            FeatureKind::BbD1 => "BB_D1",
            FeatureKind::BsD0 => "BS_D0",
            FeatureKind::BsD1 => "BS_D1",
        }
    }

    /// Expected length; barcode binning depends on omega.
    pub fn len(self, omega: usize) -> usize {
        match self {
            FeatureKind::Mciq => MCIQ_LEN,
            FeatureKind::BbD0 | FeatureKind::BbD1 => omega + 1,
            FeatureKind::BsD0 | FeatureKind::BsD1 => BS_LEN,
        }
    }

    /// Homology dimension for the barcode-derived kinds.
    pub fn dim(self) -> Option<usize> {
        match self {
            FeatureKind::Mciq => None,
            FeatureKind::BbD0 | FeatureKind::BsD0 => Some(0),
            FeatureKind::BbD1 | FeatureKind::BsD1 => Some(1),
        }
    }
}

impl fmt::Display for FeatureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FeatureKind {
    type Err = FeatureError;

    /// Accepts the CSV spelling (`BB_D0`) and the short CLI one (`bb0`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace(['_', '-'], "").as_str() {
            "mciq" => Ok(FeatureKind::Mciq),
            "bbd0" | "bb0" => Ok(FeatureKind::BbD0),
            "bbd1" | "bb1" => Ok(FeatureKind::BbD1),
            "bsd0" | "bs0" => Ok(FeatureKind::BsD0),
            "bsd1" | "bs1" => Ok(FeatureKind::BsD1),
            _ => Err(FeatureError::UnknownKind(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Genuine,
    Morph,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Label::Genuine => "genuine",
            Label::Morph => "morph",
        }
    }

    /// +1 for morph (the attack class), -1 for genuine.
    pub fn sign(self) -> f64 {
        match self {
            Label::Genuine => -1.0,
            Label::Morph => 1.0,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Label {
    type Err = FeatureError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "genuine" | "bonafide" | "bona_fide" => Ok(Label::Genuine),
            "morph" | "morphed" | "attack" => Ok(Label::Morph),
            _ => Err(FeatureError::UnknownLabel(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub kind: FeatureKind,
    pub values: Vec<f64>,
    pub sample_id: String,
    pub label: Label,
}

impl FeatureVector {
    pub fn new(kind: FeatureKind, values: Vec<f64>, sample_id: impl Into<String>, label: Label) -> Self {
        Self {
            kind,
            values,
            sample_id: sample_id.into(),
            label,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiBinningConfig {
    pub omega: usize,
}

impl Default for BettiBinningConfig {
    fn default() -> Self {
        Self {
            omega: DEFAULT_OMEGA,
        }
    }
}

/// Number of bars alive at each integer line `v = 0..=omega`, where a bar
/// `[b, d)` is alive when `b <= v < d` and an essential bar whenever `b <= v`.
pub fn betti_binning(barcode: &PersistenceBarcode, dim: usize, cfg: &BettiBinningConfig) -> Vec<f64> {
    let mut counts = vec![0.0; cfg.omega + 1];
    for bar in barcode.bars(dim) {
        for (v, slot) in counts.iter_mut().enumerate() {
            let v = v as f64;
            if bar.birth <= v && (bar.essential || v < bar.death) {
                *slot += 1.0;
            }
        }
    }
    counts
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample standard deviation; zero for fewer than two values.
pub(crate) fn sample_std(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    let ss: f64 = xs.iter().map(|x| (x - m) * (x - m)).sum();
    (ss / (xs.len() - 1) as f64).sqrt()
}

fn median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

/// `[mean, std, median]` of birth, death and lifespan, then the bar count.
/// Essential deaths are already clipped to the threshold in the barcode.
pub fn barcode_stats(barcode: &PersistenceBarcode, dim: usize) -> Vec<f64> {
    let bars = barcode.bars(dim);
    if bars.is_empty() {
        return vec![0.0; BS_LEN];
    }
    let births: Vec<f64> = bars.iter().map(|b| b.birth).collect();
    let deaths: Vec<f64> = bars.iter().map(|b| b.death.min(barcode.threshold_used)).collect();
    let lives: Vec<f64> = births.iter().zip(&deaths).map(|(b, d)| d - b).collect();
    let mut out = Vec::with_capacity(BS_LEN);
    for xs in [&births, &deaths, &lives] {
        out.extend([mean(xs), sample_std(xs), median(xs)]);
    }
    out.push(bars.len() as f64);
    out
}

/// Feature vector of a barcode-derived kind.
pub fn barcode_feature(
    barcode: &PersistenceBarcode,
    kind: FeatureKind,
    cfg: &BettiBinningConfig,
) -> Option<Vec<f64>> {
    match kind {
        FeatureKind::Mciq => None,
        FeatureKind::BbD0 => Some(betti_binning(barcode, 0, cfg)),
        FeatureKind::BbD1 => Some(betti_binning(barcode, 1, cfg)),
        FeatureKind::BsD0 => Some(barcode_stats(barcode, 0)),
        FeatureKind::BsD1 => Some(barcode_stats(barcode, 1)),
    }
}

/// Writes the shared feature CSV: `sample_id,label,kind,v0,...`. Rows shorter
/// than the widest row are padded with empty fields.
pub fn write_feature_csv<W: Write>(rows: &[FeatureVector], out: W) -> Result<(), FeatureError> {
    let width = rows.iter().map(|r| r.values.len()).max().unwrap_or(0);
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["sample_id".to_string(), "label".into(), "kind".into()];
    header.extend((0..width).map(|i| format!("v{i}")));
    w.write_record(&header)?;
    for row in rows {
        let mut rec = vec![
            row.sample_id.clone(),
            row.label.to_string(),
            row.kind.to_string(),
        ];
        rec.extend(row.values.iter().map(|v| v.to_string()));
        rec.resize(3 + width, String::new());
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_feature_csv<R: Read>(input: R) -> Result<Vec<FeatureVector>, FeatureError> {
    let mut r = csv::ReaderBuilder::new().flexible(true).from_reader(input);
    let header = r.headers()?.clone();
    if header.len() < 3 || &header[0] != "sample_id" || &header[1] != "label" || &header[2] != "kind" {
        return Err(FeatureError::Parse {
            line: 1,
            msg: "expected header sample_id,label,kind,v0,...".into(),
        });
    }
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let line = i + 2;
        if rec.len() < 3 {
            return Err(FeatureError::Parse {
                line,
                msg: "too few fields".into(),
            });
        }
        let label: Label = rec[1].parse()?;
        let kind: FeatureKind = rec[2].parse()?;
        let values = rec
            .iter()
            .skip(3)
            .take_while(|f| !f.is_empty())
            .map(|f| {
                f.parse::<f64>().map_err(|e| FeatureError::Parse {
                    line,
                    msg: format!("bad value `{f}`: {e}"),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(FeatureVector::new(kind, values, &rec[0], label));
    }
    Ok(rows)
}
