//! Multi-characteristic image quality (MCIQ) features.
//!
//! The image is cut into a 6x6 block grid. For each of the 630 unordered block
//! pairs five similarity indices are computed (correlation, luminance,
//! contrast, kurtosis, skewness), each histogrammed into 10 equal bins over
//! [-1, 1]. The five histograms, in that order, form the 50-value vector.
//!
//! Skewness and kurtosis are normalized by `(n - 1) * sigma^k` with the
//! sample (n - 1) variance. An index whose denominator vanishes, or whose
//! inputs are undefined because a block is constant, is mapped to 0.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::image_io::{partition_blocks, GrayImage, ImageError, GRID_SIDE};

pub const BLOCKS: usize = GRID_SIDE * GRID_SIDE;
pub const PAIRS: usize = BLOCKS * (BLOCKS - 1) / 2;
pub const BINS: usize = 10;

#[derive(Debug, Error)]
pub enum MciqError {
    #[error("block has {0} pixels; at least 2 are needed")]
    BlockTooSmall(usize),
    #[error("blocks differ in size ({0} vs {1})")]
    SizeMismatch(usize, usize),
    #[error(transparent)]
    Image(#[from] ImageError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Characteristic {
    Correlation,
    Luminance,
    Contrast,
    Kurtosis,
    Skewness,
}

impl Characteristic {
    pub const ORDER: [Characteristic; 5] = [
        Characteristic::Correlation,
        Characteristic::Luminance,
        Characteristic::Contrast,
        Characteristic::Kurtosis,
        Characteristic::Skewness,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Characteristic::Correlation => "correlation",
            Characteristic::Luminance => "luminance",
            Characteristic::Contrast => "contrast",
            Characteristic::Kurtosis => "kurtosis",
            Characteristic::Skewness => "skewness",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockStats {
    pub mean: f64,
    pub variance: f64,
    pub std: f64,
    /// `None` for constant blocks.
    pub skewness: Option<f64>,
    /// `None` for constant blocks.
    pub kurtosis: Option<f64>,
}

pub fn block_stats(block: &[u8]) -> Result<BlockStats, MciqError> {
    let n = block.len();
    if n < 2 {
        return Err(MciqError::BlockTooSmall(n));
    }
    let mean = block.iter().map(|&p| f64::from(p)).sum::<f64>() / n as f64;
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for &p in block {
        let d = f64::from(p) - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    let dof = (n - 1) as f64;
    let variance = m2 / dof;
    let std = variance.sqrt();
    let (skewness, kurtosis) = if std > 0.0 {
        (
            Some(m3 / (dof * std.powi(3))),
            Some(m4 / (dof * variance * variance)),
        )
    } else {
        (None, None)
    };
    Ok(BlockStats {
        mean,
        variance,
        std,
        skewness,
        kurtosis,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairIndices {
    pub correlation: f64,
    pub luminance: f64,
    pub contrast: f64,
    pub kurtosis: f64,
    pub skewness: f64,
}

impl PairIndices {
    pub fn get(&self, c: Characteristic) -> f64 {
        match c {
            Characteristic::Correlation => self.correlation,
            Characteristic::Luminance => self.luminance,
            Characteristic::Contrast => self.contrast,
            Characteristic::Kurtosis => self.kurtosis,
            Characteristic::Skewness => self.skewness,
        }
    }
}

/// `2ab / (a^2 + b^2)`, or 0 when the denominator vanishes.
fn similarity(a: f64, b: f64) -> f64 {
    let den = a * a + b * b;
    if den > 0.0 {
        2.0 * a * b / den
    } else {
        0.0
    }
}

fn similarity_opt(a: Option<f64>, b: Option<f64>) -> f64 {
    match (a, b) {
        (Some(a), Some(b)) => similarity(a, b),
        _ => 0.0,
    }
}

/// Pixels are paired positionally (row-major flattening) for the covariance.
pub fn pair_indices(
    x: &[u8],
    xs: &BlockStats,
    y: &[u8],
    ys: &BlockStats,
) -> Result<PairIndices, MciqError> {
    if x.len() != y.len() {
        return Err(MciqError::SizeMismatch(x.len(), y.len()));
    }
    if x.len() < 2 {
        return Err(MciqError::BlockTooSmall(x.len()));
    }
    let correlation = if xs.std > 0.0 && ys.std > 0.0 {
        let cov = x
            .iter()
            .zip(y)
            .map(|(&a, &b)| (f64::from(a) - xs.mean) * (f64::from(b) - ys.mean))
            .sum::<f64>()
            / (x.len() - 1) as f64;
        cov / (xs.std * ys.std)
    } else {
        0.0
    };
    Ok(PairIndices {
        correlation,
        luminance: similarity(xs.mean, ys.mean),
        contrast: similarity(xs.std, ys.std),
        kurtosis: similarity_opt(xs.kurtosis, ys.kurtosis),
        skewness: similarity_opt(xs.skewness, ys.skewness),
    })
}

/// Bin of a value on [-1, 1]: bin k covers [-1 + 0.2k, -1 + 0.2(k+1)), the
/// last bin is closed so 1.0 lands in bin 9. Rounding excursions just outside
/// the range are clamped.
pub fn bin_index(value: f64) -> usize {
    // (k - 5) / 5 is the correctly rounded decimal edge
    let edge = |k: usize| (k as f64 - 5.0) / 5.0;
    let guess = ((value + 1.0) * 5.0).floor();
    let mut k = if guess.is_nan() || guess < 0.0 {
        0
    } else {
        (guess as usize).min(BINS - 1)
    };
    // the scaled guess can be off by one right at a bin edge
    if k > 0 && value < edge(k) {
        k -= 1;
    } else if k + 1 < BINS && value >= edge(k + 1) {
        k += 1;
    }
    k
}

/// All pair indices of the 36 blocks, upper triangle in row-major pair order.
pub fn block_pair_indices(img: &GrayImage) -> Result<Vec<((usize, usize), PairIndices)>, MciqError> {
    let grid = partition_blocks(img)?;
    let blocks = grid.blocks();
    let stats = blocks
        .iter()
        .map(|b| block_stats(b))
        .collect::<Result<Vec<_>, _>>()?;
    let constant = stats.iter().filter(|s| s.std == 0.0).count();
    if constant > 0 {
        log::debug!("{constant} constant block(s); their degenerate indices map to 0");
    }
    let mut out = Vec::with_capacity(PAIRS);
    for i in 0..BLOCKS {
        for j in i + 1..BLOCKS {
            out.push((
                (i, j),
                pair_indices(&blocks[i], &stats[i], &blocks[j], &stats[j])?,
            ));
        }
    }
    Ok(out)
}

/// 50 raw counts: five 10-bin histograms in [`Characteristic::ORDER`].
pub fn mciq_vector(img: &GrayImage) -> Result<Vec<f64>, MciqError> {
    let pairs = block_pair_indices(img)?;
    let mut hist = vec![0.0; BINS * Characteristic::ORDER.len()];
    for (_, idx) in &pairs {
        for (seg, &c) in Characteristic::ORDER.iter().enumerate() {
            hist[seg * BINS + bin_index(idx.get(c))] += 1.0;
        }
    }
    Ok(hist)
}

/// Symmetric 36x36 index matrix of one characteristic with unit diagonal.
pub fn index_matrix(img: &GrayImage, c: Characteristic) -> Result<Vec<Vec<f64>>, MciqError> {
    let mut m = vec![vec![0.0; BLOCKS]; BLOCKS];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for ((i, j), idx) in block_pair_indices(img)? {
        let v = idx.get(c);
        m[i][j] = v;
        m[j][i] = v;
    }
    Ok(m)
}

pub fn index_matrix_csv(matrix: &[Vec<f64>]) -> String {
    let mut out = String::new();
    for row in matrix {
        let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn stats_ramp() {
        let s = block_stats(&[1, 2, 3]).unwrap();
        assert!(close(s.mean, 2.0));
        assert!(close(s.variance, 1.0));
        assert!(close(s.std, 1.0));
        assert!(close(s.skewness.unwrap(), 0.0));
        assert!(close(s.kurtosis.unwrap(), 1.0));
    }

    #[test]
    fn stats_constant() {
        let s = block_stats(&[5, 5, 5, 5]).unwrap();
        assert_eq!((s.mean, s.variance), (5.0, 0.0));
        assert!(s.skewness.is_none() && s.kurtosis.is_none());
    }

    #[test]
    fn stats_spike() {
        let s = block_stats(&[0, 0, 0, 4]).unwrap();
        assert!(close(s.mean, 1.0));
        // deviations -1, -1, -1, 3: (1 + 1 + 1 + 9) / 3
        assert!(close(s.variance, 4.0));
    }

    #[test]
    fn stats_too_small() {
        assert!(matches!(block_stats(&[1]), Err(MciqError::BlockTooSmall(1))));
    }

    fn pair(x: &[u8], y: &[u8]) -> PairIndices {
        pair_indices(x, &block_stats(x).unwrap(), y, &block_stats(y).unwrap()).unwrap()
    }

    #[test]
    fn identical_blocks() {
        let p = pair(&[1, 2, 3], &[1, 2, 3]);
        assert!(close(p.correlation, 1.0));
        assert!(close(p.luminance, 1.0));
        assert!(close(p.contrast, 1.0));
        assert!(close(p.kurtosis, 1.0));
        // both skews are exactly zero
        assert_eq!(p.skewness, 0.0);
    }

    #[test]
    fn identical_skewed_blocks_have_unit_skew_index() {
        let p = pair(&[0, 0, 0, 4], &[0, 0, 0, 4]);
        assert!(close(p.skewness, 1.0));
    }

    #[test]
    fn reversed_ramp() {
        let p = pair(&[1, 2, 3], &[3, 2, 1]);
        assert!(close(p.correlation, -1.0));
        assert!(close(p.luminance, 1.0));
        assert!(close(p.contrast, 1.0));
        assert!(close(p.kurtosis, 1.0));
        assert_eq!(p.skewness, 0.0);
    }

    #[test]
    fn constant_against_ramp() {
        let p = pair(&[5, 5, 5], &[1, 2, 3]);
        assert_eq!(p.correlation, 0.0);
        assert!(close(p.luminance, 20.0 / 29.0));
        assert_eq!(p.contrast, 0.0);
        assert_eq!(p.kurtosis, 0.0);
        assert_eq!(p.skewness, 0.0);
    }

    #[test]
    fn size_mismatch() {
        let a = block_stats(&[1, 2]).unwrap();
        let b = block_stats(&[1, 2, 3]).unwrap();
        assert!(matches!(
            pair_indices(&[1, 2], &a, &[1, 2, 3], &b),
            Err(MciqError::SizeMismatch(2, 3))
        ));
    }

    #[test]
    fn bins() {
        assert_eq!(bin_index(-1.0), 0);
        assert_eq!(bin_index(-0.81), 0);
        assert_eq!(bin_index(-0.8), 1);
        assert_eq!(bin_index(0.0), 5);
        assert_eq!(bin_index(-0.6), 2);
        assert_eq!(bin_index(0.6), 8);
        for k in 0..10 {
            assert_eq!(bin_index((k as f64 - 5.0) / 5.0), k);
        }
        assert_eq!(bin_index(0.99), 9);
        assert_eq!(bin_index(1.0), 9);
        assert_eq!(bin_index(1.0 + 1e-15), 9);
        assert_eq!(bin_index(-1.0 - 1e-15), 0);
    }

    fn tiled_image() -> GrayImage {
        GrayImage::from_fn(276, 270, |r, c| {
            let (br, bc) = (r % 46, c % 45);
            ((br * 7 + bc * 3 + (br * bc) % 11) % 200) as u8
        })
    }

    #[test]
    fn tiled_image_concentrates_in_last_bin() {
        let v = mciq_vector(&tiled_image()).unwrap();
        assert_eq!(v.len(), 50);
        for seg in 0..4 {
            assert_eq!(v[seg * 10 + 9], 630.0, "segment {seg}: {:?}", &v[seg * 10..seg * 10 + 10]);
        }
        for seg in 0..5 {
            assert_eq!(v[seg * 10..seg * 10 + 10].iter().sum::<f64>(), 630.0);
        }
    }

    #[test]
    fn index_matrix_shape() {
        let m = index_matrix(&tiled_image(), Characteristic::Luminance).unwrap();
        assert_eq!(m.len(), 36);
        for i in 0..36 {
            assert_eq!(m[i][i], 1.0);
            for j in 0..36 {
                assert_eq!(m[i][j], m[j][i]);
            }
        }
        assert_eq!(index_matrix_csv(&m).lines().count(), 36);
    }

    #[test]
    fn too_small_image() {
        let img = GrayImage::filled(5, 60, 1);
        assert!(matches!(mciq_vector(&img), Err(MciqError::Image(_))));
    }
}
