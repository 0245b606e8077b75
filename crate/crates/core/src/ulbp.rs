//! Local binary pattern codes and texture landmark extraction.
//!
//! Codes are written MSB first with the neighbours visited clockwise from the
//! top-left corner: TL, T, TR, R, BR, B, BL, L. A neighbour that is greater
//! than or equal to the centre sets its bit.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::image_io::{GrayImage, ImageError};

/// Fourth rotation of the four-ones uniform pattern.
pub const G4_ROTATION_4: u8 = 0b0111_1000;

/// Clockwise Moore neighbourhood starting at the top-left, as (drow, dcol).
pub const CLOCKWISE_FROM_TOP_LEFT: [(i8, i8); 8] = [
    (-1, -1),
    (-1, 0),
    (-1, 1),
    (0, 1),
    (1, 1),
    (1, 0),
    (1, -1),
    (0, -1),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LbpConfig {
    pub target_code: u8,
    pub neighbor_order: [(i8, i8); 8],
}

impl Default for LbpConfig {
    fn default() -> Self {
        Self {
            target_code: G4_ROTATION_4,
            neighbor_order: CLOCKWISE_FROM_TOP_LEFT,
        }
    }
}

impl LbpConfig {
    /// Config for another target code; rejects non-uniform codes.
    pub fn with_target(code: u8) -> Option<Self> {
        is_uniform(code).then(|| Self {
            target_code: code,
            ..Self::default()
        })
    }

    pub fn is_valid(&self) -> bool {
        let mut seen = self.neighbor_order.to_vec();
        seen.sort_unstable();
        let mut expected = CLOCKWISE_FROM_TOP_LEFT.to_vec();
        expected.sort_unstable();
        seen == expected && circular_transitions(self.target_code) == 2
    }
}

/// Integer landmark coordinates together with the image they came from.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PointCloud {
    pub points: Vec<(u32, u32)>,
    pub source_dims: (usize, usize),
}

impl PointCloud {
    pub fn new(points: Vec<(u32, u32)>, source_dims: (usize, usize)) -> Self {
        Self {
            points,
            source_dims,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Writes the `row,col` CSV form.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("row,col\n");
        for (r, c) in &self.points {
            out.push_str(&format!("{r},{c}\n"));
        }
        out
    }
}

/// Code of a 3x3 patch given row-major.
pub fn lbp_code(patch: &[[u8; 3]; 3], cfg: &LbpConfig) -> u8 {
    let center = patch[1][1];
    cfg.neighbor_order.iter().fold(0u8, |code, &(dr, dc)| {
        let v = patch[(1 + dr) as usize][(1 + dc) as usize];
        (code << 1) | u8::from(v >= center)
    })
}

/// Number of 0/1 changes walking the 8 bits circularly.
pub fn circular_transitions(code: u8) -> u32 {
    (code ^ code.rotate_left(1)).count_ones()
}

/// At most two circular transitions.
pub fn is_uniform(code: u8) -> bool {
    circular_transitions(code) <= 2
}

fn code_at(img: &GrayImage, row: usize, col: usize, cfg: &LbpConfig) -> u8 {
    let center = img.get(row, col);
    cfg.neighbor_order.iter().fold(0u8, |code, &(dr, dc)| {
        let v = img.get(
            (row as isize + dr as isize) as usize,
            (col as isize + dc as isize) as usize,
        );
        (code << 1) | u8::from(v >= center)
    })
}

/// Full LBP code map of the interior pixels, `(h-2) x (w-2)` row-major.
pub fn code_map(img: &GrayImage, cfg: &LbpConfig) -> Result<Vec<u8>, ImageError> {
    img.require_at_least(3)?;
    let (h, w) = (img.height(), img.width());
    Ok((1..h - 1)
        .flat_map(|r| (1..w - 1).map(move |c| (r, c)))
        .map(|(r, c)| code_at(img, r, c, cfg))
        .collect())
}

/// Interior pixels whose code equals `cfg.target_code`, in raster order.
/// Border pixels have no full neighbourhood and are skipped.
pub fn extract_landmarks(img: &GrayImage, cfg: &LbpConfig) -> Result<PointCloud, ImageError> {
    img.require_at_least(3)?;
    let (h, w) = (img.height(), img.width());
    let points: Vec<(u32, u32)> = (1..h - 1)
        .into_par_iter()
        .flat_map_iter(|r| {
            (1..w - 1)
                .filter(move |&c| code_at(img, r, c, cfg) == cfg.target_code)
                .map(move |c| (r as u32, c as u32))
        })
        .collect();
    Ok(PointCloud::new(points, (h, w)))
}
