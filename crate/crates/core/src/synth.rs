//! Desk-scale synthetic data: procedurally textured "faces" and alpha-blend
//! morphs of them. This is test plumbing for running the whole pipeline
//! without a face database; the blend is a plain pixel average and does not
//! attempt landmark-aligned morphing.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::image_io::{GrayImage, CANONICAL_HEIGHT, CANONICAL_WIDTH};

#[derive(Debug, Error, PartialEq)]
pub enum SynthError {
    #[error("alpha {0} is outside [0, 1]")]
    AlphaOutOfRange(f64),
    #[error("images differ in size: {0:?} vs {1:?}")]
    SizeMismatch((usize, usize), (usize, usize)),
}

/// `round(alpha * a + (1 - alpha) * b)` per pixel.
pub fn alpha_blend(a: &GrayImage, b: &GrayImage, alpha: f64) -> Result<GrayImage, SynthError> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(SynthError::AlphaOutOfRange(alpha));
    }
    if (a.height(), a.width()) != (b.height(), b.width()) {
        return Err(SynthError::SizeMismatch(
            (a.height(), a.width()),
            (b.height(), b.width()),
        ));
    }
    let pixels = a
        .pixels()
        .iter()
        .zip(b.pixels())
        .map(|(&pa, &pb)| {
            (alpha * f64::from(pa) + (1.0 - alpha) * f64::from(pb))
                .round()
                .clamp(0.0, 255.0) as u8
        })
        .collect();
    Ok(GrayImage::new(a.height(), a.width(), pixels).expect("same dims as inputs"))
}

/// 3x3 mean filter with edge replication.
pub fn box_blur3(img: &GrayImage) -> GrayImage {
    let (h, w) = (img.height(), img.width());
    GrayImage::from_fn(h, w, |r, c| {
        let mut sum = 0u32;
        for dr in -1isize..=1 {
            for dc in -1isize..=1 {
                let rr = (r as isize + dr).clamp(0, h as isize - 1) as usize;
                let cc = (c as isize + dc).clamp(0, w as isize - 1) as usize;
                sum += u32::from(img.get(rr, cc));
            }
        }
        ((f64::from(sum) / 9.0).round()) as u8
    })
}

fn gaussian(rng: &mut impl Rng) -> f64 {
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// A 280x270 face-like image: an elliptical shading ramp, a few dark and
/// bright blobs, oriented gratings and per-pixel sensor noise.
pub fn textured_face(seed: u64) -> GrayImage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (h, w) = (CANONICAL_HEIGHT as f64, CANONICAL_WIDTH as f64);
    let base = rng.gen_range(90.0..150.0);
    let cy = h * rng.gen_range(0.42..0.58);
    let cx = w * rng.gen_range(0.42..0.58);
    let ry = h * rng.gen_range(0.35..0.5);
    let rx = w * rng.gen_range(0.3..0.45);
    let blobs: Vec<(f64, f64, f64, f64)> = (0..rng.gen_range(4..8))
        .map(|_| {
            (
                rng.gen_range(0.0..h),
                rng.gen_range(0.0..w),
                rng.gen_range(6.0..30.0),
                rng.gen_range(-60.0..40.0),
            )
        })
        .collect();
    let gratings: Vec<(f64, f64, f64, f64)> = (0..3)
        .map(|_| {
            (
                rng.gen_range(0.05..0.6),
                rng.gen_range(0.0..std::f64::consts::PI),
                rng.gen_range(0.0..std::f64::consts::TAU),
                rng.gen_range(3.0..12.0),
            )
        })
        .collect();
    let noise = rng.gen_range(10.0..16.0);
    GrayImage::from_fn(CANONICAL_HEIGHT, CANONICAL_WIDTH, |r, c| {
        let (y, x) = (r as f64, c as f64);
        let e = ((y - cy) / ry).powi(2) + ((x - cx) / rx).powi(2);
        let mut v = base + 50.0 * (1.0 - e).max(-0.6);
        for &(by, bx, s, amp) in &blobs {
            let d2 = (y - by).powi(2) + (x - bx).powi(2);
            v += amp * (-d2 / (2.0 * s * s)).exp();
        }
        for &(freq, theta, phase, amp) in &gratings {
            v += amp * (freq * (x * theta.cos() + y * theta.sin()) + phase).sin();
        }
        v += noise * gaussian(&mut rng);
        v.round().clamp(0.0, 255.0) as u8
    })
}

/// Genuine images and blurred 50/50 blends of random genuine pairs.
pub fn morph_dataset(n_genuine: usize, n_morph: usize, seed: u64) -> (Vec<GrayImage>, Vec<GrayImage>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let genuine: Vec<GrayImage> = (0..n_genuine).map(|_| textured_face(rng.gen())).collect();
    let morphs = (0..n_morph)
        .map(|_| {
            let a = rng.gen_range(0..n_genuine);
            let mut b = rng.gen_range(0..n_genuine - 1);
            if b >= a {
                b += 1;
            }
            let blended = alpha_blend(&genuine[a], &genuine[b], 0.5).expect("valid alpha");
            box_blur3(&blended)
        })
        .collect();
    (genuine, morphs)
}
