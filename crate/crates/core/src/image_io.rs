//! Grayscale image loading, resizing and block partitioning.
//!
//! Only binary PGM (P5) and 8-bit PNG (gray or RGB) are accepted. Color input
//! is reduced to luminance with the Rec. 601 weights, rounded to the nearest
//! integer.

use std::fs;
use std::io::Cursor;
use std::path::Path;

use image::{DynamicImage, ImageFormat, ImageReader};
use thiserror::Error;

/// Canonical face height after resizing.
pub const CANONICAL_HEIGHT: usize = 280;
/// Canonical face width after resizing.
pub const CANONICAL_WIDTH: usize = 270;
/// Blocks per side of the quality grid.
pub const GRID_SIDE: usize = 6;

#[derive(Debug, Error)]
pub enum ImageError {
    #[error("file not found: {0}")]
    FileNotFound(String),
    #[error("unsupported image format: {0}")]
    UnsupportedFormat(String),
    #[error("corrupt image: {0}")]
    CorruptImage(String),
    #[error("invalid resize target {0}x{1}: both dimensions must be at least 3")]
    InvalidTarget(usize, usize),
    #[error("image {height}x{width} is too small (need at least {min}x{min})")]
    ImageTooSmall {
        height: usize,
        width: usize,
        min: usize,
    },
    #[error("pixel buffer of length {len} does not match {height}x{width}")]
    DimensionMismatch {
        height: usize,
        width: usize,
        len: usize,
    },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

/// Single-channel 8-bit image stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    height: usize,
    width: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(height: usize, width: usize, pixels: Vec<u8>) -> Result<Self, ImageError> {
        if height == 0 || width == 0 || pixels.len() != height * width {
            return Err(ImageError::DimensionMismatch {
                height,
                width,
                len: pixels.len(),
            });
        }
        Ok(Self {
            height,
            width,
            pixels,
        })
    }

    pub fn filled(height: usize, width: usize, value: u8) -> Self {
        assert!(height > 0 && width > 0, "empty image");
        Self {
            height,
            width,
            pixels: vec![value; height * width],
        }
    }

    /// Builds an image by evaluating `f(row, col)` at every pixel.
    pub fn from_fn(height: usize, width: usize, mut f: impl FnMut(usize, usize) -> u8) -> Self {
        assert!(height > 0 && width > 0, "empty image");
        let mut pixels = Vec::with_capacity(height * width);
        for r in 0..height {
            for c in 0..width {
                pixels.push(f(r, c));
            }
        }
        Self {
            height,
            width,
            pixels,
        }
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.pixels[row * self.width + col]
    }

    pub fn row(&self, row: usize) -> &[u8] {
        &self.pixels[row * self.width..(row + 1) * self.width]
    }

    pub(crate) fn require_at_least(&self, min: usize) -> Result<(), ImageError> {
        if self.height < min || self.width < min {
            return Err(ImageError::ImageTooSmall {
                height: self.height,
                width: self.width,
                min,
            });
        }
        Ok(())
    }
}

/// Rec. 601 luma, rounded to the nearest integer.
pub fn luma(r: u8, g: u8, b: u8) -> u8 {
    let y = 0.299 * f64::from(r) + 0.587 * f64::from(g) + 0.114 * f64::from(b);
    y.round().clamp(0.0, 255.0) as u8
}

/// Loads a PGM (P5) or PNG file as grayscale.
pub fn load_grayscale(path: impl AsRef<Path>) -> Result<GrayImage, ImageError> {
    let path = path.as_ref();
    let bytes = match fs::read(path) {
        Ok(b) => b,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
            return Err(ImageError::FileNotFound(path.display().to_string()))
        }
        Err(e) => return Err(e.into()),
    };
    decode_grayscale(&bytes)
}

/// Decodes an in-memory PGM (P5) or PNG file as grayscale.
pub fn decode_grayscale(bytes: &[u8]) -> Result<GrayImage, ImageError> {
    let format = if bytes.starts_with(b"\x89PNG\r\n\x1a\n") {
        ImageFormat::Png
    } else if bytes.starts_with(b"P5") {
        ImageFormat::Pnm
    } else if bytes.len() < 2 {
        return Err(ImageError::CorruptImage("file too short".into()));
    } else {
        return Err(ImageError::UnsupportedFormat(
            "expected binary PGM (P5) or PNG".into(),
        ));
    };
    let decoded = ImageReader::with_format(Cursor::new(bytes), format)
        .decode()
        .map_err(|e| match e {
            image::ImageError::Unsupported(u) => ImageError::UnsupportedFormat(u.to_string()),
            other => ImageError::CorruptImage(other.to_string()),
        })?;
    let (w, h) = (decoded.width() as usize, decoded.height() as usize);
    let pixels = match decoded {
        DynamicImage::ImageLuma8(buf) => buf.into_raw(),
        DynamicImage::ImageRgb8(buf) => buf
            .into_raw()
            .chunks_exact(3)
            .map(|p| luma(p[0], p[1], p[2]))
            .collect(),
        other => {
            return Err(ImageError::UnsupportedFormat(format!(
                "color type {:?}; only 8-bit gray or RGB is accepted",
                other.color()
            )))
        }
    };
    GrayImage::new(h, w, pixels)
}

/// Writes a binary PGM (P5).
pub fn encode_pgm(img: &GrayImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", img.width, img.height).into_bytes();
    out.extend_from_slice(&img.pixels);
    out
}

/// Saves as PNG when the extension is `png`, otherwise as binary PGM.
pub fn save_grayscale(img: &GrayImage, path: impl AsRef<Path>) -> Result<(), ImageError> {
    let path = path.as_ref();
    let is_png = path
        .extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("png"));
    if is_png {
        let buf = image::GrayImage::from_raw(img.width as u32, img.height as u32, img.pixels.clone())
            .expect("buffer length checked at construction");
        buf.save_with_format(path, ImageFormat::Png)
            .map_err(|e| ImageError::Io(std::io::Error::other(e)))?;
    } else {
        fs::write(path, encode_pgm(img))?;
    }
    Ok(())
}

/// Corner-aligned bilinear resize: output corners sample input corners exactly.
pub fn resize_bilinear(
    img: &GrayImage,
    target_h: usize,
    target_w: usize,
) -> Result<GrayImage, ImageError> {
    if target_h < 3 || target_w < 3 {
        return Err(ImageError::InvalidTarget(target_h, target_w));
    }
    let rows: Vec<(usize, usize, f64)> = (0..target_h)
        .map(|i| source_coord(i, target_h, img.height))
        .collect();
    let cols: Vec<(usize, usize, f64)> = (0..target_w)
        .map(|j| source_coord(j, target_w, img.width))
        .collect();
    let mut pixels = Vec::with_capacity(target_h * target_w);
    for &(r0, r1, fr) in &rows {
        let top = img.row(r0);
        let bottom = img.row(r1);
        for &(c0, c1, fc) in &cols {
            let t = f64::from(top[c0]) * (1.0 - fc) + f64::from(top[c1]) * fc;
            let b = f64::from(bottom[c0]) * (1.0 - fc) + f64::from(bottom[c1]) * fc;
            let v = t * (1.0 - fr) + b * fr;
            pixels.push(v.round().clamp(0.0, 255.0) as u8);
        }
    }
    GrayImage::new(target_h, target_w, pixels)
}

/// Maps output index `i` of `dst` samples onto the `src` grid; returns the two
/// neighbouring source indices and the fractional weight of the second.
fn source_coord(i: usize, dst: usize, src: usize) -> (usize, usize, f64) {
    if src == 1 {
        return (0, 0, 0.0);
    }
    let num = i * (src - 1);
    let den = dst - 1;
    let lo = num / den;
    let rem = num % den;
    if rem == 0 {
        (lo, lo, 0.0)
    } else {
        (lo, lo + 1, rem as f64 / den as f64)
    }
}

/// Resizes to 280x270 unless the image already has that size.
pub fn to_canonical(img: &GrayImage) -> Result<GrayImage, ImageError> {
    if img.height == CANONICAL_HEIGHT && img.width == CANONICAL_WIDTH {
        return Ok(img.clone());
    }
    resize_bilinear(img, CANONICAL_HEIGHT, CANONICAL_WIDTH)
}

/// The 6x6 grid of equally sized blocks, each stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockGrid {
    blocks: Vec<Vec<u8>>,
    block_height: usize,
    block_width: usize,
}

impl BlockGrid {
    pub fn blocks(&self) -> &[Vec<u8>] {
        &self.blocks
    }

    pub fn block(&self, grid_row: usize, grid_col: usize) -> &[u8] {
        &self.blocks[grid_row * GRID_SIDE + grid_col]
    }

    pub fn block_height(&self) -> usize {
        self.block_height
    }

    pub fn block_width(&self) -> usize {
        self.block_width
    }
}

/// Cuts the image into 36 blocks of `floor(h/6) x floor(w/6)`, discarding
/// the trailing remainder rows and columns.
pub fn partition_blocks(img: &GrayImage) -> Result<BlockGrid, ImageError> {
    img.require_at_least(GRID_SIDE)?;
    let bh = img.height / GRID_SIDE;
    let bw = img.width / GRID_SIDE;
    let mut blocks = Vec::with_capacity(GRID_SIDE * GRID_SIDE);
    for gr in 0..GRID_SIDE {
        for gc in 0..GRID_SIDE {
            let mut block = Vec::with_capacity(bh * bw);
            for r in gr * bh..(gr + 1) * bh {
                block.extend_from_slice(&img.row(r)[gc * bw..(gc + 1) * bw]);
            }
            blocks.push(block);
        }
    }
    Ok(BlockGrid {
        blocks,
        block_height: bh,
        block_width: bw,
    })
}
