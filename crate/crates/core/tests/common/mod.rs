#![allow(dead_code)]

use morphtda::persistence::Bar;
use morphtda::{FeatureKind, FeatureVector, GrayImage, Label, PointCloud, PersistenceBarcode};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n` distinct points on a `side x side` integer grid.
pub fn random_cloud(rng: &mut impl Rng, n: usize, side: u32) -> PointCloud {
    let mut pts = Vec::with_capacity(n);
    while pts.len() < n {
        let p = (rng.gen_range(0..side), rng.gen_range(0..side));
        if !pts.contains(&p) {
            pts.push(p);
        }
    }
    PointCloud::new(pts, (side as usize, side as usize))
}

pub fn random_image(rng: &mut impl Rng, h: usize, w: usize, max: u8) -> GrayImage {
    GrayImage::from_fn(h, w, |_, _| rng.gen_range(0..=max))
}

/// Bars of one dimension as sorted (birth, death, essential) triples.
pub fn sorted_bars(bars: &[Bar]) -> Vec<(f64, f64, bool)> {
    let mut v: Vec<_> = bars.iter().map(|b| (b.birth, b.death, b.essential)).collect();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}

/// Multiset equality of both dimensions, up to `tol` on every endpoint.
pub fn same_barcode(a: &PersistenceBarcode, b: &PersistenceBarcode, tol: f64) -> Result<(), String> {
    for dim in 0..=1 {
        let (x, y) = (sorted_bars(a.bars(dim)), sorted_bars(b.bars(dim)));
        if x.len() != y.len() {
            return Err(format!("dim {dim}: {} bars vs {}", x.len(), y.len()));
        }
        for (p, q) in x.iter().zip(&y) {
            if (p.0 - q.0).abs() > tol || (p.1 - q.1).abs() > tol || p.2 != q.2 {
                return Err(format!("dim {dim}: {p:?} vs {q:?}"));
            }
        }
    }
    Ok(())
}

/// Edge lengths of a minimum spanning tree by dense Prim, sorted.
pub fn prim_mst_lengths(points: &[(u32, u32)]) -> Vec<f64> {
    let n = points.len();
    let dist = |i: usize, j: usize| {
        let dr = f64::from(points[i].0) - f64::from(points[j].0);
        let dc = f64::from(points[i].1) - f64::from(points[j].1);
        (dr * dr + dc * dc).sqrt()
    };
    let mut in_tree = vec![false; n];
    let mut best = vec![f64::INFINITY; n];
    let mut out = Vec::with_capacity(n.saturating_sub(1));
    best[0] = 0.0;
    for step in 0..n {
        let u = (0..n)
            .filter(|&i| !in_tree[i])
            .min_by(|&a, &b| best[a].partial_cmp(&best[b]).unwrap())
            .unwrap();
        in_tree[u] = true;
        if step > 0 {
            out.push(best[u]);
        }
        for v in 0..n {
            if !in_tree[v] {
                best[v] = best[v].min(dist(u, v));
            }
        }
    }
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out
}

/// Per-pixel scan that spells out each neighbourhood as a bit string, read
/// clockwise from the top-left neighbour.
pub fn naive_landmarks(img: &GrayImage, target: u8) -> Vec<(u32, u32)> {
    let target = format!("{target:08b}");
    let mut out = Vec::new();
    if img.height() < 3 || img.width() < 3 {
        return out;
    }
    for r in 1..img.height() - 1 {
        for c in 1..img.width() - 1 {
            let center = img.get(r, c);
            let ring = [
                img.get(r - 1, c - 1),
                img.get(r - 1, c),
                img.get(r - 1, c + 1),
                img.get(r, c + 1),
                img.get(r + 1, c + 1),
                img.get(r + 1, c),
                img.get(r + 1, c - 1),
                img.get(r, c - 1),
            ];
            let bits: String = ring.iter().map(|&n| if n >= center { '1' } else { '0' }).collect();
            if bits == target {
                out.push((r as u32, c as u32));
            }
        }
    }
    out
}

/// Points in [-1, 1]^2 labelled by the sign of `x^3 - y`, keeping only those
/// at least `margin` away from the boundary in function value.
pub fn cubic_dataset(n: usize, margin: f64, seed: u64) -> Vec<FeatureVector> {
    let mut r = rng(seed);
    let mut rows = Vec::with_capacity(n);
    while rows.len() < n {
        let x: f64 = r.gen_range(-1.0..1.0);
        let y: f64 = r.gen_range(-1.0..1.0);
        let f = x.powi(3) - y;
        if f.abs() < margin {
            continue;
        }
        let label = if f > 0.0 { Label::Morph } else { Label::Genuine };
        rows.push(FeatureVector::new(
            FeatureKind::BsD0,
            vec![x, y],
            format!("p{}", rows.len()),
            label,
        ));
    }
    rows
}

/// Two Gaussian blobs in `dim` dimensions centred at `-shift` and `+shift`.
pub fn gaussian_blobs(n_per_class: usize, dim: usize, shift: f64, seed: u64) -> Vec<FeatureVector> {
    let mut r = rng(seed);
    let mut gauss = move || {
        let u1: f64 = r.gen_range(f64::EPSILON..1.0);
        let u2: f64 = r.gen();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    };
    let mut rows = Vec::new();
    for (label, centre) in [(Label::Genuine, -shift), (Label::Morph, shift)] {
        for i in 0..n_per_class {
            let values = (0..dim).map(|_| centre + gauss()).collect();
            rows.push(FeatureVector::new(
                FeatureKind::BsD0,
                values,
                format!("{}{i}", label.as_str()),
                label,
            ));
        }
    }
    rows
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

pub fn sample_std(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
}
