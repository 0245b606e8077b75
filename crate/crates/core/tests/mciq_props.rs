use morphtda::mciq::{block_pair_indices, block_stats, mciq_vector, pair_indices, Characteristic, PAIRS};
use morphtda::GrayImage;
use proptest::prelude::*;

fn image_strategy(max: u8) -> impl Strategy<Value = GrayImage> {
    (12usize..80, 12usize..80).prop_flat_map(move |(h, w)| {
        prop::collection::vec(0..=max, h * w).prop_map(move |px| GrayImage::new(h, w, px).unwrap())
    })
}

fn block_pair() -> impl Strategy<Value = (Vec<u8>, Vec<u8>)> {
    (2usize..64).prop_flat_map(|n| {
        (
            prop::collection::vec(any::<u8>(), n),
            prop::collection::vec(any::<u8>(), n),
        )
    })
}

proptest! {
    #[test]
    fn segments_hold_every_pair(img in image_strategy(255)) {
        let v = mciq_vector(&img).unwrap();
        prop_assert_eq!(v.len(), 50);
        for seg in v.chunks(10) {
            prop_assert_eq!(seg.iter().sum::<f64>(), PAIRS as f64);
        }
    }

    #[test]
    fn indices_are_symmetric_and_bounded((x, y) in block_pair()) {
        let (sx, sy) = (block_stats(&x).unwrap(), block_stats(&y).unwrap());
        let xy = pair_indices(&x, &sx, &y, &sy).unwrap();
        let yx = pair_indices(&y, &sy, &x, &sx).unwrap();
        for c in Characteristic::ORDER {
            prop_assert_eq!(xy.get(c), yx.get(c), "{}", c.name());
            prop_assert!((-1.0..=1.0).contains(&xy.get(c)), "{} = {}", c.name(), xy.get(c));
        }
    }

    #[test]
    fn only_distinct_block_pairs_are_scored(img in image_strategy(255)) {
        let pairs = block_pair_indices(&img).unwrap();
        prop_assert_eq!(pairs.len(), PAIRS);
        prop_assert!(pairs.iter().all(|((i, j), _)| i < j));
    }

    #[test]
    fn brightness_shift_moves_only_luminance(img in image_strategy(200), c in 1u8..=55) {
        let brighter = GrayImage::from_fn(img.height(), img.width(), |r, col| img.get(r, col) + c);
        let a = block_pair_indices(&img).unwrap();
        let b = block_pair_indices(&brighter).unwrap();
        for ((_, p), (_, q)) in a.iter().zip(&b) {
            prop_assert!((p.correlation - q.correlation).abs() <= 1e-9);
            prop_assert!((p.contrast - q.contrast).abs() <= 1e-9);
        }
        let luminance_moved = a.iter().zip(&b).any(|((_, p), (_, q))| p.luminance != q.luminance);
        let flat = img.pixels().iter().all(|&v| v == img.pixels()[0]);
        prop_assert!(luminance_moved || flat);
    }
}
