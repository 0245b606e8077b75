mod common;

use common::*;
use morphtda::featurize::{barcode_stats, betti_binning, read_feature_csv, write_feature_csv, BettiBinningConfig};
use morphtda::persistence::{vr_barcode, Bar, FiltrationParams, PersistenceBarcode};
use morphtda::{FeatureKind, FeatureVector, Label, PointCloud};
use proptest::prelude::*;
use rand::seq::SliceRandom;

fn bar() -> impl Strategy<Value = Bar> {
    prop_oneof![
        4 => (0.0f64..20.0, 0.0f64..10.0).prop_map(|(b, l)| Bar::finite(b, (b + l).min(25.0))),
        1 => (0.0f64..20.0).prop_map(|b| Bar::essential(b, 25.0)),
    ]
}

fn barcode() -> impl Strategy<Value = PersistenceBarcode> {
    (
        prop::collection::vec(bar(), 0..30),
        prop::collection::vec(bar(), 0..30),
    )
        .prop_map(|(mut dim0, dim1)| {
            for b in &mut dim0 {
                b.birth = 0.0;
            }
            PersistenceBarcode {
                threshold_used: 25.0,
                dim0,
                dim1,
            }
        })
}

fn cloud() -> impl Strategy<Value = PointCloud> {
    prop::collection::btree_set((0u32..40, 0u32..40), 1..60)
        .prop_map(|pts| PointCloud::new(pts.into_iter().collect(), (40, 40)))
}

proptest! {
    #[test]
    fn bar_order_is_irrelevant(bc in barcode(), seed in any::<u64>(), omega in 1usize..40) {
        let mut shuffled = bc.clone();
        let mut r = rng(seed);
        shuffled.dim0.shuffle(&mut r);
        shuffled.dim1.shuffle(&mut r);
        let cfg = BettiBinningConfig { omega };
        for dim in 0..=1 {
            prop_assert_eq!(betti_binning(&bc, dim, &cfg), betti_binning(&shuffled, dim, &cfg));
            let (a, b) = (barcode_stats(&bc, dim), barcode_stats(&shuffled, dim));
            for (x, y) in a.iter().zip(&b) {
                prop_assert!((x - y).abs() <= 1e-9 * x.abs().max(1.0));
            }
        }
    }

    #[test]
    fn component_curve_starts_at_cloud_size_and_decreases(pc in cloud()) {
        let bc = vr_barcode(&pc, &FiltrationParams { max_dim: 0, threshold: 25.0 }).unwrap();
        let bb = betti_binning(&bc, 0, &BettiBinningConfig::default());
        prop_assert_eq!(bb.len(), 25);
        prop_assert_eq!(bb[0], pc.len() as f64);
        prop_assert!(bb.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(bb.iter().all(|&v| v >= 1.0));
    }

    #[test]
    fn statistics_layout(bc in barcode()) {
        for dim in 0..=1 {
            let s = barcode_stats(&bc, dim);
            prop_assert_eq!(s.len(), 10);
            prop_assert!(s.iter().all(|v| v.is_finite()));
            prop_assert_eq!(s[9], bc.bars(dim).len() as f64);
        }
        let s0 = barcode_stats(&bc, 0);
        prop_assert_eq!(&s0[..3], &[0.0, 0.0, 0.0][..]);
    }

    #[test]
    fn bar_count_matches_curve_at_birth_line(pc in cloud()) {
        // All components are born at 0, so the line-0 count is the bar count.
        let bc = vr_barcode(&pc, &FiltrationParams { max_dim: 0, threshold: 25.0 }).unwrap();
        prop_assert_eq!(barcode_stats(&bc, 0)[9], betti_binning(&bc, 0, &BettiBinningConfig::default())[0]);
    }

    #[test]
    fn feature_csv_round_trips(values in prop::collection::vec(prop::collection::vec(-1e6f64..1e6, 10), 1..8)) {
        let rows: Vec<FeatureVector> = values
            .into_iter()
            .enumerate()
            .map(|(i, v)| {
                let label = if i % 2 == 0 { Label::Genuine } else { Label::Morph };
                FeatureVector::new(FeatureKind::BsD1, v, format!("img{i}"), label)
            })
            .collect();
        let mut buf = Vec::new();
        write_feature_csv(&rows, &mut buf).unwrap();
        prop_assert_eq!(read_feature_csv(buf.as_slice()).unwrap(), rows);
    }
}
