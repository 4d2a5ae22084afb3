use pairperm_core::features::{landscape, persistence_image, ImageLayout, ImageWeight, LandscapeParams};
use pairperm_core::persistence::{PersistenceDiagram, PersistencePoint, PointKind};
use proptest::prelude::*;

fn arb_points(max: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((0.0f64..10.0, 0.0f64..5.0), 0..=max)
        .prop_map(|v| v.into_iter().map(|(b, l)| (b, b + l)).collect())
}

fn diagram(points: &[(f64, f64)]) -> PersistenceDiagram {
    PersistenceDiagram::new(points.iter().map(|&(b, d)| PersistencePoint::new(PointKind::Ord0, b, d)).collect())
}

const PARAMS: LandscapeParams = LandscapeParams { k_max: 4, bins: 50, lo: 0.0, hi: 15.0 };

proptest! {
    #[test]
    fn landscape_levels_are_ordered(pts in arb_points(10)) {
        let fv = landscape(&diagram(&pts), &PARAMS).unwrap();
        let n = PARAMS.bins;
        for k in 0..PARAMS.k_max {
            for i in 0..n {
                let v = fv.values[k * n + i];
                prop_assert!(v >= 0.0);
                if k + 1 < PARAMS.k_max {
                    prop_assert!(v >= fv.values[(k + 1) * n + i]);
                }
            }
        }
    }

    #[test]
    fn adding_a_point_never_lowers_the_landscape(pts in arb_points(8), extra in (0.0f64..10.0, 0.0f64..5.0)) {
        let before = landscape(&diagram(&pts), &PARAMS).unwrap();
        let mut more = pts.clone();
        more.push((extra.0, extra.0 + extra.1));
        let after = landscape(&diagram(&more), &PARAMS).unwrap();
        for (a, b) in after.values.iter().zip(&before.values) {
            prop_assert!(a >= b);
        }
    }

    #[test]
    fn image_is_additive_and_nonnegative(a in arb_points(6), b in arb_points(6), persistence in any::<bool>()) {
        let weight = if persistence { ImageWeight::Persistence } else { ImageWeight::Death };
        let (da, db) = (diagram(&a), diagram(&b));
        let both = da.merged(&db);
        let layout = ImageLayout::fit([&da, &db], 20, 0.5, weight).unwrap();
        let ia = persistence_image(&da, &layout);
        let ib = persistence_image(&db, &layout);
        let iab = persistence_image(&both, &layout);
        for ((x, y), z) in ia.values.iter().zip(&ib.values).zip(&iab.values) {
            prop_assert!(*z >= 0.0);
            prop_assert!((x + y - z).abs() < 1e-9);
        }
    }
}
