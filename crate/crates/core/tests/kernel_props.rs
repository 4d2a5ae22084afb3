use pairperm_core::kernels::{gram, kernel_distance, KernelSpec};
use pairperm_core::linalg::min_eigenvalue;
use pairperm_core::persistence::{PersistenceDiagram, PersistencePoint, PointKind};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_diagram(rng: &mut ChaCha8Rng) -> PersistenceDiagram {
    let k = rng.gen_range(1..=10);
    PersistenceDiagram::new(
        (0..k)
            .map(|_| {
                let b: f64 = rng.gen_range(0.0..5.0);
                PersistencePoint::new(PointKind::Ord0, b, b + rng.gen_range(0.0..3.0))
            })
            .collect(),
    )
}

const SPECS: [KernelSpec; 4] = [
    KernelSpec::Sw { sigma: 1.0, slices: 10 },
    KernelSpec::Pss { t: 0.5 },
    KernelSpec::Pwg { rho: 1.0, k_w: 1.0, p_w: 1.0, tau: 1.0, squared: true },
    KernelSpec::Pf { t: 1.0, tau: 1.0 },
];

const PSD_SPECS: [KernelSpec; 3] = [SPECS[0], SPECS[1], SPECS[2]];

#[test]
fn gram_matrices_are_symmetric_and_psd() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for spec in PSD_SPECS {
        let mut worst = f64::INFINITY;
        for _ in 0..50 {
            let items: Vec<_> = (0..20).map(|_| random_diagram(&mut rng)).collect();
            let g = gram(&items, &spec).unwrap();
            assert!(g.values.asymmetry() <= 1e-12);
            worst = worst.min(min_eigenvalue(&g.values).unwrap());
        }
        assert!(worst >= -1e-8, "{}: min eigenvalue {worst}", spec.name());
    }
}

#[test]
fn fisher_gram_is_symmetric() {
    let mut rng = ChaCha8Rng::seed_from_u64(98);
    let items: Vec<_> = (0..20).map(|_| random_diagram(&mut rng)).collect();
    let g = gram(&items, &SPECS[3]).unwrap();
    assert!(g.values.asymmetry() <= 1e-12);
    for i in 0..20 {
        assert!((g.values[(i, i)] - 1.0).abs() < 1e-12);
    }
}

#[test]
fn sw_converges_with_more_slices() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (a, b) = (random_diagram(&mut rng), random_diagram(&mut rng));
    let reference = KernelSpec::Sw { sigma: 1.0, slices: 5120 }.eval(&a, &b);
    let mut last = f64::INFINITY;
    for slices in [10, 20, 40, 80, 160, 320] {
        let err = (KernelSpec::Sw { sigma: 1.0, slices }.eval(&a, &b) - reference).abs();
        assert!(err <= last + 1e-12, "slices {slices}: {err} > {last}");
        last = err;
    }
}

fn arb_diagram() -> impl Strategy<Value = PersistenceDiagram> {
    prop::collection::vec((0.0f64..5.0, 0.0f64..3.0), 0..8).prop_map(|v| {
        PersistenceDiagram::new(v.into_iter().map(|(b, l)| PersistencePoint::new(PointKind::Ord0, b, b + l)).collect())
    })
}

proptest! {
    #[test]
    fn kernels_are_symmetric_and_maximal_on_the_diagonal(a in arb_diagram(), b in arb_diagram()) {
        for spec in SPECS {
            let ab = spec.eval(&a, &b);
            prop_assert!((ab - spec.eval(&b, &a)).abs() <= 1e-12);
            if spec.name() != "pss" {
                prop_assert!(spec.eval(&a, &a) >= ab - 1e-12);
            }
        }
    }

    #[test]
    fn pss_ignores_diagonal_points(a in arb_diagram(), b in arb_diagram(), x in 0.0f64..5.0) {
        let spec = KernelSpec::Pss { t: 0.3 };
        let mut pts = a.points().to_vec();
        pts.push(PersistencePoint::new(PointKind::Ord0, x, x));
        let a2 = PersistenceDiagram::new(pts);
        prop_assert!((spec.eval(&a, &b) - spec.eval(&a2, &b)).abs() < 1e-12);
    }

    #[test]
    fn kernel_distance_triangle(a in arb_diagram(), b in arb_diagram(), c in arb_diagram()) {
        for spec in PSD_SPECS {
            let ab = kernel_distance(&spec, &a, &b);
            prop_assert!(ab <= kernel_distance(&spec, &a, &c) + kernel_distance(&spec, &c, &b) + 1e-9);
            prop_assert!(kernel_distance(&spec, &a, &a) < 1e-7);
        }
    }
}
