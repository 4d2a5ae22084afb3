//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails outside the known-unattainable list.
//!
//! Optional corpora: set `PAIRPERM_IMDB_B` or `PAIRPERM_BZR` to a TUDataset
//! directory (e.g. `.../IMDB-BINARY`) to add the real-data checks.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use pairperm::cache::Cache;
use pairperm::config::{Config, DatasetConfig, FeatureConfig, FiltrationConfig};
use pairperm::pipeline;
use pairperm_core::diagrams::{bottleneck, permute_diagram, wasserstein_p, Orientation};
use pairperm_core::features::{landscape, persistence_image, ImageLayout, ImageWeight, LandscapeParams};
use pairperm_core::filtration::VertexFunction;
use pairperm_core::graph::{dumbbell_mesh, DumbbellParams, Graph};
use pairperm_core::kernels::{gram, KernelSpec};
use pairperm_core::learn::{
    geodesic_vertex_diagrams, segmentation_run, SegmentationParams, SegmentationShape, SvmSettings, VectorFeature,
};
use pairperm_core::linalg::min_eigenvalue;
use pairperm_core::persistence::{extended_pd, reduce_extended, PersistenceDiagram, PersistencePoint, PointKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    /// Failure is a documented limitation rather than a regression.
    tolerated: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome { pass, tolerated: false, detail: detail.into() }
    }
}

fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen::<f64>() < p {
                edges.push((i, j));
            }
        }
    }
    Graph::new(n, edges).unwrap()
}

fn sorted_key(d: &PersistenceDiagram) -> Vec<(PointKind, u64, u64)> {
    let mut v: Vec<_> = d.points().iter().map(|p| (p.kind, p.birth.to_bits(), p.death.to_bits())).collect();
    v.sort();
    v
}

fn extended_vs_reduction() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let start = Instant::now();
    let mut mismatches = 0;
    for trial in 0..1000 {
        let n = rng.gen_range(1..=12);
        let g = random_graph(&mut rng, n, [0.2, 0.5, 0.8][trial % 3]);
        let levels = [3, 6, 50][(trial / 3) % 3];
        let f = VertexFunction::new((0..n).map(|_| rng.gen_range(0..levels) as f64).collect()).unwrap();
        if sorted_key(&extended_pd(&g, &f).unwrap()) != sorted_key(&reduce_extended(&g, &f).unwrap()) {
            mismatches += 1;
        }
    }
    let t = start.elapsed();
    Outcome::new(mismatches == 0 && t < Duration::from_secs(60), format!("{mismatches}/1000 mismatches in {t:.2?}"))
}

fn components(n: usize, edges: &[(usize, usize)]) -> usize {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut c = n;
    for &(a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
            c -= 1;
        }
    }
    c
}

fn betti_counts() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut violations = 0;
    for _ in 0..10_000 {
        let n = rng.gen_range(1..=30);
        let p = rng.gen_range(0.0..0.4);
        let g = random_graph(&mut rng, n, p);
        let f = VertexFunction::new((0..n).map(|_| rng.gen_range(-5.0..5.0f64).round()).collect()).unwrap();
        let d = extended_pd(&g, &f).unwrap();
        let c = components(n, g.edges());
        if d.count(PointKind::Ext0) != c || d.count(PointKind::Ext1) != g.n_edges() + c - n {
            violations += 1;
        }
    }
    Outcome::new(violations == 0, format!("{violations} violations on 10000 graphs"))
}

fn random_small_diagram(rng: &mut ChaCha8Rng) -> Vec<(f64, f64)> {
    let k = rng.gen_range(0..=5);
    let grid = rng.gen_bool(0.5);
    (0..k)
        .map(|_| {
            let (b, l): (f64, f64) = if grid {
                (rng.gen_range(0..6) as f64, rng.gen_range(0..4) as f64)
            } else {
                (rng.gen_range(0.0..5.0), rng.gen_range(0.0..3.0))
            };
            (b, b + l)
        })
        .collect()
}

fn diagram(points: &[(f64, f64)]) -> PersistenceDiagram {
    PersistenceDiagram::new(points.iter().map(|&(b, d)| PersistencePoint::new(PointKind::Ord0, b, d)).collect())
}

/// Every partial bijection from `a` into `b`; points left out are matched
/// to the diagonal. Returns the cost lists of all matchings.
fn enumerate_matchings(a: &[(f64, f64)], b: &[(f64, f64)], out: &mut Vec<Vec<f64>>) {
    fn go(i: usize, a: &[(f64, f64)], b: &[(f64, f64)], used: &mut Vec<bool>, costs: &mut Vec<f64>, out: &mut Vec<Vec<f64>>) {
        if i == a.len() {
            let mut all = costs.clone();
            all.extend(b.iter().zip(used.iter()).filter(|(_, u)| !**u).map(|(q, _)| (q.1 - q.0).abs() / 2.0));
            out.push(all);
            return;
        }
        costs.push((a[i].1 - a[i].0).abs() / 2.0);
        go(i + 1, a, b, used, costs, out);
        costs.pop();
        for j in 0..b.len() {
            if !used[j] {
                used[j] = true;
                costs.push((a[i].0 - b[j].0).abs().max((a[i].1 - b[j].1).abs()));
                go(i + 1, a, b, used, costs, out);
                costs.pop();
                used[j] = false;
            }
        }
    }
    go(0, a, b, &mut vec![false; b.len()], &mut Vec::new(), out);
}

fn distances_vs_enumeration() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for _ in 0..500 {
        let (a, b) = (random_small_diagram(&mut rng), random_small_diagram(&mut rng));
        let mut all = Vec::new();
        enumerate_matchings(&a, &b, &mut all);
        let (da, db) = (diagram(&a), diagram(&b));
        let best_max = all.iter().map(|c| c.iter().fold(0.0f64, |m, &x| m.max(x))).fold(f64::INFINITY, f64::min);
        worst = worst.max((bottleneck(&da, &db) - best_max).abs());
        for p in [1.0, 2.0] {
            let best = all.iter().map(|c| c.iter().map(|x| x.powf(p)).sum::<f64>()).fold(f64::INFINITY, f64::min);
            worst = worst.max((wasserstein_p(&da, &db, p).unwrap() - best.powf(1.0 / p)).abs());
        }
    }
    let t = start.elapsed();
    Outcome::new(worst <= 1e-9 && t < Duration::from_secs(30), format!("max deviation {worst:.2e} on 500 pairs in {t:.2?}"))
}

fn random_diagram(rng: &mut ChaCha8Rng, max: usize) -> PersistenceDiagram {
    let k = rng.gen_range(1..=max);
    let kinds = [PointKind::Ord0, PointKind::Rel1, PointKind::Ext0, PointKind::Ext1];
    PersistenceDiagram::new(
        (0..k)
            .map(|_| {
                let kind = kinds[rng.gen_range(0..kinds.len())];
                let (lo, l): (f64, f64) = (rng.gen_range(0.0..5.0), rng.gen_range(0.0..3.0));
                if kind.ascending() {
                    PersistencePoint::new(kind, lo, lo + l)
                } else {
                    PersistencePoint::new(kind, lo + l, lo)
                }
            })
            .collect(),
    )
}

fn kernel_validity() -> Outcome {
    let specs = [
        KernelSpec::Sw { sigma: 1.0, slices: 10 },
        KernelSpec::Pss { t: 1.0 },
        KernelSpec::Pwg { rho: 1.0, k_w: 1.0, p_w: 1.0, tau: 1.0, squared: true },
        KernelSpec::Pf { t: 1.0, tau: 1.0 },
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut parts = Vec::new();
    let mut failed = Vec::new();
    for spec in specs {
        let (mut min_eig, mut asym) = (f64::INFINITY, 0.0f64);
        for _ in 0..50 {
            let items: Vec<_> = (0..20).map(|_| random_diagram(&mut rng, 10)).collect();
            let g = gram(&items, &spec).unwrap();
            asym = asym.max(g.values.asymmetry());
            min_eig = min_eig.min(min_eigenvalue(&g.values).unwrap());
        }
        parts.push(format!("{} min eig {min_eig:.2e} asym {asym:.1e}", spec.name()));
        if min_eig < -1e-8 || asym > 1e-12 {
            failed.push(spec.name());
        }
    }
    // The Fisher kernel uses per-pair supports, so it is not PSD in general.
    Outcome { pass: failed.is_empty(), tolerated: failed == ["pf"], detail: parts.join("; ") }
}

fn permutation_contract() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut broken = 0;
    for i in 0..10_000u64 {
        let d = random_diagram(&mut rng, 12);
        let orientation = if i % 2 == 0 { Orientation::ByKind } else { Orientation::Unoriented };
        let p = permute_diagram(&d, i, orientation);
        let bits = |d: &PersistenceDiagram| {
            let mut v: Vec<u64> = d.coordinates().iter().map(|x| x.to_bits()).collect();
            v.sort();
            v
        };
        if bits(&d) != bits(&p) {
            broken += 1;
        }
    }
    let two = diagram(&[(0.0, 1.0), (2.0, 3.0)]);
    let mut counts = [0usize; 3];
    let draws = 100_000u64;
    for seed in 0..draws {
        let p = permute_diagram(&two, seed, Orientation::ByKind);
        let q = p.points().iter().find(|q| q.birth == 0.0 || q.death == 0.0).unwrap();
        counts[(q.birth + q.death) as usize - 1] += 1;
    }
    let dev = counts.iter().map(|&c| (c as f64 / draws as f64 - 1.0 / 3.0).abs()).fold(0.0, f64::max);
    Outcome::new(broken == 0 && dev <= 0.02, format!("{broken} multiset violations; pairing counts {counts:?}, max deviation {dev:.4}"))
}

fn sbm_config(count: usize, noise: f64) -> Config {
    let mut cfg = Config::new(DatasetConfig::Sbm { count, noise });
    cfg.cv.outer_folds = 10;
    cfg.cv.repeats = 1;
    cfg.cv.inner_folds = 3;
    cfg
}

fn sbm_reproduction(scratch: &Path) -> Outcome {
    let cache = Cache::disabled();
    let noises = [0.0, 0.1, 0.2, 0.3];
    let mut acc = Vec::new();
    for (i, &noise) in noises.iter().enumerate() {
        let mut row = [0.0; 2];
        for (j, mode) in ["true", "fake"].into_iter().enumerate() {
            let mut cfg = sbm_config(1000, noise);
            cfg.diagrams.mode = mode.into();
            row[j] = pipeline::run(&cfg, &scratch.join(format!("sbm{i}-{mode}")), &cache).unwrap().mean;
        }
        acc.push(row);
    }
    let base = acc[0][0] >= 0.95;
    let close = acc.iter().all(|r| (r[0] - r[1]).abs() <= 0.03);
    let monotone = (0..2).all(|j| acc.windows(2).all(|w| w[1][j] <= w[0][j] + 0.01));
    let detail = noises
        .iter()
        .zip(&acc)
        .map(|(n, r)| format!("noise {n}: sw {:.3} sw_p {:.3}", r[0], r[1]))
        .collect::<Vec<_>>()
        .join("; ");
    Outcome::new(base && close && monotone, detail)
}

fn corpus(var: &str) -> Option<DatasetConfig> {
    let dir = PathBuf::from(std::env::var_os(var)?);
    let name = dir.file_name()?.to_string_lossy().into_owned();
    Some(DatasetConfig::Tudataset { path: dir, name })
}

fn separation(scratch: &Path) -> Outcome {
    let cache = Cache::disabled();
    let sbm = pipeline::separate(&sbm_config(1000, 0.0), &scratch.join("sep-sbm"), &cache).unwrap().mean;
    let mut pass = sbm >= 0.85;
    let mut detail = format!("sbm {sbm:.3} (>= 0.85)");
    match corpus("PAIRPERM_IMDB_B") {
        Some(ds) => {
            let mut cfg = Config::new(ds);
            cfg.cv = sbm_config(0, 0.0).cv;
            let acc = pipeline::separate(&cfg, &scratch.join("sep-imdb"), &cache).unwrap().mean;
            pass &= acc >= 0.95;
            detail += &format!("; IMDB-B {acc:.3} (>= 0.95)");
        }
        None => detail += "; IMDB-B skipped (PAIRPERM_IMDB_B unset)",
    }
    match corpus("PAIRPERM_BZR") {
        Some(ds) => {
            let mut cfg = Config::new(ds);
            cfg.filtration = FiltrationConfig::Ricci { alpha: 0.5, reduction: "mean".into() };
            cfg.features = FeatureConfig::by_name("sw").unwrap();
            // The reference figure includes the loop points.
            cfg.diagrams.kinds = ["ord0", "rel1", "ext0", "ext1"].map(String::from).to_vec();
            let acc = pipeline::run(&cfg, &scratch.join("bzr"), &cache).unwrap().mean;
            pass &= (acc - 0.884).abs() <= 0.03;
            detail += &format!("; BZR sw+ricci {acc:.3} (0.884 +- 0.03)");
        }
        None => detail += "; BZR skipped (PAIRPERM_BZR unset)",
    }
    Outcome::new(pass, detail)
}

fn segmentation_ordering() -> Outcome {
    let dp = DumbbellParams { jitter: 0.15, ..DumbbellParams::default() };
    let features = [
        ("PI", VectorFeature::Image { resolution: 20, bandwidth: 0.1, weight: ImageWeight::Death }, false),
        ("PI+P", VectorFeature::Image { resolution: 20, bandwidth: 0.1, weight: ImageWeight::Death }, true),
        ("PL", VectorFeature::Landscape { k_max: 5, bins: 100 }, false),
    ];
    let replicates = 3u64;
    let mut err = [0.0; 3];
    for ci in 0..replicates {
        let shapes: Vec<SegmentationShape> = (0..6)
            .map(|s| {
                let (mesh, labels) = dumbbell_mesh(&dp, 1000 * ci + s).unwrap();
                SegmentationShape { diagrams: geodesic_vertex_diagrams(&mesh).unwrap(), labels }
            })
            .collect();
        for (k, &(_, feature, permute)) in features.iter().enumerate() {
            let params = SegmentationParams {
                feature,
                bandwidths: vec![0.01, 0.1, 1.0, 10.0, 100.0],
                c_grid: vec![0.01, 1.0, 10.0, 100.0, 1000.0],
                permute,
                svm: SvmSettings::default(),
            };
            err[k] += (1.0 - segmentation_run(&shapes, &params, 9 + ci).unwrap().mean) / replicates as f64;
        }
    }
    let detail = features.iter().zip(err).map(|(f, e)| format!("{} error {e:.4}", f.0)).collect::<Vec<_>>().join("; ");
    Outcome::new(err[0] < err[1] && err[0] <= err[2], detail)
}

fn landscape_and_image() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let params = LandscapeParams { k_max: 5, bins: 100, lo: 0.0, hi: 8.0 };
    let mut bad_levels = 0;
    for _ in 0..1000 {
        let v = landscape(&random_diagram(&mut rng, 12), &params).unwrap().values;
        let n = params.bins;
        for k in 0..params.k_max {
            for i in 0..n {
                let x = v[k * n + i];
                if x < 0.0 || (k + 1 < params.k_max && x < v[(k + 1) * n + i]) {
                    bad_levels += 1;
                }
            }
        }
    }
    let mut additivity: f64 = 0.0;
    for i in 0..1000 {
        let weight = if i % 2 == 0 { ImageWeight::Death } else { ImageWeight::Persistence };
        let (a, b) = (random_diagram(&mut rng, 6), random_diagram(&mut rng, 6));
        let layout = ImageLayout::fit([&a, &b], 20, rng.gen_range(0.05..1.0), weight).unwrap();
        let (ia, ib, iab) =
            (persistence_image(&a, &layout), persistence_image(&b, &layout), persistence_image(&a.merged(&b), &layout));
        for ((x, y), z) in ia.values.iter().zip(&ib.values).zip(&iab.values) {
            additivity = additivity.max((x + y - z).abs());
        }
    }
    // A lone point on a grid wide enough to hold its whole Gaussian carries
    // exactly its weight.
    let mut mass: f64 = 0.0;
    for i in 0..1000 {
        let (lo, hi) = (rng.gen_range(0.0..5.0), rng.gen_range(5.0..8.0));
        let (weight, w) = if i % 2 == 0 { (ImageWeight::Death, hi) } else { (ImageWeight::Persistence, hi - lo) };
        let layout = ImageLayout {
            resolution: 30,
            bandwidth: 0.3,
            weight,
            birth_range: (-5.0, 10.0),
            pers_range: (-5.0, 15.0),
            weight_scale: 1.0,
        };
        let total: f64 = persistence_image(&diagram(&[(lo, hi)]), &layout).values.iter().sum();
        mass = mass.max((total - w).abs());
    }
    Outcome::new(
        bad_levels == 0 && additivity <= 1e-6 && mass <= 1e-6,
        format!("{bad_levels} landscape order violations; PI additivity {additivity:.1e}; single-point mass {mass:.1e}"),
    )
}

fn dir_contents(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap()))
        .collect()
}

fn determinism(scratch: &Path) -> Outcome {
    let mut cfg = sbm_config(300, 0.1);
    cfg.seed = 17;
    cfg.diagrams.mode = "fake".into();
    let cfg_path = scratch.join("determinism.toml");
    fs::write(&cfg_path, cfg.to_toml()).unwrap();
    let outs: Vec<_> = ["det-a", "det-b"].iter().map(|d| scratch.join(d)).collect();
    for out in &outs {
        let status = Command::new(env!("CARGO_BIN_EXE_pairperm"))
            .args(["run", "--config", cfg_path.to_str().unwrap(), "--out", out.to_str().unwrap()])
            .env_remove("PAIRPERM_CACHE")
            .output()
            .unwrap();
        assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
    }
    let (a, b) = (dir_contents(&outs[0]), dir_contents(&outs[1]));
    let differing: Vec<_> = a.keys().filter(|k| a.get(*k) != b.get(*k)).cloned().collect();
    Outcome::new(
        a.len() == b.len() && differing.is_empty() && a.len() >= 5,
        format!("{} files compared, differing: {differing:?}", a.len()),
    )
}

type Check<'a> = Box<dyn Fn() -> Outcome + 'a>;

fn main() {
    let scratch = tempfile::tempdir().unwrap();
    let s = scratch.path();
    let criteria: [(&str, Check); 10] = [
        ("extended persistence equals boundary reduction", Box::new(extended_vs_reduction)),
        ("essential class counts", Box::new(betti_counts)),
        ("bottleneck and Wasserstein against enumeration", Box::new(distances_vs_enumeration)),
        ("kernel symmetry and positive semidefiniteness", Box::new(kernel_validity)),
        ("permutation contract", Box::new(permutation_contract)),
        ("SBM accuracy with and without permutation", Box::new(|| sbm_reproduction(s))),
        ("true-vs-fake separation", Box::new(|| separation(s))),
        ("segmentation ordering", Box::new(segmentation_ordering)),
        ("landscape and image properties", Box::new(landscape_and_image)),
        ("determinism of full runs", Box::new(|| determinism(s))),
    ];
    let mut unexpected = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = check();
        let status = match (o.pass, o.tolerated) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known limitation)",
            (false, false) => "FAIL",
        };
        println!("criterion {:>2} {status}: {name} [{:.1?}] {}", i + 1, start.elapsed(), o.detail);
        if !o.pass && !o.tolerated {
            unexpected.push(i + 1);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
