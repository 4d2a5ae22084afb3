//! Kernels on persistence diagrams and Gram-matrix assembly.
//!
//! Every kernel here is split into a pairwise base quantity that carries
//! all the per-pair diagram work and a cheap elementwise finish that
//! applies the outer hyperparameter. A base matrix can therefore be reused
//! across an outer grid (the SW bandwidth, the PWG outer bandwidth, the PF
//! scale). Kinds are ignored: diagrams are treated as point multisets.

mod sw;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{param, Error, Result};
use crate::linalg::Matrix;
use crate::math;
use crate::persistence::PersistenceDiagram;

pub use sw::{slice_directions, sliced_wasserstein, sliced_wasserstein_matrix};

pub const DEFAULT_SLICES: usize = 10;

/// A kernel with all of its hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelSpec {
    /// `exp(-SW / (2 sigma^2))`.
    Sw { sigma: f64, slices: usize },
    /// Scale-space kernel, leading constant 1/8.
    Pss { t: f64 },
    /// Persistence-weighted Gaussian; `squared` selects `‖μ1-μ2‖²` rather
    /// than `‖μ1-μ2‖` in the exponent.
    Pwg { rho: f64, k_w: f64, p_w: f64, tau: f64, squared: bool },
    /// `exp(-t d_FIM)` with Gaussian smoothing `tau`.
    Pf { t: f64, tau: f64 },
}

/// The pairwise part of a kernel, shared by every outer hyperparameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BaseSpec {
    SwDistance { slices: usize },
    Pss { t: f64 },
    PwgInner { rho: f64, k_w: f64, p_w: f64 },
    FisherDistance { tau: f64 },
}

fn positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(param(format!("kernel parameter {name} must be positive and finite, got {x}")))
    }
}

impl KernelSpec {
    pub fn name(&self) -> &'static str {
        match self {
            KernelSpec::Sw { .. } => "sw",
            KernelSpec::Pss { .. } => "pss",
            KernelSpec::Pwg { .. } => "pwg",
            KernelSpec::Pf { .. } => "pf",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            KernelSpec::Sw { sigma, slices } => {
                positive("sigma", sigma)?;
                if slices == 0 {
                    return Err(param("sliced Wasserstein needs at least one slice"));
                }
            }
            KernelSpec::Pss { t } => positive("t", t)?,
            KernelSpec::Pwg { rho, k_w, p_w, tau, .. } => {
                positive("rho", rho)?;
                positive("K", k_w)?;
                positive("p", p_w)?;
                positive("tau", tau)?;
            }
            KernelSpec::Pf { t, tau } => {
                positive("t", t)?;
                positive("tau", tau)?;
            }
        }
        Ok(())
    }

    pub fn descriptor(&self) -> String {
        match *self {
            KernelSpec::Sw { sigma, slices } => format!("sw(sigma={sigma},slices={slices})"),
            KernelSpec::Pss { t } => format!("pss(t={t})"),
            KernelSpec::Pwg { rho, k_w, p_w, tau, squared } => {
                format!("pwg(rho={rho},K={k_w},p={p_w},tau={tau},squared={squared})")
            }
            KernelSpec::Pf { t, tau } => format!("pf(t={t},tau={tau})"),
        }
    }

    pub fn base(&self) -> BaseSpec {
        match *self {
            KernelSpec::Sw { slices, .. } => BaseSpec::SwDistance { slices },
            KernelSpec::Pss { t } => BaseSpec::Pss { t },
            KernelSpec::Pwg { rho, k_w, p_w, .. } => BaseSpec::PwgInner { rho, k_w, p_w },
            KernelSpec::Pf { tau, .. } => BaseSpec::FisherDistance { tau },
        }
    }

    /// Kernel value from base values: `ij` for the pair, `ii`/`jj` for the
    /// items against themselves.
    fn finish(&self, ij: f64, ii: f64, jj: f64) -> f64 {
        match *self {
            KernelSpec::Sw { sigma, .. } => math::exp(-ij / (2.0 * sigma * sigma)),
            KernelSpec::Pss { .. } => ij,
            KernelSpec::Pwg { tau, squared, .. } => {
                let d2 = (ii + jj - 2.0 * ij).max(0.0);
                let d = if squared { d2 } else { math::sqrt(d2) };
                math::exp(-d / (2.0 * tau * tau))
            }
            KernelSpec::Pf { t, .. } => math::exp(-t * ij),
        }
    }

    /// Kernel value for one pair.
    pub fn eval(&self, d1: &PersistenceDiagram, d2: &PersistenceDiagram) -> f64 {
        let (a, b) = (d1.pairs(), d2.pairs());
        let base = self.base();
        let ij = base.eval(&a, &b);
        match self {
            KernelSpec::Pwg { .. } => self.finish(ij, base.eval(&a, &a), base.eval(&b, &b)),
            _ => self.finish(ij, 0.0, 0.0),
        }
    }

    /// Applies the outer hyperparameter to a square base matrix.
    pub fn apply(&self, base: &Matrix) -> Matrix {
        let n = base.rows();
        Matrix::from_fn(n, n, |i, j| self.finish(base[(i, j)], base[(i, i)], base[(j, j)]))
    }
}

impl BaseSpec {
    pub fn eval(&self, a: &[[f64; 2]], b: &[[f64; 2]]) -> f64 {
        match *self {
            BaseSpec::SwDistance { slices } => sliced_wasserstein(a, b, slices),
            BaseSpec::Pss { t } => pss(a, b, t),
            BaseSpec::PwgInner { rho, k_w, p_w } => pwg_inner(a, b, rho, k_w, p_w),
            BaseSpec::FisherDistance { tau } => fisher_distance(a, b, tau),
        }
    }

    pub fn descriptor(&self) -> String {
        match *self {
            BaseSpec::SwDistance { slices } => format!("sw-distance(slices={slices})"),
            BaseSpec::Pss { t } => format!("pss(t={t})"),
            BaseSpec::PwgInner { rho, k_w, p_w } => format!("pwg-inner(rho={rho},K={k_w},p={p_w})"),
            BaseSpec::FisherDistance { tau } => format!("fisher-distance(tau={tau})"),
        }
    }
}

fn sq_dist(p: [f64; 2], q: [f64; 2]) -> f64 {
    let (x, y) = (p[0] - q[0], p[1] - q[1]);
    x * x + y * y
}

fn diagonal(p: [f64; 2]) -> [f64; 2] {
    let m = 0.5 * (p[0] + p[1]);
    [m, m]
}

/// `(1/8) ΣΣ exp(-‖p-q‖²/8t) - exp(-‖p-q̄‖²/8t)`, `q̄` the mirror of `q`.
pub fn pss(a: &[[f64; 2]], b: &[[f64; 2]], t: f64) -> f64 {
    let s = 1.0 / (8.0 * t);
    let mut total = 0.0;
    for &p in a {
        for &q in b {
            let mirror = [q[1], q[0]];
            total += math::exp(-sq_dist(p, q) * s) - math::exp(-sq_dist(p, mirror) * s);
        }
    }
    total / 8.0
}

fn pwg_weight(p: [f64; 2], k_w: f64, p_w: f64) -> f64 {
    math::atan(k_w * math::pow((p[1] - p[0]).abs(), p_w))
}

/// `<μ_a, μ_b>` in the RKHS of the Gaussian of bandwidth `rho`, with
/// `μ = Σ arctan(K pers^p) k_rho(·, x)`.
pub fn pwg_inner(a: &[[f64; 2]], b: &[[f64; 2]], rho: f64, k_w: f64, p_w: f64) -> f64 {
    let s = 1.0 / (2.0 * rho * rho);
    let wb: Vec<f64> = b.iter().map(|&q| pwg_weight(q, k_w, p_w)).collect();
    let mut total = 0.0;
    for &p in a {
        let wp = pwg_weight(p, k_w, p_w);
        for (&q, &wq) in b.iter().zip(&wb) {
            total += wp * wq * math::exp(-sq_dist(p, q) * s);
        }
    }
    total
}

/// Fisher information distance between the Gaussian-smoothed augmented
/// diagrams, evaluated on the union of the augmented point sets.
pub fn fisher_distance(a: &[[f64; 2]], b: &[[f64; 2]], tau: f64) -> f64 {
    let mut aug_a: Vec<[f64; 2]> = a.to_vec();
    aug_a.extend(b.iter().map(|&q| diagonal(q)));
    let mut aug_b: Vec<[f64; 2]> = b.to_vec();
    aug_b.extend(a.iter().map(|&p| diagonal(p)));
    if aug_a.is_empty() {
        return 0.0;
    }
    let mut support = aug_a.clone();
    support.extend_from_slice(&aug_b);
    let s = 1.0 / (2.0 * tau * tau);
    let density = |pts: &[[f64; 2]]| -> Vec<f64> {
        let raw: Vec<f64> = support.iter().map(|&x| pts.iter().map(|&p| math::exp(-sq_dist(x, p) * s)).sum()).collect();
        let total: f64 = raw.iter().sum();
        raw.into_iter().map(|r| r / total).collect()
    };
    let (ra, rb) = (density(&aug_a), density(&aug_b));
    // arccos(Σ√(ρa ρb)) written through the Hellinger gap 1 - Σ√(ρa ρb),
    // which is exactly zero for identical measures
    let gap: f64 = ra.iter().zip(&rb).map(|(x, y)| {
            let g = math::sqrt(*x) - math::sqrt(*y);
            g * g
        }).sum::<f64>() / 2.0;
    2.0 * math::asin(math::sqrt(gap.clamp(0.0, 1.0) / 2.0))
}

/// Square matrix of base values over `items`, each unordered pair computed
/// once. Sliced Wasserstein goes through the batched routine.
pub fn base_matrix(items: &[PersistenceDiagram], base: BaseSpec) -> Matrix {
    let pairs: Vec<Vec<[f64; 2]>> = items.iter().map(PersistenceDiagram::pairs).collect();
    if let BaseSpec::SwDistance { slices } = base {
        return sliced_wasserstein_matrix(&pairs, slices);
    }
    let n = items.len();
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = base.eval(&pairs[i], &pairs[j]);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    m
}

#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    pub values: Matrix,
    pub descriptor: String,
    pub ids: Vec<String>,
}

impl GramMatrix {
    fn checked(values: Matrix, descriptor: String, ids: Vec<String>) -> Result<Self> {
        let n = values.rows();
        for i in 0..n {
            for j in i..n {
                if !values[(i, j)].is_finite() {
                    return Err(Error::Kernel { i, j, reason: format!("{} is not finite", values[(i, j)]) });
                }
            }
        }
        Ok(GramMatrix { values, descriptor, ids })
    }

    /// Finishes a precomputed base matrix for `spec`.
    pub fn from_base(base: &Matrix, spec: &KernelSpec, ids: Vec<String>) -> Result<Self> {
        spec.validate()?;
        Self::checked(spec.apply(base), spec.descriptor(), ids)
    }

    pub fn len(&self) -> usize {
        self.values.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.values.rows() == 0
    }
}

/// Gram matrix of `spec` over `items`.
pub fn gram(items: &[PersistenceDiagram], spec: &KernelSpec) -> Result<GramMatrix> {
    spec.validate()?;
    let base = base_matrix(items, spec.base());
    let ids = items.iter().map(|d| d.provenance.graph_id.clone()).collect();
    GramMatrix::from_base(&base, spec, ids)
}

/// Distance induced by a positive semi-definite kernel.
pub fn kernel_distance(spec: &KernelSpec, d1: &PersistenceDiagram, d2: &PersistenceDiagram) -> f64 {
    distance_from_values(spec.eval(d1, d1), spec.eval(d2, d2), spec.eval(d1, d2))
}

/// `sqrt(max(0, k11 + k22 - 2 k12))`.
pub fn distance_from_values(k11: f64, k22: f64, k12: f64) -> f64 {
    math::sqrt((k11 + k22 - 2.0 * k12).max(0.0))
}

/// Hyperparameter grids used for model selection.
pub mod grids {
    pub const SW_SIGMA: [f64; 5] = [0.01, 0.1, 1.0, 10.0, 100.0];
    pub const PSS_T: [f64; 12] = [0.001, 0.005, 0.01, 0.05, 0.1, 0.5, 1.0, 5.0, 10.0, 100.0, 500.0, 1000.0];
    pub const PWG_TAU: [f64; 5] = [0.01, 0.1, 1.0, 10.0, 100.0];
    pub const PWG_K: [f64; 3] = [0.1, 1.0, 10.0];
    pub const PWG_RHO: [f64; 3] = [0.1, 1.0, 10.0];
    pub const PF: [f64; 9] = [0.01, 0.05, 0.1, 0.5, 1.0, 5.0, 10.0, 50.0, 100.0];
    pub const SVM_C: [f64; 5] = [0.01, 1.0, 10.0, 100.0, 1000.0];
    pub const GAUSSIAN_BANDWIDTH: [f64; 5] = [0.01, 0.1, 1.0, 10.0, 100.0];
    pub const HISTOGRAM_BINS: [usize; 3] = [100, 200, 300];
    pub const LANDSCAPE_K: [usize; 6] = [3, 4, 5, 6, 7, 8];
    pub const LANDSCAPE_BINS: [usize; 4] = [50, 100, 200, 300];
    pub const IMAGE_RESOLUTION: [usize; 2] = [20, 30];
    pub const IMAGE_BANDWIDTH: [f64; 5] = [0.01, 0.1, 1.0, 10.0, 100.0];
}
