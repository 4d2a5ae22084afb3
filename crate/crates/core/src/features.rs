//! Fixed-length vectorizations of diagrams: persistence landscapes and
//! persistence images.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{param, Result};
use crate::math;
use crate::persistence::PersistenceDiagram;

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    pub values: Vec<f64>,
    pub descriptor: String,
}

/// Points as `(low, high)`: every kind is mirrored so that the first
/// coordinate is the smaller one.
fn oriented(d: &PersistenceDiagram) -> impl Iterator<Item = (f64, f64)> + '_ {
    d.points().iter().map(|p| if p.birth <= p.death { (p.birth, p.death) } else { (p.death, p.birth) })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LandscapeParams {
    pub k_max: usize,
    pub bins: usize,
    pub lo: f64,
    pub hi: f64,
}

impl LandscapeParams {
    fn validate(&self) -> Result<()> {
        if self.k_max == 0 || self.bins == 0 {
            return Err(param("landscape needs k_max >= 1 and bins >= 1"));
        }
        if !(self.lo < self.hi) {
            return Err(param(format!("landscape range [{}, {}] is empty", self.lo, self.hi)));
        }
        Ok(())
    }

    /// Sample positions: `bins` evenly spaced points covering `[lo, hi]`.
    pub fn grid(&self) -> Vec<f64> {
        if self.bins == 1 {
            return vec![0.5 * (self.lo + self.hi)];
        }
        let step = (self.hi - self.lo) / (self.bins - 1) as f64;
        (0..self.bins).map(|i| self.lo + step * i as f64).collect()
    }
}

/// `lambda_1 .. lambda_k_max` sampled on the grid and concatenated, where
/// `lambda_k(t)` is the k-th largest of `max(0, min(t - b, d - t))`.
pub fn landscape(d: &PersistenceDiagram, params: &LandscapeParams) -> Result<FeatureVector> {
    params.validate()?;
    let pts: Vec<(f64, f64)> = oriented(d).collect();
    let grid = params.grid();
    let k = params.k_max;
    let mut values = vec![0.0; k * grid.len()];
    let mut tents = Vec::with_capacity(pts.len());
    for (ti, &t) in grid.iter().enumerate() {
        tents.clear();
        tents.extend(pts.iter().map(|&(b, e)| (t - b).min(e - t)).filter(|&h| h > 0.0));
        tents.sort_unstable_by(|a, b| b.total_cmp(a));
        for (level, &h) in tents.iter().take(k).enumerate() {
            values[level * grid.len() + ti] = h;
        }
    }
    let descriptor = format!("landscape(k_max={},bins={},range=[{},{}])", k, params.bins, params.lo, params.hi);
    Ok(FeatureVector { values, descriptor })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ImageWeight {
    /// Proportional to the larger coordinate, clipped at 0.
    #[default]
    Death,
    /// Proportional to the lifetime.
    Persistence,
}

impl ImageWeight {
    pub fn name(self) -> &'static str {
        match self {
            ImageWeight::Death => "death",
            ImageWeight::Persistence => "persistence",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "death" => Some(ImageWeight::Death),
            "persistence" => Some(ImageWeight::Persistence),
            _ => None,
        }
    }

    fn raw(self, low: f64, high: f64) -> f64 {
        match self {
            ImageWeight::Death => high.max(0.0),
            ImageWeight::Persistence => high - low,
        }
    }
}

/// Persistence-image layout fitted on training diagrams: the pixel grid in
/// the (birth, persistence) plane and the weight normalizer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImageLayout {
    pub resolution: usize,
    pub bandwidth: f64,
    pub weight: ImageWeight,
    pub birth_range: (f64, f64),
    pub pers_range: (f64, f64),
    pub weight_scale: f64,
}

impl ImageLayout {
    /// Grid spans the training points padded by `3 * bandwidth` on every
    /// side; weights are divided by their largest training value.
    pub fn fit<'a>(
        train: impl IntoIterator<Item = &'a PersistenceDiagram>,
        resolution: usize,
        bandwidth: f64,
        weight: ImageWeight,
    ) -> Result<Self> {
        if resolution == 0 {
            return Err(param("persistence image resolution must be positive"));
        }
        if !(bandwidth > 0.0 && bandwidth.is_finite()) {
            return Err(param(format!("persistence image bandwidth must be positive, got {bandwidth}")));
        }
        let (mut b_lo, mut b_hi) = (f64::INFINITY, f64::NEG_INFINITY);
        let (mut p_lo, mut p_hi) = (f64::INFINITY, f64::NEG_INFINITY);
        let mut w_max: f64 = 0.0;
        for d in train {
            for (lo, hi) in oriented(d) {
                b_lo = b_lo.min(lo);
                b_hi = b_hi.max(lo);
                p_lo = p_lo.min(hi - lo);
                p_hi = p_hi.max(hi - lo);
                w_max = w_max.max(weight.raw(lo, hi));
            }
        }
        if b_lo > b_hi {
            (b_lo, b_hi, p_lo, p_hi) = (0.0, 0.0, 0.0, 0.0);
        }
        let pad = 3.0 * bandwidth;
        Ok(ImageLayout {
            resolution,
            bandwidth,
            weight,
            birth_range: (b_lo - pad, b_hi + pad),
            pers_range: (p_lo - pad, p_hi + pad),
            weight_scale: if w_max > 0.0 { w_max } else { 1.0 },
        })
    }

    fn descriptor(&self) -> String {
        format!(
            "persistence_image(resolution={},bandwidth={},weight={},birth=[{},{}],pers=[{},{}])",
            self.resolution,
            self.bandwidth,
            self.weight.name(),
            self.birth_range.0,
            self.birth_range.1,
            self.pers_range.0,
            self.pers_range.1
        )
    }
}

/// Gaussian mass of each of the `r` cells of `[lo, hi]`, centered at `mu`.
fn cell_masses(lo: f64, hi: f64, r: usize, mu: f64, sigma: f64, out: &mut [f64]) {
    let step = (hi - lo) / r as f64;
    let z = |x: f64| math::normal_cdf((x - mu) / sigma);
    let mut prev = z(lo);
    for (i, o) in out.iter_mut().enumerate() {
        let next = z(lo + step * (i + 1) as f64);
        *o = next - prev;
        prev = next;
    }
}

/// Weighted sum of Gaussians at the `(birth, persistence)` points, each
/// integrated exactly over every pixel. Row-major with persistence rows
/// and birth columns.
pub fn persistence_image(d: &PersistenceDiagram, layout: &ImageLayout) -> FeatureVector {
    let r = layout.resolution;
    let mut values = vec![0.0; r * r];
    let mut xs = vec![0.0; r];
    let mut ys = vec![0.0; r];
    for (lo, hi) in oriented(d) {
        let w = layout.weight.raw(lo, hi) / layout.weight_scale;
        if w == 0.0 {
            continue;
        }
        cell_masses(layout.birth_range.0, layout.birth_range.1, r, lo, layout.bandwidth, &mut xs);
        cell_masses(layout.pers_range.0, layout.pers_range.1, r, hi - lo, layout.bandwidth, &mut ys);
        for (row, &y) in ys.iter().enumerate() {
            let wy = w * y;
            for (v, &x) in values[row * r..(row + 1) * r].iter_mut().zip(&xs) {
                *v += wy * x;
            }
        }
    }
    FeatureVector { values, descriptor: layout.descriptor() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::persistence::{PersistencePoint, PointKind};

    fn diagram(points: &[(f64, f64)]) -> PersistenceDiagram {
        PersistenceDiagram::new(points.iter().map(|&(b, d)| PersistencePoint::new(PointKind::Ord0, b, d)).collect())
    }

    fn at(fv: &FeatureVector, params: &LandscapeParams, level: usize, t: f64) -> f64 {
        let grid = params.grid();
        let i = grid.iter().position(|&x| (x - t).abs() < 1e-12).expect("grid point");
        fv.values[level * grid.len() + i]
    }

    #[test]
    fn landscape_fixtures() {
        let params = LandscapeParams { k_max: 3, bins: 7, lo: 0.0, hi: 3.0 };
        let one = landscape(&diagram(&[(0.0, 2.0)]), &params).unwrap();
        assert_eq!(at(&one, &params, 0, 1.0), 1.0);
        assert!(one.values[7..].iter().all(|&v| v == 0.0));
        let two = landscape(&diagram(&[(0.0, 2.0), (1.0, 3.0)]), &params).unwrap();
        assert_eq!(at(&two, &params, 0, 1.5), 0.5);
        assert_eq!(at(&two, &params, 1, 1.5), 0.5);
        assert!(landscape(&diagram(&[]), &LandscapeParams { lo: 1.0, hi: 1.0, ..params }).is_err());
    }

    #[test]
    fn landscape_mirrors_descending_points() {
        let params = LandscapeParams { k_max: 2, bins: 5, lo: 0.0, hi: 2.0 };
        let up = landscape(&diagram(&[(0.0, 2.0)]), &params).unwrap();
        let down = PersistenceDiagram::new(vec![PersistencePoint::new(PointKind::Sup0, 2.0, 0.0)]);
        assert_eq!(landscape(&down, &params).unwrap().values, up.values);
    }

    #[test]
    fn image_fixtures() {
        let d = diagram(&[(1.0, 3.0)]);
        let layout = ImageLayout {
            resolution: 20,
            bandwidth: 0.1,
            weight: ImageWeight::Death,
            birth_range: (0.0, 2.0),
            pers_range: (1.0, 3.0),
            weight_scale: 3.0,
        };
        let img = persistence_image(&d, &layout);
        let total: f64 = img.values.iter().sum();
        assert!((total - 1.0).abs() < 1e-6, "{total}");
        assert!(img.values.iter().all(|&v| v >= 0.0));
        let twice = persistence_image(&diagram(&[(1.0, 3.0), (1.0, 3.0)]), &layout);
        for (a, b) in twice.values.iter().zip(&img.values) {
            assert!((a - 2.0 * b).abs() < 1e-15);
        }
        assert!(persistence_image(&diagram(&[]), &layout).values.iter().all(|&v| v == 0.0));
        assert!(persistence_image(&diagram(&[(-1.0, 0.0)]), &layout).values.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn layout_fit_pads_training_extent() {
        let train = [diagram(&[(0.0, 1.0), (2.0, 5.0)]), diagram(&[(1.0, 1.5)])];
        let layout = ImageLayout::fit(&train, 10, 0.5, ImageWeight::Persistence).unwrap();
        assert_eq!(layout.birth_range, (-1.5, 3.5));
        assert_eq!(layout.pers_range, (-1.0, 4.5));
        assert_eq!(layout.weight_scale, 3.0);
        assert!(ImageLayout::fit(&train, 10, 0.0, ImageWeight::Death).is_err());
    }
}
