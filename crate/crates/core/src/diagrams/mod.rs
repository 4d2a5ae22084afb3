//! Diagram transforms: the coordinate-permutation null model, histogram
//! baselines, kind filtering, and matching distances.

mod matching;

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;

use crate::error::{param, Result};
use crate::filtration::VertexFunction;
use crate::persistence::{PersistenceDiagram, PersistencePoint, PointKind};
use crate::rng::rng_from_seed;

pub use matching::{bottleneck, wasserstein_p};

/// How each re-paired coordinate pair is ordered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Orientation {
    /// `birth <= death` for sublevel-type kinds, `birth >= death` for the
    /// others, so fake points sit on the same side as true ones.
    #[default]
    ByKind,
    /// Keep the order in which the two values were drawn.
    Unoriented,
}

/// Re-pairs the `2n` coordinates of `d` uniformly at random: one shuffle of
/// all coordinates, then consecutive pairs. The i-th output point keeps the
/// kind of the i-th input point. The result is marked fake.
pub fn permute_diagram(d: &PersistenceDiagram, seed: u64, orientation: Orientation) -> PersistenceDiagram {
    let mut coords = d.coordinates();
    let mut rng = rng_from_seed(seed);
    coords.shuffle(&mut rng);
    let points = d
        .points()
        .iter()
        .zip(coords.chunks_exact(2))
        .map(|(p, c)| {
            let (lo, hi) = if c[0] <= c[1] { (c[0], c[1]) } else { (c[1], c[0]) };
            match orientation {
                Orientation::Unoriented => PersistencePoint::new(p.kind, c[0], c[1]),
                Orientation::ByKind if p.kind.ascending() => PersistencePoint::new(p.kind, lo, hi),
                Orientation::ByKind => PersistencePoint::new(p.kind, hi, lo),
            }
        })
        .collect();
    let mut provenance = d.provenance.clone();
    provenance.fake = true;
    PersistenceDiagram::new(points).with_provenance(provenance)
}

pub fn filter_kinds(d: &PersistenceDiagram, kinds: &[PointKind]) -> PersistenceDiagram {
    let points = d.points().iter().filter(|p| kinds.contains(&p.kind)).copied().collect();
    PersistenceDiagram::new(points).with_provenance(d.provenance.clone())
}

/// Value range of a histogram, fixed on training data before any transform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistogramRange {
    pub lo: f64,
    pub hi: f64,
}

impl HistogramRange {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(param(alloc::format!("invalid histogram range [{lo}, {hi}]")));
        }
        Ok(HistogramRange { lo, hi })
    }

    /// Smallest range covering `values`; `[0, 0]` if there are none.
    pub fn fit(values: impl IntoIterator<Item = f64>) -> Self {
        let mut it = values.into_iter();
        let Some(first) = it.next() else {
            return HistogramRange { lo: 0.0, hi: 0.0 };
        };
        let (lo, hi) = it.fold((first, first), |(lo, hi), x| (lo.min(x), hi.max(x)));
        HistogramRange { lo, hi }
    }

    /// Bin of `x`; values outside the range go to the boundary bins and a
    /// degenerate range puts everything in bin 0.
    pub fn bin(&self, x: f64, bins: usize) -> usize {
        if self.hi <= self.lo {
            return 0;
        }
        let t = (x - self.lo) / (self.hi - self.lo) * bins as f64;
        if t <= 0.0 {
            0
        } else {
            (crate::math::floor(t) as usize).min(bins - 1)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HistogramVector {
    pub range: HistogramRange,
    /// Normalized to sum 1, or all zero for empty input.
    pub counts: Vec<f64>,
}

fn histogram(values: &[f64], bins: usize, range: HistogramRange) -> Result<HistogramVector> {
    if bins == 0 {
        return Err(param("histogram needs at least one bin"));
    }
    let mut counts = vec![0.0; bins];
    for &x in values {
        counts[range.bin(x, bins)] += 1.0;
    }
    if !values.is_empty() {
        let total = values.len() as f64;
        for c in &mut counts {
            *c /= total;
        }
    }
    Ok(HistogramVector { range, counts })
}

/// Histogram of all diagram coordinates.
pub fn pervec(d: &PersistenceDiagram, bins: usize, range: HistogramRange) -> Result<HistogramVector> {
    histogram(&d.coordinates(), bins, range)
}

/// Histogram of the vertex function values.
pub fn filvec(f: &VertexFunction, bins: usize, range: HistogramRange) -> Result<HistogramVector> {
    histogram(f.values(), bins, range)
}

#[cfg(test)]
mod tests {
    use super::*;
    use PointKind::*;

    fn diagram(points: &[(PointKind, f64, f64)]) -> PersistenceDiagram {
        PersistenceDiagram::new(points.iter().map(|&(k, b, d)| PersistencePoint::new(k, b, d)).collect())
    }

    fn sorted_coords(d: &PersistenceDiagram) -> Vec<f64> {
        let mut c = d.coordinates();
        c.sort_by(f64::total_cmp);
        c
    }

    #[test]
    fn permutation_keeps_coordinates_and_kinds() {
        let d = diagram(&[(Ord0, 0.0, 3.0), (Rel1, 5.0, 1.0), (Ext1, 4.0, 2.0), (Ext0, 0.0, 5.0)]);
        for seed in 0..50 {
            let p = permute_diagram(&d, seed, Orientation::ByKind);
            assert_eq!(sorted_coords(&p), sorted_coords(&d));
            assert!(p.provenance.fake);
            for k in [Ord0, Rel1, Ext0, Ext1] {
                assert_eq!(p.count(k), d.count(k));
            }
            for q in p.points() {
                assert_eq!(q.birth <= q.death, q.kind.ascending() || q.birth == q.death);
            }
        }
    }

    #[test]
    fn permuting_one_point_is_identity_up_to_orientation() {
        let d = diagram(&[(Ord0, 1.0, 2.0)]);
        for seed in 0..10 {
            assert_eq!(permute_diagram(&d, seed, Orientation::ByKind).points(), d.points());
        }
        assert!(permute_diagram(&PersistenceDiagram::default(), 3, Orientation::ByKind).is_empty());
    }

    #[test]
    fn histogram_fixtures() {
        let r01 = HistogramRange::new(0.0, 1.0).unwrap();
        assert_eq!(pervec(&diagram(&[(Ord0, 0.0, 1.0)]), 2, r01).unwrap().counts, vec![0.5, 0.5]);
        assert_eq!(pervec(&diagram(&[(Ord0, 0.0, 0.4), (Ord0, 0.6, 1.0)]), 2, r01).unwrap().counts, vec![0.5, 0.5]);
        let deg = VertexFunction::new(vec![1.0, 2.0, 1.0]).unwrap();
        let h = filvec(&deg, 2, HistogramRange::new(1.0, 2.0).unwrap()).unwrap();
        assert!((h.counts[0] - 2.0 / 3.0).abs() < 1e-15 && (h.counts[1] - 1.0 / 3.0).abs() < 1e-15);
        let flat = VertexFunction::new(vec![4.0; 5]).unwrap();
        let h = filvec(&flat, 100, HistogramRange::fit(flat.values().iter().copied())).unwrap();
        assert_eq!(h.counts[0], 1.0);
        // out-of-range values clamp
        let h = pervec(&diagram(&[(Ord0, -3.0, 7.0)]), 4, r01).unwrap();
        assert_eq!(h.counts, vec![0.5, 0.0, 0.0, 0.5]);
    }

    #[test]
    fn kind_filter() {
        let d = diagram(&[(Ext0, 0.0, 2.0), (Ext1, 2.0, 0.0)]);
        assert_eq!(filter_kinds(&d, &[Ord0, Rel1, Ext0]).points(), &[PersistencePoint::new(Ext0, 0.0, 2.0)]);
        assert_eq!(filter_kinds(&d, &PointKind::ALL), d);
        assert!(filter_kinds(&d, &[]).is_empty());
    }
}
