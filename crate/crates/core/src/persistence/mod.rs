//! Zero-dimensional and extended persistence of vertex functions on graphs.

mod reduction;
mod sweep;

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

pub use reduction::reduce_extended;
pub use sweep::{extended_pd, sublevel_pd0, superlevel_pd0};

/// Which part of which filtration a point comes from. The variant order is
/// the canonical serialization order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PointKind {
    Ord0,
    Rel1,
    Ext0,
    Ext1,
    Sub0,
    Sup0,
}

impl PointKind {
    pub const ALL: [PointKind; 6] =
        [PointKind::Ord0, PointKind::Rel1, PointKind::Ext0, PointKind::Ext1, PointKind::Sub0, PointKind::Sup0];
    pub const EXTENDED: [PointKind; 4] = [PointKind::Ord0, PointKind::Rel1, PointKind::Ext0, PointKind::Ext1];

    pub fn name(self) -> &'static str {
        match self {
            PointKind::Ord0 => "ord0",
            PointKind::Rel1 => "rel1",
            PointKind::Ext0 => "ext0",
            PointKind::Ext1 => "ext1",
            PointKind::Sub0 => "sub0",
            PointKind::Sup0 => "sup0",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name().eq_ignore_ascii_case(s))
    }

    /// True for kinds whose points satisfy `birth <= death`.
    pub fn ascending(self) -> bool {
        matches!(self, PointKind::Ord0 | PointKind::Ext0 | PointKind::Sub0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PersistencePoint {
    pub birth: f64,
    pub death: f64,
    pub kind: PointKind,
}

impl PersistencePoint {
    pub fn new(kind: PointKind, birth: f64, death: f64) -> Self {
        PersistencePoint { birth, death, kind }
    }

    pub fn lifetime(&self) -> f64 {
        (self.death - self.birth).abs()
    }

    fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.kind
            .cmp(&other.kind)
            .then(self.birth.total_cmp(&other.birth))
            .then(self.death.total_cmp(&other.death))
    }
}

/// Where a diagram came from.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Provenance {
    pub dataset: String,
    pub graph_id: String,
    pub filtration: String,
    pub fake: bool,
}

/// Multiset of persistence points, kept in canonical `(kind, birth, death)`
/// order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PersistenceDiagram {
    points: Vec<PersistencePoint>,
    pub provenance: Provenance,
}

impl PersistenceDiagram {
    pub fn new(mut points: Vec<PersistencePoint>) -> Self {
        points.sort_by(PersistencePoint::canonical_cmp);
        PersistenceDiagram { points, provenance: Provenance::default() }
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    pub fn points(&self) -> &[PersistencePoint] {
        &self.points
    }

    pub fn into_points(self) -> Vec<PersistencePoint> {
        self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn count(&self, kind: PointKind) -> usize {
        self.points.iter().filter(|p| p.kind == kind).count()
    }

    /// All `2n` coordinates, births and deaths interleaved point by point.
    pub fn coordinates(&self) -> Vec<f64> {
        self.points.iter().flat_map(|p| [p.birth, p.death]).collect()
    }

    /// `(birth, death)` pairs, kinds dropped.
    pub fn pairs(&self) -> Vec<[f64; 2]> {
        self.points.iter().map(|p| [p.birth, p.death]).collect()
    }

    /// Union of two diagrams; provenance taken from `self`.
    pub fn merged(&self, other: &PersistenceDiagram) -> PersistenceDiagram {
        let mut pts = self.points.clone();
        pts.extend_from_slice(&other.points);
        PersistenceDiagram::new(pts).with_provenance(self.provenance.clone())
    }

    pub fn min_max(&self) -> Option<(f64, f64)> {
        let mut it = self.points.iter().flat_map(|p| [p.birth, p.death]);
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), x| (lo.min(x), hi.max(x))))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiagramStats {
    pub points: usize,
    /// Points whose lifetime is below a tenth of the longest lifetime.
    pub near_diagonal: usize,
}

pub fn diagram_stats(d: &PersistenceDiagram) -> DiagramStats {
    let longest = d.points.iter().map(PersistencePoint::lifetime).fold(0.0, f64::max);
    let near_diagonal = d.points.iter().filter(|p| p.lifetime() < longest / 10.0).count();
    DiagramStats { points: d.len(), near_diagonal }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn canonical_order() {
        let d = PersistenceDiagram::new(vec![
            PersistencePoint::new(PointKind::Ext1, 2.0, 0.0),
            PersistencePoint::new(PointKind::Ord0, 1.0, 3.0),
            PersistencePoint::new(PointKind::Ord0, 0.0, 5.0),
        ]);
        let kinds: Vec<_> = d.points().iter().map(|p| (p.kind, p.birth)).collect();
        assert_eq!(kinds, vec![(PointKind::Ord0, 0.0), (PointKind::Ord0, 1.0), (PointKind::Ext1, 2.0)]);
    }

    #[test]
    fn stats() {
        let d = PersistenceDiagram::new(vec![
            PersistencePoint::new(PointKind::Ord0, 0.0, 10.0),
            PersistencePoint::new(PointKind::Ord0, 0.0, 0.5),
        ]);
        assert_eq!(diagram_stats(&d), DiagramStats { points: 2, near_diagonal: 1 });
        let same = PersistenceDiagram::new(vec![PersistencePoint::new(PointKind::Ext0, 1.0, 2.0); 3]);
        assert_eq!(diagram_stats(&same).near_diagonal, 0);
        assert_eq!(diagram_stats(&PersistenceDiagram::default()), DiagramStats { points: 0, near_diagonal: 0 });
    }

    #[test]
    fn kind_names_round_trip() {
        for k in PointKind::ALL {
            assert_eq!(PointKind::parse(k.name()), Some(k));
        }
        assert_eq!(PointKind::parse("EXT1"), Some(PointKind::Ext1));
        assert_eq!(PointKind::parse("ext2"), None);
    }
}
