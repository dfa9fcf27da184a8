use std::cmp::Ordering;

use itertools::Itertools;

use super::{Affine, BBox, Ball, Point, Tile};
use crate::{Error, Result, EPS_GEOM};

/// Finite set of tiles with pairwise disjoint interiors, kept in canonical
/// order (quantized centroid, then area).
#[derive(Clone, Debug, serde::Serialize, serde::Deserialize)]
#[serde(try_from = "Vec<Tile>", into = "Vec<Tile>")]
pub struct Patch {
    tiles: Vec<Tile>,
    bbox: Option<BBox>,
}

impl PartialEq for Patch {
    fn eq(&self, other: &Self) -> bool {
        self.tiles == other.tiles
    }
}

fn canonical_cmp(a: &Tile, b: &Tile) -> Ordering {
    a.centroid()
        .quantized(EPS_GEOM)
        .cmp(&b.centroid().quantized(EPS_GEOM))
        .then(a.area().total_cmp(&b.area()))
        .then_with(|| a.class_id().cmp(b.class_id()))
}

impl TryFrom<Vec<Tile>> for Patch {
    type Error = Error;
    fn try_from(tiles: Vec<Tile>) -> Result<Patch> {
        Patch::new(tiles)
    }
}

impl From<Patch> for Vec<Tile> {
    fn from(p: Patch) -> Self {
        p.tiles
    }
}

impl Patch {
    /// Builds a patch, checking pairwise interior-disjointness.
    pub fn new(tiles: Vec<Tile>) -> Result<Patch> {
        let p = Patch::from_tiles_unchecked(tiles);
        for (i, a) in p.tiles.iter().enumerate() {
            for (j, b) in p.tiles.iter().enumerate().skip(i + 1) {
                let ov = a.overlap_area(b);
                if ov > EPS_GEOM {
                    return Err(Error::InvalidPatch(format!("tiles {i} and {j} overlap with area {ov:.3e}")));
                }
            }
        }
        Ok(p)
    }

    pub fn empty() -> Patch {
        Patch { tiles: Vec::new(), bbox: None }
    }

    /// Sorts into canonical order without the disjointness check; for tiles
    /// produced by trusted generators.
    pub(crate) fn from_tiles_unchecked(mut tiles: Vec<Tile>) -> Patch {
        tiles.sort_by(canonical_cmp);
        let bbox = tiles.iter().map(Tile::bbox).reduce(|a, b| a.union(&b));
        Patch { tiles, bbox }
    }

    pub fn tiles(&self) -> &[Tile] {
        &self.tiles
    }

    pub fn into_tiles(self) -> Vec<Tile> {
        self.tiles
    }

    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }

    pub fn bbox(&self) -> Option<BBox> {
        self.bbox
    }

    pub fn support_area(&self) -> f64 {
        self.tiles.iter().map(Tile::area).sum()
    }

    /// Diameter of the support.
    pub fn diameter(&self) -> Result<f64> {
        if self.is_empty() {
            return Err(Error::InvalidPatch("diameter of an empty patch".into()));
        }
        Ok(point_set_diameter(self.tiles.iter().flat_map(|t| t.vertices())))
    }

    /// Whether `b` lies in the support, by area accounting.
    pub fn support_contains_ball(&self, b: &Ball) -> Result<bool> {
        if self.is_empty() {
            return Err(Error::InvalidPatch("coverage test on an empty patch".into()));
        }
        let covered: f64 = self.tiles.iter().map(|t| t.disk_area(b)).sum();
        let full = std::f64::consts::PI * b.radius * b.radius;
        Ok(covered >= full - EPS_GEOM.max(full * 1e-12))
    }

    pub fn position(&self, tile: &Tile) -> Option<usize> {
        let key = tile.centroid().quantized(EPS_GEOM);
        // canonical order makes a narrow scan around the key sufficient
        let start = self.tiles.partition_point(|t| {
            let k = t.centroid().quantized(EPS_GEOM);
            k.0 < key.0 - 20_000
        });
        self.tiles[start..]
            .iter()
            .take_while(|t| t.centroid().quantized(EPS_GEOM).0 <= key.0 + 20_000)
            .position(|t| t.approx_eq(tile, super::tile::MATCH_TOL))
            .map(|k| k + start)
    }

    pub fn contains_tile(&self, tile: &Tile) -> bool {
        self.position(tile).is_some()
    }

    pub fn is_subpatch_of(&self, other: &Patch) -> bool {
        self.tiles.iter().all(|t| other.contains_tile(t))
    }

    /// Tiles whose intersection with `ball` has positive area.
    pub fn meeting(&self, ball: &Ball) -> Patch {
        Patch::from_tiles_unchecked(self.tiles.iter().filter(|t| t.meets(ball)).cloned().collect())
    }

    pub fn mapped(&self, f: &Affine) -> Patch {
        Patch::from_tiles_unchecked(self.tiles.iter().map(|t| t.mapped(f)).collect())
    }

    pub fn translated(&self, v: Point) -> Patch {
        self.mapped(&Affine::translation(v))
    }

    pub fn union(&self, other: &Patch) -> Patch {
        let mut tiles = self.tiles.clone();
        tiles.extend(other.tiles.iter().filter(|t| !self.contains_tile(t)).cloned());
        Patch::from_tiles_unchecked(tiles)
    }

    /// Distance from `p` to the support.
    pub fn distance_to(&self, p: Point) -> f64 {
        self.tiles.iter().map(|t| t.distance_to(p)).fold(f64::INFINITY, f64::min)
    }

    /// Radius of the smallest ball around `p` containing the support.
    pub fn max_distance_from(&self, p: Point) -> f64 {
        self.tiles.iter().map(|t| t.max_distance_from(p)).fold(0.0, f64::max)
    }
}

pub(crate) fn point_set_diameter(pts: impl Iterator<Item = Point>) -> f64 {
    let hull = convex_hull(pts.collect());
    let mut d: f64 = 0.0;
    for (i, a) in hull.iter().enumerate() {
        for b in &hull[i + 1..] {
            d = d.max(a.dist(*b));
        }
    }
    d
}

/// Andrew's monotone chain.
pub(crate) fn convex_hull(mut pts: Vec<Point>) -> Vec<Point> {
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<Point> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && (lower[lower.len() - 1] - lower[lower.len() - 2]).cross(p - lower[lower.len() - 2]) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && (upper[upper.len() - 1] - upper[upper.len() - 2]).cross(p - upper[upper.len() - 2]) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Lazy enumeration of patches drawn from a window whose support contains a
/// ball, in nondecreasing tile count.
pub struct EnclosingPatches {
    inner: Box<dyn Iterator<Item = Patch> + Send>,
}

impl EnclosingPatches {
    pub(crate) fn new(minimal: Patch, window: Patch) -> Self {
        let extras: Vec<Tile> = window.tiles().iter().filter(|t| !minimal.contains_tile(t)).cloned().collect();
        let m = extras.len();
        let inner = (0..=m).flat_map(move |k| {
            let minimal = minimal.clone();
            let extras = extras.clone();
            (0..m).combinations(k).map(move |idx| {
                let mut tiles = minimal.tiles().to_vec();
                tiles.extend(idx.into_iter().map(|i| extras[i].clone()));
                Patch::from_tiles_unchecked(tiles)
            })
        });
        EnclosingPatches { inner: Box::new(inner) }
    }

    pub(crate) fn empty() -> Self {
        EnclosingPatches { inner: Box::new(std::iter::empty()) }
    }
}

impl Iterator for EnclosingPatches {
    type Item = Patch;
    fn next(&mut self) -> Option<Patch> {
        self.inner.next()
    }
}
