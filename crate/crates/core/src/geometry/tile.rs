use super::polygon;
use super::{Affine, BBox, Ball, Point};
use crate::{Error, Result, EPS_GEOM};

/// Vertex-matching tolerance for tile equality.
pub(crate) const MATCH_TOL: f64 = 1e-6;

/// Polygon with holes. The outer ring is counter-clockwise, holes are
/// clockwise, and every ring starts at its lexicographically smallest vertex.
#[derive(Clone, Debug, serde::Serialize, serde::Deserialize)]
#[serde(try_from = "crate::io::TileDoc", into = "crate::io::TileDoc")]
pub struct Tile {
    outer: Vec<Point>,
    holes: Vec<Vec<Point>>,
    label: Option<String>,
    class_id: String,
    area: f64,
    centroid: Point,
    bbox: BBox,
}

impl PartialEq for Tile {
    fn eq(&self, other: &Self) -> bool {
        self.approx_eq(other, MATCH_TOL)
    }
}

fn canonical_start(ring: &mut [Point]) {
    let k = (0..ring.len())
        .min_by(|&i, &j| {
            let (a, b) = (ring[i].quantized(EPS_GEOM), ring[j].quantized(EPS_GEOM));
            a.cmp(&b)
        })
        .unwrap_or(0);
    ring.rotate_left(k);
}

fn oriented(mut ring: Vec<Point>, ccw: bool) -> Vec<Point> {
    if (polygon::signed_area(&ring) > 0.0) != ccw {
        ring.reverse();
    }
    canonical_start(&mut ring);
    ring
}

impl Tile {
    /// Validates and canonicalizes a tile.
    pub fn new(outer: Vec<Point>, holes: Vec<Vec<Point>>, class_id: impl Into<String>) -> Result<Tile> {
        if outer.iter().chain(holes.iter().flatten()).any(|p| !p.is_finite()) {
            return Err(Error::InvalidTile("non-finite vertex".into()));
        }
        if !polygon::is_simple(&outer) {
            return Err(Error::InvalidTile("outer ring is not a simple polygon".into()));
        }
        if polygon::signed_area(&outer).abs() <= EPS_GEOM {
            return Err(Error::InvalidTile("outer ring has zero area".into()));
        }
        for (i, h) in holes.iter().enumerate() {
            if !polygon::is_simple(h) || polygon::signed_area(h).abs() <= EPS_GEOM {
                return Err(Error::InvalidTile(format!("hole {i} is degenerate or not simple")));
            }
            for &v in h {
                if !polygon::crosses_odd(v, &outer) || polygon::boundary_distance(v, &outer) <= EPS_GEOM {
                    return Err(Error::InvalidTile(format!("hole {i} is not strictly inside the outer ring")));
                }
            }
            for (a, b) in polygon::edges(h) {
                for (c, d) in polygon::edges(&outer) {
                    if polygon::segments_touch(a, b, c, d) {
                        return Err(Error::InvalidTile(format!("hole {i} touches the outer ring")));
                    }
                }
            }
            for (j, g) in holes.iter().enumerate().take(i) {
                let touching = polygon::edges(h)
                    .any(|(a, b)| polygon::edges(g).any(|(c, d)| polygon::segments_touch(a, b, c, d)));
                let nested = polygon::crosses_odd(h[0], g) || polygon::crosses_odd(g[0], h);
                if touching || nested {
                    return Err(Error::InvalidTile(format!("holes {j} and {i} intersect")));
                }
            }
        }
        let outer = oriented(outer, true);
        let holes: Vec<Vec<Point>> = holes.into_iter().map(|h| oriented(h, false)).collect();
        Ok(Self::assemble(outer, holes, None, class_id.into()))
    }

    fn assemble(outer: Vec<Point>, holes: Vec<Vec<Point>>, label: Option<String>, class_id: String) -> Tile {
        let mut area = polygon::signed_area(&outer);
        let (mut mx, mut my) = polygon::moments(&outer);
        for h in &holes {
            area += polygon::signed_area(h);
            let (hx, hy) = polygon::moments(h);
            mx += hx;
            my += hy;
        }
        let bbox = BBox::of_points(&outer);
        Tile { outer, holes, label, class_id, area, centroid: Point::new(mx / area, my / area), bbox }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Tile {
        self.label = Some(label.into());
        self
    }

    pub fn outer(&self) -> &[Point] {
        &self.outer
    }

    pub fn holes(&self) -> &[Vec<Point>] {
        &self.holes
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn class_id(&self) -> &str {
        &self.class_id
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn centroid(&self) -> Point {
        self.centroid
    }

    pub fn bbox(&self) -> BBox {
        self.bbox
    }

    pub fn rings(&self) -> Vec<&[Point]> {
        std::iter::once(self.outer.as_slice()).chain(self.holes.iter().map(Vec::as_slice)).collect()
    }

    pub fn vertices(&self) -> impl Iterator<Item = Point> + '_ {
        self.outer.iter().copied()
    }

    /// Image under an orientation-preserving affine map.
    pub fn mapped(&self, f: &Affine) -> Tile {
        let map_ring = |r: &[Point]| {
            let mut v: Vec<Point> = r.iter().map(|&p| f.apply(p)).collect();
            canonical_start(&mut v);
            v
        };
        let outer = map_ring(&self.outer);
        let holes = self.holes.iter().map(|h| map_ring(h)).collect();
        Self::assemble(outer, holes, self.label.clone(), self.class_id.clone())
    }

    /// Image where the outer ring and the holes move by separate translations.
    pub(crate) fn mapped_pair(&self, outer_shift: Point, hole_shift: Point) -> Tile {
        let outer = self.outer.iter().map(|&p| p + outer_shift).collect();
        let holes = self.holes.iter().map(|h| h.iter().map(|&p| p + hole_shift).collect()).collect();
        Self::assemble(outer, holes, self.label.clone(), self.class_id.clone())
    }

    pub fn translated(&self, v: Point) -> Tile {
        self.mapped(&Affine::translation(v))
    }

    /// Euclidean distance from `p` to the tile (zero inside).
    pub fn distance_to(&self, p: Point) -> f64 {
        if self.contains(p) {
            return 0.0;
        }
        self.rings()
            .iter()
            .map(|r| polygon::boundary_distance(p, r))
            .fold(f64::INFINITY, f64::min)
    }

    /// Closed-region containment.
    pub fn contains(&self, p: Point) -> bool {
        let on_boundary = self.rings().iter().any(|r| polygon::boundary_distance(p, r) <= 1e-12);
        if on_boundary {
            return true;
        }
        polygon::crosses_odd(p, &self.outer) && !self.holes.iter().any(|h| polygon::crosses_odd(p, h))
    }

    /// Small disk inside the tile, next to the midpoint of its longest
    /// outer edge; used to look the tile up in a generator.
    pub fn probe(&self) -> Ball {
        let (a, b) = polygon::edges(&self.outer)
            .max_by(|x, y| x.0.dist(x.1).total_cmp(&y.0.dist(y.1)))
            .expect("tile has edges");
        let len = a.dist(b);
        let off = (0.01 * len).min(2e-3);
        let inward = Point::new(-(b - a).y, (b - a).x) * (1.0 / len);
        Ball { center: (a + b) * 0.5 + inward * off, radius: 0.5 * off }
    }

    /// Farthest distance from `p` to a point of the tile.
    pub fn max_distance_from(&self, p: Point) -> f64 {
        self.outer.iter().map(|v| v.dist(p)).fold(0.0, f64::max)
    }

    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for (i, a) in self.outer.iter().enumerate() {
            for b in &self.outer[i + 1..] {
                d = d.max(a.dist(*b));
            }
        }
        d
    }

    pub fn disk_area(&self, ball: &Ball) -> f64 {
        if !self.bbox.overlaps(&ball.bbox(), 0.0) {
            return 0.0;
        }
        self.rings().iter().map(|r| polygon::disk_ring_area(r, ball.center, ball.radius)).sum()
    }

    pub fn meets(&self, ball: &Ball) -> bool {
        self.disk_area(ball) > EPS_GEOM
    }

    pub fn overlap_area(&self, other: &Tile) -> f64 {
        if !self.bbox.overlaps(&other.bbox, 0.0) {
            return 0.0;
        }
        polygon::region_intersection_area(&self.rings(), &other.rings())
    }

    pub fn interiors_disjoint(&self, other: &Tile) -> bool {
        self.overlap_area(other) <= EPS_GEOM
    }

    /// Same class and same rings up to `tol`, allowing any cyclic start.
    pub fn approx_eq(&self, other: &Tile, tol: f64) -> bool {
        if self.class_id != other.class_id
            || self.holes.len() != other.holes.len()
            || !self.centroid.approx_eq(other.centroid, tol * 10.0)
        {
            return false;
        }
        if !rings_match(&self.outer, &other.outer, tol) {
            return false;
        }
        let mut used = vec![false; other.holes.len()];
        self.holes.iter().all(|h| {
            let found = other.holes.iter().enumerate().find(|(k, g)| !used[*k] && rings_match(h, g, tol));
            match found {
                Some((k, _)) => {
                    used[k] = true;
                    true
                }
                None => false,
            }
        })
    }
}

pub(crate) fn rings_match(a: &[Point], b: &[Point], tol: f64) -> bool {
    let n = a.len();
    if n != b.len() {
        return false;
    }
    (0..n).any(|s| (0..n).all(|i| a[i].approx_eq(b[(i + s) % n], tol)))
}
