//! Planar tiles, patches and lazily generated tilings.

mod fixtures;
pub mod polygon;
mod patch;
mod source;
mod substitution;
mod tile;

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use fixtures::{chair_inradius, chair_rule, make_chair, make_grid, make_qp, QP_OFFSET_BOUND};
pub(crate) use tile::rings_match;
pub use patch::{EnclosingPatches, Patch};
pub(crate) use patch::{convex_hull, point_set_diameter as patch_hull_diameter};
pub use source::{PeriodicTiling, TilingSource};
pub use substitution::{Child, Seed, SubstitutionRule, SubstitutionTiling};
pub use tile::Tile;

#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl From<[f64; 2]> for Point {
    fn from(a: [f64; 2]) -> Self {
        Point::new(a[0], a[1])
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn dist(self, o: Point) -> f64 {
        (self - o).norm()
    }

    pub fn rotate(self, angle: f64) -> Point {
        let (s, c) = angle.sin_cos();
        Point::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn approx_eq(self, o: Point, tol: f64) -> bool {
        (self.x - o.x).abs() <= tol && (self.y - o.y).abs() <= tol
    }

    /// Lexicographic comparison on coordinates quantized to `q`.
    pub(crate) fn quantized(self, q: f64) -> (i64, i64) {
        ((self.x / q).round() as i64, (self.y / q).round() as i64)
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ball {
    pub center: Point,
    pub radius: f64,
}

impl Ball {
    pub fn new(center: Point, radius: f64) -> Result<Self> {
        if !(radius >= 0.0) || !radius.is_finite() || !center.is_finite() {
            return Err(Error::Domain(format!("ball radius must be finite and >= 0, got {radius}")));
        }
        Ok(Ball { center, radius })
    }

    /// Ball around the origin. Panics on a negative radius.
    pub fn centered(radius: f64) -> Self {
        Ball::new(Point::ORIGIN, radius).expect("nonnegative radius")
    }

    pub fn bbox(&self) -> BBox {
        BBox {
            min: self.center - Point::new(self.radius, self.radius),
            max: self.center + Point::new(self.radius, self.radius),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BBox {
    pub min: Point,
    pub max: Point,
}

impl BBox {
    pub fn of_points<'a>(pts: impl IntoIterator<Item = &'a Point>) -> BBox {
        let mut b = BBox {
            min: Point::new(f64::INFINITY, f64::INFINITY),
            max: Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
        };
        for p in pts {
            b.min.x = b.min.x.min(p.x);
            b.min.y = b.min.y.min(p.y);
            b.max.x = b.max.x.max(p.x);
            b.max.y = b.max.y.max(p.y);
        }
        b
    }

    pub fn union(&self, o: &BBox) -> BBox {
        BBox {
            min: Point::new(self.min.x.min(o.min.x), self.min.y.min(o.min.y)),
            max: Point::new(self.max.x.max(o.max.x), self.max.y.max(o.max.y)),
        }
    }

    pub fn overlaps(&self, o: &BBox, slack: f64) -> bool {
        self.min.x <= o.max.x + slack
            && o.min.x <= self.max.x + slack
            && self.min.y <= o.max.y + slack
            && o.min.y <= self.max.y + slack
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }

    pub fn is_empty(&self) -> bool {
        !(self.width() > 0.0 && self.height() > 0.0)
    }
}

/// Orientation-preserving affine map `p -> m p + t`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Affine {
    pub m: [[f64; 2]; 2],
    pub t: Point,
}

impl Affine {
    pub const IDENTITY: Affine = Affine { m: [[1.0, 0.0], [0.0, 1.0]], t: Point::ORIGIN };

    pub fn new(m: [[f64; 2]; 2], t: Point) -> Self {
        Affine { m, t }
    }

    pub fn translation(t: Point) -> Self {
        Affine { m: Self::IDENTITY.m, t }
    }

    pub fn similarity(angle: f64, scale: f64, t: Point) -> Self {
        let (s, c) = angle.sin_cos();
        Affine { m: [[scale * c, -scale * s], [scale * s, scale * c]], t }
    }

    pub fn apply(&self, p: Point) -> Point {
        Point::new(
            self.m[0][0] * p.x + self.m[0][1] * p.y + self.t.x,
            self.m[1][0] * p.x + self.m[1][1] * p.y + self.t.y,
        )
    }

    pub fn linear(&self, p: Point) -> Point {
        Point::new(self.m[0][0] * p.x + self.m[0][1] * p.y, self.m[1][0] * p.x + self.m[1][1] * p.y)
    }

    pub fn det(&self) -> f64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Affine) -> Affine {
        let a = &self.m;
        let b = &other.m;
        let m = [
            [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
            [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
        ];
        Affine { m, t: self.apply(other.t) }
    }

    pub fn inverse(&self) -> Result<Affine> {
        let d = self.det();
        if d.abs() < 1e-300 || !d.is_finite() {
            return Err(Error::Domain("singular affine map".into()));
        }
        let m = [[self.m[1][1] / d, -self.m[0][1] / d], [-self.m[1][0] / d, self.m[0][0] / d]];
        let inv = Affine { m, t: Point::ORIGIN };
        let t = -inv.linear(self.t);
        Ok(Affine { m, t })
    }
}

/// Finite point configuration `F = {v_1, ..., v_l}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PatternDoc", into = "PatternDoc")]
pub struct Pattern {
    points: Vec<Point>,
}

#[derive(Serialize, Deserialize)]
struct PatternDoc {
    points: Vec<Point>,
}

impl TryFrom<PatternDoc> for Pattern {
    type Error = Error;
    fn try_from(d: PatternDoc) -> Result<Self> {
        Pattern::new(d.points)
    }
}

impl From<Pattern> for PatternDoc {
    fn from(p: Pattern) -> Self {
        PatternDoc { points: p.points }
    }
}

impl Pattern {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Domain("pattern must be nonempty".into()));
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(Error::Domain("pattern points must be finite".into()));
        }
        for (i, a) in points.iter().enumerate() {
            if points[..i].iter().any(|b| a.approx_eq(*b, 0.0)) {
                return Err(Error::Domain(format!("duplicate pattern point {a:?}")));
            }
        }
        Ok(Pattern { points })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}
