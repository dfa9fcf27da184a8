use super::{Ball, EnclosingPatches, Patch, Point, SubstitutionTiling, Tile};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct PeriodicTiling {
    fundamental: Patch,
    lattice: [Point; 2],
    reach: f64,
}

impl PeriodicTiling {
    pub fn new(fundamental: Patch, lattice: [Point; 2]) -> Result<Self> {
        if fundamental.is_empty() {
            return Err(Error::InvalidPatch("empty fundamental patch".into()));
        }
        if lattice[0].cross(lattice[1]).abs() < 1e-12 {
            return Err(Error::Domain("lattice basis is degenerate".into()));
        }
        let cell_area = lattice[0].cross(lattice[1]).abs();
        if (fundamental.support_area() - cell_area).abs() > 1e-9 * cell_area.max(1.0) {
            return Err(Error::InvalidPatch(format!(
                "fundamental patch area {} differs from the lattice cell area {cell_area}",
                fundamental.support_area()
            )));
        }
        let reach = fundamental.max_distance_from(Point::ORIGIN);
        Ok(PeriodicTiling { fundamental, lattice, reach })
    }

    pub fn fundamental(&self) -> &Patch {
        &self.fundamental
    }

    pub fn lattice(&self) -> [Point; 2] {
        self.lattice
    }

    /// Coordinates of `p` in the lattice basis.
    pub fn lattice_coords(&self, p: Point) -> (f64, f64) {
        let [a, b] = self.lattice;
        let det = a.cross(b);
        (p.cross(b) / det, a.cross(p) / det)
    }

    pub fn lattice_point(&self, m: i64, n: i64) -> Point {
        self.lattice[0] * m as f64 + self.lattice[1] * n as f64
    }

    /// Lattice vectors within `radius` of `center`.
    pub fn lattice_points_near(&self, center: Point, radius: f64) -> Vec<Point> {
        let [a, b] = self.lattice;
        let det = a.cross(b).abs();
        // |coefficient| ≤ radius · |other basis vector| / |det|
        let (cm, cn) = self.lattice_coords(center);
        let rm = radius * b.norm() / det + 1.0;
        let rn = radius * a.norm() / det + 1.0;
        let mut out = Vec::new();
        for m in (cm - rm).floor() as i64..=(cm + rm).ceil() as i64 {
            for n in (cn - rn).floor() as i64..=(cn + rn).ceil() as i64 {
                let v = self.lattice_point(m, n);
                if v.dist(center) <= radius {
                    out.push(v);
                }
            }
        }
        out
    }

    pub fn tiles_meeting(&self, ball: &Ball) -> Patch {
        let mut out = Vec::new();
        for v in self.lattice_points_near(ball.center, ball.radius + self.reach) {
            for t in self.fundamental.tiles() {
                let mut bb = t.bbox();
                bb.min = bb.min + v;
                bb.max = bb.max + v;
                if !bb.overlaps(&ball.bbox(), 0.0) {
                    continue;
                }
                let moved = t.translated(v);
                if moved.meets(ball) {
                    out.push(moved);
                }
            }
        }
        Patch::from_tiles_unchecked(out)
    }

    pub fn translated(&self, v: Point) -> Self {
        PeriodicTiling::new(self.fundamental.translated(v), self.lattice).expect("translate of a valid tiling")
    }
}

/// A tiling of the plane, or of a bounded region around the origin, that
/// produces the patch covering any requested ball on demand.
#[derive(Clone, Debug, PartialEq)]
pub enum TilingSource {
    Periodic(PeriodicTiling),
    Substitution(SubstitutionTiling),
    Explicit(Patch),
}

impl TilingSource {
    pub fn kind_name(&self) -> &'static str {
        match self {
            TilingSource::Periodic(_) => "periodic",
            TilingSource::Substitution(_) => "substitution",
            TilingSource::Explicit(_) => "explicit",
        }
    }

    /// Tiles whose intersection with `ball` has positive area.
    pub fn tiles_meeting(&self, ball: &Ball) -> Result<Patch> {
        match self {
            TilingSource::Periodic(p) => Ok(p.tiles_meeting(ball)),
            TilingSource::Substitution(s) => s.tiles_meeting(ball),
            TilingSource::Explicit(p) => {
                if ball.radius > 0.0 && !p.support_contains_ball(ball)? {
                    return Err(Error::Coverage(format!(
                        "explicit patch does not cover the ball of radius {} at {:?}",
                        ball.radius, ball.center
                    )));
                }
                Ok(p.meeting(ball))
            }
        }
    }

    pub fn window(&self, r: f64) -> Result<Patch> {
        self.tiles_meeting(&Ball::new(Point::ORIGIN, r)?)
    }

    /// The K-minimal patch: tiles meeting `k` in positive area.
    pub fn minimal_patch(&self, k: &Ball) -> Result<Patch> {
        if !(k.radius > 0.0) {
            return Err(Error::Domain("minimal patch needs a ball of positive radius".into()));
        }
        self.tiles_meeting(k)
    }

    /// Patches drawn from `window(r_max)` whose support contains `k`.
    pub fn enclosing_patches(&self, k: &Ball, r_max: f64) -> Result<EnclosingPatches> {
        if k.center.norm() + k.radius > r_max {
            return Ok(EnclosingPatches::empty());
        }
        let minimal = self.minimal_patch(k)?;
        let window = self.window(r_max)?;
        Ok(EnclosingPatches::new(minimal, window))
    }

    /// Whether a ball can be generated without a coverage error.
    pub fn covers(&self, ball: &Ball) -> bool {
        match self {
            TilingSource::Periodic(_) => true,
            TilingSource::Substitution(s) => s.covers(ball),
            TilingSource::Explicit(p) => !p.is_empty() && p.support_contains_ball(ball).unwrap_or(false),
        }
    }

    /// Radius of the largest origin-centred ball that can be generated;
    /// infinite for periodic tilings.
    pub fn extent(&self) -> f64 {
        match self {
            TilingSource::Periodic(_) => f64::INFINITY,
            TilingSource::Substitution(s) => s.extent(),
            TilingSource::Explicit(p) => {
                if p.is_empty() || !p.support_contains_ball(&Ball::centered(1e-6)).unwrap_or(false) {
                    return 0.0;
                }
                let (mut lo, mut hi) = (1e-6, p.max_distance_from(Point::ORIGIN));
                for _ in 0..60 {
                    let mid = 0.5 * (lo + hi);
                    if p.support_contains_ball(&Ball::centered(mid)).unwrap_or(false) {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                lo
            }
        }
    }

    pub fn lattice(&self) -> Option<[Point; 2]> {
        match self {
            TilingSource::Periodic(p) => Some(p.lattice()),
            _ => None,
        }
    }

    pub fn as_periodic(&self) -> Option<&PeriodicTiling> {
        match self {
            TilingSource::Periodic(p) => Some(p),
            _ => None,
        }
    }

    /// The same tiling moved by `v`.
    pub fn translated(&self, v: Point) -> TilingSource {
        match self {
            TilingSource::Periodic(p) => TilingSource::Periodic(p.translated(v)),
            TilingSource::Substitution(s) => TilingSource::Substitution(s.translated(v)),
            TilingSource::Explicit(p) => TilingSource::Explicit(p.translated(v)),
        }
    }

    /// Representative tiles: fundamental patch, prototiles or the explicit patch.
    pub fn prototiles(&self) -> Vec<Tile> {
        match self {
            TilingSource::Periodic(p) => p.fundamental().tiles().to_vec(),
            TilingSource::Substitution(s) => s.rule().prototiles.clone(),
            TilingSource::Explicit(p) => p.tiles().to_vec(),
        }
    }

    /// Largest tile diameter, scaled to level 0.
    pub fn max_tile_diameter(&self) -> f64 {
        let protos = self.prototiles();
        let scale = match self {
            TilingSource::Substitution(s) => s.seed().placement.det().sqrt(),
            _ => 1.0,
        };
        protos.iter().map(Tile::diameter).fold(0.0, f64::max) * scale
    }
}
