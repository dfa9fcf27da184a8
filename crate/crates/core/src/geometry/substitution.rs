use super::polygon;
use super::{Affine, Ball, Patch, Point, Tile};
use crate::{Error, Result, EPS_GEOM};

/// One child of a prototile: the prototile it is a copy of, and the map
/// placing that copy inside the parent's reference frame.
#[derive(Clone, Debug, PartialEq)]
pub struct Child {
    pub proto: usize,
    pub map: Affine,
}

/// Placement of the level-0 seed tile and the child indices along which the
/// nested supertiles around it are built: supertile `n-1` is child
/// `chain[(n-1) % chain.len()]` of supertile `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Seed {
    pub proto: usize,
    pub placement: Affine,
    pub chain: Vec<usize>,
}

/// Self-similar rule: each prototile is exactly tiled by its children.
#[derive(Clone, Debug, PartialEq)]
pub struct SubstitutionRule {
    pub name: String,
    pub expansion: f64,
    pub prototiles: Vec<Tile>,
    pub children: Vec<Vec<Child>>,
}

impl SubstitutionRule {
    pub fn validate(&self) -> Result<()> {
        if !(self.expansion > 1.0) {
            return Err(Error::Domain("expansion factor must exceed 1".into()));
        }
        if self.prototiles.is_empty() || self.children.len() != self.prototiles.len() {
            return Err(Error::Domain("one child list per prototile is required".into()));
        }
        for (p, kids) in self.children.iter().enumerate() {
            let mut area = 0.0;
            for c in kids {
                let proto = self
                    .prototiles
                    .get(c.proto)
                    .ok_or_else(|| Error::Domain(format!("child refers to missing prototile {}", c.proto)))?;
                if c.map.det() <= 0.0 {
                    return Err(Error::Domain("child maps must preserve orientation".into()));
                }
                area += proto.area() * c.map.det();
            }
            let parent = self.prototiles[p].area();
            if (area - parent).abs() > 1e-9 * parent.max(1.0) {
                return Err(Error::Domain(format!("children of prototile {p} cover area {area}, expected {parent}")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SubstitutionTiling {
    rule: SubstitutionRule,
    seed: Seed,
    levels: u32,
    top: Affine,
    top_outer: Vec<Point>,
}

impl SubstitutionTiling {
    pub fn new(rule: SubstitutionRule, seed: Seed, levels: u32) -> Result<Self> {
        rule.validate()?;
        if seed.proto >= rule.prototiles.len() || seed.chain.is_empty() {
            return Err(Error::Domain("seed must name a prototile and a nonempty child chain".into()));
        }
        for &c in &seed.chain {
            let child = rule.children[seed.proto]
                .get(c)
                .ok_or_else(|| Error::Domain(format!("seed chain refers to missing child {c}")))?;
            if child.proto != seed.proto {
                return Err(Error::Domain("seed chain must stay within the seed prototile".into()));
            }
        }
        let mut top = seed.placement;
        for n in 1..=levels as usize {
            let c = seed.chain[(n - 1) % seed.chain.len()];
            top = top.compose(&rule.children[seed.proto][c].map.inverse()?);
        }
        let top_outer = rule.prototiles[seed.proto].outer().iter().map(|&p| top.apply(p)).collect();
        Ok(SubstitutionTiling { rule, seed, levels, top, top_outer })
    }

    pub fn rule(&self) -> &SubstitutionRule {
        &self.rule
    }

    pub fn seed(&self) -> &Seed {
        &self.seed
    }

    pub fn levels(&self) -> u32 {
        self.levels
    }

    /// Same tiling moved by `v`.
    pub fn translated(&self, v: Point) -> Self {
        let mut seed = self.seed.clone();
        seed.placement = Affine::translation(v).compose(&seed.placement);
        SubstitutionTiling::new(self.rule.clone(), seed, self.levels).expect("translation keeps a valid rule")
    }

    /// Whether the ball lies inside the top-level supertile.
    pub fn covers(&self, ball: &Ball) -> bool {
        polygon::crosses_odd(ball.center, &self.top_outer)
            && polygon::boundary_distance(ball.center, &self.top_outer) >= ball.radius - 1e-12
    }

    /// Radius of the largest origin-centred ball inside the generated region.
    pub fn extent(&self) -> f64 {
        if polygon::crosses_odd(Point::ORIGIN, &self.top_outer) {
            polygon::boundary_distance(Point::ORIGIN, &self.top_outer)
        } else {
            0.0
        }
    }

    pub fn tiles_meeting(&self, ball: &Ball) -> Result<Patch> {
        if !self.covers(ball) {
            return Err(Error::Coverage(format!(
                "ball of radius {} at {:?} exceeds the level-{} supertile (inradius {:.4})",
                ball.radius,
                ball.center,
                self.levels,
                self.extent()
            )));
        }
        let mut out = Vec::new();
        self.descend(&self.top, self.seed.proto, self.levels, ball, &mut out);
        Ok(Patch::from_tiles_unchecked(out))
    }

    /// All tiles of the level-`level` supertile holding the seed tile.
    pub fn supertile(&self, level: u32) -> Result<Patch> {
        if level > self.levels {
            return Err(Error::Coverage(format!("supertile level {level} exceeds generated level {}", self.levels)));
        }
        let mut m = self.seed.placement;
        for n in 1..=level as usize {
            let c = self.seed.chain[(n - 1) % self.seed.chain.len()];
            m = m.compose(&self.rule.children[self.seed.proto][c].map.inverse()?);
        }
        let mut out = Vec::new();
        self.expand(&m, self.seed.proto, level, &mut out);
        Ok(Patch::from_tiles_unchecked(out))
    }

    fn expand(&self, m: &Affine, proto: usize, level: u32, out: &mut Vec<Tile>) {
        if level == 0 {
            out.push(self.rule.prototiles[proto].mapped(m));
            return;
        }
        for c in &self.rule.children[proto] {
            self.expand(&m.compose(&c.map), c.proto, level - 1, out);
        }
    }

    fn descend(&self, m: &Affine, proto: usize, level: u32, ball: &Ball, out: &mut Vec<Tile>) {
        let outer = self.rule.prototiles[proto].outer();
        let bb = super::BBox::of_points(&outer.iter().map(|&p| m.apply(p)).collect::<Vec<_>>());
        if !bb.overlaps(&ball.bbox(), 0.0) {
            return;
        }
        if level == 0 {
            let t = self.rule.prototiles[proto].mapped(m);
            if t.disk_area(ball) > EPS_GEOM {
                out.push(t);
            }
            return;
        }
        for c in &self.rule.children[proto] {
            self.descend(&m.compose(&c.map), c.proto, level - 1, ball, out);
        }
    }
}
