//! Impact functions `θ(s, t)` bounding how far a perturbation of norm `t`
//! can move the boundary of a ball of radius `s`, and checks of their axioms.

use std::f64::consts::SQRT_2;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::geometry::{Ball, Point, Tile};
use crate::groups::{Action, BaseKind, GroupElement};
use crate::{Error, Result, DIST_CAP};

#[derive(Clone, Copy)]
pub struct ThetaFn {
    name: &'static str,
    f: fn(f64, f64) -> f64,
}

impl std::fmt::Debug for ThetaFn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ThetaFn({})", self.name)
    }
}

impl PartialEq for ThetaFn {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
    }
}

impl ThetaFn {
    /// Any `fn(s, t)`; axioms are not checked here.
    pub fn custom(name: &'static str, f: fn(f64, f64) -> f64) -> Self {
        ThetaFn { name, f }
    }

    pub fn identity() -> Self {
        ThetaFn { name: "identity", f: |_, t| t }
    }

    pub fn affine() -> Self {
        ThetaFn { name: "affine", f: |s, t| s * t + t }
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "identity" => Ok(Self::identity()),
            "affine" => Ok(Self::affine()),
            other => Err(Error::Parse(format!("unknown theta `{other}`"))),
        }
    }

    pub fn name(&self) -> &'static str {
        self.name
    }

    pub fn eval(&self, s: f64, t: f64) -> Result<f64> {
        if !(s > SQRT_2) {
            return Err(Error::Domain(format!("theta needs s > √2, got {s}")));
        }
        if !(t >= 0.0) {
            return Err(Error::Domain(format!("theta needs t >= 0, got {t}")));
        }
        Ok((self.f)(s, t))
    }

    /// Evaluation without the domain check, for callers that guarantee it.
    pub(crate) fn raw(&self, s: f64, t: f64) -> f64 {
        (self.f)(s, t)
    }
}

#[derive(Clone, Debug)]
pub struct ThetaGrid {
    pub s_values: Vec<f64>,
    pub t_values: Vec<f64>,
    pub step: f64,
}

impl Default for ThetaGrid {
    fn default() -> Self {
        let s_values = (0..50).map(|i| SQRT_2 + 0.01 + i as f64 * 0.4).collect();
        let t_values = (0..50).map(|i| i as f64 * 0.1).collect();
        ThetaGrid { s_values, t_values, step: 1e-3 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomReport {
    pub name: String,
    pub passed: bool,
    pub checks: usize,
    pub counterexample: Option<String>,
}

/// Checks monotonicity, subadditivity, `θ(s,0) = 0` and continuity on a grid.
pub fn check_theta_axioms(theta: &ThetaFn, grid: &ThetaGrid) -> AxiomReport {
    let mut checks = 0;
    let fail = |msg: String, checks| AxiomReport {
        name: theta.name.to_string(),
        passed: false,
        checks,
        counterexample: Some(msg),
    };
    let h = grid.step;
    for &s in &grid.s_values {
        let f = |t: f64| theta.raw(s, t);
        checks += 1;
        if f(0.0) != 0.0 {
            return fail(format!("theta({s}, 0) = {} is not 0", f(0.0)), checks);
        }
        for &t in &grid.t_values {
            checks += 4;
            let v = f(t);
            if !(v >= 0.0) {
                return fail(format!("theta({s}, {t}) = {v} is negative"), checks);
            }
            if !(f(t + h) > v) {
                return fail(format!("not strictly increasing in t at ({s}, {t})"), checks);
            }
            if !(theta.raw(s + h, t) >= v) {
                return fail(format!("decreasing in s at ({s}, {t})"), checks);
            }
            let tiny = 1e-9;
            let jump = (f(t + tiny) - v).abs();
            if !(jump <= 1e-6 * (1.0 + v.abs())) {
                return fail(format!("discontinuous at ({s}, {t}), jump {jump}"), checks);
            }
            for &u in &grid.t_values {
                checks += 1;
                let lhs = f(t + u);
                let rhs = v + f(u);
                if lhs > rhs + 1e-12 * (1.0 + rhs.abs()) {
                    return fail(format!("not subadditive at s={s}, a={t}, b={u}: {lhs} > {rhs}"), checks);
                }
            }
        }
    }
    AxiomReport { name: theta.name.to_string(), passed: true, checks, counterexample: None }
}

#[derive(Clone, Debug, Serialize)]
pub struct G5Report {
    pub action: String,
    pub theta: String,
    pub samples: usize,
    pub passed: usize,
    pub counterexample: Option<String>,
}

fn random_tile(rng: &mut ChaCha8Rng, base: BaseKind, centre: Point) -> Tile {
    let angle = rng.gen_range(0.0..std::f64::consts::TAU);
    let size = rng.gen_range(0.5..1.5);
    if base == BaseKind::Qp {
        let sq = |h: f64, c: Point| {
            vec![c + Point::new(-h, -h), c + Point::new(h, -h), c + Point::new(h, h), c + Point::new(-h, h)]
        };
        let off = Point::new(rng.gen_range(-0.1..0.1), rng.gen_range(-0.1..0.1));
        return Tile::new(sq(0.5, centre), vec![sq(1.0 / 6.0, centre + off)], "qp").expect("annulus");
    }
    let l = [(0.0, 0.0), (2.0, 0.0), (2.0, 1.0), (1.0, 1.0), (1.0, 2.0), (0.0, 2.0)];
    let pts = l
        .iter()
        .map(|&(x, y)| centre + Point::new(x - 0.75, y - 0.75).rotate(angle) * size)
        .collect();
    Tile::new(pts, vec![], "shape").expect("rotated L")
}

fn random_element(rng: &mut ChaCha8Rng, base: BaseKind, mag: f64) -> GroupElement {
    let v = Point::new(rng.gen_range(-mag..mag), rng.gen_range(-mag..mag));
    match base {
        BaseKind::Translation => GroupElement::Translation(v),
        BaseKind::Rigid => GroupElement::rigid(rng.gen_range(-mag..mag), v),
        BaseKind::Homothety => GroupElement::Homothety { scale: rng.gen_range(-mag..mag).exp(), v },
        BaseKind::Qp => {
            let w = v + Point::new(rng.gen_range(-0.05..0.05), rng.gen_range(-0.05..0.05));
            GroupElement::Pair { outer: v, inner: w }
        }
    }
}

/// Samples patches supported outside `B_s` and admissible `g` with
/// `θ(s, ‖g‖) < √2/2`, and checks that `g` keeps the support outside
/// `B_{s − θ(s, ‖g‖)}`.
pub fn check_g5(action: &Action, theta: &ThetaFn, samples: usize, seed: u64) -> G5Report {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = action.tile_base();
    let mut passed = 0;
    let mut counterexample = None;
    let mut done = 0;
    while done < samples {
        let n_tiles = rng.gen_range(1..4);
        let s = rng.gen_range(SQRT_2 + 0.01..8.0);
        let mut tiles: Vec<Tile> = Vec::new();
        for _ in 0..n_tiles {
            let dir = rng.gen_range(0.0..std::f64::consts::TAU);
            let centre = Point::new(1.0, 0.0).rotate(dir) * (s + rng.gen_range(1.5..6.0));
            let t = random_tile(&mut rng, base, centre);
            if t.distance_to(Point::ORIGIN) >= s && tiles.iter().all(|o| o.interiors_disjoint(&t)) {
                tiles.push(t);
            }
        }
        if tiles.is_empty() {
            continue;
        }
        let mag = rng.gen_range(1e-6..0.4);
        let g = if action.is_single_group() {
            random_element(&mut rng, base, mag)
        } else {
            let components = (0..tiles.len()).map(|i| (i, random_element(&mut rng, base, mag))).collect();
            GroupElement::Piecewise { base, components }
        };
        let Ok(norm) = g.norm() else { continue };
        let shrink = theta.raw(s, norm);
        if !(shrink < DIST_CAP) {
            continue;
        }
        let patch = crate::geometry::Patch::from_tiles_unchecked(tiles);
        let Ok(image) = action.apply(&g, &patch) else { continue };
        done += 1;
        let dist = image.distance_to(Point::ORIGIN);
        let ball = Ball::centered((s - shrink).max(0.0));
        let overlap: f64 = image.tiles().iter().map(|t| t.disk_area(&ball)).sum();
        if dist >= s - shrink - 1e-9 || overlap <= crate::EPS_GEOM {
            passed += 1;
        } else if counterexample.is_none() {
            counterexample = Some(format!("s={s}, |g|={norm}, image at distance {dist} < {}", s - shrink));
        }
    }
    G5Report {
        action: action.name().to_string(),
        theta: theta.name.to_string(),
        samples,
        passed,
        counterexample,
    }
}
