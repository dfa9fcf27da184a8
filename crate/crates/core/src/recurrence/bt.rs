use serde::{Deserialize, Serialize};

use super::{admissible_kind, missing_tile, place, usable_radius, CopySet};
use crate::geometry::{Patch, PeriodicTiling, Point};
use crate::groups::{Action, GroupElement};
use crate::ramsey::box_points;
use crate::{Ball, Error, Pattern, Result, TilingSource, Verdict};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BtCopy {
    /// Index of the pattern point.
    pub i: usize,
    /// Coefficients of `w` in the pattern; all integers except entry `i`.
    pub alpha: Vec<f64>,
    pub w: Point,
    pub g: GroupElement,
    /// `w + λ v_i + t`, where the perturbed patch lands.
    pub anchor: Point,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BtEntry {
    pub lambda: f64,
    pub t: Point,
    pub copies: Vec<BtCopy>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BtCertificate {
    pub action: String,
    pub eps: f64,
    pub q: u32,
    pub pattern: Pattern,
    pub patch: Patch,
    pub entries: Vec<BtEntry>,
}

#[derive(Clone, Copy, Debug)]
pub struct BtOptions {
    pub q_max: u32,
    /// Window radius for the copy search; defaults to what the pattern and
    /// `ε` need, clipped to the generator's extent.
    pub window_r: Option<f64>,
}

impl Default for BtOptions {
    fn default() -> Self {
        BtOptions { q_max: 12, window_r: None }
    }
}

/// Where copies of the patch sit: the lattice of a periodic tiling, or an
/// explicit list found in a window.
enum Placements {
    Lattice(PeriodicTiling),
    Copies(CopySet),
}

impl Placements {
    fn nearest_lattice(p: &PeriodicTiling, s: Point) -> Point {
        let (a, b) = p.lattice_coords(s);
        let (a0, b0) = (a.round() as i64, b.round() as i64);
        let mut best = p.lattice_point(a0, b0);
        for da in -1..=1 {
            for db in -1..=1 {
                let c = p.lattice_point(a0 + da, b0 + db);
                if c.dist(s) < best.dist(s) - 1e-12 {
                    best = c;
                }
            }
        }
        best
    }

    /// Translations `t` putting `target + t` on a copy, shortest first.
    fn anchors(&self, target: Point) -> Vec<Point> {
        match self {
            Placements::Lattice(p) => vec![Self::nearest_lattice(p, target) - target],
            Placements::Copies(c) => {
                c.copies.iter().filter_map(|h| h.apply_point(Point::ORIGIN).ok()).map(|s| s - target).collect()
            }
        }
    }

    fn near(&self, s: Point, eps: f64) -> Option<GroupElement> {
        match self {
            Placements::Lattice(p) => {
                let d = Self::nearest_lattice(p, s) - s;
                (d.norm() < eps).then_some(GroupElement::Translation(d))
            }
            Placements::Copies(c) => c.near(s, eps).map(|(g, _)| g),
        }
    }
}

fn ceil_scale(lambda: f64) -> i64 {
    let r = lambda.round();
    if (lambda - r).abs() < 1e-12 {
        r as i64
    } else {
        lambda.ceil() as i64
    }
}

/// Integer vectors `u` for copy `i`, with `|α_j| ≤ q` where `α = u` except
/// `α_i = (k − λ) + u_i`, ordered by `Σ|α_j|` then lexicographically.
fn alpha_cube(l: usize, i: usize, shift: f64, q: u32) -> Vec<(Vec<i64>, Vec<f64>)> {
    let qi = q as i64;
    let mut ranges = vec![(-qi, qi + 1); l];
    ranges[i] = ((-(q as f64) - shift).ceil() as i64, (q as f64 - shift).floor() as i64 + 1);
    let mut out: Vec<(Vec<i64>, Vec<f64>)> = box_points(&ranges)
        .map(|u| {
            let alpha = u.iter().enumerate().map(|(j, &x)| x as f64 + if j == i { shift } else { 0.0 }).collect();
            (u, alpha)
        })
        .filter(|(_, a): &(Vec<i64>, Vec<f64>)| a.iter().all(|x| x.abs() <= q as f64 + 1e-12))
        .collect();
    out.sort_by(|a, b| {
        let s = |v: &[f64]| v.iter().map(|x| x.abs()).sum::<f64>();
        s(&a.1).total_cmp(&s(&b.1)).then_with(|| a.0.cmp(&b.0))
    });
    out
}

fn combo(v: &[Point], u: &[i64]) -> Point {
    v.iter().zip(u).fold(Point::ORIGIN, |acc, (&p, &c)| acc + p * c as f64)
}

fn solve_lambda(pl: &Placements, v: &[Point], lambda: f64, eps: f64, q: u32) -> Option<BtEntry> {
    let k = ceil_scale(lambda);
    let shift = k as f64 - lambda;
    let cubes: Vec<_> = (0..v.len()).map(|i| alpha_cube(v.len(), i, shift, q)).collect();
    let key = |t: Point| ((t.norm() * 1e9).round() as i64, (t.x * 1e9).round() as i64, (t.y * 1e9).round() as i64);
    let mut best: Option<BtEntry> = None;
    for (u0, _) in &cubes[0] {
        let base = v[0] * k as f64 + combo(v, u0);
        for t in pl.anchors(base) {
            if best.as_ref().is_some_and(|b| key(b.t) <= key(t)) {
                continue;
            }
            let copies: Option<Vec<BtCopy>> = (0..v.len())
                .map(|i| {
                    cubes[i].iter().find_map(|(u, alpha)| {
                        let anchor = v[i] * k as f64 + combo(v, u) + t;
                        let g = pl.near(anchor, eps)?;
                        let w = v.iter().zip(alpha).fold(Point::ORIGIN, |acc, (&p, &a)| acc + p * a);
                        Some(BtCopy { i, alpha: alpha.clone(), w, g, anchor })
                    })
                })
                .collect();
            if let Some(copies) = copies {
                best = Some(BtEntry { lambda, t, copies });
            }
        }
    }
    best
}

/// One `q` and, for every `λ`, a translation `t_λ` and per-point offsets
/// `w ∈ Q_q(F)` with perturbed copies of the `B_{1/ε}` patch at
/// `w + λ v_i + t_λ`. Periodic tilings use the lattice directly; other
/// generators search copies inside a window.
pub fn bt_search(y: &TilingSource, f: &Pattern, eps: f64, lambdas: &[f64], action: &Action, opts: &BtOptions) -> Result<BtCertificate> {
    if lambdas.is_empty() || lambdas.iter().any(|&l| !(l > 0.0) || !l.is_finite()) {
        return Err(Error::Domain("lambdas must be a nonempty list of positive numbers".into()));
    }
    if !(eps > 0.0) {
        return Err(Error::Domain("eps must be positive".into()));
    }
    let v = f.points();
    let (patch, pl) = match y.as_periodic() {
        Some(p) => (y.minimal_patch(&Ball::centered(1.0 / eps))?, Placements::Lattice(p.clone())),
        None => {
            let spread = v.iter().map(|p| p.norm()).fold(0.0, f64::max);
            let lmax = lambdas.iter().copied().fold(0.0, f64::max);
            let wanted = opts
                .window_r
                .unwrap_or(2.0 / eps + (lmax + 1.0 + opts.q_max as f64) * spread + 2.0 * y.max_tile_diameter());
            let set = CopySet::build(y, eps, action, usable_radius(y, wanted))?;
            (set.patch.clone(), Placements::Copies(set))
        }
    };
    for q in 0..=opts.q_max {
        let entries: Option<Vec<BtEntry>> = lambdas.iter().map(|&l| solve_lambda(&pl, v, l, eps, q)).collect();
        if let Some(entries) = entries {
            let cert = BtCertificate { action: action.name().to_string(), eps, q, pattern: f.clone(), patch, entries };
            let check = verify_bt(&cert, y);
            if !check.ok {
                return Err(Error::Precondition(format!("solver output failed verification: {}", check.reason.unwrap_or_default())));
            }
            return Ok(cert);
        }
    }
    match pl {
        Placements::Lattice(_) => Err(Error::QMaxExceeded(opts.q_max)),
        Placements::Copies(_) => Err(Error::InsufficientWindow(format!("no certificate with q ≤ {} among the copies in the window", opts.q_max))),
    }
}

pub fn verify_bt(cert: &BtCertificate, y: &TilingSource) -> Verdict {
    let Ok(action) = Action::parse(&cert.action) else {
        return Verdict::fail(format!("unknown action {}", cert.action));
    };
    if !(cert.eps > 0.0) {
        return Verdict::fail("eps must be positive");
    }
    match cert.patch.support_contains_ball(&Ball::centered(1.0 / cert.eps)) {
        Ok(true) => {}
        _ => return Verdict::fail("patch support does not contain the ball of radius 1/eps"),
    }
    if let Some(m) = missing_tile(cert.patch.tiles(), y) {
        return Verdict::fail(format!("patch is not part of the tiling: {m}"));
    }
    let v = cert.pattern.points();
    let q = cert.q as f64;
    for e in &cert.entries {
        if !(e.lambda > 0.0) {
            return Verdict::fail("lambda must be positive");
        }
        let mut seen = vec![false; v.len()];
        for c in &e.copies {
            let tag = format!("lambda {} point {}", e.lambda, c.i);
            if c.i >= v.len() || c.alpha.len() != v.len() {
                return Verdict::fail(format!("{tag}: malformed copy"));
            }
            seen[c.i] = true;
            for (j, a) in c.alpha.iter().enumerate() {
                if a.abs() > q + 1e-9 {
                    return Verdict::fail(format!("{tag}: coefficient {j} is {a}, outside [-q, q]"));
                }
                if j != c.i && (a - a.round()).abs() > 1e-9 {
                    return Verdict::fail(format!("{tag}: coefficient {j} is not an integer"));
                }
            }
            let w: Point = v.iter().zip(&c.alpha).fold(Point::ORIGIN, |acc, (&p, &a)| acc + p * a);
            if !w.approx_eq(c.w, 1e-9) {
                return Verdict::fail(format!("{tag}: w does not match its coefficients"));
            }
            if !admissible_kind(&action, &c.g) {
                return Verdict::fail(format!("{tag}: element is not admissible for the action"));
            }
            match c.g.norm() {
                Ok(n) if n < cert.eps => {}
                Ok(n) => return Verdict::fail(format!("{tag}: element norm {n} is not below {}", cert.eps)),
                Err(err) => return Verdict::fail(err.to_string()),
            }
            let shift = w + v[c.i] * e.lambda + e.t;
            match place(cert.patch.tiles(), &c.g, shift) {
                Ok(img) => {
                    if let Some(m) = missing_tile(&img, y) {
                        return Verdict::fail(format!("{tag}: {m}"));
                    }
                }
                Err(err) => return Verdict::fail(err.to_string()),
            }
        }
        if seen.iter().any(|s| !s) {
            return Verdict::fail(format!("lambda {}: some pattern point has no copy", e.lambda));
        }
    }
    Verdict::pass()
}
