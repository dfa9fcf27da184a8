//! The copy radius `Δ(x′, r)` and the tiling distance.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::geometry::patch_hull_diameter;
use crate::geometry::{Ball, Patch, Point, Tile, TilingSource};
use crate::groups::{Action, GroupElement};
use crate::matching::TileIndex;
use crate::theta::ThetaFn;
use crate::{Error, Result, DIST_CAP};

/// Closed interval `[lo, hi]` certified to contain a quantity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Interval { lo, hi }
    }

    pub fn point(v: f64) -> Self {
        Interval { lo: v, hi: v }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, v: f64, tol: f64) -> bool {
        v >= self.lo - tol && v <= self.hi + tol
    }
}

fn min_tile_diameter(p: &Patch) -> f64 {
    p.tiles().iter().map(Tile::diameter).fold(f64::INFINITY, f64::min)
}

/// Radius of a ball holding every admissible copy of the sub-patches of `p`
/// that meet `B_{1/r}`.
pub fn delta(p: &Patch, r: f64, action: &Action) -> Result<Interval> {
    if !(r > 0.0) {
        return Err(Error::Domain(format!("delta needs r > 0, got {r}")));
    }
    if !p.support_contains_ball(&Ball::centered(1.0 / r))? {
        return Err(Error::Precondition(format!("patch support does not contain B_{}", 1.0 / r)));
    }
    let diam = p.diameter()?;
    let base = 1.0 / r + diam;
    if action.is_isometric() {
        return Ok(Interval::point(base));
    }
    match action {
        Action::Homothety { max_tile_diameter: Some(m) } => {
            let hi = 1.0 / r + m * diam / min_tile_diameter(p);
            Ok(Interval::new(base, hi.max(base)))
        }
        _ => Err(Error::G6Violation("homothetic copies have no diameter bound without a maximal tile diameter".into())),
    }
}

#[derive(Clone, Copy, Debug)]
pub struct DistanceOptions {
    /// Radius up to which agreement is examined on windows that are not
    /// settled by periodicity.
    pub max_radius: f64,
}

impl Default for DistanceOptions {
    fn default() -> Self {
        DistanceOptions { max_radius: 12.0 }
    }
}

/// Failure radius knowledge for one candidate.
#[derive(Clone, Copy, Debug)]
struct Rho {
    /// Largest radius known to be fine.
    lo: f64,
    /// Smallest radius possibly failing (infinite if none can fail).
    hi: f64,
}

/// Tiles of `x′` ordered by the radius at which they enter, with the data
/// needed to evaluate `Δ` and the norm on each prefix.
struct Prefix {
    entries: Vec<f64>,
    vertices: Vec<Vec<Point>>,
    norms: Vec<f64>,
    /// Upper bound on `diam(x′(R))` beyond the examined window: `2(R·k + c)`.
    grow_k: f64,
    grow_c: f64,
    examined: f64,
    delta_factor: f64,
}

impl Prefix {
    fn count(&self, big_r: f64) -> usize {
        self.entries.partition_point(|&e| e < big_r)
    }

    fn norm(&self, big_r: f64) -> f64 {
        match self.count(big_r) {
            0 => 0.0,
            n => self.norms[n - 1],
        }
    }

    fn diam(&self, big_r: f64, pessimistic: bool) -> f64 {
        if big_r > self.examined {
            return if pessimistic { 2.0 * (big_r * self.grow_k + self.grow_c) } else { 2.0 * big_r };
        }
        let n = self.count(big_r);
        patch_hull_diameter(self.vertices[..n].iter().flatten().copied())
    }
}

struct Candidate {
    prefix: Prefix,
    rho: Rho,
}

fn r_star(c: &Candidate, theta: &ThetaFn, pessimistic: bool) -> f64 {
    let rho = if pessimistic { c.rho.lo } else { c.rho.hi };
    let valid = |r: f64| -> bool {
        let big_r = 1.0 / r;
        if big_r > rho {
            return false;
        }
        let d = big_r + c.prefix.delta_factor * c.prefix.diam(big_r, pessimistic);
        theta.raw(d, c.prefix.norm(big_r)) <= r
    };
    if theta.name() == "identity" && c.prefix.norms.windows(2).all(|w| w[0] == w[1]) {
        // θ ignores Δ and the norm is constant: closed form
        let n = c.prefix.norms.first().copied().unwrap_or(0.0);
        let v = n.max(1.0 / rho);
        return if v < DIST_CAP { v } else { DIST_CAP };
    }
    let top = DIST_CAP * (1.0 - 1e-12);
    if !valid(top) {
        return DIST_CAP;
    }
    let (mut lo, mut hi) = (0.0, top);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if valid(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    if pessimistic {
        hi
    } else {
        lo
    }
}

fn anchor_tile(x: &TilingSource) -> Result<Option<Tile>> {
    if x.extent() < 1e-2 {
        return Ok(None);
    }
    let near = x.tiles_meeting(&Ball::centered(1e-2))?;
    Ok(near.tiles().iter().find(|t| t.distance_to(Point::ORIGIN) <= 1e-12).cloned())
}

fn same_lattice(x: &TilingSource, y: &TilingSource) -> bool {
    match (x.lattice(), y.lattice()) {
        (Some(a), Some(b)) => a[0].approx_eq(b[0], 1e-12) && a[1].approx_eq(b[1], 1e-12),
        _ => false,
    }
}

fn window_clamped(x: &TilingSource, r: f64) -> Result<(Patch, f64)> {
    let r = r.min(x.extent() * (1.0 - 1e-9));
    if !(r > 0.0) {
        return Ok((Patch::empty(), 0.0));
    }
    Ok((x.window(r)?, r))
}

/// One direction of the distance computation: candidates are aligned from
/// the tile of `x` at the origin.
fn one_sided(x: &TilingSource, y: &TilingSource, action: &Action, theta: &ThetaFn, opts: &DistanceOptions) -> Result<Option<Interval>> {
    if !action.is_single_group() {
        return piecewise_one_sided(x, y, action, theta, opts);
    }
    let Some(anchor) = anchor_tile(x)? else { return Ok(None) };
    let reach = 1.5 * (anchor.diameter() + 1.0) + anchor.centroid().norm();
    let (near, _) = window_clamped(y, reach + anchor.diameter())?;
    let near_idx = TileIndex::from_patch(&near);
    let mut cands: Vec<GroupElement> = Vec::new();
    for i in near_idx.near(anchor.centroid(), reach) {
        for h in action.align(&anchor, &near_idx.tiles()[i]) {
            let n = h.norm()?;
            if theta.raw(std::f64::consts::SQRT_2 + 1e-9, n) < DIST_CAP && !cands.iter().any(|g| g.approx_eq(&h, 1e-12)) {
                cands.push(h);
            }
        }
    }
    if cands.is_empty() {
        return Ok(None);
    }
    let periodic = same_lattice(x, y);
    let exact = |g: &GroupElement| periodic && matches!(g, GroupElement::Translation(_));
    let check_radius = match x.lattice() {
        Some([a, b]) => a.norm() + b.norm() + 0.5,
        None => 0.0,
    };
    let w = if cands.iter().all(exact) { check_radius } else { opts.max_radius.max(check_radius) };
    let growth = match action {
        Action::Homothety { .. } => std::f64::consts::FRAC_1_SQRT_2.exp(),
        _ => 1.0,
    };
    let margin = 3.0 + anchor.diameter();
    let (x_win, wx) = window_clamped(x, w * growth + margin)?;
    let (y_win, wy) = window_clamped(y, w * growth + margin)?;
    let y_idx = TileIndex::from_patch(&y_win);
    let max_diam = x_win.tiles().iter().map(Tile::diameter).fold(0.0, f64::max);
    let delta_factor = match action {
        Action::Homothety { max_tile_diameter: Some(m) } => m / min_tile_diameter(&x_win).max(1e-12),
        Action::Homothety { max_tile_diameter: None } => {
            return Err(Error::G6Violation("homothety distance needs a maximal tile diameter".into()))
        }
        _ => 1.0,
    };

    let results: Vec<Result<(f64, f64)>> = cands
        .par_iter()
        .map(|g| {
            let f = g.as_affine().expect("single-map element");
            let scale = f.det().sqrt();
            let g0 = g.apply_point(Point::ORIGIN)?;
            let ginv0 = g.inverse().apply_point(Point::ORIGIN)?;
            let r_max = w.min(scale * (wx - ginv0.norm())).min((wy - g0.norm()) / scale).max(0.0);
            let mut entries: Vec<(f64, usize)> = x_win
                .tiles()
                .iter()
                .enumerate()
                .map(|(i, t)| (t.distance_to(Point::ORIGIN).min(scale * t.distance_to(ginv0)), i))
                .filter(|(e, _)| *e < r_max)
                .collect();
            entries.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            let failure = entries.iter().find(|(_, i)| !y_idx.contains(&x_win.tiles()[*i].mapped(&f))).map(|(e, _)| *e);
            let rho = match failure {
                Some(e) => Rho { lo: e, hi: e },
                None if exact(g) => Rho { lo: f64::INFINITY, hi: f64::INFINITY },
                None => Rho { lo: r_max, hi: f64::INFINITY },
            };
            let norm = g.norm()?;
            let prefix = Prefix {
                entries: entries.iter().map(|e| e.0).collect(),
                vertices: entries.iter().map(|(_, i)| x_win.tiles()[*i].outer().to_vec()).collect(),
                norms: vec![norm; entries.len().max(1)],
                grow_k: 1.0f64.max(1.0 / scale),
                grow_c: ginv0.norm() + max_diam,
                examined: r_max,
                delta_factor,
            };
            let c = Candidate { prefix, rho };
            Ok((r_star(&c, theta, false), r_star(&c, theta, true)))
        })
        .collect();
    let mut lo = DIST_CAP;
    let mut hi = DIST_CAP;
    for r in results {
        let (l, h) = r?;
        lo = lo.min(l);
        hi = hi.min(h);
    }
    Ok(Some(Interval::new(lo.min(hi), hi)))
}

/// Per-tile actions: each tile takes its cheapest alignment to a tile of `y`.
fn piecewise_one_sided(
    x: &TilingSource,
    y: &TilingSource,
    action: &Action,
    theta: &ThetaFn,
    opts: &DistanceOptions,
) -> Result<Option<Interval>> {
    if !action.is_isometric() {
        return Err(Error::G6Violation("piecewise homothety distance has no copy bound".into()));
    }
    let w = opts.max_radius;
    let outer = w * (1.0 + DIST_CAP) + 3.0;
    let (x_win, wx) = window_clamped(x, outer + 2.0)?;
    let (y_win, _) = window_clamped(y, outer + 2.0)?;
    if x_win.is_empty() || y_win.is_empty() {
        return Ok(None);
    }
    let r_max = w.min(wx - 2.0).max(0.0);
    let y_idx = TileIndex::from_patch(&y_win);
    let max_diam = x_win.tiles().iter().map(Tile::diameter).fold(0.0, f64::max);

    let best: Vec<Option<(GroupElement, usize, f64)>> = x_win
        .tiles()
        .par_iter()
        .map(|d| {
            let c = d.centroid();
            let reach = DIST_CAP * (c.norm() + d.diameter() + 1.0) + 1e-6;
            let mut best: Option<(GroupElement, usize, f64)> = None;
            for j in y_idx.near(c, reach) {
                for h in action.align(d, &y_idx.tiles()[j]) {
                    let n = h.norm().unwrap_or(f64::INFINITY);
                    if best.as_ref().is_none_or(|b| n < b.2) {
                        best = Some((h, j, n));
                    }
                }
            }
            best
        })
        .collect();

    let mut entries: Vec<(f64, usize)> = Vec::new();
    let mut failures: Vec<f64> = Vec::new();
    let mut hit = vec![None::<f64>; y_idx.len()];
    for (i, d) in x_win.tiles().iter().enumerate() {
        let e0 = d.distance_to(Point::ORIGIN);
        match &best[i] {
            None => {
                if e0 < r_max {
                    failures.push(e0);
                }
            }
            Some((_, j, _)) => {
                let e = e0.min(y_idx.tiles()[*j].distance_to(Point::ORIGIN));
                if e < r_max {
                    entries.push((e, i));
                }
                if let Some(prev) = hit[*j] {
                    failures.push(prev.max(e));
                }
                hit[*j] = Some(hit[*j].map_or(e, |p: f64| p.min(e)));
            }
        }
    }
    for (j, t) in y_idx.tiles().iter().enumerate() {
        let e = t.distance_to(Point::ORIGIN);
        if e < r_max && hit[j].is_none() {
            failures.push(e);
        }
    }
    entries.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let rho_val = failures.iter().copied().fold(f64::INFINITY, f64::min);
    let rho = if rho_val.is_finite() { Rho { lo: rho_val, hi: rho_val } } else { Rho { lo: r_max, hi: f64::INFINITY } };
    let mut norms = Vec::with_capacity(entries.len());
    let mut running: f64 = 0.0;
    for (_, i) in &entries {
        running = running.max(best[*i].as_ref().map_or(0.0, |b| b.2));
        norms.push(running);
    }
    if norms.is_empty() {
        norms.push(0.0);
    }
    let prefix = Prefix {
        entries: entries.iter().map(|e| e.0).collect(),
        vertices: entries.iter().map(|(_, i)| x_win.tiles()[*i].outer().to_vec()).collect(),
        norms,
        grow_k: 1.0 + DIST_CAP,
        grow_c: DIST_CAP + max_diam,
        examined: r_max,
        delta_factor: 1.0,
    };
    let c = Candidate { prefix, rho };
    let hi = r_star(&c, theta, true);
    Ok(Some(Interval::new(0.0, hi)))
}

/// Distance between two tilings: the least `r < √2/2` for which some
/// admissible `g` carries a patch covering `B_{1/r}` into `y` with
/// `θ(Δ, ‖g‖) ≤ r`, capped at `√2/2`.
pub fn tiling_distance(
    x: &TilingSource,
    y: &TilingSource,
    action: &Action,
    theta: &ThetaFn,
    opts: &DistanceOptions,
) -> Result<Interval> {
    if x == y {
        return Ok(Interval::point(0.0));
    }
    let forward = one_sided(x, y, action, theta, opts)?;
    let backward = one_sided(y, x, action, theta, opts)?;
    let out = match (forward, backward) {
        (Some(a), Some(b)) => {
            let hi = a.hi.min(b.hi);
            Interval::new(a.lo.max(b.lo).min(hi), hi)
        }
        (Some(a), None) | (None, Some(a)) => a,
        (None, None) => Interval::new(0.0, DIST_CAP),
    };
    if out.hi >= DIST_CAP {
        return Ok(Interval::new(0.0, DIST_CAP));
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct MetricReport {
    pub size: usize,
    pub max_asymmetry: f64,
    pub triangle_violations: usize,
    pub max_triangle_excess: f64,
    pub identity_violations: usize,
    pub matrix: Vec<Vec<Interval>>,
}

impl MetricReport {
    pub fn passed(&self) -> bool {
        self.max_asymmetry <= 1e-12 && self.triangle_violations == 0 && self.identity_violations == 0
    }
}

/// Symmetry, triangle inequality and identity of indiscernibles on a corpus.
pub fn verify_metric_axioms(corpus: &[TilingSource], action: &Action, theta: &ThetaFn, opts: &DistanceOptions) -> Result<MetricReport> {
    let n = corpus.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let vals = pairs
        .par_iter()
        .map(|&(i, j)| tiling_distance(&corpus[i], &corpus[j], action, theta, opts))
        .collect::<Result<Vec<_>>>()?;
    let matrix: Vec<Vec<Interval>> = vals.chunks(n.max(1)).map(<[Interval]>::to_vec).collect();
    let mut max_asymmetry: f64 = 0.0;
    let mut triangle_violations = 0;
    let mut max_triangle_excess: f64 = 0.0;
    let mut identity_violations = 0;
    let probe: f64 = 3.0;
    let windows = corpus.iter().map(|x| x.window(probe.min(x.extent() * 0.999))).collect::<Result<Vec<_>>>()?;
    for i in 0..n {
        for j in 0..n {
            max_asymmetry = max_asymmetry.max((matrix[i][j].hi - matrix[j][i].hi).abs());
            let same = windows[i] == windows[j];
            if (matrix[i][j].hi == 0.0) != same {
                identity_violations += 1;
            }
            for k in 0..n {
                let excess = matrix[i][k].hi - matrix[i][j].hi - matrix[j][k].hi;
                if excess > 1e-9 {
                    triangle_violations += 1;
                }
                max_triangle_excess = max_triangle_excess.max(excess);
            }
        }
    }
    Ok(MetricReport { size: n, max_asymmetry, triangle_violations, max_triangle_excess, identity_violations, matrix })
}
