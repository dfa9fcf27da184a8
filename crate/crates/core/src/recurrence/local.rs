use rayon::prelude::*;
use serde::Serialize;

use super::{missing_tile, place, relative, usable_radius};
use crate::geometry::{Patch, Point};
use crate::groups::{Action, GroupElement};
use crate::matching::{find_copies, TileIndex};
use crate::metric::{tiling_distance, DistanceOptions};
use crate::{Error, Result, ThetaFn, TilingSource, Verdict, DIST_CAP};

#[derive(Clone, Debug, Serialize)]
pub struct LocalWitness {
    pub center: Point,
    pub t: Point,
    pub g: GroupElement,
}

#[derive(Clone, Debug, Serialize)]
pub struct LocalIso {
    pub radius: f64,
    pub eps: f64,
    pub spacing: f64,
    /// One witness per sampled ball centre.
    pub witnesses: Vec<LocalWitness>,
}

/// Centres of a hexagonal grid through the origin inside `B_r`.
fn hex_centers(r: f64, s: f64) -> Vec<Point> {
    let n = (r / s).ceil() as i64 + 1;
    let (a, b) = (Point::new(s, 0.0), Point::new(0.5 * s, 0.75f64.sqrt() * s));
    let mut out = Vec::new();
    for j in -2 * n..=2 * n {
        for i in -2 * n..=2 * n {
            let c = a * i as f64 + b * j as f64;
            if c.norm() <= r + 1e-12 {
                out.push(c);
            }
        }
    }
    out
}

fn reach(tiles: &[crate::Tile], c: Point) -> f64 {
    tiles.iter().map(|t| t.max_distance_from(c)).fold(0.0, f64::max)
}

/// Radius `r` such that every sampled ball of radius `r` centred in
/// `B_{window_r}` holds some `T_t g(p) ⊆ y` with `‖g‖ < ε` (`ε = 0` asks
/// for exact translates). Centres form a hexagonal grid of spacing
/// `diam(p)/4`. `None` when the generated window cannot settle every centre.
pub fn local_iso_radius(y: &TilingSource, p: &Patch, eps: f64, window_r: f64, action: &Action) -> Result<Option<LocalIso>> {
    if p.is_empty() {
        return Err(Error::Precondition("empty patch".into()));
    }
    if !(eps >= 0.0) || !(window_r >= 0.0) {
        return Err(Error::Domain("eps and window radius must be nonnegative".into()));
    }
    if let Some(m) = missing_tile(p.tiles(), y) {
        return Err(Error::Precondition(format!("patch is not a patch of the tiling: {m}")));
    }
    let diam = p.diameter()?;
    let spacing = diam / 4.0;
    let w = usable_radius(y, window_r + 3.0 * diam + 2.0 * y.max_tile_diameter() + 2.0);
    let index = TileIndex::from_patch(&y.window(w)?);
    let mut copies = Vec::new();
    for h in find_copies(action, p, &index, Point::ORIGIN, w)? {
        let t = h.apply_point(Point::ORIGIN)?;
        let g = relative(&h, t)?;
        let n = g.norm()?;
        if n < eps || (eps == 0.0 && n <= 1e-9) {
            copies.push((t, g, place(p.tiles(), &h, Point::ORIGIN)?));
        }
    }
    let centers = hex_centers(window_r, spacing);
    let mut witnesses = Vec::with_capacity(centers.len());
    let mut radius: f64 = 0.0;
    for c in centers {
        let best = copies
            .iter()
            .map(|(t, g, img)| (reach(img, c), t, g))
            .min_by(|a, b| a.0.total_cmp(&b.0));
        let Some((r, t, g)) = best else { return Ok(None) };
        if c.norm() + r > w {
            return Ok(None);
        }
        radius = radius.max(r);
        witnesses.push(LocalWitness { center: c, t: *t, g: g.clone() });
    }
    Ok(Some(LocalIso { radius, eps, spacing, witnesses }))
}

/// Re-checks every witness: the copy lies in `y`, inside its ball, with a
/// small enough perturbation.
pub fn verify_local_iso(iso: &LocalIso, p: &Patch, y: &TilingSource) -> Verdict {
    for (k, w) in iso.witnesses.iter().enumerate() {
        let n = match w.g.norm() {
            Ok(n) => n,
            Err(e) => return Verdict::fail(e.to_string()),
        };
        if !(n < iso.eps || (iso.eps == 0.0 && n <= 1e-9)) {
            return Verdict::fail(format!("witness {k}: perturbation norm {n}"));
        }
        let img = match place(p.tiles(), &w.g, w.t) {
            Ok(img) => img,
            Err(e) => return Verdict::fail(e.to_string()),
        };
        let r = reach(&img, w.center);
        if r > iso.radius + 1e-9 {
            return Verdict::fail(format!("witness {k}: copy reaches {r} from its centre"));
        }
        if let Some(m) = missing_tile(&img, y) {
            return Verdict::fail(format!("witness {k}: {m}"));
        }
    }
    Verdict::pass()
}

#[derive(Clone, Debug, Serialize)]
pub struct ReturnSet {
    pub vectors: Vec<Point>,
    pub spacing: f64,
    pub samples: usize,
    /// Largest distance from a sample to the nearest return; `None` when
    /// there is no return.
    pub max_gap: Option<f64>,
    pub relatively_dense_in_window: bool,
}

/// Sampled `t ∈ B_{window_r}` with `d(T_{-t} y, y) < δ`, on a square grid
/// of the given spacing (default `max(δ, window_r/40)`).
pub fn return_set(
    y: &TilingSource,
    delta: f64,
    window_r: f64,
    action: &Action,
    theta: &ThetaFn,
    spacing: Option<f64>,
    opts: &DistanceOptions,
) -> Result<ReturnSet> {
    if !(delta > 0.0) || !(window_r > 0.0) {
        return Err(Error::Domain("delta and window radius must be positive".into()));
    }
    let s = spacing.unwrap_or(delta.max(window_r / 40.0));
    if !(s > 0.0) {
        return Err(Error::Domain("spacing must be positive".into()));
    }
    let n = (window_r / s).floor() as i64;
    let samples: Vec<Point> = (-n..=n)
        .flat_map(|i| (-n..=n).map(move |j| Point::new(i as f64 * s, j as f64 * s)))
        .filter(|t| t.norm() <= window_r + 1e-12)
        .collect();
    let hits: Vec<bool> = if delta >= DIST_CAP {
        vec![true; samples.len()]
    } else {
        samples
            .par_iter()
            .map(|&t| Ok(tiling_distance(&y.translated(-t), y, action, theta, opts)?.hi < delta))
            .collect::<Result<_>>()?
    };
    let vectors: Vec<Point> = samples.iter().zip(&hits).filter(|(_, &h)| h).map(|(t, _)| *t).collect();
    let max_gap = (!vectors.is_empty()).then(|| {
        samples
            .par_iter()
            .map(|c| vectors.iter().map(|v| v.dist(*c)).fold(f64::INFINITY, f64::min))
            .reduce(|| 0.0, f64::max)
    });
    let dense = max_gap.is_some_and(|g| g + s < window_r);
    Ok(ReturnSet { vectors, spacing: s, samples: samples.len(), max_gap, relatively_dense_in_window: dense })
}
