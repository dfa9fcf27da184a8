use serde::{Deserialize, Serialize};

use super::{admissible_kind, missing_tile, place, usable_radius, CopySet};
use crate::geometry::{Patch, Point};
use crate::groups::{Action, GroupElement};
use crate::{Ball, Error, Pattern, Result, TilingSource, Verdict};

/// A patch covering `B_{1/ε}`, a scale `k` and offset `u` with
/// `T_{k v_i + u} g_i(patch) ⊆ y` and `‖g_i‖ < ε` for every pattern point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LwCertificate {
    pub action: String,
    pub eps: f64,
    pub k: i64,
    pub u: Point,
    pub pattern: Pattern,
    pub patch: Patch,
    pub g: Vec<GroupElement>,
}

/// Smallest `k ≤ k_max` with perturbed copies of the `B_{1/ε}` patch at all
/// `k v_i + u`. Offsets `u` are tried by increasing norm.
pub fn lw_search(y: &TilingSource, f: &Pattern, eps: f64, k_max: i64, action: &Action, window_r: Option<f64>) -> Result<LwCertificate> {
    if k_max < 1 {
        return Err(Error::Domain("k_max must be at least 1".into()));
    }
    let spread = f.points().iter().map(|p| p.norm()).fold(0.0, f64::max);
    let wanted = window_r.unwrap_or(2.0 / eps + k_max as f64 * spread + 2.0 * y.max_tile_diameter() + 1.0);
    let w = usable_radius(y, wanted);
    let set = CopySet::build(y, eps, action, w)?;
    let v = f.points();
    let positions = set.copies.iter().map(|h| h.apply_point(Point::ORIGIN)).collect::<Result<Vec<_>>>()?;
    for k in 1..=k_max {
        let mut offsets: Vec<Point> = positions.iter().map(|&s| s - v[0] * k as f64).collect();
        offsets.sort_by(|a, b| a.norm().total_cmp(&b.norm()).then(a.x.total_cmp(&b.x)).then(a.y.total_cmp(&b.y)));
        for u in offsets {
            let found: Option<Vec<GroupElement>> =
                v.iter().map(|&vi| set.near(vi * k as f64 + u, eps).map(|(g, _)| g)).collect();
            if let Some(g) = found {
                return Ok(LwCertificate {
                    action: action.name().to_string(),
                    eps,
                    k,
                    u,
                    pattern: f.clone(),
                    patch: set.patch,
                    g,
                });
            }
        }
    }
    Err(Error::InsufficientWindow(format!("no k ≤ {k_max} found within window radius {w:.4}")))
}

pub fn verify_lw(cert: &LwCertificate, y: &TilingSource) -> Verdict {
    let Ok(action) = Action::parse(&cert.action) else {
        return Verdict::fail(format!("unknown action {}", cert.action));
    };
    if !(cert.eps > 0.0) || cert.k < 1 {
        return Verdict::fail("eps must be positive and k at least 1");
    }
    match cert.patch.support_contains_ball(&Ball::centered(1.0 / cert.eps)) {
        Ok(true) => {}
        _ => return Verdict::fail("patch support does not contain the ball of radius 1/eps"),
    }
    if let Some(m) = missing_tile(cert.patch.tiles(), y) {
        return Verdict::fail(format!("patch is not part of the tiling: {m}"));
    }
    if cert.g.len() != cert.pattern.len() {
        return Verdict::fail("one element per pattern point is required");
    }
    for (i, (g, &vi)) in cert.g.iter().zip(cert.pattern.points()).enumerate() {
        if !admissible_kind(&action, g) {
            return Verdict::fail(format!("element {i} is not admissible for the action"));
        }
        match g.norm() {
            Ok(n) if n < cert.eps => {}
            Ok(n) => return Verdict::fail(format!("element {i} has norm {n}, not below {}", cert.eps)),
            Err(e) => return Verdict::fail(e.to_string()),
        }
        let shift = vi * cert.k as f64 + cert.u;
        match place(cert.patch.tiles(), g, shift) {
            Ok(img) => {
                if let Some(m) = missing_tile(&img, y) {
                    return Verdict::fail(format!("copy {i}: {m}"));
                }
            }
            Err(e) => return Verdict::fail(e.to_string()),
        }
    }
    Verdict::pass()
}
