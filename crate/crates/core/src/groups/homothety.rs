//! Exact evaluation of the homothety metric
//! `d_H(g,h) = sup_f |F(gf) − F(hf)|`, `F(g) = max{1 − d̃(Id,g), 0}`.
//!
//! Writing `f = (μ, w)`, `m = ln μ` and `c = −a/λ` for `g = (λ, a)`, one gets
//! `F(gf) = max(0, min(1 − |ln λ + m|, 1 − λ‖w − c‖))`. For fixed `m` the
//! supremum over `w` of `F(gf) − F(hf)` is attained on the ray from `c_h`
//! through `c_g`, so it reduces to `sup_r P(r) − Q(r + D)` with
//! `D = ‖c_g − c_h‖`. That function of `(m, r)` is piecewise linear, so its
//! supremum sits on a vertex of the arrangement of its break lines.

use super::GroupElement;
use crate::{Error, Result};

struct Side {
    log_scale: f64,
    scale: f64,
}

impl Side {
    fn value(&self, m: f64, r: f64) -> f64 {
        let alpha = 1.0 - (self.log_scale + m).abs();
        alpha.min(1.0 - self.scale * r).max(0.0)
    }
}

/// Line `a·m + b·r = c`.
type Line = (f64, f64, f64);

fn lines(p: &Side, q: &Side, d: f64) -> Vec<Line> {
    let (lp, sp, lq, sq) = (p.log_scale, p.scale, q.log_scale, q.scale);
    vec![
        (1.0, 0.0, -lp),
        (1.0, 0.0, -lq),
        (1.0, 0.0, -lp + 1.0),
        (1.0, 0.0, -lp - 1.0),
        (1.0, 0.0, -lq + 1.0),
        (1.0, 0.0, -lq - 1.0),
        (1.0, -sp, -lp),
        (1.0, sp, -lp),
        (0.0, 1.0, 1.0 / sp),
        (1.0, -sq, -lq + sq * d),
        (1.0, sq, -lq - sq * d),
        (0.0, 1.0, 1.0 / sq - d),
        (0.0, 1.0, 0.0),
    ]
}

fn one_sided_sup(p: &Side, q: &Side, d: f64) -> f64 {
    let ls = lines(p, q, d);
    let mut best: f64 = 0.0;
    for (i, &(a1, b1, c1)) in ls.iter().enumerate() {
        for &(a2, b2, c2) in &ls[i + 1..] {
            let det = a1 * b2 - a2 * b1;
            if det.abs() < 1e-14 {
                continue;
            }
            let m = (c1 * b2 - c2 * b1) / det;
            let r = (a1 * c2 - a2 * c1) / det;
            if r < -1e-12 {
                continue;
            }
            let r = r.max(0.0);
            best = best.max(p.value(m, r) - q.value(m, r + d));
        }
    }
    best
}

/// `d_H(g, h)` evaluated exactly (up to floating point).
pub fn homothety_distance_exact(g: &GroupElement, h: &GroupElement) -> Result<f64> {
    let parts = |e: &GroupElement| match *e {
        GroupElement::Translation(v) => Ok((1.0, v)),
        GroupElement::Homothety { scale, v } if scale > 0.0 => Ok((scale, v)),
        _ => Err(Error::GroupMismatch(format!("homothety metric needs homotheties, got {}", e.kind_name()))),
    };
    let (lg, ag) = parts(g)?;
    let (lh, ah) = parts(h)?;
    let cg = ag * (-1.0 / lg);
    let ch = ah * (-1.0 / lh);
    let d = (cg - ch).norm();
    let sg = Side { log_scale: lg.ln(), scale: lg };
    let sh = Side { log_scale: lh.ln(), scale: lh };
    Ok(one_sided_sup(&sg, &sh, d).max(one_sided_sup(&sh, &sg, d)).clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;

    fn hom(s: f64, x: f64, y: f64) -> GroupElement {
        GroupElement::homothety(s, Point::new(x, y)).unwrap()
    }

    #[test]
    fn far_elements_have_unit_norm() {
        let id = GroupElement::identity();
        assert_eq!(homothety_distance_exact(&hom(3.0, 0.0, 0.0), &id).unwrap(), 1.0);
        assert_eq!(homothety_distance_exact(&hom(1.0, 2.0, 0.0), &id).unwrap(), 1.0);
        assert_eq!(homothety_distance_exact(&id, &id).unwrap(), 0.0);
    }

    #[test]
    fn small_scaling_bounded_below() {
        let id = GroupElement::identity();
        let n = homothety_distance_exact(&hom(0.1f64.exp(), 0.0, 0.0), &id).unwrap();
        assert!(n >= 0.1 - 1e-12);
    }
}
