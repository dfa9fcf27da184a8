//! Perturbation groups with right-invariant metrics and their actions on
//! patches.

mod action;
mod homothety;

use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::geometry::{Affine, Point};
use crate::metric::Interval;
use crate::{Error, Result};

pub use action::Action;
pub use homothety::homothety_distance_exact;

/// Family of the per-tile group used by piecewise elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BaseKind {
    Translation,
    Rigid,
    Homothety,
    /// Paired translations of a square annulus and its hole.
    Qp,
}

impl BaseKind {
    pub fn name(self) -> &'static str {
        match self {
            BaseKind::Translation => "translation",
            BaseKind::Rigid => "rigid",
            BaseKind::Homothety => "homothety",
            BaseKind::Qp => "qp",
        }
    }

    pub fn parse(s: &str) -> Result<BaseKind> {
        match s {
            "translation" => Ok(BaseKind::Translation),
            "rigid" => Ok(BaseKind::Rigid),
            "homothety" => Ok(BaseKind::Homothety),
            "qp" => Ok(BaseKind::Qp),
            other => Err(Error::Parse(format!("unknown base kind `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(try_from = "crate::io::ElementDoc", into = "crate::io::ElementDoc")]
pub enum GroupElement {
    Translation(Point),
    /// `p -> R(angle) p + v`
    Rigid { angle: f64, v: Point },
    /// `p -> scale p + v`
    Homothety { scale: f64, v: Point },
    /// Translates the outer boundary of an annulus by `outer` and its hole
    /// by `inner`.
    Pair { outer: Point, inner: Point },
    /// One element per tile index of the source patch (canonical order).
    Piecewise { base: BaseKind, components: BTreeMap<usize, GroupElement> },
}

/// Angle reduced to (-π, π].
pub fn normalize_angle(a: f64) -> f64 {
    let mut r = a.rem_euclid(2.0 * PI);
    if r > PI {
        r -= 2.0 * PI;
    }
    r
}

impl GroupElement {
    pub fn identity() -> Self {
        GroupElement::Translation(Point::ORIGIN)
    }

    pub fn rigid(angle: f64, v: Point) -> Self {
        GroupElement::Rigid { angle: normalize_angle(angle), v }
    }

    pub fn homothety(scale: f64, v: Point) -> Result<Self> {
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(Error::Domain(format!("homothety scale must be positive, got {scale}")));
        }
        Ok(GroupElement::Homothety { scale, v })
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            GroupElement::Translation(_) => "translation",
            GroupElement::Rigid { .. } => "rigid",
            GroupElement::Homothety { .. } => "homothety",
            GroupElement::Pair { .. } => "pair",
            GroupElement::Piecewise { .. } => "piecewise",
        }
    }

    /// The element as a planar map, for the single-map variants.
    pub fn as_affine(&self) -> Option<Affine> {
        match *self {
            GroupElement::Translation(v) => Some(Affine::translation(v)),
            GroupElement::Rigid { angle, v } => Some(Affine::similarity(angle, 1.0, v)),
            GroupElement::Homothety { scale, v } => Some(Affine::similarity(0.0, scale, v)),
            _ => None,
        }
    }

    pub fn apply_point(&self, p: Point) -> Result<Point> {
        self.as_affine()
            .map(|f| f.apply(p))
            .ok_or_else(|| Error::GroupMismatch(format!("{} elements do not act on points", self.kind_name())))
    }

    fn rigid_parts(&self) -> Option<(f64, Point)> {
        match *self {
            GroupElement::Translation(v) => Some((0.0, v)),
            GroupElement::Rigid { angle, v } => Some((angle, v)),
            _ => None,
        }
    }

    fn homothety_parts(&self) -> Option<(f64, Point)> {
        match *self {
            GroupElement::Translation(v) => Some((1.0, v)),
            GroupElement::Homothety { scale, v } => Some((scale, v)),
            _ => None,
        }
    }

    fn pair_parts(&self) -> Option<(Point, Point)> {
        match *self {
            GroupElement::Translation(v) => Some((v, v)),
            GroupElement::Pair { outer, inner } => Some((outer, inner)),
            _ => None,
        }
    }

    /// `g ∘ h`: `h` acts first.
    pub fn compose(&self, h: &GroupElement) -> Result<GroupElement> {
        use GroupElement::*;
        match (self, h) {
            (Translation(a), Translation(b)) => Ok(Translation(*a + *b)),
            (Piecewise { base: b1, components: c1 }, Piecewise { base: b2, components: c2 }) => {
                if b1 != b2 || !c1.keys().eq(c2.keys()) {
                    return Err(Error::GroupMismatch("piecewise elements have different index sets".into()));
                }
                let components = c1
                    .iter()
                    .map(|(k, g)| Ok((*k, g.compose(&c2[k])?)))
                    .collect::<Result<BTreeMap<_, _>>>()?;
                Ok(Piecewise { base: *b1, components })
            }
            (Pair { .. }, _) | (_, Pair { .. }) => match (self.pair_parts(), h.pair_parts()) {
                (Some((o1, i1)), Some((o2, i2))) => Ok(Pair { outer: o1 + o2, inner: i1 + i2 }),
                _ => Err(self.mismatch(h)),
            },
            (Rigid { .. }, _) | (_, Rigid { .. }) => match (self.rigid_parts(), h.rigid_parts()) {
                (Some((a1, v1)), Some((a2, v2))) => Ok(GroupElement::rigid(a1 + a2, v2.rotate(a1) + v1)),
                _ => Err(self.mismatch(h)),
            },
            (Homothety { .. }, _) | (_, Homothety { .. }) => match (self.homothety_parts(), h.homothety_parts()) {
                (Some((s1, v1)), Some((s2, v2))) => Ok(Homothety { scale: s1 * s2, v: v2 * s1 + v1 }),
                _ => Err(self.mismatch(h)),
            },
            _ => Err(self.mismatch(h)),
        }
    }

    fn mismatch(&self, h: &GroupElement) -> Error {
        Error::GroupMismatch(format!("cannot combine {} with {}", self.kind_name(), h.kind_name()))
    }

    pub fn inverse(&self) -> GroupElement {
        use GroupElement::*;
        match self {
            Translation(v) => Translation(-*v),
            Rigid { angle, v } => GroupElement::rigid(-angle, -v.rotate(-angle)),
            Homothety { scale, v } => Homothety { scale: 1.0 / scale, v: -*v * (1.0 / scale) },
            Pair { outer, inner } => Pair { outer: -*outer, inner: -*inner },
            Piecewise { base, components } => Piecewise {
                base: *base,
                components: components.iter().map(|(k, g)| (*k, g.inverse())).collect(),
            },
        }
    }

    /// Norm `‖g‖ = d(g, Id)` in the metric of the element's group.
    pub fn norm(&self) -> Result<f64> {
        match self {
            GroupElement::Translation(v) => Ok(v.norm()),
            GroupElement::Rigid { .. } => dist_rigid(self, &GroupElement::identity()),
            GroupElement::Homothety { .. } => Ok(homothety_distance_exact(self, &GroupElement::identity())?),
            GroupElement::Pair { outer, inner } => Ok(outer.norm().max(inner.norm())),
            GroupElement::Piecewise { components, .. } => {
                components.values().map(GroupElement::norm).try_fold(0.0, |m, n| Ok(f64::max(m, n?)))
            }
        }
    }

    pub fn approx_eq(&self, other: &GroupElement, tol: f64) -> bool {
        use GroupElement::*;
        match (self, other) {
            (Translation(a), Translation(b)) => a.approx_eq(*b, tol),
            (Rigid { angle: a, v }, Rigid { angle: b, v: w }) => {
                normalize_angle(a - b).abs() <= tol && v.approx_eq(*w, tol)
            }
            (Homothety { scale: a, v }, Homothety { scale: b, v: w }) => (a - b).abs() <= tol && v.approx_eq(*w, tol),
            (Pair { outer: a, inner: b }, Pair { outer: c, inner: d }) => a.approx_eq(*c, tol) && b.approx_eq(*d, tol),
            (Piecewise { base: b1, components: c1 }, Piecewise { base: b2, components: c2 }) => {
                b1 == b2 && c1.len() == c2.len() && c1.iter().zip(c2).all(|((k1, g), (k2, h))| k1 == k2 && g.approx_eq(h, tol))
            }
            _ => false,
        }
    }
}

/// `max_{‖v‖≤1} ‖g⁻¹(v) − h⁻¹(v)‖` in closed form for direct isometries.
pub fn dist_rigid(g: &GroupElement, h: &GroupElement) -> Result<f64> {
    let (Some((a, _)), Some((b, _))) = (g.rigid_parts(), h.rigid_parts()) else {
        return Err(Error::GroupMismatch(format!("rigid metric needs rigid elements, got {} and {}", g.kind_name(), h.kind_name())));
    };
    // inverses: v -> R(-a) v + c_g with c_g = -R(-a) v_g
    let (_, cg) = g.inverse().rigid_parts().expect("rigid inverse");
    let (_, ch) = h.inverse().rigid_parts().expect("rigid inverse");
    let dtheta = normalize_angle(a - b);
    Ok(2.0 * (dtheta / 2.0).sin().abs() + (cg - ch).norm())
}

/// `max{|ln(λ/μ)|, ‖g⃗ − h⃗‖}`.
pub fn dist_homothety_tilde(g: &GroupElement, h: &GroupElement) -> Result<f64> {
    let (Some((l, v)), Some((m, w))) = (g.homothety_parts(), h.homothety_parts()) else {
        return Err(Error::GroupMismatch(format!(
            "homothety metric needs homotheties, got {} and {}",
            g.kind_name(),
            h.kind_name()
        )));
    };
    if !(l > 0.0 && m > 0.0) {
        return Err(Error::Domain("homothety scales must be positive".into()));
    }
    Ok((l / m).ln().abs().max((v - w).norm()))
}

/// Right-invariant metric `d_H` as an interval of width at most `tol`.
pub fn dist_homothety(g: &GroupElement, h: &GroupElement, tol: f64) -> Result<Interval> {
    if !(tol > 0.0) {
        return Err(Error::Domain("tolerance must be positive".into()));
    }
    let v = homothety_distance_exact(g, h)?;
    Ok(Interval::new(v.clamp(0.0, 1.0), v.clamp(0.0, 1.0)))
}

/// Supremum over components of the base-kind distance.
pub fn dist_piecewise(g: &GroupElement, h: &GroupElement) -> Result<f64> {
    let (GroupElement::Piecewise { base: b1, components: c1 }, GroupElement::Piecewise { base: b2, components: c2 }) =
        (g, h)
    else {
        return Err(Error::GroupMismatch("piecewise metric needs piecewise elements".into()));
    };
    if b1 != b2 || !c1.keys().eq(c2.keys()) {
        return Err(Error::GroupMismatch("piecewise elements have different index sets".into()));
    }
    c1.iter().try_fold(0.0, |m, (k, a)| Ok(f64::max(m, base_distance(*b1, a, &c2[k])?)))
}

/// Distance between two components of a piecewise element.
pub fn base_distance(base: BaseKind, a: &GroupElement, b: &GroupElement) -> Result<f64> {
    match base {
        BaseKind::Translation => match (a, b) {
            (GroupElement::Translation(v), GroupElement::Translation(w)) => Ok((*v - *w).norm()),
            _ => Err(Error::GroupMismatch("translation components expected".into())),
        },
        BaseKind::Rigid => dist_rigid(a, b),
        BaseKind::Homothety => homothety_distance_exact(a, b),
        BaseKind::Qp => match (a.pair_parts(), b.pair_parts()) {
            (Some((o1, i1)), Some((o2, i2))) => Ok((o1 - o2).norm().max((i1 - i2).norm())),
            _ => Err(Error::GroupMismatch("pair components expected".into())),
        },
    }
}

/// Distance in whichever group the two elements share.
pub fn distance(g: &GroupElement, h: &GroupElement) -> Result<f64> {
    match (g, h) {
        (GroupElement::Piecewise { .. }, _) => dist_piecewise(g, h),
        (GroupElement::Pair { .. }, _) | (_, GroupElement::Pair { .. }) => base_distance(BaseKind::Qp, g, h),
        (GroupElement::Homothety { .. }, _) | (_, GroupElement::Homothety { .. }) => homothety_distance_exact(g, h),
        _ => dist_rigid(g, h),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_examples() {
        let g = GroupElement::Translation(Point::new(1.0, 0.0));
        let h = GroupElement::Translation(Point::new(0.0, 1.0));
        assert_eq!(g.compose(&h).unwrap(), GroupElement::Translation(Point::new(1.0, 1.0)));
        let a = GroupElement::homothety(2.0, Point::ORIGIN).unwrap();
        let b = GroupElement::homothety(0.5, Point::ORIGIN).unwrap();
        let c = a.compose(&b).unwrap();
        assert!(c.approx_eq(&GroupElement::Homothety { scale: 1.0, v: Point::ORIGIN }, 1e-15));
    }

    #[test]
    fn rigid_inverse_roundtrip() {
        let g = GroupElement::rigid(PI / 2.0, Point::new(1.0, 0.0));
        let id = g.inverse().compose(&g).unwrap();
        for k in 0..100 {
            let p = Point::new((k as f64 * 0.37).sin() * 5.0, (k as f64 * 0.11).cos() * 3.0);
            assert!(id.apply_point(p).unwrap().approx_eq(p, 1e-12));
        }
    }

    #[test]
    fn rigid_metric_examples() {
        let id = GroupElement::identity();
        assert!((dist_rigid(&GroupElement::Translation(Point::new(3.0, 4.0)), &id).unwrap() - 5.0).abs() < 1e-15);
        assert!((dist_rigid(&GroupElement::rigid(PI, Point::ORIGIN), &id).unwrap() - 2.0).abs() < 1e-15);
        assert!(dist_rigid(&GroupElement::homothety(2.0, Point::ORIGIN).unwrap(), &id).is_err());
    }

    #[test]
    fn tilde_metric_examples() {
        let id = GroupElement::identity();
        let g = GroupElement::homothety(2.0, Point::ORIGIN).unwrap();
        assert!((dist_homothety_tilde(&g, &id).unwrap() - 2f64.ln()).abs() < 1e-15);
        let t = GroupElement::homothety(1.0, Point::new(3.0, 4.0)).unwrap();
        assert_eq!(dist_homothety_tilde(&t, &id).unwrap(), 5.0);
        assert!(GroupElement::homothety(0.0, Point::ORIGIN).is_err());
    }

    #[test]
    fn piecewise_metric_examples() {
        let mk = |a: Point, b: Point| GroupElement::Piecewise {
            base: BaseKind::Translation,
            components: BTreeMap::from([(0, GroupElement::Translation(a)), (1, GroupElement::Translation(b))]),
        };
        let g = mk(Point::new(0.1, 0.0), Point::new(0.0, 0.3));
        let id = mk(Point::ORIGIN, Point::ORIGIN);
        assert!((dist_piecewise(&g, &id).unwrap() - 0.3).abs() < 1e-15);
        assert_eq!(dist_piecewise(&g, &g).unwrap(), 0.0);
        let single = GroupElement::Piecewise {
            base: BaseKind::Translation,
            components: BTreeMap::from([(0, GroupElement::Translation(Point::new(0.1, 0.0)))]),
        };
        assert!(dist_piecewise(&g, &single).is_err());
    }
}
