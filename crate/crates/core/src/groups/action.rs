use std::collections::BTreeMap;

use super::{BaseKind, GroupElement};
use crate::geometry::{polygon, rings_match, Patch, Point, Tile, QP_OFFSET_BOUND};
use crate::{Error, Result, EPS_GEOM};

const ALIGN_TOL: f64 = 1e-6;

/// How perturbations act on patches: which group, whether one element moves
/// the whole patch or each tile separately, and which images are admissible.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Action {
    Translation,
    Rigid,
    /// Homotheties. `max_tile_diameter` bounds the tiles of the family; without
    /// it copies of a patch can be arbitrarily large.
    Homothety { max_tile_diameter: Option<f64> },
    /// Each tile moves by its own element of the base group.
    Piecewise { base: BaseKind },
    /// Square annuli move outer boundary and hole by separate translations;
    /// other tiles translate.
    Qp,
}

impl Action {
    pub fn name(&self) -> &'static str {
        match self {
            Action::Translation => "translation",
            Action::Rigid => "rigid",
            Action::Homothety { .. } => "homothety",
            Action::Piecewise { .. } => "piecewise",
            Action::Qp => "qp",
        }
    }

    /// Parses a CLI action name; `piecewise` means piecewise rigid motions.
    pub fn parse(name: &str) -> Result<Action> {
        match name {
            "translation" => Ok(Action::Translation),
            "rigid" => Ok(Action::Rigid),
            "homothety" => Ok(Action::Homothety { max_tile_diameter: None }),
            "piecewise" | "piecewise-rigid" => Ok(Action::Piecewise { base: BaseKind::Rigid }),
            "piecewise-translation" => Ok(Action::Piecewise { base: BaseKind::Translation }),
            "piecewise-homothety" => Ok(Action::Piecewise { base: BaseKind::Homothety }),
            "qp" => Ok(Action::Qp),
            other => Err(Error::Parse(format!("unknown action `{other}`"))),
        }
    }

    pub fn is_single_group(&self) -> bool {
        matches!(self, Action::Translation | Action::Rigid | Action::Homothety { .. })
    }

    /// Whether every admissible element moves points isometrically.
    pub fn is_isometric(&self) -> bool {
        match self {
            Action::Homothety { .. } => false,
            Action::Piecewise { base } => *base != BaseKind::Homothety,
            _ => true,
        }
    }

    /// Group of the element attached to a single tile.
    pub fn tile_base(&self) -> BaseKind {
        match *self {
            Action::Translation => BaseKind::Translation,
            Action::Rigid => BaseKind::Rigid,
            Action::Homothety { .. } => BaseKind::Homothety,
            Action::Piecewise { base } => base,
            Action::Qp => BaseKind::Qp,
        }
    }

    pub(crate) fn base_accepts(base: BaseKind, g: &GroupElement) -> bool {
        matches!(
            (base, g),
            (_, GroupElement::Translation(_))
                | (BaseKind::Rigid, GroupElement::Rigid { .. })
                | (BaseKind::Homothety, GroupElement::Homothety { .. })
                | (BaseKind::Qp, GroupElement::Pair { .. })
        )
    }

    /// Whether `g` belongs to the group this action uses for whole patches.
    pub fn accepts(&self, g: &GroupElement) -> bool {
        match (self, g) {
            (Action::Piecewise { base }, GroupElement::Piecewise { base: b, components }) => {
                base == b && components.values().all(|c| Self::base_accepts(*base, c))
            }
            (Action::Qp, GroupElement::Piecewise { base: BaseKind::Qp, components }) => {
                components.values().all(|c| Self::base_accepts(BaseKind::Qp, c))
            }
            (a, g) if a.is_single_group() => Self::base_accepts(a.tile_base(), g),
            _ => false,
        }
    }

    /// Image of a single tile under a per-tile element.
    pub fn apply_tile(&self, g: &GroupElement, tile: &Tile) -> Result<Tile> {
        match g {
            GroupElement::Pair { outer, inner } => {
                if tile.holes().len() != 1 {
                    return Err(Error::GroupMismatch("paired translations act on tiles with one hole".into()));
                }
                let before = hole_offset(tile);
                let moved = tile.mapped_pair(*outer, *inner);
                let after = before + *inner - *outer;
                if after.norm() > QP_OFFSET_BOUND + 1e-12 {
                    return Err(Error::Admissibility(format!(
                        "hole displaced {:.6} from the cell centre, bound is 1/6",
                        after.norm()
                    )));
                }
                Ok(moved)
            }
            GroupElement::Piecewise { .. } => Err(Error::GroupMismatch("nested piecewise element".into())),
            other => Ok(tile.mapped(&other.as_affine().expect("single-map element"))),
        }
    }

    /// Images of `tiles` (in order) under `g`.
    pub fn apply_tiles(&self, g: &GroupElement, tiles: &[Tile]) -> Result<Vec<Tile>> {
        if !self.accepts(g) {
            return Err(Error::GroupMismatch(format!("{} element is not in the {} group", g.kind_name(), self.name())));
        }
        match g {
            GroupElement::Piecewise { components, .. } => {
                if components.len() != tiles.len() || components.keys().enumerate().any(|(i, k)| i != *k) {
                    return Err(Error::GroupMismatch(format!(
                        "piecewise element has {} components for {} tiles",
                        components.len(),
                        tiles.len()
                    )));
                }
                let images = tiles
                    .iter()
                    .zip(components.values())
                    .map(|(t, c)| self.apply_tile(c, t))
                    .collect::<Result<Vec<_>>>()?;
                for (i, a) in images.iter().enumerate() {
                    for (j, b) in images.iter().enumerate().skip(i + 1) {
                        let ov = a.overlap_area(b);
                        if ov > EPS_GEOM {
                            return Err(Error::Admissibility(format!("images of tiles {i} and {j} overlap (area {ov:.3e})")));
                        }
                    }
                }
                Ok(images)
            }
            single => tiles.iter().map(|t| self.apply_tile(single, t)).collect(),
        }
    }

    pub fn apply(&self, g: &GroupElement, p: &Patch) -> Result<Patch> {
        Ok(Patch::from_tiles_unchecked(self.apply_tiles(g, p.tiles())?))
    }

    /// Element induced on a sub-patch.
    pub fn restrict(&self, g: &GroupElement, p: &Patch, sub: &Patch) -> Result<GroupElement> {
        let positions = sub
            .tiles()
            .iter()
            .map(|t| p.position(t).ok_or_else(|| Error::Precondition("sub-patch is not contained in the patch".into())))
            .collect::<Result<Vec<_>>>()?;
        match g {
            GroupElement::Piecewise { base, components } => {
                let components = positions
                    .iter()
                    .enumerate()
                    .map(|(i, k)| {
                        components
                            .get(k)
                            .cloned()
                            .map(|c| (i, c))
                            .ok_or_else(|| Error::GroupMismatch(format!("missing component {k}")))
                    })
                    .collect::<Result<BTreeMap<_, _>>>()?;
                Ok(GroupElement::Piecewise { base: *base, components })
            }
            other => Ok(other.clone()),
        }
    }

    /// Per-tile elements carrying tile `a` onto tile `b`.
    pub fn align(&self, a: &Tile, b: &Tile) -> Vec<GroupElement> {
        if a.class_id() != b.class_id() || a.holes().len() != b.holes().len() || a.outer().len() != b.outer().len() {
            return Vec::new();
        }
        match self.tile_base() {
            BaseKind::Translation => align_similar(a, b, false, false),
            BaseKind::Rigid => align_similar(a, b, true, false),
            BaseKind::Homothety => align_similar(a, b, false, true),
            BaseKind::Qp => align_qp(a, b),
        }
    }

    /// Norm of an element; for the QP action a plain translation counts as
    /// the pair moving both rings together.
    pub fn norm(&self, g: &GroupElement) -> Result<f64> {
        g.norm()
    }
}

fn hole_offset(tile: &Tile) -> Point {
    let centre = |r: &[Point]| {
        let (mx, my) = polygon::moments(r);
        let a = polygon::signed_area(r);
        Point::new(mx / a, my / a)
    };
    centre(&tile.holes()[0]) - centre(tile.outer())
}

fn align_similar(a: &Tile, b: &Tile, rotate: bool, scale: bool) -> Vec<GroupElement> {
    let (pa, pb) = (a.outer(), b.outer());
    let n = pa.len();
    let ea = pa[1] - pa[0];
    let mut out: Vec<GroupElement> = Vec::new();
    for k in 0..n {
        let eb = pb[(k + 1) % n] - pb[k];
        let angle = ea.cross(eb).atan2(ea.dot(eb));
        let ratio = eb.norm() / ea.norm();
        if !rotate && angle.abs() > 1e-9 {
            continue;
        }
        if !scale && (ratio - 1.0).abs() > 1e-9 {
            continue;
        }
        let (angle, ratio) = (if rotate { angle } else { 0.0 }, if scale { ratio } else { 1.0 });
        let lin = |p: Point| p.rotate(angle) * ratio;
        let v = pb[k] - lin(pa[0]);
        let map = |p: Point| lin(p) + v;
        let ok_outer = (0..n).all(|i| map(pa[i]).approx_eq(pb[(i + k) % n], ALIGN_TOL));
        let ok_holes = ok_outer
            && a.holes().iter().all(|h| {
                let img: Vec<Point> = h.iter().map(|&p| map(p)).collect();
                b.holes().iter().any(|g| rings_match(&img, g, ALIGN_TOL))
            });
        if !ok_holes {
            continue;
        }
        let g = if rotate && angle.abs() > 1e-12 {
            GroupElement::rigid(angle, v)
        } else if scale && (ratio - 1.0).abs() > 1e-12 {
            GroupElement::Homothety { scale: ratio, v }
        } else {
            GroupElement::Translation(v)
        };
        if !out.iter().any(|h| h.approx_eq(&g, 1e-9)) {
            out.push(g);
        }
    }
    out
}

fn align_qp(a: &Tile, b: &Tile) -> Vec<GroupElement> {
    if a.holes().is_empty() {
        return align_similar(a, b, false, false);
    }
    if a.holes().len() != 1 {
        return Vec::new();
    }
    let (oa, ob) = (a.outer(), b.outer());
    let (ha, hb) = (&a.holes()[0], &b.holes()[0]);
    let outer = ob[0] - oa[0];
    let inner = hb[0] - ha[0];
    let outer_ok = oa.iter().zip(ob).all(|(p, q)| (*p + outer).approx_eq(*q, ALIGN_TOL));
    let inner_ok = ha.len() == hb.len() && ha.iter().zip(hb).all(|(p, q)| (*p + inner).approx_eq(*q, ALIGN_TOL));
    if !(outer_ok && inner_ok) {
        return Vec::new();
    }
    if outer.approx_eq(inner, 1e-12) {
        vec![GroupElement::Translation(outer)]
    } else {
        vec![GroupElement::Pair { outer, inner }]
    }
}
