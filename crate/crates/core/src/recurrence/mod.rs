//! Recurrence of patches in tilings: perturbed homothetic copies along a
//! pattern (LW and BT searches), local isomorphism radii and return sets.

mod bt;
mod local;
mod lw;

pub use bt::{bt_search, verify_bt, BtCertificate, BtCopy, BtEntry, BtOptions};
pub use local::{local_iso_radius, return_set, verify_local_iso, LocalIso, LocalWitness, ReturnSet};
pub use lw::{lw_search, verify_lw, LwCertificate};

use crate::geometry::{Patch, Point, Tile};
use crate::groups::{Action, GroupElement};
use crate::matching::{find_copies, TileIndex};
use crate::{Ball, Error, Result, TilingSource};

/// First tile of `tiles` that is not a tile of `y`, looked up through small
/// probe disks so that only generated tiles are compared.
pub(crate) fn missing_tile(tiles: &[Tile], y: &TilingSource) -> Option<String> {
    for (i, t) in tiles.iter().enumerate() {
        let probe = t.probe();
        match y.tiles_meeting(&probe) {
            Err(e) => return Some(format!("tile {i} cannot be generated: {e}")),
            Ok(near) if !near.contains_tile(t) => {
                return Some(format!("tile {i} near {:?} is not a tile of the tiling", probe.center))
            }
            Ok(_) => {}
        }
    }
    None
}

/// Whether `action` admits `g` as the single element moving a patch.
pub(crate) fn admissible_kind(action: &Action, g: &GroupElement) -> bool {
    if action.is_single_group() {
        action.accepts(g)
    } else {
        Action::base_accepts(action.tile_base(), g)
    }
}

/// Image of `tiles` under `T_shift ∘ g`.
pub(crate) fn place(tiles: &[Tile], g: &GroupElement, shift: Point) -> Result<Vec<Tile>> {
    let f = GroupElement::Translation(shift)
        .compose(g)?
        .as_affine()
        .ok_or_else(|| Error::GroupMismatch("certificates carry single-map elements".into()))?;
    Ok(tiles.iter().map(|t| t.mapped(&f)).collect())
}

/// `g` with `h = T_s ∘ g`.
pub(crate) fn relative(h: &GroupElement, s: Point) -> Result<GroupElement> {
    GroupElement::Translation(-s).compose(h)
}

/// Largest usable window radius not above `wanted`.
pub(crate) fn usable_radius(y: &TilingSource, wanted: f64) -> f64 {
    wanted.min(y.extent() * (1.0 - 1e-9))
}

/// The patch covering `B_{1/ε}` and all its copies inside `window(w)`.
pub(crate) struct CopySet {
    pub patch: Patch,
    pub copies: Vec<GroupElement>,
}

impl CopySet {
    pub fn build(y: &TilingSource, eps: f64, action: &Action, w: f64) -> Result<CopySet> {
        if !(eps > 0.0) {
            return Err(Error::Domain("eps must be positive".into()));
        }
        if 1.0 / eps >= w {
            return Err(Error::InsufficientWindow(format!("the ball of radius {} does not fit the window radius {w:.4}", 1.0 / eps)));
        }
        let patch = y.minimal_patch(&Ball::centered(1.0 / eps))?;
        let index = TileIndex::from_patch(&y.window(w)?);
        let mut copies = find_copies(action, &patch, &index, Point::ORIGIN, w)?;
        let pos = |g: &GroupElement| g.apply_point(Point::ORIGIN).unwrap_or(Point::ORIGIN);
        copies.sort_by(|a, b| pos(a).norm().total_cmp(&pos(b).norm()).then(pos(a).x.total_cmp(&pos(b).x)).then(pos(a).y.total_cmp(&pos(b).y)));
        Ok(CopySet { patch, copies })
    }

    /// Smallest-norm `g` with `T_s ∘ g` one of the copies, if below `eps`.
    pub fn near(&self, s: Point, eps: f64) -> Option<(GroupElement, f64)> {
        self.copies
            .iter()
            .filter_map(|h| {
                let g = relative(h, s).ok()?;
                let n = g.norm().ok()?;
                (n < eps).then_some((g, n))
            })
            .min_by(|a, b| a.1.total_cmp(&b.1))
    }
}
