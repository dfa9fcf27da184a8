//! Spatial lookup of tiles and search for (perturbed) copies of a patch.

use std::collections::HashMap;

use crate::geometry::{Patch, Point, Tile};
use crate::groups::{Action, GroupElement};
use crate::Result;

/// Tiles bucketed by centroid on a square grid.
#[derive(Clone, Debug)]
pub struct TileIndex {
    tiles: Vec<Tile>,
    cell: f64,
    grid: HashMap<(i64, i64), Vec<usize>>,
}

impl TileIndex {
    pub fn new(tiles: Vec<Tile>) -> Self {
        let cell = tiles.iter().map(Tile::diameter).fold(0.0, f64::max).max(1e-3);
        let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
        for (i, t) in tiles.iter().enumerate() {
            grid.entry(Self::key_for(cell, t.centroid())).or_default().push(i);
        }
        TileIndex { tiles, cell, grid }
    }

    pub fn from_patch(p: &Patch) -> Self {
        Self::new(p.tiles().to_vec())
    }

    fn key_for(cell: f64, p: Point) -> (i64, i64) {
        ((p.x / cell).floor() as i64, (p.y / cell).floor() as i64)
    }

    pub fn tiles(&self) -> &[Tile] {
        &self.tiles
    }

    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }

    /// Index of a tile equal to `t`.
    pub fn find(&self, t: &Tile) -> Option<usize> {
        let (kx, ky) = Self::key_for(self.cell, t.centroid());
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(ids) = self.grid.get(&(kx + dx, ky + dy)) {
                    if let Some(&i) = ids.iter().find(|&&i| self.tiles[i] == *t) {
                        return Some(i);
                    }
                }
            }
        }
        None
    }

    pub fn contains(&self, t: &Tile) -> bool {
        self.find(t).is_some()
    }

    /// Indices of tiles with centroid within `r` of `p`, ascending.
    pub fn near(&self, p: Point, r: f64) -> Vec<usize> {
        let lo = Self::key_for(self.cell, p - Point::new(r, r));
        let hi = Self::key_for(self.cell, p + Point::new(r, r));
        let mut out = Vec::new();
        for kx in lo.0..=hi.0 {
            for ky in lo.1..=hi.1 {
                if let Some(ids) = self.grid.get(&(kx, ky)) {
                    out.extend(ids.iter().copied().filter(|&i| self.tiles[i].centroid().dist(p) <= r));
                }
            }
        }
        out.sort_unstable();
        out
    }
}

/// Elements `h` of the action's group with `h(p) ⊆ index`, anchored on the
/// first tile of `p` and restricted to anchors with centroid within
/// `radius` of `center`. Per-tile actions are searched with one shared
/// element, so only rigid copies are reported for them.
pub fn find_copies(action: &Action, p: &Patch, index: &TileIndex, center: Point, radius: f64) -> Result<Vec<GroupElement>> {
    let Some(anchor) = p.tiles().first() else {
        return Ok(Vec::new());
    };
    let single = match action {
        Action::Piecewise { base } => match base {
            crate::groups::BaseKind::Homothety => Action::Homothety { max_tile_diameter: None },
            crate::groups::BaseKind::Rigid => Action::Rigid,
            _ => Action::Translation,
        },
        Action::Qp => Action::Translation,
        a => *a,
    };
    let mut out: Vec<GroupElement> = Vec::new();
    for i in index.near(center, radius) {
        for h in single.align(anchor, &index.tiles()[i]) {
            let f = h.as_affine().expect("single-map element");
            if p.tiles()[1..].iter().all(|t| index.contains(&t.mapped(&f))) && !out.iter().any(|g| g.approx_eq(&h, 1e-9)) {
                out.push(h);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::make_grid;

    #[test]
    fn lookup_and_copies() {
        let w = make_grid().window(4.0).unwrap();
        let idx = TileIndex::from_patch(&w);
        assert_eq!(idx.len(), w.len());
        for t in w.tiles() {
            assert!(idx.contains(t));
        }
        assert!(!idx.contains(&w.tiles()[0].translated(Point::new(0.5, 0.0))));
        let p = make_grid().window(0.5).unwrap();
        let copies = find_copies(&Action::Translation, &p, &idx, Point::ORIGIN, 1.0).unwrap();
        assert!(copies.iter().any(|g| g.approx_eq(&GroupElement::identity(), 1e-12)));
        assert!(copies.len() >= 4);
    }
}
