use std::f64::consts::FRAC_PI_2;

use super::{Affine, Child, Patch, PeriodicTiling, Point, Seed, SubstitutionRule, SubstitutionTiling, Tile, TilingSource};
use crate::{Error, Result};

/// Largest allowed displacement of a hole square from its cell centre.
pub const QP_OFFSET_BOUND: f64 = 1.0 / 6.0;

fn rect(x0: f64, y0: f64, x1: f64, y1: f64) -> Vec<Point> {
    vec![Point::new(x0, y0), Point::new(x1, y0), Point::new(x1, y1), Point::new(x0, y1)]
}

/// Unit square grid with cells `[i,i+1]×[j,j+1]`.
pub fn make_grid() -> TilingSource {
    let cell = Tile::new(rect(0.0, 0.0, 1.0, 1.0), vec![], "cell").expect("unit cell");
    let fundamental = Patch::new(vec![cell]).expect("single tile");
    let lattice = [Point::new(1.0, 0.0), Point::new(0.0, 1.0)];
    TilingSource::Periodic(PeriodicTiling::new(fundamental, lattice).expect("unit lattice"))
}

fn chair_prototile() -> Tile {
    let outer = vec![
        Point::new(0.0, 0.0),
        Point::new(2.0, 0.0),
        Point::new(2.0, 1.0),
        Point::new(1.0, 1.0),
        Point::new(1.0, 2.0),
        Point::new(0.0, 2.0),
    ];
    Tile::new(outer, vec![], "chair").expect("chair prototile")
}

/// L-tromino subdivision into four half-scale copies.
pub fn chair_rule() -> SubstitutionRule {
    let half = |angle: f64, t: Point| Child { proto: 0, map: Affine::similarity(angle, 0.5, t) };
    SubstitutionRule {
        name: "chair".into(),
        expansion: 2.0,
        prototiles: vec![chair_prototile()],
        children: vec![vec![
            half(0.0, Point::new(0.0, 0.0)),
            half(0.0, Point::new(0.5, 0.5)),
            half(FRAC_PI_2, Point::new(2.0, 0.0)),
            half(-FRAC_PI_2, Point::new(0.0, 2.0)),
        ]],
    }
}

/// Chair tiling generated from the supertile of the given level around the
/// origin. The seed tile sits so that the origin has relative position
/// (2/3, 2/3) in it; alternating corner and centre children keep that
/// position fixed under inflation, so the supertiles nest and grow about
/// the origin.
pub fn make_chair(levels: u32) -> TilingSource {
    let mut rule = chair_rule();
    // exact quarter-turn matrices avoid sin/cos noise in the vertices
    rule.children[0][2].map.m = [[0.0, -0.5], [0.5, 0.0]];
    rule.children[0][3].map.m = [[0.0, 0.5], [-0.5, 0.0]];
    let seed = Seed {
        proto: 0,
        placement: Affine::translation(Point::new(-2.0 / 3.0, -2.0 / 3.0)),
        chain: vec![0, 1],
    };
    TilingSource::Substitution(SubstitutionTiling::new(rule, seed, levels).expect("chair rule is valid"))
}

/// Inradius around the origin of the chair window of the given level.
pub fn chair_inradius(levels: u32) -> f64 {
    make_chair(levels).extent()
}

/// Periodic row of unit cells, each split into a square annulus (class
/// "qp") and the small square filling its hole (class "p"). The hole of cell
/// `i` has edge 1/3 and sits at the cell centre shifted by `offsets[i]`.
pub fn make_qp(offsets: &[Point]) -> Result<TilingSource> {
    if offsets.is_empty() {
        return Err(Error::Domain("at least one cell offset is required".into()));
    }
    let mut tiles = Vec::new();
    for (i, off) in offsets.iter().enumerate() {
        if !(off.norm() <= QP_OFFSET_BOUND + 1e-12) {
            return Err(Error::Admissibility(format!(
                "hole offset {:.6} of cell {i} exceeds 1/6",
                off.norm()
            )));
        }
        let x = i as f64;
        let c = Point::new(x + 0.5, 0.5) + *off;
        let h = 1.0 / 6.0;
        let hole = rect(c.x - h, c.y - h, c.x + h, c.y + h);
        tiles.push(Tile::new(rect(x, 0.0, x + 1.0, 1.0), vec![hole.clone()], "qp")?);
        tiles.push(Tile::new(hole, vec![], "p")?);
    }
    let lattice = [Point::new(offsets.len() as f64, 0.0), Point::new(0.0, 1.0)];
    Ok(TilingSource::Periodic(PeriodicTiling::new(Patch::new(tiles)?, lattice)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Ball;

    #[test]
    fn grid_windows() {
        assert_eq!(make_grid().window(1.0).unwrap().len(), 4);
        assert_eq!(make_grid().window(0.5).unwrap().len(), 4);
        assert_eq!(make_grid().window(3.0).unwrap().len(), 36);
    }

    #[test]
    fn chair_seed_window() {
        let w = make_chair(0).window(0.4).unwrap();
        assert_eq!(w.len(), 1);
        assert!((w.tiles()[0].area() - 3.0).abs() < 1e-12);
        assert!(make_chair(0).window(1.0).is_err());
    }

    #[test]
    fn chair_levels_nest() {
        let small = make_chair(4).window(3.0).unwrap();
        let big = make_chair(6).window(3.0).unwrap();
        assert_eq!(small, big);
        let w = make_chair(5).window(6.0).unwrap();
        let area: f64 = w.tiles().iter().map(|t| t.disk_area(&Ball::centered(6.0))).sum();
        assert!((area - std::f64::consts::PI * 36.0).abs() < 1e-6);
        assert!(w.tiles().iter().all(|t| (t.area() - 3.0).abs() < 1e-9));
    }

    #[test]
    fn qp_rejects_large_offsets() {
        assert!(make_qp(&[Point::new(0.1, 0.0)]).is_ok());
        assert!(matches!(make_qp(&[Point::new(0.2, 0.0)]), Err(Error::Admissibility(_))));
        let w = make_qp(&[Point::ORIGIN]).unwrap().window(1.0).unwrap();
        assert_eq!(w.tiles().iter().filter(|t| t.class_id() == "p").count(), 4);
        assert_eq!(w.tiles().iter().filter(|t| t.class_id() == "qp").count(), 4);
    }
}
