//! Ring-level primitives: areas, containment, simplicity and exact
//! intersection areas against disks and other polygonal regions.

use super::Point;

const SEG_EPS: f64 = 1e-12;
const ON_EDGE_TOL: f64 = 1e-9;

/// Signed shoelace area; positive for counter-clockwise rings.
pub fn signed_area(ring: &[Point]) -> f64 {
    edges(ring).map(|(a, b)| a.cross(b)).sum::<f64>() / 2.0
}

pub fn edges(ring: &[Point]) -> impl Iterator<Item = (Point, Point)> + '_ {
    let n = ring.len();
    (0..n).map(move |i| (ring[i], ring[(i + 1) % n]))
}

/// First moments (∫x, ∫y) of a ring, signed like `signed_area`.
pub fn moments(ring: &[Point]) -> (f64, f64) {
    let mut mx = 0.0;
    let mut my = 0.0;
    for (a, b) in edges(ring) {
        let c = a.cross(b);
        mx += (a.x + b.x) * c;
        my += (a.y + b.y) * c;
    }
    (mx / 6.0, my / 6.0)
}

pub fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let d = b - a;
    let len2 = d.dot(d);
    if len2 == 0.0 {
        return p.dist(a);
    }
    let t = ((p - a).dot(d) / len2).clamp(0.0, 1.0);
    p.dist(a + d * t)
}

/// Distance from `p` to the boundary of the ring.
pub fn boundary_distance(p: Point, ring: &[Point]) -> f64 {
    edges(ring).map(|(a, b)| point_segment_distance(p, a, b)).fold(f64::INFINITY, f64::min)
}

/// Crossing-number parity test (boundary points are undefined).
pub fn crosses_odd(p: Point, ring: &[Point]) -> bool {
    let mut inside = false;
    for (a, b) in edges(ring) {
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if p.x < x {
                inside = !inside;
            }
        }
    }
    inside
}

/// True if the closed segments `ab` and `cd` share a point.
pub fn segments_touch(a: Point, b: Point, c: Point, d: Point) -> bool {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if o1 * o2 < 0.0 && o3 * o4 < 0.0 {
        return true;
    }
    point_segment_distance(c, a, b) <= SEG_EPS
        || point_segment_distance(d, a, b) <= SEG_EPS
        || point_segment_distance(a, c, d) <= SEG_EPS
        || point_segment_distance(b, c, d) <= SEG_EPS
}

fn orient(a: Point, b: Point, c: Point) -> f64 {
    let v = (b - a).cross(c - a);
    if v.abs() <= SEG_EPS * (1.0 + (b - a).norm() * (c - a).norm()) {
        0.0
    } else {
        v
    }
}

/// A ring is simple when it has at least three distinct vertices and no two
/// non-adjacent edges meet.
pub fn is_simple(ring: &[Point]) -> bool {
    let n = ring.len();
    if n < 3 {
        return false;
    }
    for (a, b) in edges(ring) {
        if a.dist(b) <= SEG_EPS {
            return false;
        }
    }
    for i in 0..n {
        let (a, b) = (ring[i], ring[(i + 1) % n]);
        for j in i + 1..n {
            let (c, d) = (ring[j], ring[(j + 1) % n]);
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if adjacent {
                // adjacent edges may only share their common vertex
                let (shared, other_a, other_c) =
                    if j == i + 1 { (b, a, d) } else { (a, b, c) };
                let e1 = other_a - shared;
                let e2 = other_c - shared;
                if e1.cross(e2).abs() <= SEG_EPS * e1.norm() * e2.norm() && e1.dot(e2) > 0.0 {
                    return false;
                }
                continue;
            }
            if segments_touch(a, b, c, d) {
                return false;
            }
        }
    }
    true
}

/// Signed area of the disk `(center, r)` intersected with the polygon
/// bounded by `ring`.
pub fn disk_ring_area(ring: &[Point], center: Point, r: f64) -> f64 {
    if r <= 0.0 {
        return 0.0;
    }
    edges(ring).map(|(a, b)| disk_triangle_area(a - center, b - center, r)).sum()
}

/// Signed area of the disk of radius `r` at the origin intersected with the
/// triangle `(0, a, b)`.
fn disk_triangle_area(a: Point, b: Point, r: f64) -> f64 {
    let sector = |u: Point, v: Point| r * r / 2.0 * u.cross(v).atan2(u.dot(v));
    let (da, db) = (a.norm(), b.norm());
    if da <= r && db <= r {
        return a.cross(b) / 2.0;
    }
    let d = b - a;
    let dd = d.dot(d);
    if dd == 0.0 {
        return 0.0;
    }
    let ad = a.dot(d);
    let disc = ad * ad - dd * (a.dot(a) - r * r);
    if disc <= 0.0 {
        return sector(a, b);
    }
    let sq = disc.sqrt();
    let t1 = (-ad - sq) / dd;
    let t2 = (-ad + sq) / dd;
    if t2 <= 0.0 || t1 >= 1.0 {
        return sector(a, b);
    }
    let p1 = a + d * t1.max(0.0);
    let p2 = a + d * t2.min(1.0);
    sector(a, p1) + p1.cross(p2) / 2.0 + sector(p2, b)
}

/// Point location with respect to a region given by oriented rings
/// (outer counter-clockwise, holes clockwise).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Location {
    Inside,
    Outside,
    /// On an edge running in the same direction as the probe.
    BoundarySame,
    BoundaryOpposite,
}

fn locate(p: Point, dir: Point, rings: &[&[Point]]) -> Location {
    for ring in rings {
        for (a, b) in edges(ring) {
            if point_segment_distance(p, a, b) <= ON_EDGE_TOL {
                let e = b - a;
                if e.cross(dir).abs() <= 1e-7 * e.norm() * dir.norm() {
                    return if e.dot(dir) > 0.0 { Location::BoundarySame } else { Location::BoundaryOpposite };
                }
                // transversal contact at a single point; the midpoint of a
                // split piece never lands here unless the piece is tiny
                return Location::Outside;
            }
        }
    }
    let parity = rings.iter().filter(|r| crosses_odd(p, r)).count();
    if parity % 2 == 1 {
        Location::Inside
    } else {
        Location::Outside
    }
}

/// Parameters in (0,1) where the segment `pq` meets the boundary of `rings`.
fn split_params(p: Point, q: Point, rings: &[&[Point]]) -> Vec<f64> {
    let d = q - p;
    let dd = d.dot(d);
    let mut ts = vec![0.0, 1.0];
    for ring in rings {
        for (c, e) in edges(ring) {
            let f = e - c;
            let denom = d.cross(f);
            if denom.abs() > SEG_EPS * d.norm() * f.norm() {
                let t = (c - p).cross(f) / denom;
                let s = (c - p).cross(d) / denom;
                if (-1e-12..=1.0 + 1e-12).contains(&s) && t > 0.0 && t < 1.0 {
                    ts.push(t);
                }
            } else if (c - p).cross(d).abs() <= ON_EDGE_TOL * d.norm() {
                for v in [c, e] {
                    let t = (v - p).dot(d) / dd;
                    if t > 0.0 && t < 1.0 {
                        ts.push(t);
                    }
                }
            }
        }
    }
    ts.sort_by(f64::total_cmp);
    ts.dedup_by(|a, b| (*a - *b).abs() <= 1e-14);
    ts
}

/// Exact area of the intersection of two polygonal regions, each given as
/// oriented rings. Uses the boundary of the intersection via Green's theorem.
pub fn region_intersection_area(a: &[&[Point]], b: &[&[Point]]) -> f64 {
    let mut twice = 0.0;
    for (src, other, keep_same) in [(a, b, true), (b, a, false)] {
        for ring in src {
            for (p, q) in edges(ring) {
                let d = q - p;
                let ts = split_params(p, q, other);
                for w in ts.windows(2) {
                    let s = p + d * w[0];
                    let e = p + d * w[1];
                    let mid = p + d * ((w[0] + w[1]) / 2.0);
                    let keep = match locate(mid, d, other) {
                        Location::Inside => true,
                        Location::BoundarySame => keep_same,
                        _ => false,
                    };
                    if keep {
                        twice += s.cross(e);
                    }
                }
            }
        }
    }
    (twice / 2.0).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square(x: f64, y: f64, s: f64) -> Vec<Point> {
        vec![Point::new(x, y), Point::new(x + s, y), Point::new(x + s, y + s), Point::new(x, y + s)]
    }

    #[test]
    fn shoelace_and_moments() {
        let sq = square(1.0, 2.0, 2.0);
        assert_eq!(signed_area(&sq), 4.0);
        let (mx, my) = moments(&sq);
        assert!((mx / 4.0 - 2.0).abs() < 1e-12 && (my / 4.0 - 3.0).abs() < 1e-12);
    }

    #[test]
    fn simplicity() {
        assert!(is_simple(&square(0.0, 0.0, 1.0)));
        let bow = vec![Point::new(0.0, 0.0), Point::new(1.0, 1.0), Point::new(1.0, 0.0), Point::new(0.0, 1.0)];
        assert!(!is_simple(&bow));
        let spike = vec![Point::new(0.0, 0.0), Point::new(2.0, 0.0), Point::new(1.0, 0.0), Point::new(1.0, 1.0)];
        assert!(!is_simple(&spike));
    }

    #[test]
    fn disk_area_limits() {
        let sq = square(-5.0, -5.0, 10.0);
        let a = disk_ring_area(&sq, Point::ORIGIN, 1.0);
        assert!((a - std::f64::consts::PI).abs() < 1e-12);
        let small = square(-0.1, -0.1, 0.2);
        assert!((disk_ring_area(&small, Point::ORIGIN, 1.0) - 0.04).abs() < 1e-12);
        // quarter disk
        let q = square(0.0, 0.0, 3.0);
        assert!((disk_ring_area(&q, Point::ORIGIN, 2.0) - std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn overlap_of_offset_squares() {
        let a = square(0.0, 0.0, 1.0);
        let b = square(0.5, 0.0, 1.0);
        let area = region_intersection_area(&[&a], &[&b]);
        assert!((area - 0.5).abs() < 1e-12);
        let c = square(1.0, 0.0, 1.0);
        assert!(region_intersection_area(&[&a], &[&c]).abs() < 1e-12);
        assert!((region_intersection_area(&[&a], &[&a]) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn overlap_with_hole() {
        let outer = square(0.0, 0.0, 3.0);
        let mut hole = square(1.0, 1.0, 1.0);
        hole.reverse();
        let probe = square(0.5, 0.5, 2.0);
        let area = region_intersection_area(&[&outer, &hole], &[&probe]);
        assert!((area - 3.0).abs() < 1e-12);
    }
}
