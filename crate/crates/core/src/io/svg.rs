//! Deterministic SVG output: fixed element order, four decimals, y up.

use std::fmt::Write;

use crate::geometry::{convex_hull, BBox};
use crate::recurrence::BtCertificate;
use crate::{Error, Pattern, Point, Result, Tile};

#[derive(Clone, Debug)]
pub enum Layer {
    Tiles(Vec<Tile>),
    /// Pattern points.
    Points(Vec<Point>),
    /// Convex polygon such as the hull of a distortion cube.
    Hull(Vec<Point>),
    /// One marker per matched copy.
    Markers(Vec<Point>),
}

#[derive(Clone, Debug)]
pub struct Style {
    pub stroke: &'static str,
    pub fill: &'static str,
    pub width: f64,
}

#[derive(Clone, Debug)]
pub struct RenderSpec {
    pub viewport: BBox,
    /// Output width in pixels; height follows the aspect ratio.
    pub width_px: f64,
    pub tiles: Style,
    pub points: Style,
    pub hull: Style,
    pub markers: Style,
}

impl RenderSpec {
    pub fn new(viewport: BBox) -> Self {
        RenderSpec {
            viewport,
            width_px: 600.0,
            tiles: Style { stroke: "#333333", fill: "#f2efe6", width: 1.0 },
            points: Style { stroke: "#000000", fill: "#000000", width: 1.0 },
            hull: Style { stroke: "#1f5fa8", fill: "none", width: 1.5 },
            markers: Style { stroke: "#b22222", fill: "none", width: 1.5 },
        }
    }

    /// Square viewport `[-r, r]²`.
    pub fn centered(r: f64) -> Self {
        Self::new(BBox { min: Point::new(-r, -r), max: Point::new(r, r) })
    }
}

fn num(x: f64) -> String {
    let s = format!("{x:.4}");
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

/// Vertices of the convex hull of `Q_q(F) = {Σ α_i v_i : |α_i| ≤ q}`.
pub fn cube_hull(f: &Pattern, q: f64) -> Vec<Point> {
    let v = f.points();
    let corners = (0..1u32 << v.len())
        .map(|mask| {
            v.iter().enumerate().fold(Point::ORIGIN, |acc, (i, &p)| acc + p * if mask >> i & 1 == 1 { q } else { -q })
        })
        .collect();
    convex_hull(corners)
}

/// Layers for a BT certificate: the patch, the points `λ v_i + t_λ`, the
/// cube hull around each of them and one marker per matched copy.
pub fn bt_layers(cert: &BtCertificate) -> Vec<Layer> {
    let v = cert.pattern.points();
    let hull = cube_hull(&cert.pattern, cert.q as f64);
    let mut points = Vec::new();
    let mut hulls = Vec::new();
    let mut markers = Vec::new();
    for e in &cert.entries {
        for c in &e.copies {
            let centre = v[c.i] * e.lambda + e.t;
            points.push(centre);
            hulls.push(Layer::Hull(hull.iter().map(|&h| h + centre).collect()));
            markers.push(c.anchor);
        }
    }
    let mut layers = vec![Layer::Tiles(cert.patch.tiles().to_vec())];
    layers.extend(hulls);
    layers.push(Layer::Points(points));
    layers.push(Layer::Markers(markers));
    layers
}

pub fn render_svg(layers: &[Layer], spec: &RenderSpec) -> Result<String> {
    let vp = spec.viewport;
    if vp.is_empty() || !(spec.width_px > 0.0) {
        return Err(Error::Render("viewport must have positive width and height".into()));
    }
    let scale = spec.width_px / vp.width();
    let (w, h) = (spec.width_px, vp.height() * scale);
    let map = |p: Point| (num((p.x - vp.min.x) * scale), num((vp.max.y - p.y) * scale));
    let ring = |out: &mut String, r: &[Point]| {
        for (k, &p) in r.iter().enumerate() {
            let (x, y) = map(p);
            let _ = write!(out, "{}{x} {y} ", if k == 0 { "M" } else { "L" });
        }
        out.push('Z');
    };
    let style = |s: &Style| format!("stroke=\"{}\" fill=\"{}\" stroke-width=\"{}\"", s.stroke, s.fill, num(s.width));
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">",
        num(w),
        num(h),
        num(w),
        num(h)
    );
    for layer in layers {
        match layer {
            Layer::Tiles(tiles) => {
                for t in tiles {
                    let mut d = String::new();
                    for r in t.rings() {
                        if !d.is_empty() {
                            d.push(' ');
                        }
                        ring(&mut d, r);
                    }
                    let _ = writeln!(out, "<path class=\"tile\" fill-rule=\"evenodd\" {} d=\"{d}\"/>", style(&spec.tiles));
                }
            }
            Layer::Hull(pts) => {
                let pts: Vec<String> = pts.iter().map(|&p| map(p)).map(|(x, y)| format!("{x},{y}")).collect();
                let _ = writeln!(out, "<polygon class=\"hull\" {} points=\"{}\"/>", style(&spec.hull), pts.join(" "));
            }
            Layer::Points(pts) => {
                for &p in pts {
                    let (x, y) = map(p);
                    let _ = writeln!(out, "<circle class=\"point\" {} cx=\"{x}\" cy=\"{y}\" r=\"3\"/>", style(&spec.points));
                }
            }
            Layer::Markers(pts) => {
                for &p in pts {
                    let (x, y) = map(p);
                    let _ = writeln!(out, "<circle class=\"marker\" {} cx=\"{x}\" cy=\"{y}\" r=\"6\"/>", style(&spec.markers));
                }
            }
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::make_grid;

    #[test]
    fn grid_paths_and_determinism() {
        let tiles = make_grid().window(3.0).unwrap().into_tiles();
        let spec = RenderSpec::centered(4.0);
        let a = render_svg(&[Layer::Tiles(tiles.clone())], &spec).unwrap();
        assert_eq!(a.matches("class=\"tile\"").count(), 36);
        assert_eq!(a, render_svg(&[Layer::Tiles(tiles)], &spec).unwrap());
        assert!(!a.contains("-0.0000"));
    }

    #[test]
    fn empty_viewport_is_rejected() {
        let spec = RenderSpec::centered(0.0);
        assert!(matches!(render_svg(&[], &spec), Err(Error::Render(_))));
    }

    #[test]
    fn hull_of_basis_cube() {
        let f = Pattern::new(vec![Point::new(1.0, 0.0), Point::new(0.0, 1.0)]).unwrap();
        assert_eq!(cube_hull(&f, 2.0).len(), 4);
    }
}
