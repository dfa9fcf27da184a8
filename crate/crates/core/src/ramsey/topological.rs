//! Recurrence witnesses for commuting maps on a finite orbit, obtained by
//! coloring the orbit with small boxes and running the Brown search.

use std::collections::HashMap;

use serde::Serialize;

use super::{brown_search_at, Coloring, IntPattern};
use crate::{Error, Result, Verdict};

/// `l` commuting maps acting on a compact metric space, observed along the
/// orbit of a base point `y`.
pub trait OrbitSystem: Sync {
    /// Number of commuting maps.
    fn rank(&self) -> usize;
    /// Coordinates of `T_1^{a_1} … T_l^{a_l}(y)` in `[0, 1)^d`.
    fn point(&self, a: &[i64]) -> Vec<f64>;
    fn dist(&self, p: &[f64], q: &[f64]) -> f64;
}

fn frac(x: f64) -> f64 {
    x - x.floor()
}

fn circle_gap(a: f64, b: f64) -> f64 {
    let d = frac(a - b);
    d.min(1.0 - d)
}

/// Rotation of the circle `R/Z` by `alpha`.
#[derive(Clone, Debug)]
pub struct CircleRotation {
    pub alpha: f64,
    pub base: f64,
}

impl CircleRotation {
    pub fn golden() -> Self {
        CircleRotation { alpha: (5f64.sqrt() - 1.0) / 2.0, base: 0.0 }
    }
}

impl OrbitSystem for CircleRotation {
    fn rank(&self) -> usize {
        1
    }
    fn point(&self, a: &[i64]) -> Vec<f64> {
        vec![frac(self.base + a[0] as f64 * self.alpha)]
    }
    fn dist(&self, p: &[f64], q: &[f64]) -> f64 {
        circle_gap(p[0], q[0])
    }
}

/// Map `i` rotates coordinate `i` of the torus by `alphas[i]`.
#[derive(Clone, Debug)]
pub struct TorusRotations {
    pub alphas: Vec<f64>,
}

impl OrbitSystem for TorusRotations {
    fn rank(&self) -> usize {
        self.alphas.len()
    }
    fn point(&self, a: &[i64]) -> Vec<f64> {
        a.iter().zip(&self.alphas).map(|(&k, al)| frac(k as f64 * al)).collect()
    }
    fn dist(&self, p: &[f64], q: &[f64]) -> f64 {
        p.iter().zip(q).map(|(a, b)| circle_gap(*a, *b).powi(2)).sum::<f64>().sqrt()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TopoWitness {
    pub k: i64,
    /// Orbit index of `x_k`.
    pub x: Vec<i64>,
    /// `u_i`, one per map.
    pub u: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TopoBrownResult {
    pub eps: f64,
    pub q: u32,
    pub color: u32,
    pub witnesses: Vec<TopoWitness>,
}

/// Colors the window `[0, window)^l` by the box of side `ε/√d` holding each
/// orbit point, so one color class has diameter below `ε`.
fn box_coloring(sys: &dyn OrbitSystem, eps: f64, window: usize) -> Result<Coloring> {
    let l = sys.rank();
    let d = sys.point(&vec![0; l]).len();
    let side = eps / (d as f64).sqrt() * (1.0 - 1e-9);
    let mut ids: HashMap<Vec<i64>, u32> = HashMap::new();
    Coloring::from_fn(vec![window; l], |a| {
        let key: Vec<i64> = sys.point(a).iter().map(|c| (c / side).floor() as i64).collect();
        let next = ids.len() as u32;
        *ids.entry(key).or_insert(next)
    })
}

/// One color and one `q` giving, for every `k`, a point `x_k` with
/// `T_i^k T^{u_i} x_k` within `ε` of `x_k`, all `x_k` within `ε` of each other.
pub fn topological_brown(sys: &dyn OrbitSystem, eps: f64, k_set: &[i64], window: usize, q_max: u32) -> Result<TopoBrownResult> {
    if !(eps > 0.0) {
        return Err(Error::Domain("eps must be positive".into()));
    }
    if k_set.is_empty() || k_set.iter().any(|&k| k < 1) {
        return Err(Error::Domain("k_set must be nonempty with k ≥ 1".into()));
    }
    let l = sys.rank();
    let coloring = box_coloring(sys, eps, window)?;
    let ncolors = coloring.colors().iter().max().map_or(0, |m| m + 1);
    let mut pattern: IntPattern = vec![vec![0; l]];
    pattern.extend((0..l).map(|i| (0..l).map(|j| i64::from(i == j)).collect()));
    for q in 0..=q_max {
        for color in 0..ncolors {
            let certs: Option<Vec<_>> =
                k_set.iter().map(|&k| brown_search_at(&coloring, &pattern, k, q, &|c| c == color)).collect();
            let Some(certs) = certs else { continue };
            let witnesses = certs
                .into_iter()
                .map(|c| {
                    let v0 = c.v[0].clone();
                    let x = c.t.iter().zip(&v0).map(|(t, v)| t + v).collect();
                    let u = c.v[1..].iter().map(|v| v.iter().zip(&v0).map(|(a, b)| a - b).collect()).collect();
                    TopoWitness { k: c.k, x, u }
                })
                .collect();
            return Ok(TopoBrownResult { eps, q, color, witnesses });
        }
    }
    Err(Error::InsufficientWindow(format!("no common color with q ≤ {q_max} in a window of {window}^{l} orbit points")))
}

/// Re-measures both distance conditions with the system metric.
pub fn verify_topological_brown(sys: &dyn OrbitSystem, res: &TopoBrownResult) -> Verdict {
    let l = sys.rank();
    let mut points = Vec::new();
    for w in &res.witnesses {
        if w.x.len() != l || w.u.len() != l {
            return Verdict::fail(format!("witness for k={} has the wrong shape", w.k));
        }
        let x = sys.point(&w.x);
        for (i, u) in w.u.iter().enumerate() {
            if u.iter().any(|c| c.unsigned_abs() > 2 * res.q as u64) {
                return Verdict::fail(format!("u_{i} for k={} exceeds the cube bound", w.k));
            }
            let mut a: Vec<i64> = w.x.iter().zip(u).map(|(x, u)| x + u).collect();
            a[i] += w.k;
            let d = sys.dist(&x, &sys.point(&a));
            if !(d < res.eps) {
                return Verdict::fail(format!("k={}, map {i}: displacement {d} is not below {}", w.k, res.eps));
            }
        }
        points.push((w.k, x));
    }
    for (i, (k, p)) in points.iter().enumerate() {
        for (k2, p2) in &points[i + 1..] {
            let d = sys.dist(p, p2);
            if !(d < res.eps) {
                return Verdict::fail(format!("x_{k} and x_{k2} are {d} apart"));
            }
        }
    }
    Verdict::pass()
}
