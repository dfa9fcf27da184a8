//! Finite-window searches for monochromatic homothets (Gallai) and
//! q-distorted homothets (Brown), with verifiers and largeness measures.

mod topological;

use serde::{Deserialize, Serialize};

use crate::{Error, Result, Verdict};

pub use topological::{topological_brown, verify_topological_brown, CircleRotation, OrbitSystem, TopoBrownResult, TopoWitness, TorusRotations};

/// Finite coloring of the box `[0, N_1) × … × [0, N_n)`, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ColoringDoc", into = "ColoringDoc")]
pub struct Coloring {
    shape: Vec<usize>,
    colors: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct ColoringDoc {
    dim: usize,
    shape: Vec<usize>,
    colors: Vec<u32>,
}

impl TryFrom<ColoringDoc> for Coloring {
    type Error = Error;
    fn try_from(d: ColoringDoc) -> Result<Self> {
        if d.dim != d.shape.len() {
            return Err(Error::Parse(format!("dim {} does not match shape of length {}", d.dim, d.shape.len())));
        }
        Coloring::new(d.shape, d.colors)
    }
}

impl From<Coloring> for ColoringDoc {
    fn from(c: Coloring) -> Self {
        ColoringDoc { dim: c.shape.len(), shape: c.shape, colors: c.colors }
    }
}

impl Coloring {
    pub fn new(shape: Vec<usize>, colors: Vec<u32>) -> Result<Self> {
        if shape.is_empty() || shape.contains(&0) {
            return Err(Error::Domain("coloring window must be a nonempty box".into()));
        }
        let n: usize = shape.iter().product();
        if colors.len() != n {
            return Err(Error::Domain(format!("expected {n} colors, got {}", colors.len())));
        }
        Ok(Coloring { shape, colors })
    }

    pub fn from_fn(shape: Vec<usize>, mut f: impl FnMut(&[i64]) -> u32) -> Result<Self> {
        let pts: Vec<Vec<i64>> = box_points(&shape.iter().map(|&s| (0, s as i64)).collect::<Vec<_>>()).collect();
        let colors = pts.iter().map(|p| f(p)).collect();
        Coloring::new(shape, colors)
    }

    pub fn dim(&self) -> usize {
        self.shape.len()
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    fn offset(&self, p: &[i64]) -> Option<usize> {
        if p.len() != self.shape.len() {
            return None;
        }
        let mut idx = 0usize;
        for (&c, &s) in p.iter().zip(&self.shape) {
            if c < 0 || c >= s as i64 {
                return None;
            }
            idx = idx * s + c as usize;
        }
        Some(idx)
    }

    /// Color at `p`, or `None` outside the window.
    pub fn get(&self, p: &[i64]) -> Option<u32> {
        self.offset(p).map(|i| self.colors[i])
    }
}

/// Lattice points of the box `∏ [lo_k, hi_k)` in lexicographic order.
pub fn box_points(ranges: &[(i64, i64)]) -> impl Iterator<Item = Vec<i64>> + '_ {
    let empty = ranges.iter().any(|(a, b)| a >= b);
    let mut cur: Option<Vec<i64>> = if empty { None } else { Some(ranges.iter().map(|r| r.0).collect()) };
    std::iter::from_fn(move || {
        let out = cur.clone()?;
        let mut next = out.clone();
        let mut k = ranges.len();
        loop {
            if k == 0 {
                cur = None;
                break;
            }
            k -= 1;
            next[k] += 1;
            if next[k] < ranges[k].1 {
                cur = Some(next);
                break;
            }
            next[k] = ranges[k].0;
        }
        Some(out)
    })
}

fn zigzag_rank(v: i64) -> i64 {
    if v > 0 {
        2 * v - 1
    } else {
        -2 * v
    }
}

/// Vectors of `Q_q^n` ordered by ∞-norm, then coordinatewise in the order
/// 0, 1, −1, 2, −2, …
pub fn cube_offsets(n: usize, q: u32) -> Vec<Vec<i64>> {
    let q = q as i64;
    let mut v: Vec<Vec<i64>> = box_points(&vec![(-q, q + 1); n]).collect();
    v.sort_by_key(|p| {
        let shell = p.iter().map(|c| c.abs()).max().unwrap_or(0);
        (shell, p.iter().map(|&c| zigzag_rank(c)).collect::<Vec<_>>())
    });
    v
}

/// Integer pattern `F = {P_1, …, P_l} ⊂ Z^n`.
pub type IntPattern = Vec<Vec<i64>>;

fn check_pattern(c: &Coloring, f: &IntPattern) -> Result<()> {
    if f.is_empty() || f.iter().any(|p| p.len() != c.dim()) {
        return Err(Error::Domain(format!("pattern points must be nonempty vectors of dimension {}", c.dim())));
    }
    Ok(())
}

/// Translations `t` with `kF + t` inside the window.
fn t_ranges(c: &Coloring, f: &IntPattern, k: i64) -> Vec<(i64, i64)> {
    (0..c.dim())
        .map(|d| {
            let lo = f.iter().map(|p| p[d] * k).min().unwrap_or(0);
            let hi = f.iter().map(|p| p[d] * k).max().unwrap_or(0);
            (-lo, c.shape()[d] as i64 - hi)
        })
        .collect()
}

fn add(a: &[i64], k: i64, p: &[i64], v: &[i64]) -> Vec<i64> {
    a.iter().zip(p).zip(v).map(|((t, p), v)| t + k * p + v).collect()
}

/// First `(k, t)` (k ascending, then `t` lexicographic) with `kF + t`
/// monochromatic inside the window.
pub fn gallai_search(c: &Coloring, f: &IntPattern, k_max: i64) -> Result<Option<(i64, Vec<i64>)>> {
    check_pattern(c, f)?;
    if k_max < 1 {
        return Err(Error::Domain("k_max must be at least 1".into()));
    }
    let zero = vec![0; c.dim()];
    for k in 1..=k_max {
        let ranges = t_ranges(c, f, k);
        for t in box_points(&ranges) {
            let mut colors = f.iter().map(|p| c.get(&add(&t, k, p, &zero)));
            let Some(Some(first)) = colors.next() else { continue };
            if colors.all(|x| x == Some(first)) {
                return Ok(Some((k, t)));
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BrownCertificate {
    pub q: u32,
    pub k: i64,
    pub t: Vec<i64>,
    pub v: Vec<Vec<i64>>,
    pub color: u32,
}

/// Brown search at exactly distortion `q`, restricted to colors accepted
/// by `allowed`.
pub(crate) fn brown_search_at(
    c: &Coloring,
    f: &IntPattern,
    k: i64,
    q: u32,
    allowed: &dyn Fn(u32) -> bool,
) -> Option<BrownCertificate> {
    let offsets = cube_offsets(c.dim(), q);
    for t in box_points(&t_ranges(c, f, k)) {
        for v0 in &offsets {
            let Some(color) = c.get(&add(&t, k, &f[0], v0)) else { continue };
            if !allowed(color) {
                continue;
            }
            let mut v = vec![v0.clone()];
            for p in &f[1..] {
                match offsets.iter().find(|w| c.get(&add(&t, k, p, w)) == Some(color)) {
                    Some(w) => v.push(w.clone()),
                    None => break,
                }
            }
            if v.len() == f.len() {
                return Some(BrownCertificate { q, k, t, v, color });
            }
        }
    }
    None
}

/// Smallest `q ≤ q_max` with a color holding `{kP_i + t + v_i}`, `v_i ∈ Q_q`.
/// Only translations with `kF + t` itself inside the window are scanned.
pub fn brown_search(c: &Coloring, f: &IntPattern, k: i64, q_max: u32) -> Result<Option<BrownCertificate>> {
    check_pattern(c, f)?;
    if k < 1 {
        return Err(Error::Domain("k must be at least 1".into()));
    }
    Ok((0..=q_max).find_map(|q| brown_search_at(c, f, k, q, &|_| true)))
}

pub fn verify_brown(cert: &BrownCertificate, c: &Coloring, f: &IntPattern) -> Verdict {
    if cert.v.len() != f.len() {
        return Verdict::fail(format!("{} offsets for {} pattern points", cert.v.len(), f.len()));
    }
    if cert.t.len() != c.dim() {
        return Verdict::fail("translation has the wrong dimension");
    }
    for (i, (p, v)) in f.iter().zip(&cert.v).enumerate() {
        if v.len() != c.dim() || p.len() != c.dim() {
            return Verdict::fail(format!("offset {i} has the wrong dimension"));
        }
        if v.iter().any(|x| x.unsigned_abs() > cert.q as u64) {
            return Verdict::fail(format!("offset {i} leaves the cube Q_{}", cert.q));
        }
        let pt = add(&cert.t, cert.k, p, v);
        match c.get(&pt) {
            None => return Verdict::fail(format!("point {pt:?} lies outside the window")),
            Some(col) if col != cert.color => {
                return Verdict::fail(format!("point {pt:?} has color {col}, expected {}", cert.color))
            }
            _ => {}
        }
    }
    Verdict::pass()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Largeness {
    /// Largest gap between consecutive members; `None` for the empty set.
    pub syndetic_gap: Option<i64>,
    /// Longest stretch (last − first + 1) whose consecutive gaps are ≤ q.
    pub thick_run: i64,
    pub piecewise_syndetic: bool,
}

/// Gap and stretch statistics of a set of integers.
pub fn largeness(members: &[i64], q: i64, min_len: i64) -> Largeness {
    let mut m = members.to_vec();
    m.sort_unstable();
    m.dedup();
    if m.is_empty() {
        return Largeness { syndetic_gap: None, thick_run: 0, piecewise_syndetic: false };
    }
    let gap = m.windows(2).map(|w| w[1] - w[0]).max().unwrap_or(0);
    let mut best = 1;
    let mut start = m[0];
    for w in m.windows(2) {
        if w[1] - w[0] > q {
            start = w[1];
        }
        best = best.max(w[1] - start + 1);
    }
    Largeness { syndetic_gap: Some(gap), thick_run: best, piecewise_syndetic: best >= min_len }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parity(n: usize) -> Coloring {
        Coloring::from_fn(vec![n], |p| (p[0] % 2) as u32).unwrap()
    }

    #[test]
    fn cube_order() {
        let o = cube_offsets(1, 2);
        assert_eq!(o, vec![vec![0], vec![1], vec![-1], vec![2], vec![-2]]);
        assert_eq!(cube_offsets(2, 1).len(), 9);
    }

    #[test]
    fn gallai_examples() {
        let constant = Coloring::from_fn(vec![10], |_| 0).unwrap();
        assert_eq!(gallai_search(&constant, &vec![vec![0], vec![3]], 5).unwrap(), Some((1, vec![0])));
        let r = gallai_search(&parity(30), &vec![vec![0], vec![1]], 5).unwrap();
        assert_eq!(r, Some((2, vec![0])));
    }

    #[test]
    fn brown_examples() {
        let f = vec![vec![0], vec![1]];
        let cert = brown_search(&parity(30), &f, 3, 5).unwrap().unwrap();
        assert_eq!((cert.q, cert.t.clone(), cert.v.clone()), (1, vec![0], vec![vec![0], vec![1]]));
        assert!(verify_brown(&cert, &parity(30), &f).ok);
        let mut shifted = cert.clone();
        shifted.t = vec![1];
        assert!(!verify_brown(&shifted, &parity(30), &f).ok);
        let mut big = cert;
        big.v[1] = vec![2];
        assert!(!verify_brown(&big, &parity(30), &f).ok);
    }

    #[test]
    fn largeness_examples() {
        let evens: Vec<i64> = (0..100).filter(|x| x % 2 == 0).collect();
        let l = largeness(&evens, 2, 50);
        assert_eq!(l.syndetic_gap, Some(2));
        assert!(l.piecewise_syndetic);
        let blocks: Vec<i64> = (0..10).chain(90..100).collect();
        assert_eq!(largeness(&blocks, 1, 10).thick_run, 10);
        let squares: Vec<i64> = (0..10).map(|x| x * x).collect();
        assert!(!largeness(&squares, 3, 10).piecewise_syndetic);
        assert_eq!(largeness(&[], 1, 1).syndetic_gap, None);
    }
}
