use patchwork::ramsey::{
    brown_search, cube_offsets, gallai_search, largeness, topological_brown, verify_brown, verify_topological_brown,
    BrownCertificate, CircleRotation, Coloring, IntPattern,
};
use patchwork::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn line(bits: u32, n: usize) -> Coloring {
    Coloring::from_fn(vec![n], |p| (bits >> p[0]) & 1).unwrap()
}

fn pattern(points: &[i64]) -> IntPattern {
    points.iter().map(|&p| vec![p]).collect()
}

/// Monochromatic `{t, t+k, t+2k}` by direct triple enumeration.
fn has_mono_triple(bits: u32, n: i64) -> bool {
    let c = |i: i64| (bits >> i) & 1;
    (0..n).any(|t| (1..n).any(|k| t + 2 * k < n && c(t) == c(t + k) && c(t) == c(t + 2 * k)))
}

/// Least `q` with `c(t+v0) = c(t+k+v1)`, `|v0|,|v1| ≤ q`, `0 ≤ t < n−k`.
fn brown_oracle(c: &[u32], k: i64, q_max: i64) -> Option<i64> {
    let n = c.len() as i64;
    let at = |i: i64| if (0..n).contains(&i) { Some(c[i as usize]) } else { None };
    (0..=q_max).find(|&q| {
        (0..n - k).any(|t| {
            (-q..=q).any(|v0| (-q..=q).any(|v1| matches!((at(t + v0), at(t + k + v1)), (Some(a), Some(b)) if a == b)))
        })
    })
}

#[test]
fn gallai_exhaustive_on_short_intervals() {
    let f = pattern(&[0, 1, 2]);
    for bits in 0..(1u32 << 9) {
        let found = gallai_search(&line(bits, 9), &f, 4).unwrap();
        assert!(found.is_some(), "coloring {bits:09b} of [1,9] has no monochromatic triple");
        assert!(has_mono_triple(bits, 9));
    }
    let mut free = Vec::new();
    for bits in 0..(1u32 << 8) {
        let found = gallai_search(&line(bits, 8), &f, 4).unwrap();
        assert_eq!(found.is_some(), has_mono_triple(bits, 8));
        if found.is_none() {
            free.push(bits);
        }
    }
    assert_eq!(free.len(), 6);
    // 1 2 3 4 5 6 7 8 → R R B B R R B B
    assert!(free.contains(&0b1100_1100));
}

#[test]
fn gallai_returns_first_in_scan_order() {
    let c = line(0b0110_1001, 8);
    let (k, t) = gallai_search(&c, &pattern(&[0, 1]), 3).unwrap().unwrap();
    assert_eq!((k, t), (1, vec![1]));
    assert!(matches!(gallai_search(&c, &pattern(&[0, 1]), 0), Err(Error::Domain(_))));
    assert!(matches!(gallai_search(&c, &vec![vec![0, 1]], 2), Err(Error::Domain(_))));
}

#[test]
fn brown_on_random_colorings_matches_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let f = pattern(&[0, 1]);
    for _ in 0..1000 {
        let colors: Vec<u32> = (0..24).map(|_| rng.gen_range(0..2)).collect();
        let c = Coloring::new(vec![24], colors.clone()).unwrap();
        for k in 1..=3 {
            let cert = brown_search(&c, &f, k, 4).unwrap();
            assert_eq!(cert.as_ref().map(|c| c.q as i64), brown_oracle(&colors, k, 4));
            let cert = cert.unwrap();
            assert!(verify_brown(&cert, &c, &f).ok);
        }
    }
}

#[test]
fn parity_coloring_needs_one_step() {
    let c = Coloring::from_fn(vec![24], |p| (p[0] % 2) as u32).unwrap();
    let f = pattern(&[0, 1]);
    let cert = brown_search(&c, &f, 3, 4).unwrap().unwrap();
    assert_eq!(cert, BrownCertificate { q: 1, k: 3, t: vec![0], v: vec![vec![0], vec![1]], color: 0 });
    assert_eq!(brown_search(&c, &f, 2, 4).unwrap().unwrap().q, 0);
}

#[test]
fn q_is_monotone_in_the_budget() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let f = pattern(&[0, 2, 3]);
    for _ in 0..200 {
        let c = Coloring::from_fn(vec![30], |_| rng.gen_range(0..3)).unwrap();
        let k = rng.gen_range(1..5);
        let Some(best) = brown_search(&c, &f, k, 5).unwrap() else { continue };
        for budget in 0..=5 {
            let got = brown_search(&c, &f, k, budget).unwrap();
            if budget < best.q {
                assert!(got.is_none());
            } else {
                assert_eq!(got.as_ref(), Some(&best));
            }
        }
    }
}

#[test]
fn zero_budget_is_exact_homothety() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    let f = pattern(&[0, 1, 2]);
    for _ in 0..300 {
        let c = Coloring::from_fn(vec![20], |_| rng.gen_range(0..2)).unwrap();
        let brown = brown_search(&c, &f, 1, 0).unwrap();
        let gallai = gallai_search(&c, &f, 1).unwrap();
        assert_eq!(brown.map(|b| (b.k, b.t)), gallai);
    }
}

#[test]
fn diagonal_coloring_in_the_plane() {
    let c = Coloring::from_fn(vec![40, 40], |p| ((p[0] + p[1]) % 3) as u32).unwrap();
    let f: IntPattern = vec![vec![0, 0], vec![1, 0], vec![0, 1]];
    let cert = brown_search(&c, &f, 5, 3).unwrap().unwrap();
    assert!(cert.q <= 3);
    assert!(verify_brown(&cert, &c, &f).ok);
}

#[test]
fn tampered_certificates_fail() {
    let c = Coloring::from_fn(vec![24], |p| (p[0] % 2) as u32).unwrap();
    let f = pattern(&[0, 1]);
    let cert = brown_search(&c, &f, 3, 4).unwrap().unwrap();
    let mut bad = cert.clone();
    bad.v[1] = vec![0];
    assert!(!verify_brown(&bad, &c, &f).ok);
    let mut bad = cert.clone();
    bad.v[1] = vec![3];
    assert!(verify_brown(&bad, &c, &f).reason.unwrap().contains("cube"));
    let mut bad = cert;
    bad.t = vec![30];
    assert!(verify_brown(&bad, &c, &f).reason.unwrap().contains("outside"));
}

#[test]
fn cube_offsets_enumerate_the_cube_once() {
    for n in 1..=3 {
        for q in 0..=3u32 {
            let o = cube_offsets(n, q);
            assert_eq!(o.len(), (2 * q as usize + 1).pow(n as u32));
            let mut sorted = o.clone();
            sorted.sort();
            sorted.dedup();
            assert_eq!(sorted.len(), o.len());
            assert!(o.windows(2).all(|w| w[0].iter().map(|c| c.abs()).max() <= w[1].iter().map(|c| c.abs()).max()));
        }
    }
}

#[test]
fn largeness_examples() {
    let evens: Vec<i64> = (0..50).map(|i| 2 * i).collect();
    let l = largeness(&evens, 1, 10);
    assert_eq!((l.syndetic_gap, l.thick_run, l.piecewise_syndetic), (Some(2), 1, false));
    let l = largeness(&evens, 2, 10);
    assert_eq!(l.thick_run, 99);
    let blocks: Vec<i64> = (0..5).flat_map(|b| (0..b + 1).map(move |i| 100 * b + i)).collect();
    let l = largeness(&blocks, 1, 5);
    assert_eq!((l.syndetic_gap, l.thick_run, l.piecewise_syndetic), (Some(100), 5, true));
    assert_eq!(largeness(&[], 1, 1).syndetic_gap, None);
}

#[test]
fn coloring_json_round_trips() {
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    for _ in 0..1000 {
        let dim = rng.gen_range(1..4);
        let shape: Vec<usize> = (0..dim).map(|_| rng.gen_range(1..6)).collect();
        let c = Coloring::from_fn(shape, |_| rng.gen_range(0..4)).unwrap();
        let s = serde_json::to_string(&c).unwrap();
        let back: Coloring = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
    }
    assert!(serde_json::from_str::<Coloring>(r#"{"dim":1,"shape":[3],"colors":[0,1]}"#).is_err());
}

fn frac(x: f64) -> f64 {
    x - x.floor()
}

fn circle(a: f64, b: f64) -> f64 {
    let d = frac(a - b);
    d.min(1.0 - d)
}

#[test]
fn golden_rotation_witnesses_remeasured() {
    let sys = CircleRotation::golden();
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let ks: Vec<i64> = (1..=10).collect();
    let res = topological_brown(&sys, 0.2, &ks, 500, 10).unwrap();
    assert!(verify_topological_brown(&sys, &res).ok);
    assert_eq!(res.witnesses.iter().map(|w| w.k).collect::<Vec<_>>(), ks);
    let pos = |n: i64| frac(n as f64 * phi);
    for w in &res.witnesses {
        let x = pos(w.x[0]);
        assert!(circle(x, pos(w.x[0] + w.k + w.u[0][0])) < 0.2);
        assert!(w.u[0][0].unsigned_abs() <= 2 * res.q as u64);
        for v in &res.witnesses {
            assert!(circle(x, pos(v.x[0])) < 0.2);
        }
    }
    let mut forged = res.clone();
    forged.witnesses[0].u[0][0] += 1;
    assert!(!verify_topological_brown(&sys, &forged).ok);
}

#[test]
fn named_gallai_and_brown_examples() {
    let constant = Coloring::from_fn(vec![12], |_| 0).unwrap();
    assert_eq!(gallai_search(&constant, &pattern(&[0, 3, 5]), 3).unwrap(), Some((1, vec![0])));
    for k in 1..4 {
        assert_eq!(brown_search(&constant, &pattern(&[0, 1]), k, 3).unwrap().unwrap().q, 0);
    }
    let parity = Coloring::from_fn(vec![30], |p| (p[0] % 2) as u32).unwrap();
    assert_eq!(gallai_search(&parity, &pattern(&[0, 1]), 5).unwrap(), Some((2, vec![0])));
    let cert = brown_search(&parity, &pattern(&[0, 1]), 3, 4).unwrap().unwrap();
    assert_eq!((cert.q, cert.t.clone(), cert.v.clone()), (1, vec![0], vec![vec![0], vec![1]]));
    let mut shifted = cert;
    shifted.t[0] += 1;
    assert!(!verify_brown(&shifted, &parity, &pattern(&[0, 1])).ok);

    let diag = Coloring::from_fn(vec![40, 40], |p| ((p[0] + p[1]) % 3) as u32).unwrap();
    let f: IntPattern = vec![vec![0, 0], vec![1, 0]];
    let cert = brown_search(&diag, &f, 5, 3).unwrap().unwrap();
    assert!(cert.q <= 3 && verify_brown(&cert, &diag, &f).ok);
}

#[test]
fn named_largeness_examples() {
    let evens: Vec<i64> = (0..100).filter(|x| x % 2 == 0).collect();
    for l in [1, 10, 50] {
        assert!(largeness(&evens, 2, l).piecewise_syndetic);
    }
    let two_blocks: Vec<i64> = (0..10).chain(90..100).collect();
    let l = largeness(&two_blocks, 1, 10);
    assert_eq!((l.thick_run, l.syndetic_gap, l.piecewise_syndetic), (10, Some(81), true));
    let squares: Vec<i64> = (0..10).map(|i| i * i).collect();
    let l = largeness(&squares, 3, 10);
    assert!(!l.piecewise_syndetic && l.syndetic_gap == Some(17));
}
