use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI, TAU};

use patchwork::geometry::{make_grid, make_qp};
use patchwork::groups::{dist_homothety, dist_homothety_tilde, dist_piecewise, dist_rigid, distance};
use patchwork::{Action, BaseKind, Error, GroupElement, Patch, Point};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn t(x: f64, y: f64) -> GroupElement {
    GroupElement::Translation(Point::new(x, y))
}

fn rand_point(rng: &mut ChaCha8Rng, m: f64) -> Point {
    Point::new(rng.gen_range(-m..m), rng.gen_range(-m..m))
}

fn rand_rigid(rng: &mut ChaCha8Rng) -> GroupElement {
    GroupElement::rigid(rng.gen_range(-PI..PI), rand_point(rng, 2.0))
}

fn rand_homothety(rng: &mut ChaCha8Rng, spread: f64) -> GroupElement {
    GroupElement::homothety(rng.gen_range(-spread..spread).exp(), rand_point(rng, spread)).unwrap()
}

fn rand_piecewise(rng: &mut ChaCha8Rng, n: usize) -> GroupElement {
    GroupElement::Piecewise { base: BaseKind::Rigid, components: (0..n).map(|i| (i, rand_rigid(rng))).collect() }
}

/// `max ‖g⁻¹(v) − h⁻¹(v)‖` over `n` unit vectors.
fn sampled_rigid(g: &GroupElement, h: &GroupElement, n: usize) -> f64 {
    let (gi, hi) = (g.inverse(), h.inverse());
    (0..n)
        .map(|k| {
            let v = Point::new(1.0, 0.0).rotate(TAU * k as f64 / n as f64);
            gi.apply_point(v).unwrap().dist(hi.apply_point(v).unwrap())
        })
        .fold(0.0, f64::max)
}

fn f_term(g: &GroupElement) -> f64 {
    (1.0 - dist_homothety_tilde(&GroupElement::identity(), g).unwrap()).max(0.0)
}

/// `sup_f |F(gf) − F(hf)|` by a coarse grid over `(ln μ, w)` and two
/// rounds of local refinement around the best point.
fn sampled_dh(g: &GroupElement, h: &GroupElement) -> f64 {
    let eval = |m: f64, x: f64, y: f64| {
        let f = GroupElement::homothety(m.exp(), Point::new(x, y)).unwrap();
        (f_term(&g.compose(&f).unwrap()) - f_term(&h.compose(&f).unwrap())).abs()
    };
    let mut best = (0.0, 0.0, 0.0, eval(0.0, 0.0, 0.0));
    let mut step = 0.25;
    let mut centre = (0.0, 0.0, 0.0);
    let mut span = 16;
    for _ in 0..3 {
        for i in -span..=span {
            for j in -span..=span {
                for k in -span..=span {
                    let (m, x, y) = (centre.0 + i as f64 * step, centre.1 + j as f64 * step, centre.2 + k as f64 * step);
                    let v = eval(m, x, y);
                    if v > best.3 {
                        best = (m, x, y, v);
                    }
                }
            }
        }
        centre = (best.0, best.1, best.2);
        step /= 8.0;
        span = 8;
    }
    best.3
}

#[test]
fn composition_examples() {
    assert_eq!(t(1.0, 0.0).compose(&t(0.0, 1.0)).unwrap(), t(1.0, 1.0));
    let g = GroupElement::rigid(FRAC_PI_2, Point::new(1.0, 0.0));
    let id = g.inverse().compose(&g).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..100 {
        let p = rand_point(&mut rng, 10.0);
        assert!(id.apply_point(p).unwrap().approx_eq(p, 1e-12));
    }
    let hh = GroupElement::homothety(2.0, Point::ORIGIN)
        .unwrap()
        .compose(&GroupElement::homothety(0.5, Point::ORIGIN).unwrap())
        .unwrap();
    assert!(hh.approx_eq(&GroupElement::homothety(1.0, Point::ORIGIN).unwrap(), 1e-15));
    let a = rand_piecewise(&mut rng, 2);
    let b = rand_piecewise(&mut rng, 3);
    assert!(matches!(a.compose(&b), Err(Error::GroupMismatch(_))));
}

#[test]
fn rigid_metric_examples() {
    let id = GroupElement::identity();
    assert!((dist_rigid(&t(3.0, 4.0), &id).unwrap() - 5.0).abs() < 1e-12);
    assert!((dist_rigid(&GroupElement::rigid(PI, Point::ORIGIN), &id).unwrap() - 2.0).abs() < 1e-12);
    assert!(dist_rigid(&GroupElement::homothety(2.0, Point::ORIGIN).unwrap(), &id).is_err());
}

#[test]
fn rigid_closed_form_matches_sampling() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..50 {
        let (g, h) = (rand_rigid(&mut rng), rand_rigid(&mut rng));
        let exact = dist_rigid(&g, &h).unwrap();
        let sampled = sampled_rigid(&g, &h, 10_000);
        assert!(sampled <= exact + 1e-12 && exact - sampled < 1e-3, "{exact} vs {sampled}");
    }
}

#[test]
fn homothety_tilde_examples() {
    let id = GroupElement::identity();
    let h2 = GroupElement::homothety(2.0, Point::ORIGIN).unwrap();
    assert!((dist_homothety_tilde(&h2, &id).unwrap() - 2f64.ln()).abs() < 1e-15);
    let shift = GroupElement::homothety(1.0, Point::new(3.0, 4.0)).unwrap();
    assert!((dist_homothety_tilde(&shift, &id).unwrap() - 5.0).abs() < 1e-15);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..100 {
        let (g, h) = (rand_homothety(&mut rng, 1.0), rand_homothety(&mut rng, 1.0));
        assert!((dist_homothety_tilde(&g, &h).unwrap() - dist_homothety_tilde(&h, &g).unwrap()).abs() < 1e-12);
    }
    assert!(GroupElement::homothety(-1.0, Point::ORIGIN).is_err());
}

#[test]
fn homothety_metric_examples() {
    let id = GroupElement::identity();
    let far = GroupElement::homothety(3.0, Point::ORIGIN).unwrap();
    let d = dist_homothety(&far, &id, 1e-4).unwrap();
    assert!((d.hi - 1.0).abs() <= 1e-4 && (d.lo - 1.0).abs() <= 1e-4);
    let g = GroupElement::homothety(0.7f64.exp(), Point::new(0.1, -0.2)).unwrap();
    assert!(dist_homothety(&g, &g, 1e-4).unwrap().hi.abs() < 1e-12);
    let small = GroupElement::homothety(0.1f64.exp(), Point::ORIGIN).unwrap();
    let d = dist_homothety(&small, &id, 1e-4).unwrap();
    assert!(d.lo >= 0.1 - 1e-12);
    let oracle = sampled_dh(&small, &id);
    assert!(oracle <= d.hi + 1e-9 && d.hi - oracle < 2e-3, "{d:?} vs {oracle}");
}

#[test]
fn homothety_metric_matches_sampling() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..6 {
        let (g, h) = (rand_homothety(&mut rng, 0.5), rand_homothety(&mut rng, 0.5));
        let d = dist_homothety(&g, &h, 1e-4).unwrap();
        let oracle = sampled_dh(&g, &h);
        assert!(oracle <= d.hi + 1e-9 && d.hi - oracle < 2e-3, "{d:?} vs {oracle}");
    }
}

#[test]
fn piecewise_metric_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let a = rand_piecewise(&mut rng, 3);
    assert_eq!(dist_piecewise(&a, &a).unwrap(), 0.0);
    let (g, h) = (rand_rigid(&mut rng), rand_rigid(&mut rng));
    let one = |x: &GroupElement| GroupElement::Piecewise { base: BaseKind::Rigid, components: [(0, x.clone())].into() };
    assert!((dist_piecewise(&one(&g), &one(&h)).unwrap() - dist_rigid(&g, &h).unwrap()).abs() < 1e-15);
    let two = GroupElement::Piecewise { base: BaseKind::Translation, components: [(0, t(0.1, 0.0)), (1, t(0.0, 0.3))].into() };
    let id = GroupElement::Piecewise { base: BaseKind::Translation, components: [(0, t(0.0, 0.0)), (1, t(0.0, 0.0))].into() };
    assert!((dist_piecewise(&two, &id).unwrap() - 0.3).abs() < 1e-15);
    assert!(dist_piecewise(&two, &rand_piecewise(&mut rng, 3)).is_err());
}

#[test]
fn apply_examples() {
    let p = make_grid().window(1.5).unwrap();
    let v = Point::new(0.3, -1.2);
    assert_eq!(Action::Translation.apply(&t(v.x, v.y), &p).unwrap(), p.translated(v));

    let qp = make_qp(&[Point::ORIGIN]).unwrap().window(0.4).unwrap();
    let annuli = Patch::new(qp.tiles().iter().filter(|t| t.class_id() == "qp").cloned().collect()).unwrap();
    let bad = GroupElement::Piecewise {
        base: BaseKind::Qp,
        components: (0..annuli.len()).map(|i| (i, GroupElement::Pair { outer: Point::ORIGIN, inner: Point::new(0.2, 0.0) })).collect(),
    };
    assert!(matches!(Action::Qp.apply(&bad, &annuli), Err(Error::Admissibility(_))));

    let cells = make_grid().window(0.5).unwrap();
    let pull = GroupElement::Piecewise {
        base: BaseKind::Translation,
        components: (0..cells.len()).map(|i| (i, if i == 0 { t(0.5, 0.0) } else { t(0.0, 0.0) })).collect(),
    };
    assert!(matches!(Action::Piecewise { base: BaseKind::Translation }.apply(&pull, &cells), Err(Error::Admissibility(_))));
}

#[test]
fn restriction_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let p = make_grid().window(1.0).unwrap();
    let sub = Patch::new(vec![p.tiles()[1].clone()]).unwrap();
    let g = rand_rigid(&mut rng);
    assert_eq!(Action::Rigid.restrict(&g, &p, &sub).unwrap(), g);
    let pw = rand_piecewise(&mut rng, p.len());
    let GroupElement::Piecewise { components, .. } = Action::Piecewise { base: BaseKind::Rigid }.restrict(&pw, &p, &sub).unwrap() else {
        panic!("piecewise expected")
    };
    let GroupElement::Piecewise { components: all, .. } = &pw else { unreachable!() };
    assert_eq!(components[&0], all[&1]);
    let outside = Patch::new(vec![p.tiles()[0].translated(Point::new(5.0, 0.0))]).unwrap();
    assert!(Action::Rigid.restrict(&g, &p, &outside).is_err());
}

#[test]
fn restriction_never_increases_norm() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let p = make_grid().window(1.5).unwrap();
    let action = Action::Piecewise { base: BaseKind::Rigid };
    for _ in 0..100 {
        let g = rand_piecewise(&mut rng, p.len());
        let keep: Vec<_> = p.tiles().iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
        if keep.is_empty() {
            continue;
        }
        let sub = Patch::new(keep).unwrap();
        let r = action.restrict(&g, &p, &sub).unwrap();
        assert!(r.norm().unwrap() <= g.norm().unwrap() + 1e-15);
    }
}

#[test]
fn right_invariance_symmetry_triangle() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..200 {
        let (f, g, h) = (rand_rigid(&mut rng), rand_rigid(&mut rng), rand_rigid(&mut rng));
        let d = dist_rigid(&f, &h).unwrap();
        assert!((dist_rigid(&f.compose(&g).unwrap(), &h.compose(&g).unwrap()).unwrap() - d).abs() < 1e-12);
        assert!((dist_rigid(&h, &f).unwrap() - d).abs() < 1e-12);
        assert!(d <= dist_rigid(&f, &g).unwrap() + dist_rigid(&g, &h).unwrap() + 1e-12);

        let (a, b, c) = (rand_piecewise(&mut rng, 3), rand_piecewise(&mut rng, 3), rand_piecewise(&mut rng, 3));
        let d = dist_piecewise(&a, &c).unwrap();
        assert!((dist_piecewise(&a.compose(&b).unwrap(), &c.compose(&b).unwrap()).unwrap() - d).abs() < 1e-12);
        assert!(d <= dist_piecewise(&a, &b).unwrap() + dist_piecewise(&b, &c).unwrap() + 1e-12);
    }
    let tol = 1e-4;
    for _ in 0..50 {
        let (f, g, h) = (rand_homothety(&mut rng, 0.6), rand_homothety(&mut rng, 0.6), rand_homothety(&mut rng, 0.6));
        let d = dist_homothety(&f, &h, tol).unwrap().hi;
        let moved = dist_homothety(&f.compose(&g).unwrap(), &h.compose(&g).unwrap(), tol).unwrap().hi;
        assert!((moved - d).abs() <= 2.0 * tol);
        assert!((dist_homothety(&h, &f, tol).unwrap().hi - d).abs() <= 2.0 * tol);
        let via = dist_homothety(&f, &g, tol).unwrap().hi + dist_homothety(&g, &h, tol).unwrap().hi;
        assert!(d <= via + 2.0 * tol);
    }
}

#[test]
fn norm_subadditive_and_inverse_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    type Gen = fn(&mut ChaCha8Rng) -> GroupElement;
    let gens: [Gen; 4] = [
        |r| GroupElement::Translation(rand_point(r, 3.0)),
        rand_rigid,
        |r| rand_homothety(r, 0.8),
        |r| rand_piecewise(r, 2),
    ];
    for gen in gens {
        for _ in 0..200 {
            let (g, h) = (gen(&mut rng), gen(&mut rng));
            let (ng, nh) = (g.norm().unwrap(), h.norm().unwrap());
            assert!(h.compose(&g).unwrap().norm().unwrap() <= ng + nh + 1e-12);
            assert!((g.inverse().norm().unwrap() - ng).abs() < 1e-12);
        }
    }
}

#[test]
fn distance_dispatches_by_kind() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let (g, h) = (rand_rigid(&mut rng), rand_rigid(&mut rng));
    assert_eq!(distance(&g, &h).unwrap(), dist_rigid(&g, &h).unwrap());
}

#[test]
fn transformer_axioms_on_fixtures() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let p = make_grid().window(2.0).unwrap();
    for action in [Action::Translation, Action::Rigid] {
        for _ in 0..20 {
            let (g, h) = (rand_rigid(&mut rng), rand_rigid(&mut rng));
            let (g, h) = if action == Action::Translation {
                (t(rng.gen_range(-2.0..2.0), 0.5), t(-0.25, rng.gen_range(-1.0..1.0)))
            } else {
                (g, h)
            };
            let gp = action.apply(&g, &p).unwrap();
            assert_eq!(action.apply(&g.inverse(), &gp).unwrap(), p);
            let lhs = action.apply(&h, &gp).unwrap();
            assert_eq!(lhs, action.apply(&h.compose(&g).unwrap(), &p).unwrap());
            assert_eq!(gp, action.apply(&g, &p).unwrap());
        }
    }
    let pw = Action::Piecewise { base: BaseKind::Rigid };
    let cells = make_grid().window(0.5).unwrap();
    let g = GroupElement::Piecewise {
        base: BaseKind::Rigid,
        components: (0..cells.len()).map(|i| (i, GroupElement::rigid(0.01, Point::new(0.0, 0.0)).compose(&t(i as f64 * 5.0, 0.0)).unwrap())).collect(),
    };
    let moved = pw.apply(&g, &cells).unwrap();
    let back = pw.apply_tiles(&g.inverse(), &pw.apply_tiles(&g, cells.tiles()).unwrap()).unwrap();
    assert_eq!(Patch::new(back).unwrap(), cells);
    assert_eq!(moved.len(), cells.len());
}

#[test]
fn admissible_set_is_closed() {
    let qp = make_qp(&[Point::ORIGIN]).unwrap().window(0.4).unwrap();
    let annuli = Patch::new(qp.tiles().iter().filter(|t| t.class_id() == "qp").cloned().collect()).unwrap();
    let along = |s: f64| GroupElement::Piecewise {
        base: BaseKind::Qp,
        components: (0..annuli.len()).map(|i| (i, GroupElement::Pair { outer: Point::ORIGIN, inner: Point::new(s, 0.0) })).collect(),
    };
    for n in 1..50 {
        assert!(Action::Qp.apply(&along((1.0 / 6.0) * (1.0 - 1.0 / n as f64)), &annuli).is_ok());
    }
    assert!(Action::Qp.apply(&along(1.0 / 6.0), &annuli).is_ok());

    let y = make_grid().window(4.0).unwrap();
    let cell = Patch::new(vec![y.tiles()[0].clone()]).unwrap();
    let lattice_limit = t(1.0, 0.0);
    let mut prev = None;
    for n in 1..30 {
        let g = t(1.0 + 1e-13 / n as f64, 0.0);
        let img = Action::Translation.apply(&g, &cell).unwrap();
        assert!(img.is_subpatch_of(&y));
        prev = Some(g);
    }
    assert!(prev.unwrap().approx_eq(&lattice_limit, 1e-12));
    assert!(Action::Translation.apply(&lattice_limit, &cell).unwrap().is_subpatch_of(&y));
}

#[test]
fn element_maps_are_single_valued() {
    let g = GroupElement::Piecewise { base: BaseKind::Rigid, components: BTreeMap::new() };
    assert!(g.apply_point(Point::ORIGIN).is_err());
}
