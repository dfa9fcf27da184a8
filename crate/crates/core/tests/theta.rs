use std::f64::consts::SQRT_2;

use patchwork::geometry::{make_chair, make_grid, make_qp};
use patchwork::theta::{check_g5, check_theta_axioms, ThetaGrid};
use patchwork::{Action, Ball, BaseKind, Error, GroupElement, Point, ThetaFn, TilingSource};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn closed_form_values() {
    let id = ThetaFn::identity();
    let af = ThetaFn::affine();
    for (s, t) in [(1.5, 0.0), (2.0, 0.25), (10.0, 0.7)] {
        assert_eq!(id.eval(s, t).unwrap(), t);
        assert!((af.eval(s, t).unwrap() - (s * t + t)).abs() < 1e-15);
    }
    assert!(matches!(id.eval(SQRT_2, 0.1), Err(Error::Domain(_))));
    assert!(matches!(af.eval(3.0, -0.1), Err(Error::Domain(_))));
    assert_eq!(ThetaFn::by_name("affine").unwrap(), af);
    assert!(ThetaFn::by_name("cubic").is_err());
}

#[test]
fn standard_members_satisfy_axioms() {
    for theta in [ThetaFn::identity(), ThetaFn::affine()] {
        let r = check_theta_axioms(&theta, &ThetaGrid::default());
        assert!(r.passed, "{:?}", r.counterexample);
        assert!(r.checks > 100_000);
    }
}

#[test]
fn broken_members_are_caught() {
    let grid = ThetaGrid::default();
    let offset = ThetaFn::custom("offset", |_, t| t + 0.01);
    assert!(check_theta_axioms(&offset, &grid).counterexample.unwrap().contains("not 0"));
    let flat = ThetaFn::custom("flat", |_, t| t.min(1.0));
    assert!(check_theta_axioms(&flat, &grid).counterexample.unwrap().contains("increasing"));
    let shrinking = ThetaFn::custom("shrinking", |s, t| t / s);
    assert!(check_theta_axioms(&shrinking, &grid).counterexample.unwrap().contains("decreasing in s"));
    let step = ThetaFn::custom("step", |_, t| if t > 1.0 { t + 1.0 } else { t });
    assert!(!check_theta_axioms(&step, &grid).passed);
}

#[test]
fn g5_holds_for_every_action_with_affine_theta() {
    let actions = [
        Action::Translation,
        Action::Rigid,
        Action::Homothety { max_tile_diameter: Some(4.0) },
        Action::Piecewise { base: BaseKind::Translation },
        Action::Piecewise { base: BaseKind::Rigid },
        Action::Qp,
    ];
    for a in actions {
        let r = check_g5(&a, &ThetaFn::affine(), 100, 11);
        assert_eq!(r.passed, 100, "{}: {:?}", r.action, r.counterexample);
        if a.is_isometric() {
            let r = check_g5(&a, &ThetaFn::identity(), 100, 12);
            assert_eq!(r.passed, 100, "{}: {:?}", r.action, r.counterexample);
        }
    }
}

#[test]
fn identity_theta_is_too_weak_for_homotheties() {
    let r = check_g5(&Action::Homothety { max_tile_diameter: Some(4.0) }, &ThetaFn::identity(), 400, 7);
    assert!(r.passed < r.samples && r.counterexample.is_some());
}

/// Largest `s` on a coarse ladder with `B_s` inside both supports.
fn common_radius(x: &TilingSource, g: &GroupElement, action: &Action, r: f64) -> f64 {
    let p = x.window(r).unwrap();
    let img = action.apply(g, &p).unwrap();
    let mut s = 0.0;
    let mut k = 1;
    loop {
        let c = 0.25 * k as f64;
        let b = Ball::centered(c);
        if !(p.support_contains_ball(&b).unwrap() && img.support_contains_ball(&b).unwrap()) {
            return s;
        }
        s = c;
        k += 1;
    }
}

/// Inner balls of perturbed sub-patches shrink by at most `θ(s′, ‖g‖)`.
fn inner_ball_check(x: &TilingSource, action: &Action, theta: &ThetaFn, g: &GroupElement) {
    let s = common_radius(x, g, action, 6.0);
    assert!(s > 2.0, "fixture window too small: {s}");
    let norm = g.norm().unwrap();
    let mut s1 = SQRT_2 + 0.05;
    while s1 <= s {
        let sub = x.window(s1).unwrap();
        assert!(sub.support_contains_ball(&Ball::centered(s1)).unwrap());
        let shrink = theta.eval(s1, norm).unwrap();
        if shrink < s1 {
            let img = action.apply(g, &sub).unwrap();
            assert!(
                img.support_contains_ball(&Ball::centered(s1 - shrink)).unwrap(),
                "s′={s1}, ‖g‖={norm}, θ={shrink}"
            );
        }
        s1 += 0.5;
    }
}

#[test]
fn inner_ball_shrinks_by_theta_on_fixtures() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let fixtures = [make_grid(), make_chair(5), make_qp(&[Point::new(0.1, 0.0)]).unwrap()];
    for x in &fixtures {
        for _ in 0..8 {
            let v = Point::new(rng.gen_range(-0.3..0.3), rng.gen_range(-0.3..0.3));
            inner_ball_check(x, &Action::Translation, &ThetaFn::identity(), &GroupElement::Translation(v));
            let g = GroupElement::rigid(rng.gen_range(-0.3..0.3), v);
            inner_ball_check(x, &Action::Rigid, &ThetaFn::identity(), &g);
            let h = GroupElement::homothety(rng.gen_range(-0.2f64..0.2).exp(), v).unwrap();
            inner_ball_check(x, &Action::Homothety { max_tile_diameter: Some(4.0) }, &ThetaFn::affine(), &h);
        }
    }
}
