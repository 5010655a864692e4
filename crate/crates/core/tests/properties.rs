use std::f64::consts::TAU;

use linkproj::geometry::{
    point, unit, ClosedCurve, CurveShape, Hyperplane, Isometry, PatchManifold, Point,
};
use linkproj::invariants::{
    degree_linking, gauss_linking_at, gauss_linking_r3, winding_number, QuadratureConfig,
};
use linkproj::oracles::{gamma_identity_lhs, gamma_identity_rhs, raycast_winding};
use linkproj::quadrature::integrate_box;
use linkproj::reduction::{find_plane_intersections, reduce_general_terms, slice_surface};
use linkproj::scenes::builtin_scene;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn hopf() -> (ClosedCurve, ClosedCurve) {
    let s = builtin_scene("hopf_r3", &[]).unwrap();
    let c = |n: &str| s.object(n).unwrap().manifold.as_curve().unwrap().clone();
    (c("g1"), c("g2"))
}

fn fourier(coeffs: &[f64]) -> ClosedCurve {
    let v = |k: usize| point(&coeffs[3 * k..3 * k + 3]);
    ClosedCurve::new(CurveShape::Fourier {
        constant: v(0),
        cos: vec![v(1) + point(&[1.0, 0.0, 0.0]), v(2)],
        sin: vec![v(3) + point(&[0.0, 1.0, 0.3]), v(4)],
    })
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn trapezoid_is_exact_on_trig_polynomials(k in 0usize..15, phase in 0.0f64..TAU) {
        let f = |u: &[f64]| (TAU * k as f64 * u[0] + phase).cos();
        let exact = if k == 0 { phase.cos() } else { 0.0 };
        prop_assert!((integrate_box(f, &[true], &[16]).unwrap() - exact).abs() < 1e-12);
    }

    #[test]
    fn finite_differences_match_analytic_tangents(
        coeffs in proptest::collection::vec(-0.3f64..0.3, 15),
        t in 0.0f64..1.0,
    ) {
        let c = fourier(&coeffs);
        let analytic = c.tangent(t).unwrap();
        let h = 1e-6;
        let fd = (c.eval(t + h) - c.eval(t - h)) / (2.0 * h);
        prop_assert!((fd - &analytic).norm() <= 1e-6 * analytic.norm());
    }

    #[test]
    fn isometries_preserve_distances(seed in 0u64..1000, a in proptest::collection::vec(-5.0f64..5.0, 8), b in proptest::collection::vec(-5.0f64..5.0, 8)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for d in [3usize, 4] {
            let g = Isometry::random(d, Point::from_element(d, 1.5), &mut rng);
            let (x, y) = (Point::from_column_slice(&a[..d]), Point::from_column_slice(&b[..d]));
            let before = (&x - &y).norm();
            let after = (g.apply_point(&x) - g.apply_point(&y)).norm();
            prop_assert!((before - after).abs() < 1e-12);
        }
    }

    #[test]
    fn crossings_come_in_cancelling_pairs(coeffs in proptest::collection::vec(-0.3f64..0.3, 15)) {
        let c = fourier(&coeffs);
        if let Ok(points) = find_plane_intersections(&c, &Hyperplane::coordinate(2, 0.05)) {
            prop_assert_eq!(points.len() % 2, 0);
            prop_assert_eq!(points.iter().map(|p| p.sign).sum::<i32>(), 0);
        }
    }

    #[test]
    fn gamma_identity_holds(p in 1u32..=8, a in 0.25f64..4.0) {
        let l = gamma_identity_lhs(p, a).unwrap();
        let r = gamma_identity_rhs(p, a).unwrap();
        prop_assert!((l - r).abs() < 1e-9 * r.max(1.0));
    }
}

#[test]
fn gauss_integral_is_symmetric_and_odd_under_reversal() {
    let (g1, g2) = hopf();
    let cfg = QuadratureConfig::default();
    let lk = gauss_linking_r3(&g1, &g2, &cfg).unwrap().raw;
    let swapped = gauss_linking_r3(&g2, &g1, &cfg).unwrap().raw;
    assert!((lk - swapped).abs() < 1e-8);
    let rev1 = gauss_linking_r3(&g1.reversed(), &g2, &cfg).unwrap().raw;
    let rev2 = gauss_linking_r3(&g1, &g2.reversed(), &cfg).unwrap().raw;
    assert!((lk + rev1).abs() < 1e-8 && (lk + rev2).abs() < 1e-8);
}

#[test]
fn refinement_deltas_do_not_grow() {
    for (name, pair) in [("hopf_r3", ["g1", "g2"]), ("torus_link_r3", ["k0", "k1"])] {
        let s = builtin_scene(name, &[]).unwrap();
        let c = |n: &str| s.object(n).unwrap().manifold.as_curve().unwrap().clone();
        let (a, b) = (c(pair[0]), c(pair[1]));
        let values: Vec<f64> = [16, 32, 64, 128, 256, 512]
            .iter()
            .map(|&n| gauss_linking_at(&a, &b, n).unwrap().0)
            .collect();
        let deltas: Vec<f64> = values.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
        for w in deltas[1..].windows(2) {
            // Once at rounding level the deltas are only noise.
            assert!(w[1] <= w[0] || w[1] < 1e-13, "{name}: {deltas:?}");
        }
    }
}

#[test]
fn winding_is_constant_on_complement_components() {
    let c = ClosedCurve::new(CurveShape::Fourier {
        constant: point(&[0.0, 0.0]),
        cos: vec![point(&[1.0, 0.0]), point(&[0.1, 0.05])],
        sin: vec![point(&[0.0, 1.0]), point(&[-0.05, 0.1])],
    })
    .unwrap();
    let cfg = QuadratureConfig::default();
    let inside = [[0.0, 0.0], [0.3, 0.1], [-0.4, 0.2], [0.1, -0.5], [-0.2, -0.3]];
    let outside = [[3.0, 0.0], [0.0, 2.5], [-4.0, 1.0], [2.0, -2.0], [10.0, 10.0]];
    for (points, expected) in [(inside, 1), (outside, 0)] {
        for p in points {
            let w = winding_number(&c, &point(&p), &cfg).unwrap();
            assert_eq!(w.rounded, expected, "{p:?}");
            assert!(w.residual < 1e-10);
        }
    }
}

#[test]
fn winding_integral_matches_ray_casting() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    use rand::Rng;
    let c = ClosedCurve::circle_turns(point(&[0.2, -0.1]), unit(2, 0) * 1.3, unit(2, 1), 2).unwrap();
    let poly = c.sample_polyline(512).unwrap();
    let cfg = QuadratureConfig::default();
    let mut checked = 0;
    while checked < 40 {
        let q = point(&[rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)]);
        let near = (0..2048).any(|k| (c.eval(k as f64 / 2048.0) - &q).norm() < 0.05);
        if near {
            continue;
        }
        let w = winding_number(&c, &q, &cfg).unwrap();
        assert_eq!(raycast_winding(&poly, &q).unwrap(), w.rounded);
        checked += 1;
    }
}

#[test]
fn slice_contribution_is_stable_under_grid_doubling() {
    let s = builtin_scene("spun_pair_r4", &[]).unwrap();
    let m = &s.object("M").unwrap().manifold;
    let n = &s.object("N").unwrap().manifold;
    let h = Hyperplane::coordinate(1, 0.0);
    let cfg = QuadratureConfig::new(1e-8);
    let at = |grid| {
        let slices = slice_surface(n, &h, grid).unwrap();
        reduce_general_terms(m, &h, &slices, &cfg).unwrap().1
    };
    let (coarse, fine) = (at(128), at(256));
    assert_eq!(coarse.len(), fine.len());
    for (a, b) in coarse.iter().zip(&fine) {
        assert_eq!(a.sign, b.sign);
        assert!((a.linking.raw - b.linking.raw).abs() < 1e-3);
    }
}

#[test]
fn degree_integral_is_antisymmetric_in_four_space() {
    // Swapping the factors negates r and moves n columns past m columns:
    // (-1)^{mn+1} = -1 for m = 1, n = 2.
    let s = builtin_scene("spun_pair_r4", &[]).unwrap();
    let m: &PatchManifold = &s.object("M").unwrap().manifold;
    let n: &PatchManifold = &s.object("N").unwrap().manifold;
    let cfg = QuadratureConfig::new(1e-6).with_max_nodes(128);
    let a = degree_linking(m, n, &cfg).unwrap();
    let b = degree_linking(n, m, &cfg).unwrap();
    assert_eq!(a.rounded, -b.rounded);
}
