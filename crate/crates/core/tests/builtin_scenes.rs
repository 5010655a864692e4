use linkproj::geometry::{ClosedCurve, Hyperplane, PatchManifold, Scene};
use linkproj::invariants::{degree_linking, gauss_linking_r3, QuadratureConfig};
use linkproj::oracles::crossing_sign_linking_retry;
use linkproj::reduction::{reduce_pair, reduced_linking_curves};
use linkproj::scenes::builtin_scene;

fn curve<'a>(scene: &'a Scene, name: &str) -> &'a ClosedCurve {
    scene.object(name).unwrap().manifold.as_curve().unwrap()
}

fn crossing_count(a: &ClosedCurve, b: &ClosedCurve) -> i64 {
    let pa = a.sample_polyline(256).unwrap();
    let pb = b.sample_polyline(256).unwrap();
    crossing_sign_linking_retry(&pa, &pb, 0).unwrap().0
}

#[test]
fn hopf_methods_agree() {
    let s = builtin_scene("hopf_r3", &[]).unwrap();
    let (g1, g2) = (curve(&s, "g1"), curve(&s, "g2"));
    let cfg = QuadratureConfig::default();
    let gauss = gauss_linking_r3(g1, g2, &cfg).unwrap();
    assert!(gauss.residual < 1e-6);
    let reduce = reduced_linking_curves(g1, g2, &cfg).unwrap();
    let crossings = crossing_count(g1, g2);
    assert_eq!(gauss.rounded, -1);
    assert_eq!(reduce.rounded, -1);
    assert_eq!(crossings, -1);
    assert_eq!(s.expected()[0].value, -1);
    let degree = degree_linking(&g1.clone().into(), &g2.clone().into(), &cfg).unwrap();
    assert!((degree.raw - gauss.raw).abs() < 1e-8);
}

#[test]
fn unlink_is_zero() {
    let s = builtin_scene("unlink_r3", &[]).unwrap();
    let (g1, g2) = (curve(&s, "g1"), curve(&s, "g2"));
    let cfg = QuadratureConfig::default();
    let gauss = gauss_linking_r3(g1, g2, &cfg).unwrap();
    assert_eq!(gauss.rounded, 0);
    assert!(gauss.residual < 1e-8);
    assert_eq!(reduced_linking_curves(g1, g2, &cfg).unwrap().rounded, 0);
    assert_eq!(crossing_count(g1, g2), 0);
}

#[test]
fn torus_link_matches_crossings() {
    let s = builtin_scene("torus_link_r3", &[2.0, 4.0]).unwrap();
    let (k0, k1) = (curve(&s, "k0"), curve(&s, "k1"));
    let gauss = gauss_linking_r3(k0, k1, &QuadratureConfig::default()).unwrap();
    let crossings = crossing_count(k0, k1);
    assert_eq!(gauss.rounded.abs(), 2);
    assert_eq!(gauss.rounded, crossings);
    assert_eq!(s.expected()[0].value, crossings);
}

#[test]
fn spun_pair_links_once() {
    let s = builtin_scene("spun_pair_r4", &[]).unwrap();
    let m: &PatchManifold = &s.object("M").unwrap().manifold;
    let n: &PatchManifold = &s.object("N").unwrap().manifold;
    let cfg = QuadratureConfig::new(1e-6).with_max_nodes(128);
    let full = degree_linking(m, n, &cfg).unwrap();
    let reduced = reduce_pair(m, n, &Hyperplane::coordinate(1, 0.0), 512, &cfg).unwrap();
    assert_eq!(full.rounded, s.expected()[0].value);
    assert!((full.raw - reduced.raw).abs() < 5e-3, "{} vs {}", full.raw, reduced.raw);

    // The slice is a Hopf pair in the hyperplane.
    let sliced_m = curve(&s, "M").map_affine(&Hyperplane::coordinate(1, 0.0).chart(4).unwrap()).unwrap();
    let equator = linkproj::reduction::slice_surface(n, &Hyperplane::coordinate(1, 0.0), 512).unwrap();
    assert_eq!(equator.len(), 1);
    let hopf = crossing_count(&sliced_m, &equator[0].curve) * equator[0].sign as i64;
    assert_eq!(hopf, full.rounded);
}

#[test]
fn separated_pair_is_zero() {
    let s = builtin_scene("separated_pair_r4", &[]).unwrap();
    let m = &s.object("M").unwrap().manifold;
    let n = &s.object("N").unwrap().manifold;
    let cfg = QuadratureConfig::new(1e-6).with_max_nodes(128);
    let full = degree_linking(m, n, &cfg).unwrap();
    assert_eq!(full.rounded, 0);
    assert!(full.residual < 1e-6);
}
