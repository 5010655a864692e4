//! Builtin scene families and seeded random scenes.

use std::f64::consts::TAU;

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{
    point, sampled_distance, unit, ClosedCurve, CurveShape, Expectation, Hyperplane,
    PatchManifold, Scene, SceneObject,
};
use crate::reduction::find_plane_intersections;

pub const BUILTIN_NAMES: [&str; 5] = [
    "unlink_r3",
    "hopf_r3",
    "torus_link_r3",
    "spun_pair_r4",
    "separated_pair_r4",
];

const CROSSING_PROVENANCE: &str = "crossing count of 256-vertex polylines";

fn object(name: &str, manifold: impl Into<PatchManifold>) -> SceneObject {
    SceneObject {
        name: name.to_string(),
        manifold: manifold.into(),
    }
}

fn expect(a: &str, b: &str, value: i64, provenance: &str) -> Expectation {
    Expectation {
        pair: [a.to_string(), b.to_string()],
        value,
        provenance: provenance.to_string(),
    }
}

fn no_params(name: &str, params: &[f64]) -> Result<()> {
    if params.is_empty() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("`{name}` takes no parameters")))
    }
}

/// Builds a named builtin scene. `torus_link_r3` takes `[a, b]` (default
/// `[2, 4]`); the other families take no parameters.
pub fn builtin_scene(name: &str, params: &[f64]) -> Result<Scene> {
    match name {
        "hopf_r3" | "unlink_r3" => {
            no_params(name, params)?;
            let g1 = ClosedCurve::circle(point(&[0.0; 3]), unit(3, 0), unit(3, 1))?;
            let (center, value, provenance) = if name == "hopf_r3" {
                (1.0, -1, CROSSING_PROVENANCE)
            } else {
                (4.0, 0, "circles separated by the plane x1 = 1.5")
            };
            let g2 = ClosedCurve::circle(unit(3, 0) * center, unit(3, 0), unit(3, 2))?;
            Scene::new(
                name,
                3,
                vec![object("g1", g1), object("g2", g2)],
                vec![expect("g1", "g2", value, provenance)],
            )
        }
        "torus_link_r3" => torus_link(params),
        "spun_pair_r4" | "separated_pair_r4" => {
            no_params(name, params)?;
            let n = PatchManifold::sphere(point(&[0.0; 4]), [unit(4, 0), unit(4, 2), unit(4, 1)])?;
            let (offset, value, provenance) = if name == "spun_pair_r4" {
                (1.0, -1, "slice by x2 = 0 gives a Hopf pair; crossing count")
            } else {
                (5.0, 0, "objects separated by the hyperplane x1 = 3")
            };
            let m = ClosedCurve::circle(unit(4, 0) * offset, unit(4, 0), unit(4, 3))?;
            Scene::new(
                name,
                4,
                vec![object("M", m), object("N", n)],
                vec![expect("M", "N", value, provenance)],
            )
        }
        other => Err(Error::UnknownFamily(other.to_string())),
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// The `(a, b)` torus link on the torus with radii 2 and 1: `gcd(a, b)`
/// parallel `(a/d, b/d)` torus knots, pairwise linking `-(a/d)(b/d)`.
fn torus_link(params: &[f64]) -> Result<Scene> {
    let (a, b) = match params {
        [] => (2, 4),
        [a, b] if a.fract() == 0.0 && b.fract() == 0.0 && *a >= 1.0 && *b >= 1.0 => {
            (*a as u32, *b as u32)
        }
        _ => {
            return Err(Error::InvalidInput(
                "`torus_link_r3` takes two positive integers [a, b]".into(),
            ))
        }
    };
    let d = gcd(a, b);
    if d < 2 {
        return Err(Error::InvalidInput(format!(
            "torus link ({a}, {b}) has one component; need gcd(a, b) >= 2"
        )));
    }
    let (p, q) = (a / d, b / d);
    let objects: Vec<SceneObject> = (0..d)
        .map(|j| {
            let curve = ClosedCurve::new(CurveShape::TorusKnot {
                center: point(&[0.0; 3]),
                frame: [unit(3, 0), unit(3, 1), unit(3, 2)],
                major: 2.0,
                minor: 1.0,
                longitude: p,
                meridian: q,
                phase: TAU * j as f64 / a as f64,
            })?;
            Ok(object(&format!("k{j}"), curve))
        })
        .collect::<Result<_>>()?;
    let mut expected = Vec::new();
    for i in 0..d as usize {
        for j in i + 1..d as usize {
            expected.push(expect(
                &objects[i].name,
                &objects[j].name,
                -((p * q) as i64),
                CROSSING_PROVENANCE,
            ));
        }
    }
    Scene::new(format!("torus_link_r3_{a}_{b}"), 3, objects, expected)
}

/// Minimum separation of the two curves of a random scene.
pub const RANDOM_MIN_DISTANCE: f64 = 0.15;
const MIN_SPEED: f64 = 0.5;
const MIN_CROSSING_SLOPE: f64 = 0.05;

/// Random pair `g1`, `g2` in `R^3` with `g1` in the plane `x₃ = 0`, both
/// trigonometric polynomials, at distance more than 0.15, crossing the plane
/// transversally. Deterministic in `seed`.
pub fn random_planar_scene(seed: u64) -> Result<Scene> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..1000 {
        let g1 = random_planar_curve(&mut rng)?;
        let g2 = random_space_curve(&mut rng)?;
        if acceptable(&g1, &g2) {
            return Scene::new(
                format!("random_planar_{seed}"),
                3,
                vec![object("g1", g1), object("g2", g2)],
                Vec::new(),
            );
        }
    }
    Err(Error::InvalidInput(format!(
        "no admissible random scene found for seed {seed}"
    )))
}

fn acceptable(g1: &ClosedCurve, g2: &ClosedCurve) -> bool {
    let fast = |c: &ClosedCurve| {
        (0..1024).all(|k| {
            c.tangent(k as f64 / 1024.0)
                .map_or(false, |v| v.norm() > MIN_SPEED)
        })
    };
    if !fast(g1) || !fast(g2) {
        return false;
    }
    let Ok(points) = find_plane_intersections(g2, &Hyperplane::coordinate(2, 0.0)) else {
        return false;
    };
    let steep = points.iter().all(|p| {
        let v = g2.tangent(p.parameter).unwrap();
        v[2].abs() > MIN_CROSSING_SLOPE * v.norm()
    });
    steep && sampled_distance(&g1.clone().into(), &g2.clone().into()) > RANDOM_MIN_DISTANCE
}

fn vec3(x: f64, y: f64, z: f64) -> DVector<f64> {
    point(&[x, y, z])
}

fn random_planar_curve(rng: &mut ChaCha8Rng) -> Result<ClosedCurve> {
    let r = rng.random_range(0.8..1.2);
    let rot = rng.random_range(0.0..TAU);
    let mut cos = vec![vec3(r * rot.cos(), r * rot.sin(), 0.0)];
    let mut sin = vec![vec3(-r * rot.sin(), r * rot.cos(), 0.0)];
    for k in 2..=3 {
        let amp = 0.15 / k as f64;
        cos.push(vec3(rng.random_range(-amp..amp), rng.random_range(-amp..amp), 0.0));
        sin.push(vec3(rng.random_range(-amp..amp), rng.random_range(-amp..amp), 0.0));
    }
    ClosedCurve::new(CurveShape::Fourier {
        constant: vec3(0.0, 0.0, 0.0),
        cos,
        sin,
    })
}

fn random_space_curve(rng: &mut ChaCha8Rng) -> Result<ClosedCurve> {
    let constant = vec3(
        rng.random_range(-1.5..1.5),
        rng.random_range(-1.5..1.5),
        rng.random_range(-0.3..0.3),
    );
    // Random orthonormal pair for the leading harmonic.
    let mut axis = || vec3(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    let (a, b) = loop {
        let a = axis();
        let b = axis();
        if a.norm() > 0.2 && b.norm() > 0.2 {
            let a = a.normalize();
            let b = &b - &a * a.dot(&b);
            if b.norm() > 0.2 {
                break (a, b.normalize());
            }
        }
    };
    let r = rng.random_range(0.5..1.2);
    let amp = 0.15;
    let mut small = || vec3(rng.random_range(-amp..amp), rng.random_range(-amp..amp), rng.random_range(-amp..amp)) / 2.0;
    let (c2, s2) = (small(), small());
    ClosedCurve::new(CurveShape::Fourier {
        constant,
        cos: vec![a * r, c2],
        sin: vec![b * r, s2],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_construct() {
        for name in BUILTIN_NAMES {
            let s = builtin_scene(name, &[]).unwrap();
            assert_eq!(s.pairs().len(), 1, "{name}");
            assert_eq!(s.expected().len(), 1);
        }
        assert!(matches!(builtin_scene("trefoil", &[]), Err(Error::UnknownFamily(_))));
        assert!(builtin_scene("hopf_r3", &[1.0]).is_err());
    }

    #[test]
    fn torus_links_have_gcd_components() {
        let s = builtin_scene("torus_link_r3", &[3.0, 6.0]).unwrap();
        assert_eq!(s.objects().len(), 3);
        assert_eq!(s.expected()[0].value, -2);
        assert!(builtin_scene("torus_link_r3", &[2.0, 3.0]).is_err());
    }

    #[test]
    fn random_scenes_are_reproducible() {
        let a = random_planar_scene(11).unwrap();
        let b = random_planar_scene(11).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, random_planar_scene(12).unwrap());
        let g1 = a.object("g1").unwrap().manifold.as_curve().unwrap().clone();
        for k in 0..32 {
            assert_eq!(g1.eval(k as f64 / 32.0)[2], 0.0);
        }
    }
}
