use rayon::prelude::*;

use super::affine::{Affine, Isometry};
use super::patch::PatchManifold;
use super::Point;
use crate::error::{Error, Result};

/// Minimum sampled distance two objects of a scene must keep.
pub const DISJOINTNESS_TOL: f64 = 1e-6;

/// Samples per curve, and per surface coordinate, for the disjointness check.
const CURVE_SAMPLES: usize = 1024;
const SURFACE_SAMPLES: usize = 128;

#[derive(Debug, Clone, PartialEq)]
pub struct SceneObject {
    pub name: String,
    pub manifold: PatchManifold,
}

/// A declared linking value for a pair of objects.
#[derive(Debug, Clone, PartialEq)]
pub struct Expectation {
    pub pair: [String; 2],
    pub value: i64,
    pub provenance: String,
}

/// Named collection of pairwise disjoint closed manifolds in one ambient space.
#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    name: String,
    ambient_dim: usize,
    objects: Vec<SceneObject>,
    expected: Vec<Expectation>,
}

impl Scene {
    /// Checks dimensions, unique names, declared pairs and pairwise
    /// disjointness.
    pub fn new(
        name: impl Into<String>,
        ambient_dim: usize,
        objects: Vec<SceneObject>,
        expected: Vec<Expectation>,
    ) -> Result<Self> {
        if ambient_dim < 2 {
            return Err(Error::InvalidInput(format!(
                "ambient dimension must be at least 2, got {ambient_dim}"
            )));
        }
        for obj in &objects {
            if obj.manifold.ambient_dim() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    expected: ambient_dim,
                    found: obj.manifold.ambient_dim(),
                });
            }
        }
        for (i, a) in objects.iter().enumerate() {
            if objects[..i].iter().any(|b| b.name == a.name) {
                return Err(Error::InvalidInput(format!(
                    "duplicate object name `{}`",
                    a.name
                )));
            }
        }
        let scene = Self {
            name: name.into(),
            ambient_dim,
            objects,
            expected,
        };
        for e in &scene.expected {
            scene.object(&e.pair[0])?;
            scene.object(&e.pair[1])?;
        }
        for (i, a) in scene.objects.iter().enumerate() {
            for b in &scene.objects[i + 1..] {
                check_disjoint(&a.manifold, &b.manifold)?;
            }
        }
        Ok(scene)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn objects(&self) -> &[SceneObject] {
        &self.objects
    }

    pub fn expected(&self) -> &[Expectation] {
        &self.expected
    }

    pub fn object(&self, name: &str) -> Result<&SceneObject> {
        self.objects
            .iter()
            .find(|o| o.name == name)
            .ok_or_else(|| Error::InvalidInput(format!("scene has no object named `{name}`")))
    }

    /// All unordered pairs in declaration order.
    pub fn pairs(&self) -> Vec<(&SceneObject, &SceneObject)> {
        let mut out = Vec::new();
        for (i, a) in self.objects.iter().enumerate() {
            for b in &self.objects[i + 1..] {
                out.push((a, b));
            }
        }
        out
    }

    pub fn expectation(&self, a: &str, b: &str) -> Option<&Expectation> {
        self.expected
            .iter()
            .find(|e| (e.pair[0] == a && e.pair[1] == b) || (e.pair[0] == b && e.pair[1] == a))
    }

    /// Moves every object by `g`. Orientations are preserved because `g` is
    /// proper.
    pub fn apply_isometry(&self, g: &Isometry) -> Result<Self> {
        if g.dim() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: g.dim(),
            });
        }
        self.map_objects(&g.to_affine())
    }

    /// Applies an arbitrary affine self-map (used by homotopy families); the
    /// result is re-validated for disjointness.
    pub fn map_objects(&self, map: &Affine) -> Result<Self> {
        let objects = self
            .objects
            .iter()
            .map(|o| {
                Ok(SceneObject {
                    name: o.name.clone(),
                    manifold: o.manifold.map_affine(map)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(
            self.name.clone(),
            map.out_dim(),
            objects,
            self.expected.clone(),
        )
    }

    /// Replaces one object, re-validating the scene.
    pub fn with_object(&self, name: &str, manifold: PatchManifold) -> Result<Self> {
        self.object(name)?;
        let objects = self
            .objects
            .iter()
            .map(|o| SceneObject {
                name: o.name.clone(),
                manifold: if o.name == name {
                    manifold.clone()
                } else {
                    o.manifold.clone()
                },
            })
            .collect();
        Self::new(
            self.name.clone(),
            self.ambient_dim,
            objects,
            self.expected.clone(),
        )
    }
}

fn sample_grid(m: &PatchManifold) -> (Vec<Vec<f64>>, Vec<Point>) {
    let per_dim = if m.intrinsic_dim() == 1 {
        CURVE_SAMPLES
    } else {
        SURFACE_SAMPLES
    };
    let k = m.intrinsic_dim();
    let params: Vec<Vec<f64>> = (0..per_dim.pow(k as u32))
        .map(|mut idx| {
            (0..k)
                .map(|_| {
                    let c = ((idx % per_dim) as f64 + 0.5) / per_dim as f64;
                    idx /= per_dim;
                    c
                })
                .collect()
        })
        .collect();
    let points = params.iter().map(|u| m.eval(u)).collect();
    (params, points)
}

/// Gauss-Newton on `|a(s) - b(t)|²` from a sampled pair.
fn polish(a: &PatchManifold, b: &PatchManifold, s: &[f64], t: &[f64]) -> f64 {
    let (ka, kb) = (a.intrinsic_dim(), b.intrinsic_dim());
    let (pa, pb) = (a.periodic(), b.periodic());
    let mut u: Vec<f64> = s.iter().chain(t).copied().collect();
    let dist = |u: &[f64]| (a.eval(&u[..ka]) - b.eval(&u[ka..])).norm();
    let mut best = dist(&u);
    for _ in 0..30 {
        let r = a.eval(&u[..ka]) - b.eval(&u[ka..]);
        let mut jac = nalgebra::DMatrix::zeros(r.len(), ka + kb);
        jac.columns_mut(0, ka).copy_from(&a.jacobian(&u[..ka]));
        jac.columns_mut(ka, kb).copy_from(&(-b.jacobian(&u[ka..])));
        let Ok(step) = jac.svd(true, true).solve(&(-&r), 1e-12) else {
            break;
        };
        let mut next = u.clone();
        for (j, x) in next.iter_mut().enumerate() {
            let periodic = if j < ka { pa[j] } else { pb[j - ka] };
            *x += step[j];
            if !periodic {
                *x = x.clamp(1e-9, 1.0 - 1e-9);
            }
        }
        let d = dist(&next);
        if !(d < best) {
            break;
        }
        let converged = best - d < 1e-15;
        best = d;
        u = next;
        if converged {
            break;
        }
    }
    best
}

/// Minimum distance between two manifolds: exhaustive sampling, then local
/// refinement of the closest sampled pairs.
pub fn sampled_distance(a: &PatchManifold, b: &PatchManifold) -> f64 {
    let (ua, pa) = sample_grid(a);
    let (ub, pb) = sample_grid(b);
    let mut nearest: Vec<(f64, usize, usize)> = pa
        .par_iter()
        .enumerate()
        .map(|(i, x)| {
            pb.iter()
                .enumerate()
                .map(|(j, y)| ((x - y).norm_squared(), i, j))
                .min_by(|p, q| p.0.total_cmp(&q.0))
                .unwrap()
        })
        .collect();
    nearest.sort_by(|p, q| p.0.total_cmp(&q.0));
    let coarse = nearest[0].0.sqrt();
    nearest
        .iter()
        .take(8)
        .map(|&(_, i, j)| polish(a, b, &ua[i], &ub[j]))
        .fold(coarse, f64::min)
}

pub fn check_disjoint(a: &PatchManifold, b: &PatchManifold) -> Result<f64> {
    let distance = sampled_distance(a, b);
    if !(distance > DISJOINTNESS_TOL) {
        return Err(Error::DisjointnessViolation {
            distance,
            lambda: None,
        });
    }
    Ok(distance)
}
