//! JSON scene documents.
//!
//! ```json
//! {
//!   "name": "hopf_r3",
//!   "ambient_dim": 3,
//!   "objects": [
//!     { "name": "g1", "kind": "builtin", "family": "circle",
//!       "params": [0,0,0, 1,0,0, 0,1,0, 1, 1] },
//!     { "name": "g2", "kind": "samples", "vertices": [[2,0,0], [1,0,1], [0,0,0], [1,0,-1]] }
//!   ],
//!   "expected": [ { "pair": ["g1", "g2"], "value": -1, "provenance": "crossing count" } ]
//! }
//! ```
//!
//! Unknown fields are rejected. Builtin families and their flat `params`
//! layouts, with `d = ambient_dim`:
//!
//! | family       | params                                                              |
//! |--------------|---------------------------------------------------------------------|
//! | `circle`     | center(d), u(d), v(d), radius, [turns]                              |
//! | `torus_knot` | longitude, meridian, major, minor, phase, center(d), e0(d), e1(d), e2(d) |
//! | `fourier`    | K, constant(d), then for k = 1..K: cos_k(d), sin_k(d)               |
//! | `sphere`     | center(d), axis0(d), axis1(d), pole(d), radius                      |
//! | `torus`      | center(d), axis0(d), axis1(d), axis2(d), major, minor               |

use std::path::Path;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use super::curve::{ClosedCurve, CurveShape};
use super::patch::{PatchManifold, PatchShape};
use super::scene::{Expectation, Scene, SceneObject};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub ambient_dim: usize,
    pub objects: Vec<ObjectEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub expected: Vec<ExpectedEntry>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ObjectKind {
    Builtin,
    Samples,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectEntry {
    pub name: String,
    pub kind: ObjectKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectedEntry {
    pub pair: [String; 2],
    pub value: i64,
    #[serde(default)]
    pub provenance: String,
}

pub fn parse_scene(text: &str) -> Result<Scene> {
    let doc: SceneDocument =
        serde_json::from_str(text).map_err(|e| Error::SceneFormat(e.to_string()))?;
    doc.into_scene("scene")
}

pub fn load_scene(path: &Path) -> Result<Scene> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::SceneFormat(format!("{}: {e}", path.display())))?;
    let doc: SceneDocument = serde_json::from_str(&text)
        .map_err(|e| Error::SceneFormat(format!("{}: {e}", path.display())))?;
    let fallback = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "scene".into());
    doc.into_scene(&fallback)
}

pub fn scene_to_json(scene: &Scene) -> String {
    let doc = SceneDocument::from_scene(scene);
    serde_json::to_string_pretty(&doc).expect("scene documents always serialize")
}

impl SceneDocument {
    pub fn into_scene(self, fallback_name: &str) -> Result<Scene> {
        let d = self.ambient_dim;
        let objects = self
            .objects
            .into_iter()
            .enumerate()
            .map(|(i, entry)| {
                let ctx = |msg: String| {
                    Error::SceneFormat(format!("objects[{i}] (`{}`): {msg}", entry.name))
                };
                let manifold = entry.build(d).map_err(|e| match e {
                    Error::SceneFormat(msg) | Error::InvalidInput(msg) => ctx(msg),
                    other => ctx(other.to_string()),
                })?;
                Ok(SceneObject {
                    name: entry.name,
                    manifold,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let expected = self
            .expected
            .into_iter()
            .map(|e| Expectation {
                pair: e.pair,
                value: e.value,
                provenance: e.provenance,
            })
            .collect();
        Scene::new(
            self.name.unwrap_or_else(|| fallback_name.to_string()),
            d,
            objects,
            expected,
        )
    }

    pub fn from_scene(scene: &Scene) -> Self {
        Self {
            name: Some(scene.name().to_string()),
            ambient_dim: scene.ambient_dim(),
            objects: scene
                .objects()
                .iter()
                .map(|o| ObjectEntry::from_manifold(&o.name, &o.manifold))
                .collect(),
            expected: scene
                .expected()
                .iter()
                .map(|e| ExpectedEntry {
                    pair: e.pair.clone(),
                    value: e.value,
                    provenance: e.provenance.clone(),
                })
                .collect(),
        }
    }
}

impl ObjectEntry {
    fn build(&self, d: usize) -> Result<PatchManifold> {
        match self.kind {
            ObjectKind::Builtin => {
                if self.vertices.is_some() {
                    return Err(Error::SceneFormat(
                        "field `vertices` is not allowed for builtin objects".into(),
                    ));
                }
                let family = self
                    .family
                    .as_deref()
                    .ok_or_else(|| Error::SceneFormat("missing field `family`".into()))?;
                let params = self
                    .params
                    .as_deref()
                    .ok_or_else(|| Error::SceneFormat("missing field `params`".into()))?;
                family_object(family, params, d)
            }
            ObjectKind::Samples => {
                if self.family.is_some() || self.params.is_some() {
                    return Err(Error::SceneFormat(
                        "fields `family`/`params` are not allowed for sampled objects".into(),
                    ));
                }
                let vertices = self
                    .vertices
                    .as_ref()
                    .ok_or_else(|| Error::SceneFormat("missing field `vertices`".into()))?;
                let points = vertices
                    .iter()
                    .enumerate()
                    .map(|(k, v)| {
                        if v.len() != d {
                            Err(Error::SceneFormat(format!(
                                "field `vertices[{k}]`: expected {d} coordinates, got {}",
                                v.len()
                            )))
                        } else {
                            Ok(DVector::from_column_slice(v))
                        }
                    })
                    .collect::<Result<Vec<_>>>()?;
                let curve = ClosedCurve::from_samples(&points)?;
                curve.check_immersed(points.len())?;
                Ok(curve.into())
            }
        }
    }

    fn from_manifold(name: &str, m: &PatchManifold) -> Self {
        let builtin = |family: &str, params: Vec<f64>| Self {
            name: name.to_string(),
            kind: ObjectKind::Builtin,
            family: Some(family.to_string()),
            params: Some(params),
            vertices: None,
        };
        let flat = |vs: &[&DVector<f64>]| -> Vec<f64> {
            vs.iter().flat_map(|v| v.iter().copied()).collect()
        };
        match m.shape() {
            PatchShape::Curve(c) => match c.shape() {
                CurveShape::Circle {
                    center,
                    u,
                    v,
                    turns,
                } => {
                    let mut p = flat(&[center, u, v]);
                    p.extend([1.0, *turns as f64]);
                    builtin("circle", p)
                }
                CurveShape::TorusKnot {
                    center,
                    frame,
                    major,
                    minor,
                    longitude,
                    meridian,
                    phase,
                } => {
                    let mut p = vec![*longitude as f64, *meridian as f64, *major, *minor, *phase];
                    p.extend(flat(&[center, &frame[0], &frame[1], &frame[2]]));
                    builtin("torus_knot", p)
                }
                CurveShape::Fourier { constant, cos, sin } => {
                    let mut p = vec![cos.len() as f64];
                    p.extend(constant.iter());
                    for (a, b) in cos.iter().zip(sin) {
                        p.extend(flat(&[a, b]));
                    }
                    builtin("fourier", p)
                }
                CurveShape::Samples(s) => Self {
                    name: name.to_string(),
                    kind: ObjectKind::Samples,
                    family: None,
                    params: None,
                    vertices: Some((0..s.len()).map(|k| s.vertex(k).as_slice().to_vec()).collect()),
                },
            },
            PatchShape::Sphere { center, axes } => {
                let mut p = flat(&[center, &axes[0], &axes[1], &axes[2]]);
                p.push(1.0);
                builtin("sphere", p)
            }
            PatchShape::Torus {
                center,
                axes,
                major,
                minor,
            } => {
                let mut p = flat(&[center, &axes[0], &axes[1], &axes[2]]);
                p.extend([*major, *minor]);
                builtin("torus", p)
            }
        }
    }
}

/// Builds one object of a builtin family from its flat parameter list.
pub fn family_object(family: &str, params: &[f64], d: usize) -> Result<PatchManifold> {
    if let Some(bad) = params.iter().position(|x| !x.is_finite()) {
        return Err(Error::SceneFormat(format!("field `params[{bad}]` is not finite")));
    }
    let expect_len = |lens: &[usize]| -> Result<()> {
        if lens.contains(&params.len()) {
            Ok(())
        } else {
            Err(Error::SceneFormat(format!(
                "field `params`: family `{family}` in dimension {d} takes {} values, got {}",
                lens.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" or "),
                params.len()
            )))
        }
    };
    let vec_at = |k: usize, offset: usize| DVector::from_column_slice(&params[offset + k * d..offset + (k + 1) * d]);
    let count = |x: f64, what: &str| -> Result<u32> {
        if x >= 1.0 && x.fract() == 0.0 && x <= u32::MAX as f64 {
            Ok(x as u32)
        } else {
            Err(Error::SceneFormat(format!(
                "field `params`: {what} must be a positive integer, got {x}"
            )))
        }
    };
    match family {
        "circle" => {
            expect_len(&[3 * d + 1, 3 * d + 2])?;
            let radius = params[3 * d];
            let turns = match params.get(3 * d + 1) {
                Some(&t) => count(t, "turns")?,
                None => 1,
            };
            let curve = ClosedCurve::circle_turns(
                vec_at(0, 0),
                vec_at(1, 0) * radius,
                vec_at(2, 0) * radius,
                turns,
            )?;
            Ok(curve.into())
        }
        "torus_knot" => {
            expect_len(&[5 + 4 * d])?;
            let curve = ClosedCurve::new(CurveShape::TorusKnot {
                center: vec_at(0, 5),
                frame: [vec_at(1, 5), vec_at(2, 5), vec_at(3, 5)],
                major: params[2],
                minor: params[3],
                longitude: count(params[0], "longitude")?,
                meridian: count(params[1], "meridian")?,
                phase: params[4],
            })?;
            Ok(curve.into())
        }
        "fourier" => {
            let k = params
                .first()
                .copied()
                .ok_or_else(|| Error::SceneFormat("field `params`: empty".into()))?;
            let k = count(k, "harmonic count")? as usize;
            expect_len(&[1 + d + 2 * k * d])?;
            let constant = vec_at(0, 1);
            let cos = (0..k).map(|j| vec_at(1 + 2 * j, 1)).collect();
            let sin = (0..k).map(|j| vec_at(2 + 2 * j, 1)).collect();
            Ok(ClosedCurve::new(CurveShape::Fourier { constant, cos, sin })?.into())
        }
        "sphere" => {
            expect_len(&[4 * d + 1])?;
            let r = params[4 * d];
            PatchManifold::sphere(
                vec_at(0, 0),
                [vec_at(1, 0) * r, vec_at(2, 0) * r, vec_at(3, 0) * r],
            )
        }
        "torus" => {
            expect_len(&[4 * d + 2])?;
            PatchManifold::torus(
                vec_at(0, 0),
                [vec_at(1, 0), vec_at(2, 0), vec_at(3, 0)],
                params[4 * d],
                params[4 * d + 1],
            )
        }
        other => Err(Error::UnknownFamily(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const HOPF: &str = r#"{
        "ambient_dim": 3,
        "objects": [
            {"name": "g1", "kind": "builtin", "family": "circle", "params": [0,0,0, 1,0,0, 0,1,0, 1]},
            {"name": "g2", "kind": "builtin", "family": "circle", "params": [1,0,0, 1,0,0, 0,0,1, 1]}
        ],
        "expected": [{"pair": ["g1", "g2"], "value": -1, "provenance": "test"}]
    }"#;

    #[test]
    fn parses_builtin_objects() {
        let scene = parse_scene(HOPF).unwrap();
        assert_eq!(scene.objects().len(), 2);
        assert_eq!(scene.expectation("g2", "g1").unwrap().value, -1);
    }

    #[test]
    fn rejects_unknown_fields() {
        let bad = HOPF.replace("\"kind\": \"builtin\", \"family\": \"circle\"", "\"kind\": \"builtin\", \"colour\": 1, \"family\": \"circle\"");
        let err = parse_scene(&bad).unwrap_err().to_string();
        assert!(err.contains("unknown field `colour`"), "{err}");
        assert!(err.contains("line"), "{err}");
    }

    #[test]
    fn reports_wrong_param_count() {
        let bad = HOPF.replace("[1,0,0, 1,0,0, 0,0,1, 1]", "[1,0,0, 1,0,0, 0,0,1]");
        let err = parse_scene(&bad).unwrap_err().to_string();
        assert!(err.contains("objects[1]") && err.contains("params"), "{err}");
    }

    #[test]
    fn rejects_unknown_family() {
        let bad = HOPF.replace("\"family\": \"circle\", \"params\": [0,0,0", "\"family\": \"trefoil\", \"params\": [0,0,0");
        assert!(parse_scene(&bad).unwrap_err().to_string().contains("trefoil"));
    }

    #[test]
    fn rejects_touching_objects() {
        let bad = HOPF.replace("[1,0,0, 1,0,0, 0,0,1, 1]", "[2,0,0, 1,0,0, 0,0,1, 1]");
        assert!(matches!(
            parse_scene(&bad),
            Err(Error::DisjointnessViolation { .. })
        ));
    }

    #[test]
    fn json_round_trip_preserves_geometry() {
        let scene = parse_scene(HOPF).unwrap();
        let again = parse_scene(&scene_to_json(&scene)).unwrap();
        for (a, b) in scene.objects().iter().zip(again.objects()) {
            for k in 0..10 {
                let t = [k as f64 / 10.0];
                assert!((a.manifold.eval(&t) - b.manifold.eval(&t)).norm() < 1e-15);
            }
        }
    }
}
