use nalgebra::Vector3;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use super::raycast::segment_distance;
use crate::error::{Error, Result};
use crate::geometry::{Point, Polyline};

/// Degeneracy threshold for projected directions, distances and depths.
pub const GENERICITY_TOL: f64 = 1e-9;
/// Random projection directions tried before giving up.
pub const MAX_RETRIES: usize = 20;

/// A crossing of segment `i` of the first polyline with segment `j` of the
/// second in the projection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Crossing {
    pub i: usize,
    pub j: usize,
    pub sign: i32,
    /// 0 if the first polyline is nearer the viewer, 1 otherwise.
    pub over: usize,
}

fn as3(p: &Point) -> Vector3<f64> {
    Vector3::new(p[0], p[1], p[2])
}

/// Orthonormal `(a, b)` with `a × b = dir / |dir|`.
fn screen_basis(dir: &Vector3<f64>) -> Result<(Vector3<f64>, Vector3<f64>, Vector3<f64>)> {
    let norm = dir.norm();
    if !(norm > GENERICITY_TOL) || !norm.is_finite() {
        return Err(Error::InvalidInput(format!(
            "projection direction must be a non-zero finite vector, got {dir:?}"
        )));
    }
    let n = dir / norm;
    let helper = if n.x.abs() < 0.9 {
        Vector3::x()
    } else {
        Vector3::y()
    };
    let a = (helper - n * n.dot(&helper)).normalize();
    let b = n.cross(&a);
    Ok((a, b, n))
}

/// All projected crossings between two closed polylines in `R^3`, viewed from
/// `+dir`. The sign of a crossing is `+1` when the over strand turns
/// counterclockwise onto the under strand.
pub fn crossings(p1: &Polyline, p2: &Polyline, dir: &Point) -> Result<Vec<Crossing>> {
    for p in [p1, p2] {
        if p.dim() != 3 {
            return Err(Error::DimensionMismatch {
                expected: 3,
                found: p.dim(),
            });
        }
    }
    if dir.len() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: dir.len(),
        });
    }
    let (a, b, n) = screen_basis(&as3(dir))?;
    let project = |p: &Polyline| -> Vec<([f64; 2], f64)> {
        p.vertices()
            .iter()
            .map(|v| {
                let v = as3(v);
                ([v.dot(&a), v.dot(&b)], v.dot(&n))
            })
            .collect()
    };
    let (v1, v2) = (project(p1), project(p2));

    for (verts, other) in [(&v1, &v2), (&v2, &v1)] {
        for (q, _) in verts.iter() {
            for k in 0..other.len() {
                let (s, e) = (other[k].0, other[(k + 1) % other.len()].0);
                if segment_distance(s, e, *q) <= GENERICITY_TOL {
                    return Err(Error::NonGenericProjection(format!(
                        "a vertex projects within {GENERICITY_TOL:e} of a segment"
                    )));
                }
            }
        }
    }

    let mut out = Vec::new();
    for i in 0..v1.len() {
        let (pa, za) = v1[i];
        let (pb, zb) = v1[(i + 1) % v1.len()];
        let d1 = [pb[0] - pa[0], pb[1] - pa[1]];
        for j in 0..v2.len() {
            let (pc, zc) = v2[j];
            let (pd, zd) = v2[(j + 1) % v2.len()];
            let d2 = [pd[0] - pc[0], pd[1] - pc[1]];
            if !boxes_overlap([pa, pb], [pc, pd]) {
                continue;
            }
            let det = d1[0] * d2[1] - d1[1] * d2[0];
            let scale = d1[0].hypot(d1[1]) * d2[0].hypot(d2[1]);
            if det.abs() <= GENERICITY_TOL * scale {
                return Err(Error::NonGenericProjection(format!(
                    "segments {i} and {j} project to parallel lines"
                )));
            }
            let w = [pc[0] - pa[0], pc[1] - pa[1]];
            let s = (w[0] * d2[1] - w[1] * d2[0]) / det;
            let t = (w[0] * d1[1] - w[1] * d1[0]) / det;
            if !(0.0..1.0).contains(&s) || !(0.0..1.0).contains(&t) {
                continue;
            }
            let depth1 = za + s * (zb - za);
            let depth2 = zc + t * (zd - zc);
            if (depth1 - depth2).abs() <= GENERICITY_TOL {
                return Err(Error::NonGenericProjection(format!(
                    "segments {i} and {j} meet in space"
                )));
            }
            let over = if depth1 > depth2 { 0 } else { 1 };
            let orient = if det > 0.0 { 1 } else { -1 };
            out.push(Crossing {
                i,
                j,
                sign: if over == 0 { orient } else { -orient },
                over,
            });
        }
    }
    Ok(out)
}

fn boxes_overlap(s: [[f64; 2]; 2], t: [[f64; 2]; 2]) -> bool {
    (0..2).all(|k| {
        let (lo1, hi1) = (s[0][k].min(s[1][k]), s[0][k].max(s[1][k]));
        let (lo2, hi2) = (t[0][k].min(t[1][k]), t[0][k].max(t[1][k]));
        lo1 <= hi2 + GENERICITY_TOL && lo2 <= hi1 + GENERICITY_TOL
    })
}

/// Linking number as half the signed count of inter-component crossings.
pub fn crossing_sign_linking(p1: &Polyline, p2: &Polyline, dir: &Point) -> Result<i64> {
    let total: i64 = crossings(p1, p2, dir)?.iter().map(|c| c.sign as i64).sum();
    if total % 2 != 0 {
        return Err(Error::NonGenericProjection(format!(
            "odd signed crossing count {total}"
        )));
    }
    Ok(total / 2)
}

/// Random unit direction in `R^3` from a seeded generator.
pub fn random_direction(rng: &mut ChaCha8Rng) -> Point {
    loop {
        let v: Vec<f64> = (0..3).map(|_| StandardNormal.sample(rng)).collect();
        let p = Point::from_vec(v);
        let n = p.norm();
        if n > 1e-6 {
            return p / n;
        }
    }
}

/// [`crossing_sign_linking`] along a slightly tilted `e₃`, then along up to
/// [`MAX_RETRIES`] seeded random directions when the projection is not
/// generic. Returns the value and the direction that produced it.
pub fn crossing_sign_linking_retry(p1: &Polyline, p2: &Polyline, seed: u64) -> Result<(i64, Point)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut dir = Point::from_column_slice(&[0.0123, 0.0311, 1.0]);
    let mut last = None;
    for _ in 0..=MAX_RETRIES {
        match crossing_sign_linking(p1, p2, &dir) {
            Ok(v) => return Ok((v, dir)),
            Err(e @ Error::NonGenericProjection(_)) => last = Some(e),
            Err(e) => return Err(e),
        }
        dir = random_direction(&mut rng);
    }
    Err(last.unwrap())
}
