use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{ClosedCurve, Hyperplane};

/// Samples used to bracket sign changes of the transverse coordinate.
pub const BRACKET_SAMPLES: usize = 1024;
/// `|dx_k/dt|` at a crossing must exceed this.
pub const TRANSVERSALITY_TOL: f64 = 1e-6;
/// A sample this close to the hyperplane without a sign change is grazing.
pub const GRAZING_TOL: f64 = 1e-9;
/// Bisection stops once the transverse coordinate is this small.
pub const ROOT_TOL: f64 = 1e-12;

/// A transverse crossing of a curve through a coordinate hyperplane.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntersectionPoint {
    /// Crossing point in hyperplane coordinates (the fixed axis dropped).
    pub location: Vec<f64>,
    /// Sign of `dx_k/dt` at the crossing.
    pub sign: i32,
    pub parameter: f64,
}

/// Every crossing of `c` through the hyperplane `{x_k = value}`, ordered by
/// parameter.
pub fn find_plane_intersections(c: &ClosedCurve, h: &Hyperplane) -> Result<Vec<IntersectionPoint>> {
    let (axis, value) = h.as_coordinate()?;
    h.check_ambient(c.dim())?;
    let d = c.dim();
    let mut buf = vec![0.0; d];
    let mut f = |t: f64| {
        c.eval_into(t, &mut buf);
        buf[axis] - value
    };
    let n = BRACKET_SAMPLES;
    let ts: Vec<f64> = (0..n).map(|k| k as f64 / n as f64).collect();
    let fs: Vec<f64> = ts.iter().map(|&t| f(t)).collect();

    let mut roots = Vec::new();
    for i in 0..n {
        let j = (i + 1) % n;
        let (t0, t1) = (ts[i], if j == 0 { 1.0 } else { ts[j] });
        let (f0, f1) = (fs[i], fs[j]);
        if f0.abs() < GRAZING_TOL {
            let prev = fs[(i + n - 1) % n];
            if prev.abs() < GRAZING_TOL || f1.abs() < GRAZING_TOL || prev * f1 > 0.0 {
                return Err(Error::NonTransverse {
                    parameter: vec![t0],
                    derivative: derivative(c, axis, t0),
                });
            }
            let lo = t0 - 1.0 / n as f64;
            roots.push(bisect(&mut f, lo, t1, prev)?);
        } else if f1.abs() >= GRAZING_TOL && f0 * f1 < 0.0 {
            roots.push(bisect(&mut f, t0, t1, f0)?);
        }
    }

    let mut points = Vec::with_capacity(roots.len());
    for t in roots {
        let t = crate::geometry::wrap_unit(t);
        let dk = derivative(c, axis, t);
        if dk.abs() < TRANSVERSALITY_TOL {
            return Err(Error::NonTransverse {
                parameter: vec![t],
                derivative: dk,
            });
        }
        let p = c.eval(t);
        let location = (0..d).filter(|&i| i != axis).map(|i| p[i]).collect();
        points.push(IntersectionPoint {
            location,
            sign: if dk > 0.0 { 1 } else { -1 },
            parameter: t,
        });
    }
    points.sort_by(|a, b| a.parameter.total_cmp(&b.parameter));
    Ok(points)
}

fn derivative(c: &ClosedCurve, axis: usize, t: f64) -> f64 {
    let mut v = vec![0.0; c.dim()];
    c.derivative_into(t, &mut v);
    v[axis]
}

/// Bisection on `[lo, hi]` where `f(lo)` has sign `f_lo` and `f(hi)` the
/// opposite one.
fn bisect(f: &mut impl FnMut(f64) -> f64, mut lo: f64, mut hi: f64, f_lo: f64) -> Result<f64> {
    let lo_positive = f_lo > 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm.abs() < ROOT_TOL || mid <= lo || mid >= hi {
            return Ok(mid);
        }
        if (fm > 0.0) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{point, unit};

    fn x3() -> Hyperplane {
        Hyperplane::coordinate(2, 0.0)
    }

    #[test]
    fn vertical_circle_crosses_twice() {
        let c = ClosedCurve::circle(unit(3, 0), unit(3, 0), unit(3, 2)).unwrap();
        let pts = find_plane_intersections(&c, &x3()).unwrap();
        assert_eq!(pts.len(), 2);
        assert!((pts[0].location[0] - 2.0).abs() < 1e-12 && pts[0].location[1].abs() < 1e-12);
        assert_eq!(pts[0].sign, 1);
        assert_eq!(pts[0].parameter, 0.0);
        assert!(pts[1].location[0].abs() < 1e-10);
        assert_eq!(pts[1].sign, -1);
        assert!((pts[1].parameter - 0.5).abs() < 1e-12);
    }

    #[test]
    fn circle_in_plane_is_not_transverse() {
        let c = ClosedCurve::circle(point(&[0.0; 3]), unit(3, 0), unit(3, 1)).unwrap();
        assert!(matches!(
            find_plane_intersections(&c, &x3()),
            Err(Error::NonTransverse { .. })
        ));
    }

    #[test]
    fn tangent_contact_is_not_transverse() {
        // Touches x3 = 0 from above at t = 1/2.
        let c = ClosedCurve::circle(point(&[0.0, 0.0, 1.0]), unit(3, 0), unit(3, 2)).unwrap();
        assert!(matches!(
            find_plane_intersections(&c, &x3()),
            Err(Error::NonTransverse { .. })
        ));
    }

    #[test]
    fn tilted_circle_signs_cancel() {
        let c = ClosedCurve::circle(
            point(&[0.3, -0.2, 0.1]),
            point(&[1.0, 0.2, 0.4]),
            point(&[-0.1, 0.9, -0.7]),
        )
        .unwrap();
        let pts = find_plane_intersections(&c, &x3()).unwrap();
        assert_eq!(pts.len(), 2);
        assert_eq!(pts.iter().map(|p| p.sign).sum::<i32>(), 0);
        for p in &pts {
            assert!(c.eval(p.parameter)[2].abs() < 1e-12);
        }
    }
}
