use crate::error::{Error, Result};
use crate::geometry::{Point, Polyline};

/// Points within this distance of a segment are on the boundary.
pub const BOUNDARY_TOL: f64 = 1e-9;

/// Winding number of a closed planar polyline about `q` by counting signed
/// crossings of the ray `{q + s e₁ : s > 0}`.
///
/// Upward crossings count `+1`, downward `-1`. Vertices on the ray are
/// classified with the half-open rule `y <= q_y`, so each vertex is counted
/// for exactly one of its two segments.
pub fn raycast_winding(p: &Polyline, q: &Point) -> Result<i64> {
    if p.dim() != 2 || q.len() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: if p.dim() != 2 { p.dim() } else { q.len() },
        });
    }
    let (qx, qy) = (q[0], q[1]);
    let mut w = 0;
    for (a, b) in p.segments() {
        if segment_distance([a[0], a[1]], [b[0], b[1]], [qx, qy]) <= BOUNDARY_TOL {
            return Err(Error::PointOnBoundary);
        }
        let (a_below, b_below) = (a[1] <= qy, b[1] <= qy);
        if a_below == b_below {
            continue;
        }
        let x = a[0] + (qy - a[1]) * (b[0] - a[0]) / (b[1] - a[1]);
        if x > qx {
            w += if a_below { 1 } else { -1 };
        }
    }
    Ok(w)
}

pub(crate) fn segment_distance(a: [f64; 2], b: [f64; 2], q: [f64; 2]) -> f64 {
    let d = [b[0] - a[0], b[1] - a[1]];
    let len2 = d[0] * d[0] + d[1] * d[1];
    let s = if len2 > 0.0 {
        (((q[0] - a[0]) * d[0] + (q[1] - a[1]) * d[1]) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    (a[0] + s * d[0] - q[0]).hypot(a[1] + s * d[1] - q[1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{point, unit, ClosedCurve};

    fn square() -> Polyline {
        Polyline::new(vec![
            point(&[1.0, 0.0]),
            point(&[0.0, 1.0]),
            point(&[-1.0, 0.0]),
            point(&[0.0, -1.0]),
        ])
        .unwrap()
    }

    #[test]
    fn square_around_origin() {
        assert_eq!(raycast_winding(&square(), &point(&[0.0, 0.0])).unwrap(), 1);
        assert_eq!(raycast_winding(&square(), &point(&[5.0, 0.0])).unwrap(), 0);
    }

    #[test]
    fn ray_through_vertices_counts_once() {
        // The ray from (-0.5, 0) passes through the vertex (1, 0).
        assert_eq!(raycast_winding(&square(), &point(&[-0.5, 0.0])).unwrap(), 1);
        // Ray tangent to the vertex (0, 1) from the left: no crossing.
        assert_eq!(raycast_winding(&square(), &point(&[-3.0, 1.0])).unwrap(), 0);
    }

    #[test]
    fn doubled_circle_winds_twice() {
        let c = ClosedCurve::circle_turns(point(&[0.0, 0.0]), unit(2, 0), unit(2, 1), 2).unwrap();
        let p = c.sample_polyline(256).unwrap();
        assert_eq!(raycast_winding(&p, &point(&[0.0, 0.0])).unwrap(), 2);
        let backwards = c.reversed().sample_polyline(256).unwrap();
        assert_eq!(raycast_winding(&backwards, &point(&[0.1, -0.2])).unwrap(), -2);
    }

    #[test]
    fn boundary_points_are_rejected() {
        assert!(matches!(
            raycast_winding(&square(), &point(&[0.5, 0.5])),
            Err(Error::PointOnBoundary)
        ));
    }
}
