use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::geometry::{ClosedCurve, CurveShape, Hyperplane, PatchManifold, PeriodicSpline, Point};

/// Default marching-squares resolution per chart coordinate.
pub const DEFAULT_GRID: usize = 512;
/// `|∇f|` along the slice must exceed this.
pub const SLICE_TRANSVERSALITY_TOL: f64 = 1e-6;

/// One component `N'_i` of a hyperplane slice, in hyperplane coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct SliceCurve {
    pub curve: ClosedCurve,
    pub sign: i32,
    /// First point of the loop in the surface chart.
    pub start: [f64; 2],
}

/// Sign relating the orientation of a hyperplane chart (fixed axis dropped)
/// followed by the normal `e_axis` to the ambient orientation.
pub(crate) fn chart_orientation(axis: usize, dim: usize) -> i32 {
    if (axis + 1 + dim) % 2 == 0 {
        1
    } else {
        -1
    }
}

/// A grid edge, identified by its two end nodes in wrapped indices.
type EdgeKey = ((usize, usize), (usize, usize));

struct Grid<'a> {
    surface: &'a PatchManifold,
    axis: usize,
    value: f64,
    n: usize,
    periodic: [bool; 2],
    f: Vec<f64>,
}

impl<'a> Grid<'a> {
    fn new(surface: &'a PatchManifold, axis: usize, value: f64, n: usize) -> Self {
        let p = surface.periodic();
        let mut grid = Self {
            surface,
            axis,
            value,
            n,
            periodic: [p[0], p[1]],
            f: Vec::with_capacity(n * n),
        };
        for j in 0..n {
            for i in 0..n {
                let v = grid.level(&[grid.coord(i), grid.coord(j)]);
                grid.f.push(v);
            }
        }
        grid
    }

    fn coord(&self, i: usize) -> f64 {
        (i as f64 + 0.5) / self.n as f64
    }

    fn level(&self, u: &[f64]) -> f64 {
        let mut x = vec![0.0; self.surface.ambient_dim()];
        self.surface.eval_into(u, &mut x);
        x[self.axis] - self.value
    }

    fn gradient(&self, u: &[f64]) -> [f64; 2] {
        let d = self.surface.ambient_dim();
        let mut jac = vec![0.0; 2 * d];
        self.surface.jacobian_into(u, &mut jac);
        [jac[self.axis], jac[d + self.axis]]
    }

    fn node(&self, i: usize, j: usize) -> (usize, usize) {
        (i % self.n, j % self.n)
    }

    fn value_at(&self, (i, j): (usize, usize)) -> f64 {
        self.f[j * self.n + i]
    }

    fn cells(&self, axis: usize) -> usize {
        if self.periodic[axis] {
            self.n
        } else {
            self.n - 1
        }
    }

    /// Whether an edge lies on a non-periodic chart boundary row/column.
    fn on_open_boundary(&self, key: &EdgeKey) -> bool {
        let ((i0, j0), (i1, j1)) = *key;
        let last = self.n - 1;
        (!self.periodic[0] && i0 == i1 && (i0 == 0 || i0 == last))
            || (!self.periodic[1] && j0 == j1 && (j0 == 0 || j0 == last))
    }
}

/// Oriented segment: from the `+ → -` edge to the `- → +` edge of a cell.
struct Segment {
    from: EdgeKey,
    to: EdgeKey,
    /// Unwrapped chart position of the crossing on `from`.
    from_point: [f64; 2],
}

fn edge_key(a: (usize, usize), b: (usize, usize)) -> EdgeKey {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

fn segments(grid: &Grid) -> Vec<Segment> {
    let mut out = Vec::new();
    for cj in 0..grid.cells(1) {
        for ci in 0..grid.cells(0) {
            // Corners counterclockwise in (u, v), in unwrapped indices.
            let corners = [(ci, cj), (ci + 1, cj), (ci + 1, cj + 1), (ci, cj + 1)];
            let vals: Vec<f64> = corners
                .iter()
                .map(|&(i, j)| grid.value_at(grid.node(i, j)))
                .collect();
            let pos: Vec<bool> = vals.iter().map(|&v| v > 0.0).collect();
            let crossing = |m: usize| {
                let (a, b) = (corners[m], corners[(m + 1) % 4]);
                let s = vals[m] / (vals[m] - vals[(m + 1) % 4]);
                let point = [
                    grid.coord(a.0) + s * (b.0 as f64 - a.0 as f64) / grid.n as f64,
                    grid.coord(a.1) + s * (b.1 as f64 - a.1 as f64) / grid.n as f64,
                ];
                (edge_key(grid.node(a.0, a.1), grid.node(b.0, b.1)), point)
            };
            let starts: Vec<usize> = (0..4).filter(|&m| pos[m] && !pos[(m + 1) % 4]).collect();
            let ends: Vec<usize> = (0..4).filter(|&m| !pos[m] && pos[(m + 1) % 4]).collect();
            let pairs: Vec<(usize, usize)> = match starts.len() {
                0 => Vec::new(),
                1 => vec![(starts[0], ends[0])],
                _ => {
                    let centre = [
                        (grid.coord(ci) + grid.coord(ci + 1)) / 2.0,
                        (grid.coord(cj) + grid.coord(cj + 1)) / 2.0,
                    ];
                    let shift = if grid.level(&centre) > 0.0 { 1 } else { 3 };
                    starts.iter().map(|&m| (m, (m + shift) % 4)).collect()
                }
            };
            for (s, e) in pairs {
                let (from, from_point) = crossing(s);
                let (to, _) = crossing(e);
                out.push(Segment {
                    from,
                    to,
                    from_point,
                });
            }
        }
    }
    out
}

/// Chains oriented segments into closed loops of chart points. Points are
/// unwrapped so each loop is continuous in `R^2`.
fn chain(grid: &Grid, segs: &[Segment]) -> Result<Vec<Vec<[f64; 2]>>> {
    let by_start: HashMap<EdgeKey, usize> = segs.iter().enumerate().map(|(k, s)| (s.from, k)).collect();
    let mut used = vec![false; segs.len()];
    let mut loops = Vec::new();
    for first in 0..segs.len() {
        if used[first] {
            continue;
        }
        if grid.on_open_boundary(&segs[first].from) {
            continue;
        }
        let mut points: Vec<[f64; 2]> = Vec::new();
        let mut k = first;
        loop {
            used[k] = true;
            let p = segs[k].from_point;
            let p = match points.last() {
                Some(prev) => unwrap_near(p, *prev, grid.periodic),
                None => p,
            };
            points.push(p);
            let next = by_start.get(&segs[k].to).copied();
            match next {
                Some(nk) if nk == first => break,
                Some(nk) if !used[nk] => k = nk,
                _ => return Err(Error::OpenContour { at: p }),
            }
        }
        loops.push(points);
    }
    // A chain starting on an open boundary never closes.
    if let Some(k) = (0..segs.len()).find(|&k| !used[k]) {
        return Err(Error::OpenContour {
            at: segs[k].from_point,
        });
    }
    Ok(loops)
}

fn unwrap_near(p: [f64; 2], prev: [f64; 2], periodic: [bool; 2]) -> [f64; 2] {
    let mut q = p;
    for a in 0..2 {
        if periodic[a] {
            q[a] += (prev[a] - p[a]).round();
        }
    }
    q
}

/// Newton projection onto `f = 0` along the gradient.
fn project(grid: &Grid, mut u: [f64; 2]) -> Result<[f64; 2]> {
    for _ in 0..20 {
        let f = grid.level(&u);
        let g = grid.gradient(&u);
        let norm2 = g[0] * g[0] + g[1] * g[1];
        if norm2.sqrt() <= SLICE_TRANSVERSALITY_TOL {
            return Err(Error::NonTransverse {
                parameter: u.to_vec(),
                derivative: norm2.sqrt(),
            });
        }
        if f.abs() < 1e-14 {
            break;
        }
        u[0] -= f * g[0] / norm2;
        u[1] -= f * g[1] / norm2;
    }
    Ok(u)
}

/// Contours `N ∩ H` for a surface `N` and a coordinate hyperplane `H` by
/// marching squares on a `grid × grid` mesh of cell centres.
///
/// Each loop is oriented canonically in the chart (increasing `u` if it wraps
/// in `u`, else increasing `v` if it wraps in `v`, else counterclockwise) and
/// gets the sign that makes `(tangent of N', normal e_axis)` agree with the
/// orientation of `N`. Components are sorted by their first chart point.
pub fn slice_surface(surface: &PatchManifold, h: &Hyperplane, grid: usize) -> Result<Vec<SliceCurve>> {
    if surface.intrinsic_dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: surface.intrinsic_dim(),
        });
    }
    let (axis, value) = h.as_coordinate()?;
    let d = surface.ambient_dim();
    h.check_ambient(d)?;
    if grid < 8 {
        return Err(Error::InvalidInput(format!("slice grid must be at least 8, got {grid}")));
    }
    let mesh = Grid::new(surface, axis, value, grid);
    let segs = segments(&mesh);
    let loops = chain(&mesh, &segs)?;
    let min_gap = 0.1 / grid as f64;
    let orientation = chart_orientation(axis, d);

    let mut out = Vec::with_capacity(loops.len());
    for raw in loops {
        let mut pts: Vec<[f64; 2]> = Vec::with_capacity(raw.len());
        for p in raw {
            let q = project(&mesh, p)?;
            if pts
                .last()
                .map_or(true, |l: &[f64; 2]| (q[0] - l[0]).hypot(q[1] - l[1]) >= min_gap)
            {
                pts.push(q);
            }
        }
        while pts.len() > 1 {
            let (a, b) = (pts[0], pts[pts.len() - 1]);
            let closing = unwrap_near(a, b, mesh.periodic);
            if (closing[0] - b[0]).hypot(closing[1] - b[1]) < min_gap {
                pts.pop();
            } else {
                break;
            }
        }
        if pts.len() < 4 {
            continue;
        }
        // Net displacement around the loop, in periods.
        let closing = unwrap_near(pts[0], pts[pts.len() - 1], mesh.periodic);
        let wrap = [
            (closing[0] - pts[0][0]).round() as i64,
            (closing[1] - pts[0][1]).round() as i64,
        ];
        let forward = if wrap[0] != 0 {
            wrap[0] > 0
        } else if wrap[1] != 0 {
            wrap[1] > 0
        } else {
            signed_area(&pts) > 0.0
        };
        // Marching produces loops with the positive side on the left, i.e.
        // det(tangent, ∇f) > 0; reversing flips that determinant.
        if !forward {
            pts.reverse();
        }
        let sign = if forward { orientation } else { -orientation };

        let wrapped: Vec<[f64; 2]> = pts
            .iter()
            .map(|p| [wrap_coord(p[0], mesh.periodic[0]), wrap_coord(p[1], mesh.periodic[1])])
            .collect();
        let start = (0..wrapped.len())
            .min_by(|&a, &b| {
                wrapped[a][0]
                    .total_cmp(&wrapped[b][0])
                    .then(wrapped[a][1].total_cmp(&wrapped[b][1]))
            })
            .unwrap();
        let vertices: Vec<Point> = (0..pts.len())
            .map(|k| {
                let x = surface.eval(&pts[(start + k) % pts.len()]);
                Point::from_iterator(d - 1, (0..d).filter(|&i| i != axis).map(|i| x[i]))
            })
            .collect();
        let spline = PeriodicSpline::chord_length(&vertices)?;
        out.push(SliceCurve {
            curve: ClosedCurve::new(CurveShape::Samples(spline))?,
            sign,
            start: wrapped[start],
        });
    }
    out.sort_by(|a, b| {
        a.start[0]
            .total_cmp(&b.start[0])
            .then(a.start[1].total_cmp(&b.start[1]))
    });
    Ok(out)
}

fn wrap_coord(x: f64, periodic: bool) -> f64 {
    if periodic {
        crate::geometry::wrap_unit(x)
    } else {
        x
    }
}

fn signed_area(pts: &[[f64; 2]]) -> f64 {
    let n = pts.len();
    (0..n)
        .map(|k| {
            let (a, b) = (pts[k], pts[(k + 1) % n]);
            a[0] * b[1] - b[0] * a[1]
        })
        .sum::<f64>()
        / 2.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{point, unit};

    fn sphere(center: Point) -> PatchManifold {
        PatchManifold::sphere(center, [unit(4, 0), unit(4, 2), unit(4, 1)]).unwrap()
    }

    #[test]
    fn equatorial_slice_is_a_unit_circle() {
        let s = slice_surface(&sphere(point(&[0.0; 4])), &Hyperplane::coordinate(1, 0.0), 128).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].sign.abs(), 1);
        for k in 0..50 {
            let p = s[0].curve.eval(k as f64 / 50.0);
            assert!((p.norm() - 1.0).abs() < 1e-6, "{p}");
            assert!(p[2].abs() < 1e-12);
        }
    }

    #[test]
    fn sphere_above_the_hyperplane_has_no_slice() {
        let s = sphere(point(&[0.0, 0.0, 0.0, 1.5]));
        assert!(slice_surface(&s, &Hyperplane::coordinate(3, 0.0), 64).unwrap().is_empty());
    }

    #[test]
    fn torus_slices_into_two_opposite_circles() {
        let torus = PatchManifold::torus(
            point(&[0.0; 4]),
            [unit(4, 0), unit(4, 1), unit(4, 3)],
            2.0,
            1.0,
        )
        .unwrap();
        let s = slice_surface(&torus, &Hyperplane::coordinate(3, 0.0), 128).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s[0].sign + s[1].sign, 0);
        let radii: Vec<f64> = s.iter().map(|c| c.curve.eval(0.3).norm()).collect();
        assert!(radii.iter().any(|r| (r - 3.0).abs() < 1e-6) && radii.iter().any(|r| (r - 1.0).abs() < 1e-6));
    }

    #[test]
    fn slice_through_the_pole_is_open() {
        // The hyperplane x1 = 0 cuts the sphere chart through both poles.
        let s = sphere(point(&[0.0; 4]));
        let r = slice_surface(&s, &Hyperplane::coordinate(0, 0.0), 64);
        assert!(matches!(r, Err(Error::OpenContour { .. })), "{r:?}");
    }
}
