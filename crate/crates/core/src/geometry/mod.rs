//! Geometric primitives: simplices from coordinates and from edge lengths,
//! convex hulls, closed surfaces and horizontal cross-sections.

mod hull;
mod intersect;
mod section;
mod surface;
mod tet;

pub use hull::{convex_hull, ConvexHull};
pub use intersect::{triangles_intersect, TrianglePairRelation};
pub use section::{
    plane_section_surface, plane_section_tets, tet_section_area, tet_section_polygon, PlaneSection, SectionNudge,
};
pub use surface::{ClosedSurface, SurfaceEdge};
pub use tet::{edge_slot, TetLengths, TET_EDGES};

pub type Point3 = nalgebra::Point3<f64>;
pub type Vector3 = nalgebra::Vector3<f64>;

/// Signed volume of the tetrahedron `(a, b, c, d)`; positive when `d` lies on
/// the side of `(a, b, c)` that sees it counterclockwise.
pub fn signed_volume(a: &Point3, b: &Point3, c: &Point3, d: &Point3) -> f64 {
    (b - a).cross(&(c - a)).dot(&(d - a)) / 6.0
}

pub fn triangle_area(a: &Point3, b: &Point3, c: &Point3) -> f64 {
    0.5 * (b - a).cross(&(c - a)).norm()
}

pub fn longest_edge(pts: &[Point3]) -> f64 {
    let mut best: f64 = 0.0;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            best = best.max((pts[i] - pts[j]).norm());
        }
    }
    best
}

/// Largest pairwise distance, O(n²).
pub fn diameter(pts: &[Point3]) -> f64 {
    longest_edge(pts)
}

/// Scale-invariant degeneracy test for a tetrahedron given by coordinates.
pub fn tet_is_degenerate(p: &[Point3; 4]) -> bool {
    let l = longest_edge(p);
    signed_volume(&p[0], &p[1], &p[2], &p[3]).abs() < crate::tol::DEGENERATE_VOLUME * l * l * l
}

/// Barycentric coordinates of `x` with respect to the tetrahedron `p`.
pub fn tet_barycentric(p: &[Point3; 4], x: &Point3) -> Option<[f64; 4]> {
    let total = signed_volume(&p[0], &p[1], &p[2], &p[3]);
    if total == 0.0 {
        return None;
    }
    let b0 = signed_volume(x, &p[1], &p[2], &p[3]) / total;
    let b1 = signed_volume(&p[0], x, &p[2], &p[3]) / total;
    let b2 = signed_volume(&p[0], &p[1], x, &p[3]) / total;
    let b3 = 1.0 - b0 - b1 - b2;
    Some([b0, b1, b2, b3])
}

/// Barycentric coordinates of the orthogonal projection of `x` onto the
/// plane of the triangle, together with the distance of `x` to that plane.
pub fn triangle_barycentric(a: &Point3, b: &Point3, c: &Point3, x: &Point3) -> Option<([f64; 3], f64)> {
    let n = (b - a).cross(&(c - a));
    let nn = n.norm_squared();
    if nn == 0.0 {
        return None;
    }
    let dist = (x - a).dot(&n) / nn.sqrt();
    let la = (c - b).cross(&(x - b)).dot(&n) / nn;
    let lb = (a - c).cross(&(x - c)).dot(&n) / nn;
    Some(([la, lb, 1.0 - la - lb], dist))
}

/// Interior dihedral angle of the tetrahedron `p` at the edge `(i, j)`,
/// measured from coordinates.
pub fn tet_dihedral_from_points(p: &[Point3; 4], i: usize, j: usize) -> f64 {
    let others: Vec<usize> = (0..4).filter(|&v| v != i && v != j).collect();
    let e = (p[j] - p[i]).normalize();
    let perp = |v: Vector3| v - e * v.dot(&e);
    let u = perp(p[others[0]] - p[i]);
    let w = perp(p[others[1]] - p[i]);
    u.cross(&w).norm().atan2(u.dot(&w))
}

/// Rigid motions of 3-space as velocity fields: translations along the axes
/// followed by infinitesimal rotations about the axes through the origin.
pub fn rigid_motion_fields(points: &[Point3]) -> Vec<Vec<Vector3>> {
    let axes = [Vector3::x(), Vector3::y(), Vector3::z()];
    let mut out = Vec::with_capacity(6);
    for a in axes {
        out.push(vec![a; points.len()]);
    }
    for a in axes {
        out.push(points.iter().map(|p| a.cross(&p.coords)).collect());
    }
    out
}
