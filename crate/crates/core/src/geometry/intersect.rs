//! Triangle-triangle intersection tests used for embeddedness checks.

use super::{ClosedSurface, Point3, Vector3};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrianglePairRelation {
    /// The triangles meet at most in their shared vertices/edge.
    Disjoint,
    /// The triangles overlap beyond their shared simplex.
    Intersecting,
}

fn project(t: &[Point3; 3], axis: &Vector3) -> (f64, f64) {
    let v: Vec<f64> = t.iter().map(|p| p.coords.dot(axis)).collect();
    (v.iter().copied().fold(f64::INFINITY, f64::min), v.iter().copied().fold(f64::NEG_INFINITY, f64::max))
}

/// Separating-axis test for two triangles without common vertices. Touching
/// within `tol` counts as intersecting.
pub fn triangles_intersect(a: &[Point3; 3], b: &[Point3; 3], tol: f64) -> bool {
    let ea = [a[1] - a[0], a[2] - a[1], a[0] - a[2]];
    let eb = [b[1] - b[0], b[2] - b[1], b[0] - b[2]];
    let na = ea[0].cross(&ea[1]);
    let nb = eb[0].cross(&eb[1]);
    let mut axes = vec![na, nb];
    for x in &ea {
        for y in &eb {
            axes.push(x.cross(y));
        }
        axes.push(na.cross(x));
    }
    for y in &eb {
        axes.push(nb.cross(y));
    }
    for ax in axes {
        let n = ax.norm();
        if n < 1e-14 {
            continue;
        }
        let ax = ax / n;
        let (lo_a, hi_a) = project(a, &ax);
        let (lo_b, hi_b) = project(b, &ax);
        if hi_a < lo_b - tol || hi_b < lo_a - tol {
            return false;
        }
    }
    true
}

/// Coefficients of `d` in the basis `(u, w)` of a plane containing all three.
fn plane_coords(u: &Vector3, w: &Vector3, d: &Vector3) -> (f64, f64) {
    let (uu, uw, ww) = (u.dot(u), u.dot(w), w.dot(w));
    let (du, dw) = (d.dot(u), d.dot(w));
    let det = uu * ww - uw * uw;
    ((du * ww - dw * uw) / det, (dw * uu - du * uw) / det)
}

fn cone_contains(u: &Vector3, w: &Vector3, d: &Vector3, strict: bool) -> bool {
    let (s, t) = plane_coords(u, w, d);
    let scale = s.abs().max(t.abs());
    let m = 1e-12 * scale;
    if strict {
        s > m && t > m
    } else {
        s >= -m && t >= -m && scale > 0.0
    }
}

fn shared_vertex_relation(v: &Point3, a: [Point3; 2], b: [Point3; 2]) -> TrianglePairRelation {
    let (u1, w1) = (a[0] - v, a[1] - v);
    let (u2, w2) = (b[0] - v, b[1] - v);
    let n1 = u1.cross(&w1);
    let n2 = u2.cross(&w2);
    let d = n1.cross(&n2);
    if d.norm() > 1e-12 * n1.norm() * n2.norm() {
        for dir in [d, -d] {
            if cone_contains(&u1, &w1, &dir, false) && cone_contains(&u2, &w2, &dir, false) {
                return TrianglePairRelation::Intersecting;
            }
        }
        return TrianglePairRelation::Disjoint;
    }
    // Coplanar: the two angular sectors at v overlap in an open set.
    let overlap = [u2, w2, u2.normalize() + w2.normalize()].iter().any(|x| cone_contains(&u1, &w1, x, true))
        || [u1, w1, u1.normalize() + w1.normalize()].iter().any(|x| cone_contains(&u2, &w2, x, true));
    if overlap {
        TrianglePairRelation::Intersecting
    } else {
        TrianglePairRelation::Disjoint
    }
}

fn shared_edge_relation(p: &Point3, q: &Point3, c1: &Point3, c2: &Point3) -> TrianglePairRelation {
    let e = (q - p).normalize();
    let perp = |x: Vector3| x - e * x.dot(&e);
    let (u, w) = (perp(c1 - p), perp(c2 - p));
    let angle = u.cross(&w).norm().atan2(u.dot(&w));
    if angle < 1e-9 {
        TrianglePairRelation::Intersecting
    } else {
        TrianglePairRelation::Disjoint
    }
}

impl ClosedSurface {
    /// Pairs of triangles that intersect beyond their shared simplex.
    pub fn self_intersections(&self) -> Vec<(usize, usize)> {
        let tol = 1e-12 * self.diameter();
        let p = &self.points;
        let mut out = Vec::new();
        for i in 0..self.triangles.len() {
            for j in i + 1..self.triangles.len() {
                let (ti, tj) = (self.triangles[i], self.triangles[j]);
                let shared: Vec<usize> = ti.iter().copied().filter(|v| tj.contains(v)).collect();
                let rel = match shared.len() {
                    0 => {
                        let a = [p[ti[0]], p[ti[1]], p[ti[2]]];
                        let b = [p[tj[0]], p[tj[1]], p[tj[2]]];
                        if triangles_intersect(&a, &b, tol) {
                            TrianglePairRelation::Intersecting
                        } else {
                            TrianglePairRelation::Disjoint
                        }
                    }
                    1 => {
                        let v = shared[0];
                        let oa: Vec<Point3> = ti.iter().filter(|&&x| x != v).map(|&x| p[x]).collect();
                        let ob: Vec<Point3> = tj.iter().filter(|&&x| x != v).map(|&x| p[x]).collect();
                        shared_vertex_relation(&p[v], [oa[0], oa[1]], [ob[0], ob[1]])
                    }
                    2 => {
                        let c1 = *ti.iter().find(|v| !shared.contains(v)).unwrap();
                        let c2 = *tj.iter().find(|v| !shared.contains(v)).unwrap();
                        shared_edge_relation(&p[shared[0]], &p[shared[1]], &p[c1], &p[c2])
                    }
                    _ => TrianglePairRelation::Intersecting,
                };
                if rel == TrianglePairRelation::Intersecting {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn is_embedded(&self) -> bool {
        self.self_intersections().is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn crossing_and_separate_triangles() {
        let a = [Point3::new(0.0, 0.0, 0.0), Point3::new(1.0, 0.0, 0.0), Point3::new(0.0, 1.0, 0.0)];
        let b = [Point3::new(0.2, 0.2, -1.0), Point3::new(0.2, 0.2, 1.0), Point3::new(0.9, 0.9, 0.5)];
        assert!(triangles_intersect(&a, &b, 0.0));
        let c = [Point3::new(0.2, 0.2, 0.1), Point3::new(0.3, 0.2, 1.0), Point3::new(0.9, 0.9, 0.5)];
        assert!(!triangles_intersect(&a, &c, 0.0));
    }

    #[test]
    fn shared_vertex_cases() {
        let v = Point3::origin();
        let a = [Point3::new(1.0, 0.0, 0.0), Point3::new(0.0, 1.0, 0.0)];
        // Piercing: second triangle passes through the first's interior.
        let b = [Point3::new(0.5, 0.5, 1.0), Point3::new(0.5, 0.5, -1.0)];
        assert_eq!(shared_vertex_relation(&v, a, b), TrianglePairRelation::Intersecting);
        // Fan neighbours without overlap.
        let c = [Point3::new(-1.0, 0.0, 0.2), Point3::new(0.0, -1.0, 0.3)];
        assert_eq!(shared_vertex_relation(&v, a, c), TrianglePairRelation::Disjoint);
    }
}
