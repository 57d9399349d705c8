//! Rigidity matrices, infinitesimal flexes and the decomposition of flexes
//! of convex spheres into rigid motions plus flat-vertex displacements.

use std::collections::BTreeSet;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::complex::{edge_key, Edge, Triangulation3};
use crate::error::{Error, Result};
use crate::geometry::{rigid_motion_fields, ClosedSurface, Point3, Vector3};
use crate::linalg::{null_space, rank_of};
use crate::tol;

#[derive(Debug, Clone, Serialize)]
pub struct Framework {
    pub points: Vec<Point3>,
    pub edges: Vec<Edge>,
}

impl Framework {
    pub fn new(points: Vec<Point3>, edges: Vec<Edge>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for &(a, b) in &edges {
            if a == b || a >= points.len() || b >= points.len() {
                return Err(Error::Validation(format!("bad framework edge ({a}, {b})")));
            }
            if !seen.insert(edge_key(a, b)) {
                return Err(Error::Validation(format!("repeated framework edge ({a}, {b})")));
            }
            if (points[a] - points[b]).norm() == 0.0 {
                return Err(Error::Validation(format!("framework edge ({a}, {b}) has zero length")));
            }
        }
        Ok(Framework { points, edges })
    }

    /// The 1-skeleton of a surface, over the vertices it uses.
    pub fn from_surface(s: &ClosedSurface) -> Result<Self> {
        Self::new(s.points.clone(), s.edge_pairs())
    }

    /// The full 1-skeleton of a tetrahedral complex.
    pub fn from_triangulation(t: &Triangulation3) -> Result<Self> {
        Self::new(t.vertices.clone(), t.topology().edge_tets.keys().copied().collect())
    }

    fn scale(&self) -> f64 {
        crate::geometry::diameter(&self.points).max(f64::MIN_POSITIVE)
    }
}

/// `|E| × 3|V|`: row `(p_i − p_j)` in the block of `i`, `(p_j − p_i)` in
/// the block of `j`.
pub fn rigidity_matrix(f: &Framework) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(f.edges.len(), 3 * f.points.len());
    for (r, &(i, j)) in f.edges.iter().enumerate() {
        let d = f.points[i] - f.points[j];
        for c in 0..3 {
            m[(r, 3 * i + c)] = d[c];
            m[(r, 3 * j + c)] = -d[c];
        }
    }
    m
}

fn to_field(v: &DVector<f64>) -> Vec<Vector3> {
    (0..v.len() / 3).map(|i| Vector3::new(v[3 * i], v[3 * i + 1], v[3 * i + 2])).collect()
}

fn to_vector(q: &[Vector3]) -> DVector<f64> {
    DVector::from_iterator(3 * q.len(), q.iter().flat_map(|v| [v.x, v.y, v.z]))
}

#[derive(Debug, Clone, Serialize)]
pub struct FlexSpace {
    /// Descending.
    pub singular_values: Vec<f64>,
    pub threshold: f64,
    pub gap_ratio: Option<f64>,
    /// Orthonormal basis of all infinitesimal flexes.
    pub basis: Vec<Vec<Vector3>>,
    /// Orthonormal basis of the flexes orthogonal to the rigid motions.
    pub nontrivial_basis: Vec<Vec<Vector3>>,
    pub kernel_dim: usize,
    pub trivial_dim: usize,
    pub nontrivial_dim: usize,
    /// `max |(p_i − p_j)·(q_i − q_j)|` over edges and basis flexes, divided
    /// by the diameter.
    pub relative_residual: f64,
}

impl FlexSpace {
    pub fn singular_values_csv(&self) -> String {
        let mut s = String::from("index,singular_value\n");
        for (i, v) in self.singular_values.iter().enumerate() {
            s.push_str(&format!("{i},{v:e}\n"));
        }
        s
    }
}

pub fn flex_space(f: &Framework) -> Result<FlexSpace> {
    let rigid: Vec<DVector<f64>> = rigid_motion_fields(&f.points).iter().map(|q| to_vector(q)).collect();
    let trivial_dim = rank_of(&rigid, tol::RIGIDITY_RANK);
    if trivial_dim != 6 {
        return Err(Error::DegenerateConfiguration(format!(
            "rigid motions span {trivial_dim} dimensions, points do not span 3-space"
        )));
    }
    let m = rigidity_matrix(f);
    let ns = null_space(&m, tol::RIGIDITY_RANK);
    let kernel_dim = ns.basis.len();
    // Remove the rigid-motion component, then orthonormalize what is left.
    let q_rigid = DMatrix::from_columns(&rigid).qr().q();
    let mut nontrivial: Vec<DVector<f64>> = Vec::new();
    for v in &ns.basis {
        let mut w = v - &q_rigid * (q_rigid.transpose() * v);
        for u in &nontrivial {
            w -= u * u.dot(&w);
        }
        if w.norm() > 1e-6 {
            nontrivial.push(w.normalize());
        }
    }
    let nontrivial_dim = kernel_dim.saturating_sub(trivial_dim);
    let relative_residual = ns.basis.iter().map(|v| (&m * v).amax()).fold(0.0, f64::max) / f.scale();
    nontrivial.truncate(nontrivial_dim);
    Ok(FlexSpace {
        singular_values: ns.singular_values,
        threshold: ns.threshold,
        gap_ratio: ns.gap_ratio,
        basis: ns.basis.iter().map(to_field).collect(),
        nontrivial_basis: nontrivial.iter().map(to_field).collect(),
        kernel_dim,
        trivial_dim,
        nontrivial_dim,
        relative_residual,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct RigidityVerdict {
    pub rigid: bool,
    pub nontrivial_dim: usize,
    pub kernel_dim: usize,
    pub gap_ratio: Option<f64>,
}

/// Boundary vertices whose star in `s` is planar, with unit outward normals.
pub fn surface_flat_vertices(s: &ClosedSurface) -> Vec<(usize, Vector3)> {
    let tol = tol::FLAT_VERTEX * s.diameter();
    let mut out = Vec::new();
    let mut star: Vec<Vec<usize>> = vec![Vec::new(); s.points.len()];
    for (ti, tri) in s.triangles.iter().enumerate() {
        for &v in tri {
            star[v].push(ti);
        }
    }
    for (v, ts) in star.iter().enumerate() {
        if ts.is_empty() {
            continue;
        }
        let n: Vector3 = ts.iter().map(|&t| s.normal(t)).sum::<Vector3>();
        let n = n.normalize();
        let flat = ts
            .iter()
            .flat_map(|&t| s.triangles[t])
            .all(|w| (s.points[w] - s.points[v]).dot(&n).abs() <= tol);
        if flat {
            out.push((v, n));
        }
    }
    out
}

/// Rigidity of a polyhedron given by a boundary triangulation whose vertices
/// are exactly the polyhedron's vertices.
pub fn is_infinitesimally_rigid(s: &ClosedSurface) -> Result<RigidityVerdict> {
    let flat = surface_flat_vertices(s);
    if let Some((v, _)) = flat.first() {
        return Err(Error::Validation(format!(
            "vertex {v} lies inside a face; the triangulation must use only polyhedron vertices"
        )));
    }
    let fs = flex_space(&Framework::from_surface(s)?)?;
    Ok(RigidityVerdict {
        rigid: fs.nontrivial_dim == 0,
        nontrivial_dim: fs.nontrivial_dim,
        kernel_dim: fs.kernel_dim,
        gap_ratio: fs.gap_ratio,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct DehnCheck {
    pub flat_vertices: Vec<usize>,
    pub flex_dim: usize,
    pub expected_dim: usize,
    /// Largest residual of a flex after removing its best-fit rigid motion,
    /// outside the allowed flat-vertex normal directions.
    pub max_residual: f64,
    pub passes: bool,
}

/// Checks that every flex of a convex triangulated sphere is a rigid motion
/// plus displacements of flat vertices orthogonal to their faces.
pub fn dehn_decomposition_check(s: &ClosedSurface) -> Result<DehnCheck> {
    if !s.is_convex(tol::FLAT_VERTEX) {
        return Err(Error::Validation("surface is not convex".into()));
    }
    let flat = surface_flat_vertices(s);
    let fs = flex_space(&Framework::from_surface(s)?)?;
    let is_flat: Vec<Option<Vector3>> = {
        let mut v = vec![None; s.points.len()];
        for &(i, n) in &flat {
            v[i] = Some(n);
        }
        v
    };
    // Rigid motions restricted to the non-flat vertices.
    let rigid = rigid_motion_fields(&s.points);
    let fixed: Vec<usize> = (0..s.points.len()).filter(|&v| is_flat[v].is_none()).collect();
    let a = DMatrix::from_fn(3 * fixed.len(), 6, |r, c| rigid[c][fixed[r / 3]][r % 3]);
    let svd = a.clone().svd(true, true);
    let scale = s.diameter();
    let mut max_residual: f64 = 0.0;
    for q in &fs.basis {
        let b = DVector::from_fn(3 * fixed.len(), |r, _| q[fixed[r / 3]][r % 3]);
        let coef = svd.solve(&b, 1e-12).map_err(|e| Error::Numeric(e.to_string()))?;
        for v in 0..s.points.len() {
            let motion: Vector3 = (0..6).map(|c| rigid[c][v] * coef[c]).sum();
            let r = q[v] - motion;
            let off = match is_flat[v] {
                Some(n) => (r - n * r.dot(&n)).norm(),
                None => r.norm(),
            };
            max_residual = max_residual.max(off);
        }
    }
    let expected_dim = 6 + flat.len();
    let passes = fs.kernel_dim == expected_dim && max_residual < 1e-7 * scale.max(1.0);
    Ok(DehnCheck {
        flat_vertices: flat.iter().map(|&(v, _)| v).collect(),
        flex_dim: fs.kernel_dim,
        expected_dim,
        max_residual,
        passes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn point(x: f64, y: f64, z: f64) -> Point3 {
        Point3::new(x, y, z)
    }

    #[test]
    fn single_edge_row() {
        let f = Framework::new(vec![point(0.0, 0.0, 0.0), point(1.0, 0.0, 0.0)], vec![(0, 1)]).unwrap();
        let m = rigidity_matrix(&f);
        assert_eq!(m.row(0).iter().copied().collect::<Vec<_>>(), vec![-1.0, 0.0, 0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn ranks_of_small_frameworks() {
        let tri = Framework::new(
            vec![point(0.0, 0.0, 0.0), point(1.0, 0.2, 0.0), point(0.3, 1.0, 0.1)],
            vec![(0, 1), (1, 2), (0, 2)],
        )
        .unwrap();
        assert_eq!(rigidity_matrix(&tri).rank(1e-9), 3);
        let t = catalog::builtin("regular-tetrahedron").unwrap().triangulation.unwrap();
        let f = Framework::from_triangulation(&t).unwrap();
        assert_eq!(rigidity_matrix(&f).rank(1e-9), 6);
        let fs = flex_space(&f).unwrap();
        assert_eq!((fs.kernel_dim, fs.trivial_dim, fs.nontrivial_dim), (6, 6, 0));
    }

    #[test]
    fn rejects_repeated_edges() {
        let p = vec![point(0.0, 0.0, 0.0), point(1.0, 0.0, 0.0)];
        assert!(Framework::new(p.clone(), vec![(0, 1), (1, 0)]).is_err());
        assert!(Framework::new(p, vec![(0, 0)]).is_err());
    }

    #[test]
    fn collinear_points_are_degenerate() {
        let p = vec![point(0.0, 0.0, 0.0), point(1.0, 0.0, 0.0), point(2.0, 0.0, 0.0), point(3.0, 0.0, 0.0)];
        let f = Framework::new(p, vec![(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        assert!(matches!(flex_space(&f), Err(Error::DegenerateConfiguration(_))));
    }

    #[test]
    fn octahedron_is_rigid() {
        let e = catalog::builtin("octahedron-cone").unwrap();
        let v = is_infinitesimally_rigid(&e.boundary).unwrap();
        assert!(v.rigid);
        let d = dehn_decomposition_check(&e.boundary).unwrap();
        assert_eq!(d.flex_dim, 6);
        assert!(d.passes);
    }

    #[test]
    fn flat_vertex_sphere_has_seven_flexes() {
        let e = catalog::builtin("flat-vertex-sphere").unwrap();
        let d = dehn_decomposition_check(&e.boundary).unwrap();
        assert_eq!(d.flat_vertices.len(), 1);
        assert_eq!(d.flex_dim, 7);
        assert!(d.passes, "{d:?}");
        assert!(is_infinitesimally_rigid(&e.boundary).is_err());
    }

    #[test]
    fn singular_value_csv_has_header() {
        let e = catalog::builtin("octahedron-cone").unwrap();
        let fs = flex_space(&Framework::from_surface(&e.boundary).unwrap()).unwrap();
        let csv = fs.singular_values_csv();
        assert!(csv.starts_with("index,singular_value\n"));
        assert_eq!(csv.lines().count(), 1 + fs.singular_values.len());
    }
}
