use nalgebra::DVector;
use serde::Serialize;

use super::HessianReport;
use crate::complex::{Census, Triangulation3, VertexClass};
use crate::error::{Error, Result};
use crate::geometry::Vector3;
use crate::linalg::rank_of;

/// `3m + k`.
pub fn kernel_dimension_predicted(census: &Census) -> usize {
    3 * census.m() + census.k()
}

/// Admissibility of a vertex displacement: zero on non-flat boundary
/// vertices and orthogonal to the face at flat vertices.
pub fn check_admissible(t: &Triangulation3, census: &Census, q: &[Vector3]) -> Result<()> {
    if q.len() != t.vertices.len() {
        return Err(Error::IndexMismatch { expected: t.vertices.len(), got: q.len() });
    }
    let scale = q.iter().fold(0.0f64, |a, v| a.max(v.norm()));
    let tol = 1e-12 * scale.max(f64::MIN_POSITIVE);
    let vc = &census.vertices;
    for (v, class) in vc.classes.iter().enumerate() {
        match class {
            VertexClass::Interior => {}
            VertexClass::Boundary => {
                if q[v].norm() > tol {
                    return Err(Error::InadmissibleDisplacement(format!(
                        "non-flat boundary vertex {v} is moved by {:?}",
                        q[v].as_slice()
                    )));
                }
            }
            VertexClass::Flat => {
                let i = vc.flat.iter().position(|&f| f == v).unwrap();
                let n = vc.flat_normals[i];
                let tangential = q[v] - n * q[v].dot(&n);
                if tangential.norm() > 1e-9 * q[v].norm() + tol {
                    return Err(Error::InadmissibleDisplacement(format!(
                        "flat vertex {v} is moved along its face"
                    )));
                }
            }
        }
    }
    Ok(())
}

/// `ℓ^Q_ij = (p_i − p_j)/‖p_i − p_j‖ · (q_i − q_j)` on the interior edges.
pub fn kernel_vector_from_displacement(t: &Triangulation3, census: &Census, q: &[Vector3]) -> Result<DVector<f64>> {
    check_admissible(t, census, q)?;
    let edges = &census.edges.interior_edges;
    Ok(DVector::from_iterator(
        edges.len(),
        edges.iter().map(|&(i, j)| {
            let d = t.vertices[i] - t.vertices[j];
            d.dot(&(q[i] - q[j])) / d.norm()
        }),
    ))
}

/// Coordinate displacements of each interior vertex and normal
/// displacements of each flat vertex; `3m + k` fields.
pub fn admissible_displacement_basis(t: &Triangulation3, census: &Census) -> Vec<Vec<Vector3>> {
    let nv = t.vertices.len();
    let mut out = Vec::new();
    for &v in &census.vertices.interior {
        for axis in [Vector3::x(), Vector3::y(), Vector3::z()] {
            let mut q = vec![Vector3::zeros(); nv];
            q[v] = axis;
            out.push(q);
        }
    }
    for (&v, &n) in census.vertices.flat.iter().zip(&census.vertices.flat_normals) {
        let mut q = vec![Vector3::zeros(); nv];
        q[v] = n;
        out.push(q);
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct KernelSpanCheck {
    pub predicted: usize,
    /// Rank of the `ℓ^Q` vectors.
    pub span_rank: usize,
    /// Largest `‖M ℓ^Q‖ / (‖M‖ ‖ℓ^Q‖)`.
    pub max_residual: f64,
    /// Dimension of the numerical kernel of `M_T`.
    pub observed: usize,
}

impl KernelSpanCheck {
    pub fn passes(&self, residual_tol: f64) -> bool {
        self.span_rank == self.predicted && self.observed == self.predicted && self.max_residual < residual_tol
    }
}

pub fn kernel_span_check(t: &Triangulation3, census: &Census, h: &HessianReport) -> Result<KernelSpanCheck> {
    let basis = admissible_displacement_basis(t, census);
    let vectors: Vec<DVector<f64>> = basis
        .iter()
        .map(|q| kernel_vector_from_displacement(t, census, q))
        .collect::<Result<_>>()?;
    let norm = h.norm().max(f64::MIN_POSITIVE);
    let max_residual = vectors
        .iter()
        .filter(|v| v.norm() > 0.0)
        .map(|v| (&h.matrix * v).norm() / (norm * v.norm()))
        .fold(0.0, f64::max);
    Ok(KernelSpanCheck {
        predicted: kernel_dimension_predicted(census),
        span_rank: rank_of(&vectors, crate::tol::RIGIDITY_RANK),
        max_residual,
        observed: h.signature.zero,
    })
}
