//! Cone angles, the Hilbert-Einstein function, the Hessian `M_T` and the
//! kernel vectors induced by vertex displacements.

mod hessian;
mod kernel;

use std::collections::BTreeMap;

use serde::Serialize;

pub use hessian::{hessian, hessian_at, HessianOptions, HessianReport};
pub use kernel::{
    admissible_displacement_basis, check_admissible, kernel_dimension_predicted, kernel_span_check,
    kernel_vector_from_displacement, KernelSpanCheck,
};

use crate::complex::{edge_key, Edge, Topology, Triangulation3};
use crate::error::{Error, Result};
use crate::geometry::{ClosedSurface, Vector3, TET_EDGES};
use std::f64::consts::PI;

#[derive(Debug, Clone, Serialize)]
pub struct AngleState {
    /// Total angle around each interior edge.
    pub omega: Vec<f64>,
    /// `2π − ω`.
    pub kappa: Vec<f64>,
    /// Dihedral angle at each boundary edge, in `topo.boundary_edges` order.
    pub boundary_alphas: Vec<f64>,
}

/// Sum of dihedral angles around every edge with interior lengths `l`.
fn edge_angle_sums(t: &Triangulation3, topo: &Topology, l: &[f64]) -> Result<BTreeMap<Edge, f64>> {
    if l.len() != topo.interior_edges.len() {
        return Err(Error::IndexMismatch { expected: topo.interior_edges.len(), got: l.len() });
    }
    let index = topo.interior_index();
    let mut sums: BTreeMap<Edge, f64> = BTreeMap::new();
    for ti in 0..t.tets.len() {
        let lengths = t.tet_lengths_with(ti, &index, l);
        let angles = lengths
            .dihedral_angles()
            .map_err(|_| Error::DomainViolation(format!("tet {ti} degenerates")))?;
        let v = t.tets[ti];
        for (s, &(i, j)) in TET_EDGES.iter().enumerate() {
            *sums.entry(edge_key(v[i], v[j])).or_insert(0.0) += angles[s];
        }
    }
    Ok(sums)
}

pub fn angle_state(t: &Triangulation3, topo: &Topology, l: &[f64]) -> Result<AngleState> {
    let sums = edge_angle_sums(t, topo, l)?;
    let omega: Vec<f64> = topo.interior_edges.iter().map(|e| sums[e]).collect();
    let kappa = omega.iter().map(|w| 2.0 * PI - w).collect();
    let boundary_alphas = topo.boundary_edges.iter().map(|e| sums[e]).collect();
    Ok(AngleState { omega, kappa, boundary_alphas })
}

/// `S(l) = Σ l_i κ_i + Σ l'_j (π − α_j)`.
pub fn hilbert_einstein(t: &Triangulation3, topo: &Topology, l: &[f64]) -> Result<f64> {
    let st = angle_state(t, topo, l)?;
    let interior: f64 = l.iter().zip(&st.kappa).map(|(li, ki)| li * ki).sum();
    let boundary: f64 = topo
        .boundary_edges
        .iter()
        .zip(&st.boundary_alphas)
        .map(|(&e, a)| t.length(e) * (PI - a))
        .sum();
    Ok(interior + boundary)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct GradientCheck {
    pub max_abs_error: f64,
    /// Error relative to `‖κ‖∞`, or absolute when `‖κ‖∞ ≤ 1e-6`.
    pub max_rel_error: f64,
    pub kappa_norm: f64,
}

/// Compares a central finite-difference gradient of `S` (one Richardson
/// level, step `rel_step · l_i`) with the curvatures `κ(l)`.
pub fn gradient_check(t: &Triangulation3, topo: &Topology, l: &[f64], rel_step: f64) -> Result<GradientCheck> {
    let st = angle_state(t, topo, l)?;
    let kappa_norm = st.kappa.iter().fold(0.0f64, |a, k| a.max(k.abs()));
    let mut max_abs: f64 = 0.0;
    let mut x = l.to_vec();
    let diff = |i: usize, h: f64, x: &mut Vec<f64>| -> Result<f64> {
        let base = x[i];
        x[i] = base + h;
        let sp = hilbert_einstein(t, topo, x);
        x[i] = base - h;
        let sm = hilbert_einstein(t, topo, x);
        x[i] = base;
        Ok((sp? - sm?) / (2.0 * h))
    };
    for i in 0..l.len() {
        let h = rel_step * l[i];
        let d1 = diff(i, h, &mut x)?;
        let d2 = diff(i, 0.5 * h, &mut x)?;
        let g = (4.0 * d2 - d1) / 3.0;
        max_abs = max_abs.max((g - st.kappa[i]).abs());
    }
    let max_rel = if kappa_norm > 1e-6 { max_abs / kappa_norm } else { max_abs };
    Ok(GradientCheck { max_abs_error: max_abs, max_rel_error: max_rel, kappa_norm })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SchlafliResidual {
    /// `|Σ l_e dα_e|` over all edges.
    pub residual: f64,
    /// `Σ l_e`.
    pub total_length: f64,
}

impl SchlafliResidual {
    pub fn relative(&self) -> f64 {
        self.residual / self.total_length
    }
}

/// Schläfli sum of a closed polyhedral surface under a vertex velocity field.
pub fn schlafli_residual(s: &ClosedSurface, velocity: &[Vector3]) -> Result<SchlafliResidual> {
    let (residual, total_length) = s.schlafli_residual(velocity)?;
    Ok(SchlafliResidual { residual, total_length })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn regular_tetrahedron_functional() {
        let t = catalog::builtin("regular-tetrahedron").unwrap().triangulation.unwrap();
        let topo = t.topology();
        let scale = t.length((0, 1));
        let s = hilbert_einstein(&t, &topo, &[]).unwrap();
        let expect = 6.0 * scale * (PI - (1.0f64 / 3.0).acos());
        assert!((s - expect).abs() < 1e-12 * expect);
        let st = angle_state(&t, &topo, &[]).unwrap();
        assert!(st.omega.is_empty());
        for a in st.boundary_alphas {
            assert!((a - (1.0f64 / 3.0).acos()).abs() < 1e-13);
        }
    }

    #[test]
    fn realized_lengths_are_flat() {
        for name in ["cube-5tet", "cube-6tet", "octahedron-cone", "flat-vertex-sphere"] {
            let t = catalog::builtin(name).unwrap().triangulation.unwrap();
            let topo = t.topology();
            let l = t.realized_lengths(&topo);
            let st = angle_state(&t, &topo, &l).unwrap();
            for k in st.kappa {
                assert!(k.abs() < 1e-9, "{name}: κ = {k}");
            }
        }
    }

    #[test]
    fn gradient_vacuous_without_interior_edges() {
        let t = catalog::builtin("regular-tetrahedron").unwrap().triangulation.unwrap();
        let g = gradient_check(&t, &t.topology(), &[], 1e-5).unwrap();
        assert_eq!(g.max_abs_error, 0.0);
    }
}
