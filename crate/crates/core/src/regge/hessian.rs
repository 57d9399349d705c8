use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::complex::{edge_key, Edge, Topology, Triangulation3};
use crate::error::{Error, Result};
use crate::geometry::{TetLengths, TET_EDGES};
use crate::linalg::{symmetric_spectrum, Signature, Spectrum};
use crate::tol;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct HessianOptions {
    /// Base finite-difference step relative to the local length scale.
    pub fd_step: f64,
    /// Eigenvalues below `zero_threshold · max(1, ‖M‖₂)` count as zero.
    pub zero_threshold: f64,
}

impl Default for HessianOptions {
    fn default() -> Self {
        HessianOptions { fd_step: tol::FD_STEP, zero_threshold: tol::ZERO_EIGENVALUE }
    }
}

fn rows<S: Serializer>(m: &DMatrix<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    let r: Vec<Vec<f64>> = (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect();
    r.serialize(s)
}

#[derive(Debug, Clone, Serialize)]
pub struct HessianReport {
    pub interior_edges: Vec<Edge>,
    /// Symmetrized `M_T = ∂ω_i/∂l_j`, serialized row-major.
    #[serde(serialize_with = "rows")]
    pub matrix: DMatrix<f64>,
    pub eigenvalues: Vec<f64>,
    pub signature: Signature,
    /// Relative zero threshold requested.
    pub zero_threshold: f64,
    /// Absolute threshold actually applied to `|λ|`.
    pub threshold: f64,
    /// `max |M_ij − M_ji|` of the raw finite-difference matrix.
    pub asymmetry: f64,
    /// `asymmetry / max |M_ij|`.
    pub relative_asymmetry: f64,
    /// `max |D(h/2) − D(h)|` over all entries: the Richardson correction size.
    pub richardson_change: f64,
    pub fd_step: f64,
    /// Number of columns whose step had to shrink to stay in the domain.
    pub shrunk_columns: usize,
    pub gap_ratio: Option<f64>,
    /// Columns spanning the numerical kernel.
    pub kernel: Vec<Vec<f64>>,
    #[serde(skip)]
    pub spectrum: Spectrum,
}

impl HessianReport {
    pub fn n(&self) -> usize {
        self.interior_edges.len()
    }

    pub fn norm(&self) -> f64 {
        self.spectrum.norm
    }

    pub fn min_eigenvalue(&self) -> Option<f64> {
        self.eigenvalues.first().copied()
    }
}

struct Column {
    fine: Vec<f64>,
    coarse: Vec<f64>,
    shrunk: bool,
}

/// Angles of tet `ti` after changing its copy of edge slot `slot` by `dl`.
fn perturbed_angles(base: &TetLengths, slot: usize, dl: f64) -> Option<[f64; 6]> {
    let mut l = *base;
    l.0[slot] += dl;
    l.dihedral_angles().ok()
}

fn column(
    t: &Triangulation3,
    topo: &Topology,
    index: &std::collections::BTreeMap<Edge, usize>,
    l: &[f64],
    j: usize,
    rel_step: f64,
) -> Result<Column> {
    let n = l.len();
    let e = topo.interior_edges[j];
    let tets = &topo.edge_tets[&e];
    let bases: Vec<(usize, TetLengths, usize)> = tets
        .iter()
        .map(|&ti| {
            let v = t.tets[ti];
            let slot = TET_EDGES.iter().position(|&(a, b)| edge_key(v[a], v[b]) == e).unwrap();
            (ti, t.tet_lengths_with(ti, index, l), slot)
        })
        .collect();
    // Slivers make the angles vary on the scale of their smallest altitude,
    // not of the edge length.
    let scale = bases
        .iter()
        .map(|(_, b, _)| b.min_altitude())
        .fold(l[j], f64::min);
    let mut h = rel_step * scale;
    let mut shrunk = false;
    for _ in 0..40 {
        let diff = |h: f64| -> Option<Vec<f64>> {
            let mut d = vec![0.0; n];
            for (ti, base, slot) in &bases {
                let plus = perturbed_angles(base, *slot, h)?;
                let minus = perturbed_angles(base, *slot, -h)?;
                let v = t.tets[*ti];
                for (s, &(a, b)) in TET_EDGES.iter().enumerate() {
                    if let Some(&i) = index.get(&edge_key(v[a], v[b])) {
                        d[i] += (plus[s] - minus[s]) / (2.0 * h);
                    }
                }
            }
            Some(d)
        };
        if let (Some(coarse), Some(fine)) = (diff(h), diff(0.5 * h)) {
            return Ok(Column { fine, coarse, shrunk });
        }
        h *= 0.5;
        shrunk = true;
    }
    Err(Error::DomainViolation(format!("finite-difference stencil for edge {e:?} leaves the domain")))
}

/// `M_T` at the realized edge lengths of `t`.
pub fn hessian(t: &Triangulation3, opts: &HessianOptions) -> Result<HessianReport> {
    let topo = t.topology();
    let l = t.realized_lengths(&topo);
    hessian_at(t, &topo, &l, opts)
}

/// `M_T` at interior lengths `l`: central differences at steps `h` and
/// `h/2` combined by one Richardson extrapolation, computed column by
/// column from the tets around each edge. The base step of column `j` is
/// `fd_step · min(l_j, smallest altitude of the tets around edge j)`.
pub fn hessian_at(t: &Triangulation3, topo: &Topology, l: &[f64], opts: &HessianOptions) -> Result<HessianReport> {
    let n = topo.interior_edges.len();
    if l.len() != n {
        return Err(Error::IndexMismatch { expected: n, got: l.len() });
    }
    if !t.in_domain(topo, l)? {
        return Err(Error::DomainViolation("lengths are outside the domain".into()));
    }
    let index = topo.interior_index();
    let cols: Vec<Column> = (0..n)
        .into_par_iter()
        .map(|j| column(t, topo, &index, l, j, opts.fd_step))
        .collect::<Result<_>>()?;
    let mut raw = DMatrix::zeros(n, n);
    let mut richardson_change: f64 = 0.0;
    let mut shrunk_columns = 0;
    for (j, c) in cols.iter().enumerate() {
        shrunk_columns += c.shrunk as usize;
        for i in 0..n {
            raw[(i, j)] = (4.0 * c.fine[i] - c.coarse[i]) / 3.0;
            richardson_change = richardson_change.max((c.fine[i] - c.coarse[i]).abs());
        }
    }
    let mut asymmetry: f64 = 0.0;
    let mut max_entry: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            asymmetry = asymmetry.max((raw[(i, j)] - raw[(j, i)]).abs());
            max_entry = max_entry.max(raw[(i, j)].abs());
        }
    }
    let matrix = (&raw + raw.transpose()) * 0.5;
    let spectrum = symmetric_spectrum(&matrix, opts.zero_threshold, asymmetry);
    let kernel = spectrum.kernel_basis().iter().map(|v| v.iter().copied().collect()).collect();
    Ok(HessianReport {
        interior_edges: topo.interior_edges.clone(),
        eigenvalues: spectrum.eigenvalues.clone(),
        signature: spectrum.signature,
        zero_threshold: opts.zero_threshold,
        threshold: spectrum.threshold,
        asymmetry,
        relative_asymmetry: if max_entry > 0.0 { asymmetry / max_entry } else { 0.0 },
        richardson_change,
        fd_step: opts.fd_step,
        shrunk_columns,
        gap_ratio: spectrum.gap_ratio,
        kernel,
        matrix,
        spectrum,
    })
}
