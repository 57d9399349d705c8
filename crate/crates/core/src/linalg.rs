//! Dense symmetric spectra, signatures and null spaces.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

/// Counts of negative, zero and positive eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
pub struct Signature {
    pub neg: usize,
    pub zero: usize,
    pub pos: usize,
}

impl Signature {
    pub fn new(neg: usize, zero: usize, pos: usize) -> Self {
        Signature { neg, zero, pos }
    }

    pub fn dim(&self) -> usize {
        self.neg + self.zero + self.pos
    }
}

impl std::fmt::Display for Signature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.neg, self.zero, self.pos)
    }
}

#[derive(Debug, Clone)]
pub struct Spectrum {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Eigenvectors as columns, matching `eigenvalues`.
    pub eigenvectors: DMatrix<f64>,
    pub signature: Signature,
    pub threshold: f64,
    pub norm: f64,
    /// Smallest nonzero magnitude over the largest zero magnitude (floored
    /// by the noise estimate). `None` when there is no nonzero eigenvalue.
    pub gap_ratio: Option<f64>,
}

impl Spectrum {
    pub fn kernel_basis(&self) -> Vec<DVector<f64>> {
        self.eigenvalues
            .iter()
            .enumerate()
            .filter(|(_, l)| l.abs() < self.threshold)
            .map(|(i, _)| self.eigenvectors.column(i).into_owned())
            .collect()
    }

    pub fn min_eigenvalue(&self) -> Option<f64> {
        self.eigenvalues.first().copied()
    }
}

/// Eigen-decomposition of a symmetric matrix with eigenvalues classified as
/// zero when `|λ| < rel_threshold * max(1, ‖M‖₂)`.
///
/// `noise_floor` is a lower bound on the magnitude used for the largest
/// "zero" eigenvalue in the gap ratio (e.g. the finite-difference asymmetry).
pub fn symmetric_spectrum(m: &DMatrix<f64>, rel_threshold: f64, noise_floor: f64) -> Spectrum {
    let n = m.nrows();
    if n == 0 {
        return Spectrum {
            eigenvalues: Vec::new(),
            eigenvectors: DMatrix::zeros(0, 0),
            signature: Signature::default(),
            threshold: rel_threshold,
            norm: 0.0,
            gap_ratio: None,
        };
    }
    let eig = SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = DMatrix::zeros(n, n);
    for (k, &i) in order.iter().enumerate() {
        let mut col = eig.eigenvectors.column(i).into_owned();
        // Fix the sign so that the largest-magnitude component is positive.
        let imax = col.iamax();
        if col[imax] < 0.0 {
            col = -col;
        }
        vectors.set_column(k, &col);
    }
    let norm = eigenvalues.iter().fold(0.0f64, |a, l| a.max(l.abs()));
    let threshold = rel_threshold * norm.max(1.0);
    let mut sig = Signature::default();
    let mut max_zero: f64 = 0.0;
    let mut min_nonzero = f64::INFINITY;
    for &l in &eigenvalues {
        if l.abs() < threshold {
            sig.zero += 1;
            max_zero = max_zero.max(l.abs());
        } else {
            min_nonzero = min_nonzero.min(l.abs());
            if l < 0.0 {
                sig.neg += 1;
            } else {
                sig.pos += 1;
            }
        }
    }
    let floor = noise_floor.max(f64::EPSILON * norm).max(f64::MIN_POSITIVE);
    let gap_ratio = if min_nonzero.is_finite() { Some(min_nonzero / max_zero.max(floor)) } else { None };
    Spectrum { eigenvalues, eigenvectors: vectors, signature: sig, threshold, norm, gap_ratio }
}

#[derive(Debug, Clone)]
pub struct NullSpace {
    /// Descending; padded with zeros up to the column count.
    pub singular_values: Vec<f64>,
    pub basis: Vec<DVector<f64>>,
    pub threshold: f64,
    /// Smallest singular value above the threshold over the largest below.
    pub gap_ratio: Option<f64>,
}

/// Null space of `a` (rows × cols) via SVD; singular values below
/// `rel_tol * σ_max` count as zero.
pub fn null_space(a: &DMatrix<f64>, rel_tol: f64) -> NullSpace {
    let cols = a.ncols();
    let rows = a.nrows().max(cols);
    let mut padded = DMatrix::zeros(rows, cols);
    padded.view_mut((0, 0), (a.nrows(), cols)).copy_from(a);
    let svd = padded.svd(false, true);
    let vt = svd.v_t.expect("requested V^T");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&x, &y| svd.singular_values[y].total_cmp(&svd.singular_values[x]));
    let singular_values: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
    let smax = singular_values.first().copied().unwrap_or(0.0);
    let threshold = rel_tol * smax;
    let mut basis = Vec::new();
    let mut max_zero: f64 = 0.0;
    let mut min_nonzero = f64::INFINITY;
    for (k, &i) in order.iter().enumerate() {
        let s = singular_values[k];
        if s <= threshold {
            basis.push(vt.row(i).transpose());
            max_zero = max_zero.max(s);
        } else {
            min_nonzero = min_nonzero.min(s);
        }
    }
    let floor = (f64::EPSILON * smax).max(f64::MIN_POSITIVE);
    let gap_ratio = if min_nonzero.is_finite() && !basis.is_empty() {
        Some(min_nonzero / max_zero.max(floor))
    } else {
        None
    };
    NullSpace { singular_values, basis, threshold, gap_ratio }
}

/// Numerical rank of a set of vectors (stacked as columns).
pub fn rank_of(vectors: &[DVector<f64>], rel_tol: f64) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let m = DMatrix::from_columns(vectors);
    let sv = m.singular_values();
    let smax = sv.iter().copied().fold(0.0, f64::max);
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * smax).count()
}

/// Largest principal angle (radians) between the column spans of `a` and
/// `b`, both given as lists of vectors of equal length.
pub fn max_principal_angle(a: &[DVector<f64>], b: &[DVector<f64>]) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 0.0;
    }
    if a.len() != b.len() {
        return std::f64::consts::FRAC_PI_2;
    }
    let qa = DMatrix::from_columns(a).qr().q();
    let qb = DMatrix::from_columns(b).qr().q();
    let c = qa.transpose() * qb;
    let smin = c.singular_values().iter().copied().fold(f64::INFINITY, f64::min);
    smin.clamp(-1.0, 1.0).acos()
}
