//! Numeric tolerances shared across modules.
//!
//! Every threshold that decides a discrete verdict (degeneracy, flatness,
//! rank, signature) lives here so reports can quote the effective values.

/// A simplex is degenerate when `V < DEGENERATE_VOLUME * (longest edge)^3`.
pub const DEGENERATE_VOLUME: f64 = 1e-12;

/// Strict-extremeness margin for hull vertices, relative to the diameter.
pub const HULL_EXTREME: f64 = 1e-9;

/// Distance to a face plane, relative to the diameter, under which a
/// boundary vertex counts as lying on that face.
pub const FLAT_VERTEX: f64 = 1e-8;

/// Relative volume-additivity tolerance used by validation.
pub const VOLUME_ADDITIVITY: f64 = 1e-9;

/// Central-difference base step, relative to the smaller of the edge length
/// and the smallest altitude of the tets around the edge.
pub const FD_STEP: f64 = 1e-4;

/// Eigenvalues with `|λ| < ZERO_EIGENVALUE * max(1, ‖M‖₂)` count as zero.
pub const ZERO_EIGENVALUE: f64 = 1e-7;

/// Minimum accepted ratio between the smallest nonzero and the largest zero
/// eigenvalue magnitude.
pub const SPECTRAL_GAP: f64 = 1e3;

/// Singular values below `RIGIDITY_RANK * σ_max` count as zero.
pub const RIGIDITY_RANK: f64 = 1e-9;

/// Relative asymmetry of a finite-difference Hessian that is still accepted.
pub const HESSIAN_SYMMETRY: f64 = 1e-6;

/// Barycentric margin for "strictly inside" tests in moves.
pub const BARYCENTRIC_MARGIN: f64 = 1e-9;

/// Planes within this fraction of the bounding-box height of a vertex are
/// treated as passing through it.
pub const SECTION_VERTEX_HIT: f64 = 1e-12;
