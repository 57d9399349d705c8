//! Discrete Hilbert-Einstein (Regge) Hessians of triangulated polyhedra.
//!
//! The crate computes the matrix of cone-angle derivatives `M_T` of a
//! tetrahedral triangulation with respect to its interior edge lengths,
//! determines its signature and kernel, and relates it to infinitesimal
//! rigidity of the boundary framework. Elementary moves (Pachner and
//! boundary stellar moves) are provided together with the bookkeeping of
//! how each move changes `M_T`.
//!
//! Module map:
//! - [`geometry`]: simplex geometry from coordinates and from edge lengths,
//!   convex hulls, plane cross-sections, closed surfaces.
//! - [`complex`]: the triangulation data model, validation and census.
//! - [`regge`]: cone angles, the Hilbert-Einstein function, Schläfli checks,
//!   the Hessian and its kernel.
//! - [`rigidity`]: rigidity matrices and infinitesimal flexes.
//! - [`moves`]: Pachner moves, stellar moves and Hessian deltas.
//! - [`catalog`]: built-in models and the twisted octahedron family.
//! - [`io`]: JSON triangulation, OFF and move-script formats.
//! - [`pipeline`]: the end-to-end analysis report.

pub mod catalog;
pub mod complex;
pub mod error;
pub mod geometry;
pub mod io;
pub mod linalg;
pub mod moves;
pub mod pipeline;
pub mod regge;
pub mod rigidity;
pub mod tol;

pub use error::{Error, Result};
pub use geometry::{Point3, Vector3};
