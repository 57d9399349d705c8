//! The twisted octahedra `Oct_θ` and their horizontal cross-sections.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{plane_section_surface, tet_section_area, ClosedSurface, Point3};

/// Vertex order: A, B, C, A′, B′, C′.
pub const OCT_TRIANGLES: [[usize; 3]; 8] =
    [[0, 1, 2], [3, 4, 5], [0, 4, 5], [3, 1, 5], [3, 4, 2], [0, 1, 5], [0, 4, 2], [3, 1, 2]];

pub const THETA_MAX: f64 = 2.0 * PI / 3.0;

fn on_cylinder(angle: f64, z: f64) -> Point3 {
    Point3::new(angle.cos(), angle.sin(), z)
}

/// Vertices A, B, C on `z = 1` and A′, B′, C′ on `z = −1`.
pub fn oct_theta_points(theta: f64) -> Result<Vec<Point3>> {
    if !theta.is_finite() || theta.abs() >= THETA_MAX {
        return Err(Error::ThetaOutOfRange(theta));
    }
    Ok(vec![
        Point3::new(1.0, 0.0, 1.0),
        on_cylinder(2.0 * PI / 3.0, 1.0),
        on_cylinder(4.0 * PI / 3.0, 1.0),
        on_cylinder(-PI + theta, -1.0),
        on_cylinder(-PI / 3.0 + theta, -1.0),
        on_cylinder(PI / 3.0 + theta, -1.0),
    ])
}

/// Boundary of `Oct_θ`, oriented outward.
pub fn oct_theta(theta: f64) -> Result<ClosedSurface> {
    ClosedSurface::new_oriented(oct_theta_points(theta)?, OCT_TRIANGLES.to_vec())
}

/// Cross-section area of `Oct_θ` at height `t`; zero outside `[−1, 1]`.
pub fn oct_section_area(theta: f64, t: f64) -> Result<f64> {
    let s = oct_theta(theta)?;
    match plane_section_surface(&s, t) {
        Ok(sec) => Ok(sec.area),
        Err(Error::EmptySection(_)) => Ok(0.0),
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OctSection {
    pub theta: f64,
    pub a_minus: f64,
    pub a0: f64,
    pub a_plus: f64,
    /// `4 A_0 − A_{−1} − A_1`.
    pub margin: f64,
}

pub fn oct_sections(theta: f64) -> Result<OctSection> {
    let a_minus = oct_section_area(theta, -1.0)?;
    let a0 = oct_section_area(theta, 0.0)?;
    let a_plus = oct_section_area(theta, 1.0)?;
    Ok(OctSection { theta, a_minus, a0, a_plus, margin: 4.0 * a0 - a_minus - a_plus })
}

/// Sections at heights −1, 0, 1 for every angle of the grid.
pub fn a0_sweep(thetas: &[f64]) -> Result<Vec<OctSection>> {
    thetas.iter().map(|&th| oct_sections(th)).collect()
}

/// `steps + 1` equally spaced angles from `lo` to `hi`.
pub fn theta_grid(lo: f64, hi: f64, steps: usize) -> Result<Vec<f64>> {
    for th in [lo, hi] {
        if !th.is_finite() || th.abs() >= THETA_MAX {
            return Err(Error::ThetaOutOfRange(th));
        }
    }
    let steps = steps.max(1);
    Ok((0..=steps).map(|i| lo + (hi - lo) * i as f64 / steps as f64).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SplitCase {
    /// Two vertices with `z ≥ 1`, two with `z ≤ −1`.
    TwoTwo,
    /// One vertex with `z ≥ 1`, three with `z ≤ −1`.
    OneThree,
    /// Three vertices with `z ≥ 1`, one with `z ≤ −1`.
    ThreeOne,
}

pub fn classify_tet(tet: &[Point3; 4]) -> Result<SplitCase> {
    let up = tet.iter().filter(|p| p.z >= 1.0).count();
    let down = tet.iter().filter(|p| p.z <= -1.0).count();
    if up + down != 4 {
        return Err(Error::CaseUnclassifiable(format!("a vertex has |z| < 1: {tet:?}")));
    }
    match up {
        2 => Ok(SplitCase::TwoTwo),
        1 => Ok(SplitCase::OneThree),
        3 => Ok(SplitCase::ThreeOne),
        _ => Err(Error::CaseUnclassifiable(format!("tet does not cross z = 0: {tet:?}"))),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TetInequality {
    pub case: SplitCase,
    pub a_minus: f64,
    pub a0: f64,
    pub a_plus: f64,
    /// `c · a(0) − a(−1) − a(1)` with `c = 2` for a 2+2 split and `c = 4`
    /// otherwise.
    pub margin: f64,
    /// `4 a(0) − a(−1) − a(1)`.
    pub margin4: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CodecomposabilityCheck {
    pub tets: Vec<TetInequality>,
    /// Smallest per-tet margin.
    pub min_margin: f64,
    /// `4 Σ a_i(0) − Σ a_i(−1) − Σ a_i(1)` over the tets.
    pub aggregate_margin: f64,
    /// `4 A_0 − A_{−1} − A_1` of `Oct_θ`, when an angle is given.
    pub oct: Option<OctSection>,
    /// The tets satisfy the inequalities while `Oct_θ` violates the
    /// aggregate one, so no such cover of `Oct_θ` can exist.
    pub contradiction: bool,
}

/// Per-tet inequalities `2a(0) ≥ a(−1) + a(1)` (2+2 split) and
/// `4a(0) ≥ a(−1) + a(1)` (1+3 split) for tets with all vertices at `|z| ≥ 1`,
/// together with the aggregate inequality and, optionally, the corresponding
/// quantity of `Oct_θ`.
pub fn codecomposability_inequality_check(tets: &[[Point3; 4]], theta: Option<f64>) -> Result<CodecomposabilityCheck> {
    let mut out = Vec::with_capacity(tets.len());
    let (mut s_minus, mut s0, mut s_plus) = (0.0, 0.0, 0.0);
    for tet in tets {
        let case = classify_tet(tet)?;
        let a_minus = tet_section_area(tet, -1.0);
        let a0 = tet_section_area(tet, 0.0);
        let a_plus = tet_section_area(tet, 1.0);
        let c = if case == SplitCase::TwoTwo { 2.0 } else { 4.0 };
        out.push(TetInequality {
            case,
            a_minus,
            a0,
            a_plus,
            margin: c * a0 - a_minus - a_plus,
            margin4: 4.0 * a0 - a_minus - a_plus,
        });
        s_minus += a_minus;
        s0 += a0;
        s_plus += a_plus;
    }
    let min_margin = out.iter().map(|t| t.margin).fold(f64::INFINITY, f64::min);
    let aggregate_margin = 4.0 * s0 - s_minus - s_plus;
    let oct = theta.map(oct_sections).transpose()?;
    let contradiction = oct.map_or(false, |o| o.margin < 0.0) && out.iter().all(|t| t.margin4 >= 0.0);
    Ok(CodecomposabilityCheck { tets: out, min_margin, aggregate_margin, oct, contradiction })
}
