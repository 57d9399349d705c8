use serde::{Deserialize, Serialize};

use super::{
    barycenter, displace_vertex, move_delta, pachner_1_4, pachner_2_3, pachner_3_2, pachner_4_1, signature_transport_check,
    star, tets_containing, weld, MoveDelta, MoveKind, MoveRecord, TransportVerdict,
};
use crate::complex::{census, sorted3, Triangulation3};
use crate::error::{Error, Result};
use crate::geometry::Point3;
use crate::regge::{hessian, HessianOptions};

/// One entry of a move script.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MoveStep {
    pub kind: MoveKind,
    pub cell: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<[f64; 3]>,
}

impl MoveStep {
    pub fn new(kind: MoveKind, cell: Vec<usize>, point: Option<Point3>) -> Self {
        MoveStep { kind, cell, point: point.map(|p| [p.x, p.y, p.z]) }
    }

    fn point_or(&self, t: &Triangulation3) -> Point3 {
        match self.point {
            Some([x, y, z]) => Point3::new(x, y, z),
            None => barycenter(t, &self.cell),
        }
    }
}

fn expect_len(step: &MoveStep, n: usize) -> Result<()> {
    if step.cell.len() != n {
        return Err(Error::InvalidMove(format!("{} expects a cell of {n} vertices, got {:?}", step.kind, step.cell)));
    }
    if step.cell.iter().any(|&v| v >= usize::MAX / 2) {
        return Err(Error::InvalidMove("vertex index out of range".into()));
    }
    Ok(())
}

pub fn apply_step(t: &Triangulation3, step: &MoveStep) -> Result<(Triangulation3, MoveRecord)> {
    if let Some(&v) = step.cell.iter().find(|&&v| v >= t.vertices.len()) {
        return Err(Error::InvalidMove(format!("vertex {v} does not exist")));
    }
    match step.kind {
        MoveKind::OneFour => {
            expect_len(step, 4)?;
            let ti = super::find_tet(t, &step.cell)
                .ok_or_else(|| Error::InvalidMove(format!("{:?} is not a tet", step.cell)))?;
            pachner_1_4(t, ti, step.point_or(t))
        }
        MoveKind::FourOne => {
            expect_len(step, 1)?;
            pachner_4_1(t, step.cell[0])
        }
        MoveKind::TwoThree => {
            expect_len(step, 3)?;
            let tets = tets_containing(t, &step.cell);
            if tets.len() != 2 {
                return Err(Error::InvalidMove(format!(
                    "triangle {:?} lies in {} tets, not 2",
                    sorted3([step.cell[0], step.cell[1], step.cell[2]]),
                    tets.len()
                )));
            }
            pachner_2_3(t, tets[0], tets[1])
        }
        MoveKind::ThreeTwo => {
            expect_len(step, 2)?;
            pachner_3_2(t, (step.cell[0], step.cell[1]))
        }
        MoveKind::BoundaryStarTriangle => {
            expect_len(step, 3)?;
            super::boundary_star_triangle(t, [step.cell[0], step.cell[1], step.cell[2]], step.point_or(t))
        }
        MoveKind::BoundaryStarEdge => {
            expect_len(step, 2)?;
            super::boundary_star_edge(t, (step.cell[0], step.cell[1]), step.point_or(t))
        }
        MoveKind::Star => star(t, &step.cell, step.point_or(t)),
        MoveKind::Weld => {
            expect_len(step, 1)?;
            weld(t, step.cell[0])
        }
        MoveKind::VertexDisplacement => {
            expect_len(step, 1)?;
            let target = step
                .point
                .map(|[x, y, z]| Point3::new(x, y, z))
                .ok_or_else(|| Error::InvalidMove("vertex-displacement needs a point".into()))?;
            displace_vertex(t, step.cell[0], target, 32)
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StepReport {
    pub step: usize,
    pub record: MoveRecord,
    pub delta: MoveDelta,
    pub transport: TransportVerdict,
}

/// Applies the steps in order, analysing `Φ` and the signature transport
/// after each. A failing step is reported with its index.
pub fn apply_script(
    t: &Triangulation3,
    steps: &[MoveStep],
    opts: &HessianOptions,
) -> std::result::Result<(Triangulation3, Vec<StepReport>), (usize, Error)> {
    let mut cur = t.clone();
    let mut h = hessian(&cur, opts).map_err(|e| (0, e))?;
    let mut c = census(&cur).map_err(|e| (0, e))?;
    let mut reports = Vec::new();
    for (i, step) in steps.iter().enumerate() {
        let (next, record) = apply_step(&cur, step).map_err(|e| (i, e))?;
        let h2 = hessian(&next, opts).map_err(|e| (i, e))?;
        let c2 = census(&next).map_err(|e| (i, e))?;
        let delta = move_delta(&h, &h2, &record, opts.zero_threshold).map_err(|e| (i, e))?;
        let transport = signature_transport_check(&h, &h2, &c, &c2, &record);
        reports.push(StepReport { step: i, record, delta, transport });
        cur = next;
        h = h2;
        c = c2;
    }
    Ok((cur, reports))
}
