use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use serde::{Serialize, Serializer};

use super::{MoveKind, MoveRecord};
use crate::complex::{edge_key, Census, Edge};
use crate::error::{Error, Result};
use crate::linalg::{max_principal_angle, null_space, symmetric_spectrum, Signature};
use crate::regge::HessianReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Definiteness {
    Zero,
    Psd,
    Nsd,
    Indefinite,
}

fn rows<S: Serializer>(m: &DMatrix<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    let r: Vec<Vec<f64>> = (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect();
    r.serialize(s)
}

#[derive(Debug, Clone, Serialize)]
pub struct MoveDelta {
    /// Union of interior edges, in input labels, sorted.
    pub edges: Vec<Edge>,
    /// `Φ = M_T' − M_T`, both padded with zeros to the union index.
    #[serde(serialize_with = "rows")]
    pub phi: DMatrix<f64>,
    pub eigenvalues: Vec<f64>,
    pub rank: usize,
    pub definiteness: Definiteness,
    /// Absolute threshold under which eigenvalues of `Φ` count as zero.
    pub threshold: f64,
    pub max_abs_entry: f64,
    /// Largest principal angle between `ker M_T' ` and `ker M_T ∩ ker Φ`,
    /// when the ranks add up.
    pub kernel_angle: Option<f64>,
}

fn padded(h: &HessianReport, edges: &[Edge], map: impl Fn(Edge) -> Edge) -> Result<DMatrix<f64>> {
    let pos: BTreeMap<Edge, usize> = edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let idx: Vec<usize> = h.interior_edges.iter().map(|&e| pos[&map(e)]).collect();
    let mut m = DMatrix::zeros(edges.len(), edges.len());
    for (a, &i) in idx.iter().enumerate() {
        for (b, &j) in idx.iter().enumerate() {
            m[(i, j)] = h.matrix[(a, b)];
        }
    }
    Ok(m)
}

/// Null space of `m` with singular values below `abs` counted as zero.
fn null_basis(m: &DMatrix<f64>, abs: f64) -> Vec<DVector<f64>> {
    let smax = m.singular_values().iter().copied().fold(0.0, f64::max);
    if smax <= abs {
        return (0..m.ncols()).map(|i| DVector::from_fn(m.ncols(), |r, _| (r == i) as u8 as f64)).collect();
    }
    null_space(m, abs / smax).basis
}

/// `Φ = M_T' − M_T` over the union of interior edges, with its rank and
/// definiteness at `zero_threshold · max(1, ‖M_T‖, ‖M_T'‖)`.
pub fn move_delta(
    before: &HessianReport,
    after: &HessianReport,
    record: &MoveRecord,
    zero_threshold: f64,
) -> Result<MoveDelta> {
    let to_input = |e: Edge| edge_key(record.to_input_label(e.0), record.to_input_label(e.1));
    let mut edges: Vec<Edge> = before.interior_edges.clone();
    for &e in &after.interior_edges {
        edges.push(to_input(e));
    }
    edges.sort_unstable();
    edges.dedup();
    if let Some(e) = after.interior_edges.iter().map(|&e| to_input(e)).find(|e| record.removed_edges.contains(e)) {
        return Err(Error::IncompatibleEdgeSets(format!("edge {e:?} was removed by the move but is present after it")));
    }
    let m0 = padded(before, &edges, |e| e)?;
    let m1 = padded(after, &edges, to_input)?;
    let phi = &m1 - &m0;
    let scale = before.norm().max(after.norm()).max(1.0);
    let threshold = zero_threshold * scale;
    let spec = symmetric_spectrum(&phi, zero_threshold, 0.0);
    let mut neg = 0;
    let mut pos = 0;
    for &l in &spec.eigenvalues {
        if l <= -threshold {
            neg += 1;
        } else if l >= threshold {
            pos += 1;
        }
    }
    let definiteness = match (neg, pos) {
        (0, 0) => Definiteness::Zero,
        (0, _) => Definiteness::Psd,
        (_, 0) => Definiteness::Nsd,
        _ => Definiteness::Indefinite,
    };
    let rank = neg + pos;
    let max_abs_entry = phi.iter().fold(0.0f64, |a, x| a.max(x.abs()));

    // ker M_T' = ker M_T ∩ ker Φ when rank M_T' = rank M_T + rank Φ.
    let rank_before = before.signature.neg + before.signature.pos;
    let rank_after = after.signature.neg + after.signature.pos;
    let kernel_angle = if rank_after == rank_before + rank {
        let k1 = null_basis(&m1, threshold);
        let stacked = DMatrix::from_fn(2 * edges.len(), edges.len(), |r, c| {
            if r < edges.len() {
                m0[(r, c)]
            } else {
                phi[(r - edges.len(), c)]
            }
        });
        let k0 = null_basis(&stacked, threshold);
        Some(max_principal_angle(&k1, &k0))
    } else {
        None
    };
    Ok(MoveDelta { edges, phi, eigenvalues: spec.eigenvalues, rank, definiteness, threshold, max_abs_entry, kernel_angle })
}

/// Signature of `M_T'` predicted from that of `M_T` for a single move.
/// Returns `None` when the move has no fixed rule.
pub fn expected_signature(
    kind: MoveKind,
    before: Signature,
    census_before: &Census,
    census_after: &Census,
    record: &MoveRecord,
) -> Option<Signature> {
    let s = before;
    let flat_gain = census_after.k() as isize - census_before.k() as isize;
    match kind {
        MoveKind::TwoThree => Some(Signature::new(s.neg, s.zero, s.pos + 1)),
        MoveKind::ThreeTwo => Some(Signature::new(s.neg, s.zero, s.pos.checked_sub(1)?)),
        MoveKind::OneFour => Some(Signature::new(s.neg + 1, s.zero + 3, s.pos)),
        MoveKind::FourOne => {
            Some(Signature::new(s.neg.checked_sub(1)?, s.zero.checked_sub(3)?, s.pos))
        }
        MoveKind::BoundaryStarTriangle => Some(Signature::new(s.neg, s.zero + 1, s.pos)),
        MoveKind::BoundaryStarEdge => {
            let i = record.incident_tets.checked_sub(1)?;
            if flat_gain == 1 {
                Some(Signature::new(s.neg, s.zero + 1, s.pos + i - 1))
            } else {
                Some(Signature::new(s.neg, s.zero, s.pos + i))
            }
        }
        MoveKind::VertexDisplacement => {
            (census_before.m() == census_after.m() && census_before.k() == census_after.k()).then_some(s)
        }
        MoveKind::Star | MoveKind::Weld => None,
    }
}

/// The signature predicted by `(m, 3m + k, n − 4m − k)`.
pub fn theorem_signature(c: &Census) -> Option<Signature> {
    let (m, k, n) = (c.m(), c.k(), c.n());
    Some(Signature::new(m, 3 * m + k, n.checked_sub(4 * m + k)?))
}

#[derive(Debug, Clone, Serialize)]
pub struct TransportVerdict {
    pub before: Signature,
    pub after: Signature,
    pub expected: Option<Signature>,
    pub theorem_before: Option<Signature>,
    pub theorem_after: Option<Signature>,
    pub consistent: bool,
}

/// Compares the observed signatures before and after a move with the
/// per-move rule and with the census prediction on both sides.
pub fn signature_transport_check(
    before: &HessianReport,
    after: &HessianReport,
    census_before: &Census,
    census_after: &Census,
    record: &MoveRecord,
) -> TransportVerdict {
    let expected = expected_signature(record.kind, before.signature, census_before, census_after, record);
    let theorem_before = theorem_signature(census_before);
    let theorem_after = theorem_signature(census_after);
    let consistent = expected.map_or(true, |e| e == after.signature)
        && theorem_before == Some(before.signature)
        && theorem_after == Some(after.signature);
    TransportVerdict { before: before.signature, after: after.signature, expected, theorem_before, theorem_after, consistent }
}
