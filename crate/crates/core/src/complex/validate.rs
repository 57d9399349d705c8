use std::collections::BTreeMap;

use serde::Serialize;

use super::{sorted4, Triangulation3};
use crate::geometry::{signed_volume, tet_is_degenerate, ClosedSurface};
use crate::tol;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Issue {
    DegenerateTet { tet: usize },
    DuplicateCell { first: usize, second: usize },
    UnusedVertex { vertex: usize },
    NonManifoldTriangle { triangle: [usize; 3], tets: usize },
    /// Two tets on an interior triangle lie on the same side of it.
    OverlappingTets { triangle: [usize; 3], first: usize, second: usize },
    BadEdgeLink { edge: (usize, usize), detail: String },
    BoundarySurface { detail: String },
    VolumeMismatch { tets: f64, boundary: f64 },
}

impl std::fmt::Display for Issue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Issue::DegenerateTet { tet } => write!(f, "tet {tet} is degenerate"),
            Issue::DuplicateCell { first, second } => write!(f, "tets {first} and {second} are the same cell"),
            Issue::UnusedVertex { vertex } => write!(f, "vertex {vertex} belongs to no tet"),
            Issue::NonManifoldTriangle { triangle, tets } => {
                write!(f, "triangle {triangle:?} lies in {tets} tets")
            }
            Issue::OverlappingTets { triangle, first, second } => {
                write!(f, "tets {first} and {second} overlap across triangle {triangle:?}")
            }
            Issue::BadEdgeLink { edge, detail } => write!(f, "edge {edge:?}: {detail}"),
            Issue::BoundarySurface { detail } => write!(f, "boundary surface: {detail}"),
            Issue::VolumeMismatch { tets, boundary } => {
                write!(f, "tet volumes sum to {tets} but the boundary encloses {boundary}")
            }
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub issues: Vec<Issue>,
    pub interior_triangles: usize,
    pub boundary_triangles: usize,
    /// `V − E + F − C`; equals 1 for a ball.
    pub euler_characteristic: i64,
    pub tet_volume: f64,
    pub boundary_volume: f64,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }

    pub fn summary(&self) -> String {
        self.issues.iter().map(|i| i.to_string()).collect::<Vec<_>>().join("; ")
    }
}

pub fn validate(t: &Triangulation3) -> ValidationReport {
    let mut issues = Vec::new();
    for ti in 0..t.tets.len() {
        if tet_is_degenerate(&t.tet_points(ti)) {
            issues.push(Issue::DegenerateTet { tet: ti });
        }
    }
    let mut seen: BTreeMap<[usize; 4], usize> = BTreeMap::new();
    for (ti, &tet) in t.tets.iter().enumerate() {
        if let Some(&first) = seen.get(&sorted4(tet)) {
            issues.push(Issue::DuplicateCell { first, second: ti });
        } else {
            seen.insert(sorted4(tet), ti);
        }
    }
    let mut used = vec![false; t.vertices.len()];
    for tet in &t.tets {
        for &v in tet {
            used[v] = true;
        }
    }
    for (v, u) in used.iter().enumerate() {
        if !u {
            issues.push(Issue::UnusedVertex { vertex: v });
        }
    }

    let topo = t.topology();
    let mut interior_triangles = 0;
    for (tri, ts) in &topo.triangle_tets {
        match ts.len() {
            1 => {}
            2 => {
                interior_triangles += 1;
                let side = |tet: usize| {
                    let o = *t.tets[tet].iter().find(|v| !tri.contains(v)).unwrap();
                    let p = &t.vertices;
                    signed_volume(&p[tri[0]], &p[tri[1]], &p[tri[2]], &p[o])
                };
                if side(ts[0]) * side(ts[1]) >= 0.0 {
                    issues.push(Issue::OverlappingTets { triangle: *tri, first: ts[0], second: ts[1] });
                }
            }
            n => issues.push(Issue::NonManifoldTriangle { triangle: *tri, tets: n }),
        }
    }
    for &e in topo.edge_tets.keys() {
        match t.edge_link(&topo, e) {
            Ok(link) => {
                let closed = {
                    let (a, b) = (link[0], link[link.len() - 1]);
                    link.len() >= 3 && topo.edge_tets[&e].iter().any(|&ti| {
                        let tet = t.tets[ti];
                        tet.contains(&a) && tet.contains(&b)
                    })
                };
                let boundary = topo.boundary_edges.contains(&e);
                if boundary == closed {
                    let detail = if boundary { "boundary edge with a closed link" } else { "interior edge with an open link" };
                    issues.push(Issue::BadEdgeLink { edge: e, detail: detail.into() });
                }
            }
            Err(err) => issues.push(Issue::BadEdgeLink { edge: e, detail: err.to_string() }),
        }
    }

    let tet_volume = t.total_volume();
    let boundary_volume = match ClosedSurface::new(t.vertices.clone(), topo.boundary_triangles.clone())
        .and_then(|mut s| {
            let directed_ok = s.edges().is_ok();
            s.orient_outward()?;
            if !directed_ok {
                return Err(crate::Error::DegenerateInput("inconsistent orientation".into()));
            }
            Ok(s.volume())
        }) {
        Ok(v) => v,
        Err(e) => {
            issues.push(Issue::BoundarySurface { detail: e.to_string() });
            f64::NAN
        }
    };
    if boundary_volume.is_finite()
        && (tet_volume - boundary_volume).abs() > tol::VOLUME_ADDITIVITY * boundary_volume.abs().max(tet_volume)
    {
        issues.push(Issue::VolumeMismatch { tets: tet_volume, boundary: boundary_volume });
    }

    let v = used.iter().filter(|&&u| u).count() as i64;
    let euler_characteristic =
        v - topo.edge_tets.len() as i64 + topo.triangle_tets.len() as i64 - t.tets.len() as i64;
    ValidationReport {
        issues,
        interior_triangles,
        boundary_triangles: topo.boundary_triangles.len(),
        euler_characteristic,
        tet_volume,
        boundary_volume,
    }
}
