use std::collections::BTreeMap;

use serde::Serialize;

use super::{Edge, Topology, Triangulation3};
use crate::error::{Error, Result};
use crate::geometry::Vector3;
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VertexClass {
    Interior,
    /// Boundary vertex in the relative interior of a planar face.
    Flat,
    Boundary,
}

/// How flat vertices were decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FlatSource {
    ReferenceFaces,
    BoundaryStar,
}

#[derive(Debug, Clone, Serialize)]
pub struct VertexCensus {
    pub classes: Vec<VertexClass>,
    pub interior: Vec<usize>,
    pub flat: Vec<usize>,
    /// Unit outward normal of the face containing each flat vertex.
    pub flat_normals: Vec<Vector3>,
    pub nonflat: Vec<usize>,
}

impl VertexCensus {
    /// Number of interior vertices.
    pub fn m(&self) -> usize {
        self.interior.len()
    }

    /// Number of flat boundary vertices.
    pub fn k(&self) -> usize {
        self.flat.len()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EdgeCensus {
    pub interior_edges: Vec<Edge>,
    pub boundary_edges: Vec<Edge>,
    pub boundary_lengths: Vec<f64>,
    #[serde(skip)]
    pub edge_tets: BTreeMap<Edge, Vec<usize>>,
}

impl EdgeCensus {
    pub fn n(&self) -> usize {
        self.interior_edges.len()
    }

    pub fn r(&self) -> usize {
        self.boundary_edges.len()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Census {
    pub vertices: VertexCensus,
    pub edges: EdgeCensus,
    pub flat_source: FlatSource,
    #[serde(skip)]
    pub topology: Topology,
}

impl Census {
    pub fn m(&self) -> usize {
        self.vertices.m()
    }

    pub fn k(&self) -> usize {
        self.vertices.k()
    }

    pub fn n(&self) -> usize {
        self.edges.n()
    }
}

struct Plane {
    normal: Vector3,
    offset: f64,
}

/// Newell normal of a polygon; robust for non-convex planar polygons.
fn polygon_plane(t: &Triangulation3, face: &[usize]) -> Option<Plane> {
    let mut n = Vector3::zeros();
    let mut c = Vector3::zeros();
    for k in 0..face.len() {
        let p = t.vertices[face[k]];
        let q = t.vertices[face[(k + 1) % face.len()]];
        n.x += (p.y - q.y) * (p.z + q.z);
        n.y += (p.z - q.z) * (p.x + q.x);
        n.z += (p.x - q.x) * (p.y + q.y);
        c += p.coords;
    }
    let len = n.norm();
    if len == 0.0 {
        return None;
    }
    let normal = n / len;
    let c = c / face.len() as f64;
    Some(Plane { normal, offset: normal.dot(&c) })
}

fn star_within(t: &Triangulation3, star: &[[usize; 3]], plane: &Plane, tol: f64) -> bool {
    star.iter().flatten().all(|&w| (plane.normal.dot(&t.vertices[w].coords) - plane.offset).abs() <= tol)
}

fn classify(t: &Triangulation3, topo: &Topology, use_faces: bool) -> Result<(VertexCensus, FlatSource)> {
    let diam = t.diameter();
    let tol = tol::FLAT_VERTEX * diam;
    let mut star: BTreeMap<usize, Vec<[usize; 3]>> = BTreeMap::new();
    for tri in &topo.boundary_triangles {
        for &v in tri {
            star.entry(v).or_default().push(*tri);
        }
    }
    let tri_normal = |tri: &[usize; 3]| {
        let p = &t.vertices;
        (p[tri[1]] - p[tri[0]]).cross(&(p[tri[2]] - p[tri[0]]))
    };
    let face_planes: Option<Vec<Plane>> = if use_faces {
        let faces = t.faces.as_ref().ok_or(Error::MissingReferenceFaces)?;
        Some(faces.iter().filter_map(|f| polygon_plane(t, f)).collect())
    } else {
        None
    };
    let on_face_polygon: Vec<bool> = {
        let mut on = vec![false; t.vertices.len()];
        if use_faces {
            for f in t.faces.as_ref().unwrap() {
                for &v in f {
                    on[v] = true;
                }
            }
        }
        on
    };

    let mut out = VertexCensus {
        classes: vec![VertexClass::Interior; t.vertices.len()],
        interior: Vec::new(),
        flat: Vec::new(),
        flat_normals: Vec::new(),
        nonflat: Vec::new(),
    };
    for v in 0..t.vertices.len() {
        let Some(st) = star.get(&v) else {
            out.interior.push(v);
            continue;
        };
        let outward = st.iter().map(tri_normal).sum::<Vector3>();
        let plane = match &face_planes {
            Some(planes) => {
                if on_face_polygon[v] {
                    None
                } else {
                    planes
                        .iter()
                        .find(|pl| star_within(t, st, pl, tol))
                        .map(|pl| Plane { normal: pl.normal, offset: pl.offset })
                }
            }
            None => {
                let n = tri_normal(&st[0]);
                let normal = n.normalize();
                let pl = Plane { normal, offset: normal.dot(&t.vertices[v].coords) };
                star_within(t, st, &pl, tol).then_some(pl)
            }
        };
        match plane {
            Some(pl) => {
                out.classes[v] = VertexClass::Flat;
                out.flat.push(v);
                let n = if pl.normal.dot(&outward) < 0.0 { -pl.normal } else { pl.normal };
                out.flat_normals.push(n);
            }
            None => {
                out.classes[v] = VertexClass::Boundary;
                out.nonflat.push(v);
            }
        }
    }
    let source = if use_faces { FlatSource::ReferenceFaces } else { FlatSource::BoundaryStar };
    Ok((out, source))
}

fn edge_census(t: &Triangulation3, topo: &Topology) -> EdgeCensus {
    let boundary_edges: Vec<Edge> = topo.boundary_edges.iter().copied().collect();
    EdgeCensus {
        interior_edges: topo.interior_edges.clone(),
        boundary_lengths: boundary_edges.iter().map(|&e| t.length(e)).collect(),
        boundary_edges,
        edge_tets: topo.edge_tets.clone(),
    }
}

/// Vertex and edge census. Flat vertices are decided against the reference
/// faces when present, otherwise from coplanarity of each boundary star.
pub fn census(t: &Triangulation3) -> Result<Census> {
    let topo = t.topology();
    let (vertices, flat_source) = classify(t, &topo, t.faces.is_some())?;
    Ok(Census { vertices, edges: edge_census(t, &topo), flat_source, topology: topo })
}

/// Census that requires reference faces for the flat-vertex decision.
pub fn census_with_reference(t: &Triangulation3) -> Result<Census> {
    let topo = t.topology();
    let (vertices, flat_source) = classify(t, &topo, true)?;
    Ok(Census { vertices, edges: edge_census(t, &topo), flat_source, topology: topo })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::geometry::Point3;

    #[test]
    fn one_four_split_of_tetrahedron() {
        let e = catalog::builtin("regular-tetrahedron").unwrap();
        let t = e.triangulation.unwrap();
        let c: Point3 = Point3::from(t.vertices.iter().map(|p| p.coords).sum::<Vector3>() / 4.0);
        let (t2, _) = crate::moves::pachner_1_4(&t, 0, c).unwrap();
        let cs = census(&t2).unwrap();
        assert_eq!((cs.m(), cs.k(), cs.n()), (1, 0, 4));
    }

    #[test]
    fn cube_six_tets() {
        let t = catalog::builtin("cube-6tet").unwrap().triangulation.unwrap();
        let cs = census(&t).unwrap();
        assert_eq!((cs.m(), cs.k(), cs.n()), (0, 0, 1));
        let (a, b) = cs.edges.interior_edges[0];
        assert!((t.length((a, b)) - 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn missing_faces_error_only_when_required() {
        let mut t = catalog::builtin("cube-6tet").unwrap().triangulation.unwrap();
        t.faces = None;
        assert!(matches!(census_with_reference(&t), Err(Error::MissingReferenceFaces)));
        assert_eq!(census(&t).unwrap().flat_source, FlatSource::BoundaryStar);
    }

    #[test]
    fn flat_vertex_in_octahedron_face() {
        let e = catalog::builtin("flat-vertex-sphere").unwrap();
        let t = e.triangulation.unwrap();
        let with = census(&t).unwrap();
        assert_eq!(with.flat_source, FlatSource::ReferenceFaces);
        assert_eq!(with.k(), 1);
        let mut bare = t.clone();
        bare.faces = None;
        assert_eq!(census(&bare).unwrap().k(), 1);
    }
}
