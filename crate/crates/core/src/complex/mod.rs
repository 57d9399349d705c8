//! Tetrahedral complexes: storage, derived topology, validation, the
//! vertex/edge census, the length domain and cone triangulations.

mod census;
mod validate;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub use census::{census, census_with_reference, Census, EdgeCensus, FlatSource, VertexCensus, VertexClass};
pub use validate::{validate, Issue, ValidationReport};

use crate::error::{Error, Result};
use crate::geometry::{signed_volume, ClosedSurface, Point3, TetLengths, TET_EDGES};

pub type Edge = (usize, usize);

pub fn edge_key(a: usize, b: usize) -> Edge {
    (a.min(b), a.max(b))
}

pub fn sorted3(mut t: [usize; 3]) -> [usize; 3] {
    t.sort_unstable();
    t
}

pub fn sorted4(mut t: [usize; 4]) -> [usize; 4] {
    t.sort_unstable();
    t
}

/// A triangulation `T` of a polyhedron: vertex coordinates, tetrahedra and
/// optionally the faces of the reference polyhedron `P` as vertex polygons.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Triangulation3 {
    pub vertices: Vec<Point3>,
    pub tets: Vec<[usize; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub faces: Option<Vec<Vec<usize>>>,
}

/// Incidence structure derived from the tetrahedra.
#[derive(Debug, Clone)]
pub struct Topology {
    pub edge_tets: BTreeMap<Edge, Vec<usize>>,
    pub triangle_tets: BTreeMap<[usize; 3], Vec<usize>>,
    /// Boundary triangles, oriented with outward normals.
    pub boundary_triangles: Vec<[usize; 3]>,
    pub boundary_edges: BTreeSet<Edge>,
    pub boundary_vertices: BTreeSet<usize>,
    /// Interior edges in lexicographic order; this fixes the row order of `M_T`.
    pub interior_edges: Vec<Edge>,
}

impl Topology {
    pub fn interior_index(&self) -> BTreeMap<Edge, usize> {
        self.interior_edges.iter().enumerate().map(|(i, &e)| (e, i)).collect()
    }
}

impl Triangulation3 {
    pub fn new(vertices: Vec<Point3>, tets: Vec<[usize; 4]>, faces: Option<Vec<Vec<usize>>>) -> Result<Self> {
        for (i, p) in vertices.iter().enumerate() {
            if !(p.x.is_finite() && p.y.is_finite() && p.z.is_finite()) {
                return Err(Error::Validation(format!("vertex {i} has non-finite coordinates")));
            }
        }
        for (ti, t) in tets.iter().enumerate() {
            if t.iter().any(|&v| v >= vertices.len()) {
                return Err(Error::Validation(format!("tet {ti} references a missing vertex: {t:?}")));
            }
            if sorted4(*t).windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Validation(format!("tet {ti} repeats a vertex: {t:?}")));
            }
        }
        if let Some(fs) = &faces {
            for f in fs {
                if f.len() < 3 || f.iter().any(|&v| v >= vertices.len()) {
                    return Err(Error::Validation(format!("bad reference face {f:?}")));
                }
            }
        }
        Ok(Triangulation3 { vertices, tets, faces })
    }

    pub fn tet_points(&self, t: usize) -> [Point3; 4] {
        let v = self.tets[t];
        [self.vertices[v[0]], self.vertices[v[1]], self.vertices[v[2]], self.vertices[v[3]]]
    }

    pub fn tet_volume(&self, t: usize) -> f64 {
        let p = self.tet_points(t);
        signed_volume(&p[0], &p[1], &p[2], &p[3]).abs()
    }

    pub fn total_volume(&self) -> f64 {
        (0..self.tets.len()).map(|t| self.tet_volume(t)).sum()
    }

    pub fn length(&self, e: Edge) -> f64 {
        (self.vertices[e.0] - self.vertices[e.1]).norm()
    }

    pub fn diameter(&self) -> f64 {
        crate::geometry::diameter(&self.vertices)
    }

    pub fn topology(&self) -> Topology {
        let mut edge_tets: BTreeMap<Edge, Vec<usize>> = BTreeMap::new();
        let mut triangle_tets: BTreeMap<[usize; 3], Vec<usize>> = BTreeMap::new();
        for (ti, t) in self.tets.iter().enumerate() {
            for &(i, j) in &TET_EDGES {
                edge_tets.entry(edge_key(t[i], t[j])).or_default().push(ti);
            }
            for skip in 0..4 {
                let mut f = [0; 3];
                let mut k = 0;
                for (m, &v) in t.iter().enumerate() {
                    if m != skip {
                        f[k] = v;
                        k += 1;
                    }
                }
                triangle_tets.entry(sorted3(f)).or_default().push(ti);
            }
        }
        let mut boundary_triangles = Vec::new();
        let mut boundary_edges = BTreeSet::new();
        let mut boundary_vertices = BTreeSet::new();
        for (f, ts) in &triangle_tets {
            if ts.len() != 1 {
                continue;
            }
            let t = self.tets[ts[0]];
            let opp = *t.iter().find(|v| !f.contains(v)).unwrap();
            let (a, b, c) = (self.vertices[f[0]], self.vertices[f[1]], self.vertices[f[2]]);
            let oriented = if signed_volume(&a, &b, &c, &self.vertices[opp]) < 0.0 {
                *f
            } else {
                [f[0], f[2], f[1]]
            };
            boundary_triangles.push(oriented);
            for k in 0..3 {
                boundary_edges.insert(edge_key(f[k], f[(k + 1) % 3]));
                boundary_vertices.insert(f[k]);
            }
        }
        let interior_edges = edge_tets.keys().copied().filter(|e| !boundary_edges.contains(e)).collect();
        Topology { edge_tets, triangle_tets, boundary_triangles, boundary_edges, boundary_vertices, interior_edges }
    }

    /// The boundary 2-complex as a closed surface over the full vertex list.
    pub fn boundary_surface(&self) -> Result<ClosedSurface> {
        let topo = self.topology();
        ClosedSurface::new(self.vertices.clone(), topo.boundary_triangles)
    }

    /// Link of an edge: the vertices opposite to it in its incident tets,
    /// in cyclic (interior edge) or path (boundary edge) order.
    pub fn edge_link(&self, topo: &Topology, e: Edge) -> Result<Vec<usize>> {
        let ts = topo
            .edge_tets
            .get(&e)
            .ok_or_else(|| Error::InvalidMove(format!("edge {e:?} not in triangulation")))?;
        let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &t in ts {
            let o: Vec<usize> = self.tets[t].iter().copied().filter(|&v| v != e.0 && v != e.1).collect();
            adj.entry(o[0]).or_default().push(o[1]);
            adj.entry(o[1]).or_default().push(o[0]);
        }
        if adj.values().any(|n| n.len() > 2) {
            return Err(Error::Validation(format!("edge {e:?} has a non-manifold link")));
        }
        let start = adj
            .iter()
            .find(|(_, n)| n.len() == 1)
            .map(|(&v, _)| v)
            .unwrap_or_else(|| *adj.keys().next().unwrap());
        let mut order = vec![start];
        let mut prev = usize::MAX;
        let mut cur = start;
        loop {
            let next = adj[&cur].iter().copied().find(|&w| w != prev && !order.contains(&w));
            match next {
                Some(w) => {
                    order.push(w);
                    prev = cur;
                    cur = w;
                }
                None => break,
            }
        }
        if order.len() != adj.len() {
            return Err(Error::Validation(format!("edge {e:?} has a disconnected link")));
        }
        Ok(order)
    }

    /// Actual lengths of the interior edges, in `topo.interior_edges` order.
    pub fn realized_lengths(&self, topo: &Topology) -> Vec<f64> {
        topo.interior_edges.iter().map(|&e| self.length(e)).collect()
    }

    /// Lengths of tet `t`'s six edges with interior edges replaced from `l`.
    pub fn tet_lengths_with(&self, t: usize, index: &BTreeMap<Edge, usize>, l: &[f64]) -> TetLengths {
        let v = self.tets[t];
        let mut out = [0.0; 6];
        for (s, &(i, j)) in TET_EDGES.iter().enumerate() {
            let e = edge_key(v[i], v[j]);
            out[s] = match index.get(&e) {
                Some(&k) => l[k],
                None => self.length(e),
            };
        }
        TetLengths(out)
    }

    /// Membership of `l` in the length domain: every tetrahedron stays
    /// non-degenerate with the substituted interior lengths.
    pub fn in_domain(&self, topo: &Topology, l: &[f64]) -> Result<bool> {
        if l.len() != topo.interior_edges.len() {
            return Err(Error::IndexMismatch { expected: topo.interior_edges.len(), got: l.len() });
        }
        if l.iter().any(|&x| !(x > 0.0)) {
            return Ok(false);
        }
        let index = topo.interior_index();
        Ok((0..self.tets.len()).all(|t| self.tet_lengths_with(t, &index, l).is_nondegenerate()))
    }

    /// Canonical form: tets with sorted vertices, sorted list.
    pub fn canonical_tets(&self) -> Vec<[usize; 4]> {
        let mut t: Vec<[usize; 4]> = self.tets.iter().map(|&t| sorted4(t)).collect();
        t.sort_unstable();
        t
    }

    /// SHA-256 over the coordinates' bit patterns and the canonical tets.
    pub fn canonical_hash(&self) -> String {
        let mut h = Sha256::new();
        h.update((self.vertices.len() as u64).to_le_bytes());
        for p in &self.vertices {
            for c in [p.x, p.y, p.z] {
                h.update(c.to_bits().to_le_bytes());
            }
        }
        for t in self.canonical_tets() {
            for v in t {
                h.update((v as u64).to_le_bytes());
            }
        }
        hex::encode(h.finalize())
    }

    /// Same vertex coordinates (within `tol`) and same canonical tets.
    pub fn same_as(&self, other: &Triangulation3, tol: f64) -> bool {
        self.vertices.len() == other.vertices.len()
            && self.vertices.iter().zip(&other.vertices).all(|(a, b)| (a - b).norm() <= tol)
            && self.canonical_tets() == other.canonical_tets()
    }
}

/// Cone triangulation of a closed surface from one of its vertices: one
/// tetrahedron per triangle not containing the apex.
pub fn cone_triangulation(
    surface: &ClosedSurface,
    apex: usize,
    faces: Option<Vec<Vec<usize>>>,
) -> Result<Triangulation3> {
    if apex >= surface.points.len() {
        return Err(Error::Validation(format!("apex {apex} out of range")));
    }
    let mut tets = Vec::new();
    for tri in &surface.triangles {
        if tri.contains(&apex) {
            continue;
        }
        let tet = [apex, tri[0], tri[1], tri[2]];
        let p = tet.map(|v| surface.points[v]);
        if crate::geometry::tet_is_degenerate(&p) {
            return Err(Error::DegenerateCone(*tri));
        }
        tets.push(tet);
    }
    Triangulation3::new(surface.points.clone(), tets, faces)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn cone_of_tetrahedron_is_itself() {
        let e = catalog::builtin("regular-tetrahedron").unwrap();
        for apex in 0..4 {
            let t = cone_triangulation(&e.boundary, apex, None).unwrap();
            assert_eq!(t.tets.len(), 1);
            assert!(t.topology().interior_edges.is_empty());
        }
    }

    #[test]
    fn cone_of_octahedron_has_axis_edge() {
        let e = catalog::builtin("octahedron-cone").unwrap();
        let t = e.triangulation.unwrap();
        assert_eq!(t.tets.len(), 4);
        let topo = t.topology();
        assert_eq!(topo.interior_edges.len(), 1);
        let (a, b) = topo.interior_edges[0];
        // The axis joins antipodal vertices.
        assert!((t.vertices[a].coords + t.vertices[b].coords).norm() < 1e-12);
        assert!(validate(&t).is_valid());
    }

    #[test]
    fn cone_of_cube_from_corner() {
        let e = catalog::builtin("cube-6tet").unwrap();
        let s = &e.boundary;
        let t = cone_triangulation(s, 0, None).unwrap();
        assert_eq!(t.tets.len(), 6);
        assert!(validate(&t).is_valid());
        let topo = t.topology();
        // Interior edges: corner 0 to every vertex it does not share a
        // boundary triangle with.
        let mut expect: Vec<Edge> = (1..8)
            .filter(|&v| !s.triangles.iter().any(|tr| tr.contains(&0) && tr.contains(&v)))
            .map(|v| (0, v))
            .collect();
        expect.sort();
        assert_eq!(topo.interior_edges, expect);
        let all_edges = topo.edge_tets.len();
        assert_eq!(topo.interior_edges.len(), all_edges - topo.boundary_edges.len());
    }

    #[test]
    fn domain_membership() {
        let e = catalog::builtin("cube-6tet").unwrap();
        let t = e.triangulation.unwrap();
        let topo = t.topology();
        let l = t.realized_lengths(&topo);
        assert!(t.in_domain(&topo, &l).unwrap());
        let big: Vec<f64> = l.iter().map(|x| x * 1000.0).collect();
        assert!(!t.in_domain(&topo, &big).unwrap());
        assert!(matches!(t.in_domain(&topo, &[]), Err(Error::IndexMismatch { .. })));
        let single = catalog::builtin("regular-tetrahedron").unwrap().triangulation.unwrap();
        assert!(single.in_domain(&single.topology(), &[]).unwrap());
    }
}
