//! Elementary moves on triangulations: Pachner 1↔4 and 2↔3, stellar
//! starrings and weldings, vertex displacements, and the change of `M_T`
//! they induce.

mod delta;
mod realize;
mod script;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

pub use delta::{
    expected_signature, move_delta, signature_transport_check, theorem_signature, Definiteness, MoveDelta,
    TransportVerdict,
};
pub use realize::realize_interior_starring;
pub use script::{apply_script, apply_step, MoveStep, StepReport};

use crate::complex::{edge_key, sorted3, sorted4, Edge, Topology, Triangulation3};
use crate::error::{Error, Result};
use crate::geometry::{signed_volume, tet_barycentric, tet_is_degenerate, triangle_barycentric, Point3, Vector3};
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MoveKind {
    #[serde(rename = "1-4")]
    OneFour,
    #[serde(rename = "4-1")]
    FourOne,
    #[serde(rename = "2-3")]
    TwoThree,
    #[serde(rename = "3-2")]
    ThreeTwo,
    #[serde(rename = "boundary-star-triangle")]
    BoundaryStarTriangle,
    #[serde(rename = "boundary-star-edge")]
    BoundaryStarEdge,
    /// Starring of an interior edge or triangle.
    #[serde(rename = "star")]
    Star,
    #[serde(rename = "weld")]
    Weld,
    #[serde(rename = "vertex-displacement")]
    VertexDisplacement,
}

impl std::fmt::Display for MoveKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = serde_json::to_value(self).unwrap();
        write!(f, "{}", s.as_str().unwrap())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MoveRecord {
    pub kind: MoveKind,
    /// The cell acted on, in input labels.
    pub cell: Vec<usize>,
    /// Removed tets, in input labels.
    pub removed_tets: Vec<[usize; 4]>,
    /// Added tets, in output labels.
    pub added_tets: Vec<[usize; 4]>,
    /// Appended vertex (always the last index of the output).
    pub new_vertex: Option<(usize, Point3)>,
    /// Removed vertex (input label) with its coordinates.
    pub removed_vertex: Option<(usize, Point3)>,
    /// Displaced vertex with its start and end positions.
    pub displaced: Option<(usize, Point3, Point3)>,
    /// Edges present only in the output, in output labels.
    pub added_edges: Vec<Edge>,
    /// Edges present only in the input, in input labels.
    pub removed_edges: Vec<Edge>,
    /// Number of tets incident to the starred cell.
    pub incident_tets: usize,
}

impl MoveRecord {
    /// Maps an output vertex label to the input label.
    pub fn to_input_label(&self, v: usize) -> usize {
        match self.removed_vertex {
            Some((r, _)) if v >= r => v + 1,
            _ => v,
        }
    }

    /// A script step that undoes this move.
    pub fn inverse(&self) -> MoveStep {
        match self.kind {
            MoveKind::OneFour => MoveStep::new(MoveKind::FourOne, vec![self.new_vertex.unwrap().0], None),
            MoveKind::BoundaryStarTriangle | MoveKind::BoundaryStarEdge | MoveKind::Star => {
                MoveStep::new(MoveKind::Weld, vec![self.new_vertex.unwrap().0], None)
            }
            MoveKind::TwoThree => {
                let (a, b) = self.added_edges[0];
                MoveStep::new(MoveKind::ThreeTwo, vec![a, b], None)
            }
            MoveKind::ThreeTwo => {
                let common: Vec<usize> =
                    self.added_tets[0].iter().copied().filter(|v| self.added_tets[1].contains(v)).collect();
                MoveStep::new(MoveKind::TwoThree, common, None)
            }
            MoveKind::FourOne | MoveKind::Weld => {
                let (_, p) = self.removed_vertex.unwrap();
                let kind = if self.cell.len() == 4 { MoveKind::OneFour } else { MoveKind::Star };
                MoveStep::new(kind, self.cell.clone(), Some(p))
            }
            MoveKind::VertexDisplacement => {
                let (v, from, _) = self.displaced.unwrap();
                MoveStep::new(MoveKind::VertexDisplacement, vec![v], Some(from))
            }
        }
    }
}

fn all_edges(tets: &[[usize; 4]]) -> BTreeSet<Edge> {
    let mut s = BTreeSet::new();
    for t in tets {
        for i in 0..4 {
            for j in i + 1..4 {
                s.insert(edge_key(t[i], t[j]));
            }
        }
    }
    s
}

fn finish_record(
    kind: MoveKind,
    cell: Vec<usize>,
    before: &Triangulation3,
    after: &Triangulation3,
    removed_tets: Vec<[usize; 4]>,
    added_tets: Vec<[usize; 4]>,
) -> MoveRecord {
    let mut rec = MoveRecord {
        kind,
        cell,
        removed_tets,
        added_tets,
        new_vertex: None,
        removed_vertex: None,
        displaced: None,
        added_edges: Vec::new(),
        removed_edges: Vec::new(),
        incident_tets: 0,
    };
    if after.vertices.len() > before.vertices.len() {
        let v = after.vertices.len() - 1;
        rec.new_vertex = Some((v, after.vertices[v]));
    }
    let eb = all_edges(&before.tets);
    let ea = all_edges(&after.tets);
    rec.added_edges = ea.iter().copied().filter(|e| !eb.contains(e)).collect();
    rec.removed_edges = eb.iter().copied().filter(|e| !ea.contains(e)).collect();
    rec
}

pub fn find_tet(t: &Triangulation3, verts: &[usize]) -> Option<usize> {
    t.tets.iter().position(|tet| verts.iter().all(|v| tet.contains(v)) && verts.len() == 4)
}

/// Indices of tets containing every vertex of `cell`.
pub fn tets_containing(t: &Triangulation3, cell: &[usize]) -> Vec<usize> {
    (0..t.tets.len()).filter(|&i| cell.iter().all(|v| t.tets[i].contains(v))).collect()
}

fn tet_points(t: &Triangulation3, tet: &[usize; 4]) -> [Point3; 4] {
    tet.map(|v| t.vertices[v])
}

/// New tets must be non-degenerate and exactly fill the removed ones.
fn check_refill(t: &Triangulation3, removed: &[[usize; 4]], added: &[[usize; 4]]) -> bool {
    let vol = |tet: &[usize; 4]| {
        let p = tet_points(t, tet);
        signed_volume(&p[0], &p[1], &p[2], &p[3]).abs()
    };
    if added.iter().any(|tet| tet_is_degenerate(&tet_points(t, tet))) {
        return false;
    }
    let before: f64 = removed.iter().map(vol).sum();
    let after: f64 = added.iter().map(vol).sum();
    (before - after).abs() <= 1e-12 * before.max(f64::MIN_POSITIVE) * 16.0
}

fn replace(t: &Triangulation3, remove: &[usize], add: &[[usize; 4]]) -> Triangulation3 {
    let mut tets: Vec<[usize; 4]> =
        t.tets.iter().enumerate().filter(|(i, _)| !remove.contains(i)).map(|(_, &x)| x).collect();
    tets.extend_from_slice(add);
    Triangulation3 { vertices: t.vertices.clone(), tets, faces: t.faces.clone() }
}

fn remove_vertex(t: &mut Triangulation3, v: usize) {
    t.vertices.remove(v);
    let relabel = |x: usize| if x > v { x - 1 } else { x };
    for tet in &mut t.tets {
        *tet = tet.map(relabel);
    }
    if let Some(faces) = &mut t.faces {
        for f in faces.iter_mut() {
            f.retain(|&x| x != v);
            for x in f.iter_mut() {
                *x = relabel(*x);
            }
        }
    }
}

/// Barycentric coordinates of `p` with respect to the simplex `cell` and the
/// distance of `p` from the cell's affine hull.
fn cell_barycentric(t: &Triangulation3, cell: &[usize], p: &Point3) -> Option<(Vec<f64>, f64)> {
    let q: Vec<Point3> = cell.iter().map(|&v| t.vertices[v]).collect();
    match q.len() {
        2 => {
            let d = q[1] - q[0];
            let s = (p - q[0]).dot(&d) / d.norm_squared();
            let dist = (p - (q[0] + d * s)).norm();
            Some((vec![1.0 - s, s], dist))
        }
        3 => triangle_barycentric(&q[0], &q[1], &q[2], p).map(|(b, d)| (b.to_vec(), d.abs())),
        4 => tet_barycentric(&[q[0], q[1], q[2], q[3]], p).map(|b| (b.to_vec(), 0.0)),
        _ => None,
    }
}

fn require_relative_interior(t: &Triangulation3, cell: &[usize], p: &Point3) -> Result<()> {
    let diam = t.diameter();
    match cell_barycentric(t, cell, p) {
        Some((b, dist)) if b.iter().all(|&x| x > tol::BARYCENTRIC_MARGIN) && dist <= 1e-9 * diam => Ok(()),
        Some((b, dist)) => Err(Error::PointNotInterior(format!(
            "barycentric {b:?}, distance {dist:e} from cell {cell:?}"
        ))),
        None => Err(Error::PointNotInterior(format!("cell {cell:?} is degenerate"))),
    }
}

fn is_boundary_cell(topo: &Topology, cell: &[usize]) -> bool {
    match cell.len() {
        2 => topo.boundary_edges.contains(&edge_key(cell[0], cell[1])),
        3 => topo.triangle_tets.get(&sorted3([cell[0], cell[1], cell[2]])).map_or(false, |ts| ts.len() == 1),
        _ => false,
    }
}

/// Starring of the simplex `cell` (2 to 4 vertices) at a point `p` in its
/// relative interior: every tet containing `cell` is replaced by the cone
/// over `p` of its faces opposite the vertices of `cell`.
pub fn star(t: &Triangulation3, cell: &[usize], p: Point3) -> Result<(Triangulation3, MoveRecord)> {
    if !(2..=4).contains(&cell.len()) || cell.iter().collect::<BTreeSet<_>>().len() != cell.len() {
        return Err(Error::InvalidMove(format!("cannot star cell {cell:?}")));
    }
    let incident = tets_containing(t, cell);
    if incident.is_empty() {
        return Err(Error::InvalidMove(format!("cell {cell:?} is not a simplex of the triangulation")));
    }
    require_relative_interior(t, cell, &p)?;
    let topo = t.topology();
    let kind = match cell.len() {
        4 => MoveKind::OneFour,
        3 if is_boundary_cell(&topo, cell) => MoveKind::BoundaryStarTriangle,
        2 if is_boundary_cell(&topo, cell) => MoveKind::BoundaryStarEdge,
        _ => MoveKind::Star,
    };
    let pv = t.vertices.len();
    let mut grown = t.clone();
    grown.vertices.push(p);
    let mut added = Vec::new();
    for &ti in &incident {
        let tet = t.tets[ti];
        for &s in cell {
            added.push(tet.map(|v| if v == s { pv } else { v }));
        }
    }
    let removed: Vec<[usize; 4]> = incident.iter().map(|&i| t.tets[i]).collect();
    if !check_refill(&grown, &removed, &added) {
        return Err(Error::PointNotInterior(format!("starring {cell:?} at {p:?} produces degenerate tets")));
    }
    let out = replace(&grown, &incident, &added);
    let mut rec = finish_record(kind, cell.to_vec(), t, &out, removed, added);
    rec.incident_tets = incident.len();
    Ok((out, rec))
}

/// 1→4 move: split tet `tet` at a strictly interior point `p`.
pub fn pachner_1_4(t: &Triangulation3, tet: usize, p: Point3) -> Result<(Triangulation3, MoveRecord)> {
    let cell = t
        .tets
        .get(tet)
        .ok_or_else(|| Error::InvalidMove(format!("no tet {tet}")))?
        .to_vec();
    star(t, &cell, p)
}

/// Boundary starring of a triangle lying in exactly one tet.
pub fn boundary_star_triangle(t: &Triangulation3, tri: [usize; 3], p: Point3) -> Result<(Triangulation3, MoveRecord)> {
    let topo = t.topology();
    if !is_boundary_cell(&topo, &tri) {
        return Err(Error::InvalidMove(format!("triangle {tri:?} is not a boundary triangle")));
    }
    star(t, &tri, p)
}

/// Boundary starring of an edge of the boundary surface.
pub fn boundary_star_edge(t: &Triangulation3, edge: Edge, p: Point3) -> Result<(Triangulation3, MoveRecord)> {
    let topo = t.topology();
    if !is_boundary_cell(&topo, &[edge.0, edge.1]) {
        return Err(Error::InvalidMove(format!("edge {edge:?} is not a boundary edge")));
    }
    star(t, &[edge.0, edge.1], p)
}

/// Inverse of a starring: removes vertex `v` and restores the simplex whose
/// relative interior contains it.
pub fn weld(t: &Triangulation3, v: usize) -> Result<(Triangulation3, MoveRecord)> {
    if v >= t.vertices.len() {
        return Err(Error::InvalidMove(format!("no vertex {v}")));
    }
    let star_tets = tets_containing(t, &[v]);
    if star_tets.is_empty() {
        return Err(Error::InvalidMove(format!("vertex {v} is in no tet")));
    }
    let link: Vec<usize> = star_tets
        .iter()
        .flat_map(|&i| t.tets[i])
        .filter(|&x| x != v)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let p = t.vertices[v];
    for size in 2..=4usize.min(link.len()) {
        for sigma in subsets(&link, size) {
            let Some(restored) = restore_tets(t, &star_tets, v, &sigma) else { continue };
            if require_relative_interior(t, &sigma, &p).is_err() {
                continue;
            }
            let removed: Vec<[usize; 4]> = star_tets.iter().map(|&i| t.tets[i]).collect();
            if !check_refill(t, &removed, &restored) {
                continue;
            }
            let mut out = replace(t, &star_tets, &restored);
            remove_vertex(&mut out, v);
            let added: Vec<[usize; 4]> = out.tets[out.tets.len() - restored.len()..].to_vec();
            let kind = if size == 4 { MoveKind::FourOne } else { MoveKind::Weld };
            let mut rec = finish_record(kind, sigma.clone(), t, &out, removed, added);
            rec.removed_vertex = Some((v, p));
            rec.incident_tets = restored.len();
            // Edge bookkeeping across the relabelling.
            let eb = all_edges(&t.tets);
            let ea: BTreeSet<Edge> =
                all_edges(&out.tets).into_iter().map(|(a, b)| (rec.to_input_label(a), rec.to_input_label(b))).collect();
            rec.removed_edges = eb.iter().copied().filter(|e| !ea.contains(e)).collect();
            rec.added_edges = ea
                .iter()
                .copied()
                .filter(|e| !eb.contains(e))
                .map(|(a, b)| {
                    let down = |x: usize| if x > v { x - 1 } else { x };
                    (down(a), down(b))
                })
                .collect();
            return Ok((out, rec));
        }
    }
    Err(Error::InvalidMove(format!("vertex {v} is not the apex of a starring")))
}

fn subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > items.len() {
        return out;
    }
    loop {
        out.push(idx.iter().map(|&i| items[i]).collect());
        let mut i = k;
        while i > 0 && idx[i - 1] == items.len() - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Tets of the welded complex when `v` stars `sigma`: every star tet misses
/// exactly one vertex of `sigma`, and each restored tet arises `|sigma|` times.
fn restore_tets(t: &Triangulation3, star_tets: &[usize], v: usize, sigma: &[usize]) -> Option<Vec<[usize; 4]>> {
    let mut restored: Vec<[usize; 4]> = Vec::new();
    for &i in star_tets {
        let tet = t.tets[i];
        let missing: Vec<usize> = sigma.iter().copied().filter(|s| !tet.contains(s)).collect();
        if missing.len() != 1 {
            return None;
        }
        restored.push(tet.map(|x| if x == v { missing[0] } else { x }));
    }
    let mut out: Vec<[usize; 4]> = Vec::new();
    for r in restored {
        if !out.iter().any(|o| sorted4(*o) == sorted4(r)) {
            out.push(r);
        }
    }
    if out.len() * sigma.len() != star_tets.len() {
        return None;
    }
    Some(out)
}

/// 4→1 move: remove an interior vertex of degree 4.
pub fn pachner_4_1(t: &Triangulation3, v: usize) -> Result<(Triangulation3, MoveRecord)> {
    let star_tets = tets_containing(t, &[v]);
    if star_tets.len() != 4 {
        return Err(Error::InvalidMove(format!("vertex {v} lies in {} tets, not 4", star_tets.len())));
    }
    let (out, rec) = weld(t, v)?;
    if rec.kind != MoveKind::FourOne {
        return Err(Error::InvalidMove(format!("vertex {v} does not star a tetrahedron")));
    }
    Ok((out, rec))
}

/// Line through `d` and `e` meets triangle `abc` inside, with margin, and
/// `d`, `e` lie on opposite sides of it.
fn bipyramid_is_convex(t: &Triangulation3, tri: [usize; 3], d: usize, e: usize) -> bool {
    let p = &t.vertices;
    let (a, b, c) = (p[tri[0]], p[tri[1]], p[tri[2]]);
    let vd = signed_volume(&a, &b, &c, &p[d]);
    let ve = signed_volume(&a, &b, &c, &p[e]);
    if vd * ve >= 0.0 {
        return false;
    }
    let s = vd / (vd - ve);
    let x = p[d] + (p[e] - p[d]) * s;
    match triangle_barycentric(&a, &b, &c, &x) {
        Some((bc, _)) => bc.iter().all(|&w| w > tol::BARYCENTRIC_MARGIN),
        None => false,
    }
}

/// 2→3 move on two tets sharing a triangle.
pub fn pachner_2_3(t: &Triangulation3, tet1: usize, tet2: usize) -> Result<(Triangulation3, MoveRecord)> {
    if tet1 >= t.tets.len() || tet2 >= t.tets.len() || tet1 == tet2 {
        return Err(Error::InvalidMove(format!("bad tet pair ({tet1}, {tet2})")));
    }
    let (x, y) = (t.tets[tet1], t.tets[tet2]);
    let shared: Vec<usize> = x.iter().copied().filter(|v| y.contains(v)).collect();
    if shared.len() != 3 {
        return Err(Error::InvalidMove(format!("tets {tet1} and {tet2} do not share a triangle")));
    }
    let d = *x.iter().find(|v| !shared.contains(v)).unwrap();
    let e = *y.iter().find(|v| !shared.contains(v)).unwrap();
    let tri = [shared[0], shared[1], shared[2]];
    if !bipyramid_is_convex(t, tri, d, e) {
        return Err(Error::NotConvexBipyramid(format!("apexes {d}, {e} over triangle {tri:?}")));
    }
    if all_edges(&t.tets).contains(&edge_key(d, e)) {
        return Err(Error::InvalidMove(format!("edge ({d}, {e}) already exists")));
    }
    // Replace each shared vertex in turn by the second apex, keeping the
    // orientation of the first tet.
    let added: Vec<[usize; 4]> = tri.iter().map(|&s| x.map(|v| if v == s { e } else { v })).collect();
    let removed = vec![x, y];
    if !check_refill(t, &removed, &added) {
        return Err(Error::NotConvexBipyramid(format!("apexes {d}, {e} over triangle {tri:?}")));
    }
    let out = replace(t, &[tet1, tet2], &added);
    let rec = finish_record(MoveKind::TwoThree, tri.to_vec(), t, &out, removed, added);
    Ok((out, rec))
}

/// 3→2 move on an interior edge of degree 3.
pub fn pachner_3_2(t: &Triangulation3, edge: Edge) -> Result<(Triangulation3, MoveRecord)> {
    let (d, e) = edge;
    let incident = tets_containing(t, &[d, e]);
    if incident.len() != 3 {
        return Err(Error::InvalidMove(format!("edge {edge:?} lies in {} tets, not 3", incident.len())));
    }
    let topo = t.topology();
    if topo.boundary_edges.contains(&edge_key(d, e)) {
        return Err(Error::InvalidMove(format!("edge {edge:?} is on the boundary")));
    }
    let link: Vec<usize> = incident
        .iter()
        .flat_map(|&i| t.tets[i])
        .filter(|&x| x != d && x != e)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let tri = [link[0], link[1], link[2]];
    if topo.triangle_tets.contains_key(&sorted3(tri)) {
        return Err(Error::InvalidMove(format!("triangle {tri:?} already exists")));
    }
    if !bipyramid_is_convex(t, tri, d, e) {
        return Err(Error::NotConvexBipyramid(format!("edge {edge:?} does not pierce triangle {tri:?}")));
    }
    let first = t.tets[incident[0]];
    let spare = *tri.iter().find(|v| !first.contains(v)).unwrap();
    let added = vec![first.map(|v| if v == e { spare } else { v }), first.map(|v| if v == d { spare } else { v })];
    let removed: Vec<[usize; 4]> = incident.iter().map(|&i| t.tets[i]).collect();
    if !check_refill(t, &removed, &added) {
        return Err(Error::NotConvexBipyramid(format!("edge {edge:?}")));
    }
    let out = replace(t, &incident, &added);
    let rec = finish_record(MoveKind::ThreeTwo, vec![d, e], t, &out, removed, added);
    Ok((out, rec))
}

/// Moves vertex `v` to `target` along a straight path sampled in `steps`
/// steps; every tet must stay non-degenerate with unchanged orientation.
pub fn displace_vertex(
    t: &Triangulation3,
    v: usize,
    target: Point3,
    steps: usize,
) -> Result<(Triangulation3, MoveRecord)> {
    if v >= t.vertices.len() {
        return Err(Error::InvalidMove(format!("no vertex {v}")));
    }
    let start = t.vertices[v];
    let incident = tets_containing(t, &[v]);
    let sign = |t: &Triangulation3, i: usize| {
        let p = tet_points(t, &t.tets[i]);
        signed_volume(&p[0], &p[1], &p[2], &p[3]).signum()
    };
    let signs: Vec<f64> = incident.iter().map(|&i| sign(t, i)).collect();
    let mut cur = t.clone();
    let steps = steps.max(1);
    for k in 1..=steps {
        let s = k as f64 / steps as f64;
        cur.vertices[v] = if k == steps { target } else { start + (target - start) * s };
        for (&i, &sg) in incident.iter().zip(&signs) {
            if tet_is_degenerate(&tet_points(&cur, &cur.tets[i])) || sign(&cur, i) != sg {
                return Err(Error::InvalidMove(format!(
                    "displacement of vertex {v} degenerates tet {i} at fraction {s}"
                )));
            }
        }
    }
    let mut rec = finish_record(MoveKind::VertexDisplacement, vec![v], t, &cur, Vec::new(), Vec::new());
    rec.displaced = Some((v, start, target));
    Ok((cur, rec))
}

/// Barycenter of a cell.
pub fn barycenter(t: &Triangulation3, cell: &[usize]) -> Point3 {
    Point3::from(cell.iter().map(|&v| t.vertices[v].coords).sum::<Vector3>() / cell.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::complex::{census, validate};

    fn regular() -> Triangulation3 {
        catalog::builtin("regular-tetrahedron").unwrap().triangulation.unwrap()
    }

    fn bipyramid() -> Triangulation3 {
        let mut t = regular();
        let (a, b, c) = (t.vertices[0], t.vertices[1], t.vertices[2]);
        let n = (b - a).cross(&(c - a)).normalize();
        let d = t.vertices[3];
        t.vertices.push(d - n * 2.0 * (d - a).dot(&n));
        t.tets.push([0, 2, 1, 4]);
        t
    }

    #[test]
    fn one_four_at_centroid() {
        let t = regular();
        let c = barycenter(&t, &[0, 1, 2, 3]);
        let (t2, rec) = pachner_1_4(&t, 0, c).unwrap();
        assert_eq!(t2.tets.len(), 4);
        let v0 = t.tet_volume(0);
        for i in 0..4 {
            assert!((t2.tet_volume(i) - v0 / 4.0).abs() < 1e-14);
        }
        assert!(validate(&t2).is_valid());
        assert_eq!(rec.added_edges.len(), 4);
        let (t3, _) = pachner_4_1(&t2, 4).unwrap();
        assert!(t3.same_as(&t, 0.0));
    }

    #[test]
    fn one_four_near_face_rejected() {
        let t = regular();
        let p = tet_points(&t, &t.tets[0]);
        let x = Point3::from(p[0].coords * (1.0 / 3.0 - 1e-15) + p[1].coords / 3.0 + p[2].coords / 3.0 + p[3].coords * 1e-15);
        assert!(matches!(pachner_1_4(&t, 0, x), Err(Error::PointNotInterior(_))));
    }

    #[test]
    fn two_three_and_back() {
        let t = bipyramid();
        let (t2, rec) = pachner_2_3(&t, 0, 1).unwrap();
        assert_eq!(t2.tets.len(), 3);
        assert_eq!(rec.added_edges, vec![(3, 4)]);
        assert!(validate(&t2).is_valid());
        assert_eq!(census(&t2).unwrap().n(), 1);
        let (t3, _) = pachner_3_2(&t2, (3, 4)).unwrap();
        assert!(t3.same_as(&t, 0.0));
    }

    #[test]
    fn reflex_bipyramid_rejected() {
        let mut t = regular();
        let c = barycenter(&t, &[0, 1, 2]);
        let d = t.vertices[3];
        t.vertices.push(c + (d - c) * 0.5);
        t.tets.push([0, 2, 1, 4]);
        assert!(matches!(pachner_2_3(&t, 0, 1), Err(Error::NotConvexBipyramid(_))));
    }

    #[test]
    fn boundary_triangle_starring() {
        let t = regular();
        let p = barycenter(&t, &[0, 1, 2]);
        let (t2, rec) = boundary_star_triangle(&t, [0, 1, 2], p).unwrap();
        assert_eq!(t2.tets.len(), 3);
        assert_eq!(rec.kind, MoveKind::BoundaryStarTriangle);
        let c = census(&t2).unwrap();
        assert_eq!((c.m(), c.k(), c.n()), (0, 1, 1));
        let (t3, _) = weld(&t2, 4).unwrap();
        assert!(t3.same_as(&t, 0.0));
    }

    #[test]
    fn boundary_edge_starring() {
        let t = bipyramid();
        let p = barycenter(&t, &[0, 1]);
        let (t2, rec) = boundary_star_edge(&t, (0, 1), p).unwrap();
        assert_eq!(t2.tets.len(), 4);
        assert_eq!(rec.incident_tets, 2);
        assert!(validate(&t2).is_valid());
        let (t3, _) = weld(&t2, 5).unwrap();
        assert!(t3.same_as(&t, 0.0));
    }

    #[test]
    fn displacement_checks_path() {
        let t = regular();
        let c = barycenter(&t, &[0, 1, 2, 3]);
        let (t2, _) = pachner_1_4(&t, 0, c).unwrap();
        let inside = c + (t.vertices[0] - c) * 0.3;
        assert!(displace_vertex(&t2, 4, inside, 16).is_ok());
        let outside = c + (t.vertices[0] - c) * 1.5;
        assert!(displace_vertex(&t2, 4, outside, 16).is_err());
    }

    #[test]
    fn subsets_enumerates_combinations() {
        assert_eq!(subsets(&[1, 2, 3, 4], 2).len(), 6);
        assert_eq!(subsets(&[1, 2, 3], 3), vec![vec![1, 2, 3]]);
    }
}
