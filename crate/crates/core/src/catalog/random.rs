//! Random convex polyhedra, their cone triangulations, and random
//! refinements by elementary moves.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::complex::{cone_triangulation, Triangulation3};
use crate::error::{Error, Result};
use crate::geometry::{convex_hull, ClosedSurface, Point3, TetLengths, Vector3};
use crate::moves::{boundary_star_edge, boundary_star_triangle, pachner_1_4, pachner_2_3, MoveRecord};

fn unit_vector(rng: &mut impl Rng) -> Vector3 {
    loop {
        let v = Vector3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let n = v.norm();
        if n > 0.1 && n <= 1.0 {
            return v / n;
        }
    }
}

/// Boundary of the convex hull of `n ≥ 4` random points on an ellipsoid
/// with semi-axes in `[0.7, 1.3]`. Points closer than `0.3 / √n` to each
/// other, or nearly coplanar hull faces, trigger a resample.
pub fn random_convex_surface(rng: &mut impl Rng, n: usize) -> Result<ClosedSurface> {
    if n < 4 {
        return Err(Error::DegenerateInput(format!("{n} vertices, need at least 4")));
    }
    let min_sep = 0.3 / (n as f64).sqrt();
    for _ in 0..1000 {
        let axes = Vector3::new(rng.gen_range(0.7..1.3), rng.gen_range(0.7..1.3), rng.gen_range(0.7..1.3));
        let mut pts: Vec<Point3> = Vec::with_capacity(n);
        while pts.len() < n {
            let p = Point3::from(unit_vector(rng).component_mul(&axes));
            if pts.iter().all(|q| (p - q).norm() > min_sep) {
                pts.push(p);
            }
        }
        let Ok(hull) = convex_hull(&pts) else { continue };
        if hull.vertices.len() != n {
            continue;
        }
        let s = ClosedSurface::new_oriented(pts, hull.faces)?;
        // Adjacent hull triangles must bend by a visible angle.
        let Ok(angles) = s.dihedral_angles() else { continue };
        if angles.iter().all(|&a| a < std::f64::consts::PI - 1e-3) {
            return Ok(s);
        }
    }
    Err(Error::DegenerateInput("could not sample a generic convex polyhedron".into()))
}

/// Cone triangulation of a random convex polyhedron with `n` vertices from
/// a random apex. The hull triangles serve as reference faces.
pub fn random_cone_triangulation(rng: &mut impl Rng, n: usize) -> Result<Triangulation3> {
    let s = random_convex_surface(rng, n)?;
    let apex = rng.gen_range(0..n);
    let faces = s.triangles.iter().map(|t| t.to_vec()).collect();
    cone_triangulation(&s, apex, Some(faces))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RefinementKind {
    OneFour,
    TwoThree,
    BoundaryStarTriangle,
    BoundaryStarEdge,
}

/// Random barycentric weights bounded away from zero.
fn weights(rng: &mut impl Rng, k: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..k).map(|_| rng.gen_range(0.3..1.0)).collect();
    let s: f64 = w.iter().sum();
    w.into_iter().map(|x| x / s).collect()
}

fn combo(t: &Triangulation3, cell: &[usize], w: &[f64]) -> Point3 {
    Point3::from(cell.iter().zip(w).map(|(&v, &wi)| t.vertices[v].coords * wi).sum::<Vector3>())
}

/// Smallest admissible `min altitude / longest edge` of a tet created by a
/// random move.
pub const MIN_SHAPE: f64 = 0.02;

fn well_shaped(t: &Triangulation3, rec: &MoveRecord) -> bool {
    rec.added_tets.iter().all(|tet| {
        let l = TetLengths::from_points(&[t.vertices[tet[0]], t.vertices[tet[1]], t.vertices[tet[2]], t.vertices[tet[3]]]);
        l.min_altitude() >= MIN_SHAPE * l.longest()
    })
}

/// One random move of the given kind, or `None` when no attempt succeeded.
/// Moves that create tets flatter than [`MIN_SHAPE`] are rejected.
pub fn random_move(
    t: &Triangulation3,
    rng: &mut impl Rng,
    kind: RefinementKind,
) -> Option<(Triangulation3, MoveRecord)> {
    let topo = t.topology();
    for _ in 0..20 {
        let result = match kind {
            RefinementKind::OneFour => {
                let ti = rng.gen_range(0..t.tets.len());
                let p = combo(t, &t.tets[ti], &weights(rng, 4));
                pachner_1_4(t, ti, p)
            }
            RefinementKind::TwoThree => {
                let interior: Vec<&Vec<usize>> = topo.triangle_tets.values().filter(|ts| ts.len() == 2).collect();
                let Some(ts) = interior.choose(rng) else { return None };
                pachner_2_3(t, ts[0], ts[1])
            }
            RefinementKind::BoundaryStarTriangle => {
                let tri = *topo.boundary_triangles.choose(rng)?;
                let p = combo(t, &tri, &weights(rng, 3));
                boundary_star_triangle(t, tri, p)
            }
            RefinementKind::BoundaryStarEdge => {
                let edges: Vec<_> = topo.boundary_edges.iter().copied().collect();
                let e = *edges.choose(rng)?;
                let p = combo(t, &[e.0, e.1], &weights(rng, 2));
                boundary_star_edge(t, e, p)
            }
        };
        if let Ok((next, rec)) = result {
            if well_shaped(&next, &rec) {
                return Some((next, rec));
            }
        }
    }
    None
}

/// Applies `count` random moves drawn from `kinds`, skipping draws for
/// which no valid move was found.
pub fn random_refinement(
    t: &Triangulation3,
    rng: &mut impl Rng,
    count: usize,
    kinds: &[RefinementKind],
) -> (Triangulation3, Vec<MoveRecord>) {
    let mut cur = t.clone();
    let mut records = Vec::new();
    for _ in 0..count {
        let Some(&kind) = kinds.choose(rng) else { break };
        if let Some((next, rec)) = random_move(&cur, rng, kind) {
            cur = next;
            records.push(rec);
        }
    }
    (cur, records)
}
