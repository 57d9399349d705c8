//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use regge_core::complex::{edge_key, Edge, Topology, Triangulation3};
use regge_core::geometry::{TetLengths, TET_EDGES};
use regge_core::{Point3, Vector3};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Dihedral angles in `TET_EDGES` order from the spherical law of cosines at
/// the first vertex of each edge.
pub fn cosine_dihedrals(l: &[f64; 6]) -> [f64; 6] {
    let len = |a: usize, b: usize| {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        l[TET_EDGES.iter().position(|&e| e == (a, b)).unwrap()]
    };
    // Angle at vertex `v` in the triangle (v, a, b).
    let face_angle = |v: usize, a: usize, b: usize| {
        let (x, y, z) = (len(v, a), len(v, b), len(a, b));
        ((x * x + y * y - z * z) / (2.0 * x * y)).clamp(-1.0, 1.0).acos()
    };
    let mut out = [0.0; 6];
    for (s, &(i, j)) in TET_EDGES.iter().enumerate() {
        let others: Vec<usize> = (0..4).filter(|&v| v != i && v != j).collect();
        let (k, m) = (others[0], others[1]);
        let a = face_angle(i, j, k);
        let b = face_angle(i, j, m);
        let c = face_angle(i, k, m);
        out[s] = ((c.cos() - a.cos() * b.cos()) / (a.sin() * b.sin())).clamp(-1.0, 1.0).acos();
    }
    out
}

/// Dihedral angle at edge `ij` from coordinates: the angle between the
/// projections of the two remaining vertices onto the plane normal to the edge.
pub fn projected_dihedral(p: &[Point3; 4], i: usize, j: usize) -> f64 {
    let others: Vec<usize> = (0..4).filter(|&v| v != i && v != j).collect();
    let e = (p[j] - p[i]).normalize();
    let proj = |v: usize| {
        let d = p[v] - p[i];
        d - e * d.dot(&e)
    };
    let (a, b) = (proj(others[0]), proj(others[1]));
    a.cross(&b).norm().atan2(a.dot(&b))
}

/// Textbook trilateration: vertex 0 at the origin, 1 on the x-axis, 2 in
/// the xy-plane, 3 above it.
pub fn naive_embedding(l: &[f64; 6]) -> [Point3; 4] {
    let [l01, l02, l03, l12, l13, l23] = *l;
    let x2 = (l01 * l01 + l02 * l02 - l12 * l12) / (2.0 * l01);
    let y2 = (l02 * l02 - x2 * x2).max(0.0).sqrt();
    let x3 = (l01 * l01 + l03 * l03 - l13 * l13) / (2.0 * l01);
    let y3 = (l03 * l03 - l23 * l23 + x2 * x2 + y2 * y2 - 2.0 * x2 * x3) / (2.0 * y2);
    let z3 = (l03 * l03 - x3 * x3 - y3 * y3).max(0.0).sqrt();
    [
        Point3::origin(),
        Point3::new(l01, 0.0, 0.0),
        Point3::new(x2, y2, 0.0),
        Point3::new(x3, y3, z3),
    ]
}

/// Angle sums around every edge with the interior lengths replaced by `l`,
/// using the law-of-cosines dihedrals.
pub fn oracle_angle_sums(t: &Triangulation3, topo: &Topology, l: &[f64]) -> BTreeMap<Edge, f64> {
    let index = topo.interior_index();
    let mut sums = BTreeMap::new();
    for ti in 0..t.tets.len() {
        let lengths = t.tet_lengths_with(ti, &index, l);
        let angles = cosine_dihedrals(&lengths.0);
        let v = t.tets[ti];
        for (s, &(i, j)) in TET_EDGES.iter().enumerate() {
            *sums.entry(edge_key(v[i], v[j])).or_insert(0.0) += angles[s];
        }
    }
    sums
}

/// `Σ l κ + Σ l (π − α)` from the oracle angle sums.
pub fn oracle_functional(t: &Triangulation3, topo: &Topology, l: &[f64]) -> f64 {
    let sums = oracle_angle_sums(t, topo, l);
    let interior: f64 = topo.interior_edges.iter().zip(l).map(|(e, li)| li * (2.0 * PI - sums[e])).sum();
    let boundary: f64 = topo.boundary_edges.iter().map(|&e| t.length(e) * (PI - sums[&e])).sum();
    interior + boundary
}

/// Plain central differences of the oracle cone angles, step `h · l_j`.
pub fn oracle_hessian(t: &Triangulation3, topo: &Topology, h: f64) -> DMatrix<f64> {
    let l0 = t.realized_lengths(topo);
    let n = l0.len();
    let omega = |l: &[f64]| {
        let sums = oracle_angle_sums(t, topo, l);
        topo.interior_edges.iter().map(|e| sums[e]).collect::<Vec<f64>>()
    };
    let mut m = DMatrix::zeros(n, n);
    for j in 0..n {
        let step = h * l0[j];
        let mut lp = l0.clone();
        let mut lm = l0.clone();
        lp[j] += step;
        lm[j] -= step;
        let (wp, wm) = (omega(&lp), omega(&lm));
        for i in 0..n {
            m[(i, j)] = (wp[i] - wm[i]) / (2.0 * step);
        }
    }
    m
}

/// Area of the convex hull of coplanar points in a horizontal plane.
pub fn convex_polygon_area(pts: &[Point3]) -> f64 {
    if pts.len() < 3 {
        return 0.0;
    }
    let cx = pts.iter().map(|p| p.x).sum::<f64>() / pts.len() as f64;
    let cy = pts.iter().map(|p| p.y).sum::<f64>() / pts.len() as f64;
    let mut sorted: Vec<&Point3> = pts.iter().collect();
    sorted.sort_by(|a, b| (a.y - cy).atan2(a.x - cx).total_cmp(&(b.y - cy).atan2(b.x - cx)));
    let mut area = 0.0;
    for k in 0..sorted.len() {
        let (a, b) = (sorted[k], sorted[(k + 1) % sorted.len()]);
        area += a.x * b.y - b.x * a.y;
    }
    0.5 * area.abs()
}

/// Section of a tetrahedron by `z = t` from the edge crossings.
pub fn tet_section_oracle(p: &[Point3; 4], t: f64) -> f64 {
    let mut pts = Vec::new();
    for &(i, j) in TET_EDGES.iter() {
        let (a, b) = (p[i], p[j]);
        if (a.z - t) * (b.z - t) < 0.0 {
            let s = (t - a.z) / (b.z - a.z);
            pts.push(a + (b - a) * s);
        }
    }
    convex_polygon_area(&pts)
}

/// Rotation about a unit axis by `angle` (Rodrigues).
pub fn rotate(p: &Point3, axis: &Vector3, angle: f64) -> Point3 {
    let v = p.coords;
    let (s, c) = angle.sin_cos();
    Point3::from(v * c + axis.cross(&v) * s + axis * axis.dot(&v) * (1.0 - c))
}

pub fn tet_shape(p: &[Point3; 4]) -> f64 {
    let l = TetLengths::from_points(p);
    l.min_altitude() / l.longest()
}
