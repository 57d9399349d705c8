//! Incremental 3D convex hull.

use std::collections::BTreeMap;

use super::{diameter, Point3, Vector3};
use crate::error::{Error, Result};
use crate::tol;

#[derive(Debug, Clone)]
pub struct ConvexHull {
    /// Outward-oriented triangles, indices into the input point list.
    pub faces: Vec<[usize; 3]>,
    /// Input indices of the strictly extreme points, ascending.
    pub vertices: Vec<usize>,
}

#[derive(Clone, Copy)]
struct Face {
    v: [usize; 3],
    n: Vector3,
    off: f64,
}

impl Face {
    fn new(pts: &[Point3], v: [usize; 3]) -> Face {
        let n = (pts[v[1]] - pts[v[0]]).cross(&(pts[v[2]] - pts[v[0]])).normalize();
        Face { v, n, off: n.dot(&pts[v[0]].coords) }
    }

    fn dist(&self, p: &Point3) -> f64 {
        self.n.dot(&p.coords) - self.off
    }
}

fn line_dist(a: &Point3, b: &Point3, p: &Point3) -> f64 {
    let d = (b - a).normalize();
    let v = p - a;
    (v - d * v.dot(&d)).norm()
}

/// Convex hull of `points`. A point counts as a hull vertex only when it is
/// extreme by a margin of `HULL_EXTREME * diameter`; points on hull faces or
/// edges are dropped from `vertices` though they may appear in `faces`.
pub fn convex_hull(points: &[Point3]) -> Result<ConvexHull> {
    if points.len() < 4 {
        return Err(Error::DegenerateInput(format!("{} points, need at least 4", points.len())));
    }
    let diam = diameter(points);
    let eps = tol::HULL_EXTREME * diam;
    if diam == 0.0 {
        return Err(Error::DegenerateInput("all points coincide".into()));
    }
    let i0 = 0;
    let i1 = (0..points.len())
        .max_by(|&a, &b| (points[a] - points[i0]).norm().total_cmp(&(points[b] - points[i0]).norm()))
        .unwrap();
    let i2 = (0..points.len())
        .max_by(|&a, &b| {
            line_dist(&points[i0], &points[i1], &points[a]).total_cmp(&line_dist(&points[i0], &points[i1], &points[b]))
        })
        .unwrap();
    if line_dist(&points[i0], &points[i1], &points[i2]) <= eps {
        return Err(Error::DegenerateInput("points are collinear".into()));
    }
    let base = Face::new(points, [i0, i1, i2]);
    let i3 = (0..points.len())
        .max_by(|&a, &b| base.dist(&points[a]).abs().total_cmp(&base.dist(&points[b]).abs()))
        .unwrap();
    if base.dist(&points[i3]).abs() <= eps {
        return Err(Error::DegenerateInput("points are coplanar".into()));
    }
    let mut faces: Vec<Face> = Vec::new();
    let init = [i0, i1, i2, i3];
    let centroid = Point3::from(init.iter().map(|&i| points[i].coords).sum::<Vector3>() / 4.0);
    for skip in 0..4 {
        let v: Vec<usize> = (0..4).filter(|&k| k != skip).map(|k| init[k]).collect();
        let mut f = Face::new(points, [v[0], v[1], v[2]]);
        if f.dist(&centroid) > 0.0 {
            f = Face::new(points, [v[0], v[2], v[1]]);
        }
        faces.push(f);
    }
    for (pi, p) in points.iter().enumerate() {
        if init.contains(&pi) {
            continue;
        }
        let visible: Vec<bool> = faces.iter().map(|f| f.dist(p) > eps).collect();
        if !visible.iter().any(|&v| v) {
            continue;
        }
        let mut directed: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for (fi, f) in faces.iter().enumerate() {
            for k in 0..3 {
                directed.insert((f.v[k], f.v[(k + 1) % 3]), fi);
            }
        }
        let mut new_faces = Vec::new();
        for (fi, f) in faces.iter().enumerate() {
            if !visible[fi] {
                continue;
            }
            for k in 0..3 {
                let (a, b) = (f.v[k], f.v[(k + 1) % 3]);
                let twin = directed[&(b, a)];
                if !visible[twin] {
                    new_faces.push(Face::new(points, [a, b, pi]));
                }
            }
        }
        let mut kept: Vec<Face> = faces.iter().zip(&visible).filter(|(_, &v)| !v).map(|(f, _)| *f).collect();
        kept.extend(new_faces);
        faces = kept;
    }

    let mut incident: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (fi, f) in faces.iter().enumerate() {
        for &v in &f.v {
            incident.entry(v).or_default().push(fi);
        }
    }
    let mut vertices = Vec::new();
    for (&v, fs) in &incident {
        let mut reps: Vec<usize> = Vec::new();
        for &fi in fs {
            let f = &faces[fi];
            let same = reps.iter().any(|&r| {
                let g = &faces[r];
                g.n.dot(&f.n) > 0.0 && f.v.iter().all(|&w| g.dist(&points[w]).abs() <= eps)
            });
            if !same {
                reps.push(fi);
            }
        }
        if reps.len() >= 3 {
            vertices.push(v);
        }
    }
    Ok(ConvexHull { faces: faces.iter().map(|f| f.v).collect(), vertices })
}
