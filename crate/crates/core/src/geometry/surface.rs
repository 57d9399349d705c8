//! Closed triangulated surfaces: orientation, volume, dihedral angles and
//! first-order variations of the dihedral angles.

use std::collections::{BTreeMap, VecDeque};

use super::{diameter, signed_volume, Point3, Vector3};
use crate::error::{Error, Result};

/// An edge of an oriented closed surface. `left` contains the directed edge
/// `a → b`, `right` contains `b → a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SurfaceEdge {
    pub a: usize,
    pub b: usize,
    pub left: usize,
    pub right: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClosedSurface {
    pub points: Vec<Point3>,
    pub triangles: Vec<[usize; 3]>,
}

fn cross_dot_derivative(
    e: Vector3,
    c: Vector3,
    d: Vector3,
    de: Vector3,
    dc: Vector3,
    dd: Vector3,
) -> (f64, f64, f64, f64) {
    // φ = atan2(y, x), y = (n1 × n2)·E, x = |E| n1·n2 with n1 = E×C, n2 = E×D.
    let n1 = e.cross(&c);
    let n2 = e.cross(&d);
    let dn1 = de.cross(&c) + e.cross(&dc);
    let dn2 = de.cross(&d) + e.cross(&dd);
    let en = e.norm();
    let y = n1.cross(&n2).dot(&e);
    let x = en * n1.dot(&n2);
    let dy = (dn1.cross(&n2) + n1.cross(&dn2)).dot(&e) + n1.cross(&n2).dot(&de);
    let dx = e.dot(&de) / en * n1.dot(&n2) + en * (dn1.dot(&n2) + n1.dot(&dn2));
    (x, y, dx, dy)
}

impl ClosedSurface {
    pub fn new(points: Vec<Point3>, triangles: Vec<[usize; 3]>) -> Result<Self> {
        for t in &triangles {
            if t.iter().any(|&v| v >= points.len()) || t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
                return Err(Error::DegenerateInput(format!("bad surface triangle {t:?}")));
            }
        }
        Ok(ClosedSurface { points, triangles })
    }

    /// Builds the surface and orients it consistently with outward normals.
    pub fn new_oriented(points: Vec<Point3>, triangles: Vec<[usize; 3]>) -> Result<Self> {
        let mut s = Self::new(points, triangles)?;
        s.orient_outward()?;
        Ok(s)
    }

    fn undirected_edge_map(&self) -> BTreeMap<(usize, usize), Vec<usize>> {
        let mut map: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (ti, t) in self.triangles.iter().enumerate() {
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                map.entry((a.min(b), a.max(b))).or_default().push(ti);
            }
        }
        map
    }

    /// Flips triangles so that adjacent triangles induce opposite directions
    /// on shared edges and the enclosed volume is positive.
    pub fn orient_outward(&mut self) -> Result<()> {
        let map = self.undirected_edge_map();
        if let Some((e, ts)) = map.iter().find(|(_, ts)| ts.len() != 2) {
            return Err(Error::DegenerateInput(format!(
                "surface edge {e:?} has {} incident triangles",
                ts.len()
            )));
        }
        let n = self.triangles.len();
        let mut visited = vec![false; n];
        for start in 0..n {
            if visited[start] {
                continue;
            }
            visited[start] = true;
            let mut queue = VecDeque::from([start]);
            while let Some(ti) = queue.pop_front() {
                let t = self.triangles[ti];
                for k in 0..3 {
                    let (a, b) = (t[k], t[(k + 1) % 3]);
                    for &nb in &map[&(a.min(b), a.max(b))] {
                        if nb == ti {
                            continue;
                        }
                        let u = self.triangles[nb];
                        let same_dir = (0..3).any(|m| u[m] == a && u[(m + 1) % 3] == b);
                        if visited[nb] {
                            if same_dir {
                                return Err(Error::DegenerateInput("surface is not orientable".into()));
                            }
                        } else {
                            if same_dir {
                                self.triangles[nb].swap(0, 1);
                            }
                            visited[nb] = true;
                            queue.push_back(nb);
                        }
                    }
                }
            }
        }
        if self.volume() < 0.0 {
            for t in &mut self.triangles {
                t.swap(0, 1);
            }
        }
        Ok(())
    }

    /// Enclosed volume by the divergence theorem.
    pub fn volume(&self) -> f64 {
        let o = Point3::origin();
        self.triangles
            .iter()
            .map(|t| signed_volume(&o, &self.points[t[0]], &self.points[t[1]], &self.points[t[2]]))
            .sum()
    }

    pub fn normal(&self, t: usize) -> Vector3 {
        let [a, b, c] = self.triangles[t];
        (self.points[b] - self.points[a]).cross(&(self.points[c] - self.points[a]))
    }

    /// Edges of an oriented closed manifold surface, sorted by `(min, max)`.
    pub fn edges(&self) -> Result<Vec<SurfaceEdge>> {
        let mut directed: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for (ti, t) in self.triangles.iter().enumerate() {
            for k in 0..3 {
                if directed.insert((t[k], t[(k + 1) % 3]), ti).is_some() {
                    return Err(Error::DegenerateInput(format!(
                        "directed edge ({}, {}) appears twice",
                        t[k],
                        t[(k + 1) % 3]
                    )));
                }
            }
        }
        let mut out = Vec::new();
        for (&(a, b), &left) in &directed {
            if a < b {
                let right = *directed
                    .get(&(b, a))
                    .ok_or_else(|| Error::DegenerateInput(format!("surface edge ({a}, {b}) is a border")))?;
                out.push(SurfaceEdge { a, b, left, right });
            } else if !directed.contains_key(&(b, a)) {
                return Err(Error::DegenerateInput(format!("surface edge ({b}, {a}) is a border")));
            }
        }
        Ok(out)
    }

    fn third_vertex(&self, t: usize, a: usize, b: usize) -> usize {
        *self.triangles[t].iter().find(|&&v| v != a && v != b).unwrap()
    }

    fn edge_angle_and_rate(&self, e: &SurfaceEdge, vel: Option<&[Vector3]>) -> (f64, f64) {
        let c = self.third_vertex(e.left, e.a, e.b);
        let d = self.third_vertex(e.right, e.a, e.b);
        let p = &self.points;
        let ev = p[e.b] - p[e.a];
        let cv = p[c] - p[e.a];
        let dv = p[d] - p[e.a];
        let zero = Vector3::zeros();
        let (de, dc, dd) = match vel {
            Some(v) => (v[e.b] - v[e.a], v[c] - v[e.a], v[d] - v[e.a]),
            None => (zero, zero, zero),
        };
        let (x, y, dx, dy) = cross_dot_derivative(ev, cv, dv, de, dc, dd);
        // The solid lies on the negative rotation side of the left face.
        let phi = y.atan2(x);
        let alpha = if phi < 0.0 { -phi } else { 2.0 * std::f64::consts::PI - phi };
        let dphi = (x * dy - y * dx) / (x * x + y * y);
        (alpha, -dphi)
    }

    /// Interior dihedral angle at every edge, in `(0, 2π)`, in [`Self::edges`] order.
    pub fn dihedral_angles(&self) -> Result<Vec<f64>> {
        let edges = self.edges()?;
        Ok(edges.iter().map(|e| self.edge_angle_and_rate(e, None).0).collect())
    }

    /// First-order rate of change of each dihedral angle under the vertex
    /// velocity field `vel`, in [`Self::edges`] order.
    pub fn dihedral_rates(&self, vel: &[Vector3]) -> Result<Vec<f64>> {
        if vel.len() != self.points.len() {
            return Err(Error::IndexMismatch { expected: self.points.len(), got: vel.len() });
        }
        let edges = self.edges()?;
        Ok(edges.iter().map(|e| self.edge_angle_and_rate(e, Some(vel)).1).collect())
    }

    /// Schläfli sum `Σ l_e dα_e` over all edges under the velocity field
    /// `vel`, returned together with `Σ l_e`.
    pub fn schlafli_residual(&self, vel: &[Vector3]) -> Result<(f64, f64)> {
        let rates = self.dihedral_rates(vel)?;
        let edges = self.edges()?;
        let mut sum = 0.0;
        let mut total = 0.0;
        for (e, r) in edges.iter().zip(rates) {
            let l = (self.points[e.b] - self.points[e.a]).norm();
            sum += l * r;
            total += l;
        }
        Ok((sum.abs(), total))
    }

    pub fn diameter(&self) -> f64 {
        diameter(&self.points)
    }

    /// True when every vertex lies on the inner side of (or on) every
    /// triangle plane, within `rel_tol * diameter`.
    pub fn is_convex(&self, rel_tol: f64) -> bool {
        let tol = rel_tol * self.diameter();
        (0..self.triangles.len()).all(|t| {
            let n = self.normal(t);
            let nn = n.norm();
            if nn == 0.0 {
                return false;
            }
            let a = self.points[self.triangles[t][0]];
            self.points.iter().all(|p| (p - a).dot(&n) / nn <= tol)
        })
    }

    /// Groups edge-adjacent triangles lying in a common plane (within
    /// `rel_tol * diameter`) into planar faces. Returns, per triangle, the
    /// index of its face, and the number of faces.
    pub fn planar_faces(&self, rel_tol: f64) -> (Vec<usize>, usize) {
        let tol = rel_tol * self.diameter();
        let n = self.triangles.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        let coplanar = |s: &Self, t: usize, u: usize| {
            let nt = s.normal(t);
            let nu = s.normal(u);
            if nt.dot(&nu) <= 0.0 {
                return false;
            }
            let at = s.points[s.triangles[t][0]];
            let au = s.points[s.triangles[u][0]];
            let ntn = nt.normalize();
            let nun = nu.normalize();
            s.triangles[u].iter().all(|&v| (s.points[v] - at).dot(&ntn).abs() <= tol)
                && s.triangles[t].iter().all(|&v| (s.points[v] - au).dot(&nun).abs() <= tol)
        };
        for (_, ts) in self.undirected_edge_map() {
            for i in 0..ts.len() {
                for j in i + 1..ts.len() {
                    if coplanar(self, ts[i], ts[j]) {
                        let (ri, rj) = (find(&mut parent, ts[i]), find(&mut parent, ts[j]));
                        if ri != rj {
                            parent[ri.max(rj)] = ri.min(rj);
                        }
                    }
                }
            }
        }
        let mut label = vec![usize::MAX; n];
        let mut out = vec![0; n];
        let mut count = 0;
        for t in 0..n {
            let r = find(&mut parent, t);
            if label[r] == usize::MAX {
                label[r] = count;
                count += 1;
            }
            out[t] = label[r];
        }
        (out, count)
    }

    /// Drops points not used by any triangle. Returns the compacted surface
    /// and, per new index, the original point index.
    pub fn compacted(&self) -> (ClosedSurface, Vec<usize>) {
        let mut used: Vec<usize> = self.triangles.iter().flatten().copied().collect();
        used.sort_unstable();
        used.dedup();
        let mut remap = vec![usize::MAX; self.points.len()];
        for (new, &old) in used.iter().enumerate() {
            remap[old] = new;
        }
        let s = ClosedSurface {
            points: used.iter().map(|&i| self.points[i]).collect(),
            triangles: self.triangles.iter().map(|t| t.map(|v| remap[v])).collect(),
        };
        (s, used)
    }

    /// Unique undirected edges as sorted pairs.
    pub fn edge_pairs(&self) -> Vec<(usize, usize)> {
        self.undirected_edge_map().into_keys().collect()
    }
}
