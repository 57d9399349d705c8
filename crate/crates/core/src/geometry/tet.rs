//! Tetrahedron geometry from its six edge lengths.

use super::{tet_dihedral_from_points, Point3};
use crate::error::{Error, Result};
use crate::tol;

/// Vertex pairs of a tetrahedron in the fixed order `01, 02, 03, 12, 13, 23`.
pub const TET_EDGES: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Position of the pair `(i, j)` in [`TET_EDGES`].
pub fn edge_slot(i: usize, j: usize) -> usize {
    let (a, b) = if i < j { (i, j) } else { (j, i) };
    match (a, b) {
        (0, 1) => 0,
        (0, 2) => 1,
        (0, 3) => 2,
        (1, 2) => 3,
        (1, 3) => 4,
        (2, 3) => 5,
        _ => panic!("invalid tetrahedron vertex pair ({i}, {j})"),
    }
}

/// The six edge lengths of a tetrahedron, indexed as in [`TET_EDGES`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TetLengths(pub [f64; 6]);

impl TetLengths {
    pub fn new(l: [f64; 6]) -> Self {
        TetLengths(l)
    }

    pub fn from_points(p: &[Point3; 4]) -> Self {
        let mut l = [0.0; 6];
        for (s, &(i, j)) in TET_EDGES.iter().enumerate() {
            l[s] = (p[i] - p[j]).norm();
        }
        TetLengths(l)
    }

    pub fn length(&self, i: usize, j: usize) -> f64 {
        self.0[edge_slot(i, j)]
    }

    pub fn longest(&self) -> f64 {
        self.0.iter().copied().fold(0.0, f64::max)
    }

    /// Signed Cayley–Menger value `288 V²`.
    ///
    /// Evaluated as eight times the Gram determinant of the edge vectors at
    /// vertex 0, which equals the bordered 5×5 Cayley–Menger determinant up
    /// to sign convention. A negative value means the lengths are not
    /// realizable in Euclidean space.
    pub fn cayley_menger(&self) -> f64 {
        let sq = |i: usize, j: usize| {
            let l = self.length(i, j);
            l * l
        };
        let mut g = [[0.0; 3]; 3];
        for a in 1..4 {
            for b in 1..4 {
                g[a - 1][b - 1] = if a == b {
                    sq(0, a)
                } else {
                    0.5 * (sq(0, a) + sq(0, b) - sq(a, b))
                };
            }
        }
        let det = g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1])
            - g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0])
            + g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0]);
        8.0 * det
    }

    /// Unsigned volume; zero when the lengths are not realizable.
    pub fn volume(&self) -> f64 {
        (self.cayley_menger().max(0.0) / 288.0).sqrt()
    }

    /// Area of the face opposite vertex `v` (Heron, in Kahan's stable form).
    pub fn face_area(&self, v: usize) -> f64 {
        let f: Vec<usize> = (0..4).filter(|&u| u != v).collect();
        let mut e = [self.length(f[0], f[1]), self.length(f[1], f[2]), self.length(f[0], f[2])];
        e.sort_by(|a, b| b.total_cmp(a));
        let [a, b, c] = e;
        let p = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c));
        0.25 * p.max(0.0).sqrt()
    }

    /// Smallest altitude `3V / (largest face area)`: the distance scale on
    /// which the angles vary.
    pub fn min_altitude(&self) -> f64 {
        let amax = (0..4).map(|v| self.face_area(v)).fold(0.0, f64::max);
        if amax > 0.0 {
            3.0 * self.volume() / amax
        } else {
            0.0
        }
    }

    fn faces_satisfy_triangle_inequality(&self) -> bool {
        const FACES: [[usize; 3]; 4] = [[1, 2, 3], [0, 2, 3], [0, 1, 3], [0, 1, 2]];
        FACES.iter().all(|f| {
            let a = self.length(f[0], f[1]);
            let b = self.length(f[1], f[2]);
            let c = self.length(f[0], f[2]);
            a < b + c && b < a + c && c < a + b
        })
    }

    /// True when the lengths describe a simplex with volume at least
    /// `DEGENERATE_VOLUME * longest³`.
    pub fn is_nondegenerate(&self) -> bool {
        if self.0.iter().any(|&l| !(l > 0.0) || !l.is_finite()) {
            return false;
        }
        if !self.faces_satisfy_triangle_inequality() {
            return false;
        }
        let cm = self.cayley_menger();
        if !(cm > 0.0) {
            return false;
        }
        let l = self.longest();
        (cm / 288.0).sqrt() >= tol::DEGENERATE_VOLUME * l * l * l
    }

    fn check(&self) -> Result<()> {
        if self.is_nondegenerate() {
            Ok(())
        } else {
            Err(Error::DegenerateSimplex(format!("lengths {:?}", self.0)))
        }
    }

    /// Coordinates realizing the lengths: the largest face lies in `z = 0`
    /// with its longest edge on the x-axis and the fourth vertex at `z > 0`.
    /// Differences of squares are factored to limit cancellation on thin
    /// tetrahedra.
    pub fn embed(&self) -> [Point3; 4] {
        let apex = (0..4).max_by(|&a, &b| self.face_area(a).total_cmp(&self.face_area(b))).unwrap();
        let f: Vec<usize> = (0..4).filter(|&v| v != apex).collect();
        let (o, x, y) = [(f[0], f[1], f[2]), (f[1], f[2], f[0]), (f[0], f[2], f[1])]
            .into_iter()
            .max_by(|p, q| self.length(p.0, p.1).total_cmp(&self.length(q.0, q.1)))
            .unwrap();
        let a = self.length(o, x);
        let (d02, d12) = (self.length(o, y), self.length(x, y));
        let (d03, d13, d23) = (self.length(o, apex), self.length(x, apex), self.length(y, apex));
        let x2 = 0.5 * (a + (d02 - d12) * (d02 + d12) / a);
        let y2 = ((d02 - x2) * (d02 + x2)).max(0.0).sqrt();
        let x3 = 0.5 * (a + (d03 - d13) * (d03 + d13) / a);
        let y3 = (d02 * d02 - 2.0 * x3 * x2 + (d03 - d23) * (d03 + d23)) / (2.0 * y2);
        let r = x3.hypot(y3);
        let z3 = ((d03 - r) * (d03 + r)).max(0.0).sqrt();
        let mut p = [Point3::origin(); 4];
        p[x] = Point3::new(a, 0.0, 0.0);
        p[y] = Point3::new(x2, y2, 0.0);
        p[apex] = Point3::new(x3, y3, z3);
        p
    }

    /// Interior dihedral angle at edge slot `edge` (see [`TET_EDGES`]).
    pub fn dihedral_angle(&self, edge: usize) -> Result<f64> {
        Ok(self.dihedral_angles()?[edge])
    }

    /// All six dihedral angles, in [`TET_EDGES`] order.
    pub fn dihedral_angles(&self) -> Result<[f64; 6]> {
        self.check()?;
        let p = self.embed();
        let mut out = [0.0; 6];
        for (s, &(i, j)) in TET_EDGES.iter().enumerate() {
            out[s] = tet_dihedral_from_points(&p, i, j);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::signed_volume;

    #[test]
    fn altitude_of_right_corner() {
        let p = [
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(1.0, 0.0, 0.0),
            Point3::new(0.0, 1.0, 0.0),
            Point3::new(0.0, 0.0, 0.25),
        ];
        let l = TetLengths::from_points(&p);
        assert!((l.face_area(3) - 0.5).abs() < 1e-15);
        // The slanted face (1,0,0), (0,1,0), (0,0,1/4) is the largest.
        let slanted = 0.5 * 1.125f64.sqrt();
        assert!((l.face_area(0) - slanted).abs() < 1e-15);
        assert!((l.min_altitude() - 0.125 / slanted).abs() < 1e-14);
    }

    fn regular() -> TetLengths {
        TetLengths([1.0; 6])
    }

    #[test]
    fn regular_tetrahedron_volume_and_angle() {
        let t = regular();
        let v = t.volume();
        assert!((v - 1.0 / (6.0 * 2f64.sqrt())).abs() < 1e-15);
        for a in t.dihedral_angles().unwrap() {
            assert!((a - (1.0f64 / 3.0).acos()).abs() < 1e-14);
            assert!((a - 1.2309594).abs() < 1e-7);
        }
    }

    #[test]
    fn coplanar_square_is_flat() {
        let s = 2f64.sqrt();
        // Unit square 0-1-2-3 in cyclic order: 01=1, 02=√2, 03=1, 12=1, 13=√2, 23=1.
        let t = TetLengths([1.0, s, 1.0, 1.0, s, 1.0]);
        assert!(t.cayley_menger().abs() < 1e-12);
        assert!(!t.is_nondegenerate());
        assert!(matches!(t.dihedral_angle(0), Err(Error::DegenerateSimplex(_))));
    }

    #[test]
    fn triangle_inequality_violation_rejected() {
        let t = TetLengths([1.0, 1.0, 1.0, 1.0, 1.0, 2.5]);
        assert!(!t.is_nondegenerate());
    }

    #[test]
    fn long_edge_sweep_matches_embedding() {
        // (1,1,1,1,1,l) is realizable only for l < √3; at √3 the four
        // points become a planar rhombus. Vertices 0 and 1 sit symmetric
        // about the plane through 2 and 3.
        let mut prev = None;
        for k in 1..8 {
            let eps = 0.5f64.powi(k + 2);
            let l = 3f64.sqrt() - eps;
            let t = TetLengths([1.0, 1.0, 1.0, 1.0, 1.0, l]);
            let h = (1.0 - l * l / 4.0).sqrt();
            let half = 0.5;
            let x = (h * h - half * half).sqrt();
            let p = [
                Point3::new(0.0, x, half),
                Point3::new(0.0, x, -half),
                Point3::new(-l / 2.0, 0.0, 0.0),
                Point3::new(l / 2.0, 0.0, 0.0),
            ];
            assert!(signed_volume(&p[0], &p[1], &p[2], &p[3]).abs() > 0.0);
            let ang = t.dihedral_angles().unwrap();
            for (s, &(i, j)) in TET_EDGES.iter().enumerate() {
                assert!((ang[s] - tet_dihedral_from_points(&p, i, j)).abs() < 1e-10);
            }
            // The angle at edge 01, opposite the long edge, opens towards π.
            if let Some(p) = prev {
                assert!(ang[0] > p);
            }
            prev = Some(ang[0]);
        }
        assert!(prev.unwrap() > 2.9);
    }
}
