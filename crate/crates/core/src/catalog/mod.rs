//! Built-in polyhedra and triangulations, the twisted octahedra `Oct_θ`,
//! and random generators for convex polyhedra and their triangulations.

mod oct;
mod random;

pub use oct::{
    a0_sweep, classify_tet, codecomposability_inequality_check, oct_section_area, oct_sections, oct_theta,
    oct_theta_points, theta_grid, CodecomposabilityCheck, OctSection, SplitCase, TetInequality, OCT_TRIANGLES,
    THETA_MAX,
};
pub use random::{random_cone_triangulation, random_convex_surface, random_move, random_refinement, RefinementKind, MIN_SHAPE};

use std::collections::BTreeMap;

use serde::Serialize;

use crate::complex::{cone_triangulation, edge_key, Triangulation3};
use crate::error::{Error, Result};
use crate::geometry::{convex_hull, ClosedSurface, Point3};
use crate::linalg::Signature;
use crate::tol;

/// Properties an entry is expected to have. They are recomputed by the
/// pipeline and compared, never used as inputs.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Expected {
    pub rigid: Option<bool>,
    pub convex: bool,
    pub weakly_convex: bool,
    pub m: Option<usize>,
    pub k: Option<usize>,
    pub n: Option<usize>,
    pub signature: Option<Signature>,
    /// Dimension of the flex space of the boundary framework.
    pub flex_dim: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: String,
    /// Boundary triangulation, oriented outward.
    pub boundary: ClosedSurface,
    /// Planar faces of the polyhedron as vertex cycles.
    pub faces: Vec<Vec<usize>>,
    pub triangulation: Option<Triangulation3>,
    pub expected: Expected,
}

/// Serializable view of an entry.
#[derive(Debug, Clone, Serialize)]
pub struct EntryDump<'a> {
    pub name: &'a str,
    pub vertices: Vec<[f64; 3]>,
    pub faces: &'a [Vec<usize>],
    pub boundary_triangles: &'a [[usize; 3]],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tets: Option<&'a [[usize; 4]]>,
    pub expected: &'a Expected,
}

impl CatalogEntry {
    pub fn dump(&self) -> EntryDump<'_> {
        EntryDump {
            name: &self.name,
            vertices: self.boundary.points.iter().map(|p| [p.x, p.y, p.z]).collect(),
            faces: &self.faces,
            boundary_triangles: &self.boundary.triangles,
            tets: self.triangulation.as_ref().map(|t| t.tets.as_slice()),
            expected: &self.expected,
        }
    }
}

pub const NAMES: [&str; 8] = [
    "regular-tetrahedron",
    "cube-5tet",
    "cube-6tet",
    "octahedron-cone",
    "jessen-icosahedron",
    "wunderlich-octahedron",
    "oct-theta(θ)",
    "flat-vertex-sphere",
];

/// Parses `oct-theta(x)`, `oct-theta:x` or bare `oct-theta` (θ = 0).
fn parse_oct_theta(name: &str) -> Option<Result<f64>> {
    let rest = name.strip_prefix("oct-theta")?;
    let arg = if rest.is_empty() {
        return Some(Ok(0.0));
    } else if let Some(r) = rest.strip_prefix(':') {
        r
    } else if let Some(r) = rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
        r
    } else {
        return Some(Err(Error::UnknownName(name.to_string())));
    };
    Some(arg.trim().parse::<f64>().map_err(|_| Error::UnknownName(name.to_string())))
}

pub fn builtin(name: &str) -> Result<CatalogEntry> {
    if let Some(theta) = parse_oct_theta(name) {
        let theta = theta?;
        let mut e = oct_theta_entry(theta)?;
        e.name = name.to_string();
        return Ok(e);
    }
    match name {
        "regular-tetrahedron" => regular_tetrahedron(),
        "cube-5tet" => cube_5tet(),
        "cube-6tet" => cube_6tet(),
        "octahedron-cone" => octahedron_cone(),
        "jessen-icosahedron" => jessen_icosahedron(),
        "wunderlich-octahedron" => {
            let mut e = oct_theta_entry(std::f64::consts::FRAC_PI_2)?;
            e.name = name.to_string();
            Ok(e)
        }
        "flat-vertex-sphere" => flat_vertex_sphere(),
        _ => Err(Error::UnknownName(name.to_string())),
    }
}

/// Every entry, with `Oct_θ` at θ = 0.
pub fn all() -> Vec<CatalogEntry> {
    NAMES
        .iter()
        .map(|n| if n.starts_with("oct-theta") { builtin("oct-theta(0)") } else { builtin(n) })
        .collect::<Result<_>>()
        .expect("built-in entries are valid")
}

fn weakly_convex(points: &[Point3]) -> bool {
    convex_hull(points).map_or(false, |h| h.vertices.len() == points.len())
}

fn from_tets(
    name: &str,
    points: Vec<Point3>,
    tets: Vec<[usize; 4]>,
    faces: Vec<Vec<usize>>,
    mut expected: Expected,
) -> Result<CatalogEntry> {
    let t = Triangulation3::new(points, tets, Some(faces.clone()))?;
    let mut boundary = t.boundary_surface()?;
    boundary.orient_outward()?;
    expected.convex = boundary.is_convex(tol::FLAT_VERTEX);
    expected.weakly_convex = weakly_convex(&boundary.points);
    Ok(CatalogEntry { name: name.to_string(), boundary, faces, triangulation: Some(t), expected })
}

fn cube_points() -> Vec<Point3> {
    (0..8).map(|i| Point3::new((i & 1) as f64, ((i >> 1) & 1) as f64, ((i >> 2) & 1) as f64)).collect()
}

fn cube_faces() -> Vec<Vec<usize>> {
    vec![vec![0, 2, 6, 4], vec![1, 3, 7, 5], vec![0, 1, 5, 4], vec![2, 3, 7, 6], vec![0, 1, 3, 2], vec![4, 5, 7, 6]]
}

fn regular_tetrahedron() -> Result<CatalogEntry> {
    let p = vec![
        Point3::new(1.0, 1.0, 1.0),
        Point3::new(1.0, -1.0, -1.0),
        Point3::new(-1.0, 1.0, -1.0),
        Point3::new(-1.0, -1.0, 1.0),
    ];
    let faces = vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]];
    let expected = Expected {
        rigid: Some(true),
        m: Some(0),
        k: Some(0),
        n: Some(0),
        signature: Some(Signature::new(0, 0, 0)),
        flex_dim: Some(6),
        ..Default::default()
    };
    from_tets("regular-tetrahedron", p, vec![[0, 1, 2, 3]], faces, expected)
}

/// Four corner tets around the regular tet on the even corners.
fn cube_5tet() -> Result<CatalogEntry> {
    let tets = vec![[0, 3, 5, 6], [1, 0, 3, 5], [2, 0, 3, 6], [4, 0, 5, 6], [7, 3, 5, 6]];
    let expected = Expected {
        rigid: Some(true),
        m: Some(0),
        k: Some(0),
        n: Some(0),
        signature: Some(Signature::new(0, 0, 0)),
        flex_dim: Some(6),
        ..Default::default()
    };
    from_tets("cube-5tet", cube_points(), tets, cube_faces(), expected)
}

/// Six tets around the main diagonal from corner 0 to corner 7.
fn cube_6tet() -> Result<CatalogEntry> {
    let mut tets = Vec::new();
    for (i, j) in [(0, 1), (1, 2), (2, 0), (1, 0), (2, 1), (0, 2)] {
        tets.push([0, 1 << i, (1 << i) | (1 << j), 7]);
    }
    let expected = Expected {
        rigid: Some(true),
        m: Some(0),
        k: Some(0),
        n: Some(1),
        signature: Some(Signature::new(0, 0, 1)),
        flex_dim: Some(6),
        ..Default::default()
    };
    from_tets("cube-6tet", cube_points(), tets, cube_faces(), expected)
}

/// Vertices `±e_x, ±e_y, ±e_z` in that order.
fn octahedron_points() -> Vec<Point3> {
    let mut p = Vec::new();
    for axis in 0..3 {
        for s in [1.0, -1.0] {
            let mut c = [0.0; 3];
            c[axis] = s;
            p.push(Point3::new(c[0], c[1], c[2]));
        }
    }
    p
}

fn octahedron_triangles() -> Vec<[usize; 3]> {
    let mut t = Vec::new();
    for x in [0, 1] {
        for y in [2, 3] {
            for z in [4, 5] {
                t.push([x, y, z]);
            }
        }
    }
    t
}

fn octahedron_cone() -> Result<CatalogEntry> {
    let s = ClosedSurface::new_oriented(octahedron_points(), octahedron_triangles())?;
    let faces: Vec<Vec<usize>> = s.triangles.iter().map(|t| t.to_vec()).collect();
    let t = cone_triangulation(&s, 0, Some(faces))?;
    let expected = Expected {
        rigid: Some(true),
        m: Some(0),
        k: Some(0),
        n: Some(1),
        signature: Some(Signature::new(0, 0, 1)),
        flex_dim: Some(6),
        ..Default::default()
    };
    from_tets("octahedron-cone", t.vertices, t.tets, t.faces.unwrap(), expected)
}

/// Octahedron with an extra vertex at the centroid of the face
/// `(+e_x, +e_y, +e_z)`, coned from `−e_z`.
fn flat_vertex_sphere() -> Result<CatalogEntry> {
    let mut p = octahedron_points();
    p.push(Point3::new(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0));
    let faces: Vec<Vec<usize>> = octahedron_triangles().iter().map(|t| t.to_vec()).collect();
    let mut tris: Vec<[usize; 3]> = octahedron_triangles().into_iter().filter(|t| *t != [0, 2, 4]).collect();
    tris.extend([[0, 2, 6], [2, 4, 6], [4, 0, 6]]);
    let s = ClosedSurface::new_oriented(p, tris)?;
    let t = cone_triangulation(&s, 5, None)?;
    let expected = Expected {
        rigid: Some(true),
        m: Some(0),
        k: Some(1),
        n: Some(2),
        signature: Some(Signature::new(0, 1, 1)),
        flex_dim: Some(7),
        ..Default::default()
    };
    from_tets("flat-vertex-sphere", t.vertices, t.tets, faces, expected)
}

/// Cyclic permutations of `(0, ±1, ±c)`.
fn icosahedral_points(c: f64) -> Vec<Point3> {
    let mut p = Vec::new();
    for s1 in [1.0, -1.0] {
        for s2 in [c, -c] {
            p.push(Point3::new(0.0, s1, s2));
            p.push(Point3::new(s2, 0.0, s1));
            p.push(Point3::new(s1, s2, 0.0));
        }
    }
    p
}

/// Jessen's orthogonal icosahedron: the icosahedron combinatorics on the
/// cyclic permutations of `(0, ±1, ±2)`, with the six edges joining
/// `(0, 1, b)` to `(0, −1, b)` (and cyclic images) flipped inward.
fn jessen_icosahedron() -> Result<CatalogEntry> {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let ico = convex_hull(&icosahedral_points(phi))?;
    let points = icosahedral_points(2.0);
    let mut tris = ico.faces.clone();
    let flipped = |a: usize, b: usize| {
        let (p, q) = (points[a], points[b]);
        let d = p - q;
        // Differ only in the sign of the unit coordinate.
        d.iter().filter(|x| x.abs() > 1e-12).count() == 1 && d.norm() == 2.0
    };
    let mut by_edge: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (i, t) in tris.iter().enumerate() {
        for k in 0..3 {
            by_edge.entry(edge_key(t[k], t[(k + 1) % 3])).or_default().push(i);
        }
    }
    for (&(a, b), ts) in &by_edge {
        if !flipped(a, b) {
            continue;
        }
        let c = *tris[ts[0]].iter().find(|&&v| v != a && v != b).unwrap();
        let d = *tris[ts[1]].iter().find(|&&v| v != a && v != b).unwrap();
        tris[ts[0]] = [c, d, a];
        tris[ts[1]] = [c, d, b];
    }
    let boundary = ClosedSurface::new_oriented(points, tris)?;
    let faces = boundary.triangles.iter().map(|t| t.to_vec()).collect();
    let weakly = weakly_convex(&boundary.points);
    Ok(CatalogEntry {
        name: "jessen-icosahedron".into(),
        boundary,
        faces,
        triangulation: None,
        expected: Expected { rigid: Some(false), convex: false, weakly_convex: weakly, ..Default::default() },
    })
}

fn oct_theta_entry(theta: f64) -> Result<CatalogEntry> {
    let boundary = oct_theta(theta)?;
    let faces: Vec<Vec<usize>> = boundary.triangles.iter().map(|t| t.to_vec()).collect();
    let convex = boundary.is_convex(tol::FLAT_VERTEX);
    let weakly = weakly_convex(&boundary.points);
    let name = format!("oct-theta({theta})");
    if convex {
        let t = cone_triangulation(&boundary, 0, Some(faces.clone()))?;
        let n = t.topology().interior_edges.len();
        let expected = Expected {
            rigid: Some(true),
            m: Some(0),
            k: Some(0),
            n: Some(n),
            signature: Some(Signature::new(0, 0, n)),
            flex_dim: Some(6),
            ..Default::default()
        };
        return from_tets(&name, t.vertices, t.tets, faces, expected);
    }
    let flexible = (theta.abs() - std::f64::consts::FRAC_PI_2).abs() < 1e-12;
    Ok(CatalogEntry {
        name,
        boundary,
        faces,
        triangulation: None,
        expected: Expected {
            rigid: flexible.then_some(false),
            convex: false,
            weakly_convex: weakly,
            ..Default::default()
        },
    })
}
