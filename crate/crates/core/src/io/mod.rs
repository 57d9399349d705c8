//! File formats: the JSON triangulation schema, OFF boundaries and JSON
//! move scripts.
//!
//! JSON triangulation:
//!
//! ```text
//! {"vertices": [[x, y, z], ...], "tets": [[a, b, c, d], ...], "faces": [[i, j, k, ...], ...]}
//! ```
//!
//! Indices are 0-based; `faces` is optional and lists the planar faces of the
//! reference polyhedron as vertex cycles.

use std::fmt::Write as _;

use crate::complex::Triangulation3;
use crate::error::{Error, Result};
use crate::geometry::{ClosedSurface, Point3};
use crate::moves::MoveStep;

fn json_error(e: serde_json::Error) -> Error {
    Error::Parse { line: e.line(), msg: e.to_string() }
}

pub fn parse_triangulation_json(text: &str) -> Result<Triangulation3> {
    let t: Triangulation3 = serde_json::from_str(text).map_err(json_error)?;
    Triangulation3::new(t.vertices, t.tets, t.faces)
}

pub fn triangulation_to_json(t: &Triangulation3) -> String {
    serde_json::to_string_pretty(t).expect("triangulations serialize")
}

pub fn parse_script(text: &str) -> Result<Vec<MoveStep>> {
    serde_json::from_str(text).map_err(json_error)
}

/// A polyhedron read from an OFF file.
#[derive(Debug, Clone, PartialEq)]
pub struct OffModel {
    pub points: Vec<Point3>,
    pub faces: Vec<Vec<usize>>,
}

impl OffModel {
    /// Boundary triangulation by fanning each face from its first vertex.
    /// Faces are expected to be convex polygons.
    pub fn surface(&self) -> Result<ClosedSurface> {
        let mut tris = Vec::new();
        for f in &self.faces {
            for i in 1..f.len() - 1 {
                tris.push([f[0], f[i], f[i + 1]]);
            }
        }
        ClosedSurface::new_oriented(self.points.clone(), tris)
    }
}

/// Lines with content, stripped of `#` comments, with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

fn parse_num<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| Error::Parse { line, msg: format!("missing {what}") })?;
    tok.parse().map_err(|_| Error::Parse { line, msg: format!("bad {what} `{tok}`") })
}

pub fn parse_off(text: &str) -> Result<OffModel> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "empty file".into() })?;
    let counts = match header.strip_prefix("OFF") {
        Some(rest) if rest.trim().is_empty() => {
            lines.next().ok_or(Error::Parse { line: hline, msg: "missing counts line".into() })?
        }
        Some(rest) => (hline, rest.trim()),
        None => return Err(Error::Parse { line: hline, msg: "expected `OFF` header".into() }),
    };
    let mut tok = counts.1.split_whitespace();
    let nv: usize = parse_num(tok.next(), counts.0, "vertex count")?;
    let nf: usize = parse_num(tok.next(), counts.0, "face count")?;
    let mut points = Vec::with_capacity(nv);
    for i in 0..nv {
        let (ln, l) = lines.next().ok_or(Error::Parse { line: counts.0, msg: format!("missing vertex {i}") })?;
        let mut t = l.split_whitespace();
        let x: f64 = parse_num(t.next(), ln, "coordinate")?;
        let y: f64 = parse_num(t.next(), ln, "coordinate")?;
        let z: f64 = parse_num(t.next(), ln, "coordinate")?;
        if !(x.is_finite() && y.is_finite() && z.is_finite()) {
            return Err(Error::Parse { line: ln, msg: "non-finite coordinate".into() });
        }
        points.push(Point3::new(x, y, z));
    }
    let mut faces = Vec::with_capacity(nf);
    for i in 0..nf {
        let (ln, l) = lines.next().ok_or(Error::Parse { line: counts.0, msg: format!("missing face {i}") })?;
        let mut t = l.split_whitespace();
        let k: usize = parse_num(t.next(), ln, "face size")?;
        if k < 3 {
            return Err(Error::Parse { line: ln, msg: format!("face with {k} vertices") });
        }
        let mut f = Vec::with_capacity(k);
        for _ in 0..k {
            let v: usize = parse_num(t.next(), ln, "vertex index")?;
            if v >= nv {
                return Err(Error::Parse { line: ln, msg: format!("vertex index {v} out of range") });
            }
            f.push(v);
        }
        faces.push(f);
    }
    Ok(OffModel { points, faces })
}

pub fn write_off(points: &[Point3], faces: &[Vec<usize>]) -> String {
    let mut s = String::new();
    writeln!(s, "OFF").unwrap();
    writeln!(s, "{} {} 0", points.len(), faces.len()).unwrap();
    for p in points {
        writeln!(s, "{:?} {:?} {:?}", p.x, p.y, p.z).unwrap();
    }
    for f in faces {
        let idx: Vec<String> = f.iter().map(|v| v.to_string()).collect();
        writeln!(s, "{} {}", f.len(), idx.join(" ")).unwrap();
    }
    s
}

/// Input model: a boundary surface (OFF) or a tet triangulation (JSON).
#[derive(Debug, Clone)]
pub enum Model {
    Boundary(OffModel),
    Tets(Triangulation3),
}

/// Detects the format from the first non-blank characters.
pub fn parse_model(text: &str) -> Result<Model> {
    let head = text.trim_start();
    if head.starts_with("OFF") {
        parse_off(text).map(Model::Boundary)
    } else {
        parse_triangulation_json(text).map(Model::Tets)
    }
}
