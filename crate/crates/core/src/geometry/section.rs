//! Horizontal cross-sections `{z = t}` of closed surfaces and tetrahedra.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{ClosedSurface, Point3};
use crate::error::{Error, Result};
use crate::tol;

/// Side towards which a plane passing through vertices was shifted
/// (infinitesimally) to evaluate the section.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SectionNudge {
    /// Limit of sections at `z = t - ε`.
    Below,
    /// Limit of sections at `z = t + ε`.
    Above,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlaneSection {
    pub t: f64,
    /// Closed polygon loops lying in the plane, counterclockwise around the
    /// solid when seen from `+z`.
    pub polygons: Vec<Vec<Point3>>,
    pub area: f64,
    pub nudge: Option<SectionNudge>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum CrossKey {
    Vertex(usize),
    Edge(usize, usize),
}

struct Segment {
    from: (CrossKey, Point3),
    to: (CrossKey, Point3),
}

fn shoelace(poly: &[Point3]) -> f64 {
    let n = poly.len();
    let mut s = 0.0;
    for i in 0..n {
        let (p, q) = (poly[i], poly[(i + 1) % n]);
        s += p.x * q.y - p.y * q.x;
    }
    0.5 * s
}

/// Sections the surface treating vertices with `z > t` (or on the plane when
/// `on_plane_above`) as above the plane.
fn oriented_segments(s: &ClosedSurface, t: f64, hit: f64, on_plane_above: bool) -> Vec<Segment> {
    let on_plane = |v: usize| (s.points[v].z - t).abs() <= hit;
    let above = |v: usize| {
        if on_plane(v) {
            on_plane_above
        } else {
            s.points[v].z > t
        }
    };
    let crossing = |u: usize, w: usize| -> (CrossKey, Point3) {
        let (pu, pw) = (s.points[u], s.points[w]);
        if on_plane(u) {
            return (CrossKey::Vertex(u), Point3::new(pu.x, pu.y, t));
        }
        if on_plane(w) {
            return (CrossKey::Vertex(w), Point3::new(pw.x, pw.y, t));
        }
        let r = (t - pu.z) / (pw.z - pu.z);
        let p = pu + (pw - pu) * r;
        (CrossKey::Edge(u.min(w), u.max(w)), Point3::new(p.x, p.y, t))
    };
    let mut out = Vec::new();
    for (ti, tri) in s.triangles.iter().enumerate() {
        let flags: Vec<bool> = tri.iter().map(|&v| above(v)).collect();
        let n_above = flags.iter().filter(|&&f| f).count();
        if n_above == 0 || n_above == 3 {
            continue;
        }
        let mut pts = Vec::with_capacity(2);
        for k in 0..3 {
            let (u, w) = (tri[k], tri[(k + 1) % 3]);
            if flags[k] != flags[(k + 1) % 3] {
                pts.push(crossing(u, w));
            }
        }
        if pts[0].0 == pts[1].0 {
            continue;
        }
        let n = s.normal(ti);
        // Boundary runs counterclockwise when the outward normal points to its right.
        let (dx, dy) = (-n.y, n.x);
        let (p, q) = (pts[0], pts[1]);
        let along = (q.1.x - p.1.x) * dx + (q.1.y - p.1.y) * dy;
        let seg = if along >= 0.0 { Segment { from: p, to: q } } else { Segment { from: q, to: p } };
        out.push(seg);
    }
    out
}

fn chain_loops(segs: &[Segment]) -> Vec<Vec<Point3>> {
    let mut by_start: BTreeMap<CrossKey, Vec<usize>> = BTreeMap::new();
    for (i, s) in segs.iter().enumerate() {
        by_start.entry(s.from.0).or_default().push(i);
    }
    let mut used = vec![false; segs.len()];
    let mut loops = Vec::new();
    for start in 0..segs.len() {
        if used[start] {
            continue;
        }
        let mut poly = Vec::new();
        let mut cur = start;
        loop {
            used[cur] = true;
            poly.push(segs[cur].from.1);
            let next = by_start
                .get(&segs[cur].to.0)
                .and_then(|c| c.iter().copied().find(|&j| !used[j]));
            match next {
                Some(j) => cur = j,
                None => break,
            }
        }
        loops.push(poly);
    }
    loops
}

fn section_with(s: &ClosedSurface, t: f64, hit: f64, on_plane_above: bool) -> (Vec<Vec<Point3>>, f64) {
    let segs = oriented_segments(s, t, hit, on_plane_above);
    let area: f64 = segs
        .iter()
        .map(|g| 0.5 * (g.from.1.x * g.to.1.y - g.from.1.y * g.to.1.x))
        .sum();
    (chain_loops(&segs), area)
}

/// Cross-section of the solid bounded by an outward-oriented closed surface
/// with the plane `z = t`.
///
/// When the plane passes through vertices, the section is evaluated in the
/// limit from both sides and the larger one is reported; `nudge` records the
/// side. This reproduces the area of a horizontal face lying in the plane.
pub fn plane_section_surface(s: &ClosedSurface, t: f64) -> Result<PlaneSection> {
    let (zmin, zmax) = s
        .points
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p.z), hi.max(p.z)));
    let hit = tol::SECTION_VERTEX_HIT * (zmax - zmin).max(f64::MIN_POSITIVE);
    if t < zmin - hit || t > zmax + hit {
        return Err(Error::EmptySection(t));
    }
    let touches = s.points.iter().any(|p| (p.z - t).abs() <= hit);
    let (polygons, area, nudge) = if touches {
        let (pb, ab) = section_with(s, t, hit, true);
        let (pa, aa) = section_with(s, t, hit, false);
        if ab >= aa {
            (pb, ab, Some(SectionNudge::Below))
        } else {
            (pa, aa, Some(SectionNudge::Above))
        }
    } else {
        let (p, a) = section_with(s, t, hit, false);
        (p, a, None)
    };
    if polygons.is_empty() || area <= 0.0 {
        return Err(Error::EmptySection(t));
    }
    Ok(PlaneSection { t, polygons, area, nudge })
}

fn convex_polygon_2d(mut pts: Vec<Point3>) -> Vec<Point3> {
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup_by(|a, b| a.x == b.x && a.y == b.y);
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: &Point3, a: &Point3, b: &Point3| (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
    let mut lower: Vec<Point3> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(*p);
    }
    let mut upper: Vec<Point3> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(*p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Polygon `tet ∩ {z = t}` as a closed set (vertices on the plane included).
pub fn tet_section_polygon(tet: &[Point3; 4], t: f64) -> Vec<Point3> {
    let mut pts = Vec::new();
    for p in tet {
        if p.z == t {
            pts.push(*p);
        }
    }
    for i in 0..4 {
        for j in i + 1..4 {
            let (a, b) = (tet[i], tet[j]);
            if (a.z < t && b.z > t) || (a.z > t && b.z < t) {
                let r = (t - a.z) / (b.z - a.z);
                let p = a + (b - a) * r;
                pts.push(Point3::new(p.x, p.y, t));
            }
        }
    }
    convex_polygon_2d(pts)
}

/// Area of `tet ∩ {z = t}`; piecewise quadratic in `t`.
pub fn tet_section_area(tet: &[Point3; 4], t: f64) -> f64 {
    let poly = tet_section_polygon(tet, t);
    if poly.len() < 3 {
        0.0
    } else {
        shoelace(&poly).abs()
    }
}

/// Section of a tetrahedron list: one polygon per intersected tet.
pub fn plane_section_tets(points: &[Point3], tets: &[[usize; 4]], t: f64) -> Result<PlaneSection> {
    let mut polygons = Vec::new();
    let mut area = 0.0;
    for tet in tets {
        let p = [points[tet[0]], points[tet[1]], points[tet[2]], points[tet[3]]];
        let poly = tet_section_polygon(&p, t);
        if poly.len() >= 3 {
            area += shoelace(&poly).abs();
            polygons.push(poly);
        }
    }
    if polygons.is_empty() {
        return Err(Error::EmptySection(t));
    }
    Ok(PlaneSection { t, polygons, area, nudge: None })
}
