use super::{displace_vertex, find_tet, pachner_1_4, pachner_2_3, pachner_3_2, require_relative_interior, tets_containing, MoveRecord};
use crate::complex::{edge_key, Triangulation3};
use crate::error::{Error, Result};
use crate::geometry::{Point3, Vector3};

const ATTEMPTS: usize = 8;
const DISPLACEMENT_STEPS: usize = 64;

/// Interior point of tet `tet` near the point `p` on its boundary; the
/// weights vary with `attempt` to escape non-generic positions.
fn auxiliary_point(t: &Triangulation3, tet: [usize; 4], p: &Point3, attempt: usize) -> Point3 {
    let a = attempt as f64;
    let w = [1.0, 1.0 + 0.37 * a, 1.0 + 0.11 * a, 1.0 + 0.23 * a];
    let total: f64 = w.iter().sum();
    let c: Vector3 = tet.iter().zip(w).map(|(&v, wi)| t.vertices[v].coords * wi).sum::<Vector3>() / total;
    let delta = 0.2 * 0.5f64.powi(attempt as i32);
    p + (Point3::from(c) - p) * delta
}

fn two_three_on(t: &Triangulation3, x: [usize; 4], y: [usize; 4]) -> Result<(Triangulation3, MoveRecord)> {
    let i = find_tet(t, &x).ok_or_else(|| Error::InvalidMove(format!("missing tet {x:?}")))?;
    let j = find_tet(t, &y).ok_or_else(|| Error::InvalidMove(format!("missing tet {y:?}")))?;
    pachner_2_3(t, i, j)
}

fn triangle_attempt(
    t: &Triangulation3,
    tri: [usize; 3],
    p: Point3,
    attempt: usize,
) -> Result<(Triangulation3, Vec<MoveRecord>)> {
    let tets = tets_containing(t, &tri);
    let (ta, tb) = (t.tets[tets[0]], t.tets[tets[1]]);
    let b = *tb.iter().find(|v| !tri.contains(v)).unwrap();
    let aux = auxiliary_point(t, ta, &p, attempt);
    let (t1, r1) = pachner_1_4(t, tets[0], aux)?;
    let q = t.vertices.len();
    let (t2, r2) = two_three_on(&t1, [q, tri[0], tri[1], tri[2]], [b, tri[0], tri[1], tri[2]])?;
    let (t3, r3) = displace_vertex(&t2, q, p, DISPLACEMENT_STEPS)?;
    Ok((t3, vec![r1, r2, r3]))
}

fn edge_attempt(t: &Triangulation3, a: usize, b: usize, p: Point3, attempt: usize) -> Result<(Triangulation3, Vec<MoveRecord>)> {
    let topo = t.topology();
    let mut link = t.edge_link(&topo, edge_key(a, b))?;
    let n = link.len();
    let first = [a, b, link[n - 1], link[0]];
    let ti = find_tet(t, &first).ok_or_else(|| Error::InvalidMove(format!("edge ({a}, {b}) has an open link")))?;
    let aux = auxiliary_point(t, t.tets[ti], &p, attempt);
    let (mut cur, r) = pachner_1_4(t, ti, aux)?;
    let mut records = vec![r];
    let q = t.vertices.len();

    // Angles of the link vertices around the axis, measured from the
    // auxiliary point's direction.
    let (pa, pb) = (t.vertices[a], t.vertices[b]);
    let axis = (pb - pa).normalize();
    let perp = |x: Point3| {
        let v = x - pa;
        v - axis * v.dot(&axis)
    };
    let u = perp(aux).normalize();
    let w = axis.cross(&u);
    let angle = |v: usize| {
        let d = perp(t.vertices[v]);
        d.dot(&w).atan2(d.dot(&u))
    };
    if angle(link[0]) < 0.0 {
        link.reverse();
    }
    // Now link[0] and link[n-1] bound the wedge containing the auxiliary point.
    let angles: Vec<f64> = link.iter().map(|&v| angle(v)).collect();
    if angles.iter().any(|&x| (std::f64::consts::PI - x.abs()).abs() < 1e-6) {
        return Err(Error::GenericityFailure("the plane through the edge and the new point meets a link vertex".into()));
    }
    let k = angles.iter().position(|&x| x < 0.0).ok_or_else(|| {
        Error::GenericityFailure("auxiliary point is not between consecutive link vertices".into())
    })?;
    // link[..k] lie at angles in (0, π), link[k..] in (−π, 0).
    for i in 0..k.saturating_sub(1) {
        let (t2, r) = two_three_on(&cur, [a, b, q, link[i]], [a, b, link[i], link[i + 1]])?;
        cur = t2;
        records.push(r);
    }
    let mut i = n - 1;
    while i > k {
        let (t2, r) = two_three_on(&cur, [a, b, q, link[i]], [a, b, link[i - 1], link[i]])?;
        cur = t2;
        records.push(r);
        i -= 1;
    }
    let (t3, r) = pachner_3_2(&cur, (a, b))?;
    records.push(r);
    let (t4, r) = displace_vertex(&t3, q, p, DISPLACEMENT_STEPS)?;
    records.push(r);
    Ok((t4, records))
}

/// Realizes the starring of an interior simplex at `p` by Pachner moves and
/// one vertex displacement. Returns the final triangulation and the moves.
pub fn realize_interior_starring(
    t: &Triangulation3,
    cell: &[usize],
    p: Point3,
) -> Result<(Triangulation3, Vec<MoveRecord>)> {
    require_relative_interior(t, cell, &p)?;
    let topo = t.topology();
    match cell.len() {
        4 => {
            let ti = find_tet(t, cell).ok_or_else(|| Error::InvalidMove(format!("no tet {cell:?}")))?;
            let (t2, r) = pachner_1_4(t, ti, p)?;
            Ok((t2, vec![r]))
        }
        3 => {
            let tri = [cell[0], cell[1], cell[2]];
            if tets_containing(t, &tri).len() != 2 {
                return Err(Error::InvalidMove(format!("triangle {tri:?} is not interior")));
            }
            retry(|attempt| triangle_attempt(t, tri, p, attempt))
        }
        2 => {
            if topo.boundary_edges.contains(&edge_key(cell[0], cell[1])) || !topo.edge_tets.contains_key(&edge_key(cell[0], cell[1])) {
                return Err(Error::InvalidMove(format!("edge {cell:?} is not an interior edge")));
            }
            retry(|attempt| edge_attempt(t, cell[0], cell[1], p, attempt))
        }
        _ => Err(Error::InvalidMove(format!("cannot star cell {cell:?}"))),
    }
}

fn retry(f: impl Fn(usize) -> Result<(Triangulation3, Vec<MoveRecord>)>) -> Result<(Triangulation3, Vec<MoveRecord>)> {
    let mut last = None;
    for attempt in 0..ATTEMPTS {
        match f(attempt) {
            Ok(r) => return Ok(r),
            Err(e @ (Error::GenericityFailure(_) | Error::NotConvexBipyramid(_) | Error::InvalidMove(_) | Error::PointNotInterior(_))) => {
                last = Some(e)
            }
            Err(e) => return Err(e),
        }
    }
    Err(Error::GenericityFailure(format!(
        "no generic auxiliary point after {ATTEMPTS} attempts: {}",
        last.map(|e| e.to_string()).unwrap_or_default()
    )))
}
