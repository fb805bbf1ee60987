//! Ear-clipping triangulation of simple polygons.

use super::cell::signed_area;
use super::{GeometryError, Vec2};

fn segments_cross(a: Vec2, b: Vec2, c: Vec2, d: Vec2) -> bool {
    let o = |p: Vec2, q: Vec2, r: Vec2| (q - p).cross(r - p);
    let (d1, d2) = (o(a, b, c), o(a, b, d));
    let (d3, d4) = (o(c, d, a), o(c, d, b));
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    let on = |p: Vec2, q: Vec2, r: Vec2| {
        o(p, q, r) == 0.0
            && r.x >= p.x.min(q.x)
            && r.x <= p.x.max(q.x)
            && r.y >= p.y.min(q.y)
            && r.y <= p.y.max(q.y)
    };
    on(a, b, c) || on(a, b, d) || on(c, d, a) || on(c, d, b)
}

/// Rejects rings whose non-adjacent edges touch or cross.
pub fn check_simple(ring: &[Vec2]) -> Result<(), GeometryError> {
    let n = ring.len();
    if n < 3 {
        return Err(GeometryError::InvalidRing(format!("ring has {n} vertices")));
    }
    if ring.iter().any(|p| !p.is_finite()) {
        return Err(GeometryError::InvalidRing("non-finite coordinate".into()));
    }
    for i in 0..n {
        let (a, b) = (ring[i], ring[(i + 1) % n]);
        if a == b {
            return Err(GeometryError::InvalidRing(format!("repeated vertex at index {i}")));
        }
        for j in i + 1..n {
            if j == i + 1 || (i == 0 && j == n - 1) {
                continue;
            }
            let (c, d) = (ring[j], ring[(j + 1) % n]);
            if segments_cross(a, b, c, d) {
                return Err(GeometryError::InvalidRing(format!(
                    "edges {i} and {j} intersect"
                )));
            }
        }
    }
    Ok(())
}

/// Triangulates a simple polygon given in either orientation. Triangles are
/// returned counter-clockwise; zero-area ears are skipped.
pub fn triangulate(ring: &[Vec2]) -> Result<Vec<[Vec2; 3]>, GeometryError> {
    check_simple(ring)?;
    let mut idx: Vec<usize> = (0..ring.len()).collect();
    if signed_area(ring) < 0.0 {
        idx.reverse();
    }
    let mut tris = Vec::with_capacity(ring.len().saturating_sub(2));
    let cross = |a: Vec2, b: Vec2, c: Vec2| (b - a).cross(c - a);
    while idx.len() > 3 {
        let n = idx.len();
        let mut clipped = false;
        for i in 0..n {
            let (ip, ic, inx) = (idx[(i + n - 1) % n], idx[i], idx[(i + 1) % n]);
            let (a, b, c) = (ring[ip], ring[ic], ring[inx]);
            let turn = cross(a, b, c);
            if turn < 0.0 {
                continue;
            }
            if turn == 0.0 {
                // collinear vertex: drop it without emitting a triangle
                idx.remove(i);
                clipped = true;
                break;
            }
            let blocked = idx.iter().any(|&k| {
                if k == ip || k == ic || k == inx {
                    return false;
                }
                let p = ring[k];
                cross(a, b, p) >= 0.0 && cross(b, c, p) >= 0.0 && cross(c, a, p) >= 0.0
            });
            if !blocked {
                tris.push([a, b, c]);
                idx.remove(i);
                clipped = true;
                break;
            }
        }
        if !clipped {
            return Err(GeometryError::InvalidRing(
                "ear clipping stalled; ring is not simple".into(),
            ));
        }
    }
    let (a, b, c) = (ring[idx[0]], ring[idx[1]], ring[idx[2]]);
    if cross(a, b, c) > 0.0 {
        tris.push([a, b, c]);
    }
    Ok(tris)
}
