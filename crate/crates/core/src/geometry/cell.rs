//! Convex cells: the building block of [`Region`](super::Region).
//!
//! Every region is stored as a list of convex polygons with pairwise disjoint
//! interiors. Intersection of two convex polygons is convex, and the
//! difference of two convex polygons splits into at most `n` convex pieces
//! (one per edge of the subtrahend), so the representation is closed under
//! all boolean operations without ever needing a general polygon clipper.

use serde::{Deserialize, Serialize};

use super::{Aabb, GeometryError, Vec2, SNAP};

/// A convex polygon with counter-clockwise vertices and positive area.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec2>", into = "Vec<Vec2>")]
pub struct Cell {
    pts: Vec<Vec2>,
    bbox: Aabb,
    area: f64,
}

impl TryFrom<Vec<Vec2>> for Cell {
    type Error = GeometryError;
    fn try_from(pts: Vec<Vec2>) -> Result<Self, Self::Error> {
        Cell::convex(pts)
    }
}

impl From<Cell> for Vec<Vec2> {
    fn from(c: Cell) -> Self {
        c.pts
    }
}

/// Signed area of a closed polygon (counter-clockwise positive).
pub fn signed_area(pts: &[Vec2]) -> f64 {
    let n = pts.len();
    if n < 3 {
        return 0.0;
    }
    // translate to the first vertex to limit cancellation
    let o = pts[0];
    let mut s = 0.0;
    for i in 1..n - 1 {
        s += (pts[i] - o).cross(pts[i + 1] - o);
    }
    0.5 * s
}

impl Cell {
    /// Validates and normalizes a convex polygon (either orientation).
    pub fn convex(mut pts: Vec<Vec2>) -> Result<Cell, GeometryError> {
        if pts.iter().any(|p| !p.is_finite()) {
            return Err(GeometryError::InvalidRing("non-finite coordinate".into()));
        }
        if signed_area(&pts) < 0.0 {
            pts.reverse();
        }
        let n = pts.len();
        for i in 0..n {
            let (a, b, c) = (pts[i], pts[(i + 1) % n], pts[(i + 2) % n]);
            let e = b - a;
            let len = e.norm();
            if len > 0.0 && e.cross(c - b) / len < -SNAP {
                return Err(GeometryError::InvalidRing("polygon is not convex".into()));
            }
        }
        Cell::from_ccw(pts).ok_or_else(|| GeometryError::InvalidRing("degenerate polygon".into()))
    }

    /// Builds a cell from counter-clockwise convex vertices, cleaning up
    /// near-duplicate and collinear vertices. `None` when the result is degenerate
    /// (zero area or thinner than [`SNAP`]).
    pub(crate) fn from_ccw(mut pts: Vec<Vec2>) -> Option<Cell> {
        clean_ring(&mut pts);
        if pts.len() < 3 {
            return None;
        }
        let area = signed_area(&pts);
        if area <= 0.0 {
            return None;
        }
        let bbox = Aabb::from_points(&pts)?;
        // 2·area / diameter approximates the thinnest width of the cell
        if 2.0 * area / bbox.diagonal() < SNAP {
            return None;
        }
        Some(Cell { pts, bbox, area })
    }

    pub fn points(&self) -> &[Vec2] {
        &self.pts
    }

    pub fn bbox(&self) -> Aabb {
        self.bbox
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn perimeter(&self) -> f64 {
        self.edges().map(|(a, b)| a.dist(b)).sum()
    }

    pub fn edges(&self) -> impl Iterator<Item = (Vec2, Vec2)> + '_ {
        let n = self.pts.len();
        (0..n).map(move |i| (self.pts[i], self.pts[(i + 1) % n]))
    }

    /// Maps every vertex through `f`; `reverse` restores counter-clockwise
    /// order after an orientation-reversing map.
    pub(crate) fn map(&self, f: impl Fn(Vec2) -> Vec2, reverse: bool) -> Option<Cell> {
        let mut pts: Vec<Vec2> = self.pts.iter().map(|&p| f(p)).collect();
        if reverse {
            pts.reverse();
        }
        Cell::from_ccw(pts)
    }

    /// Closed-set membership with a [`SNAP`] margin.
    pub fn contains(&self, p: Vec2) -> bool {
        self.edges().all(|(a, b)| side(a, b, p) >= -SNAP)
    }

    /// Euclidean distance from `p` to the cell (zero inside).
    pub fn distance_to(&self, p: Vec2) -> f64 {
        if self.contains(p) {
            return 0.0;
        }
        self.edges()
            .map(|(a, b)| super::vec2::point_segment_distance(p, a, b))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Signed distance of `p` from the directed line `a → b`, positive on the left.
#[inline]
pub(crate) fn side(a: Vec2, b: Vec2, p: Vec2) -> f64 {
    let d = b - a;
    d.cross(p - a) / d.norm()
}

/// Removes repeated vertices and vertices that lie on the segment joining
/// their neighbours.
fn clean_ring(pts: &mut Vec<Vec2>) {
    loop {
        let n = pts.len();
        if n < 3 {
            return;
        }
        let mut keep = vec![true; n];
        let mut changed = false;
        for i in 0..n {
            let prev = pts[(i + n - 1) % n];
            let cur = pts[i];
            let next = pts[(i + 1) % n];
            if cur.dist(prev) <= SNAP {
                keep[i] = false;
                changed = true;
                break;
            }
            if next.dist(prev) > SNAP && side(prev, next, cur).abs() <= SNAP {
                keep[i] = false;
                changed = true;
                break;
            }
        }
        if !changed {
            return;
        }
        let mut k = 0;
        pts.retain(|_| {
            let r = keep[k];
            k += 1;
            r
        });
    }
}

/// Sutherland–Hodgman against one half-plane. With `keep_left`, keeps the
/// points on or left of `a → b`; otherwise on or right of it. Points within
/// [`SNAP`] of the line count as on it.
fn clip_halfplane(poly: &[Vec2], a: Vec2, b: Vec2, keep_left: bool) -> Vec<Vec2> {
    let sign = if keep_left { 1.0 } else { -1.0 };
    let n = poly.len();
    let s: Vec<f64> = poly.iter().map(|&p| sign * side(a, b, p)).collect();
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..n {
        let j = (i + 1) % n;
        let (p, q) = (poly[i], poly[j]);
        let (sp, sq) = (s[i], s[j]);
        if sp >= -SNAP {
            out.push(p);
        }
        if (sp > SNAP && sq < -SNAP) || (sp < -SNAP && sq > SNAP) {
            out.push(p.lerp(q, sp / (sp - sq)));
        }
    }
    out
}

/// True when some edge of `a` or `b` separates the two cells (interiors disjoint).
pub(crate) fn separated(a: &Cell, b: &Cell) -> bool {
    fn one_way(a: &Cell, b: &Cell) -> bool {
        b.edges()
            .any(|(p, q)| a.pts.iter().all(|&v| side(p, q, v) <= SNAP))
    }
    one_way(a, b) || one_way(b, a)
}

/// True when the closed cells meet, counting shared edges and vertices.
pub(crate) fn touching(a: &Cell, b: &Cell) -> bool {
    fn apart(a: &Cell, b: &Cell) -> bool {
        b.edges()
            .any(|(p, q)| a.pts.iter().all(|&v| side(p, q, v) < -SNAP))
    }
    !(apart(a, b) || apart(b, a))
}

/// True when every vertex of `a` lies in `b` (so `a ⊆ b` by convexity).
pub(crate) fn inside(a: &Cell, b: &Cell) -> bool {
    a.pts.iter().all(|&v| b.contains(v))
}

/// Intersection of two convex cells.
pub(crate) fn intersect(a: &Cell, b: &Cell) -> Option<Cell> {
    if !a.bbox.overlaps(&b.bbox, SNAP) || separated(a, b) {
        return None;
    }
    if inside(a, b) {
        return Some(a.clone());
    }
    if inside(b, a) {
        return Some(b.clone());
    }
    let mut poly = a.pts.clone();
    for (p, q) in b.edges() {
        poly = clip_halfplane(&poly, p, q, true);
        if poly.len() < 3 {
            return None;
        }
    }
    Cell::from_ccw(poly)
}

/// `a \ b` as interior-disjoint convex pieces, appended to `out`.
pub(crate) fn subtract(a: &Cell, b: &Cell, out: &mut Vec<Cell>) {
    if !a.bbox.overlaps(&b.bbox, SNAP) || separated(a, b) {
        out.push(a.clone());
        return;
    }
    if inside(a, b) {
        return;
    }
    let mut rem = a.pts.clone();
    for (p, q) in b.edges() {
        let outside = clip_halfplane(&rem, p, q, false);
        if let Some(c) = Cell::from_ccw(outside) {
            out.push(c);
        }
        rem = clip_halfplane(&rem, p, q, true);
        if Cell::from_ccw(rem.clone()).is_none() {
            return;
        }
    }
}

/// Convex hull (Andrew's monotone chain), counter-clockwise, collinear points dropped.
pub(crate) fn convex_hull(points: &[Vec2]) -> Vec<Vec2> {
    let mut pts: Vec<Vec2> = points.to_vec();
    pts.sort_by(|p, q| p.x.total_cmp(&q.x).then(p.y.total_cmp(&q.y)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<Vec2> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Vec2>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2 {
                let (o, a) = (hull[hull.len() - 2], hull[hull.len() - 1]);
                if (a - o).cross(p - o) <= 0.0 {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

/// Merges two interior-disjoint cells when their union is convex.
pub(crate) fn try_merge(a: &Cell, b: &Cell) -> Option<Cell> {
    if !a.bbox.overlaps(&b.bbox, SNAP) {
        return None;
    }
    let mut all = a.pts.clone();
    all.extend_from_slice(&b.pts);
    let hull = Cell::from_ccw(convex_hull(&all))?;
    // The hull contains both cells; equal area means it *is* their union
    // (up to a sliver thinner than SNAP along the hull boundary).
    let excess = hull.area - (a.area + b.area);
    if excess.abs() <= SNAP * hull.perimeter() {
        Some(hull)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sq(x0: f64, y0: f64, x1: f64, y1: f64) -> Cell {
        Cell::convex(vec![
            Vec2::new(x0, y0),
            Vec2::new(x1, y0),
            Vec2::new(x1, y1),
            Vec2::new(x0, y1),
        ])
        .unwrap()
    }

    #[test]
    fn convex_validation() {
        // clockwise input is accepted and reoriented
        let c = Cell::convex(vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(0.0, 1.0),
            Vec2::new(1.0, 0.0),
        ])
        .unwrap();
        assert!((c.area() - 0.5).abs() < 1e-15);
        assert!(Cell::convex(vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(2.0, 0.0),
            Vec2::new(1.0, 0.2),
            Vec2::new(1.0, 2.0),
        ])
        .is_err());
        assert!(Cell::convex(vec![Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(2.0, 0.0)]).is_err());
    }

    #[test]
    fn collinear_vertices_are_removed() {
        let c = Cell::convex(vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(0.5, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(1.0, 1.0),
            Vec2::new(0.0, 1.0),
        ])
        .unwrap();
        assert_eq!(c.points().len(), 4);
    }

    #[test]
    fn intersect_and_subtract_squares() {
        let a = sq(0.0, 0.0, 1.0, 1.0);
        let b = sq(0.5, 0.5, 1.5, 1.5);
        let i = intersect(&a, &b).unwrap();
        assert!((i.area() - 0.25).abs() < 1e-15);
        let mut out = vec![];
        subtract(&a, &b, &mut out);
        let total: f64 = out.iter().map(Cell::area).sum();
        assert!((total - 0.75).abs() < 1e-15);
    }

    #[test]
    fn edge_sharing_cells_are_separated() {
        let a = sq(0.0, 0.0, 1.0, 1.0);
        let b = sq(1.0, 0.0, 2.0, 1.0);
        assert!(separated(&a, &b));
        assert!(intersect(&a, &b).is_none());
        let mut out = vec![];
        subtract(&a, &b, &mut out);
        assert_eq!(out, vec![a]);
    }

    #[test]
    fn merge_adjacent_halves() {
        let a = sq(0.0, 0.0, 0.5, 1.0);
        let b = sq(0.5, 0.0, 1.0, 1.0);
        let m = try_merge(&a, &b).unwrap();
        assert_eq!(m.points().len(), 4);
        assert!((m.area() - 1.0).abs() < 1e-15);
        let c = sq(0.5, 0.0, 1.0, 0.5);
        assert!(try_merge(&a, &c).is_none());
    }

    #[test]
    fn thin_slivers_are_degenerate() {
        assert!(Cell::from_ccw(vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(1.0, 1e-14),
            Vec2::new(0.0, 1e-14),
        ])
        .is_none());
    }
}
