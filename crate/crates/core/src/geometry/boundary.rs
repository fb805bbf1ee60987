//! Recovers boundary rings from a cell decomposition.
//!
//! Interior edges appear twice with opposite directions and cancel. Cells
//! produced by clipping can meet in T-junctions, so every edge is first split
//! at all vertices lying on it.

use std::collections::HashMap;

use rstar::primitives::GeomWithData;
use rstar::{RTree, AABB};

use super::cell::{signed_area, Cell};
use super::Vec2;

const MERGE_TOL: f64 = 1e-10;

struct VertexPool {
    pts: Vec<Vec2>,
    grid: HashMap<(i64, i64), Vec<usize>>,
}

impl VertexPool {
    fn key(p: Vec2) -> (i64, i64) {
        let q = 4.0 * MERGE_TOL;
        ((p.x / q).floor() as i64, (p.y / q).floor() as i64)
    }

    fn id(&mut self, p: Vec2) -> usize {
        let (kx, ky) = Self::key(p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(ids) = self.grid.get(&(kx + dx, ky + dy)) {
                    for &i in ids {
                        if self.pts[i].dist(p) <= MERGE_TOL {
                            return i;
                        }
                    }
                }
            }
        }
        let i = self.pts.len();
        self.pts.push(p);
        self.grid.entry((kx, ky)).or_default().push(i);
        i
    }
}

pub(crate) fn boundary_rings(cells: &[Cell]) -> Vec<Vec<Vec2>> {
    let mut pool = VertexPool {
        pts: Vec::new(),
        grid: HashMap::new(),
    };
    let edges: Vec<(usize, usize)> = cells
        .iter()
        .flat_map(|c| c.edges().collect::<Vec<_>>())
        .map(|(a, b)| (pool.id(a), pool.id(b)))
        .filter(|(a, b)| a != b)
        .collect();
    let pts = pool.pts;
    let tree: RTree<GeomWithData<[f64; 2], usize>> = RTree::bulk_load(
        pts.iter()
            .enumerate()
            .map(|(i, p)| GeomWithData::new([p.x, p.y], i))
            .collect(),
    );

    // split at T-junctions, then cancel opposite pairs
    let mut count: HashMap<(usize, usize), i32> = HashMap::new();
    let mut push = |u: usize, v: usize| {
        if let Some(c) = count.get_mut(&(v, u)) {
            if *c > 0 {
                *c -= 1;
                return;
            }
        }
        *count.entry((u, v)).or_insert(0) += 1;
    };
    for &(u, v) in &edges {
        let (a, b) = (pts[u], pts[v]);
        let d = b - a;
        let len2 = d.norm_sq();
        let env = AABB::from_corners(
            [a.x.min(b.x) - MERGE_TOL, a.y.min(b.y) - MERGE_TOL],
            [a.x.max(b.x) + MERGE_TOL, a.y.max(b.y) + MERGE_TOL],
        );
        let mut inner: Vec<(f64, usize)> = tree
            .locate_in_envelope(&env)
            .filter(|g| g.data != u && g.data != v)
            .filter_map(|g| {
                let p = pts[g.data];
                let t = (p - a).dot(d) / len2;
                let off = (a + d * t).dist(p);
                (t > 0.0 && t < 1.0 && off <= MERGE_TOL).then_some((t, g.data))
            })
            .collect();
        inner.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
        let mut prev = u;
        for (_, w) in inner {
            push(prev, w);
            prev = w;
        }
        push(prev, v);
    }

    let mut out: HashMap<usize, Vec<usize>> = HashMap::new();
    let mut remaining: Vec<(usize, usize)> = count
        .into_iter()
        .flat_map(|((u, v), c)| std::iter::repeat_n((u, v), c.max(0) as usize))
        .collect();
    remaining.sort_unstable();
    for &(u, v) in &remaining {
        out.entry(u).or_default().push(v);
    }

    let mut rings = Vec::new();
    for &(start, _) in &remaining {
        while out.get(&start).is_some_and(|l| !l.is_empty()) {
            let mut ring = vec![start];
            let mut prev = start;
            let mut cur = out.get_mut(&start).unwrap().remove(0);
            while cur != start {
                ring.push(cur);
                let Some(nexts) = out.get_mut(&cur).filter(|l| !l.is_empty()) else {
                    break;
                };
                // at pinch points take the sharpest right turn so touching
                // components come out as separate rings
                let din = pts[cur] - pts[prev];
                let pick = (0..nexts.len())
                    .min_by(|&i, &j| {
                        let ang = |k: usize| {
                            let dout = pts[nexts[k]] - pts[cur];
                            din.cross(dout).atan2(din.dot(dout))
                        };
                        ang(i).total_cmp(&ang(j))
                    })
                    .unwrap();
                prev = cur;
                cur = nexts.remove(pick);
            }
            let mut ring: Vec<Vec2> = ring.into_iter().map(|i| pts[i]).collect();
            simplify_collinear(&mut ring);
            if ring.len() >= 3 && signed_area(&ring).abs() > 0.0 {
                rings.push(ring);
            }
        }
    }
    rings
}

fn simplify_collinear(ring: &mut Vec<Vec2>) {
    let mut i = 0;
    while ring.len() >= 3 && i < ring.len() {
        let n = ring.len();
        let (a, b, c) = (ring[(i + n - 1) % n], ring[i], ring[(i + 1) % n]);
        let d = c - a;
        let len = d.norm();
        if len > 0.0 && (d.cross(b - a) / len).abs() <= MERGE_TOL && (b - a).dot(c - b) >= 0.0 {
            ring.remove(i);
            i = i.saturating_sub(1);
        } else {
            i += 1;
        }
    }
}
