//! Independent oracles for the integration tests: scanline rasterization at
//! pixel centres, boundary sampling, and random star-shaped polygons.
#![allow(dead_code)]

use proptest::prelude::*;
use selfsim::{Region, Vec2};

/// Half-open pixel index ranges `[a, b)` per row.
#[derive(Debug, Clone, PartialEq)]
pub struct Raster {
    pub n: usize,
    /// Window `[x0, x0 + size] × [y0, y0 + size]`.
    pub x0: f64,
    pub y0: f64,
    pub size: f64,
    pub rows: Vec<Vec<(i64, i64)>>,
}

#[derive(Debug, Clone, Copy)]
pub enum Op {
    And,
    Or,
    AndNot,
    Xor,
}

impl Raster {
    fn empty(n: usize, x0: f64, y0: f64, size: f64) -> Raster {
        Raster { n, x0, y0, size, rows: vec![Vec::new(); n] }
    }

    fn row_y(&self, j: usize) -> f64 {
        self.y0 + (j as f64 + 0.5) * self.size / self.n as f64
    }

    /// First pixel whose centre is at or right of `x`.
    fn col(&self, x: f64) -> i64 {
        let t = (x - self.x0) * self.n as f64 / self.size - 0.5;
        (t.ceil() as i64).clamp(0, self.n as i64)
    }

    /// Even-odd fill of a set of closed rings.
    pub fn rings(rings: &[Vec<Vec2>], n: usize, x0: f64, y0: f64, size: f64) -> Raster {
        let mut r = Raster::empty(n, x0, y0, size);
        for j in 0..n {
            let y = r.row_y(j);
            let mut xs = Vec::new();
            for ring in rings {
                for i in 0..ring.len() {
                    let (p, q) = (ring[i], ring[(i + 1) % ring.len()]);
                    if (p.y > y) != (q.y > y) {
                        xs.push(p.x + (y - p.y) * (q.x - p.x) / (q.y - p.y));
                    }
                }
            }
            xs.sort_by(f64::total_cmp);
            let spans = xs
                .chunks(2)
                .map(|c| (r.col(c[0]), r.col(c[1])))
                .filter(|(a, b)| a < b)
                .collect();
            r.rows[j] = normalize(spans);
        }
        r
    }

    /// Fill of a region's cells; also returns the number of pixels covered
    /// more than once.
    pub fn cells(region: &Region, n: usize, x0: f64, y0: f64, size: f64) -> (Raster, u64) {
        let mut r = Raster::empty(n, x0, y0, size);
        let mut raw: Vec<Vec<(i64, i64)>> = vec![Vec::new(); n];
        for cell in region.cells() {
            let pts = cell.points();
            let (lo, hi) = pts.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| {
                (a.min(p.y), b.max(p.y))
            });
            let j0 = (((lo - y0) * n as f64 / size - 0.5).floor().max(0.0)) as usize;
            let j1 = (((hi - y0) * n as f64 / size + 0.5).ceil() as usize).min(n);
            for (j, row) in raw.iter_mut().enumerate().take(j1).skip(j0) {
                let y = r.row_y(j);
                let mut xs = Vec::new();
                for i in 0..pts.len() {
                    let (p, q) = (pts[i], pts[(i + 1) % pts.len()]);
                    if (p.y > y) != (q.y > y) {
                        xs.push(p.x + (y - p.y) * (q.x - p.x) / (q.y - p.y));
                    }
                }
                if xs.len() == 2 {
                    let (a, b) = (xs[0].min(xs[1]), xs[0].max(xs[1]));
                    let span = (r.col(a), r.col(b));
                    if span.0 < span.1 {
                        row.push(span);
                    }
                }
            }
        }
        let mut doubled = 0;
        for (j, spans) in raw.into_iter().enumerate() {
            let total: i64 = spans.iter().map(|(a, b)| b - a).sum();
            let merged = normalize(spans);
            doubled += (total - len(&merged)) as u64;
            r.rows[j] = merged;
        }
        (r, doubled)
    }

    pub fn count(&self) -> u64 {
        self.rows.iter().map(|s| len(s) as u64).sum()
    }

    pub fn combine(&self, other: &Raster, op: Op) -> Raster {
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| combine_row(a, b, op))
            .collect();
        Raster { rows, ..*self }
    }

    pub fn pixel_area(&self) -> f64 {
        (self.size / self.n as f64).powi(2)
    }
}

fn len(spans: &[(i64, i64)]) -> i64 {
    spans.iter().map(|(a, b)| b - a).sum()
}

fn normalize(mut spans: Vec<(i64, i64)>) -> Vec<(i64, i64)> {
    spans.sort_unstable();
    let mut out: Vec<(i64, i64)> = Vec::with_capacity(spans.len());
    for (a, b) in spans {
        match out.last_mut() {
            Some(last) if a <= last.1 => last.1 = last.1.max(b),
            _ => out.push((a, b)),
        }
    }
    out
}

fn combine_row(a: &[(i64, i64)], b: &[(i64, i64)], op: Op) -> Vec<(i64, i64)> {
    let mut cuts: Vec<i64> = a.iter().chain(b).flat_map(|&(x, y)| [x, y]).collect();
    cuts.sort_unstable();
    cuts.dedup();
    let inside = |s: &[(i64, i64)], x: i64| s.iter().any(|&(p, q)| p <= x && x < q);
    let mut out = Vec::new();
    for w in cuts.windows(2) {
        let (ia, ib) = (inside(a, w[0]), inside(b, w[0]));
        let keep = match op {
            Op::And => ia && ib,
            Op::Or => ia || ib,
            Op::AndNot => ia && !ib,
            Op::Xor => ia != ib,
        };
        if keep {
            out.push((w[0], w[1]));
        }
    }
    normalize(out)
}

/// Points every `step` along the closed rings.
pub fn sample_boundary(rings: &[Vec<Vec2>], per_ring: usize) -> Vec<Vec2> {
    let mut out = Vec::new();
    for ring in rings {
        let perim: f64 = (0..ring.len()).map(|i| ring[i].dist(ring[(i + 1) % ring.len()])).sum();
        let step = perim / per_ring as f64;
        for i in 0..ring.len() {
            let (p, q) = (ring[i], ring[(i + 1) % ring.len()]);
            let k = (p.dist(q) / step).ceil().max(1.0) as usize;
            out.extend((0..k).map(|t| p.lerp(q, t as f64 / k as f64)));
        }
    }
    out
}

/// Hausdorff distance between two point clouds by exhaustive scan.
pub fn brute_hausdorff(a: &[Vec2], b: &[Vec2]) -> f64 {
    let directed = |a: &[Vec2], b: &[Vec2]| {
        a.iter()
            .map(|p| b.iter().map(|q| p.dist(*q)).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    directed(a, b).max(directed(b, a))
}

/// Simple polygon with 3 to 12 vertices, star-shaped around a centre in
/// `[0.3, 0.7]²`, inside the unit square.
pub fn star_polygon() -> impl Strategy<Value = Vec<Vec2>> {
    (0.3..0.7f64, 0.3..0.7f64, 3usize..=12).prop_flat_map(|(cx, cy, n)| {
        (
            Just(Vec2::new(cx, cy)),
            prop::collection::vec((0.0..1.0f64, 0.05..0.3f64), n),
        )
            .prop_map(|(c, mut spokes)| {
                spokes.sort_by(|a, b| a.0.total_cmp(&b.0));
                // spread angles so no two spokes coincide
                let n = spokes.len() as f64;
                spokes
                    .iter()
                    .enumerate()
                    .map(|(i, &(t, rad))| {
                        let theta = std::f64::consts::TAU * (i as f64 + 0.8 * t) / n;
                        c + Vec2::new(theta.cos(), theta.sin()) * rad
                    })
                    .collect()
            })
    })
}
