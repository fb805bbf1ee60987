use rayon::prelude::*;
use rstar::primitives::{GeomWithData, Rectangle};
use rstar::{RTree, AABB};
use serde::{Deserialize, Serialize};

use super::cell::{self, Cell};
use super::{triangulate, Aabb, GeometryError, Similarity, Vec2, SNAP};

/// Below this many cells the boolean loops run sequentially.
const PAR_THRESHOLD: usize = 512;

/// Boolean set operation selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoolOp {
    Union,
    Intersection,
    Difference,
}

/// A regularized planar set: a finite union of convex cells with pairwise
/// disjoint interiors.
///
/// Every constructor and operation drops cells thinner than [`SNAP`], so a
/// region always equals the closure of its interior. The empty region is an
/// ordinary value with area zero.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Region {
    cells: Vec<Cell>,
}

#[derive(Deserialize)]
struct RegionWire {
    cells: Vec<Cell>,
}

impl<'de> Deserialize<'de> for Region {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let wire = RegionWire::deserialize(d)?;
        Ok(Region::from_untrusted_cells(wire.cells))
    }
}

/// R-tree over cell bounding boxes.
pub(crate) struct CellIndex<'a> {
    cells: &'a [Cell],
    tree: RTree<GeomWithData<Rectangle<[f64; 2]>, usize>>,
}

fn envelope(b: &Aabb) -> AABB<[f64; 2]> {
    AABB::from_corners(
        [b.min.x - SNAP, b.min.y - SNAP],
        [b.max.x + SNAP, b.max.y + SNAP],
    )
}

impl<'a> CellIndex<'a> {
    pub(crate) fn new(cells: &'a [Cell]) -> Self {
        let items = cells
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let b = c.bbox();
                GeomWithData::new(
                    Rectangle::from_corners([b.min.x, b.min.y], [b.max.x, b.max.y]),
                    i,
                )
            })
            .collect();
        CellIndex {
            cells,
            tree: RTree::bulk_load(items),
        }
    }

    /// Cells whose boxes touch `b`, in index order (deterministic).
    pub(crate) fn candidates(&self, b: &Aabb) -> Vec<&'a Cell> {
        self.candidate_ids(b)
            .into_iter()
            .map(|i| &self.cells[i])
            .collect()
    }

    pub(crate) fn candidate_ids(&self, b: &Aabb) -> Vec<usize> {
        let mut ids: Vec<usize> = self
            .tree
            .locate_in_envelope_intersecting(&envelope(b))
            .map(|g| g.data)
            .collect();
        ids.sort_unstable();
        ids
    }

    /// Distance from `p` to the union of the indexed cells.
    pub(crate) fn distance_to(&self, p: Vec2) -> f64 {
        let mut best = f64::INFINITY;
        for (g, d2) in self.tree.nearest_neighbor_iter_with_distance_2(&[p.x, p.y]) {
            if d2.sqrt() > best {
                break;
            }
            best = best.min(self.cells[g.data].distance_to(p));
            if best == 0.0 {
                break;
            }
        }
        best
    }
}

/// Greedily merges cells whose union is convex.
fn merge_cells(mut cells: Vec<Cell>) -> Vec<Cell> {
    let mut i = 0;
    while i < cells.len() {
        let mut j = i + 1;
        let mut merged = false;
        while j < cells.len() {
            if let Some(m) = cell::try_merge(&cells[i], &cells[j]) {
                cells[i] = m;
                cells.swap_remove(j);
                merged = true;
                j = i + 1;
            } else {
                j += 1;
            }
        }
        if !merged {
            i += 1;
        }
    }
    cells
}

impl Region {
    pub fn empty() -> Self {
        Region { cells: Vec::new() }
    }

    /// Region bounded by a single simple polygon (either orientation).
    pub fn polygon(ring: &[Vec2]) -> Result<Self, GeometryError> {
        Region::from_rings(&[ring.to_vec()], &[])
    }

    /// Region from outer boundaries minus holes. Rings must be simple; outers
    /// may overlap each other (they are unioned).
    pub fn from_rings(outers: &[Vec<Vec2>], holes: &[Vec<Vec2>]) -> Result<Self, GeometryError> {
        let fill = |rings: &[Vec<Vec2>]| -> Result<Region, GeometryError> {
            let mut acc = Region::empty();
            for ring in rings {
                let cells = triangulate::triangulate(ring)?
                    .into_iter()
                    .filter_map(|t| Cell::from_ccw(t.to_vec()))
                    .collect();
                acc = acc.union(&Region { cells: merge_cells(cells) });
            }
            Ok(acc)
        };
        let outer = fill(outers)?;
        let hole = fill(holes)?;
        Ok(outer.difference(&hole))
    }

    /// Region from a convex polygon.
    pub fn convex(pts: Vec<Vec2>) -> Result<Self, GeometryError> {
        Ok(Region { cells: vec![Cell::convex(pts)?] })
    }

    /// Axis-aligned rectangle `[x0, x1] × [y0, y1]`.
    pub fn rect(x0: f64, y0: f64, x1: f64, y1: f64) -> Result<Self, GeometryError> {
        Region::convex(vec![
            Vec2::new(x0, y0),
            Vec2::new(x1, y0),
            Vec2::new(x1, y1),
            Vec2::new(x0, y1),
        ])
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Number of connected components of the closed set. Cells that share
    /// only a vertex count as connected.
    pub fn component_count(&self) -> usize {
        let index = CellIndex::new(&self.cells);
        let mut parent: Vec<usize> = (0..self.cells.len()).collect();
        fn root(parent: &mut [usize], mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        let mut count = self.cells.len();
        for (i, a) in self.cells.iter().enumerate() {
            for j in index.candidate_ids(&a.bbox()) {
                if j <= i || !cell::touching(a, &self.cells[j]) {
                    continue;
                }
                let (ri, rj) = (root(&mut parent, i), root(&mut parent, j));
                if ri != rj {
                    parent[ri] = rj;
                    count -= 1;
                }
            }
        }
        count
    }

    /// Lebesgue measure (compensated sum over cells).
    pub fn area(&self) -> f64 {
        let mut sum = 0.0f64;
        let mut comp = 0.0f64;
        for c in &self.cells {
            let a = c.area();
            let t = sum + a;
            if sum.abs() >= a.abs() {
                comp += (sum - t) + a;
            } else {
                comp += (a - t) + sum;
            }
            sum = t;
        }
        sum + comp
    }

    pub fn bbox(&self) -> Option<Aabb> {
        self.cells.iter().map(Cell::bbox).reduce(Aabb::union)
    }

    /// Diameter of the bounding box (an upper bound on the set diameter).
    pub fn diameter(&self) -> f64 {
        self.bbox().map_or(0.0, |b| b.diagonal())
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vec2> + '_ {
        self.cells.iter().flat_map(|c| c.points().iter().copied())
    }

    pub fn contains_point(&self, p: Vec2) -> bool {
        self.cells.iter().any(|c| c.contains(p))
    }

    pub fn boolean(&self, op: BoolOp, other: &Region) -> Region {
        match op {
            BoolOp::Union => self.union(other),
            BoolOp::Intersection => self.intersection(other),
            BoolOp::Difference => self.difference(other),
        }
    }

    pub fn intersection(&self, other: &Region) -> Region {
        if self.is_empty() || other.is_empty() {
            return Region::empty();
        }
        let (small, large) = if self.cells.len() <= other.cells.len() {
            (self, other)
        } else {
            (other, self)
        };
        let index = CellIndex::new(&small.cells);
        let per_cell = |a: &Cell| -> Vec<Cell> {
            index
                .candidates(&a.bbox())
                .into_iter()
                .filter_map(|b| cell::intersect(a, b))
                .collect()
        };
        let cells: Vec<Cell> = if large.cells.len() >= PAR_THRESHOLD {
            large.cells.par_iter().flat_map_iter(per_cell).collect()
        } else {
            large.cells.iter().flat_map(per_cell).collect()
        };
        Region { cells }
    }

    pub fn difference(&self, other: &Region) -> Region {
        if self.is_empty() || other.is_empty() {
            return self.clone();
        }
        let index = CellIndex::new(&other.cells);
        let per_cell = |a: &Cell| -> Vec<Cell> {
            let cands: Vec<&Cell> = index
                .candidates(&a.bbox())
                .into_iter()
                .filter(|b| !cell::separated(a, b))
                .collect();
            if cands.is_empty() {
                return vec![a.clone()];
            }
            let mut pieces = vec![a.clone()];
            let mut next = Vec::new();
            let mut cut = false;
            for b in cands {
                next.clear();
                for p in &pieces {
                    let before = next.len();
                    cell::subtract(p, b, &mut next);
                    cut |= next.len() != before + 1 || next[before] != *p;
                }
                std::mem::swap(&mut pieces, &mut next);
                if pieces.is_empty() {
                    break;
                }
            }
            if cut && pieces.len() > 1 {
                merge_cells(pieces)
            } else {
                pieces
            }
        };
        let cells: Vec<Cell> = if self.cells.len() >= PAR_THRESHOLD {
            self.cells.par_iter().flat_map_iter(per_cell).collect()
        } else {
            self.cells.iter().flat_map(per_cell).collect()
        };
        Region { cells }
    }

    pub fn union(&self, other: &Region) -> Region {
        if self.is_empty() {
            return other.clone();
        }
        let mut cells = self.cells.clone();
        cells.extend(other.difference(self).cells);
        Region { cells }
    }

    /// Union of interior-disjoint-in-measure regions without re-checking:
    /// callers must guarantee the operands do not overlap.
    pub(crate) fn concat(regions: impl IntoIterator<Item = Region>) -> Region {
        Region {
            cells: regions.into_iter().flat_map(|r| r.cells).collect(),
        }
    }

    /// Image of the region under a similarity.
    pub fn transform(&self, f: &Similarity) -> Region {
        let rev = !f.preserves_orientation();
        let map = |c: &Cell| c.map(|p| f.apply(p), rev);
        let cells = if self.cells.len() >= PAR_THRESHOLD {
            self.cells.par_iter().filter_map(map).collect()
        } else {
            self.cells.iter().filter_map(map).collect()
        };
        Region { cells }
    }

    pub fn translate(&self, v: Vec2) -> Region {
        Region {
            cells: self.cells.iter().filter_map(|c| c.map(|p| p + v, false)).collect(),
        }
    }

    /// Re-cleans every cell and drops degenerate ones. Idempotent.
    pub fn regularized(&self) -> Region {
        Region {
            cells: self
                .cells
                .iter()
                .filter_map(|c| Cell::from_ccw(c.points().to_vec()))
                .collect(),
        }
    }

    /// Region from cells that may overlap. Disjoint input is kept as is.
    fn from_untrusted_cells(cells: Vec<Cell>) -> Region {
        let index = CellIndex::new(&cells);
        let overlapping = cells.iter().any(|a| {
            index
                .candidates(&a.bbox())
                .into_iter()
                .any(|b| !std::ptr::eq(a, b) && cell::intersect(a, b).is_some())
        });
        if !overlapping {
            return Region { cells };
        }
        fn merge(cells: &[Cell]) -> Region {
            if cells.len() <= 1 {
                return Region { cells: cells.to_vec() };
            }
            let (l, r) = cells.split_at(cells.len() / 2);
            merge(l).union(&merge(r))
        }
        merge(&cells)
    }

    /// Same set with fewer cells: merges neighbours whose union is convex.
    pub fn compacted(&self) -> Region {
        if self.cells.len() <= 64 {
            return Region { cells: merge_cells(self.cells.clone()) };
        }
        // Bucket by spatial index so merging stays near-linear on large inputs.
        let index = CellIndex::new(&self.cells);
        let mut alive: Vec<Option<Cell>> = self.cells.iter().cloned().map(Some).collect();
        let pos: std::collections::HashMap<*const Cell, usize> = self
            .cells
            .iter()
            .enumerate()
            .map(|(i, c)| (c as *const Cell, i))
            .collect();
        for i in 0..alive.len() {
            let Some(mut cur) = alive[i].take() else { continue };
            loop {
                let mut merged = false;
                for cand in index.candidates(&cur.bbox()) {
                    let j = pos[&(cand as *const Cell)];
                    if j == i {
                        continue;
                    }
                    if let Some(other) = &alive[j] {
                        if let Some(m) = cell::try_merge(&cur, other) {
                            alive[j] = None;
                            cur = m;
                            merged = true;
                        }
                    }
                }
                if !merged {
                    break;
                }
            }
            alive[i] = Some(cur);
        }
        Region {
            cells: alive.into_iter().flatten().collect(),
        }
    }

    /// Distance from a point to the region (zero inside).
    pub fn distance_to_point(&self, p: Vec2) -> f64 {
        if self.is_empty() {
            return f64::INFINITY;
        }
        CellIndex::new(&self.cells).distance_to(p)
    }

    /// Boundary of the region as closed rings: counter-clockwise outer
    /// boundaries and clockwise holes.
    pub fn boundary_rings(&self) -> Vec<Vec<Vec2>> {
        super::boundary::boundary_rings(&self.cells)
    }
}
