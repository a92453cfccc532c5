//! Lattice primitives: points, charges, metrics, regions, boundaries,
//! connectivity and rectangles on a finite torus window.
//!
//! All coordinate arithmetic wraps modulo the window dimensions. Every
//! operation iterates cells in lexicographic (x, y) order so pipelines
//! built on top are reproducible.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

use crate::error::GridError;

/// Finite torus window. Width and height are in cells, both at least 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusContext {
    pub width: i32,
    pub height: i32,
}

impl TorusContext {
    pub fn new(width: i32, height: i32) -> Result<Self, GridError> {
        if width < 4 || height < 4 {
            return Err(GridError::WindowTooSmall { width, height });
        }
        Ok(TorusContext { width, height })
    }

    pub fn canonical(&self, p: Point) -> Point {
        Point {
            x: p.x.rem_euclid(self.width),
            y: p.y.rem_euclid(self.height),
        }
    }

    pub fn cells(&self) -> usize {
        (self.width as usize) * (self.height as usize)
    }

    /// Dense row-major index of a canonical point.
    pub fn index(&self, p: Point) -> usize {
        let p = self.canonical(p);
        (p.y as usize) * (self.width as usize) + p.x as usize
    }

    pub fn point_at(&self, idx: usize) -> Point {
        Point {
            x: (idx % self.width as usize) as i32,
            y: (idx / self.width as usize) as i32,
        }
    }

    /// Toroidal difference of a single coordinate, in (-n/2, n/2].
    fn wrap_delta(d: i32, n: i32) -> i32 {
        let m = d.rem_euclid(n);
        if m > n / 2 {
            m - n
        } else {
            m
        }
    }

    pub fn delta(&self, p: Point, q: Point) -> (i32, i32) {
        (
            Self::wrap_delta(q.x - p.x, self.width),
            Self::wrap_delta(q.y - p.y, self.height),
        )
    }

    /// The four generator neighbors of a canonical point.
    pub fn neighbors4(&self, p: Point) -> [Point; 4] {
        [
            self.canonical(Point::new(p.x + 1, p.y)),
            self.canonical(Point::new(p.x - 1, p.y)),
            self.canonical(Point::new(p.x, p.y + 1)),
            self.canonical(Point::new(p.x, p.y - 1)),
        ]
    }

    pub fn neighbors8(&self, p: Point) -> [Point; 8] {
        [
            self.canonical(Point::new(p.x + 1, p.y)),
            self.canonical(Point::new(p.x - 1, p.y)),
            self.canonical(Point::new(p.x, p.y + 1)),
            self.canonical(Point::new(p.x, p.y - 1)),
            self.canonical(Point::new(p.x + 1, p.y + 1)),
            self.canonical(Point::new(p.x + 1, p.y - 1)),
            self.canonical(Point::new(p.x - 1, p.y + 1)),
            self.canonical(Point::new(p.x - 1, p.y - 1)),
        ]
    }
}

/// Lattice point. In torus contexts the canonical representative lives in
/// [0,width) x [0,height); plane algorithms use raw coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Point {
    pub x: i32,
    pub y: i32,
}

impl Point {
    pub const fn new(x: i32, y: i32) -> Self {
        Point { x, y }
    }
}

/// Charge of a lattice point: +1 on even parity cells, -1 on odd.
pub fn charge(p: Point) -> i64 {
    if (p.x + p.y).rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Toroidal sup-metric distance.
pub fn linf_dist(p: Point, q: Point, ctx: &TorusContext) -> i32 {
    let (dx, dy) = ctx.delta(p, q);
    dx.abs().max(dy.abs())
}

/// Which adjacency relation a boundary or component computation uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    /// 4-adjacency: distance-1 under the generator (graph) metric.
    Generator,
    /// 8-adjacency: distance-1 under the sup metric.
    Linf,
}

/// Inclusive axis-aligned rectangle of cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Rect {
    pub x0: i32,
    pub y0: i32,
    pub x1: i32,
    pub y1: i32,
}

impl Rect {
    pub fn new(x0: i32, y0: i32, x1: i32, y1: i32) -> Result<Self, GridError> {
        if x0 > x1 || y0 > y1 {
            return Err(GridError::BadRect { x0, y0, x1, y1 });
        }
        Ok(Rect { x0, y0, x1, y1 })
    }

    pub fn width(&self) -> i32 {
        self.x1 - self.x0 + 1
    }

    pub fn height(&self) -> i32 {
        self.y1 - self.y0 + 1
    }

    pub fn area(&self) -> i64 {
        self.width() as i64 * self.height() as i64
    }

    pub fn contains(&self, p: Point) -> bool {
        p.x >= self.x0 && p.x <= self.x1 && p.y >= self.y0 && p.y <= self.y1
    }

    /// Cells in lexicographic (x, y) order.
    pub fn cells(&self) -> impl Iterator<Item = Point> + '_ {
        let (x0, y0, x1, y1) = (self.x0, self.y0, self.x1, self.y1);
        (x0..=x1).flat_map(move |x| (y0..=y1).map(move |y| Point::new(x, y)))
    }

    pub fn total_charge(&self) -> i64 {
        // Product of alternating-sum runs along each axis.
        let ax = if self.width() % 2 == 0 {
            0
        } else if self.x0.rem_euclid(2) == 0 {
            1
        } else {
            -1
        };
        let ay = if self.height() % 2 == 0 {
            0
        } else if self.y0.rem_euclid(2) == 0 {
            1
        } else {
            -1
        };
        (ax * ay) as i64
    }
}

/// Finite set of torus cells with a cached bounding box.
///
/// Cells are kept canonical and sorted; the bounding box is the tight box of
/// the canonical representatives (callers that need a wrap-free window use
/// [`Region::unwrapped`]).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Region {
    cells: BTreeSet<Point>,
    bbox: Option<Rect>,
}

impl Region {
    pub fn empty() -> Self {
        Region {
            cells: BTreeSet::new(),
            bbox: None,
        }
    }

    pub fn from_cells<I: IntoIterator<Item = Point>>(ctx: &TorusContext, cells: I) -> Self {
        let cells: BTreeSet<Point> = cells.into_iter().map(|p| ctx.canonical(p)).collect();
        let bbox = Self::tight_bbox(&cells);
        Region { cells, bbox }
    }

    /// Build from already-canonical plane points (no wrapping applied).
    pub fn from_plane_cells<I: IntoIterator<Item = Point>>(cells: I) -> Self {
        let cells: BTreeSet<Point> = cells.into_iter().collect();
        let bbox = Self::tight_bbox(&cells);
        Region { cells, bbox }
    }

    pub fn from_rect(r: Rect) -> Self {
        Self::from_plane_cells(r.cells())
    }

    fn tight_bbox(cells: &BTreeSet<Point>) -> Option<Rect> {
        if cells.is_empty() {
            return None;
        }
        let mut x0 = i32::MAX;
        let mut y0 = i32::MAX;
        let mut x1 = i32::MIN;
        let mut y1 = i32::MIN;
        for p in cells {
            x0 = x0.min(p.x);
            y0 = y0.min(p.y);
            x1 = x1.max(p.x);
            y1 = y1.max(p.y);
        }
        Some(Rect { x0, y0, x1, y1 })
    }

    pub fn bbox(&self) -> Option<Rect> {
        self.bbox
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains(&self, p: Point) -> bool {
        self.cells.contains(&p)
    }

    pub fn iter(&self) -> impl Iterator<Item = Point> + '_ {
        self.cells.iter().copied()
    }

    pub fn insert(&mut self, p: Point) {
        self.cells.insert(p);
        self.bbox = Self::tight_bbox(&self.cells);
    }

    pub fn union(&self, other: &Region) -> Region {
        let cells: BTreeSet<Point> = self.cells.union(&other.cells).copied().collect();
        let bbox = Self::tight_bbox(&cells);
        Region { cells, bbox }
    }

    pub fn difference(&self, other: &Region) -> Region {
        let cells: BTreeSet<Point> = self.cells.difference(&other.cells).copied().collect();
        let bbox = Self::tight_bbox(&cells);
        Region { cells, bbox }
    }

    pub fn intersection(&self, other: &Region) -> Region {
        let cells: BTreeSet<Point> = self.cells.intersection(&other.cells).copied().collect();
        let bbox = Self::tight_bbox(&cells);
        Region { cells, bbox }
    }

    pub fn is_subset(&self, other: &Region) -> bool {
        self.cells.is_subset(&other.cells)
    }

    /// Translate the region so it fits in a window that does not wrap the
    /// torus. Fails if some axis projection covers the whole torus.
    pub fn unwrapped(&self, ctx: &TorusContext) -> Result<Region, GridError> {
        let shift_x = Self::axis_shift(self.cells.iter().map(|p| p.x), ctx.width)?;
        let shift_y = Self::axis_shift(self.cells.iter().map(|p| p.y), ctx.height)?;
        Ok(Region::from_plane_cells(self.cells.iter().map(|p| {
            Point::new(
                (p.x + shift_x).rem_euclid(ctx.width),
                (p.y + shift_y).rem_euclid(ctx.height),
            )
        })))
    }

    fn axis_shift<I: Iterator<Item = i32>>(coords: I, n: i32) -> Result<i32, GridError> {
        let mut used = vec![false; n as usize];
        for c in coords {
            used[c.rem_euclid(n) as usize] = true;
        }
        match (0..n).find(|&c| !used[c as usize]) {
            // Shift so the gap column ends up at coordinate n-1.
            Some(gap) => Ok(n - 1 - gap),
            None => Err(GridError::RegionWraps),
        }
    }

    pub fn total_charge(&self) -> i64 {
        self.cells.iter().map(|&p| charge(p)).sum()
    }
}

/// Cells of `r` at distance 1 from the complement in the chosen metric.
pub fn inner_boundary(r: &Region, metric: Metric, ctx: &TorusContext) -> Region {
    let mut out = Vec::new();
    for p in r.iter() {
        let on_boundary = match metric {
            Metric::Generator => ctx.neighbors4(p).iter().any(|&q| !r.contains(q)),
            Metric::Linf => ctx.neighbors8(p).iter().any(|&q| !r.contains(q)),
        };
        if on_boundary {
            out.push(p);
        }
    }
    Region::from_plane_cells(out)
}

/// Maximal connected pieces of `r`, ordered by their lexicographically least
/// cell.
pub fn connected_components(r: &Region, metric: Metric, ctx: &TorusContext) -> Vec<Region> {
    let mut seen: BTreeSet<Point> = BTreeSet::new();
    let mut comps = Vec::new();
    for start in r.iter() {
        if seen.contains(&start) {
            continue;
        }
        let mut comp = Vec::new();
        let mut stack = vec![start];
        seen.insert(start);
        while let Some(p) = stack.pop() {
            comp.push(p);
            let push = |q: Point, seen: &mut BTreeSet<Point>, stack: &mut Vec<Point>| {
                if r.contains(q) && seen.insert(q) {
                    stack.push(q);
                }
            };
            match metric {
                Metric::Generator => {
                    for q in ctx.neighbors4(p) {
                        push(q, &mut seen, &mut stack);
                    }
                }
                Metric::Linf => {
                    for q in ctx.neighbors8(p) {
                        push(q, &mut seen, &mut stack);
                    }
                }
            }
        }
        comps.push(Region::from_plane_cells(comp));
    }
    comps
}

/// True iff the complement of `r` within a 1-cell padded bounding box is
/// 4-connected, i.e. the region has no holes. Requires 4-connected input.
pub fn is_simply_connected(r: &Region, ctx: &TorusContext) -> Result<bool, GridError> {
    if r.is_empty() {
        return Ok(true);
    }
    if connected_components(r, Metric::Generator, ctx).len() != 1 {
        return Err(GridError::Disconnected);
    }
    let r = r.unwrapped(ctx)?;
    let bb = r.bbox().expect("nonempty");
    let (x0, y0, x1, y1) = (bb.x0 - 1, bb.y0 - 1, bb.x1 + 1, bb.y1 + 1);
    let w = (x1 - x0 + 1) as usize;
    let h = (y1 - y0 + 1) as usize;
    let at = |p: Point| ((p.y - y0) as usize) * w + (p.x - x0) as usize;
    let mut outside = vec![false; w * h];
    let start = Point::new(x0, y0);
    let mut stack = vec![start];
    outside[at(start)] = true;
    let mut reached = 1usize;
    while let Some(p) = stack.pop() {
        for (dx, dy) in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
            let q = Point::new(p.x + dx, p.y + dy);
            if q.x < x0 || q.x > x1 || q.y < y0 || q.y > y1 {
                continue;
            }
            if !r.contains(q) && !outside[at(q)] {
                outside[at(q)] = true;
                reached += 1;
                stack.push(q);
            }
        }
    }
    let complement = w * h - r.len();
    Ok(reached == complement)
}

pub fn total_charge(r: &Region) -> i64 {
    r.total_charge()
}

/// Finite list of pairwise-disjoint rectangles whose union is 4-connected.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RectPolygon {
    rects: Vec<Rect>,
}

impl RectPolygon {
    pub fn new(rects: Vec<Rect>) -> Result<Self, GridError> {
        for (i, a) in rects.iter().enumerate() {
            for b in rects.iter().skip(i + 1) {
                let overlap_x = a.x0 <= b.x1 && b.x0 <= a.x1;
                let overlap_y = a.y0 <= b.y1 && b.y0 <= a.y1;
                if overlap_x && overlap_y {
                    return Err(GridError::OverlappingRects);
                }
            }
        }
        let poly = RectPolygon { rects };
        if poly.rects.is_empty() {
            return Err(GridError::EmptyPolygon);
        }
        // Connectivity of the union under generator adjacency, checked on a
        // large plane context so nothing wraps.
        let region = poly.region();
        let bb = region.bbox().expect("nonempty");
        let ctx = TorusContext::new(
            (bb.x1 - bb.x0 + 3).max(4) + bb.x0.abs() + 4,
            (bb.y1 - bb.y0 + 3).max(4) + bb.y0.abs() + 4,
        )
        .expect("plane context");
        let shifted = Region::from_plane_cells(
            region
                .iter()
                .map(|p| Point::new(p.x - bb.x0 + 1, p.y - bb.y0 + 1)),
        );
        if connected_components(&shifted, Metric::Generator, &ctx).len() != 1 {
            return Err(GridError::Disconnected);
        }
        Ok(poly)
    }

    pub fn rects(&self) -> &[Rect] {
        &self.rects
    }

    pub fn region(&self) -> Region {
        Region::from_plane_cells(self.rects.iter().flat_map(|r| r.cells()))
    }
}

/// Simple lattice path made of concatenated horizontal/vertical runs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathSegment {
    vertices: Vec<Point>,
}

impl PathSegment {
    pub fn new(vertices: Vec<Point>) -> Result<Self, GridError> {
        if vertices.is_empty() {
            return Err(GridError::EmptyPath);
        }
        let distinct: BTreeSet<Point> = vertices.iter().copied().collect();
        if distinct.len() != vertices.len() {
            return Err(GridError::RepeatedVertex);
        }
        for w in vertices.windows(2) {
            let dx = (w[1].x - w[0].x).abs();
            let dy = (w[1].y - w[0].y).abs();
            if dx + dy != 1 {
                return Err(GridError::NotAdjacent);
            }
        }
        Ok(PathSegment { vertices })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Lengths (in vertices) of the maximal straight runs.
    pub fn run_lengths(&self) -> Vec<usize> {
        if self.vertices.len() == 1 {
            return vec![1];
        }
        let mut runs = Vec::new();
        let mut run_start = 0usize;
        let dir = |a: Point, b: Point| (b.x - a.x, b.y - a.y);
        let mut cur = dir(self.vertices[0], self.vertices[1]);
        for i in 1..self.vertices.len() - 1 {
            let d = dir(self.vertices[i], self.vertices[i + 1]);
            if d != cur {
                runs.push(i - run_start + 1);
                run_start = i;
                cur = d;
            }
        }
        runs.push(self.vertices.len() - run_start);
        runs
    }

    pub fn cell_set(&self) -> BTreeSet<Point> {
        self.vertices.iter().copied().collect()
    }
}

/// JSON form of a region: `{"w":..,"h":..,"cells":[[x,y],...]}` with cells
/// sorted lexicographically.
#[derive(Debug, Serialize, Deserialize)]
pub struct RegionJson {
    pub w: i32,
    pub h: i32,
    pub cells: Vec<[i32; 2]>,
}

pub fn region_to_json(r: &Region, ctx: &TorusContext) -> RegionJson {
    RegionJson {
        w: ctx.width,
        h: ctx.height,
        cells: r.iter().map(|p| [p.x, p.y]).collect(),
    }
}

pub fn region_from_json(j: &RegionJson) -> Result<(TorusContext, Region), GridError> {
    let ctx = TorusContext::new(j.w, j.h)?;
    let region = Region::from_cells(&ctx, j.cells.iter().map(|c| Point::new(c[0], c[1])));
    Ok((ctx, region))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx100() -> TorusContext {
        TorusContext::new(100, 100).unwrap()
    }

    #[test]
    fn charge_values() {
        assert_eq!(charge(Point::new(0, 0)), 1);
        assert_eq!(charge(Point::new(1, 0)), -1);
        assert_eq!(charge(Point::new(2, 3)), -1);
    }

    #[test]
    fn charge_periodic_and_flips() {
        for x in -3..3 {
            for y in -3..3 {
                let p = Point::new(x, y);
                assert_eq!(charge(p), charge(Point::new(x + 2, y)));
                assert_eq!(charge(p), charge(Point::new(x, y + 2)));
                assert_eq!(charge(p), -charge(Point::new(x + 1, y)));
                assert_eq!(charge(p), -charge(Point::new(x, y + 1)));
            }
        }
    }

    #[test]
    fn linf_examples() {
        let ctx = ctx100();
        assert_eq!(linf_dist(Point::new(0, 0), Point::new(3, 2), &ctx), 3);
        assert_eq!(linf_dist(Point::new(5, 5), Point::new(5, 5), &ctx), 0);
        assert_eq!(linf_dist(Point::new(0, 0), Point::new(99, 0), &ctx), 1);
    }

    #[test]
    fn inner_boundary_examples() {
        let ctx = ctx100();
        let single = Region::from_rect(Rect::new(3, 3, 3, 3).unwrap());
        assert_eq!(inner_boundary(&single, Metric::Generator, &ctx), single);
        assert_eq!(inner_boundary(&single, Metric::Linf, &ctx), single);

        let r4 = Region::from_rect(Rect::new(10, 10, 13, 13).unwrap());
        let b_gen = inner_boundary(&r4, Metric::Generator, &ctx);
        let b_linf = inner_boundary(&r4, Metric::Linf, &ctx);
        assert_eq!(b_gen.len(), 12);
        assert_eq!(b_linf.len(), 12);

        // L-shaped hexomino: all six cells are linf-boundary.
        let hexo = Region::from_plane_cells([
            Point::new(0, 0),
            Point::new(1, 0),
            Point::new(2, 0),
            Point::new(3, 0),
            Point::new(0, 1),
            Point::new(0, 2),
        ]);
        assert_eq!(inner_boundary(&hexo, Metric::Linf, &ctx).len(), 6);
    }

    #[test]
    fn components_examples() {
        let ctx = ctx100();
        let two = Region::from_plane_cells([Point::new(0, 0), Point::new(5, 5)]);
        assert_eq!(connected_components(&two, Metric::Generator, &ctx).len(), 2);

        let rect = Region::from_rect(Rect::new(0, 0, 6, 2).unwrap());
        assert_eq!(connected_components(&rect, Metric::Generator, &ctx).len(), 1);

        // Plus pentomino minus its center: four components under 4-adjacency.
        let plus = Region::from_plane_cells([
            Point::new(1, 0),
            Point::new(0, 1),
            Point::new(2, 1),
            Point::new(1, 2),
        ]);
        assert_eq!(connected_components(&plus, Metric::Generator, &ctx).len(), 4);
        assert_eq!(connected_components(&plus, Metric::Linf, &ctx).len(), 1);
    }

    #[test]
    fn simple_connectivity() {
        let ctx = ctx100();
        for w in 1..=12 {
            for h in 1..=12 {
                let r = Region::from_rect(Rect::new(2, 2, 1 + w, 1 + h).unwrap());
                assert!(is_simply_connected(&r, &ctx).unwrap());
            }
        }
        // 3x3 ring has a hole.
        let ring = Region::from_plane_cells(
            Rect::new(0, 0, 2, 2)
                .unwrap()
                .cells()
                .filter(|p| *p != Point::new(1, 1)),
        );
        assert!(!is_simply_connected(&ring, &ctx).unwrap());
    }

    #[test]
    fn charge_additivity() {
        let r = Region::from_rect(Rect::new(0, 0, 2, 2).unwrap());
        assert_eq!(r.total_charge(), 1);
        let sub = Region::from_rect(Rect::new(0, 0, 0, 2).unwrap());
        assert_eq!(
            r.total_charge(),
            sub.total_charge() + r.difference(&sub).total_charge()
        );
        let even = Region::from_rect(Rect::new(3, 5, 6, 10).unwrap());
        assert_eq!(even.total_charge(), 0);
    }

    #[test]
    fn rect_charge_closed_form() {
        for x0 in -2..2 {
            for y0 in -2..2 {
                for w in 1..5 {
                    for h in 1..5 {
                        let r = Rect::new(x0, y0, x0 + w - 1, y0 + h - 1).unwrap();
                        let brute: i64 = r.cells().map(charge).sum();
                        assert_eq!(r.total_charge(), brute);
                    }
                }
            }
        }
    }

    #[test]
    fn unwrap_detects_wrap() {
        let ctx = TorusContext::new(6, 6).unwrap();
        let band = Region::from_cells(&ctx, (0..6).map(|x| Point::new(x, 0)));
        assert!(band.unwrapped(&ctx).is_err());
        let wrapped = Region::from_cells(&ctx, [Point::new(5, 0), Point::new(0, 0)]);
        let un = wrapped.unwrapped(&ctx).unwrap();
        let bb = un.bbox().unwrap();
        assert_eq!(bb.width(), 2);
    }

    #[test]
    fn path_runs() {
        let p = PathSegment::new(vec![
            Point::new(0, 0),
            Point::new(1, 0),
            Point::new(2, 0),
            Point::new(2, 1),
            Point::new(2, 2),
        ])
        .unwrap();
        assert_eq!(p.run_lengths(), vec![3, 3]);
    }
}
