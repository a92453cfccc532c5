//! Charge calculus: corner functions, the discrete divergence identity on
//! finite regions of the square lattice and its n-dimensional form, and the
//! adjacent-path sum identity.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

use crate::error::StokesError;
use crate::grid::{charge, PathSegment, Point, Region, TorusContext};

/// Both sides of the charge identity. `holds` means `scale * lhs == rhs_numerator`
/// where `scale` is 4 in two dimensions and 2^n in general.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CornerReport {
    pub lhs: i64,
    pub rhs_numerator: i64,
    pub scale: i64,
    pub holds: bool,
}

/// Number of 4-neighbors of `p` inside `r` (plane adjacency).
pub fn edge_count(r: &Region, p: Point) -> Result<u32, StokesError> {
    if !r.contains(p) {
        return Err(StokesError::PointOutsideRegion);
    }
    Ok([(1, 0), (-1, 0), (0, 1), (0, -1)]
        .iter()
        .filter(|(dx, dy)| r.contains(Point::new(p.x + dx, p.y + dy)))
        .count() as u32)
}

/// Number of diagonal neighbors `q` of `p` such that the full unit square
/// spanned by `p` and `q` lies inside `r`.
pub fn square_count(r: &Region, p: Point) -> Result<u32, StokesError> {
    if !r.contains(p) {
        return Err(StokesError::PointOutsideRegion);
    }
    Ok([(1, 1), (1, -1), (-1, 1), (-1, -1)]
        .iter()
        .filter(|(dx, dy)| {
            r.contains(Point::new(p.x + dx, p.y + dy))
                && r.contains(Point::new(p.x + dx, p.y))
                && r.contains(Point::new(p.x, p.y + dy))
        })
        .count() as u32)
}

/// The corner function `4 - 2e + s`; zero away from the sup-metric boundary.
pub fn corner_function(r: &Region, p: Point) -> Result<i64, StokesError> {
    Ok(4 - 2 * edge_count(r, p)? as i64 + square_count(r, p)? as i64)
}

/// Check the identity `sum q = (1/4) sum q*c` on a finite region.
///
/// The right side is summed over the whole region; the corner function
/// vanishes off the boundary so this agrees with the boundary sum and
/// sidesteps any boundary-metric ambiguity.
pub fn stokes_check(r: &Region, ctx: &TorusContext) -> Result<CornerReport, StokesError> {
    let r = r.unwrapped(ctx).map_err(|_| StokesError::RegionWraps)?;
    let lhs: i64 = r.iter().map(charge).sum();
    let mut rhs = 0i64;
    for p in r.iter() {
        rhs += charge(p) * corner_function(&r, p)?;
    }
    Ok(CornerReport {
        lhs,
        rhs_numerator: rhs,
        scale: 4,
        holds: 4 * lhs == rhs,
    })
}

/// Point of the n-dimensional integer lattice, 2 <= n <= 4.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NPoint {
    pub coords: Vec<i32>,
}

impl NPoint {
    pub fn new(coords: Vec<i32>) -> Self {
        NPoint { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn charge(&self) -> i64 {
        if self.coords.iter().sum::<i32>().rem_euclid(2) == 0 {
            1
        } else {
            -1
        }
    }
}

/// Finite set of n-dimensional lattice points of uniform dimension.
#[derive(Debug, Clone)]
pub struct NRegion {
    pub dim: usize,
    cells: BTreeSet<NPoint>,
}

impl NRegion {
    pub fn new(dim: usize, cells: impl IntoIterator<Item = NPoint>) -> Result<Self, StokesError> {
        if !(2..=4).contains(&dim) {
            return Err(StokesError::DimensionOutOfRange(dim));
        }
        let cells: BTreeSet<NPoint> = cells.into_iter().collect();
        if cells.iter().any(|p| p.dim() != dim) {
            return Err(StokesError::DimensionOutOfRange(dim));
        }
        Ok(NRegion { dim, cells })
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains(&self, p: &NPoint) -> bool {
        self.cells.contains(p)
    }

    pub fn iter(&self) -> impl Iterator<Item = &NPoint> {
        self.cells.iter()
    }
}

const ND_CELL_CAP: usize = 10_000;

/// `c_i(x)`: number of i-dimensional unit cubes cornered at `x` and fully
/// inside the region. A cube is given by a choice of i axes and a sign per
/// chosen axis.
fn cube_count(r: &NRegion, x: &NPoint, i: usize) -> u64 {
    let n = r.dim;
    let axes: Vec<usize> = (0..n).collect();
    let mut count = 0u64;
    // Iterate over axis subsets of size i.
    let mut subset: Vec<usize> = (0..i).collect();
    loop {
        // All sign choices for the chosen axes.
        for signs in 0..(1u32 << i) {
            let mut ok = true;
            // Every nonzero offset combination must lie in the region.
            'offsets: for mask in 1..(1u32 << i) {
                let mut q = x.coords.clone();
                for (j, &axis) in subset.iter().enumerate() {
                    if mask & (1 << j) != 0 {
                        q[axis] += if signs & (1 << j) != 0 { 1 } else { -1 };
                    }
                }
                if !r.contains(&NPoint::new(q)) {
                    ok = false;
                    break 'offsets;
                }
            }
            if ok {
                count += 1;
            }
        }
        // Next subset in lexicographic order.
        let mut j = i;
        loop {
            if j == 0 {
                return count;
            }
            j -= 1;
            if subset[j] != axes.len() - (i - j) {
                subset[j] += 1;
                for t in j + 1..i {
                    subset[t] = subset[t - 1] + 1;
                }
                break;
            }
        }
    }
}

/// n-dimensional form of the charge identity with
/// `c(x) = sum_i (-1)^i 2^(n-i) c_i(x)`, `c_0 = 1`.
pub fn stokes_check_nd(r: &NRegion) -> Result<CornerReport, StokesError> {
    let n = r.dim;
    if !(2..=4).contains(&n) {
        return Err(StokesError::DimensionOutOfRange(n));
    }
    if r.len() > ND_CELL_CAP {
        return Err(StokesError::TooLarge(r.len(), ND_CELL_CAP));
    }
    let lhs: i64 = r.iter().map(|p| p.charge()).sum();
    let mut rhs = 0i64;
    for x in r.iter() {
        let mut c = 0i64;
        for i in 0..=n {
            let ci = if i == 0 { 1 } else { cube_count(r, x, i) as i64 };
            let sign = if i % 2 == 0 { 1 } else { -1 };
            c += sign * (1i64 << (n - i)) * ci;
        }
        rhs += x.charge() * c;
    }
    let scale = 1i64 << n;
    Ok(CornerReport {
        lhs,
        rhs_numerator: rhs,
        scale,
        holds: scale * lhs == rhs,
    })
}

/// Which side of the oriented path the companion runs along.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathSide {
    Left,
    Right,
}

/// Sum `q*c` along two adjacent simple paths, each corner function computed
/// relative to the plane minus the other path. The two sums are negatives of
/// each other.
pub fn adjacent_path_sums(
    p: &PathSegment,
    p_star: &PathSegment,
    side: PathSide,
) -> Result<(i64, i64), StokesError> {
    let cells_p = p.cell_set();
    let cells_q = p_star.cell_set();
    if !cells_p.is_disjoint(&cells_q) {
        return Err(StokesError::PathsOverlap);
    }
    for run in p.run_lengths() {
        if run < 5 {
            return Err(StokesError::RunTooShort(run, 5));
        }
    }
    // Structural adjacency: every vertex of each path has a partner at
    // sup-distance 1 on the other, and the companion stays on the stated side
    // of the oriented path (checked on straight-run interiors where the side
    // is unambiguous).
    let near = |a: Point, b: Point| (a.x - b.x).abs().max((a.y - b.y).abs()) == 1;
    for &a in &cells_p {
        if !cells_q.iter().any(|&b| near(a, b)) {
            return Err(StokesError::NotAdjacentPaths);
        }
    }
    for &b in &cells_q {
        if !cells_p.iter().any(|&a| near(a, b)) {
            return Err(StokesError::NotAdjacentPaths);
        }
    }
    let verts = p.vertices();
    for i in 1..verts.len() {
        let d = (verts[i].x - verts[i - 1].x, verts[i].y - verts[i - 1].y);
        // Normal pointing to the stated side of the direction of travel.
        let normal = match side {
            PathSide::Left => (-d.1, d.0),
            PathSide::Right => (d.1, -d.0),
        };
        let probe = Point::new(verts[i].x + normal.0, verts[i].y + normal.1);
        let opposite = Point::new(verts[i].x - normal.0, verts[i].y - normal.1);
        if cells_q.contains(&opposite) && !cells_q.contains(&probe) {
            return Err(StokesError::NotAdjacentPaths);
        }
    }

    let sum_for = |own: &BTreeSet<Point>, other: &BTreeSet<Point>| -> i64 {
        // Corner function relative to the plane minus the other path.
        let mut s = 0i64;
        for &x in own {
            let e = [(1, 0), (-1, 0), (0, 1), (0, -1)]
                .iter()
                .filter(|(dx, dy)| !other.contains(&Point::new(x.x + dx, x.y + dy)))
                .count() as i64;
            let sq = [(1, 1), (1, -1), (-1, 1), (-1, -1)]
                .iter()
                .filter(|(dx, dy)| {
                    !other.contains(&Point::new(x.x + dx, x.y + dy))
                        && !other.contains(&Point::new(x.x + dx, x.y))
                        && !other.contains(&Point::new(x.x, x.y + dy))
                })
                .count() as i64;
            s += charge(x) * (4 - 2 * e + sq);
        }
        s
    };
    Ok((sum_for(&cells_p, &cells_q), sum_for(&cells_q, &cells_p)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Rect;

    fn ctx() -> TorusContext {
        TorusContext::new(64, 64).unwrap()
    }

    #[test]
    fn corner_values() {
        let single = Region::from_rect(Rect::new(3, 3, 3, 3).unwrap());
        assert_eq!(corner_function(&single, Point::new(3, 3)).unwrap(), 4);

        let r5 = Region::from_rect(Rect::new(0, 0, 4, 4).unwrap());
        assert_eq!(edge_count(&r5, Point::new(2, 2)).unwrap(), 4);
        assert_eq!(square_count(&r5, Point::new(2, 2)).unwrap(), 4);
        assert_eq!(corner_function(&r5, Point::new(2, 2)).unwrap(), 0);

        let r3 = Region::from_rect(Rect::new(0, 0, 2, 2).unwrap());
        assert_eq!(edge_count(&r3, Point::new(0, 0)).unwrap(), 2);
        assert_eq!(square_count(&r3, Point::new(0, 0)).unwrap(), 1);
        assert_eq!(corner_function(&r3, Point::new(0, 0)).unwrap(), 1);

        let r2 = Region::from_rect(Rect::new(0, 0, 1, 1).unwrap());
        assert_eq!(square_count(&r2, Point::new(0, 0)).unwrap(), 1);

        assert!(edge_count(&r2, Point::new(5, 5)).is_err());
    }

    #[test]
    fn stokes_small_cases() {
        let c = ctx();
        let single = Region::from_rect(Rect::new(2, 2, 2, 2).unwrap());
        let rep = stokes_check(&single, &c).unwrap();
        assert_eq!((rep.lhs, rep.rhs_numerator), (1, 4));
        assert!(rep.holds);

        let sq2 = Region::from_rect(Rect::new(2, 2, 3, 3).unwrap());
        let rep = stokes_check(&sq2, &c).unwrap();
        assert_eq!((rep.lhs, rep.rhs_numerator), (0, 0));
        assert!(rep.holds);

        let sq3 = Region::from_rect(Rect::new(0, 0, 2, 2).unwrap());
        let rep = stokes_check(&sq3, &c).unwrap();
        assert_eq!((rep.lhs, rep.rhs_numerator), (1, 4));
        assert!(rep.holds);
    }

    #[test]
    fn corner_function_vanishes_off_linf_boundary() {
        let c = ctx();
        let r = Region::from_rect(Rect::new(1, 1, 8, 6).unwrap());
        let b = crate::grid::inner_boundary(&r, crate::grid::Metric::Linf, &c);
        for p in r.iter() {
            if !b.contains(p) {
                assert_eq!(corner_function(&r, p).unwrap(), 0);
            }
        }
    }

    #[test]
    fn nd_singleton_and_2d_agreement() {
        let x = NPoint::new(vec![1, 2, 3]);
        let q = x.charge();
        let r = NRegion::new(3, [x]).unwrap();
        let rep = stokes_check_nd(&r).unwrap();
        assert_eq!(rep.lhs, q);
        assert_eq!(rep.rhs_numerator, 8 * q);
        assert!(rep.holds);

        let c = ctx();
        let r2d = Region::from_rect(Rect::new(0, 0, 3, 2).unwrap());
        let nd = NRegion::new(
            2,
            r2d.iter().map(|p| NPoint::new(vec![p.x, p.y])),
        )
        .unwrap();
        let a = stokes_check(&r2d, &c).unwrap();
        let b = stokes_check_nd(&nd).unwrap();
        assert_eq!(a.lhs, b.lhs);
        assert_eq!(a.rhs_numerator, b.rhs_numerator);
        assert!(a.holds && b.holds);
    }

    #[test]
    fn adjacent_paths_straight() {
        let p = PathSegment::new((0..10).map(|x| Point::new(x, 0)).collect()).unwrap();
        let q = PathSegment::new((0..10).map(|x| Point::new(x, 1)).collect()).unwrap();
        let (s, s2) = adjacent_path_sums(&p, &q, PathSide::Left).unwrap();
        assert_eq!(s, 0);
        assert_eq!(s2, 0);
    }

    #[test]
    fn adjacent_paths_corner() {
        // One right-angle turn, runs of length >= 5, companion to the left,
        // ends aligned on common perpendicular lines.
        let mut v = Vec::new();
        for x in 0..8 {
            v.push(Point::new(x, 0));
        }
        for y in 1..8 {
            v.push(Point::new(7, y));
        }
        let p = PathSegment::new(v).unwrap();
        let mut w = Vec::new();
        for x in 0..7 {
            w.push(Point::new(x, 1));
        }
        for y in 2..8 {
            w.push(Point::new(6, y));
        }
        let q = PathSegment::new(w).unwrap();
        let (s, s2) = adjacent_path_sums(&p, &q, PathSide::Left).unwrap();
        assert_eq!(s, -s2);
        assert_ne!(s, 0);
    }

    #[test]
    fn adjacent_paths_staircase() {
        // Three corners, ends aligned.
        let mut v = Vec::new();
        for x in 0..6 {
            v.push(Point::new(x, 0));
        }
        for y in 1..6 {
            v.push(Point::new(5, y));
        }
        for x in 6..11 {
            v.push(Point::new(x, 5));
        }
        for y in 6..11 {
            v.push(Point::new(10, y));
        }
        let p = PathSegment::new(v).unwrap();
        let mut w = Vec::new();
        for x in 0..5 {
            w.push(Point::new(x, 1));
        }
        for y in 2..7 {
            w.push(Point::new(4, y));
        }
        for x in 5..10 {
            w.push(Point::new(x, 6));
        }
        for y in 7..11 {
            w.push(Point::new(9, y));
        }
        let q = PathSegment::new(w).unwrap();
        let (s, s2) = adjacent_path_sums(&p, &q, PathSide::Left).unwrap();
        assert_eq!(s, -s2);
    }

    #[test]
    fn rejects_short_runs_and_overlap() {
        let p = PathSegment::new(vec![
            Point::new(0, 0),
            Point::new(1, 0),
            Point::new(1, 1),
            Point::new(2, 1),
            Point::new(3, 1),
        ])
        .unwrap();
        let q = PathSegment::new((0..5).map(|x| Point::new(x, 2)).collect()).unwrap();
        assert!(matches!(
            adjacent_path_sums(&p, &q, PathSide::Left),
            Err(StokesError::RunTooShort(_, _))
        ));
        let r = PathSegment::new((0..10).map(|x| Point::new(x, 0)).collect()).unwrap();
        assert!(matches!(
            adjacent_path_sums(&r, &r, PathSide::Left),
            Err(StokesError::PathsOverlap)
        ));
    }
}
