//! Four-step subdivision of a rectangular polygon into rectangles with
//! bounded sides, corner clearances against a marked boundary set, and no
//! four rectangles meeting near a point.
//!
//! Step 1 draws a chord parallel to every horizontal side at offset 3d..4d;
//! step 2 extends interior-facing vertical walls to the first chord; these
//! leave rectangular faces with sides >= 3d. Steps 3 and 4 slice each face
//! into columns then rows of spans d/2..d, nudging every cut away from
//! marked points and previously created corners.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

use crate::error::MarkerError;
use crate::grid::{Point, Rect, RectPolygon, Region};

pub struct SubdivisionAudit {
    pub side_lo: i32,
    pub side_hi: i32,
    pub corner_clearance: i32,
    pub min_corner_to_s: i32,
    pub four_corner_radius: i32,
}

/// Subdivide `rp` into rectangles with side lengths in [d/2, d], corners
/// clear of `s`, and no four rectangles near a point.
pub fn subdivide_no4(
    rp: &RectPolygon,
    d: i32,
    eps_num: i64,
    eps_den: i64,
    s: &BTreeSet<Point>,
    seed: u64,
) -> Result<(Vec<Rect>, SubdivisionAudit), MarkerError> {
    let clear = ((eps_num * d as i64) as f64 / (60.0 * eps_den as f64)).ceil() as i32;
    let clear = clear.max(1);
    let sep = ((eps_num * d as i64) as f64 / eps_den as f64).ceil() as i32;
    let region = rp.region();
    let bb = region.bbox().expect("nonempty polygon");

    // Precondition: parallel sides of the polygon at least 12d apart, marked
    // points clear of corners and pairwise separated.
    let corners = polygon_corners(&region);
    check_parallel_side_gap(&region, 12 * d)?;
    for p in s {
        if !boundary_cells(&region).contains(p) {
            return Err(MarkerError::SubdividePre(format!(
                "marked point {:?} not on the boundary",
                p
            )));
        }
        for c in &corners {
            if linf_plane(*p, *c) < clear {
                return Err(MarkerError::SubdividePre(format!(
                    "marked point {:?} too close to corner {:?}",
                    p, c
                )));
            }
        }
    }
    let sv: Vec<Point> = s.iter().copied().collect();
    for (i, &p) in sv.iter().enumerate() {
        for &q in sv.iter().skip(i + 1) {
            let dd = linf_plane(p, q);
            if dd <= 1 {
                return Err(MarkerError::SubdividePre(format!(
                    "marked points {:?},{:?} adjacent",
                    p, q
                )));
            }
            if dd < sep {
                return Err(MarkerError::SubdividePre(format!(
                    "marked points {:?},{:?} closer than {}",
                    p, q, sep
                )));
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x53756264);

    // Steps 1+2: horizontal chords and vertical extensions as cut edges.
    let mut hcuts: Vec<(i32, i32, i32)> = Vec::new(); // (y, x_lo, x_hi): cut between rows y and y+1
    let mut vcuts: Vec<(i32, i32, i32)> = Vec::new(); // (x, y_lo, y_hi): cut between cols x and x+1
    for side in horizontal_sides(&region) {
        let (y, xa, xb, inward) = side; // inward: +1 region above edge grows up? see below
        let mid = (xa + xb) / 2;
        let mut placed = false;
        let mut gs: Vec<i32> = (3 * d..=4 * d).collect();
        shuffle(&mut gs, &mut rng);
        for g in gs {
            // Cut between rows y_c and y_c+1 at distance ~g from the side.
            let y_c = if inward > 0 { y + g } else { y - g - 1 };
            if !region.contains(Point::new(mid, y_c)) || !region.contains(Point::new(mid, y_c + 1))
            {
                continue;
            }
            // Maximal interval through mid where both rows are inside.
            let mut lo = mid;
            while region.contains(Point::new(lo - 1, y_c)) && region.contains(Point::new(lo - 1, y_c + 1)) {
                lo -= 1;
            }
            let mut hi = mid;
            while region.contains(Point::new(hi + 1, y_c)) && region.contains(Point::new(hi + 1, y_c + 1)) {
                hi += 1;
            }
            // Clearance of the chord endpoints from corners and marks.
            let endpoints = [
                Point::new(lo, y_c),
                Point::new(lo, y_c + 1),
                Point::new(hi, y_c),
                Point::new(hi, y_c + 1),
            ];
            let ok = endpoints.iter().all(|e| {
                corners.iter().all(|c| linf_plane(*e, *c) >= clear)
                    && s.iter().all(|p| linf_plane(*e, *p) >= clear)
            });
            if ok {
                hcuts.push((y_c, lo, hi));
                placed = true;
                break;
            }
        }
        if !placed {
            return Err(MarkerError::SubdividePre(format!(
                "no chord placement for side y={y} [{xa},{xb}]"
            )));
        }
    }
    // Step 2: extend vertical walls from concave corners to the first chord.
    for ext in concave_vertical_extensions(&region) {
        let (x, y_start, dir) = ext; // cut between cols x,x+1 starting at row y_start going dir
        let mut y_end = y_start;
        loop {
            let next = y_end + dir;
            if !region.contains(Point::new(x, next)) || !region.contains(Point::new(x + 1, next)) {
                break; // hit the boundary without a chord: stop at the wall
            }
            // Does a chord cross here (between y_end and next)?
            let boundary_row = if dir > 0 { y_end } else { next };
            if hcuts
                .iter()
                .any(|&(cy, lo, hi)| cy == boundary_row && x >= lo - 1 && x <= hi)
            {
                break;
            }
            y_end = next;
        }
        let (lo, hi) = if dir > 0 { (y_start, y_end) } else { (y_end, y_start) };
        vcuts.push((x, lo, hi));
    }

    // Materialize faces.
    let ids = flood_faces(&region, bb, &hcuts, &vcuts);
    let faces = face_rects(&region, bb, &ids)?;
    for f in &faces {
        if f.width() < 3 * d || f.height() < 3 * d {
            return Err(MarkerError::SubdividePre(format!(
                "face {:?} thinner than 3d after the first two steps",
                f
            )));
        }
    }

    // Steps 3+4: slice each face into columns then rows, dodging marks and
    // accumulated corners. Cut endpoints keep `clear` from marked points and
    // a four-corner-safe stagger from other cut corners.
    let lo_span = d / 2;
    let sep_cut = clear + 1;
    let mut avoid_corner: BTreeSet<Point> = corners.iter().copied().collect();
    for &(y, xl, xh) in &hcuts {
        avoid_corner.insert(Point::new(xl, y));
        avoid_corner.insert(Point::new(xh, y));
    }
    for &(x, yl, yh) in &vcuts {
        avoid_corner.insert(Point::new(x, yl));
        avoid_corner.insert(Point::new(x, yh));
    }
    let admissible = |e: Point, avoid_corner: &BTreeSet<Point>| {
        s.iter().all(|p| linf_plane(e, *p) >= clear)
            && avoid_corner.iter().all(|p| linf_plane(e, *p) >= sep_cut)
    };
    let mut out: Vec<Rect> = Vec::new();
    for f in &faces {
        let col_pred = |x: i32| {
            [
                Point::new(x, f.y0),
                Point::new(x + 1, f.y0),
                Point::new(x, f.y1),
                Point::new(x + 1, f.y1),
            ]
            .iter()
            .all(|e| admissible(*e, &avoid_corner))
        };
        let col_cuts = pick_cuts(f.x0, f.x1, lo_span, d, col_pred, &mut rng).ok_or_else(|| {
            let blocked: Vec<i32> = (f.x0..f.x1).filter(|&x| !col_pred(x)).collect();
            MarkerError::SubdividePre(format!(
                "cannot slice face {:?}; blocked columns {:?}",
                f, blocked
            ))
        })?;
        for &x in &col_cuts {
            avoid_corner.insert(Point::new(x, f.y0));
            avoid_corner.insert(Point::new(x, f.y1));
        }
        let mut xs = vec![f.x0 - 1];
        xs.extend(col_cuts.iter().copied());
        xs.push(f.x1);
        for wpair in xs.windows(2) {
            let (cx0, cx1) = (wpair[0] + 1, wpair[1]);
            let row_cuts = pick_cuts(
                f.y0,
                f.y1,
                lo_span,
                d,
                |yy| {
                    [
                        Point::new(cx0, yy),
                        Point::new(cx0, yy + 1),
                        Point::new(cx1, yy),
                        Point::new(cx1, yy + 1),
                    ]
                    .iter()
                    .all(|e| admissible(*e, &avoid_corner))
                },
                &mut rng,
            )
            .ok_or_else(|| MarkerError::SubdividePre(format!("cannot slice slab in {:?}", f)))?;
            for &yy in &row_cuts {
                avoid_corner.insert(Point::new(cx0, yy));
                avoid_corner.insert(Point::new(cx1, yy));
            }
            let mut ys = vec![f.y0 - 1];
            ys.extend(row_cuts.iter().copied());
            ys.push(f.y1);
            for hpair in ys.windows(2) {
                out.push(Rect::new(cx0, hpair[0] + 1, cx1, hpair[1]).expect("slice"));
            }
        }
    }

    let audit = audit_subdivision(&region, bb, &out, s, d, clear)?;
    Ok((out, audit))
}

fn shuffle<T>(v: &mut [T], rng: &mut ChaCha8Rng) {
    for i in (1..v.len()).rev() {
        let j = rng.gen_range(0..=i);
        v.swap(i, j);
    }
}

fn linf_plane(a: Point, b: Point) -> i32 {
    (a.x - b.x).abs().max((a.y - b.y).abs())
}

fn boundary_cells(region: &Region) -> BTreeSet<Point> {
    region
        .iter()
        .filter(|p| {
            [(1, 0), (-1, 0), (0, 1), (0, -1)]
                .iter()
                .any(|(dx, dy)| !region.contains(Point::new(p.x + dx, p.y + dy)))
        })
        .collect()
}

/// Cells where the boundary turns: boundary cells with boundary-exposure in
/// two perpendicular directions (convex) or diagonal exposure (concave).
fn polygon_corners(region: &Region) -> Vec<Point> {
    let mut out = Vec::new();
    for p in region.iter() {
        let open = |dx: i32, dy: i32| !region.contains(Point::new(p.x + dx, p.y + dy));
        let horiz = open(1, 0) || open(-1, 0);
        let vert = open(0, 1) || open(0, -1);
        if horiz && vert {
            out.push(p);
            continue;
        }
        // Concave corner: all four neighbors inside but a diagonal outside.
        if !open(1, 0) && !open(-1, 0) && !open(0, 1) && !open(0, -1) {
            if open(1, 1) || open(1, -1) || open(-1, 1) || open(-1, -1) {
                out.push(p);
            }
        }
    }
    out
}

/// Horizontal sides: (edge row y, x_lo, x_hi, inward direction +1/-1).
/// `y` is the row of boundary cells; inward +1 means the region continues
/// upward from this bottom side.
fn horizontal_sides(region: &Region) -> Vec<(i32, i32, i32, i32)> {
    let mut out = Vec::new();
    let mut seen: BTreeSet<(Point, i32)> = BTreeSet::new();
    for p in region.iter() {
        for dir in [-1i32, 1] {
            if region.contains(Point::new(p.x, p.y + dir)) {
                continue; // not exposed on that side
            }
            if seen.contains(&(p, dir)) {
                continue;
            }
            // Walk the maximal run.
            let mut lo = p.x;
            while region.contains(Point::new(lo - 1, p.y))
                && !region.contains(Point::new(lo - 1, p.y + dir))
            {
                lo -= 1;
            }
            let mut hi = p.x;
            while region.contains(Point::new(hi + 1, p.y))
                && !region.contains(Point::new(hi + 1, p.y + dir))
            {
                hi += 1;
            }
            for x in lo..=hi {
                seen.insert((Point::new(x, p.y), dir));
            }
            out.push((p.y, lo, hi, -dir));
        }
    }
    out.sort_unstable();
    out
}

/// Vertical wall extensions entering the interior at concave corners:
/// (x of the cut between columns x and x+1, starting row, direction).
fn concave_vertical_extensions(region: &Region) -> Vec<(i32, i32, i32)> {
    let mut out = Vec::new();
    // A vertical wall between columns x (inside) and x+1 (inside) does not
    // exist; walls have inside/outside. An extension starts where a vertical
    // side ends at a concave corner: cells c with (c.x+1 outside, c.y+dir
    // inside, and (c.x+1, c.y+dir) inside) -- the wall line continues between
    // columns c.x and c.x+1 into the region.
    for p in region.iter() {
        for side in [1i32, -1] {
            // side +1: wall to the right of p (p inside, right outside).
            let wall_x = if side > 0 { p.x } else { p.x - 1 };
            let outside = Point::new(p.x + side, p.y);
            if region.contains(outside) {
                continue;
            }
            for dir in [1i32, -1] {
                let above = Point::new(p.x, p.y + dir);
                let diag = Point::new(p.x + side, p.y + dir);
                if region.contains(above) && region.contains(diag) {
                    // The wall ends here; extend between wall_x and wall_x+1.
                    out.push((wall_x, p.y + dir, dir));
                }
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

fn check_parallel_side_gap(region: &Region, min_gap: i32) -> Result<(), MarkerError> {
    // Any two distinct parallel sides must be min_gap apart perpendicular,
    // unless their projections are themselves min_gap apart (so that wall
    // extensions cannot collide).
    let check = |sides: &[(i32, i32, i32, i32)], axis: &str| -> Result<(), MarkerError> {
        for (i, &(c1, a1, b1, _)) in sides.iter().enumerate() {
            for &(c2, a2, b2, _) in sides.iter().skip(i + 1) {
                if c1 == c2 {
                    continue; // collinear pieces of one wall line
                }
                let perp = (c1 - c2).abs();
                let proj_gap = if a1 <= b2 && a2 <= b1 {
                    0
                } else {
                    (a1 - b2).max(a2 - b1)
                };
                if perp < min_gap && proj_gap < min_gap {
                    return Err(MarkerError::SubdividePre(format!(
                        "{axis} sides at {c1},{c2} closer than {min_gap}"
                    )));
                }
            }
        }
        Ok(())
    };
    check(&horizontal_sides(region), "horizontal")?;
    let transposed = Region::from_plane_cells(region.iter().map(|p| Point::new(p.y, p.x)));
    check(&horizontal_sides(&transposed), "vertical")
}

fn flood_faces(
    region: &Region,
    bb: Rect,
    hcuts: &[(i32, i32, i32)],
    vcuts: &[(i32, i32, i32)],
) -> Vec<u32> {
    let w = bb.width() as usize;
    let h = bb.height() as usize;
    let at = |p: Point| ((p.y - bb.y0) as usize) * w + (p.x - bb.x0) as usize;
    let blocked_h = |x: i32, y: i32| {
        // crossing between (x,y) and (x,y+1)
        hcuts.iter().any(|&(cy, lo, hi)| cy == y && x >= lo && x <= hi)
    };
    let blocked_v = |x: i32, y: i32| {
        // crossing between (x,y) and (x+1,y)
        vcuts.iter().any(|&(cx, lo, hi)| cx == x && y >= lo && y <= hi)
    };
    let mut ids = vec![u32::MAX; w * h];
    let mut next = 0u32;
    for start in region.iter() {
        if ids[at(start)] != u32::MAX {
            continue;
        }
        let id = next;
        next += 1;
        let mut stack = vec![start];
        ids[at(start)] = id;
        while let Some(p) = stack.pop() {
            let tryv = |q: Point, ok: bool, stack: &mut Vec<Point>, ids: &mut Vec<u32>| {
                if ok && region.contains(q) && ids[at(q)] == u32::MAX {
                    ids[at(q)] = id;
                    stack.push(q);
                }
            };
            tryv(
                Point::new(p.x + 1, p.y),
                !blocked_v(p.x, p.y),
                &mut stack,
                &mut ids,
            );
            tryv(
                Point::new(p.x - 1, p.y),
                !blocked_v(p.x - 1, p.y),
                &mut stack,
                &mut ids,
            );
            tryv(
                Point::new(p.x, p.y + 1),
                !blocked_h(p.x, p.y),
                &mut stack,
                &mut ids,
            );
            tryv(
                Point::new(p.x, p.y - 1),
                !blocked_h(p.x, p.y - 1),
                &mut stack,
                &mut ids,
            );
        }
    }
    ids
}

fn face_rects(region: &Region, bb: Rect, ids: &[u32]) -> Result<Vec<Rect>, MarkerError> {
    let w = bb.width() as usize;
    let mut extents: Vec<(i32, i32, i32, i32, i64)> = Vec::new();
    for p in region.iter() {
        let id = ids[((p.y - bb.y0) as usize) * w + (p.x - bb.x0) as usize] as usize;
        while extents.len() <= id {
            extents.push((i32::MAX, i32::MAX, i32::MIN, i32::MIN, 0));
        }
        let e = &mut extents[id];
        e.0 = e.0.min(p.x);
        e.1 = e.1.min(p.y);
        e.2 = e.2.max(p.x);
        e.3 = e.3.max(p.y);
        e.4 += 1;
    }
    let mut out = Vec::new();
    for (x0, y0, x1, y1, count) in extents {
        let r = Rect::new(x0, y0, x1, y1).map_err(MarkerError::Grid)?;
        if r.area() != count {
            return Err(MarkerError::SubdividePre(format!(
                "face {:?} is not rectangular after the first two steps",
                r
            )));
        }
        out.push(r);
    }
    Ok(out)
}

/// Cut positions over [lo_c, hi_c] with spans within [lo, hi] and a
/// per-position admissibility predicate; depth-first with memoized dead
/// starts and seeded span order so the produced patterns stay irregular.
/// Returns positions x meaning a cut after coordinate x.
fn pick_cuts(
    lo_c: i32,
    hi_c: i32,
    lo: i32,
    hi: i32,
    admissible: impl Fn(i32) -> bool,
    rng: &mut ChaCha8Rng,
) -> Option<Vec<i32>> {
    #[allow(clippy::too_many_arguments)]
    fn rec(
        start: i32,
        hi_c: i32,
        lo: i32,
        hi: i32,
        admissible: &impl Fn(i32) -> bool,
        dead: &mut BTreeSet<i32>,
        cuts: &mut Vec<i32>,
        rng: &mut ChaCha8Rng,
    ) -> bool {
        let remaining = hi_c - start + 1;
        if remaining <= hi {
            if remaining >= lo {
                return true;
            }
        }
        if dead.contains(&start) {
            return false;
        }
        if remaining > hi {
            let mut spans: Vec<i32> = (lo..=hi).collect();
            shuffle(&mut spans, rng);
            for span in spans {
                let pos = start + span - 1;
                if hi_c - pos < lo {
                    continue;
                }
                if admissible(pos) {
                    cuts.push(pos);
                    if rec(pos + 1, hi_c, lo, hi, admissible, dead, cuts, rng) {
                        return true;
                    }
                    cuts.pop();
                }
            }
        }
        dead.insert(start);
        false
    }
    let mut cuts = Vec::new();
    let mut dead = BTreeSet::new();
    if rec(lo_c, hi_c, lo, hi, &admissible, &mut dead, &mut cuts, rng) {
        Some(cuts)
    } else {
        None
    }
}

fn audit_subdivision(
    region: &Region,
    bb: Rect,
    rects: &[Rect],
    s: &BTreeSet<Point>,
    d: i32,
    clear: i32,
) -> Result<SubdivisionAudit, MarkerError> {
    // Partition check.
    let total: i64 = rects.iter().map(|r| r.area()).sum();
    if total != region.len() as i64 {
        return Err(MarkerError::AuditFailed {
            level: 0,
            what: "subdivision does not cover the polygon".into(),
        });
    }
    let mut side_lo = i32::MAX;
    let mut side_hi = 0;
    for r in rects {
        side_lo = side_lo.min(r.width().min(r.height()));
        side_hi = side_hi.max(r.width().max(r.height()));
        if r.width() < d / 2 || r.width() > d || r.height() < d / 2 || r.height() > d {
            return Err(MarkerError::AuditFailed {
                level: 0,
                what: format!("rectangle {:?} outside [d/2,d]", r),
            });
        }
    }
    // Corner-vs-marks clearance.
    let mut min_cs = i32::MAX;
    for r in rects {
        for c in [
            Point::new(r.x0, r.y0),
            Point::new(r.x0, r.y1),
            Point::new(r.x1, r.y0),
            Point::new(r.x1, r.y1),
        ] {
            for p in s {
                min_cs = min_cs.min(linf_plane(c, *p));
            }
        }
    }
    if !s.is_empty() && min_cs < clear {
        return Err(MarkerError::AuditFailed {
            level: 0,
            what: format!("corner within {min_cs} of a marked point (need {clear})"),
        });
    }
    // No point within `clear` of four rectangles.
    let w = bb.width() as usize;
    let mut ids = vec![u32::MAX; w * (bb.height() as usize)];
    for (i, r) in rects.iter().enumerate() {
        for p in r.cells() {
            ids[((p.y - bb.y0) as usize) * w + (p.x - bb.x0) as usize] = i as u32;
        }
    }
    let mut radius = i32::MAX;
    for p in region.iter() {
        let mut r = 0;
        'grow: loop {
            let mut seen = [u32::MAX; 4];
            let mut n = 0;
            for dx in -r..=r {
                for dy in -r..=r {
                    let q = Point::new(p.x + dx, p.y + dy);
                    if !region.contains(q) {
                        continue;
                    }
                    let id = ids[((q.y - bb.y0) as usize) * w + (q.x - bb.x0) as usize];
                    if !seen[..n].contains(&id) {
                        if n == 3 {
                            break 'grow;
                        }
                        seen[n] = id;
                        n += 1;
                    }
                }
            }
            r += 1;
            if r > radius {
                break;
            }
        }
        radius = radius.min(r - 1);
        if radius < clear {
            return Err(MarkerError::AuditFailed {
                level: 0,
                what: format!("four rectangles within {radius} of {:?}", p),
            });
        }
    }
    Ok(SubdivisionAudit {
        side_lo,
        side_hi,
        corner_clearance: clear,
        min_corner_to_s: if s.is_empty() { i32::MAX } else { min_cs },
        four_corner_radius: radius,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::RectPolygon;

    #[test]
    fn plain_rectangle_grid() {
        let rp = RectPolygon::new(vec![Rect::new(0, 0, 199, 149).unwrap()]).unwrap();
        let (rects, audit) = subdivide_no4(&rp, 10, 1, 2, &BTreeSet::new(), 3).unwrap();
        assert!(!rects.is_empty());
        assert!(audit.side_lo >= 5 && audit.side_hi <= 10);
        assert!(audit.four_corner_radius >= audit.corner_clearance);
    }

    #[test]
    fn l_shaped_polygon() {
        // Two rects forming an L with all parallel side gaps >= 12d (d=8):
        // the leg is 96 narrower than the base so the re-entrant wall stays
        // 12d from the outer wall.
        let rp = RectPolygon::new(vec![
            Rect::new(0, 0, 239, 109).unwrap(),
            Rect::new(0, 110, 109, 239).unwrap(),
        ])
        .unwrap();
        let (rects, audit) = subdivide_no4(&rp, 8, 1, 2, &BTreeSet::new(), 4).unwrap();
        let total: i64 = rects.iter().map(|r| r.area()).sum();
        assert_eq!(total, rp.region().len() as i64);
        assert!(audit.four_corner_radius >= audit.corner_clearance);
    }

    #[test]
    fn rejects_offset_near_walls() {
        // Re-entrant wall 4 cells from the outer wall: the precondition
        // audit must refuse it.
        let rp = RectPolygon::new(vec![
            Rect::new(0, 0, 127, 109).unwrap(),
            Rect::new(0, 110, 123, 239).unwrap(),
        ])
        .unwrap();
        assert!(subdivide_no4(&rp, 8, 1, 2, &BTreeSet::new(), 4).is_err());
    }

    #[test]
    fn randomized_polygons_with_marks() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let d = 8;
        let gap = 12 * d;
        for _ in 0..20 {
            // L-shaped unions with all side gaps at least 12d.
            let w2 = gap + 8 * rng.gen_range(0..4);
            let h1 = gap + 8 * rng.gen_range(0..4);
            let h2 = gap + 8 * rng.gen_range(0..4);
            let w1 = w2 + gap + 8 * rng.gen_range(0..4);
            let rp = RectPolygon::new(vec![
                Rect::new(0, 0, w1 - 1, h1 - 1).unwrap(),
                Rect::new(0, h1, w2 - 1, h1 + h2 - 1).unwrap(),
            ])
            .unwrap();
            let region = rp.region();
            // A few marked points along the outer bottom edge, separated.
            let mut s = BTreeSet::new();
            let mut x = 10;
            while x < w1 - 10 && s.len() < 4 {
                s.insert(Point::new(x, 0));
                x += d * 2 + rng.gen_range(0..5);
            }
            for p in &s {
                assert!(region.contains(*p));
            }
            let r = subdivide_no4(&rp, d, 1, 2, &s, rng.gen());
            let (rects, audit) = r.unwrap();
            let total: i64 = rects.iter().map(|r| r.area()).sum();
            assert_eq!(total, region.len() as i64);
            assert!(audit.min_corner_to_s >= audit.corner_clearance);
        }
    }
}
