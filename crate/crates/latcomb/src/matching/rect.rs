//! Perfect matchings of a rectangle minus a boundary set of the right
//! charge, by recursive band peeling.
//!
//! Each step strips a two-row band off one side. Cells of the excluded set
//! inside the band stay unmatched; the band is matched internally except for
//! a chosen set of cells paired upward into the remaining rectangle, whose
//! partners become excluded points of the smaller problem (the transfer
//! sets). Transfer positions are enumerated smallest-first and the peel
//! backtracks when a choice strands the remainder.

use std::collections::BTreeSet;

use crate::error::MatchingError;
use crate::grid::{charge, Metric, Point, Rect, Region, TorusContext};
use crate::matching::PartialMatching;

/// Perfect matching of `r` minus `s` (plane coordinates).
pub fn rect_matching_minus(r: Rect, s: &Region) -> Result<PartialMatching, MatchingError> {
    let ctx = TorusContext::new(
        (r.width() + r.x0.abs() + 8).max(8),
        (r.height() + r.y0.abs() + 8).max(8),
    )
    .expect("plane context");
    let region = Region::from_rect(r);
    let boundary = crate::grid::inner_boundary(&region, Metric::Generator, &ctx);
    for p in s.iter() {
        if !boundary.contains(p) {
            return Err(MatchingError::DeletionsNotOnBoundary);
        }
    }
    let k = r.total_charge();
    if s.total_charge() != k {
        return Err(MatchingError::ChargeImbalance(s.total_charge(), k));
    }
    let min_side = r.width().min(r.height());
    if s.len() as i32 >= min_side {
        return Err(MatchingError::DeletionsTooMany(s.len(), min_side));
    }
    let cells: BTreeSet<Point> = s.iter().collect();
    let mut edges = Vec::new();
    solve(r, &cells, &mut edges)?;
    let mut m = PartialMatching::new();
    for (a, b) in edges {
        m.add_edge(a, b)?;
    }
    Ok(m)
}

fn solve(r: Rect, s: &BTreeSet<Point>, edges: &mut Vec<(Point, Point)>) -> Result<(), MatchingError> {
    if s.is_empty() {
        return tile(r, edges);
    }
    // Peel the side holding the least excluded point; prefer bottom, top,
    // left, right for corner points.
    let p0 = *s.iter().next().expect("nonempty");
    let side = if p0.y == r.y0 {
        Side::Bottom
    } else if p0.y == r.y1 {
        Side::Top
    } else if p0.x == r.x0 {
        Side::Left
    } else {
        Side::Right
    };
    let t = Xform::for_side(side, r);
    let local = t.rect();
    let s_local: BTreeSet<Point> = s.iter().map(|&p| t.map(p)).collect();
    let mut local_edges = Vec::new();
    peel_bottom(local, &s_local, &mut local_edges)?;
    for (a, b) in local_edges {
        edges.push((t.unmap(a), t.unmap(b)));
    }
    Ok(())
}

fn tile(r: Rect, edges: &mut Vec<(Point, Point)>) -> Result<(), MatchingError> {
    if r.width() % 2 == 0 {
        for y in r.y0..=r.y1 {
            let mut x = r.x0;
            while x < r.x1 {
                edges.push((Point::new(x, y), Point::new(x + 1, y)));
                x += 2;
            }
        }
        Ok(())
    } else if r.height() % 2 == 0 {
        for x in r.x0..=r.x1 {
            let mut y = r.y0;
            while y < r.y1 {
                edges.push((Point::new(x, y), Point::new(x, y + 1)));
                y += 2;
            }
        }
        Ok(())
    } else {
        Err(MatchingError::PeelStuck(
            "odd rectangle with no deletions".into(),
        ))
    }
}

#[derive(Clone, Copy)]
enum Side {
    Bottom,
    Top,
    Left,
    Right,
}

/// Maps the chosen side of `r` onto the bottom of a local rectangle.
struct Xform {
    side: Side,
    r: Rect,
}

impl Xform {
    fn for_side(side: Side, r: Rect) -> Self {
        Xform { side, r }
    }

    fn rect(&self) -> Rect {
        match self.side {
            Side::Bottom | Side::Top => self.r,
            Side::Left | Side::Right => Rect {
                x0: self.r.y0,
                y0: self.r.x0,
                x1: self.r.y1,
                y1: self.r.x1,
            },
        }
    }

    fn map(&self, p: Point) -> Point {
        match self.side {
            Side::Bottom => p,
            Side::Top => Point::new(p.x, self.r.y0 + self.r.y1 - p.y),
            Side::Left => Point::new(p.y, p.x),
            Side::Right => Point::new(p.y, self.r.x0 + self.r.x1 - p.x),
        }
    }

    fn unmap(&self, p: Point) -> Point {
        match self.side {
            Side::Bottom => p,
            Side::Top => Point::new(p.x, self.r.y0 + self.r.y1 - p.y),
            Side::Left => Point::new(p.y, p.x),
            Side::Right => Point::new(self.r.x0 + self.r.x1 - p.y, p.x),
        }
    }
}

const TRANSFER_TRIES: usize = 256;

fn peel_bottom(
    r: Rect,
    s: &BTreeSet<Point>,
    edges: &mut Vec<(Point, Point)>,
) -> Result<(), MatchingError> {
    if r.height() == 1 {
        return match_row(r, s, edges);
    }
    let band_top = r.y0 + 1;
    let rest = if r.height() > 2 {
        Some(Rect::new(r.x0, r.y0 + 2, r.x1, r.y1).expect("rest"))
    } else {
        None
    };
    let s_band: BTreeSet<Point> = s.iter().filter(|p| p.y <= band_top).copied().collect();
    let s_rest: BTreeSet<Point> = s.iter().filter(|p| p.y > band_top).copied().collect();
    let rest_charge = rest.map(|rr| rr.total_charge()).unwrap_or(0);
    let s_rest_charge: i64 = s_rest.iter().map(|&p| charge(p)).sum();
    let needed = rest_charge - s_rest_charge;

    // Columns whose cell above the band is free to receive a transfer.
    let allowed: Vec<i32> = if rest.is_some() {
        (r.x0..=r.x1)
            .filter(|&x| !s.contains(&Point::new(x, band_top + 1)))
            .collect()
    } else {
        Vec::new()
    };
    let mut tried = 0usize;
    let cap = (s.len() + 2).min(allowed.len());
    let mut result: Option<Vec<(Point, Point)>> = None;
    for size in 0..=cap {
        if result.is_some() {
            break;
        }
        for_each_combination(allowed.len(), size, &mut |idx| {
            let cols: Vec<i32> = idx.iter().map(|&i| allowed[i]).collect();
            let q_sum: i64 = cols
                .iter()
                .map(|&x| charge(Point::new(x, band_top + 1)))
                .sum();
            if q_sum != needed {
                return false;
            }
            tried += 1;
            if tried > TRANSFER_TRIES {
                return true; // stop searching
            }
            let Some(band_edges) = band_match(r, &s_band, &cols) else {
                return false;
            };
            let mut attempt = band_edges;
            if let Some(rr) = rest {
                let mut s_new = s_rest.clone();
                for &x in &cols {
                    s_new.insert(Point::new(x, band_top + 1));
                }
                let mut rest_edges = Vec::new();
                if solve(rr, &s_new, &mut rest_edges).is_err() {
                    return false;
                }
                attempt.extend(rest_edges);
            }
            result = Some(attempt);
            true
        });
    }
    match result {
        Some(found) => {
            edges.extend(found);
            Ok(())
        }
        None => Err(MatchingError::PeelStuck(format!(
            "no viable transfer placement (needed charge {needed})"
        ))),
    }
}

/// Visit k-subsets of 0..n in lexicographic order until the callback
/// returns true; reports whether iteration stopped early.
fn for_each_combination(n: usize, k: usize, f: &mut impl FnMut(&[usize]) -> bool) -> bool {
    if k == 0 {
        return f(&[]);
    }
    if k > n {
        return false;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if f(&idx) {
            return true;
        }
        let mut i = k;
        loop {
            if i == 0 {
                return false;
            }
            i -= 1;
            if idx[i] != i + n - k {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn match_row(
    r: Rect,
    s: &BTreeSet<Point>,
    edges: &mut Vec<(Point, Point)>,
) -> Result<(), MatchingError> {
    let mut run_start = r.x0;
    for x in r.x0..=r.x1 + 1 {
        let deleted = x > r.x1 || s.contains(&Point::new(x, r.y0));
        if deleted {
            if (x - run_start) % 2 != 0 {
                return Err(MatchingError::PeelStuck(format!(
                    "odd row segment [{run_start},{x}) in a 1-row rest"
                )));
            }
            let mut t = run_start;
            while t + 1 < x {
                edges.push((Point::new(t, r.y0), Point::new(t + 1, r.y0)));
                t += 2;
            }
            run_start = x + 1;
        }
    }
    Ok(())
}

/// Match the two-row band with holes `s_band` and forced upward transfers at
/// `transfer_cols`; None when infeasible.
fn band_match(r: Rect, s_band: &BTreeSet<Point>, transfer_cols: &[i32]) -> Option<Vec<(Point, Point)>> {
    let width = r.width() as usize;
    let bot_y = r.y0;
    let top_y = r.y0 + 1;
    // Greedy deterministic scan with carry state; at each column the options
    // are forced up to the carry choice, so a single boolean DP suffices.
    // feas[ix][carry] reachable?
    let mut feas = vec![[false; 4]; width + 1];
    let mut parent = vec![[(0u8, 0u8); 4]; width + 1];
    feas[0][0] = true;
    for ix in 0..width {
        let x = r.x0 + ix as i32;
        let pres0 = !s_band.contains(&Point::new(x, bot_y));
        let pres1 = !s_band.contains(&Point::new(x, top_y));
        let transfer = transfer_cols.contains(&x);
        let last = ix == width - 1;
        for c in 0..4usize {
            if !feas[ix][c] {
                continue;
            }
            if (c & 1 != 0 && !pres0) || (c & 2 != 0 && !pres1) {
                continue;
            }
            let f0 = pres0 && c & 1 == 0;
            let f1 = pres1 && c & 2 == 0;
            let opts: Vec<usize> = if transfer {
                // The top cell leaves upward; the bottom one pairs onward.
                if !f1 {
                    continue;
                }
                if f0 {
                    vec![1]
                } else {
                    vec![0]
                }
            } else {
                match (f0, f1) {
                    (false, false) => vec![0],
                    (true, false) => vec![1],
                    (false, true) => vec![2],
                    (true, true) => vec![0, 3],
                }
            };
            for out in opts {
                if last && out != 0 {
                    continue;
                }
                if !feas[ix + 1][out] {
                    feas[ix + 1][out] = true;
                    parent[ix + 1][out] = (c as u8, u8::from(transfer));
                }
            }
        }

    }
    if !feas[width][0] {
        return None;
    }
    let mut edges = Vec::new();
    let mut c = 0usize;
    for ix in (0..width).rev() {
        let (pc, _) = parent[ix + 1][c];
        let x = r.x0 + ix as i32;
        let pres0 = !s_band.contains(&Point::new(x, bot_y));
        let pres1 = !s_band.contains(&Point::new(x, top_y));
        let transfer = transfer_cols.contains(&x);
        let f0 = pres0 && (pc as usize) & 1 == 0;
        let f1 = pres1 && (pc as usize) & 2 == 0;
        if transfer {
            edges.push((Point::new(x, top_y), Point::new(x, top_y + 1)));
            if f0 {
                debug_assert!(c & 1 != 0);
            }
        } else if f0 && f1 && c == 0 {
            edges.push((Point::new(x, bot_y), Point::new(x, top_y)));
        }
        if c & 1 != 0 {
            edges.push((Point::new(x, bot_y), Point::new(x + 1, bot_y)));
        }
        if c & 2 != 0 {
            edges.push((Point::new(x, top_y), Point::new(x + 1, top_y)));
        }
        c = pc as usize;
    }
    Some(edges)
}
