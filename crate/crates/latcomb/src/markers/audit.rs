//! Hierarchy audits: face orthogonality, bounded geometry, boundary path
//! decomposition into adjacent segment pairs, and corner-weighted charge
//! control with notch adjustments.

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

use crate::error::MarkerError;
use crate::grid::{charge, Point, Region, TorusContext};

use super::ceil2;
use super::hierarchy::{Hierarchy, LevelMap};

/// One axis-aligned interface run of a partition map.
#[derive(Debug, Clone, Copy)]
struct Face {
    vertical: bool,
    /// Interface coordinate: between c and c+1 (cyclic).
    c: i32,
    lo: i32,
    hi: i32,
}

fn extract_faces(ctx: &TorusContext, map: &LevelMap) -> Vec<Face> {
    let mut faces = Vec::new();
    // Vertical interfaces.
    for x in 0..ctx.width {
        let xr = (x + 1).rem_euclid(ctx.width);
        let mut run_start: Option<i32> = None;
        for y in 0..=ctx.height {
            let differs = y < ctx.height
                && map.ids[ctx.index(Point::new(x, y))] != map.ids[ctx.index(Point::new(xr, y))];
            match (differs, run_start) {
                (true, None) => run_start = Some(y),
                (false, Some(s)) => {
                    faces.push(Face {
                        vertical: true,
                        c: x,
                        lo: s,
                        hi: y - 1,
                    });
                    run_start = None;
                }
                _ => {}
            }
        }
    }
    // Horizontal interfaces.
    for y in 0..ctx.height {
        let yr = (y + 1).rem_euclid(ctx.height);
        let mut run_start: Option<i32> = None;
        for x in 0..=ctx.width {
            let differs = x < ctx.width
                && map.ids[ctx.index(Point::new(x, y))] != map.ids[ctx.index(Point::new(x, yr))];
            match (differs, run_start) {
                (true, None) => run_start = Some(x),
                (false, Some(s)) => {
                    faces.push(Face {
                        vertical: false,
                        c: y,
                        lo: s,
                        hi: x - 1,
                    });
                    run_start = None;
                }
                _ => {}
            }
        }
    }
    faces
}

fn cyclic_dist(a: i32, b: i32, n: i32) -> i32 {
    let d = (a - b).rem_euclid(n);
    d.min(n - d)
}

fn ranges_interact(lo1: i32, hi1: i32, lo2: i32, hi2: i32, n: i32) -> bool {
    // Cyclic interval overlap in at least one cell.
    let len1 = hi1 - lo1 + 1;
    let len2 = hi2 - lo2 + 1;
    if len1 >= n || len2 >= n {
        return true;
    }
    let start = (lo2 - lo1).rem_euclid(n);
    start < len1 || start + len2 > n
}

/// Measured minimum perpendicular separation for one pair of structures.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FacePairReport {
    pub scale: usize,
    pub level_a: usize,
    pub level_b: usize,
    pub min_separation: Option<i32>,
    pub required: (i64, i64),
    pub passes: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OrthogonalityReport {
    pub pairs: Vec<FacePairReport>,
    pub bounded_geometry_ok: bool,
    pub constituent_violations: Vec<String>,
    pub all_pass: bool,
}

/// Parallel-face separation between structures at each scale (pairs at
/// distance <= 1 excluded), plus bounded-geometry span checks.
pub fn audit_orthogonality(h: &Hierarchy) -> OrthogonalityReport {
    let ctx = &h.ctx;
    let m_levels = h.levels();
    let mut pairs = Vec::new();
    for k in 1..=m_levels {
        // Structures at scale k: maps (m, k) for m >= k.
        let structs: Vec<(usize, Vec<Face>)> = (k..=m_levels)
            .map(|m| (m, extract_faces(ctx, h.maps.get(&(m, k)).expect("map"))))
            .collect();
        let dk = h.distances[k - 1] as i64;
        let req_num = h.consts.eps.0 * dk;
        let req_den = h.consts.eps.1;
        for i in 0..structs.len() {
            for j in i..structs.len() {
                let (ma, fa) = &structs[i];
                let (mb, fb) = &structs[j];
                let mut min_sep: Option<i32> = None;
                for a in fa {
                    for b in fb.iter() {
                        if a.vertical != b.vertical {
                            continue;
                        }
                        let n_perp = if a.vertical { ctx.width } else { ctx.height };
                        let n_para = if a.vertical { ctx.height } else { ctx.width };
                        if !ranges_interact(a.lo, a.hi, b.lo, b.hi, n_para) {
                            continue;
                        }
                        let pd = cyclic_dist(a.c, b.c, n_perp);
                        if pd <= 1 {
                            continue; // coincident or two sides of one wall
                        }
                        min_sep = Some(min_sep.map_or(pd, |m: i32| m.min(pd)));
                    }
                }
                let passes = match min_sep {
                    None => true,
                    Some(sep) => (sep as i64) * req_den >= req_num,
                };
                pairs.push(FacePairReport {
                    scale: k,
                    level_a: *ma,
                    level_b: *mb,
                    min_separation: min_sep,
                    required: (req_num, req_den),
                    passes,
                });
            }
        }
    }
    // Bounded geometry: brick spans and level spans within declared bands.
    let mut violations = Vec::new();
    let d1 = h.distances[0];
    for (axis, plan) in [("x", &h.plan_x), ("y", &h.plan_y)] {
        for &s in &plan.brick_spans {
            if s < ceil2(d1) || s > d1 + 1 {
                violations.push(format!("{axis} brick span {s} outside [{}, {}]", ceil2(d1), d1 + 1));
            }
        }
        for (lv, spans) in plan.level_spans.iter().enumerate() {
            let d = h.distances[lv + 1] as i64;
            let hi = (h.consts.alpha.0 * d) / h.consts.alpha.1 + 1;
            let lo = d / 2;
            for &(s, _) in spans {
                if (s as i64) < lo || (s as i64) > hi {
                    violations.push(format!(
                        "{axis} level-{} span {s} outside [{lo}, {hi}]",
                        lv + 2
                    ));
                }
            }
        }
    }
    let bounded_geometry_ok = violations.is_empty();
    let all_pass = bounded_geometry_ok && pairs.iter().all(|p| p.passes);
    OrthogonalityReport {
        pairs,
        bounded_geometry_ok,
        constituent_violations: violations,
        all_pass,
    }
}

/// A path segment of a region boundary: cells in walk order, the facing
/// neighbor region, and the straight run lengths.
#[derive(Debug, Clone)]
pub struct BoundarySegment {
    pub region: u32,
    pub facing: u32,
    pub cells: Vec<Point>,
}

impl BoundarySegment {
    pub fn run_lengths(&self) -> Vec<usize> {
        if self.cells.len() <= 1 {
            return vec![self.cells.len()];
        }
        let mut runs = Vec::new();
        let mut start = 0usize;
        let dir = |a: Point, b: Point| ((b.x - a.x).signum(), (b.y - a.y).signum());
        let mut cur = dir(self.cells[0], self.cells[1]);
        for i in 1..self.cells.len() - 1 {
            let d = dir(self.cells[i], self.cells[i + 1]);
            if d != cur {
                runs.push(i - start + 1);
                start = i;
                cur = d;
            }
        }
        runs.push(self.cells.len() - start);
        runs
    }
}

/// Walk the inner boundary cycle of a region (4-connected cycle for regions
/// at least two cells thick) starting at the least cell.
pub fn boundary_cycle(
    ctx: &TorusContext,
    cells: &BTreeSet<Point>,
) -> Result<Vec<Point>, MarkerError> {
    let is_boundary = |p: Point| {
        ctx.neighbors4(p).iter().any(|q| !cells.contains(q))
    };
    let boundary: BTreeSet<Point> = cells.iter().copied().filter(|&p| is_boundary(p)).collect();
    if boundary.is_empty() {
        return Err(MarkerError::AuditFailed {
            level: 0,
            what: "empty boundary".into(),
        });
    }
    let start = *boundary.iter().next().expect("nonempty");
    let mut walk = vec![start];
    let mut seen: BTreeSet<Point> = BTreeSet::new();
    seen.insert(start);
    let mut cur = start;
    loop {
        let mut next = None;
        for q in ctx.neighbors4(cur) {
            if boundary.contains(&q) && !seen.contains(&q) {
                next = Some(q);
                break;
            }
        }
        match next {
            Some(q) => {
                walk.push(q);
                seen.insert(q);
                cur = q;
            }
            None => break,
        }
    }
    if walk.len() != boundary.len() {
        return Err(MarkerError::AuditFailed {
            level: 0,
            what: format!(
                "boundary walk covered {} of {} cells",
                walk.len(),
                boundary.len()
            ),
        });
    }
    Ok(walk)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundaryDecompositionReport {
    pub max_segments_per_region: usize,
    pub segment_bound: usize,
    pub min_run_length: usize,
    pub adjacency_ok: bool,
    pub all_pass: bool,
}

/// Split each region boundary of level m into per-neighbor path segments and
/// audit the pairing with the neighbors' segments.
pub fn decompose_boundary_paths(
    h: &Hierarchy,
    m: usize,
) -> Result<(Vec<BoundarySegment>, BoundaryDecompositionReport), MarkerError> {
    let ctx = &h.ctx;
    let map = h.final_map(m);
    let mut per_region_cells: BTreeMap<u32, BTreeSet<Point>> = BTreeMap::new();
    for idx in 0..ctx.cells() {
        per_region_cells
            .entry(map.ids[idx])
            .or_default()
            .insert(ctx.point_at(idx));
    }
    let mut segments: Vec<BoundarySegment> = Vec::new();
    let mut max_segments = 0usize;
    let mut min_run = usize::MAX;
    for (&region, cells) in &per_region_cells {
        let cycle = boundary_cycle(ctx, cells)?;
        // Facing neighbor of each boundary cell: least foreign id.
        let facing: Vec<u32> = cycle
            .iter()
            .map(|&p| {
                ctx.neighbors4(p)
                    .iter()
                    .filter(|q| !cells.contains(q))
                    .map(|&q| map.ids[ctx.index(q)])
                    .min()
                    .expect("boundary cell faces outside")
            })
            .collect();
        // Split the cycle at facing changes; rotate so a change sits first.
        let n = cycle.len();
        let rot = (0..n)
            .find(|&i| facing[i] != facing[(i + n - 1) % n])
            .unwrap_or(0);
        let mut segs_here = Vec::new();
        let mut cur_cells = vec![cycle[rot]];
        let mut cur_facing = facing[rot];
        for off in 1..=n {
            let i = (rot + off) % n;
            if off == n {
                segs_here.push(BoundarySegment {
                    region,
                    facing: cur_facing,
                    cells: std::mem::take(&mut cur_cells),
                });
                break;
            }
            if facing[i] != cur_facing {
                segs_here.push(BoundarySegment {
                    region,
                    facing: cur_facing,
                    cells: std::mem::take(&mut cur_cells),
                });
                cur_facing = facing[i];
            }
            cur_cells.push(cycle[i]);
        }
        max_segments = max_segments.max(segs_here.len());
        for s in &segs_here {
            for r in s.run_lengths() {
                min_run = min_run.min(r);
            }
        }
        segments.extend(segs_here);
    }
    // Adjacency pairing: every cell of a segment facing B has a cell of some
    // B-segment facing us within sup distance 1.
    let mut by_pair: BTreeMap<(u32, u32), BTreeSet<Point>> = BTreeMap::new();
    for s in &segments {
        by_pair
            .entry((s.region, s.facing))
            .or_default()
            .extend(s.cells.iter().copied());
    }
    let mut adjacency_ok = true;
    'outer: for s in &segments {
        let Some(partner) = by_pair.get(&(s.facing, s.region)) else {
            adjacency_ok = false;
            break;
        };
        for &p in &s.cells {
            let close = ctx.neighbors8(p).iter().any(|q| partner.contains(q));
            if !close {
                adjacency_ok = false;
                break 'outer;
            }
        }
    }
    let report = BoundaryDecompositionReport {
        max_segments_per_region: max_segments,
        segment_bound: h.consts.segment_bound,
        min_run_length: if min_run == usize::MAX { 0 } else { min_run },
        adjacency_ok,
        all_pass: adjacency_ok && max_segments <= h.consts.segment_bound,
    };
    Ok((segments, report))
}

/// Corner function of `p` relative to a cell set on the torus.
pub fn corner_rel(ctx: &TorusContext, cells: &BTreeSet<Point>, p: Point) -> i64 {
    let e = ctx
        .neighbors4(p)
        .iter()
        .filter(|q| cells.contains(q))
        .count() as i64;
    let mut s = 0i64;
    for (dx, dy) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
        let diag = ctx.canonical(Point::new(p.x + dx, p.y + dy));
        let c1 = ctx.canonical(Point::new(p.x + dx, p.y));
        let c2 = ctx.canonical(Point::new(p.x, p.y + dy));
        if cells.contains(&diag) && cells.contains(&c1) && cells.contains(&c2) {
            s += 1;
        }
    }
    4 - 2 * e + s
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundedChargeReport {
    pub max_prefix_abs: i64,
    pub max_segment_abs: i64,
    pub bound: i64,
    pub bump_count: usize,
    pub all_pass: bool,
}

/// Max corner-weighted charge prefix over all boundary path segments of all
/// final levels (and of the refinement atoms).
pub fn audit_bounded_charge(h: &Hierarchy) -> Result<BoundedChargeReport, MarkerError> {
    let ctx = &h.ctx;
    let mut max_prefix = 0i64;
    let mut max_total = 0i64;
    for m in 1..=h.levels() {
        let (segments, _) = decompose_boundary_paths(h, m)?;
        let map = h.final_map(m);
        let mut region_cells: BTreeMap<u32, BTreeSet<Point>> = BTreeMap::new();
        for idx in 0..ctx.cells() {
            region_cells
                .entry(map.ids[idx])
                .or_default()
                .insert(ctx.point_at(idx));
        }
        for s in &segments {
            let cells = &region_cells[&s.region];
            let mut prefix = 0i64;
            for &p in &s.cells {
                prefix += charge(p) * corner_rel(ctx, cells, p);
                max_prefix = max_prefix.max(prefix.abs());
            }
            max_total = max_total.max(prefix.abs());
        }
    }
    // Atoms: coarsest common refinement pieces of levels >= k for every k.
    for k in 1..=h.levels() {
        for atom in refinement_atoms(h, k) {
            let cells: BTreeSet<Point> = atom.iter().collect();
            if cells.len() < 4 {
                continue;
            }
            let cycle = boundary_cycle(ctx, &cells)?;
            let mut prefix = 0i64;
            for &p in &cycle {
                prefix += charge(p) * corner_rel(ctx, &cells, p);
                max_prefix = max_prefix.max(prefix.abs());
            }
        }
    }
    let bound = h.consts.charge_bound;
    Ok(BoundedChargeReport {
        max_prefix_abs: max_prefix,
        max_segment_abs: max_total,
        bound,
        bump_count: 0,
        all_pass: max_prefix <= bound,
    })
}

/// Connected pieces of the common refinement of the final maps of all
/// levels >= k.
pub fn refinement_atoms(h: &Hierarchy, k: usize) -> Vec<Region> {
    let ctx = &h.ctx;
    let mut key = vec![0u64; ctx.cells()];
    for m in k..=h.levels() {
        let map = h.final_map(m);
        for i in 0..ctx.cells() {
            key[i] = key[i]
                .wrapping_mul(1_000_003)
                .wrapping_add(map.ids[i] as u64 + 1);
        }
    }
    // Connected components of equal-key cells under 4-adjacency.
    let mut seen = vec![false; ctx.cells()];
    let mut out = Vec::new();
    for start in 0..ctx.cells() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![ctx.point_at(start)];
        let mut stack = vec![ctx.point_at(start)];
        while let Some(p) = stack.pop() {
            for q in ctx.neighbors4(p) {
                let qi = ctx.index(q);
                if !seen[qi] && key[qi] == key[ctx.index(p)] {
                    seen[qi] = true;
                    comp.push(q);
                    stack.push(q);
                }
            }
        }
        out.push(Region::from_plane_cells(comp));
    }
    out
}

/// Carve notches along over-charged boundary runs until every prefix stays
/// within the configured bound. Dimensions: bump_width+1 along the wall,
/// bump_width-1 deep (both odd so one notch shifts the segment sum by 4).
pub fn apply_bounded_charge_bumps(h: &mut Hierarchy) -> Result<(), MarkerError> {
    let bound = h.consts.charge_bound;
    let bw = h.consts.bump_width;
    if bw % 2 != 0 || bw < 2 {
        return Err(MarkerError::BumpPlacement(format!(
            "bump width {bw} must be even and >= 2"
        )));
    }
    let ctx = h.ctx;
    let mut bump_cells: BTreeSet<Point> = BTreeSet::new();
    for m in (2..=h.levels()).rev() {
        // Iterate regions until all segments are within bound.
        let mut guard = 0;
        loop {
            guard += 1;
            if guard > 64 {
                return Err(MarkerError::BumpPlacement(
                    "bump pass did not converge".into(),
                ));
            }
            let (segments, _) = decompose_boundary_paths(h, m)?;
            let map = h.final_map(m).clone();
            let mut region_cells: BTreeMap<u32, BTreeSet<Point>> = BTreeMap::new();
            for idx in 0..ctx.cells() {
                region_cells
                    .entry(map.ids[idx])
                    .or_default()
                    .insert(ctx.point_at(idx));
            }
            let mut fixed_any = false;
            for s in &segments {
                let cells = &region_cells[&s.region];
                let mut prefix = 0i64;
                let mut over_at: Option<usize> = None;
                for (i, &p) in s.cells.iter().enumerate() {
                    prefix += charge(p) * corner_rel(&ctx, cells, p);
                    if prefix.abs() > bound - 4 && prefix.abs() > 4 {
                        over_at = Some(i);
                        break;
                    }
                }
                let Some(pos) = over_at else { continue };
                let want_negative = prefix > 0;
                if place_notch(h, m, s, pos, want_negative, bw, &mut bump_cells)? {
                    fixed_any = true;
                    break; // maps changed; re-decompose
                } else {
                    return Err(MarkerError::BumpPlacement(format!(
                        "segment of region {} level {m} stuck at prefix {prefix}",
                        s.region
                    )));
                }
            }
            if !fixed_any {
                break;
            }
        }
    }
    Ok(())
}

/// Carve one notch into the region along the straight run containing
/// `pos`, choosing the mouth parity that shifts the sum the wanted way.
fn place_notch(
    h: &mut Hierarchy,
    m: usize,
    seg: &super::audit::BoundarySegment,
    pos: usize,
    want_negative: bool,
    bw: i32,
    used: &mut BTreeSet<Point>,
) -> Result<bool, MarkerError> {
    let ctx = h.ctx;
    let width_along = bw + 1;
    let depth = bw - 1;
    let clearance = bw + 2;
    // Straight runs of the segment with their index ranges.
    let cells = &seg.cells;
    let mut runs: Vec<(usize, usize)> = Vec::new();
    {
        let mut start = 0usize;
        let dir = |a: Point, b: Point| ((b.x - a.x).signum(), (b.y - a.y).signum());
        let mut i = 1;
        while i < cells.len() {
            let first = dir(cells[i - 1], cells[i]);
            let mut j = i;
            while j + 1 < cells.len() && dir(cells[j], cells[j + 1]) == first {
                j += 1;
            }
            runs.push((start, j));
            start = j;
            i = j + 1;
        }
        if runs.is_empty() {
            runs.push((0, cells.len() - 1));
        }
    }
    // Candidate run: the one containing pos, else earlier runs.
    let mut candidates: Vec<(usize, usize)> = runs
        .iter()
        .copied()
        .filter(|&(a, b)| pos >= a && pos <= b)
        .collect();
    candidates.extend(runs.iter().copied().filter(|&(a, _)| a < pos));
    candidates.reverse();
    let map = h.final_map(m).clone();
    for (a, b) in candidates {
        let len = (b - a + 1) as i32;
        if len < width_along + 2 * clearance {
            continue;
        }
        // Inward direction: from the wall cell toward the region interior.
        let p0 = cells[a];
        let p1 = cells[b];
        let along = ((p1.x - p0.x).signum(), (p1.y - p0.y).signum());
        let inward = {
            // The neighbor across the wall is the facing region; inward is
            // the other side.
            let (ix, iy) = (-along.1, along.0);
            let probe = ctx.canonical(Point::new(p0.x + ix, p0.y + iy));
            if map.ids[ctx.index(probe)] == seg.region {
                (ix, iy)
            } else {
                (along.1, -along.0)
            }
        };
        // Try both mouth parities near the middle of the run, biased before pos.
        let mid = (a + b) / 2;
        let center = pos.min(mid).max(a + clearance as usize);
        for shift in [0i32, 1, -1, 2, -2, 3, -3] {
            let start_idx = center as i64 + shift as i64 - (width_along as i64) / 2;
            if start_idx < a as i64 + clearance as i64
                || start_idx + width_along as i64 - 1 > b as i64 - clearance as i64
            {
                continue;
            }
            let mouth: Vec<Point> = (0..width_along)
                .map(|t| cells[(start_idx + t as i64) as usize])
                .collect();
            // Notch cells: depth rows inward from the mouth.
            let mut notch = Vec::new();
            let mut ok = true;
            for &mp in &mouth {
                for dstep in 0..depth {
                    let q = ctx.canonical(Point::new(
                        mp.x + inward.0 * dstep,
                        mp.y + inward.1 * dstep,
                    ));
                    if map.ids[ctx.index(q)] != seg.region || used.contains(&q) {
                        ok = false;
                        break;
                    }
                    notch.push(q);
                }
                if !ok {
                    break;
                }
            }
            if !ok {
                continue;
            }
            // Clearance from higher-level boundaries.
            for &q in &notch {
                for mm in m + 1..=h.levels() {
                    let fm = h.final_map(mm);
                    let own = fm.ids[ctx.index(q)];
                    if ctx
                        .neighbors8(q)
                        .iter()
                        .any(|r| fm.ids[ctx.index(*r)] != own)
                    {
                        ok = false;
                        break;
                    }
                }
                if !ok {
                    break;
                }
            }
            if !ok {
                continue;
            }
            // Apply to a scratch map and measure the segment-sum shift.
            let target = seg.facing;
            let mut scratch = map.clone();
            for &q in &notch {
                scratch.ids[ctx.index(q)] = target;
            }
            let old_sum = segment_sum(&ctx, &map, seg.region, seg.facing);
            let new_sum = segment_sum(&ctx, &scratch, seg.region, seg.facing);
            let delta = new_sum - old_sum;
            if delta.abs() != 4 {
                continue;
            }
            if (delta < 0) == want_negative {
                // Commit at every scale of level m.
                for k in 1..=m {
                    let entry = h.maps.get_mut(&(m, k)).expect("map");
                    for &q in &notch {
                        entry.ids[ctx.index(q)] = target;
                    }
                }
                for &q in &notch {
                    used.insert(q);
                    for n in ctx.neighbors8(q) {
                        used.insert(n);
                    }
                }
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Total corner-weighted charge along the (region, facing) boundary stretch.
fn segment_sum(ctx: &TorusContext, map: &LevelMap, region: u32, facing: u32) -> i64 {
    let cells: BTreeSet<Point> = (0..ctx.cells())
        .filter(|&i| map.ids[i] == region)
        .map(|i| ctx.point_at(i))
        .collect();
    let mut sum = 0i64;
    for &p in &cells {
        let faces_target = ctx.neighbors4(p).iter().any(|q| {
            !cells.contains(q) && map.ids[ctx.index(*q)] == facing
        });
        if faces_target {
            sum += charge(p) * corner_rel(ctx, &cells, p);
        }
    }
    sum
}
