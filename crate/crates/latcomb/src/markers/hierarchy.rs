//! Multi-level conforming hierarchy on the torus.
//!
//! Axis plans nest: brick cuts refine level-2 cuts, which refine higher
//! cuts. The fine fabric puts full-width flank bricks along every coarse
//! wall (when enabled) so nucleus-to-boundary distances land in {1} or
//! beyond the measured orthogonality constant. The top level is fractalized
//! by reassigning granularity cells across block boundaries under
//! connectivity and simple-connectivity guards; the bounded-charge variant
//! then notches boundary runs to pin the corner-weighted charge sums.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::error::MarkerError;
use crate::grid::{charge, Metric, Point, Region, TorusContext};

use super::{axis_spans, ceil2};

/// Dimensionless multipliers and constants for hierarchy construction.
/// Rationals are (numerator, denominator) pairs so artifacts stay exact.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MarkerConstants {
    pub eps: (i64, i64),
    pub eta: (i64, i64),
    pub alpha: (i64, i64),
    /// Bound K on per-segment corner-weighted charge sums.
    pub charge_bound: i64,
    /// Room multiplier for strip extensions.
    pub c0: i32,
    /// Maximum boundary path segments per region.
    pub segment_bound: usize,
    /// Bump width; notches are (bump_width+1) along the wall.
    pub bump_width: i32,
    /// Four-corner clearance fraction.
    pub no4_bound: (i64, i64),
    /// Allowed growth band for d_{k+1}/d_k.
    pub growth: ((i64, i64), (i64, i64)),
    /// Put full-width flank bricks along every coarse wall.
    pub conforming_flanks: bool,
    /// Probability (num, den) of flipping a boundary granularity cell when
    /// fractalizing the top level.
    pub jog_rate: (u32, u32),
    /// Explicit brick spans (overrides seeded span generation).
    pub spans_x: Option<Vec<i32>>,
    pub spans_y: Option<Vec<i32>>,
    /// Explicit grouping of level-(m-1) spans into level-m spans, outermost
    /// level first; each entry is the number of child spans per group.
    pub groups_x: Option<Vec<Vec<u32>>>,
    pub groups_y: Option<Vec<Vec<u32>>>,
}

impl Default for MarkerConstants {
    fn default() -> Self {
        MarkerConstants {
            eps: (1, 16),
            eta: (1, 4),
            alpha: (1, 1),
            charge_bound: 20,
            c0: 8,
            segment_bound: 12,
            bump_width: 4,
            no4_bound: (1, 120),
            growth: ((7, 5), (4, 1)),
            conforming_flanks: true,
            jog_rate: (2, 5),
            spans_x: None,
            spans_y: None,
            groups_x: None,
            groups_y: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HierarchyVariant {
    Basic,
    Disk,
    BoundedCharge,
}

/// Region id per cell for one (level, scale) pair.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LevelMap {
    pub ids: Vec<u32>,
    pub n_regions: u32,
}

impl LevelMap {
    pub fn id(&self, ctx: &TorusContext, p: Point) -> u32 {
        self.ids[ctx.index(p)]
    }
}

/// Axis plan: nested cyclic cut structures. `bricks[i]` is the width of
/// brick i; `level_of[m]` maps each brick to its level-m span index.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AxisPlan {
    pub brick_spans: Vec<i32>,
    /// For each level m >= 2 (index m-2): span sizes and the number of
    /// bricks per span.
    pub level_spans: Vec<Vec<(i32, u32)>>,
}

impl AxisPlan {
    /// Brick index per coordinate.
    fn brick_index(&self, extent: i32) -> Vec<u32> {
        let mut out = vec![0u32; extent as usize];
        let mut x = 0usize;
        for (i, &w) in self.brick_spans.iter().enumerate() {
            for _ in 0..w {
                out[x] = i as u32;
                x += 1;
            }
        }
        out
    }

    /// Level-m span index per brick (m >= 2).
    fn span_index(&self, m: usize) -> Vec<u32> {
        let mut per_brick: Vec<u32> = (0..self.brick_spans.len() as u32).collect();
        for lv in 0..=(m - 2) {
            let spans = &self.level_spans[lv];
            let mut map = Vec::new();
            for (si, &(_, nchild)) in spans.iter().enumerate() {
                for _ in 0..nchild {
                    map.push(si as u32);
                }
            }
            per_brick = per_brick.iter().map(|&b| map[b as usize]).collect();
        }
        per_brick
    }
}

#[derive(Debug, Clone)]
pub struct Hierarchy {
    pub ctx: TorusContext,
    pub distances: Vec<i32>,
    pub consts: MarkerConstants,
    pub variant: HierarchyVariant,
    pub seed: u64,
    pub plan_x: AxisPlan,
    pub plan_y: AxisPlan,
    /// Maps keyed by (m, k), 1-based, k <= m.
    pub maps: BTreeMap<(usize, usize), LevelMap>,
}

impl Hierarchy {
    pub fn levels(&self) -> usize {
        self.distances.len()
    }

    /// The final partition of level m.
    pub fn final_map(&self, m: usize) -> &LevelMap {
        self.maps.get(&(m, 1)).expect("final map present")
    }

    pub fn region_cells(&self, m: usize, region: u32) -> Vec<Point> {
        let map = self.final_map(m);
        (0..self.ctx.cells())
            .filter(|&i| map.ids[i] == region)
            .map(|i| self.ctx.point_at(i))
            .collect()
    }
}

fn ratio_in_band(num: i32, den: i32, band: ((i64, i64), (i64, i64))) -> bool {
    let (lo, hi) = band;
    // lo.0/lo.1 <= num/den <= hi.0/hi.1
    (num as i64) * lo.1 >= lo.0 * (den as i64) && (num as i64) * hi.1 <= hi.0 * (den as i64)
}

pub fn build_hierarchy(
    ctx: &TorusContext,
    distances: &[i32],
    consts: &MarkerConstants,
    variant: HierarchyVariant,
    seed: u64,
) -> Result<Hierarchy, MarkerError> {
    let m_levels = distances.len();
    assert!(m_levels >= 1, "at least one level");
    for pair in distances.windows(2) {
        if !ratio_in_band(pair[1], pair[0], consts.growth) {
            return Err(MarkerError::GrowthRatio(
                pair[1] as f64 / pair[0] as f64,
                consts.growth.0 .0 as f64 / consts.growth.0 .1 as f64,
                consts.growth.1 .0 as f64 / consts.growth.1 .1 as f64,
            ));
        }
    }
    let d_max = *distances.last().expect("nonempty");
    if ctx.width < 10 * d_max || ctx.height < 10 * d_max {
        return Err(MarkerError::TorusTooSmall {
            torus: ctx.width.min(ctx.height),
            dmax: d_max,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x68696572);
    let plan_x = build_axis_plan(
        ctx.width,
        distances,
        consts,
        consts.spans_x.as_deref(),
        consts.groups_x.as_deref(),
        &mut rng,
    )?;
    let plan_y = build_axis_plan(
        ctx.height,
        distances,
        consts,
        consts.spans_y.as_deref(),
        consts.groups_y.as_deref(),
        &mut rng,
    )?;

    let mut maps = BTreeMap::new();
    // Diagonal maps: straight block grids per level.
    let bx = plan_x.brick_index(ctx.width);
    let by = plan_y.brick_index(ctx.height);
    for m in 1..=m_levels {
        let (sx, nx) = if m == 1 {
            ((0..plan_x.brick_spans.len() as u32).collect::<Vec<_>>(), plan_x.brick_spans.len() as u32)
        } else {
            let si = plan_x.span_index(m);
            let n = plan_x.level_spans[m - 2].len() as u32;
            (si, n)
        };
        let (sy, ny) = if m == 1 {
            ((0..plan_y.brick_spans.len() as u32).collect::<Vec<_>>(), plan_y.brick_spans.len() as u32)
        } else {
            let si = plan_y.span_index(m);
            let n = plan_y.level_spans[m - 2].len() as u32;
            (si, n)
        };
        let mut ids = vec![0u32; ctx.cells()];
        for idx in 0..ctx.cells() {
            let p = ctx.point_at(idx);
            let cx = sx[bx[p.x as usize] as usize];
            let cy = sy[by[p.y as usize] as usize];
            ids[idx] = cy * nx + cx;
        }
        maps.insert(
            (m, m),
            LevelMap {
                ids,
                n_regions: nx * ny,
            },
        );
    }

    // Fractalized finals. Levels 1..M-1 keep their straight maps at every
    // finer scale (flank constraints leave no room for sub-scale jogs); the
    // top level is jogged at its child granularity in the disk variants.
    for m in 1..=m_levels {
        for k in (1..m).rev() {
            let base = maps.get(&(m, k + 1)).expect("parent scale").clone();
            maps.insert((m, k), base);
        }
    }
    let jog = match variant {
        HierarchyVariant::Basic => false,
        HierarchyVariant::Disk | HierarchyVariant::BoundedCharge => {
            consts.jog_rate.0 > 0 && m_levels >= 2
        }
    };
    if jog {
        let m = m_levels;
        let jogged = jog_top_level(ctx, &plan_x, &plan_y, &maps, m, consts, &mut rng)?;
        for k in 1..m {
            maps.insert((m, k), jogged.clone());
        }
    }

    let mut h = Hierarchy {
        ctx: *ctx,
        distances: distances.to_vec(),
        consts: consts.clone(),
        variant,
        seed,
        plan_x,
        plan_y,
        maps,
    };
    if variant == HierarchyVariant::BoundedCharge {
        super::audit::apply_bounded_charge_bumps(&mut h)?;
    }
    // Structural audits: every final region 4-connected; simply connected in
    // the disk variants.
    for m in 1..=h.levels() {
        let map = h.final_map(m).clone();
        for region in 0..map.n_regions {
            let cells: Vec<Point> = (0..ctx.cells())
                .filter(|&i| map.ids[i] == region)
                .map(|i| ctx.point_at(i))
                .collect();
            if cells.is_empty() {
                return Err(MarkerError::AuditFailed {
                    level: m,
                    what: format!("region {region} empty"),
                });
            }
            let reg = Region::from_plane_cells(cells);
            let comps = crate::grid::connected_components(&reg, Metric::Generator, ctx);
            if comps.len() != 1 {
                return Err(MarkerError::AuditFailed {
                    level: m,
                    what: format!("region {region} disconnected"),
                });
            }
            if variant != HierarchyVariant::Basic {
                let simply = crate::grid::is_simply_connected(&reg, ctx)
                    .map_err(MarkerError::Grid)?;
                if !simply {
                    return Err(MarkerError::AuditFailed {
                        level: m,
                        what: format!("region {region} not simply connected"),
                    });
                }
            }
        }
    }
    Ok(h)
}

fn build_axis_plan(
    extent: i32,
    distances: &[i32],
    consts: &MarkerConstants,
    explicit_spans: Option<&[i32]>,
    explicit_groups: Option<&[Vec<u32>]>,
    rng: &mut ChaCha8Rng,
) -> Result<AxisPlan, MarkerError> {
    let m_levels = distances.len();
    let d1 = distances[0];
    let flank = d1 + 1;
    let brick_lo = ceil2(d1);
    let brick_hi = d1 + 1;

    let alpha_hi = |d: i32|

        ((consts.alpha.0 * d as i64) / consts.alpha.1) as i32 + 1;

    // Level-2 span structure (or brick spans directly for M = 1).
    let (brick_spans, mut group_sizes): (Vec<i32>, Vec<Vec<(i32, u32)>>) = if let Some(spans) =
        explicit_spans
    {
        if spans.iter().sum::<i32>() != extent {
            return Err(MarkerError::InfeasibleScale {
                extent,
                lo: brick_lo,
                hi: brick_hi,
            });
        }
        (spans.to_vec(), Vec::new())
    } else if m_levels == 1 {
        (axis_spans(extent, brick_lo, brick_hi, rng)?, Vec::new())
    } else if consts.conforming_flanks {
        // Level-2 spans of the form flank + mid + flank (or two flanks).
        let d2 = distances[1];
        let span_lo = (d2 / 2).max(2 * flank);
        let span_hi = alpha_hi(d2).min(2 * flank + brick_hi);
        if span_lo > span_hi {
            return Err(MarkerError::InfeasibleScale {
                extent,
                lo: span_lo,
                hi: span_hi,
            });
        }
        let spans2 = axis_spans(extent, span_lo, span_hi, rng)?;
        let mut bricks = Vec::new();
        let mut groups = Vec::new();
        for &s in &spans2 {
            let mid = s - 2 * flank;
            if mid == 0 {
                bricks.push(flank);
                bricks.push(flank);
                groups.push((s, 2u32));
            } else if mid >= brick_lo && mid <= brick_hi {
                bricks.push(flank);
                bricks.push(mid);
                bricks.push(flank);
                groups.push((s, 3u32));
            } else {
                return Err(MarkerError::InfeasibleScale {
                    extent: s,
                    lo: brick_lo,
                    hi: brick_hi,
                });
            }
        }
        (bricks, vec![groups])
    } else {
        // Plain bricks grouped pairwise-ish into level-2 spans.
        let bricks = axis_spans(extent, brick_lo, brick_hi, rng)?;
        let d2 = distances[1];
        let span_hi = alpha_hi(d2);
        let mut groups = Vec::new();
        let mut i = 0usize;
        while i < bricks.len() {
            let mut total = bricks[i];
            let mut n = 1u32;
            while i + (n as usize) < bricks.len()
                && total + bricks[i + n as usize] <= span_hi
                && total < d2 / 2
            {
                total += bricks[i + n as usize];
                n += 1;
            }
            groups.push((total, n));
            i += n as usize;
        }
        (bricks, vec![groups])
    };

    // Explicit upper-level groupings, else greedy grouping.
    if let Some(eg) = explicit_groups {
        group_sizes.clear();
        let mut child_spans: Vec<i32> = brick_spans.clone();
        for counts in eg {
            let mut level: Vec<(i32, u32)> = Vec::new();
            let mut idx = 0usize;
            for &c in counts {
                let total: i32 = child_spans[idx..idx + c as usize].iter().sum();
                level.push((total, c));
                idx += c as usize;
            }
            if idx != child_spans.len() {
                return Err(MarkerError::InfeasibleScale {
                    extent,
                    lo: 0,
                    hi: 0,
                });
            }
            child_spans = level.iter().map(|&(t, _)| t).collect();
            group_sizes.push(level);
        }
    } else {
        for m in 3..=m_levels {
            let d = distances[m - 1];
            let lo = d / 2;
            let hi = alpha_hi(d);
            let child: Vec<i32> = group_sizes[m - 3].iter().map(|&(t, _)| t).collect();
            let mut level: Vec<(i32, u32)> = Vec::new();
            let mut i = 0usize;
            while i < child.len() {
                let mut total = child[i];
                let mut n = 1u32;
                while i + (n as usize) < child.len() && total < lo {
                    total += child[i + n as usize];
                    n += 1;
                }
                if total > hi {
                    return Err(MarkerError::InfeasibleScale {
                        extent: total,
                        lo,
                        hi,
                    });
                }
                // Balance the tail: if the rest cannot reach lo, absorb it.
                let rest: i32 = child[i + n as usize..].iter().sum();
                if rest > 0 && rest < lo {
                    if total + rest <= hi {
                        for &c in &child[i + n as usize..] {
                            total += c;
                            n += 1;
                        }
                    } else {
                        return Err(MarkerError::InfeasibleScale {
                            extent: rest,
                            lo,
                            hi,
                        });
                    }
                }
                level.push((total, n));
                i += n as usize;
            }
            group_sizes.push(level);
        }
    }

    if group_sizes.len() + 1 < m_levels {
        return Err(MarkerError::InfeasibleScale {
            extent,
            lo: 0,
            hi: 0,
        });
    }
    Ok(AxisPlan {
        brick_spans,
        level_spans: group_sizes,
    })
}

/// Fractalize the top level: flip boundary granularity cells between
/// neighboring regions under connectivity, simple-connectivity and
/// junction-rule guards.
fn jog_top_level(
    ctx: &TorusContext,
    plan_x: &AxisPlan,
    plan_y: &AxisPlan,
    maps: &BTreeMap<(usize, usize), LevelMap>,
    m: usize,
    consts: &MarkerConstants,
    rng: &mut ChaCha8Rng,
) -> Result<LevelMap, MarkerError> {
    // Granularity: level m-1 cells.
    let gx = if m - 1 == 1 {
        (0..plan_x.brick_spans.len() as u32).collect::<Vec<_>>()
    } else {
        plan_x.span_index(m - 1)
    };
    let n_gx = *gx.iter().max().unwrap() + 1;
    let gy = if m - 1 == 1 {
        (0..plan_y.brick_spans.len() as u32).collect::<Vec<_>>()
    } else {
        plan_y.span_index(m - 1)
    };
    let n_gy = *gy.iter().max().unwrap() + 1;
    let base = maps.get(&(m, m)).expect("diagonal map");
    let bx = plan_x.brick_index(ctx.width);
    let by = plan_y.brick_index(ctx.height);
    // Assignment on the granularity grid.
    let mut assign = vec![u32::MAX; (n_gx * n_gy) as usize];
    for idx in 0..ctx.cells() {
        let p = ctx.point_at(idx);
        let cx = gx[bx[p.x as usize] as usize];
        let cy = gy[by[p.y as usize] as usize];
        assign[(cy * n_gx + cx) as usize] = base.ids[idx];
    }
    let gat = |cx: u32, cy: u32| (cy * n_gx + cx) as usize;
    let wrap = |v: i64, n: u32| v.rem_euclid(n as i64) as u32;
    // Candidate flips in seeded order.
    let mut order: Vec<(u32, u32)> = (0..n_gx)
        .flat_map(|cx| (0..n_gy).map(move |cy| (cx, cy)))
        .collect();
    for i in (1..order.len()).rev() {
        let j = rng.gen_range(0..=i);
        order.swap(i, j);
    }
    let regions_ok = |assign: &[u32], ids: &[u32]| -> bool {
        // Validate connectivity and simple connectivity of the given ids on
        // the granularity grid (treated as a small torus).
        let gctx = match TorusContext::new(n_gx.max(4) as i32, n_gy.max(4) as i32) {
            Ok(c) => c,
            Err(_) => return false,
        };
        if (gctx.width as u32) != n_gx || (gctx.height as u32) != n_gy {
            // Tiny grids: skip jogging entirely.
            return false;
        }
        for &id in ids {
            let cells: Vec<Point> = (0..assign.len())
                .filter(|&i| assign[i] == id)
                .map(|i| Point::new((i as u32 % n_gx) as i32, (i as u32 / n_gx) as i32))
                .collect();
            if cells.is_empty() {
                return false;
            }
            let reg = Region::from_plane_cells(cells);
            match crate::grid::is_simply_connected(&reg, &gctx) {
                Ok(true) => {}
                _ => return false,
            }
        }
        true
    };
    for &(cx, cy) in &order {
        if rng.gen_range(0..consts.jog_rate.1) >= consts.jog_rate.0 {
            continue;
        }
        let own = assign[gat(cx, cy)];
        let neighbors = [
            assign[gat(wrap(cx as i64 + 1, n_gx), cy)],
            assign[gat(wrap(cx as i64 - 1, n_gx), cy)],
            assign[gat(cx, wrap(cy as i64 + 1, n_gy))],
            assign[gat(cx, wrap(cy as i64 - 1, n_gy))],
        ];
        let mut distinct: Vec<u32> = neighbors.iter().copied().filter(|&n| n != own).collect();
        distinct.sort_unstable();
        distinct.dedup();
        if distinct.len() != 1 {
            // Junction cells stay with their block (the exceptional rule:
            // a cell facing several regions is kept by the one that holds a
            // full face through it).
            continue;
        }
        let target = distinct[0];
        let mut attempt = assign.clone();
        attempt[gat(cx, cy)] = target;
        if regions_ok(&attempt, &[own, target]) {
            assign = attempt;
        }
    }
    // Materialize to cells.
    let mut ids = vec![0u32; ctx.cells()];
    for idx in 0..ctx.cells() {
        let p = ctx.point_at(idx);
        let cx = gx[bx[p.x as usize] as usize];
        let cy = gy[by[p.y as usize] as usize];
        ids[idx] = assign[gat(cx, cy)];
    }
    Ok(LevelMap {
        ids,
        n_regions: base.n_regions,
    })
}

/// Serialization: per-level region id maps plus the construction data.
#[derive(Debug, Serialize, Deserialize)]
pub struct HierarchyJson {
    pub w: i32,
    pub h: i32,
    pub distances: Vec<i32>,
    pub variant: HierarchyVariant,
    pub seed: u64,
    pub levels: Vec<LevelMapJson>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct LevelMapJson {
    pub m: usize,
    pub k: usize,
    pub n_regions: u32,
    pub ids: Vec<u32>,
}

pub fn hierarchy_to_json(h: &Hierarchy) -> HierarchyJson {
    HierarchyJson {
        w: h.ctx.width,
        h: h.ctx.height,
        distances: h.distances.clone(),
        variant: h.variant,
        seed: h.seed,
        levels: h
            .maps
            .iter()
            .map(|(&(m, k), map)| LevelMapJson {
                m,
                k,
                n_regions: map.n_regions,
                ids: map.ids.clone(),
            })
            .collect(),
    }
}

impl Hierarchy {
    /// Rebuild from serialized form (audits and constants use defaults; the
    /// plans are reconstructed only as trivial one-span axes).
    pub fn from_json(j: &HierarchyJson) -> Result<Hierarchy, MarkerError> {
        let ctx = TorusContext::new(j.w, j.h).map_err(MarkerError::Grid)?;
        let mut maps = BTreeMap::new();
        for lm in &j.levels {
            maps.insert(
                (lm.m, lm.k),
                LevelMap {
                    ids: lm.ids.clone(),
                    n_regions: lm.n_regions,
                },
            );
        }
        Ok(Hierarchy {
            ctx,
            distances: j.distances.clone(),
            consts: MarkerConstants::default(),
            variant: j.variant,
            seed: j.seed,
            plan_x: AxisPlan {
                brick_spans: vec![j.w],
                level_spans: vec![],
            },
            plan_y: AxisPlan {
                brick_spans: vec![j.h],
                level_spans: vec![],
            },
            maps,
        })
    }
}

/// Total charge of one region of a map.
pub fn region_charge(ctx: &TorusContext, map: &LevelMap, region: u32) -> i64 {
    (0..ctx.cells())
        .filter(|&i| map.ids[i] == region)
        .map(|i| charge(ctx.point_at(i)))
        .sum()
}
