//! Partial matchings of strip regions: currents and their conservation,
//! canonical and standard forms, extension/joining/corner-turning/charge
//! absorption, and perfect matchings of rectangles minus boundary sets.
//!
//! Strip algorithms are implemented once for the left-to-right orientation
//! on plane coordinates; the other orientations go through isometry
//! adapters. Charges always come from absolute coordinates.

pub mod machine;
pub mod oracle;
pub mod rect;

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

use crate::error::MatchingError;
use crate::grid::{charge, Point};

use machine::{StateMachine, MAX_THICKNESS};

/// Degree <= 1 set of unit edges.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PartialMatching {
    partner: BTreeMap<Point, Point>,
}

impl PartialMatching {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_edge(&mut self, a: Point, b: Point) -> Result<(), MatchingError> {
        if (a.x - b.x).abs() + (a.y - b.y).abs() != 1 {
            return Err(MatchingError::EdgeNotUnit(a.x, a.y, b.x, b.y));
        }
        if self.partner.contains_key(&a) || self.partner.contains_key(&b) {
            return Err(MatchingError::DegreeTooHigh);
        }
        self.partner.insert(a, b);
        self.partner.insert(b, a);
        Ok(())
    }

    pub fn partner(&self, p: Point) -> Option<Point> {
        self.partner.get(&p).copied()
    }

    pub fn is_matched(&self, p: Point) -> bool {
        self.partner.contains_key(&p)
    }

    pub fn domain(&self) -> impl Iterator<Item = Point> + '_ {
        self.partner.keys().copied()
    }

    pub fn domain_len(&self) -> usize {
        self.partner.len()
    }

    pub fn edge_count(&self) -> usize {
        self.partner.len() / 2
    }

    /// Normalized sorted edge list.
    pub fn edges(&self) -> Vec<(Point, Point)> {
        let mut out = Vec::with_capacity(self.partner.len() / 2);
        for (&a, &b) in &self.partner {
            if a < b {
                out.push((a, b));
            }
        }
        out
    }

    pub fn merge(&mut self, other: &PartialMatching) -> Result<(), MatchingError> {
        for (a, b) in other.edges() {
            self.add_edge(a, b)?;
        }
        Ok(())
    }

    /// True iff `self`'s edge set contains all of `base`'s.
    pub fn extends(&self, base: &PartialMatching) -> bool {
        base.edges()
            .iter()
            .all(|&(a, b)| self.partner(a) == Some(b))
    }
}

/// JSON form: `{"edges":[[[x,y],[x,y]],...]}` sorted.
#[derive(Debug, Serialize, Deserialize)]
pub struct MatchingJson {
    pub edges: Vec<[[i32; 2]; 2]>,
}

pub fn matching_to_json(m: &PartialMatching) -> MatchingJson {
    MatchingJson {
        edges: m
            .edges()
            .iter()
            .map(|(a, b)| [[a.x, a.y], [b.x, b.y]])
            .collect(),
    }
}

pub fn matching_from_json(j: &MatchingJson) -> Result<PartialMatching, MatchingError> {
    let mut m = PartialMatching::new();
    for e in &j.edges {
        m.add_edge(Point::new(e[0][0], e[0][1]), Point::new(e[1][0], e[1][1]))?;
    }
    Ok(m)
}

/// Traversal direction of a strip.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    LeftToRight,
    RightToLeft,
    BottomToTop,
    TopToBottom,
}

/// Strip between two parallel lines. For horizontal orientations the cells
/// are `a <= x <= b`, `alpha < y < beta`; vertical orientations swap the
/// roles of the axes (`a <= y <= b`, `alpha < x < beta`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StripRegion {
    pub a: i32,
    pub b: i32,
    pub alpha: i32,
    pub beta: i32,
    pub orientation: Orientation,
}

impl StripRegion {
    pub fn new(
        a: i32,
        b: i32,
        alpha: i32,
        beta: i32,
        orientation: Orientation,
    ) -> Result<Self, MatchingError> {
        let w = beta - alpha - 1;
        if w < 2 || w % 2 != 0 {
            return Err(MatchingError::BadThickness(w));
        }
        if w > MAX_THICKNESS {
            return Err(MatchingError::ThicknessTooLarge(w, MAX_THICKNESS));
        }
        if b < a {
            return Err(MatchingError::BadRange);
        }
        Ok(StripRegion {
            a,
            b,
            alpha,
            beta,
            orientation,
        })
    }

    pub fn thickness(&self) -> i32 {
        self.beta - self.alpha - 1
    }

    /// Forward isometry from canonical left-to-right coordinates to the real
    /// orientation. Canonical strips use the same (a,b,alpha,beta) numbers.
    pub fn from_canonical(&self, p: Point) -> Point {
        match self.orientation {
            Orientation::LeftToRight => p,
            Orientation::RightToLeft => Point::new(self.a + self.b - p.x, p.y),
            Orientation::BottomToTop => Point::new(p.y, p.x),
            Orientation::TopToBottom => Point::new(p.y, self.a + self.b - p.x),
        }
    }

    pub fn to_canonical(&self, p: Point) -> Point {
        match self.orientation {
            Orientation::LeftToRight => p,
            Orientation::RightToLeft => Point::new(self.a + self.b - p.x, p.y),
            Orientation::BottomToTop => Point::new(p.y, p.x),
            Orientation::TopToBottom => Point::new(self.a + self.b - p.y, p.x),
        }
    }

    pub fn canonicalized(&self) -> StripRegion {
        StripRegion {
            a: self.a,
            b: self.b,
            alpha: self.alpha,
            beta: self.beta,
            orientation: Orientation::LeftToRight,
        }
    }

    pub fn contains(&self, p: Point) -> bool {
        let q = self.to_canonical(p);
        q.x >= self.a && q.x <= self.b && q.y > self.alpha && q.y < self.beta
    }

    pub fn cells(&self) -> Vec<Point> {
        let mut out = Vec::new();
        for x in self.a..=self.b {
            for y in self.alpha + 1..self.beta {
                out.push(self.from_canonical(Point::new(x, y)));
            }
        }
        out
    }

    fn canonical_matching_of(&self, m: &PartialMatching) -> Result<PartialMatching, MatchingError> {
        let mut out = PartialMatching::new();
        for (p, q) in m.edges() {
            out.add_edge(self.to_canonical(p), self.to_canonical(q))?;
        }
        Ok(out)
    }

    fn matching_from_canonical(
        &self,
        m: &PartialMatching,
    ) -> Result<PartialMatching, MatchingError> {
        let mut out = PartialMatching::new();
        for (p, q) in m.edges() {
            out.add_edge(self.from_canonical(p), self.from_canonical(q))?;
        }
        Ok(out)
    }
}

/// Letter of the left/right matching pattern along a column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Letter {
    L,
    R,
}

/// Pattern of l's and r's read top-to-bottom along a column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgePattern {
    pub letters: Vec<Letter>,
}

/// Which of the four standard right-edge forms an extension landed on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StandardForm {
    pub l_full: bool,
    pub a_odd_offsets: bool,
    pub current: i64,
}

impl StandardForm {
    /// Rows of the strip (y-values) in the dom set of this form.
    pub fn dom_rows(&self, s: &StripRegion) -> BTreeSet<i32> {
        let k = self.current.unsigned_abs() as i32;
        let mut rows = BTreeSet::new();
        if self.l_full {
            for y in s.alpha + 2 * k + 1..s.beta {
                rows.insert(y);
            }
        }
        for i in 1..=k {
            let y = if self.a_odd_offsets {
                s.alpha + 2 * i - 1
            } else {
                s.alpha + 2 * i
            };
            rows.insert(y);
        }
        rows
    }
}

/// True iff every interior cell of the strip is matched.
pub fn is_full(m: &PartialMatching, s: &StripRegion) -> Result<bool, MatchingError> {
    for p in m.domain() {
        if !s.contains(p) {
            return Err(MatchingError::EdgeOutsideStrip);
        }
    }
    let sc = s.canonicalized();
    for x in s.a + 1..s.b {
        for y in s.alpha + 1..s.beta {
            let p = s.from_canonical(Point::new(x, y));
            let _ = sc;
            if !m.is_matched(p) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Current of a full partial matching at a column of the open range: the sum
/// of q over cells matched to their orientation-left neighbor.
pub fn current(m: &PartialMatching, s: &StripRegion, x: i32) -> Result<i64, MatchingError> {
    if x <= s.a || x >= s.b {
        return Err(MatchingError::ColumnOutOfRange(x));
    }
    if !is_full(m, s)? {
        return Err(MatchingError::NotFull);
    }
    let mut c = 0i64;
    for y in s.alpha + 1..s.beta {
        let p = s.from_canonical(Point::new(x, y));
        let left = s.from_canonical(Point::new(x - 1, y));
        if m.partner(p) == Some(left) {
            c += charge(p);
        }
    }
    Ok(c)
}

/// All-horizontal matching; the last column stays unmatched when the column
/// count is odd. Current 0 everywhere.
pub fn canonical_matching(s: &StripRegion) -> PartialMatching {
    let mut m = PartialMatching::new();
    let mut x = s.a;
    while x + 1 <= s.b {
        for y in s.alpha + 1..s.beta {
            m.add_edge(
                s.from_canonical(Point::new(x, y)),
                s.from_canonical(Point::new(x + 1, y)),
            )
            .expect("disjoint placement");
        }
        x += 2;
    }
    m
}

/// Module constant bounding the room the alternation-moving algorithm may
/// use: extensions demand `b_new > b + C0 * w^2`.
pub const C0: i32 = 8;

fn machine_for(s: &StripRegion) -> StateMachine {
    StateMachine::new(s.alpha, s.beta)
}

fn pending_state_at(m: &PartialMatching, s: &StripRegion, x: i32) -> u16 {
    let w = s.thickness();
    let mut mask = 0u16;
    for i in 0..w {
        let p = s.from_canonical(Point::new(x, s.alpha + 1 + i));
        if !m.is_matched(p) {
            mask |= 1 << i;
        }
    }
    mask
}

fn standard_targets(w: i32, k: i64) -> Vec<(u16, bool, bool)> {
    // (pending mask, l_full, a_odd_offsets); pending = complement of dom rows.
    let ka = k.unsigned_abs() as i32;
    let all: u16 = if w as u32 >= 16 {
        u16::MAX
    } else {
        (1u16 << w) - 1
    };
    let mut out = Vec::new();
    if 2 * ka <= w {
        for (l_full, a_odd) in [(true, false), (true, true), (false, false), (false, true)] {
            let mut dom = 0u16;
            if l_full {
                for i in 2 * ka..w {
                    dom |= 1 << i;
                }
            }
            for i in 1..=ka {
                // Row index (0-based from alpha+1): odd offsets are rows
                // alpha+2i-1 -> index 2i-2; even offsets rows alpha+2i -> 2i-1.
                let idx = if a_odd { 2 * i - 2 } else { 2 * i - 1 };
                dom |= 1 << idx;
            }
            out.push((all & !dom, l_full, a_odd));
        }
    }
    out
}

/// Extend a full matching rightward into standard form on the new right edge.
pub fn extend_standard(
    m: &PartialMatching,
    s: &StripRegion,
    b_new: i32,
) -> Result<(PartialMatching, StandardForm), MatchingError> {
    let w = s.thickness();
    let need = s.b + C0 * w * w;
    if b_new <= need {
        return Err(MatchingError::InsufficientRoom {
            need: need + 1,
            got: b_new,
        });
    }
    if !is_full(m, s)? {
        return Err(MatchingError::NotFull);
    }
    let mc = s.canonical_matching_of(m)?;
    let k = current_canonical(&mc, s)?;
    let targets = standard_targets(w, k);
    if targets.is_empty() {
        return Err(MatchingError::TooManyCharges {
            l: 0,
            w,
            k,
        });
    }
    let machine = machine_for(s);
    let start = pending_state_at(&mc, &StripRegion { orientation: Orientation::LeftToRight, ..*s }, s.b);
    let budget = b_new - s.b;
    let holes = BTreeMap::new();
    for &(target, l_full, a_odd) in &targets {
        if let Some(edges) = machine.schedule(start, target, s.b, budget, &holes) {
            let mut out = mc.clone();
            for (p, q) in edges {
                out.add_edge(p, q)?;
            }
            let snew = StripRegion {
                b: b_new,
                orientation: Orientation::LeftToRight,
                ..*s
            };
            debug_assert!(is_full(&out, &snew)?);
            let form = StandardForm {
                l_full,
                a_odd_offsets: a_odd,
                current: k,
            };
            let real = s.matching_from_canonical(&out)?;
            return Ok((real, form));
        }
    }
    Err(MatchingError::NoSchedule(budget))
}

/// Current computed directly on canonical coordinates (no orientation map).
fn current_canonical(m: &PartialMatching, s: &StripRegion) -> Result<i64, MatchingError> {
    let sc = StripRegion {
        orientation: Orientation::LeftToRight,
        ..*s
    };
    if s.b - s.a < 2 {
        // Too short to have an interior column; derive from the right-edge
        // pending pattern instead.
        let mut c = 0i64;
        for y in s.alpha + 1..s.beta {
            let p = Point::new(s.b, y);
            if !m.is_matched(p) {
                c += charge(Point::new(s.b + 1, y));
            }
        }
        return Ok(c);
    }
    current(m, &sc, s.a + 1)
}

/// Join two full matchings of collinear strips of equal thickness and equal
/// current into one full matching of the hull strip.
pub fn join(
    m1: &PartialMatching,
    s1: &StripRegion,
    m2: &PartialMatching,
    s2: &StripRegion,
) -> Result<PartialMatching, MatchingError> {
    let w = s1.thickness();
    if s2.thickness() != w || s1.alpha != s2.alpha || s1.orientation != s2.orientation {
        return Err(MatchingError::BadRange);
    }
    if s2.a <= s1.b + 2 * C0 * w * w {
        return Err(MatchingError::GapTooSmall);
    }
    let mc1 = s1.canonical_matching_of(m1)?;
    let mc2 = s1.canonical_matching_of(m2)?;
    if !is_full(&mc1, &s1.canonicalized())? {
        return Err(MatchingError::NotFull);
    }
    let s2c = StripRegion {
        a: s2.a,
        b: s2.b,
        orientation: Orientation::LeftToRight,
        ..*s2
    };
    if !is_full(&mc2, &s2c)? {
        return Err(MatchingError::NotFull);
    }
    let k1 = current_canonical(&mc1, &s1.canonicalized())?;
    let k2 = current_canonical(&mc2, &s2c)?;
    if k1 != k2 {
        return Err(MatchingError::CurrentMismatch(k1, k2));
    }
    let machine = machine_for(s1);
    let holes = BTreeMap::new();

    // March the left side to a meeting column, the right side (mirrored) to
    // the next column, demanding complementary pending sets at the seam.
    for shift in 0..2 {
        let e = s1.b + (s2.a - s1.b) / 2 + shift;
        let f = e + 1;
        let left_budget = e - s1.b;
        let right_budget = s2.a - f;
        let start_l = pending_state_at(&mc1, &s1.canonicalized(), s1.b);
        let start_r = mirrored_pending_state(&mc2, &s2c);
        for &(target, _, _) in &standard_targets(w, k1) {
            let le = machine.schedule(start_l, target, s1.b, left_budget, &holes);
            let Some(left_edges) = le else { continue };
            // Right side: mirrored x axis; pending target must be the same
            // row set so the seam pairs exactly.
            let re = machine.schedule_mirrored(start_r, target, s2.a, right_budget, &holes);
            let Some(right_edges) = re else { continue };
            let mut out = mc1.clone();
            out.merge(&mc2)?;
            for (p, q) in left_edges.into_iter().chain(right_edges) {
                out.add_edge(p, q)?;
            }
            // Seam: pending rows at e match pending rows at f.
            for i in 0..w {
                let y = s1.alpha + 1 + i;
                if target & (1 << i) != 0 {
                    out.add_edge(Point::new(e, y), Point::new(f, y))?;
                }
            }
            let hull = StripRegion {
                a: s1.a,
                b: s2.b,
                orientation: Orientation::LeftToRight,
                ..*s1
            };
            if !is_full(&out, &hull)? {
                return Err(MatchingError::NotFull);
            }
            return s1.matching_from_canonical(&out);
        }
    }
    Err(MatchingError::NoSchedule(s2.a - s1.b))
}

fn mirrored_pending_state(m: &PartialMatching, s: &StripRegion) -> u16 {
    let w = s.thickness();
    let mut mask = 0u16;
    for i in 0..w {
        let p = Point::new(s.a, s.alpha + 1 + i);
        if !m.is_matched(p) {
            mask |= 1 << i;
        }
    }
    mask
}

/// Geometry of a corner joint: a horizontal entry strip turning upward per
/// the corner-turn construction. `a` is the last entry column, `w` the
/// thickness, `b` the length of the vertical leg above the joint.
#[derive(Debug, Clone, Copy)]
pub struct CornerGeometry {
    pub w: i32,
    pub a: i32,
    pub b: i32,
}

/// Extend a horizontal-edges-only matching around a corner; the current on
/// the new axis equals the entry current.
///
/// The canonical geometry: entry strip rows `0 < y < w+1` up to column `a+w`,
/// corner block columns `a+1..=a+w`, vertical strip continuing to
/// `y = w+b+1`.
pub fn turn_corner(
    m: &PartialMatching,
    geom: CornerGeometry,
) -> Result<PartialMatching, MatchingError> {
    let CornerGeometry { w, a, b } = geom;
    if w < 2 || w % 2 != 0 {
        return Err(MatchingError::BadThickness(w));
    }
    if b < 2 {
        return Err(MatchingError::BadCorner("vertical leg too short".into()));
    }
    let mut out = m.clone();
    // Entry pattern at column a.
    let mut pending = Vec::new();
    for y in 1..=w {
        let p = Point::new(a, y);
        pending.push(!m.is_matched(p));
    }
    let fan = fan_edges(w, a, b, &pending)?;
    for (p, q) in fan {
        out.add_edge(p, q)?;
    }
    Ok(out)
}

/// Explicit diagonal-fan edges for the corner turn. Returns the edges
/// covering the corner block and the vertical leg up to `y = w + b` with the
/// top line left pending per column parity.
pub(crate) fn fan_edges(
    w: i32,
    a: i32,
    b: i32,
    entry_pending: &[bool],
) -> Result<Vec<(Point, Point)>, MatchingError> {
    if entry_pending.len() != w as usize {
        return Err(MatchingError::BadCorner("entry pattern length".into()));
    }
    let mut edges = Vec::new();
    let top = w + b + 1; // exclusive top line of the vertical region
    for y in 1..=w {
        let d = a + w - y + 1; // diagonal column for this row
        let x_start = if entry_pending[(y - 1) as usize] {
            a
        } else {
            a + 1
        };
        let count = d - x_start + 1;
        let mut x = x_start;
        while x + 1 <= d {
            edges.push((Point::new(x, y), Point::new(x + 1, y)));
            x += 2;
        }
        // Vertical run in column d: starts at y when the row had a leftover
        // cell, else at y+1.
        let run_start = if count % 2 == 1 { y } else { y + 1 };
        let mut t = run_start;
        while t + 1 <= top - 1 {
            edges.push((Point::new(d, t), Point::new(d, t + 1)));
            t += 2;
        }
    }
    Ok(edges)
}

/// Extend past a single grounded charge. The cell `z` is left unmatched and
/// the absolute current changes by exactly one.
pub fn absorb_charge(
    m: &PartialMatching,
    s: &StripRegion,
    z: Point,
    b_new: i32,
) -> Result<PartialMatching, MatchingError> {
    absorb_charges(m, s, &[z], b_new, false)
}

/// Absorb several same-sign charges sitting on the inner line of the strip.
pub fn absorb_charges_same_sign(
    m: &PartialMatching,
    s: &StripRegion,
    zs: &[Point],
    b_new: i32,
) -> Result<PartialMatching, MatchingError> {
    absorb_charges(m, s, zs, b_new, true)
}

fn absorb_charges(
    m: &PartialMatching,
    s: &StripRegion,
    zs: &[Point],
    b_new: i32,
    multi: bool,
) -> Result<PartialMatching, MatchingError> {
    if zs.is_empty() {
        // No charges to absorb: plain standard-form extension.
        return extend_standard(m, s, b_new).map(|(m, _)| m);
    }
    let w = s.thickness();
    let mc = s.canonical_matching_of(m)?;
    let sc = s.canonicalized();
    if !is_full(&mc, &sc)? {
        return Err(MatchingError::NotFull);
    }
    let k = current_canonical(&mc, &sc)?;
    let zsc: Vec<Point> = zs.iter().map(|&z| s.to_canonical(z)).collect();
    let mut cols: Vec<i32> = Vec::new();
    for z in &zsc {
        if z.y != s.alpha + 1 {
            return Err(MatchingError::ChargeMisplaced(format!(
                "charge at ({},{}) not on the inner line",
                z.x, z.y
            )));
        }
        if z.x <= s.b + w {
            return Err(MatchingError::ChargeMisplaced(format!(
                "charge column {} too close to the edge {}",
                z.x, s.b
            )));
        }
        cols.push(z.x);
    }
    cols.sort_unstable();
    cols.dedup();
    if cols.len() != zsc.len() {
        return Err(MatchingError::ChargeMisplaced("duplicate charges".into()));
    }
    if multi {
        let signs: BTreeSet<i64> = zsc.iter().map(|&z| charge(z)).collect();
        if signs.len() > 1 {
            return Err(MatchingError::ChargeMisplaced(
                "charges must share a sign".into(),
            ));
        }
        for pair in cols.windows(2) {
            if (pair[1] - pair[0]) % 2 != 0 {
                return Err(MatchingError::OddChargeGap);
            }
        }
        let l = cols.len() as i64;
        if l >= (w as i64 - 2 * k.abs()) / 2 {
            return Err(MatchingError::TooManyCharges {
                l: cols.len(),
                w,
                k,
            });
        }
        let need = cols[cols.len() - 1] + C0 * w * w;
        if b_new <= need {
            return Err(MatchingError::InsufficientRoom {
                need: need + 1,
                got: b_new,
            });
        }
    } else {
        let need = cols[cols.len() - 1] + w;
        if b_new <= need {
            return Err(MatchingError::InsufficientRoom {
                need: need + 1,
                got: b_new,
            });
        }
    }
    let k_after: i64 = k + zsc.iter().map(|&z| charge(z)).sum::<i64>();
    let targets = standard_targets(w, k_after);
    if targets.is_empty() {
        return Err(MatchingError::TooManyCharges {
            l: cols.len(),
            w,
            k,
        });
    }
    let mut holes: BTreeMap<i32, u16> = BTreeMap::new();
    for z in &zsc {
        *holes.entry(z.x).or_insert(0) |= 1; // row index 0 = inner line
    }
    let machine = machine_for(s);
    let start = pending_state_at(&mc, &sc, s.b);
    let budget = b_new - s.b;
    for &(target, _, _) in &targets {
        if let Some(edges) = machine.schedule(start, target, s.b, budget, &holes) {
            let mut out = mc.clone();
            for (p, q) in edges {
                out.add_edge(p, q)?;
            }
            return s.matching_from_canonical(&out);
        }
    }
    Err(MatchingError::NoSchedule(budget))
}

/// Build a full matching of the strip with the given current. Cells on the
/// left edge of the right sign stay unmatched to source the current.
pub fn matching_with_current(
    s: &StripRegion,
    k: i64,
) -> Result<PartialMatching, MatchingError> {
    let w = s.thickness();
    if 2 * k.abs() > w as i64 {
        return Err(MatchingError::TooManyCharges {
            l: k.unsigned_abs() as usize,
            w,
            k,
        });
    }
    let machine = machine_for(s);
    let mut start = 0u16;
    let mut picked = 0i64;
    for i in 0..w {
        if picked == k.abs() {
            break;
        }
        let q = charge(Point::new(s.a + 1, s.alpha + 1 + i));
        if (q > 0) == (k > 0) {
            start |= 1 << i;
            picked += 1;
        }
    }
    if picked < k.abs() {
        return Err(MatchingError::TooManyCharges {
            l: k.unsigned_abs() as usize,
            w,
            k,
        });
    }
    let budget = s.b - s.a;
    let holes = BTreeMap::new();
    for &(target, _, _) in &standard_targets(w, k) {
        if let Some(edges) = machine.schedule(start, target, s.a, budget, &holes) {
            let mut m = PartialMatching::new();
            for (p, q) in edges {
                m.add_edge(p, q)?;
            }
            return s.matching_from_canonical(&m);
        }
    }
    Err(MatchingError::NoSchedule(budget))
}

/// Seeded random full matching of a strip (random frontier walk); currents
/// vary with the randomly chosen left-edge state.
pub fn random_full_matching(s: &StripRegion, seed: u64) -> PartialMatching {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let machine = machine_for(s);
    let w = s.thickness();
    let all: u16 = (1u16 << w) - 1;
    let mut m = PartialMatching::new();
    let mut state: u16 = rng.gen_range(0..=all);
    let mut x = s.a;
    while x < s.b {
        let succ = machine.walk_successors(state);
        let next = succ[rng.gen_range(0..succ.len())];
        for (p, q) in machine.walk_transition_edges(state, next, x) {
            m.add_edge(p, q).expect("machine transitions are disjoint");
        }
        state = next;
        x += 1;
    }
    s.matching_from_canonical(&m)
        .expect("canonical placement valid")
}

pub use oracle::oracle_matching;
pub use rect::rect_matching_minus;

#[cfg(test)]
mod tests;
