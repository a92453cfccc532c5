//! Column-state engine for strip matchings.
//!
//! The frontier state at column x is the set of rows whose cell (x, y) is
//! still unmatched and must pair with (x+1, y). Advancing one column forces
//! those horizontal edges; the remaining cells of the new column either pair
//! vertically in even consecutive blocks or stay pending. Deleted cells
//! ("holes", absorbed charges) are excluded per column; each hole shifts the
//! conserved current by its charge.
//!
//! Schedules are found by a layered breadth-first sweep that lands on the
//! target state after exactly the allotted number of columns, preferring
//! transitions that move pending rows downward.

use std::collections::{BTreeMap, HashMap};

use crate::grid::Point;

pub const MAX_THICKNESS: i32 = 14;

pub struct StateMachine {
    alpha: i32,
    w: i32,
    all: u16,
    options: std::cell::RefCell<HashMap<u16, Vec<u16>>>,
}

impl StateMachine {
    pub fn new(alpha: i32, beta: i32) -> Self {
        let w = beta - alpha - 1;
        assert!((2..=MAX_THICKNESS).contains(&w));
        StateMachine {
            alpha,
            w,
            all: (1u16 << w) - 1,
            options: Default::default(),
        }
    }

    fn row_y(&self, i: u32) -> i32 {
        self.alpha + 1 + i as i32
    }

    /// All pending-set choices for a given set of available rows: the unkept
    /// rows must split into blocks of adjacent pairs.
    fn pending_options(&self, avail: u16) -> Vec<u16> {
        if let Some(v) = self.options.borrow().get(&avail) {
            return v.clone();
        }
        // Per maximal run of available rows, enumerate kept subsets whose
        // complement within the run has only even maximal blocks.
        let mut runs: Vec<(u32, u32)> = Vec::new(); // (start, len)
        let mut i = 0u32;
        while i < self.w as u32 {
            if avail & (1 << i) != 0 {
                let s = i;
                while i < self.w as u32 && avail & (1 << i) != 0 {
                    i += 1;
                }
                runs.push((s, i - s));
            } else {
                i += 1;
            }
        }
        fn run_patterns(len: u32) -> Vec<u32> {
            // Bitmasks of kept positions within a run of `len` rows; gaps
            // between kept positions (and the flanks) must have even size.
            let mut out = Vec::new();
            fn rec(pos: u32, len: u32, acc: u32, out: &mut Vec<u32>) {
                if pos == len {
                    out.push(acc);
                    return;
                }
                // Keep a row after an even gap starting at pos.
                let mut g = 0;
                while pos + g < len {
                    if g % 2 == 0 {
                        rec(pos + g + 1, len, acc | (1 << (pos + g)), out);
                    }
                    g += 1;
                }
                if (len - pos) % 2 == 0 {
                    out.push(acc);
                }
            }
            rec(0, len, 0, &mut out);
            out.sort_unstable();
            out.dedup();
            out
        }
        let mut states = vec![0u16];
        for &(start, len) in &runs {
            let pats = run_patterns(len);
            let mut next = Vec::with_capacity(states.len() * pats.len());
            for &s in &states {
                for &p in &pats {
                    next.push(s | ((p as u16) << start));
                }
            }
            states = next;
        }
        // Downward preference: states whose pending rows sit lower first.
        states.sort_unstable();
        states.dedup();
        self.options.borrow_mut().insert(avail, states.clone());
        states
    }

    /// Edges realized by a transition from `u` at column x to `v` at column
    /// x+1 with holes `h` in column x+1.
    fn transition_edges(&self, u: u16, v: u16, h: u16, x: i32) -> Vec<(Point, Point)> {
        let mut edges = Vec::new();
        for i in 0..self.w as u32 {
            if u & (1 << i) != 0 {
                edges.push((
                    Point::new(x, self.row_y(i)),
                    Point::new(x + 1, self.row_y(i)),
                ));
            }
        }
        let pair_rows = self.all & !u & !h & !v;
        let mut i = 0u32;
        while i < self.w as u32 {
            if pair_rows & (1 << i) != 0 {
                let s = i;
                while i < self.w as u32 && pair_rows & (1 << i) != 0 {
                    i += 1;
                }
                let mut t = s;
                while t + 1 < i {
                    edges.push((
                        Point::new(x + 1, self.row_y(t)),
                        Point::new(x + 1, self.row_y(t + 1)),
                    ));
                    t += 2;
                }
            } else {
                i += 1;
            }
        }
        edges
    }

    fn successors(&self, u: u16, h: u16) -> Vec<u16> {
        if u & h != 0 {
            return Vec::new(); // a pending row ran into a deleted cell
        }
        let avail = self.all & !u & !h;
        self.pending_options(avail)
    }

    /// Land on `target` after exactly `budget` columns starting right of
    /// column `x0`; `holes` maps absolute columns to deleted row masks.
    /// Returns the realized edges or None.
    pub fn schedule(
        &self,
        start: u16,
        target: u16,
        x0: i32,
        budget: i32,
        holes: &BTreeMap<i32, u16>,
    ) -> Option<Vec<(Point, Point)>> {
        self.schedule_oriented(start, target, x0, budget, holes, false)
    }

    /// Same, marching leftward (mirrored x axis), landing at `x0 - budget`.
    pub fn schedule_mirrored(
        &self,
        start: u16,
        target: u16,
        x0: i32,
        budget: i32,
        holes: &BTreeMap<i32, u16>,
    ) -> Option<Vec<(Point, Point)>> {
        self.schedule_oriented(start, target, x0, budget, holes, true)
    }

    fn schedule_oriented(
        &self,
        start: u16,
        target: u16,
        x0: i32,
        budget: i32,
        holes: &BTreeMap<i32, u16>,
        mirrored: bool,
    ) -> Option<Vec<(Point, Point)>> {
        if budget < 0 {
            return None;
        }
        if budget == 0 {
            return if start == target { Some(Vec::new()) } else { None };
        }
        let nstates = 1usize << self.w;
        let col_at = |t: i32| if mirrored { x0 - t } else { x0 + t };
        // parent[t][state] = predecessor state + 1 (0 = unreached).
        let mut parent = vec![vec![0u16; nstates]; (budget + 1) as usize];
        let mut frontier = vec![start];
        parent[0][start as usize] = 1;
        for t in 1..=budget {
            let h = holes.get(&col_at(t)).copied().unwrap_or(0);
            let mut next = Vec::new();
            for &u in &frontier {
                for v in self.successors(u, h) {
                    if parent[t as usize][v as usize] == 0 {
                        parent[t as usize][v as usize] = u + 1;
                        next.push(v);
                    }
                }
            }
            if next.is_empty() {
                return None;
            }
            frontier = next;
        }
        if parent[budget as usize][target as usize] == 0 {
            return None;
        }
        // Reconstruct.
        let mut states = vec![0u16; (budget + 1) as usize];
        states[budget as usize] = target;
        for t in (1..=budget).rev() {
            let v = states[t as usize];
            states[(t - 1) as usize] = parent[t as usize][v as usize] - 1;
        }
        let mut edges = Vec::new();
        for t in 1..=budget {
            let h = holes.get(&col_at(t)).copied().unwrap_or(0);
            let u = states[(t - 1) as usize];
            let v = states[t as usize];
            if mirrored {
                edges.extend(
                    self.mirrored_transition_edges(u, v, h, col_at(t - 1)),
                );
            } else {
                edges.extend(self.transition_edges(u, v, h, col_at(t - 1)));
            }
        }
        Some(edges)
    }

    pub(crate) fn walk_successors(&self, u: u16) -> Vec<u16> {
        self.successors(u, 0)
    }

    pub(crate) fn walk_transition_edges(&self, u: u16, v: u16, x: i32) -> Vec<(Point, Point)> {
        self.transition_edges(u, v, 0, x)
    }

    fn mirrored_transition_edges(&self, u: u16, v: u16, h: u16, x: i32) -> Vec<(Point, Point)> {
        let mut edges = Vec::new();
        for i in 0..self.w as u32 {
            if u & (1 << i) != 0 {
                edges.push((
                    Point::new(x, self.row_y(i)),
                    Point::new(x - 1, self.row_y(i)),
                ));
            }
        }
        let pair_rows = self.all & !u & !h & !v;
        let mut i = 0u32;
        while i < self.w as u32 {
            if pair_rows & (1 << i) != 0 {
                let s = i;
                while i < self.w as u32 && pair_rows & (1 << i) != 0 {
                    i += 1;
                }
                let mut t = s;
                while t + 1 < i {
                    edges.push((
                        Point::new(x - 1, self.row_y(t)),
                        Point::new(x - 1, self.row_y(t + 1)),
                    ));
                    t += 2;
                }
            } else {
                i += 1;
            }
        }
        edges
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn options_even_runs() {
        let m = StateMachine::new(0, 5); // w = 4
        let opts = m.pending_options(0b1111);
        // Keeping nothing requires the whole run even: allowed.
        assert!(opts.contains(&0));
        // Keeping everything is always allowed.
        assert!(opts.contains(&0b1111));
        // Keeping only row 1 leaves blocks {0} and {2,3}: odd block, not allowed.
        assert!(!opts.contains(&0b0010));
        // Keeping rows 0 and 2 leaves {1},{3}: not allowed.
        assert!(!opts.contains(&0b0101));
        // Keeping rows 2,3 leaves {0,1}: allowed.
        assert!(opts.contains(&0b1100));
    }

    #[test]
    fn schedule_roundtrip() {
        let m = StateMachine::new(0, 5);
        let holes = BTreeMap::new();
        // From all-pending to all-pending over an even budget.
        let e = m.schedule(0b1111, 0b1111, 0, 4, &holes).unwrap();
        assert_eq!(e.len(), 2 * 4); // forced horizontals only
        // Odd budget from all-pending to none-pending.
        let e = m.schedule(0b1111, 0b0000, 0, 3, &holes).unwrap();
        assert!(!e.is_empty());
    }
}
