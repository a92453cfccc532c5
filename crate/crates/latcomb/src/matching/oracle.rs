//! Brute-force maximum matching on the charge-split bipartite grid graph.

use std::collections::BTreeMap;

use crate::error::MatchingError;
use crate::grid::{charge, Point, Region};
use crate::matching::PartialMatching;

const ORACLE_CAP: usize = 400;

/// Maximum matching via augmenting paths; returns a perfect matching iff one
/// exists, None otherwise. Plane adjacency.
pub fn oracle_matching(region: &Region) -> Result<Option<PartialMatching>, MatchingError> {
    let m = oracle_maximum_matching(region)?;
    if m.domain_len() == region.len() {
        Ok(Some(m))
    } else {
        Ok(None)
    }
}

/// The maximum matching itself (possibly imperfect).
pub fn oracle_maximum_matching(region: &Region) -> Result<PartialMatching, MatchingError> {
    if region.len() > ORACLE_CAP {
        return Err(MatchingError::OracleTooLarge(region.len(), ORACLE_CAP));
    }
    let pos: Vec<Point> = region.iter().filter(|&p| charge(p) > 0).collect();
    let neg: Vec<Point> = region.iter().filter(|&p| charge(p) < 0).collect();
    let neg_index: BTreeMap<Point, usize> =
        neg.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let adj: Vec<Vec<usize>> = pos
        .iter()
        .map(|&p| {
            [(1, 0), (-1, 0), (0, 1), (0, -1)]
                .iter()
                .filter_map(|(dx, dy)| neg_index.get(&Point::new(p.x + dx, p.y + dy)).copied())
                .collect()
        })
        .collect();
    let mut matched_to: Vec<Option<usize>> = vec![None; neg.len()];
    fn augment(
        u: usize,
        adj: &[Vec<usize>],
        seen: &mut [bool],
        matched_to: &mut [Option<usize>],
    ) -> bool {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                if matched_to[v].is_none()
                    || augment(matched_to[v].unwrap(), adj, seen, matched_to)
                {
                    matched_to[v] = Some(u);
                    return true;
                }
            }
        }
        false
    }
    for u in 0..pos.len() {
        let mut seen = vec![false; neg.len()];
        augment(u, &adj, &mut seen, &mut matched_to);
    }
    let mut m = PartialMatching::new();
    for (v, mu) in matched_to.iter().enumerate() {
        if let Some(u) = mu {
            m.add_edge(pos[*u], neg[v])?;
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Rect;

    #[test]
    fn even_rect_perfect() {
        let r = Region::from_rect(Rect::new(0, 0, 3, 2).unwrap());
        assert!(oracle_matching(&r).unwrap().is_some());
    }

    #[test]
    fn odd_rect_imperfect() {
        let r = Region::from_rect(Rect::new(0, 0, 2, 2).unwrap());
        assert!(oracle_matching(&r).unwrap().is_none());
        let max = oracle_maximum_matching(&r).unwrap();
        assert_eq!(max.domain_len(), 8);
    }

    #[test]
    fn zero_charge_not_sufficient() {
        // Two opposite T-tetrominoes: total charge 0, but each T has three
        // same-charge cells adjacent only to its center, so no perfect
        // matching exists.
        let shape = Region::from_plane_cells([
            Point::new(0, 0),
            Point::new(1, 0),
            Point::new(2, 0),
            Point::new(1, 1),
            Point::new(0, 3),
            Point::new(1, 3),
            Point::new(2, 3),
            Point::new(1, 4),
        ]);
        assert_eq!(shape.total_charge(), 0);
        assert!(oracle_matching(&shape).unwrap().is_none());
    }
}
