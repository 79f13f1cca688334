use std::collections::BTreeMap;

use super::{Cursor, LegKind, Schedule};
use crate::error::{Error, Result};
use crate::model::Model;

/// Two-phase exploration of a star model: chase the centre until every
/// possible centre has been visited, then spend each birthday interval of the
/// centre sequence on one unvisited leaf (reach the repeated centre at its
/// first occurrence, wait, step to the leaf at its second).
pub fn star_two_phase(model: &Model, seed: u64, start: usize, max_time: u64) -> Result<Schedule> {
    let n = model.n();
    let centre_of = model
        .trees()
        .iter()
        .enumerate()
        .map(|(i, tree)| tree.star_centre().ok_or(Error::NotAStarSnapshot(i)))
        .collect::<Result<Vec<_>>>()?;
    let mut centres = vec![false; n + 1];
    for &c in &centre_of {
        centres[c] = true;
    }
    let mut cur = Cursor::new(model, seed, start, max_time)?;
    let centre_at = |cur: &mut Cursor<'_>, t: u64| -> Result<usize> {
        cur.ensure(t)?;
        Ok(centre_of[cur.window.tree_index(t)])
    };

    let phase_start = cur.now();
    while !cur.done() && (1..=n).any(|v| centres[v] && !cur.visited.contains(v)) {
        let t = cur.now() + 1;
        let c = centre_at(&mut cur, t)?;
        cur.push(c);
    }
    if cur.now() > phase_start {
        cur.leg(LegKind::Coupon, start, phase_start);
    }

    while !cur.done() {
        let (from, s) = (cur.at(), cur.now());
        let mut first = BTreeMap::new();
        let mut t = s + 1;
        let (a, b, v) = loop {
            let c = centre_at(&mut cur, t)?;
            if let Some(&a) = first.get(&c) {
                break (a, t, c);
            }
            first.insert(c, t);
            t += 1;
        };
        let leaf = (1..=n).find(|&w| !cur.visited.contains(w)).expect("not done");
        cur.wait_until(a - 1);
        cur.push(v);
        cur.wait_until(b - 1);
        cur.push(leaf);
        cur.leg(LegKind::Birthday, from, s);
    }
    cur.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::star_catalog;
    use crate::set::VertexSet;
    use crate::walk::validate_walk;
    use crate::window::TemporalWindow;

    #[test]
    fn valid_on_star_catalogs() {
        for (n, k) in [(10, 3), (20, 20), (30, 5)] {
            let model = star_catalog(n, k).unwrap();
            for seed in 0..10 {
                let s = star_two_phase(&model, seed, n, 1_000_000).unwrap();
                let w = TemporalWindow::materialize(&model, seed, 1, s.arrival).unwrap();
                let r = validate_walk(&w, &s.walk, &VertexSet::full(n));
                assert!(r.valid);
                assert_eq!(r.arrival, Some(s.arrival));
            }
        }
    }

    #[test]
    fn rejects_non_stars() {
        let model = crate::models::ladder_model(6).unwrap();
        assert!(matches!(star_two_phase(&model, 0, 1, 100), Err(Error::NotAStarSnapshot(_))));
    }
}
