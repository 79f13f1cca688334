use super::{Cursor, LegKind, Schedule};
use crate::error::{Error, Result};
use crate::model::Model;
use crate::reach::earliest_arrival;
use crate::set::VertexSet;

/// Repeatedly walks to the unvisited vertex reachable soonest (ties: smallest id).
pub fn greedy_schedule(model: &Model, seed: u64, start: usize, max_time: u64) -> Result<Schedule> {
    let n = model.n();
    let mut cur = Cursor::new(model, seed, start, max_time)?;
    while !cur.done() {
        let (from, t) = (cur.at(), cur.now());
        let horizon = (t + n as u64 - 1).min(max_time);
        cur.ensure(horizon.max(t))?;
        let map = earliest_arrival(&cur.window, &VertexSet::from_vertices(n, [from]), t + 1)?;
        let target = (1..=n)
            .filter(|&v| !cur.visited.contains(v))
            .filter_map(|v| map.get(v).map(|a| (a, v)))
            .min()
            .ok_or(Error::HorizonExceeded(max_time))?
            .1;
        cur.foremost_to(target)?;
        cur.leg(LegKind::Greedy, from, t);
    }
    cur.finish()
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::uniform_model;
    use crate::tree::path;

    #[test]
    fn sweeps_a_static_path() {
        let model = uniform_model(6, vec![path(6).unwrap()]).unwrap();
        let s = greedy_schedule(&model, 1, 1, 100).unwrap();
        assert_eq!(s.arrival, 5);
        let single = uniform_model(1, vec![path(1).unwrap()]).unwrap();
        assert_eq!(greedy_schedule(&single, 1, 1, 100).unwrap().arrival, 0);
    }
}
