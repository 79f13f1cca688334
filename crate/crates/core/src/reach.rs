//! Earliest-arrival sweeps, foremost walks and the n-step hop.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::Model;
use crate::set::VertexSet;
use crate::tree::Tree;
use crate::walk::Walk;
use crate::window::TemporalWindow;

/// Earliest arrival times from a source set, with the predecessor time-edge
/// that first reached each vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArrivalMap {
    pub t_start: u64,
    /// Indexed by vertex; entry 0 unused. `None` means unreached.
    pub arrival: Vec<Option<u64>>,
    /// Vertex from which each non-source vertex was first reached.
    pub pred: Vec<Option<usize>>,
}

impl ArrivalMap {
    pub fn get(&self, v: usize) -> Option<u64> {
        self.arrival[v]
    }

    pub fn reached_count(&self) -> usize {
        self.arrival.iter().filter(|a| a.is_some()).count()
    }

    /// Vertices reached by the end of step `t`.
    pub fn reached_by(&self, t: u64) -> VertexSet {
        let n = self.arrival.len() - 1;
        VertexSet::from_vertices(n, (1..=n).filter(|&v| matches!(self.arrival[v], Some(a) if a <= t)))
    }
}

struct Sweep {
    arrival: Vec<Option<u64>>,
    pred: Vec<Option<usize>>,
    reached: usize,
}

impl Sweep {
    fn new(n: usize, sources: impl IntoIterator<Item = usize>, t_start: u64) -> Self {
        let mut arrival = vec![None; n + 1];
        let mut reached = 0;
        for s in sources {
            if arrival[s].is_none() {
                arrival[s] = Some(t_start - 1);
                reached += 1;
            }
        }
        Self { arrival, pred: vec![None; n + 1], reached }
    }

    /// Relaxes the edges of snapshot `t`.
    fn step(&mut self, tree: &Tree, t: u64) {
        for &(a, b) in tree.edges() {
            for (u, v) in [(a, b), (b, a)] {
                if !matches!(self.arrival[u], Some(x) if x < t) {
                    continue;
                }
                match self.arrival[v] {
                    None => {
                        self.arrival[v] = Some(t);
                        self.pred[v] = Some(u);
                        self.reached += 1;
                    }
                    Some(x) if x == t && self.pred[v].is_some_and(|p| u < p) => {
                        self.pred[v] = Some(u);
                    }
                    _ => {}
                }
            }
        }
    }
}

fn check_sources(window: &TemporalWindow<'_>, sources: &VertexSet, t_start: u64) -> Result<()> {
    if sources.is_empty() {
        return Err(Error::EmptySources);
    }
    if sources.universe() != window.n() {
        return Err(Error::BadParams(format!(
            "source set over {} vertices, window over {}",
            sources.universe(),
            window.n()
        )));
    }
    if t_start < window.t0() || t_start > window.t1() + 1 {
        return Err(Error::InvalidRange { t0: t_start, t1: window.t1() });
    }
    Ok(())
}

fn sweep(
    window: &TemporalWindow<'_>,
    sources: &VertexSet,
    t_start: u64,
    t_end: u64,
    stop_at: Option<usize>,
) -> ArrivalMap {
    let n = window.n();
    let mut s = Sweep::new(n, sources.iter(), t_start);
    let mut t = t_start;
    while t <= t_end && s.reached < n {
        if let Some(w) = stop_at {
            if s.arrival[w].is_some() {
                break;
            }
        }
        s.step(window.snapshot(t), t);
        t += 1;
    }
    ArrivalMap { t_start, arrival: s.arrival, pred: s.pred }
}

/// Earliest arrival at every vertex from `sources`, starting with the snapshot at `t_start`.
pub fn earliest_arrival(
    window: &TemporalWindow<'_>,
    sources: &VertexSet,
    t_start: u64,
) -> Result<ArrivalMap> {
    check_sources(window, sources, t_start)?;
    Ok(sweep(window, sources, t_start, window.t1(), None))
}

/// Earliest arrival over `steps` snapshots sampled on the fly from time `t_start`,
/// stopping once every vertex is reached. Returns the arrival times.
pub fn streaming_arrival(
    model: &Model,
    seed: u64,
    source: usize,
    t_start: u64,
    steps: u64,
) -> Vec<Option<u64>> {
    let n = model.n();
    let mut s = Sweep::new(n, [source], t_start);
    let mut stream = model.snapshots_from(seed, t_start);
    let mut t = t_start;
    while t < t_start + steps && s.reached < n {
        let idx = stream.next().expect("snapshot stream is infinite");
        s.step(model.tree(idx), t);
        t += 1;
    }
    s.arrival
}

fn reconstruct(map: &ArrivalMap, u: usize, w: usize) -> Walk {
    let mut hops = Vec::new();
    let mut x = w;
    while x != u {
        let p = map.pred[x].expect("reached vertex has a predecessor");
        hops.push((p, x, map.arrival[x].expect("reached")));
        x = p;
    }
    hops.reverse();
    let mut walk = Walk::new(map.t_start, u);
    for (_, to, t) in hops {
        walk.wait_until(t - 1);
        walk.push(to);
    }
    walk
}

/// A walk from `u` reaching `w` at its earliest arrival time, or `None` if `w`
/// is not reached within the window.
pub fn foremost_walk(
    window: &TemporalWindow<'_>,
    u: usize,
    w: usize,
    t_start: u64,
) -> Result<Option<Walk>> {
    let n = window.n();
    for x in [u, w] {
        if x == 0 || x > n {
            return Err(Error::VertexOutOfRange { vertex: x, n });
        }
    }
    let sources = VertexSet::from_vertices(n, [u]);
    check_sources(window, &sources, t_start)?;
    let map = sweep(window, &sources, t_start, window.t1(), Some(w));
    if map.arrival[w].is_none() {
        return Ok(None);
    }
    Ok(Some(reconstruct(&map, u, w)))
}

/// Moves from `u` to `w` within the `n - 1` snapshots starting at `t`, which
/// always suffices when every snapshot is connected.
pub fn ehk_hop(window: &TemporalWindow<'_>, u: usize, w: usize, t: u64) -> Result<Walk> {
    let need = t + window.n() as u64 - 2;
    if t < window.t0() || need > window.t1() {
        return Err(Error::WindowTooShort { need, have: window.t1() });
    }
    let sub = window.restrict(t, need);
    Ok(foremost_walk(&sub, u, w, t)?.expect("spanning snapshots connect any pair within n - 1 steps"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::uniform_model;
    use crate::tree::star;
    use crate::walk::validate_walk;

    fn two_stars() -> Model {
        uniform_model(3, vec![star(3, 1).unwrap(), star(3, 2).unwrap()]).unwrap()
    }

    #[test]
    fn hand_sweep() {
        let m = two_stars();
        let w = TemporalWindow::from_indices(&m, 1, &[0, 1]).unwrap();
        let map = earliest_arrival(&w, &VertexSet::from_vertices(3, [3]), 1).unwrap();
        assert_eq!(map.arrival, vec![None, Some(1), Some(2), Some(0)]);
        assert_eq!(map.pred[2], Some(1));
    }

    #[test]
    fn all_sources() {
        let m = two_stars();
        let w = TemporalWindow::from_indices(&m, 4, &[0, 1]).unwrap();
        let map = earliest_arrival(&w, &VertexSet::full(3), 5).unwrap();
        assert_eq!(map.arrival, vec![None, Some(4), Some(4), Some(4)]);
    }

    #[test]
    fn rejects_bad_arguments() {
        let m = two_stars();
        let w = TemporalWindow::from_indices(&m, 1, &[0, 1]).unwrap();
        assert_eq!(earliest_arrival(&w, &VertexSet::empty(3), 1), Err(Error::EmptySources));
        assert!(earliest_arrival(&w, &VertexSet::full(3), 4).is_err());
    }

    #[test]
    fn foremost_examples() {
        let m = two_stars();
        let w = TemporalWindow::from_indices(&m, 1, &[0, 1]).unwrap();
        let walk = foremost_walk(&w, 3, 2, 1).unwrap().unwrap();
        assert_eq!(walk.positions, vec![3, 1, 2]);
        let r = validate_walk(&w, &walk, &VertexSet::from_vertices(3, [2]));
        assert!(r.valid);
        assert_eq!(r.arrival, Some(2));

        let same = foremost_walk(&w, 2, 2, 1).unwrap().unwrap();
        assert_eq!(same.positions, vec![2]);

        let empty = TemporalWindow::from_indices(&m, 1, &[]).unwrap();
        assert_eq!(foremost_walk(&empty, 3, 2, 1).unwrap(), None);
    }

    #[test]
    fn hop_example() {
        let m = two_stars();
        let w = TemporalWindow::from_indices(&m, 1, &[0, 1]).unwrap();
        let walk = ehk_hop(&w, 3, 2, 1).unwrap();
        assert_eq!(walk.current_time(), 2);
        assert_eq!(walk.current(), 2);
        assert_eq!(ehk_hop(&w, 2, 2, 1).unwrap().positions, vec![2]);
        assert!(matches!(ehk_hop(&w, 3, 2, 2), Err(Error::WindowTooShort { .. })));
    }

    #[test]
    fn streaming_matches_materialized() {
        let m = two_stars();
        let w = TemporalWindow::materialize(&m, 11, 3, 12).unwrap();
        let map = earliest_arrival(&w, &VertexSet::from_vertices(3, [3]), 3).unwrap();
        assert_eq!(streaming_arrival(&m, 11, 3, 3, 10), map.arrival);
    }
}
