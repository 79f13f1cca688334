//! Explorer trajectories and their validation against a window.

use serde::{Deserialize, Serialize};

use crate::set::VertexSet;
use crate::window::TemporalWindow;

/// Positions `pos_{t0-1}, pos_{t0}, ..., pos_{t1}` of an explorer; `pos_{t0-1}`
/// is the start vertex and each later entry is the position at the end of that step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Walk {
    pub start_time: u64,
    pub positions: Vec<usize>,
}

impl Walk {
    /// A walk standing at `start` before step `start_time`.
    pub fn new(start_time: u64, start: usize) -> Self {
        Self { start_time, positions: vec![start] }
    }

    pub fn start(&self) -> usize {
        self.positions[0]
    }

    pub fn current(&self) -> usize {
        *self.positions.last().expect("walk has a start vertex")
    }

    /// Time of the last recorded position (`start_time - 1` before any step).
    pub fn current_time(&self) -> u64 {
        self.start_time + self.positions.len() as u64 - 2
    }

    pub fn steps(&self) -> usize {
        self.positions.len() - 1
    }

    /// Position at time `t`, for `start_time - 1 <= t <= current_time()`.
    pub fn position_at(&self, t: u64) -> usize {
        self.positions[(t + 1 - self.start_time) as usize]
    }

    /// Records the position at the end of the next step.
    pub fn push(&mut self, v: usize) {
        self.positions.push(v);
    }

    /// Stays put until the end of step `t`.
    pub fn wait_until(&mut self, t: u64) {
        let v = self.current();
        while self.current_time() < t {
            self.positions.push(v);
        }
    }

    /// Appends `other`, which must start where and when this walk ends.
    pub fn append(&mut self, other: &Walk) {
        assert_eq!(other.start_time, self.current_time() + 1, "walks are not contiguous in time");
        assert_eq!(other.start(), self.current(), "walks are not contiguous in space");
        self.positions.extend_from_slice(&other.positions[1..]);
    }

    /// Drops every position after time `t`.
    pub fn truncate_at(&mut self, t: u64) {
        self.positions.truncate((t + 2 - self.start_time) as usize);
    }

    /// Steps where the explorer moved, as `(time, vertex reached)`.
    pub fn moves(&self) -> Vec<(u64, usize)> {
        self.positions
            .windows(2)
            .enumerate()
            .filter(|(_, p)| p[0] != p[1])
            .map(|(i, p)| (self.start_time + i as u64, p[1]))
            .collect()
    }

    /// First time every vertex of `targets` has been visited, ignoring edge validity.
    pub fn cover_time(&self, targets: &VertexSet) -> Option<u64> {
        let mut remaining = targets.len();
        let mut seen = VertexSet::empty(targets.universe());
        for (i, &v) in self.positions.iter().enumerate() {
            if seen.insert(v) && targets.contains(v) {
                remaining -= 1;
            }
            if remaining == 0 {
                return Some(self.start_time + i as u64 - 1);
            }
        }
        None
    }
}

/// Outcome of checking a walk against a window.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WalkReport {
    pub valid: bool,
    /// First time all targets have been visited; `None` if invalid or never.
    pub arrival: Option<u64>,
    /// First step whose move is not an edge of that step's snapshot, or that
    /// lies outside the window.
    pub invalid_at: Option<u64>,
}

/// Checks that every step waits or crosses an edge of that step's snapshot.
pub fn validate_walk(window: &TemporalWindow<'_>, walk: &Walk, targets: &VertexSet) -> WalkReport {
    let n = window.n();
    for (i, p) in walk.positions.windows(2).enumerate() {
        let t = walk.start_time + i as u64;
        let (a, b) = (p[0], p[1]);
        let ok = a >= 1
            && a <= n
            && b >= 1
            && b <= n
            && window.contains_time(t)
            && (a == b || window.snapshot(t).has_edge(a, b));
        if !ok {
            return WalkReport { valid: false, arrival: None, invalid_at: Some(t) };
        }
    }
    let start = walk.start();
    if start == 0 || start > n {
        return WalkReport { valid: false, arrival: None, invalid_at: Some(walk.start_time - 1) };
    }
    WalkReport { valid: true, arrival: walk.cover_time(targets), invalid_at: None }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::uniform_model;
    use crate::tree::star;

    #[test]
    fn bookkeeping() {
        let mut w = Walk::new(3, 2);
        assert_eq!(w.current_time(), 2);
        w.wait_until(5);
        assert_eq!(w.positions, vec![2, 2, 2, 2]);
        w.push(1);
        assert_eq!(w.current_time(), 6);
        assert_eq!(w.position_at(6), 1);
        assert_eq!(w.moves(), vec![(6, 1)]);
        let mut tail = Walk::new(7, 1);
        tail.push(3);
        w.append(&tail);
        assert_eq!(w.current(), 3);
        w.truncate_at(5);
        assert_eq!(w.current_time(), 5);
    }

    #[test]
    fn validation() {
        let m = uniform_model(3, vec![star(3, 1).unwrap(), star(3, 2).unwrap()]).unwrap();
        let win = TemporalWindow::from_indices(&m, 1, &[0, 1]).unwrap();
        let all = VertexSet::full(3);

        let still = Walk::new(1, 2);
        let r = validate_walk(&win, &still, &VertexSet::from_vertices(3, [2]));
        assert_eq!(r, WalkReport { valid: true, arrival: Some(0), invalid_at: None });

        let good = Walk { start_time: 1, positions: vec![3, 1, 2] };
        assert_eq!(validate_walk(&win, &good, &all).arrival, Some(2));

        let bad = Walk { start_time: 1, positions: vec![3, 2, 2] };
        let r = validate_walk(&win, &bad, &all);
        assert!(!r.valid);
        assert_eq!(r.invalid_at, Some(1));

        let too_long = Walk { start_time: 1, positions: vec![3, 1, 2, 2] };
        assert_eq!(validate_walk(&win, &too_long, &all).invalid_at, Some(3));
    }
}
