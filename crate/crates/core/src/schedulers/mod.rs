//! Exploration strategies that see the whole future (meta-graph, linear,
//! greedy, two-phase star) and the online harness.

mod backbone;
mod greedy;
mod meta;
mod online;
mod star;

pub use backbone::{build_backbone_plan, linear_schedule, min_weight_spanning_tree, BackbonePlan, MetaEdge};
pub use greedy::greedy_schedule;
pub use meta::{build_meta_graph, meta_graph_schedule, MetaGraph};
pub use online::{
    policy_by_name, run_online, CentreChase, CentreGrab, Event, MstEulerOnline, OnlinePolicy, OnlineRun,
    RabbitChase, RandomWalk, StandStill, StepView, POLICY_NAMES,
};
pub use star::star_two_phase;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::Model;
use crate::reach::foremost_walk;
use crate::set::VertexSet;
use crate::tree::Tree;
use crate::walk::Walk;
use crate::window::TemporalWindow;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LegKind {
    /// Foremost walk to the first vertex of a planned route.
    Approach,
    /// Crossing of a declared-close pair inside a meta-graph component.
    MetaEdge,
    /// Hop between meta-graph components within `n - 1` steps.
    Hop,
    /// Wait-and-cross over an edge of the backbone forest.
    Backbone,
    /// Scanned crossing between two fast components.
    FastCrossing,
    /// Foremost walk to the nearest unvisited vertex.
    Greedy,
    /// Step onto the current star centre.
    Coupon,
    /// Two-step move through a centre seen twice within an interval.
    Birthday,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Leg {
    pub kind: LegKind,
    pub from: usize,
    pub to: usize,
    pub start_time: u64,
    pub end_time: u64,
    /// Scan-window extensions needed by a fast crossing.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extensions: Option<u32>,
}

/// A complete exploration: the walk, its cover time and how it was assembled.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Schedule {
    pub start: usize,
    pub walk: Walk,
    pub arrival: u64,
    pub legs: Vec<Leg>,
}

impl Schedule {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "start": self.start,
            "moves": self.walk.moves(),
            "arrival": self.arrival,
            "legs": self.legs,
        })
    }

    /// Total scan-window extensions over all fast crossings.
    pub fn extensions(&self) -> u32 {
        self.legs.iter().filter_map(|l| l.extensions).sum()
    }
}

/// Walk under construction against a window that grows on demand.
pub(crate) struct Cursor<'m> {
    pub window: TemporalWindow<'m>,
    pub walk: Walk,
    pub visited: VertexSet,
    pub legs: Vec<Leg>,
    pub max_time: u64,
    arrival: Option<u64>,
}

impl<'m> Cursor<'m> {
    pub fn new(model: &'m Model, seed: u64, start: usize, max_time: u64) -> Result<Self> {
        let n = model.n();
        if start == 0 || start > n {
            return Err(Error::VertexOutOfRange { vertex: start, n });
        }
        let window = TemporalWindow::materialize(model, seed, 1, 0)?;
        let visited = VertexSet::from_vertices(n, [start]);
        let arrival = visited.is_full().then_some(0);
        Ok(Self { window, walk: Walk::new(1, start), visited, legs: Vec::new(), max_time, arrival })
    }

    pub fn n(&self) -> usize {
        self.window.n()
    }

    pub fn now(&self) -> u64 {
        self.walk.current_time()
    }

    pub fn at(&self) -> usize {
        self.walk.current()
    }

    pub fn done(&self) -> bool {
        self.arrival.is_some()
    }

    /// Makes snapshots available up to `t`, failing past the horizon.
    pub fn ensure(&mut self, t: u64) -> Result<()> {
        if t > self.max_time {
            return Err(Error::HorizonExceeded(self.max_time));
        }
        if t <= self.window.t1() {
            return Ok(());
        }
        // grow geometrically so step-by-step callers do not resample per step
        let target = t.max(self.window.t1() + 1024).max(2 * self.window.t1()).min(self.max_time);
        self.window.extend_to(target)
    }

    pub fn snapshot(&mut self, t: u64) -> Result<&'m Tree> {
        self.ensure(t)?;
        Ok(self.window.snapshot(t))
    }

    /// Records the position at the end of the next step.
    pub fn push(&mut self, v: usize) {
        self.walk.push(v);
        if self.visited.insert(v) && self.visited.is_full() && self.arrival.is_none() {
            self.arrival = Some(self.now());
        }
    }

    pub fn wait_until(&mut self, t: u64) {
        self.walk.wait_until(t);
    }

    pub fn follow(&mut self, walk: &Walk) {
        for &v in &walk.positions[1..] {
            self.push(v);
        }
    }

    pub fn leg(&mut self, kind: LegKind, from: usize, start_time: u64) {
        self.legs.push(Leg { kind, from, to: self.at(), start_time, end_time: self.now(), extensions: None });
    }

    /// Waits at the current vertex until the edge to `v` appears, then crosses.
    pub fn wait_and_cross(&mut self, v: usize) -> Result<()> {
        let u = self.at();
        if u == v {
            return Ok(());
        }
        let mut t = self.now() + 1;
        while !self.snapshot(t)?.has_edge(u, v) {
            t += 1;
        }
        self.wait_until(t - 1);
        self.push(v);
        Ok(())
    }

    /// Foremost walk from the current vertex to `w`, which always completes
    /// within `n - 1` steps.
    pub fn foremost_to(&mut self, w: usize) -> Result<()> {
        let from = self.now() + 1;
        let horizon = (self.now() + self.n() as u64 - 1).min(self.max_time);
        self.ensure(horizon.max(self.now()))?;
        let walk = foremost_walk(&self.window, self.at(), w, from)?
            .ok_or(Error::HorizonExceeded(self.max_time))?;
        self.follow(&walk);
        Ok(())
    }

    pub fn finish(mut self) -> Result<Schedule> {
        let arrival = self.arrival.ok_or(Error::HorizonExceeded(self.max_time))?;
        self.walk.truncate_at(arrival);
        self.legs.retain(|l| l.start_time <= arrival);
        for leg in &mut self.legs {
            leg.end_time = leg.end_time.min(arrival);
        }
        let start = self.walk.start();
        Ok(Schedule { start, walk: self.walk, arrival, legs: self.legs })
    }
}

/// Closed walk of a tree from `root` visiting children in ascending order.
pub(crate) fn euler_tour(adjacency: &[Vec<usize>], root: usize) -> Vec<usize> {
    let mut tour = vec![root];
    let mut seen = vec![false; adjacency.len()];
    seen[root] = true;
    let mut stack = vec![(root, 0usize)];
    while let Some(top) = stack.last_mut() {
        let (x, i) = *top;
        if i == adjacency[x].len() {
            stack.pop();
            if let Some(&(parent, _)) = stack.last() {
                tour.push(parent);
            }
            continue;
        }
        top.1 += 1;
        let y = adjacency[x][i];
        if !seen[y] {
            seen[y] = true;
            tour.push(y);
            stack.push((y, 0));
        }
    }
    tour
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tours() {
        let adj = vec![vec![], vec![2, 3], vec![1, 4], vec![1], vec![2]];
        assert_eq!(euler_tour(&adj, 1), vec![1, 2, 4, 2, 1, 3, 1]);
        assert_eq!(euler_tour(&[vec![], vec![]], 1), vec![1]);
    }
}
