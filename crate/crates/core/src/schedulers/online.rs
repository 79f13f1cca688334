use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{euler_tour, min_weight_spanning_tree};
use crate::error::{Error, Result};
use crate::model::{Model, ONE};
use crate::models::ladder_half;
use crate::rng::aux_rng;
use crate::set::VertexSet;
use crate::tree::Tree;
use crate::walk::Walk;

pub const POLICY_NAMES: [&str; 6] =
    ["stand_still", "random_walk", "centre_chase", "centre_grab", "mst_euler", "rabbit_chase"];

/// What a policy may see at step `t`: the current snapshot and nothing later.
pub struct StepView<'a> {
    pub t: u64,
    pub snapshot: &'a Tree,
    pub current: usize,
    pub visited: &'a VertexSet,
    /// Centre of the snapshot when the model consists of stars.
    pub centre: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Event {
    pub time: u64,
    pub kind: String,
    pub vertex: usize,
    /// Steps spent waiting for the event, counting the step it happened in.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wait: Option<u64>,
}

pub trait OnlinePolicy {
    fn name(&self) -> &'static str;

    /// The position at the end of step `view.t`.
    fn decide(&mut self, view: &StepView<'_>, rng: &mut ChaCha8Rng) -> Result<usize>;

    /// Events recorded since the last call.
    fn take_events(&mut self) -> Vec<Event> {
        Vec::new()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OnlineRun {
    pub policy: String,
    pub start: usize,
    pub horizon: u64,
    pub walk: Walk,
    /// First time every vertex was visited, `None` if the horizon ran out.
    pub dexp: Option<u64>,
    /// Steps at which the walker already stood on the new snapshot's star centre.
    pub catches: Vec<u64>,
    pub events: Vec<Event>,
}

impl OnlineRun {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "policy": self.policy,
            "start": self.start,
            "horizon": self.horizon,
            "dexp": self.dexp,
            "moves": self.walk.moves(),
            "catches": self.catches.len(),
            "events": self.events,
        })
    }
}

/// Replays `policy` against the snapshots of `seed`, revealing one snapshot per step.
pub fn run_online(
    model: &Model,
    seed: u64,
    policy: &mut dyn OnlinePolicy,
    start: usize,
    horizon: u64,
) -> Result<OnlineRun> {
    let n = model.n();
    if start == 0 || start > n {
        return Err(Error::VertexOutOfRange { vertex: start, n });
    }
    if horizon == 0 {
        return Err(Error::BadParams("horizon must be at least 1".to_string()));
    }
    let centres: Vec<Option<usize>> = if model.is_star_model() {
        model.trees().iter().map(Tree::star_centre).collect()
    } else {
        vec![None; model.len()]
    };
    let mut rng = aux_rng(seed, policy.name());
    let mut walk = Walk::new(1, start);
    let mut visited = VertexSet::from_vertices(n, [start]);
    let mut dexp = visited.is_full().then_some(0);
    let mut catches = Vec::new();
    let mut events = Vec::new();
    for (index, t) in model.snapshots_from(seed, 1).zip(1..=horizon) {
        if dexp.is_some() {
            break;
        }
        let snapshot = model.tree(index);
        let current = walk.current();
        let centre = centres[index];
        if centre == Some(current) {
            catches.push(t);
        }
        let view = StepView { t, snapshot, current, visited: &visited, centre };
        let next = policy.decide(&view, &mut rng)?;
        if next != current && !snapshot.has_edge(current, next) {
            return Err(Error::PolicyIllegalMove { policy: policy.name().to_string(), time: t, from: current, to: next });
        }
        events.extend(policy.take_events());
        walk.push(next);
        if visited.insert(next) && visited.is_full() {
            dexp = Some(t);
        }
    }
    Ok(OnlineRun { policy: policy.name().to_string(), start, horizon, walk, dexp, catches, events })
}

pub fn policy_by_name(name: &str, model: &Model) -> Result<Box<dyn OnlinePolicy>> {
    Ok(match name {
        "stand_still" => Box::new(StandStill),
        "random_walk" => Box::new(RandomWalk),
        "centre_chase" => Box::new(CentreChase),
        "centre_grab" => Box::new(CentreGrab),
        "mst_euler" => Box::new(MstEulerOnline::new(model)?),
        "rabbit_chase" => Box::new(RabbitChase::new(model)?),
        other => return Err(Error::BadParams(format!("unknown policy {other:?}; expected one of {POLICY_NAMES:?}"))),
    })
}

pub struct StandStill;

impl OnlinePolicy for StandStill {
    fn name(&self) -> &'static str {
        "stand_still"
    }

    fn decide(&mut self, view: &StepView<'_>, _: &mut ChaCha8Rng) -> Result<usize> {
        Ok(view.current)
    }
}

/// Stays or moves to a snapshot neighbour, uniformly.
pub struct RandomWalk;

impl OnlinePolicy for RandomWalk {
    fn name(&self) -> &'static str {
        "random_walk"
    }

    fn decide(&mut self, view: &StepView<'_>, rng: &mut ChaCha8Rng) -> Result<usize> {
        let neighbors = view.snapshot.neighbors(view.current);
        let i = rng.gen_range(0..=neighbors.len());
        Ok(if i == neighbors.len() { view.current } else { neighbors[i] })
    }
}

fn centre(view: &StepView<'_>) -> Result<usize> {
    view.centre.ok_or(Error::NotAStarSnapshot(view.t as usize))
}

/// Moves onto the current star centre every step.
pub struct CentreChase;

impl OnlinePolicy for CentreChase {
    fn name(&self) -> &'static str {
        "centre_chase"
    }

    fn decide(&mut self, view: &StepView<'_>, _: &mut ChaCha8Rng) -> Result<usize> {
        centre(view)
    }
}

/// Centre chase that, when already standing on the new centre, steps to the
/// smallest unvisited vertex instead.
pub struct CentreGrab;

impl OnlinePolicy for CentreGrab {
    fn name(&self) -> &'static str {
        "centre_grab"
    }

    fn decide(&mut self, view: &StepView<'_>, _: &mut ChaCha8Rng) -> Result<usize> {
        let c = centre(view)?;
        if c == view.current {
            if let Some(&leaf) = view.snapshot.neighbors(c).iter().find(|&&w| !view.visited.contains(w)) {
                return Ok(leaf);
            }
        }
        Ok(c)
    }
}

/// Follows the Euler tour of the minimum-weight spanning tree (weights
/// `1 / p_e`, known from the distribution alone), crossing each tour edge the
/// first time it appears.
pub struct MstEulerOnline {
    adjacency: Vec<Vec<usize>>,
    tour: Vec<usize>,
    next: usize,
}

impl MstEulerOnline {
    pub fn new(model: &Model) -> Result<Self> {
        let n = model.n();
        let weighted: Vec<_> =
            model.edge_probabilities().into_iter().map(|(e, p)| (e, ONE as f64 / p as f64)).collect();
        let t_min = min_weight_spanning_tree(n, &weighted)?;
        let adjacency = (0..=n).map(|v| if v == 0 { Vec::new() } else { t_min.neighbors(v).to_vec() }).collect();
        Ok(Self { adjacency, tour: Vec::new(), next: 1 })
    }
}

impl OnlinePolicy for MstEulerOnline {
    fn name(&self) -> &'static str {
        "mst_euler"
    }

    fn decide(&mut self, view: &StepView<'_>, _: &mut ChaCha8Rng) -> Result<usize> {
        if self.tour.is_empty() {
            self.tour = euler_tour(&self.adjacency, view.current);
        }
        match self.tour.get(self.next) {
            Some(&b) if view.snapshot.has_edge(view.current, b) => {
                self.next += 1;
                Ok(b)
            }
            _ => Ok(view.current),
        }
    }
}

/// Ladder explorer: sweeps its own rail, waits at the far end for that end's
/// rung (the rabbit), crosses and sweeps the other rail.
pub struct RabbitChase {
    k: usize,
    route: Vec<usize>,
    next: usize,
    waiting_since: Option<u64>,
    events: Vec<Event>,
}

impl RabbitChase {
    pub fn new(model: &Model) -> Result<Self> {
        let k = ladder_half(model).ok_or(Error::NotLadderModel)?;
        Ok(Self { k, route: Vec::new(), next: 1, waiting_since: None, events: Vec::new() })
    }

    fn plan(&mut self, start: usize) {
        let k = self.k;
        let (offset, i) = if start <= k { (0, start) } else { (k, start - k) };
        let (near, far) = if i - 1 <= k - i { (1, k) } else { (k, 1) };
        let mut route = vec![start];
        let walk = |route: &mut Vec<usize>, from: usize, to: usize, offset: usize| {
            let mut x = from;
            while x != to {
                x = if to > x { x + 1 } else { x - 1 };
                route.push(offset + x);
            }
        };
        walk(&mut route, i, near, offset);
        walk(&mut route, near, far, offset);
        let other = if offset == 0 { k } else { 0 };
        route.push(other + far);
        walk(&mut route, far, near, other);
        self.route = route;
    }
}

impl OnlinePolicy for RabbitChase {
    fn name(&self) -> &'static str {
        "rabbit_chase"
    }

    fn decide(&mut self, view: &StepView<'_>, _: &mut ChaCha8Rng) -> Result<usize> {
        if self.route.is_empty() {
            self.plan(view.current);
        }
        let Some(&b) = self.route.get(self.next) else {
            return Ok(view.current);
        };
        let rung = b.abs_diff(view.current) == self.k;
        if !view.snapshot.has_edge(view.current, b) {
            if rung && self.waiting_since.is_none() {
                self.waiting_since = Some(view.t);
            }
            return Ok(view.current);
        }
        if rung {
            let since = self.waiting_since.take().unwrap_or(view.t);
            self.events.push(Event { time: view.t, kind: "catch".to_string(), vertex: b, wait: Some(view.t - since + 1) });
        }
        self.next += 1;
        Ok(b)
    }

    fn take_events(&mut self) -> Vec<Event> {
        std::mem::take(&mut self.events)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::uniform_model;
    use crate::models::{ladder_model, star_catalog};
    use crate::tree::path;
    use crate::walk::validate_walk;
    use crate::window::TemporalWindow;

    #[test]
    fn all_policies_are_legal() {
        let stars = star_catalog(12, 4).unwrap();
        let ladder = ladder_model(12).unwrap();
        for name in POLICY_NAMES {
            let model = if name == "rabbit_chase" { &ladder } else { &stars };
            for seed in 0..5 {
                let mut policy = policy_by_name(name, model).unwrap();
                let run = run_online(model, seed, policy.as_mut(), 5, 2000).unwrap();
                let w = TemporalWindow::materialize(model, seed, 1, run.walk.current_time()).unwrap();
                let r = validate_walk(&w, &run.walk, &VertexSet::full(12));
                assert!(r.valid, "{name}");
                assert_eq!(r.arrival, run.dexp, "{name}");
            }
        }
    }

    #[test]
    fn stand_still_runs_out() {
        let model = star_catalog(5, 2).unwrap();
        let run = run_online(&model, 1, &mut StandStill, 1, 50).unwrap();
        assert_eq!(run.dexp, None);
        assert_eq!(run.walk.current_time(), 50);
    }

    #[test]
    fn mst_euler_on_static_path() {
        let model = uniform_model(5, vec![path(5).unwrap()]).unwrap();
        let mut p = MstEulerOnline::new(&model).unwrap();
        assert_eq!(run_online(&model, 0, &mut p, 3, 100).unwrap().dexp, Some(6));
    }

    #[test]
    fn rabbit_catches_once() {
        let model = ladder_model(20).unwrap();
        let mut p = RabbitChase::new(&model).unwrap();
        let run = run_online(&model, 4, &mut p, 3, 100_000).unwrap();
        assert!(run.dexp.is_some());
        assert_eq!(run.events.len(), 1);
        assert!(run.events[0].wait.unwrap() >= 1);
        assert!(matches!(RabbitChase::new(&star_catalog(6, 2).unwrap()), Err(Error::NotLadderModel)));
    }
}
