use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;

use super::{euler_tour, Cursor, Leg, LegKind, Schedule};
use crate::error::{Error, Result};
use crate::model::{Model, ONE};
use crate::tree::{canonical_edge, Edge, Tree};

/// Kruskal over `(weight, u, v)` keys. Fails if the edges do not connect `[n]`.
pub fn min_weight_spanning_tree(n: usize, edges: &[(Edge, f64)]) -> Result<Tree> {
    let mut sorted: Vec<(f64, Edge)> = edges.iter().map(|&(e, w)| (w, canonical_edge(e.0, e.1))).collect();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut dsu = Dsu::new(n);
    let mut chosen = Vec::with_capacity(n.saturating_sub(1));
    for (_, (u, v)) in sorted {
        if dsu.union(u, v) {
            chosen.push((u, v));
        }
    }
    if chosen.len() + 1 != n {
        return Err(Error::Disconnected);
    }
    Tree::new(n, &chosen)
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Self { parent: (0..=n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetaEdge {
    /// Smallest-id vertex of the fast component already attached.
    pub u: usize,
    /// Smallest-id vertex of the newly attached fast component.
    pub v: usize,
    pub from_component: usize,
    pub to_component: usize,
    /// Probability that a snapshot has an edge between the two components.
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BackbonePlan {
    pub n: usize,
    /// Edges of the union of all catalog trees.
    pub m: usize,
    /// Fixed-point edge probabilities.
    #[serde(skip)]
    pub p: BTreeMap<Edge, u64>,
    pub t_min: Vec<Edge>,
    pub t_min_weight: f64,
    pub alpha: f64,
    pub beta: f64,
    pub backbone: Vec<Edge>,
    /// Components of the backbone forest, ordered by smallest member.
    pub forest_components: Vec<Vec<usize>>,
    pub fast_edges: Vec<Edge>,
    /// Fast components, ordered by smallest member.
    pub fast_components: Vec<Vec<usize>>,
    #[serde(skip)]
    pub fast_of: Vec<usize>,
    pub meta_edges: Vec<MetaEdge>,
    pub h: Vec<Edge>,
    pub tour: Vec<usize>,
}

/// `m^{1/k}` snapped to the nearest integer when within rounding error.
fn root_of(m: usize, k: i32) -> f64 {
    let x = (m as f64).powf(1.0 / k as f64);
    let r = x.round();
    if (r.powi(k) - m as f64).abs() < 0.5 {
        r
    } else {
        x
    }
}

fn within(w: f64, bound: f64) -> bool {
    w <= bound * (1.0 + 1e-12)
}

pub fn build_backbone_plan(model: &Model) -> Result<BackbonePlan> {
    let n = model.n();
    let p = model.edge_probabilities();
    let m = p.len();
    let weight = |e: &Edge| ONE as f64 / p[e] as f64;
    let weighted: Vec<(Edge, f64)> = p.keys().map(|e| (*e, weight(e))).collect();
    let t_min = min_weight_spanning_tree(n, &weighted)?;
    let t_min_edges = t_min.edges().to_vec();
    let t_min_weight = t_min_edges.iter().map(weight).sum();
    let alpha = root_of(m, 6);
    let beta = root_of(m, 4);
    let mf = m as f64;

    let backbone: Vec<Edge> = t_min_edges.iter().copied().filter(|e| within(weight(e), 4.0 * mf / alpha)).collect();
    let forest_of = components(n, &backbone);
    let forest_components = groups(&forest_of);

    let mut fast_edges: BTreeSet<Edge> =
        t_min_edges.iter().copied().filter(|e| within(weight(e), 4.0 * mf / (alpha * alpha))).collect();
    let limit = mf / beta;
    loop {
        let edges: Vec<Edge> = fast_edges.iter().copied().collect();
        let comp = components(n, &edges);
        let adj = weighted_adjacency(n, &edges, &weight);
        let mut split = None;
        for members in groups(&comp).into_iter().filter(|c| c.len() > 1) {
            let (far, _) = farthest(&adj, members[0]);
            let (other, dist) = farthest(&adj, far);
            if !within(dist, limit) {
                split = Some(even_split(&adj, far, other, &weight));
                break;
            }
        }
        match split {
            Some(e) => {
                fast_edges.remove(&e);
            }
            None => break,
        }
    }
    let fast_edges: Vec<Edge> = fast_edges.into_iter().collect();
    let fast_of = components(n, &fast_edges);
    let fast_components = groups(&fast_of);

    let meta_edges = greedy_meta_edges(model, &forest_of, &fast_of, &fast_components);
    let mut h: Vec<Edge> = backbone.iter().copied().chain(meta_edges.iter().map(|e| canonical_edge(e.u, e.v))).collect();
    h.sort_unstable();
    let h_tree = Tree::new(n, &h)?;
    let adjacency: Vec<Vec<usize>> = (0..=n).map(|v| if v == 0 { Vec::new() } else { h_tree.neighbors(v).to_vec() }).collect();
    let tour = euler_tour(&adjacency, 1);

    Ok(BackbonePlan {
        n,
        m,
        p,
        t_min: t_min_edges,
        t_min_weight,
        alpha,
        beta,
        backbone,
        forest_components,
        fast_edges,
        fast_components,
        fast_of,
        meta_edges,
        h,
        tour,
    })
}

/// Component label per vertex (index 0 unused), labels ordered by smallest member.
fn components(n: usize, edges: &[Edge]) -> Vec<usize> {
    let mut dsu = Dsu::new(n);
    for &(u, v) in edges {
        dsu.union(u, v);
    }
    let mut label = vec![usize::MAX; n + 1];
    let mut next = 0;
    let mut root_label = BTreeMap::new();
    for (v, slot) in label.iter_mut().enumerate().skip(1) {
        let r = dsu.find(v);
        *slot = *root_label.entry(r).or_insert_with(|| {
            next += 1;
            next - 1
        });
    }
    label
}

fn groups(label: &[usize]) -> Vec<Vec<usize>> {
    let count = label[1..].iter().max().map_or(0, |&c| c + 1);
    let mut out = vec![Vec::new(); count];
    for (v, &c) in label.iter().enumerate().skip(1) {
        out[c].push(v);
    }
    out
}

fn weighted_adjacency(n: usize, edges: &[Edge], weight: &impl Fn(&Edge) -> f64) -> Vec<Vec<(usize, f64)>> {
    let mut adj = vec![Vec::new(); n + 1];
    for e in edges {
        adj[e.0].push((e.1, weight(e)));
        adj[e.1].push((e.0, weight(e)));
    }
    for list in &mut adj {
        list.sort_by_key(|&(v, _)| v);
    }
    adj
}

/// Farthest vertex from `root` within its tree (ties: smallest id) and its distance.
fn farthest(adj: &[Vec<(usize, f64)>], root: usize) -> (usize, f64) {
    let dist = distances(adj, root);
    let mut best = (root, 0.0);
    for (v, d) in dist {
        if d > best.1 || (d == best.1 && v < best.0) {
            best = (v, d);
        }
    }
    best
}

fn distances(adj: &[Vec<(usize, f64)>], root: usize) -> BTreeMap<usize, f64> {
    let mut dist = BTreeMap::from([(root, 0.0)]);
    let mut queue = VecDeque::from([root]);
    while let Some(x) = queue.pop_front() {
        let dx = dist[&x];
        for &(y, w) in &adj[x] {
            if let std::collections::btree_map::Entry::Vacant(e) = dist.entry(y) {
                e.insert(dx + w);
                queue.push_back(y);
            }
        }
    }
    dist
}

/// Edge of the `a`–`b` tree path whose removal leaves the two halves closest in weight.
fn even_split(adj: &[Vec<(usize, f64)>], a: usize, b: usize, weight: &impl Fn(&Edge) -> f64) -> Edge {
    let mut parent = BTreeMap::from([(a, a)]);
    let mut queue = VecDeque::from([a]);
    while let Some(x) = queue.pop_front() {
        for &(y, _) in &adj[x] {
            if let std::collections::btree_map::Entry::Vacant(e) = parent.entry(y) {
                e.insert(x);
                queue.push_back(y);
            }
        }
    }
    let mut path = vec![b];
    while *path.last().unwrap() != a {
        path.push(parent[path.last().unwrap()]);
    }
    path.reverse();
    let edges: Vec<Edge> = path.windows(2).map(|w| canonical_edge(w[0], w[1])).collect();
    let total: f64 = edges.iter().map(weight).sum();
    let mut prefix = 0.0;
    let mut best: Option<(f64, Edge)> = None;
    for e in edges {
        let w = weight(&e);
        let imbalance = (prefix - (total - prefix - w)).abs();
        prefix += w;
        let better = match best {
            None => true,
            Some((b, be)) => imbalance < b - 1e-9 * total.max(1.0) || ((imbalance - b).abs() <= 1e-9 * total.max(1.0) && e < be),
        };
        if better {
            best = Some((imbalance, e));
        }
    }
    best.expect("diameter path has an edge").1
}

fn greedy_meta_edges(
    model: &Model,
    forest_of: &[usize],
    fast_of: &[usize],
    fast_components: &[Vec<usize>],
) -> Vec<MetaEdge> {
    let n = model.n();
    let forests = forest_of[1..].iter().max().map_or(0, |&c| c + 1);
    let mut attached = vec![false; forests];
    attached[forest_of[1]] = true;
    let mut out = Vec::new();
    while attached.iter().any(|a| !a) {
        let inside = |v: usize| attached[forest_of[v]];
        let mut mass: BTreeMap<(usize, usize), u64> = BTreeMap::new();
        for (tree, &w) in model.trees().iter().zip(model.weights()) {
            let mut pairs = BTreeSet::new();
            for &(u, v) in tree.edges() {
                let (a, b) = match (inside(u), inside(v)) {
                    (true, false) => (u, v),
                    (false, true) => (v, u),
                    _ => continue,
                };
                pairs.insert((fast_of[a], fast_of[b]));
            }
            for pair in pairs {
                *mass.entry(pair).or_insert(0) += w;
            }
        }
        // every snapshot spans, so some pair crosses with positive mass
        let (&(qa, qb), &w) = mass
            .iter()
            .max_by(|x, y| x.1.cmp(y.1).then_with(|| rep(fast_components, *y.0).cmp(&rep(fast_components, *x.0))))
            .expect("a spanning snapshot crosses every cut");
        let (u, v) = (fast_components[qa][0], fast_components[qb][0]);
        out.push(MetaEdge { u, v, from_component: qa, to_component: qb, probability: w as f64 / ONE as f64 });
        attached[forest_of[v]] = true;
        debug_assert!(n >= 2);
    }
    out
}

fn rep(fast_components: &[Vec<usize>], (a, b): (usize, usize)) -> (usize, usize) {
    (fast_components[a][0], fast_components[b][0])
}

impl BackbonePlan {
    pub fn weight(&self, e: &Edge) -> f64 {
        ONE as f64 / self.p[e] as f64
    }

    /// Weighted diameter of a fast component.
    pub fn fast_diameter(&self, component: usize) -> f64 {
        let adj = weighted_adjacency(self.n, &self.fast_edges, &|e| self.weight(e));
        let (far, _) = farthest(&adj, self.fast_components[component][0]);
        farthest(&adj, far).1
    }

    /// Structural invariants that fail on this plan, as readable messages.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mf = self.m as f64;
        if !within(self.t_min_weight, 4.0 * mf) {
            out.push(format!("w(T_min) = {} exceeds 4m = {}", self.t_min_weight, 4.0 * mf));
        }
        let excess = self.t_min.len() - self.backbone.len();
        if excess as f64 > self.alpha {
            out.push(format!("{excess} non-backbone edges exceed alpha = {}", self.alpha));
        }
        let bound = self.alpha * self.alpha + 1.0 + 12.0 * self.beta;
        if self.fast_components.len() as f64 > bound {
            out.push(format!("{} fast components exceed {bound}", self.fast_components.len()));
        }
        for c in (0..self.fast_components.len()).filter(|&c| self.fast_components[c].len() > 1) {
            let d = self.fast_diameter(c);
            if !within(d, mf / self.beta) {
                out.push(format!("fast component {c} has diameter {d} > m/beta"));
            }
        }
        let light = 4.0 * mf / (self.alpha * self.alpha);
        if let Some(e) = self.fast_edges.iter().find(|e| !within(self.weight(e), light)) {
            out.push(format!("fast edge {e:?} heavier than 4m/alpha^2"));
        }
        if Tree::new(self.n, &self.h).is_err() {
            out.push("H is not a spanning tree".to_string());
        }
        if self.tour.first() != Some(&1) || self.tour.last() != Some(&1) || self.tour.len() != 2 * self.n - 1 {
            out.push("Euler tour is malformed".to_string());
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("plan serializes")
    }

    fn is_meta(&self, a: usize, b: usize) -> bool {
        self.meta_edges.iter().any(|e| canonical_edge(e.u, e.v) == canonical_edge(a, b))
    }
}

/// Tree paths inside one fast component, rooted at `root`.
fn component_parents(plan: &BackbonePlan, root: usize) -> BTreeMap<usize, usize> {
    let c = plan.fast_of[root];
    let mut parent = BTreeMap::from([(root, root)]);
    let mut queue = VecDeque::from([root]);
    let adj = weighted_adjacency(plan.n, &plan.fast_edges, &|_| 1.0);
    while let Some(x) = queue.pop_front() {
        for &(y, _) in &adj[x] {
            if plan.fast_of[y] == c && !parent.contains_key(&y) {
                parent.insert(y, x);
                queue.push_back(y);
            }
        }
    }
    parent
}

/// Follows the Euler tour of the plan's tree `H` from vertex 1: backbone
/// edges by waiting for them, meta-edges by the earliest crossing found in a
/// scan of future snapshots.
pub fn linear_schedule(model: &Model, seed: u64, plan: &BackbonePlan, start: usize, max_time: u64) -> Result<Schedule> {
    if plan.n != model.n() {
        return Err(Error::BadParams(format!("plan on {} vertices, model on {}", plan.n, model.n())));
    }
    let mut cur = Cursor::new(model, seed, start, max_time)?;
    if start != 1 {
        let t = cur.now();
        cur.foremost_to(1)?;
        cur.leg(LegKind::Approach, start, t);
    }
    let mf = plan.m as f64;
    let initial = (6.0 * mf / plan.alpha).ceil().max(1.0) as u64;
    let block = (mf / plan.alpha).ceil().max(1.0) as u64;
    for pair in plan.tour.windows(2) {
        if cur.done() {
            break;
        }
        let (a, b) = (pair[0], pair[1]);
        let t = cur.now();
        if plan.is_meta(a, b) {
            let extensions = fast_crossing(&mut cur, plan, b, initial, block)?;
            cur.legs.push(Leg {
                kind: LegKind::FastCrossing,
                from: a,
                to: b,
                start_time: t,
                end_time: cur.now(),
                extensions: Some(extensions),
            });
        } else {
            cur.wait_and_cross(b)?;
            cur.leg(LegKind::Backbone, a, t);
        }
    }
    cur.finish()
}

fn fast_crossing(cur: &mut Cursor<'_>, plan: &BackbonePlan, target: usize, initial: u64, block: u64) -> Result<u32> {
    let from = cur.at();
    let t0 = cur.now();
    let (qa, qb) = (plan.fast_of[from], plan.fast_of[target]);
    let parents = component_parents(plan, from);
    let mut end = t0 + initial;
    let mut extensions = 0u32;
    loop {
        let horizon = end.min(cur.max_time);
        cur.ensure(horizon)?;
        // wait-and-cross arrival times inside Q from the current vertex
        let mut arrival = BTreeMap::from([(from, t0)]);
        let mut queue = VecDeque::from([from]);
        let mut order = Vec::new();
        while let Some(x) = queue.pop_front() {
            order.push(x);
            let tx = arrival[&x];
            for (&y, &py) in &parents {
                if py != x || y == x {
                    continue;
                }
                let mut t = tx + 1;
                while t <= horizon && !cur.window.snapshot(t).has_edge(x, y) {
                    t += 1;
                }
                if t <= horizon {
                    arrival.insert(y, t);
                    queue.push_back(y);
                }
            }
        }
        let mut found = None;
        'scan: for t in t0 + 1..=horizon {
            for &(u, v) in cur.window.snapshot(t).edges() {
                for (q, q2) in [(u, v), (v, u)] {
                    if plan.fast_of[q] == qa && plan.fast_of[q2] == qb && arrival.get(&q).is_some_and(|&s| s < t) {
                        found = Some((t, q, q2));
                        break 'scan;
                    }
                }
            }
        }
        if let Some((t, q, q2)) = found {
            let mut path = vec![q];
            while *path.last().unwrap() != from {
                path.push(parents[path.last().unwrap()]);
            }
            path.reverse();
            for &y in &path[1..] {
                cur.wait_until(arrival[&y] - 1);
                cur.push(y);
            }
            cur.wait_until(t - 1);
            cur.push(q2);
            let inner = component_parents(plan, q2);
            let mut route = vec![target];
            while *route.last().unwrap() != q2 {
                route.push(inner[route.last().unwrap()]);
            }
            route.reverse();
            for &y in &route[1..] {
                if cur.done() {
                    break;
                }
                cur.wait_and_cross(y)?;
            }
            return Ok(extensions);
        }
        if horizon >= cur.max_time {
            return Err(Error::HorizonExceeded(cur.max_time));
        }
        end += block;
        extensions += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{ladder_model, star_catalog};
    use crate::set::VertexSet;
    use crate::tree::path;
    use crate::walk::validate_walk;
    use crate::window::TemporalWindow;

    #[test]
    fn thresholds_snap() {
        assert_eq!(root_of(4096, 6), 4.0);
        assert_eq!(root_of(4096, 4), 8.0);
    }

    #[test]
    fn single_tree_plan() {
        let model = crate::model::uniform_model(6, vec![path(6).unwrap()]).unwrap();
        let plan = build_backbone_plan(&model).unwrap();
        assert_eq!(plan.backbone, plan.t_min);
        assert!(plan.meta_edges.is_empty());
        assert_eq!(plan.h, plan.t_min);
        assert!(plan.violations().is_empty());
    }

    #[test]
    fn ladder_plan_and_schedule() {
        let model = ladder_model(40).unwrap();
        let plan = build_backbone_plan(&model).unwrap();
        assert!(plan.violations().is_empty(), "{:?}", plan.violations());
        for seed in 0..5 {
            let s = linear_schedule(&model, seed, &plan, 7, 1_000_000).unwrap();
            let w = TemporalWindow::materialize(&model, seed, 1, s.arrival).unwrap();
            let r = validate_walk(&w, &s.walk, &VertexSet::full(40));
            assert!(r.valid);
            assert_eq!(r.arrival, Some(s.arrival));
        }
    }

    #[test]
    fn star_plan_schedules() {
        let model = star_catalog(12, 4).unwrap();
        let plan = build_backbone_plan(&model).unwrap();
        assert!(plan.violations().is_empty(), "{:?}", plan.violations());
        let s = linear_schedule(&model, 3, &plan, 9, 10_000_000).unwrap();
        let w = TemporalWindow::materialize(&model, 3, 1, s.arrival).unwrap();
        assert!(validate_walk(&w, &s.walk, &VertexSet::full(12)).valid);
    }

    #[test]
    fn kruskal_tie_break() {
        let t = min_weight_spanning_tree(3, &[((1, 2), 1.0), ((2, 3), 1.0), ((1, 3), 1.0)]).unwrap();
        assert_eq!(t.edges(), &[(1, 2), (1, 3)]);
        assert!(min_weight_spanning_tree(3, &[((1, 2), 1.0)]).is_err());
    }
}
