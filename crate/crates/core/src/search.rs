//! Temporal depth-first search and the quantities built on it: the next-vertex
//! distribution, good vertices, discovery balls, closeness estimates and the
//! two-window coupling experiment.

use rand::RngCore;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{Model, ONE};
use crate::reach::streaming_arrival;
use crate::rng::{aux_rng, trial_seed};
use crate::set::VertexSet;
use crate::tree::Tree;
use crate::window::TemporalWindow;

/// A static first-search order: the sequence in which a search rooted at
/// `root` meets the vertices of a tree.
pub trait FirstSearchOrder: Sync {
    fn order(&self, tree: &Tree, root: usize) -> Vec<usize>;

    /// First vertex of `order(tree, root)` outside `visited`.
    fn first_outside(&self, tree: &Tree, root: usize, visited: &VertexSet) -> Option<usize> {
        self.order(tree, root).into_iter().find(|&u| !visited.contains(u))
    }
}

/// Depth-first preorder exploring neighbors by ascending id.
#[derive(Debug, Clone, Copy, Default)]
pub struct AscendingDfs;

impl AscendingDfs {
    fn walk(tree: &Tree, root: usize, mut visit: impl FnMut(usize) -> bool) {
        let n = tree.n();
        let mut seen = vec![false; n + 1];
        // (vertex, index of the next neighbor to try)
        let mut stack = vec![(root, 0usize)];
        seen[root] = true;
        if !visit(root) {
            return;
        }
        while let Some(top) = stack.last_mut() {
            let (x, i) = *top;
            let nbrs = tree.neighbors(x);
            if i == nbrs.len() {
                stack.pop();
                continue;
            }
            top.1 += 1;
            let y = nbrs[i];
            if !seen[y] {
                seen[y] = true;
                if !visit(y) {
                    return;
                }
                stack.push((y, 0));
            }
        }
    }
}

impl FirstSearchOrder for AscendingDfs {
    fn order(&self, tree: &Tree, root: usize) -> Vec<usize> {
        let mut order = Vec::with_capacity(tree.n());
        Self::walk(tree, root, |v| {
            order.push(v);
            true
        });
        order
    }

    fn first_outside(&self, tree: &Tree, root: usize, visited: &VertexSet) -> Option<usize> {
        let mut found = None;
        Self::walk(tree, root, |v| {
            if visited.contains(v) {
                true
            } else {
                found = Some(v);
                false
            }
        });
        found
    }
}

/// The depth-first order of a tree from a root, with each vertex's 1-based position.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DfsOrder {
    pub root: usize,
    pub order: Vec<usize>,
    /// `position[v]` is the 1-based rank of `v`; entry 0 unused.
    pub position: Vec<usize>,
}

pub fn dfs_order(tree: &Tree, v: usize) -> DfsOrder {
    let order = AscendingDfs.order(tree, v);
    let mut position = vec![0; tree.n() + 1];
    for (i, &u) in order.iter().enumerate() {
        position[u] = i + 1;
    }
    DfsOrder { root: v, order, position }
}

/// The vertex temporal DFS discovers from `v` given the visited set `visited`
/// and the current snapshot `tree`; `None` once everything is visited.
pub fn next_vertex(v: usize, visited: &VertexSet, tree: &Tree) -> Result<Option<usize>> {
    next_vertex_with(&AscendingDfs, v, visited, tree)
}

pub fn next_vertex_with(
    order: &dyn FirstSearchOrder,
    v: usize,
    visited: &VertexSet,
    tree: &Tree,
) -> Result<Option<usize>> {
    if !visited.contains(v) {
        return Err(Error::SourceNotInContext(v));
    }
    if visited.is_full() {
        return Ok(None);
    }
    Ok(order.first_outside(tree, v, visited))
}

/// Vertices discovered by temporal DFS, with the step at which each was found.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiscoverySet {
    pub source: usize,
    pub visited: VertexSet,
    pub log: Vec<(u64, usize)>,
}

impl DiscoverySet {
    pub fn new(n: usize, source: usize) -> Self {
        Self { source, visited: VertexSet::from_vertices(n, [source]), log: Vec::new() }
    }

    /// Processes one snapshot at time `t`.
    pub fn advance(&mut self, tree: &Tree, t: u64) {
        if let Some(u) = AscendingDfs.first_outside(tree, self.source, &self.visited) {
            self.visited.insert(u);
            self.log.push((t, u));
        }
    }
}

/// Runs temporal DFS from `v` over the first `t` snapshots of `window`.
pub fn temporal_dfs(window: &TemporalWindow<'_>, v: usize, t: usize) -> Result<DiscoverySet> {
    let n = window.n();
    if v == 0 || v > n {
        return Err(Error::VertexOutOfRange { vertex: v, n });
    }
    if t > window.len() {
        return Err(Error::WindowTooShort { need: window.t0() + t as u64 - 1, have: window.t1() });
    }
    let mut d = DiscoverySet::new(n, v);
    for step in 0..t as u64 {
        let time = window.t0() + step;
        d.advance(window.snapshot(time), time);
    }
    Ok(d)
}

/// The exact law of the next vertex discovered from `v` with visited set `D`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NextVertexDistribution {
    pub source: usize,
    pub context: Vec<usize>,
    /// Fixed-point mass per vertex; entry 0 unused. Sums to `2^32`.
    pub mass: Vec<u64>,
}

impl NextVertexDistribution {
    pub fn probability(&self, u: usize) -> f64 {
        self.mass[u] as f64 / ONE as f64
    }

    /// Whether `u` carries mass at least `1 / (2n)`.
    pub fn is_good(&self, u: usize) -> bool {
        let n = (self.mass.len() - 1) as u128;
        self.mass[u] as u128 * 2 * n >= ONE as u128
    }

    pub fn good(&self) -> VertexSet {
        let n = self.mass.len() - 1;
        VertexSet::from_vertices(n, (1..=n).filter(|&u| self.is_good(u)))
    }

    /// Total fixed-point mass of the good vertices.
    pub fn good_mass(&self) -> u64 {
        (1..self.mass.len()).filter(|&u| self.is_good(u)).map(|u| self.mass[u]).sum()
    }
}

pub fn nu_exact(model: &Model, v: usize, visited: &VertexSet) -> Result<NextVertexDistribution> {
    if !visited.contains(v) {
        return Err(Error::SourceNotInContext(v));
    }
    if visited.is_full() {
        return Err(Error::ContextFull);
    }
    let mut mass = vec![0u64; model.n() + 1];
    for (tree, &w) in model.trees().iter().zip(model.weights()) {
        let u = AscendingDfs
            .first_outside(tree, v, visited)
            .expect("an unvisited vertex exists");
        mass[u] += w;
    }
    Ok(NextVertexDistribution { source: v, context: visited.to_vec(), mass })
}

/// Vertices `u` with `nu(u) >= 1 / (2n)`.
pub fn good_vertices(model: &Model, v: usize, visited: &VertexSet) -> Result<VertexSet> {
    Ok(nu_exact(model, v, visited)?.good())
}

fn round6(x: f64) -> f64 {
    (x * 1e6).round() / 1e6
}

fn meets(count: u64, trials: u64, p: f64) -> bool {
    count as f64 >= p * trials as f64 - 1e-9
}

/// Empirical temporal DFS `(t, p)`-ball of a vertex.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Ball {
    pub centre: usize,
    pub t: usize,
    pub p: f64,
    pub trials: u64,
    pub seed: u64,
    /// Discovery counts per vertex; entry 0 unused.
    pub counts: Vec<u64>,
    pub members: Vec<usize>,
}

impl Ball {
    pub fn frequency(&self, u: usize) -> f64 {
        self.counts[u] as f64 / self.trials as f64
    }

    pub fn to_json(&self) -> serde_json::Value {
        let freqs: Vec<serde_json::Value> = (1..self.counts.len())
            .filter(|&u| self.counts[u] > 0)
            .map(|u| serde_json::json!([u, round6(self.frequency(u))]))
            .collect();
        serde_json::json!({
            "centre": self.centre, "t": self.t, "p": self.p, "trials": self.trials,
            "seed": self.seed, "members": self.members, "frequencies": freqs,
        })
    }
}

pub fn estimate_ball(model: &Model, v: usize, t: usize, p: f64, trials: u64, seed: u64) -> Result<Ball> {
    let n = model.n();
    if v == 0 || v > n {
        return Err(Error::VertexOutOfRange { vertex: v, n });
    }
    if trials == 0 {
        return Err(Error::BadParams("trials must be positive".into()));
    }
    let per_trial: Vec<VertexSet> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let s = trial_seed(seed, i);
            let mut d = DiscoverySet::new(n, v);
            for (step, idx) in model.snapshots_from(s, 1).take(t.min(n - 1)).enumerate() {
                d.advance(model.tree(idx), step as u64 + 1);
            }
            d.visited
        })
        .collect();
    let mut counts = vec![0u64; n + 1];
    for set in &per_trial {
        for u in set.iter() {
            counts[u] += 1;
        }
    }
    let members = (1..=n).filter(|&u| meets(counts[u], trials, p)).collect();
    Ok(Ball { centre: v, t, p, trials, seed, counts, members })
}

/// Empirical `(t, p)`-closeness between vertices.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClosenessGraph {
    pub n: usize,
    pub t: u64,
    pub p: f64,
    pub trials: u64,
    pub seed: u64,
    pub sources: Vec<usize>,
    /// `counts[u]` holds reach counts from source `u` when `u` was measured.
    counts: Vec<Option<Vec<u64>>>,
}

impl ClosenessGraph {
    /// A closeness graph with every pair declared close (used when closeness is known a priori).
    pub fn complete(n: usize, t: u64) -> Self {
        let counts = (0..=n).map(|u| if u == 0 { None } else { Some(vec![1; n + 1]) }).collect();
        Self { n, t, p: 1.0, trials: 1, seed: 0, sources: (1..=n).collect(), counts }
    }

    /// A closeness graph with no pair declared close.
    pub fn edgeless(n: usize) -> Self {
        let counts = (0..=n)
            .map(|u| {
                if u == 0 {
                    None
                } else {
                    let mut c = vec![0; n + 1];
                    c[u] = 1;
                    Some(c)
                }
            })
            .collect();
        Self { n, t: 0, p: 1.0, trials: 1, seed: 0, sources: (1..=n).collect(), counts }
    }

    /// A closeness graph declaring exactly the listed pairs close.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Self {
        let mut g = Self::edgeless(n);
        for &(u, w) in pairs {
            g.counts[u].as_mut().expect("measured")[w] = 1;
        }
        g
    }

    fn directed(&self, u: usize, w: usize) -> Option<u64> {
        self.counts[u].as_ref().map(|c| c[w])
    }

    /// Symmetrized reach frequency: the larger of the two measured directions.
    pub fn frequency(&self, u: usize, w: usize) -> Option<f64> {
        let best = match (self.directed(u, w), self.directed(w, u)) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        }?;
        Some(best as f64 / self.trials as f64)
    }

    pub fn is_close(&self, u: usize, w: usize) -> bool {
        let a = self.directed(u, w);
        let b = self.directed(w, u);
        match (a, b) {
            (None, None) => false,
            _ => meets(a.unwrap_or(0).max(b.unwrap_or(0)), self.trials, self.p),
        }
    }

    /// Number of vertices other than `u` declared close to `u`.
    pub fn close_count(&self, u: usize) -> usize {
        (1..=self.n).filter(|&w| w != u && self.is_close(u, w)).count()
    }

    pub fn neighbors(&self, u: usize) -> Vec<usize> {
        (1..=self.n).filter(|&w| w != u && self.is_close(u, w)).collect()
    }

    /// Declared-close pairs `(u, w)` with `u < w`.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 1..=self.n {
            for w in u + 1..=self.n {
                if self.is_close(u, w) {
                    out.push((u, w));
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let pairs: Vec<serde_json::Value> = self
            .pairs()
            .into_iter()
            .map(|(u, w)| serde_json::json!([u, w, round6(self.frequency(u, w).unwrap_or(0.0))]))
            .collect();
        serde_json::json!({
            "n": self.n, "t": self.t, "p": self.p, "trials": self.trials, "seed": self.seed,
            "sources": self.sources, "pairs": pairs,
        })
    }
}

/// Estimates closeness from each source by sampling `trials` windows of length `t`.
pub fn estimate_closeness(
    model: &Model,
    t: u64,
    p: f64,
    trials: u64,
    seed: u64,
    sources: &[usize],
) -> Result<ClosenessGraph> {
    let n = model.n();
    if trials == 0 {
        return Err(Error::BadParams("trials must be positive".into()));
    }
    let mut sources = sources.to_vec();
    sources.sort_unstable();
    sources.dedup();
    if let Some(&bad) = sources.iter().find(|&&u| u == 0 || u > n) {
        return Err(Error::VertexOutOfRange { vertex: bad, n });
    }
    let jobs: Vec<(usize, u64)> =
        sources.iter().flat_map(|&u| (0..trials).map(move |i| (u, i))).collect();
    let reached: Vec<Vec<bool>> = jobs
        .par_iter()
        .map(|&(u, i)| {
            streaming_arrival(model, trial_seed(seed, i), u, 1, t)
                .into_iter()
                .map(|a| a.is_some())
                .collect()
        })
        .collect();
    let mut counts: Vec<Option<Vec<u64>>> = vec![None; n + 1];
    for (&(u, _), hit) in jobs.iter().zip(&reached) {
        let c = counts[u].get_or_insert_with(|| vec![0; n + 1]);
        for w in 1..=n {
            c[w] += u64::from(hit[w]);
        }
    }
    Ok(ClosenessGraph { n, t, p, trials, seed, sources, counts })
}

/// Per-trial outcome of the coupled two-window temporal DFS experiment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CouplingTrial {
    pub overlap: usize,
    /// Vertices of `D_G` that are good with respect to `D_H`.
    pub good_g: usize,
    /// Vertices of `D_H` that are good with respect to `D_G`.
    pub good_h: usize,
    pub coupled_to_g: usize,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CouplingReport {
    pub source: usize,
    pub rounds: usize,
    pub trials: Vec<CouplingTrial>,
    pub holding: usize,
    pub fraction: f64,
}

fn good_count(model: &Model, v: usize, context: &VertexSet, candidates: &VertexSet) -> usize {
    match nu_exact(model, v, context) {
        Ok(nu) => candidates.iter().filter(|&u| nu.is_good(u)).count(),
        Err(_) => 0,
    }
}

fn coupling_trial(model: &Model, v: usize, rounds: usize, seed: u64) -> CouplingTrial {
    let n = model.n();
    let mut rng = aux_rng(seed, "coupling");
    let draw = |rng: &mut rand_chacha::ChaCha8Rng| model.locate(rng.next_u64() & (ONE - 1));
    let mut g = DiscoverySet::new(n, v);
    let mut h = DiscoverySet::new(n, v);
    let (mut len_g, mut len_h) = (0u64, 0u64);
    for _ in 0..rounds {
        let tree = model.tree(draw(&mut rng));
        if rng.next_u32() & 1 == 0 {
            len_g += 1;
            g.advance(tree, len_g);
        } else {
            len_h += 1;
            h.advance(tree, len_h);
        }
    }
    let coupled_to_g = len_g as usize;
    while (len_g as usize) < rounds {
        len_g += 1;
        g.advance(model.tree(draw(&mut rng)), len_g);
    }
    while (len_h as usize) < rounds {
        len_h += 1;
        h.advance(model.tree(draw(&mut rng)), len_h);
    }
    let overlap = g.visited.intersection_len(&h.visited);
    let good_g = good_count(model, v, &h.visited, &g.visited);
    let good_h = good_count(model, v, &g.visited, &h.visited);
    let big = |x: usize| 50 * x >= rounds;
    let holds = big(overlap) || (big(good_g) && big(good_h));
    CouplingTrial { overlap, good_g, good_h, coupled_to_g, holds }
}

/// Couples two windows by a fair coin per shared snapshot for `rounds` draws,
/// completes both to `rounds` snapshots independently, and records whether the
/// overlap-or-diffuse dichotomy holds for the temporal DFS sets from `v`.
pub fn coupled_dfs_experiment(
    model: &Model,
    v: usize,
    rounds: usize,
    trials: u64,
    seed: u64,
) -> Result<CouplingReport> {
    let n = model.n();
    if v == 0 || v > n {
        return Err(Error::VertexOutOfRange { vertex: v, n });
    }
    if rounds > n {
        return Err(Error::BadParams(format!("rounds {rounds} exceed n = {n}")));
    }
    let rows: Vec<CouplingTrial> = (0..trials)
        .into_par_iter()
        .map(|i| coupling_trial(model, v, rounds, trial_seed(seed, i)))
        .collect();
    let holding = rows.iter().filter(|r| r.holds).count();
    let fraction = if trials == 0 { 0.0 } else { holding as f64 / trials as f64 };
    Ok(CouplingReport { source: v, rounds, trials: rows, holding, fraction })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_model, uniform_model};
    use crate::tree::{path, star};

    fn two_stars() -> Model {
        uniform_model(3, vec![star(3, 1).unwrap(), star(3, 2).unwrap()]).unwrap()
    }

    #[test]
    fn orders() {
        let single = crate::tree::validate_tree(1, &[]).unwrap();
        assert_eq!(dfs_order(&single, 1).order, vec![1]);
        assert_eq!(dfs_order(&star(5, 1).unwrap(), 1).order, vec![1, 2, 3, 4, 5]);
        let o = dfs_order(&path(3).unwrap(), 2);
        assert_eq!(o.order, vec![2, 1, 3]);
        assert_eq!(o.position[3], 3);
        let t = crate::tree::validate_tree(5, &[(1, 4), (4, 2), (1, 3), (3, 5)]).unwrap();
        assert_eq!(dfs_order(&t, 1).order, vec![1, 3, 5, 4, 2]);
    }

    #[test]
    fn next_vertex_examples() {
        let s = star(4, 1).unwrap();
        assert_eq!(next_vertex(1, &VertexSet::full(4), &s), Ok(None));
        assert_eq!(next_vertex(1, &VertexSet::from_vertices(4, [1]), &s), Ok(Some(2)));
        let p = path(3).unwrap();
        assert_eq!(next_vertex(2, &VertexSet::from_vertices(3, [1, 2]), &p), Ok(Some(3)));
        assert_eq!(next_vertex(2, &VertexSet::from_vertices(3, [1]), &p), Err(Error::SourceNotInContext(2)));
    }

    #[test]
    fn temporal_dfs_example() {
        let m = two_stars();
        let w = TemporalWindow::from_indices(&m, 1, &[0, 0]).unwrap();
        let d = temporal_dfs(&w, 2, 2).unwrap();
        assert_eq!(d.log, vec![(1, 1), (2, 3)]);
        assert!(d.visited.is_full());
        assert_eq!(temporal_dfs(&w, 2, 0).unwrap().visited.to_vec(), vec![2]);
        assert!(temporal_dfs(&w, 2, 3).is_err());
    }

    #[test]
    fn nu_examples() {
        let m = two_stars();
        let nu = nu_exact(&m, 1, &VertexSet::from_vertices(3, [1])).unwrap();
        assert_eq!(nu.probability(2), 1.0);
        assert_eq!(nu.probability(3), 0.0);
        assert_eq!(nu.good().to_vec(), vec![2]);
        assert_eq!(nu.good_mass(), ONE);
        assert_eq!(nu_exact(&m, 1, &VertexSet::full(3)), Err(Error::ContextFull));

        let point = build_model(4, vec![path(4).unwrap()], &[1.0]).unwrap();
        let g = good_vertices(&point, 2, &VertexSet::from_vertices(4, [2, 1])).unwrap();
        assert_eq!(g.to_vec(), vec![3]);
    }

    #[test]
    fn ball_examples() {
        let m = two_stars();
        let b = estimate_ball(&m, 1, 1, 1.0 / 9.0, 1000, 3).unwrap();
        assert_eq!(b.members, vec![1, 2]);
        assert_eq!(b.frequency(2), 1.0);
        assert_eq!(estimate_ball(&m, 1, 0, 0.5, 10, 3).unwrap().members, vec![1]);
        let full = estimate_ball(&m, 3, 5, 1.0, 10, 3).unwrap();
        assert_eq!(full.members, vec![1, 2, 3]);
    }

    #[test]
    fn closeness_on_a_fixed_path() {
        let m = build_model(5, vec![path(5).unwrap()], &[1.0]).unwrap();
        let c = estimate_closeness(&m, 2, 0.5, 5, 1, &[1, 2, 3, 4, 5]).unwrap();
        for u in 1..=5usize {
            for w in 1..=5usize {
                let close = u.abs_diff(w) <= 2;
                assert_eq!(c.frequency(u, w), Some(if close { 1.0 } else { 0.0 }));
                assert_eq!(c.is_close(u, w), close);
            }
        }
        let only = estimate_closeness(&m, 1, 0.5, 5, 1, &[1]).unwrap();
        assert!(only.is_close(2, 1));
        assert_eq!(only.frequency(3, 2), None);
    }

    #[test]
    fn coupling_on_point_mass() {
        let m = build_model(6, vec![path(6).unwrap()], &[1.0]).unwrap();
        let r = coupled_dfs_experiment(&m, 3, 5, 20, 9).unwrap();
        assert_eq!(r.holding, 20);
        assert!(r.trials.iter().all(|t| t.overlap == 6));
        let one = coupled_dfs_experiment(&m, 3, 1, 5, 9).unwrap();
        assert_eq!(one.fraction, 1.0);
    }
}
