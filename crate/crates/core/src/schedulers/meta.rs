use std::collections::VecDeque;

use serde::Serialize;

use super::{euler_tour, Cursor, LegKind, Schedule};
use crate::error::{Error, Result};
use crate::model::Model;
use crate::reach::ehk_hop;
use crate::search::ClosenessGraph;

/// Components of the closeness graph, each with a BFS spanning tree and the
/// Euler tour of that tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MetaGraph {
    pub n: usize,
    /// Components ordered by smallest member; members ascending.
    pub components: Vec<Vec<usize>>,
    /// `component_of[v]` for `v` in `1..=n`.
    pub component_of: Vec<usize>,
    /// Spanning-tree edges per component.
    pub tree_edges: Vec<Vec<(usize, usize)>>,
    /// Closed Euler tour per component, rooted at its smallest member.
    pub tours: Vec<Vec<usize>>,
}

pub fn build_meta_graph(closeness: &ClosenessGraph) -> MetaGraph {
    let n = closeness.n;
    let adjacency: Vec<Vec<usize>> =
        (0..=n).map(|u| if u == 0 { Vec::new() } else { closeness.neighbors(u) }).collect();
    let mut component_of = vec![usize::MAX; n + 1];
    let mut components = Vec::new();
    let mut tree_edges = Vec::new();
    let mut tours = Vec::new();
    for root in 1..=n {
        if component_of[root] != usize::MAX {
            continue;
        }
        let id = components.len();
        let mut members = vec![root];
        let mut edges = Vec::new();
        let mut tree_adj = vec![Vec::new(); n + 1];
        component_of[root] = id;
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            for &y in &adjacency[x] {
                if component_of[y] == usize::MAX {
                    component_of[y] = id;
                    members.push(y);
                    edges.push((x.min(y), x.max(y)));
                    tree_adj[x].push(y);
                    tree_adj[y].push(x);
                    queue.push_back(y);
                }
            }
        }
        for list in &mut tree_adj {
            list.sort_unstable();
        }
        members.sort_unstable();
        edges.sort_unstable();
        tours.push(euler_tour(&tree_adj, root));
        components.push(members);
        tree_edges.push(edges);
    }
    MetaGraph { n, components, component_of, tree_edges, tours }
}

impl MetaGraph {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("meta graph serializes")
    }
}

/// Explores by walking each component's Euler tour, crossing tour edges by
/// foremost walks and moving between components with `n - 1`-step hops. The
/// start's component goes first, then the others by smallest member.
pub fn meta_graph_schedule(
    model: &Model,
    seed: u64,
    meta: &MetaGraph,
    start: usize,
    max_time: u64,
) -> Result<Schedule> {
    if meta.n != model.n() {
        return Err(Error::BadParams(format!("meta graph on {} vertices, model on {}", meta.n, model.n())));
    }
    let mut cur = Cursor::new(model, seed, start, max_time)?;
    let first = meta.component_of[start];
    let order = std::iter::once(first).chain((0..meta.components.len()).filter(|&c| c != first));
    for c in order {
        if cur.done() {
            break;
        }
        let tour = &meta.tours[c];
        let route: Vec<usize> = if c == first {
            // rotate the closed tour so it begins at the start vertex
            let at = tour.iter().position(|&v| v == start).expect("start lies on its tour");
            let body = &tour[..tour.len() - 1];
            let mut r: Vec<usize> = body[at..].iter().chain(&body[..at]).copied().collect();
            r.push(start);
            r
        } else {
            let root = tour[0];
            let (from, t) = (cur.at(), cur.now());
            cur.ensure(t + model.n() as u64 - 1)?;
            let hop = ehk_hop(&cur.window, from, root, t + 1)?;
            cur.follow(&hop);
            cur.leg(LegKind::Hop, from, t);
            tour.clone()
        };
        for &next in &route[1..] {
            if cur.done() {
                break;
            }
            let (from, t) = (cur.at(), cur.now());
            cur.foremost_to(next)?;
            cur.leg(LegKind::MetaEdge, from, t);
        }
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
    fn components_and_tours() {
        let g = ClosenessGraph::from_pairs(5, &[(1, 3), (3, 5), (2, 4)]);
        let meta = build_meta_graph(&g);
        assert_eq!(meta.components, vec![vec![1, 3, 5], vec![2, 4]]);
        assert_eq!(meta.tours[0], vec![1, 3, 5, 3, 1]);
        assert_eq!(meta.tours[1], vec![2, 4, 2]);
    }

    #[test]
    fn schedules_are_valid() {
        let model = star_catalog(8, 3).unwrap();
        for graph in [ClosenessGraph::complete(8, 1), ClosenessGraph::edgeless(8)] {
            let meta = build_meta_graph(&graph);
            for start in [1, 5, 8] {
                let s = meta_graph_schedule(&model, 7, &meta, start, 1_000_000).unwrap();
                let w = TemporalWindow::materialize(&model, 7, 1, s.arrival).unwrap();
                let r = validate_walk(&w, &s.walk, &VertexSet::full(8));
                assert!(r.valid);
                assert_eq!(r.arrival, Some(s.arrival));
            }
        }
    }
}
