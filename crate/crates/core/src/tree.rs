//! Spanning trees on `[n]`.

use std::collections::HashSet;

use crate::error::{Error, Result};

/// An unordered edge, stored with the smaller endpoint first.
pub type Edge = (usize, usize);

pub fn canonical_edge(u: usize, v: usize) -> Edge {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

/// A spanning tree on the vertex set `[n]` with ascending adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Tree {
    n: usize,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<usize>>,
}

impl Tree {
    /// Checks that `edges` form a spanning tree on `[n]` and returns it in canonical form.
    pub fn new(n: usize, edges: &[Edge]) -> Result<Self> {
        validate_tree(n, edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Canonical edges, sorted lexicographically.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        (1..=self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        if u == 0 || v == 0 || u > self.n || v > self.n {
            return false;
        }
        let (a, b) = if self.degree(u) <= self.degree(v) { (u, v) } else { (v, u) };
        self.adjacency[a].binary_search(&b).is_ok()
    }

    /// The centre of a star: the unique vertex of degree above one. For `n = 2`
    /// the smaller id is taken as the centre; a single vertex is its own centre.
    pub fn star_centre(&self) -> Option<usize> {
        match self.n {
            1 => Some(1),
            2 => Some(1),
            _ => {
                let mut centre = None;
                for v in 1..=self.n {
                    if self.degree(v) > 1 {
                        if centre.is_some() {
                            return None;
                        }
                        centre = Some(v);
                    }
                }
                centre
            }
        }
    }

    /// Vertices on the unique path from `from` to `to`, both included.
    pub fn path(&self, from: usize, to: usize) -> Vec<usize> {
        let mut parent = vec![0usize; self.n + 1];
        let mut seen = vec![false; self.n + 1];
        let mut stack = vec![from];
        seen[from] = true;
        while let Some(x) = stack.pop() {
            if x == to {
                break;
            }
            for &y in &self.adjacency[x] {
                if !seen[y] {
                    seen[y] = true;
                    parent[y] = x;
                    stack.push(y);
                }
            }
        }
        let mut path = vec![to];
        let mut x = to;
        while x != from {
            x = parent[x];
            path.push(x);
        }
        path.reverse();
        path
    }
}

/// Validates an edge list as a spanning tree on `[n]`.
pub fn validate_tree(n: usize, edges: &[Edge]) -> Result<Tree> {
    if n == 0 {
        return Err(Error::NotSpanning { n, reason: "empty vertex set".into() });
    }
    let mut seen = HashSet::with_capacity(edges.len());
    let mut canonical = Vec::with_capacity(edges.len());
    for &(u, v) in edges {
        for x in [u, v] {
            if x == 0 || x > n {
                return Err(Error::VertexOutOfRange { vertex: x, n });
            }
        }
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        let e = canonical_edge(u, v);
        if !seen.insert(e) {
            return Err(Error::DuplicateEdge(e.0, e.1));
        }
        canonical.push(e);
    }
    if canonical.len() != n - 1 {
        return Err(Error::NotSpanning {
            n,
            reason: format!("{} edges, expected {}", canonical.len(), n - 1),
        });
    }
    canonical.sort_unstable();
    let mut adjacency = vec![Vec::new(); n + 1];
    for &(u, v) in &canonical {
        adjacency[u].push(v);
        adjacency[v].push(u);
    }
    for list in &mut adjacency {
        list.sort_unstable();
    }
    let mut seen = vec![false; n + 1];
    let mut stack = vec![1];
    seen[1] = true;
    let mut count = 1;
    while let Some(x) = stack.pop() {
        for &y in &adjacency[x] {
            if !seen[y] {
                seen[y] = true;
                count += 1;
                stack.push(y);
            }
        }
    }
    if count != n {
        return Err(Error::NotSpanning { n, reason: "disconnected".into() });
    }
    Ok(Tree { n, edges: canonical, adjacency })
}

/// Star on `[n]` centred at `centre`.
pub fn star(n: usize, centre: usize) -> Result<Tree> {
    let edges: Vec<Edge> = (1..=n).filter(|&v| v != centre).map(|v| (centre, v)).collect();
    validate_tree(n, &edges)
}

/// Path `1 - 2 - ... - n`.
pub fn path(n: usize) -> Result<Tree> {
    let edges: Vec<Edge> = (1..n).map(|v| (v, v + 1)).collect();
    validate_tree(n, &edges)
}
