//! Named model generators: stars, the ladder, bounded-degree star copies, the
//! apex path, uniform spanning trees of small graphs, and random catalogs.

use rand::Rng;

use crate::error::{Error, Result};
use crate::model::{build_model, uniform_model, Model};
use crate::tree::{canonical_edge, star, validate_tree, Edge, Tree};

/// Uniform model over the stars on `[n]` centred at each of `centres`.
pub fn star_model(n: usize, centres: &[usize]) -> Result<Model> {
    let trees = centres.iter().map(|&c| star(n, c)).collect::<Result<Vec<_>>>()?;
    uniform_model(n, trees)
}

/// The `k` stars on `[n]` centred at `1..=k`, uniformly weighted.
pub fn star_catalog(n: usize, k: usize) -> Result<Model> {
    if k < 2 || k > n {
        return Err(Error::BadParams(format!("star count k = {k} must satisfy 2 <= k <= n = {n}")));
    }
    star_model(n, &(1..=k).collect::<Vec<_>>())
}

/// Stars centred at the first `ceil(n / 3)` vertices.
pub fn third_stars(n: usize) -> Result<Model> {
    star_catalog(n, n.div_ceil(3))
}

/// Stars centred at the first `n / 2` vertices.
pub fn half_stars(n: usize) -> Result<Model> {
    star_catalog(n, n / 2)
}

/// Two paths `1..=k` and `k+1..=2k` joined by a single uniformly chosen rung `{i, k + i}`.
pub fn ladder_model(n: usize) -> Result<Model> {
    if n < 4 || n % 2 != 0 {
        return Err(Error::BadParams(format!("ladder needs an even n >= 4, got {n}")));
    }
    let k = n / 2;
    let mut rails: Vec<Edge> = (1..k).map(|v| (v, v + 1)).collect();
    rails.extend((k + 1..n).map(|v| (v, v + 1)));
    let trees = (1..=k)
        .map(|i| {
            let mut edges = rails.clone();
            edges.push((i, k + i));
            validate_tree(n, &edges)
        })
        .collect::<Result<Vec<_>>>()?;
    uniform_model(n, trees)
}

/// If `model` is a ladder, its half-length `k`.
pub fn ladder_half(model: &Model) -> Option<usize> {
    let n = model.n();
    if n < 4 || n % 2 != 0 || model.len() != n / 2 {
        return None;
    }
    let k = n / 2;
    let ladder = model.trees().iter().enumerate().all(|(i, tree)| {
        let rails = (1..k).all(|v| tree.has_edge(v, v + 1) && tree.has_edge(k + v, k + v + 1));
        rails && tree.has_edge(i + 1, k + i + 1)
    });
    ladder.then_some(k)
}

/// `(d - 1) / 2` trees; tree `i` is `n / (d - 1)` copies of the star on a block
/// of `d - 1` vertices centred at the block's `i`-th vertex, with consecutive
/// copies' centres joined in a path.
pub fn bounded_degree_model(d: usize, n: usize) -> Result<Model> {
    if d < 5 || d % 2 == 0 || n == 0 || n % (d - 1) != 0 {
        return Err(Error::BadParams(format!(
            "bounded-degree model needs odd d >= 5 and n divisible by d - 1 (d = {d}, n = {n})"
        )));
    }
    let block = d - 1;
    let copies = n / block;
    let trees = (1..=block / 2)
        .map(|i| {
            let mut edges = Vec::with_capacity(n - 1);
            for j in 0..copies {
                let base = j * block;
                let centre = base + i;
                edges.extend((base + 1..=base + block).filter(|&v| v != centre).map(|v| (centre, v)));
                if j + 1 < copies {
                    edges.push((centre, centre + block));
                }
            }
            validate_tree(n, &edges)
        })
        .collect::<Result<Vec<_>>>()?;
    uniform_model(n, trees)
}

/// Path `1 - ... - (n-1)` plus one apex edge `{n, j}`, with `j` uniform over `1..n`.
pub fn apex_path_model(n: usize) -> Result<Model> {
    if n < 3 {
        return Err(Error::BadParams(format!("apex path model needs n >= 3, got {n}")));
    }
    let trees = (1..n)
        .map(|j| {
            let mut edges: Vec<Edge> = (1..n - 1).map(|v| (v, v + 1)).collect();
            edges.push((j, n));
            validate_tree(n, &edges)
        })
        .collect::<Result<Vec<_>>>()?;
    uniform_model(n, trees)
}

/// Largest number of spanning trees [`spanning_trees_uniform`] will enumerate.
pub const MAX_SPANNING_TREES: usize = 100_000;

struct Dsu {
    parent: Vec<usize>,
    history: Vec<(usize, usize)>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Self { parent: (0..=n).collect(), history: Vec::new() }
    }

    fn find(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[rb] = ra;
        self.history.push((rb, rb));
        true
    }

    fn undo(&mut self) {
        let (x, old) = self.history.pop().expect("undo without union");
        self.parent[x] = old;
    }
}

fn connected(n: usize, edges: impl Iterator<Item = Edge>) -> bool {
    let mut dsu = Dsu::new(n);
    let mut parts = n;
    for (u, v) in edges {
        if dsu.union(u, v) {
            parts -= 1;
        }
    }
    parts == 1
}

/// All spanning trees of the graph `([n], edges)`, in deterministic order.
pub fn enumerate_spanning_trees(n: usize, edges: &[Edge], cap: usize) -> Result<Vec<Tree>> {
    let mut graph: Vec<Edge> = Vec::with_capacity(edges.len());
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
        if graph.contains(&e) {
            return Err(Error::DuplicateEdge(e.0, e.1));
        }
        graph.push(e);
    }
    graph.sort_unstable();
    if n == 0 || !connected(n, graph.iter().copied()) {
        return Err(Error::Disconnected);
    }

    struct Search<'a> {
        n: usize,
        graph: &'a [Edge],
        dsu: Dsu,
        chosen: Vec<Edge>,
        excluded: Vec<bool>,
        out: Vec<Tree>,
        cap: usize,
    }

    impl Search<'_> {
        fn run(&mut self, i: usize) -> Result<()> {
            if self.chosen.len() == self.n - 1 {
                if self.out.len() == self.cap {
                    return Err(Error::TooManyTrees(self.cap));
                }
                self.out.push(validate_tree(self.n, &self.chosen)?);
                return Ok(());
            }
            if i == self.graph.len() {
                return Ok(());
            }
            let (u, v) = self.graph[i];
            if self.dsu.union(u, v) {
                self.chosen.push((u, v));
                self.run(i + 1)?;
                self.chosen.pop();
                self.dsu.undo();
            }
            self.excluded[i] = true;
            let still = connected(
                self.n,
                self.graph.iter().enumerate().filter(|(j, _)| !self.excluded[*j]).map(|(_, &e)| e),
            );
            if still {
                self.run(i + 1)?;
            }
            self.excluded[i] = false;
            Ok(())
        }
    }

    let mut search = Search {
        n,
        graph: &graph,
        dsu: Dsu::new(n),
        chosen: Vec::new(),
        excluded: vec![false; graph.len()],
        out: Vec::new(),
        cap,
    };
    search.run(0)?;
    Ok(search.out)
}

/// Uniform model over every spanning tree of a small connected graph.
pub fn spanning_trees_uniform(n: usize, edges: &[Edge]) -> Result<Model> {
    let trees = enumerate_spanning_trees(n, edges, MAX_SPANNING_TREES)?;
    uniform_model(n, trees)
}

/// A uniformly random labelled tree on `[n]`, decoded from a random Prüfer sequence.
pub fn random_tree<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Tree {
    if n <= 2 {
        let edges: Vec<Edge> = if n == 2 { vec![(1, 2)] } else { vec![] };
        return validate_tree(n, &edges).expect("trivial tree");
    }
    let code: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(1..=n)).collect();
    let mut degree = vec![1usize; n + 1];
    for &c in &code {
        degree[c] += 1;
    }
    let mut leaves: std::collections::BTreeSet<usize> = (1..=n).filter(|&v| degree[v] == 1).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &c in &code {
        let leaf = *leaves.iter().next().expect("a leaf exists");
        leaves.remove(&leaf);
        edges.push((leaf, c));
        degree[c] -= 1;
        if degree[c] == 1 {
            leaves.insert(c);
        }
    }
    let rest: Vec<usize> = leaves.into_iter().collect();
    edges.push((rest[0], rest[1]));
    validate_tree(n, &edges).expect("Prüfer decoding yields a tree")
}

/// A catalog of up to `count` distinct random trees with random integer masses in `1..=10`.
pub fn random_catalog<R: Rng + ?Sized>(n: usize, count: usize, rng: &mut R) -> Model {
    let mut trees: Vec<Tree> = Vec::new();
    let mut attempts = 0;
    while trees.len() < count.max(1) && attempts < 20 * count.max(1) {
        attempts += 1;
        let t = random_tree(n, rng);
        if !trees.contains(&t) {
            trees.push(t);
        }
    }
    let masses: Vec<f64> = trees.iter().map(|_| rng.gen_range(1..=10) as f64).collect();
    build_model(n, trees, &masses).expect("distinct trees with positive masses")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ONE;
    use rand::SeedableRng;

    #[test]
    fn star_catalogs() {
        let m = star_catalog(3, 2).unwrap();
        assert_eq!(m.len(), 2);
        assert_eq!(m.tree(1).star_centre(), Some(2));
        assert_eq!(star_catalog(5, 5).unwrap().len(), 5);
        assert!(star_catalog(5, 1).is_err());
        assert!(star_catalog(5, 6).is_err());
        assert_eq!(third_stars(10).unwrap().len(), 4);
        assert_eq!(half_stars(10).unwrap().len(), 5);
    }

    #[test]
    fn ladder() {
        let m = ladder_model(4).unwrap();
        assert_eq!(m.len(), 2);
        assert_eq!(m.tree(0).edges(), &[(1, 2), (1, 3), (3, 4)]);
        let big = ladder_model(200).unwrap();
        assert_eq!(big.edge_probability(5, 6), 1.0);
        assert_eq!(big.edge_probability_fixed(7, 107), ONE / 100);
        assert_eq!(big.edge_probabilities().len(), 298);
        assert_eq!(ladder_half(&big), Some(100));
        assert_eq!(ladder_half(&star_catalog(4, 2).unwrap()), None);
        assert!(ladder_model(5).is_err());
    }

    #[test]
    fn bounded_degree() {
        let m = bounded_degree_model(5, 8).unwrap();
        assert_eq!(m.len(), 2);
        assert!(m.trees().iter().all(|t| t.max_degree() <= 5));
        assert!(m.tree(0).has_edge(1, 5));
        assert!(m.tree(1).has_edge(2, 6));
        let single = bounded_degree_model(7, 6).unwrap();
        assert_eq!(single, star_catalog(6, 3).unwrap());
        let m = bounded_degree_model(9, 80).unwrap();
        assert!(m.trees().iter().all(|t| t.max_degree() <= 9));
        assert!(bounded_degree_model(6, 10).is_err());
        assert!(bounded_degree_model(5, 10).is_err());
    }

    #[test]
    fn apex() {
        let m = apex_path_model(3).unwrap();
        assert_eq!(m.len(), 2);
        let m = apex_path_model(10).unwrap();
        assert_eq!(m.edge_probability(4, 5), 1.0);
        assert_eq!(m.edge_probability_fixed(10, 3), m.weights()[2]);
        assert!((m.edge_probability(10, 3) - 1.0 / 9.0).abs() < 1e-9);
    }

    #[test]
    fn spanning_tree_enumeration() {
        let tree = spanning_trees_uniform(4, &[(1, 2), (2, 3), (3, 4)]).unwrap();
        assert_eq!(tree.len(), 1);
        let tri = spanning_trees_uniform(3, &[(1, 2), (2, 3), (1, 3)]).unwrap();
        assert_eq!(tri.len(), 3);
        for (u, v) in [(1, 2), (2, 3), (1, 3)] {
            assert!((tri.edge_probability(u, v) - 2.0 / 3.0).abs() < 1e-9);
        }
        let cycle = spanning_trees_uniform(4, &[(1, 2), (2, 3), (3, 4), (4, 1)]).unwrap();
        assert_eq!(cycle.len(), 4);
        assert_eq!(cycle.edge_probability(1, 4), 0.75);
        let k5: Vec<Edge> = (1..=5).flat_map(|u| (u + 1..=5).map(move |v| (u, v))).collect();
        assert_eq!(enumerate_spanning_trees(5, &k5, 1000).unwrap().len(), 125);
        assert_eq!(enumerate_spanning_trees(5, &k5, 100), Err(Error::TooManyTrees(100)));
        assert_eq!(spanning_trees_uniform(4, &[(1, 2), (3, 4)]), Err(Error::Disconnected));
    }

    #[test]
    fn random_trees_are_uniformish_and_valid() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let mut counts = std::collections::HashMap::new();
        for _ in 0..16_000 {
            *counts.entry(random_tree(4, &mut rng)).or_insert(0) += 1;
        }
        // Cayley: 16 labelled trees on 4 vertices
        assert_eq!(counts.len(), 16);
        assert!(counts.values().all(|&c| (800..1200).contains(&c)));
        let m = random_catalog(6, 5, &mut rng);
        assert_eq!(m.len(), 5);
    }
}
