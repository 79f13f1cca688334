//! Random spanning tree models: a catalog of trees with a quantized distribution.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::rng::{keyed_word, SnapshotWords};
use crate::tree::{canonical_edge, Edge, Tree};

/// Total probability mass in fixed point.
pub const ONE: u64 = 1 << 32;

/// A catalog of distinct spanning trees on `[n]` with probability masses in
/// units of `2^-32`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    n: usize,
    trees: Vec<Tree>,
    weights: Vec<u64>,
    cumulative: Vec<u64>,
}

/// Builds a model from trees and nonnegative masses, normalizing the masses to
/// fixed point and assigning the rounding residue to the last tree.
pub fn build_model(n: usize, trees: Vec<Tree>, masses: &[f64]) -> Result<Model> {
    if trees.is_empty() {
        return Err(Error::EmptyCatalog);
    }
    if masses.len() != trees.len() {
        return Err(Error::MassCountMismatch { expected: trees.len(), got: masses.len() });
    }
    for (i, tree) in trees.iter().enumerate() {
        if tree.n() != n {
            return Err(Error::MixedVertexCounts { index: i, expected: n, found: tree.n() });
        }
    }
    let mut seen: HashMap<&[Edge], usize> = HashMap::with_capacity(trees.len());
    for (i, tree) in trees.iter().enumerate() {
        if let Some(&j) = seen.get(tree.edges()) {
            return Err(Error::DuplicateTree(j, i));
        }
        seen.insert(tree.edges(), i);
    }
    for (i, &m) in masses.iter().enumerate() {
        if !m.is_finite() || m < 0.0 {
            return Err(Error::InvalidMass(i));
        }
        if m == 0.0 {
            return Err(Error::ZeroMass(i));
        }
    }
    let total: f64 = masses.iter().sum();
    let scale = ONE as f64;
    let mut weights: Vec<u64> =
        masses.iter().map(|&m| ((m * scale) / total).floor() as u64).collect();
    let last = weights.len() - 1;
    let head: u64 = weights[..last].iter().sum();
    if head >= ONE {
        return Err(Error::InvalidMass(last));
    }
    weights[last] = ONE - head;
    from_weights(n, trees, weights)
}

/// Builds a model with equal masses, quantized exactly in integers.
pub fn uniform_model(n: usize, trees: Vec<Tree>) -> Result<Model> {
    let k = trees.len() as u64;
    if k == 0 {
        return Err(Error::EmptyCatalog);
    }
    build_model(n, trees, &vec![1.0; k as usize])
}

/// Builds a model from fixed-point weights that already sum to `2^32`.
pub fn from_weights(n: usize, trees: Vec<Tree>, weights: Vec<u64>) -> Result<Model> {
    if trees.is_empty() {
        return Err(Error::EmptyCatalog);
    }
    if weights.len() != trees.len() {
        return Err(Error::MassCountMismatch { expected: trees.len(), got: weights.len() });
    }
    if let Some(i) = weights.iter().position(|&w| w == 0) {
        return Err(Error::ZeroMass(i));
    }
    let mut acc = 0u64;
    let mut cumulative = Vec::with_capacity(weights.len());
    for &w in &weights {
        acc += w;
        cumulative.push(acc);
    }
    if acc != ONE {
        return Err(Error::InvalidMass(weights.len() - 1));
    }
    Ok(Model { n, trees, weights, cumulative })
}

impl Model {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn trees(&self) -> &[Tree] {
        &self.trees
    }

    pub fn tree(&self, index: usize) -> &Tree {
        &self.trees[index]
    }

    pub fn len(&self) -> usize {
        self.trees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }

    /// Fixed-point weights, summing to [`ONE`].
    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn probability(&self, index: usize) -> f64 {
        self.weights[index] as f64 / ONE as f64
    }

    /// Locates a 32-bit draw in the cumulative weight table.
    pub fn locate(&self, draw: u64) -> usize {
        self.cumulative.partition_point(|&c| c <= draw)
    }

    /// Tree index of snapshot `index` for `seed`.
    pub fn draw_snapshot(&self, seed: u64, index: u64) -> usize {
        self.locate(keyed_word(seed, index) & (ONE - 1))
    }

    /// Streams snapshot tree indices starting at time step `from`.
    pub fn snapshots_from(&self, seed: u64, from: u64) -> SnapshotStream<'_> {
        SnapshotStream { model: self, words: SnapshotWords::starting_at(seed, from) }
    }

    /// Exact appearance probability of `edge` in fixed point.
    pub fn edge_probability_fixed(&self, u: usize, v: usize) -> u64 {
        self.trees
            .iter()
            .zip(&self.weights)
            .filter(|(t, _)| t.has_edge(u, v))
            .map(|(_, &w)| w)
            .sum()
    }

    pub fn edge_probability(&self, u: usize, v: usize) -> f64 {
        self.edge_probability_fixed(u, v) as f64 / ONE as f64
    }

    /// Every edge of the union graph with its fixed-point appearance probability.
    pub fn edge_probabilities(&self) -> BTreeMap<Edge, u64> {
        let mut map = BTreeMap::new();
        for (tree, &w) in self.trees.iter().zip(&self.weights) {
            for &(u, v) in tree.edges() {
                *map.entry(canonical_edge(u, v)).or_insert(0) += w;
            }
        }
        map
    }

    /// Whether every tree in the catalog is a star.
    pub fn is_star_model(&self) -> bool {
        self.trees.iter().all(|t| t.star_centre().is_some())
    }
}

/// Sequential snapshot draws for one seed.
pub struct SnapshotStream<'m> {
    model: &'m Model,
    words: SnapshotWords,
}

impl Iterator for SnapshotStream<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        Some(self.model.locate(self.words.next_word() & (ONE - 1)))
    }
}
