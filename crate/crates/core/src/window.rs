//! Materialized finite runs of snapshots.

use crate::error::{Error, Result};
use crate::model::Model;
use crate::tree::Tree;

/// Snapshots `G_{t0}, ..., G_{t1}` of a model, stored as catalog indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemporalWindow<'m> {
    model: &'m Model,
    seed: Option<u64>,
    t0: u64,
    snapshots: Vec<u32>,
}

impl<'m> TemporalWindow<'m> {
    /// Samples snapshots `t0..=t1` of `model` under `seed`. `t1 = t0 - 1` gives an empty window.
    pub fn materialize(model: &'m Model, seed: u64, t0: u64, t1: u64) -> Result<Self> {
        if t0 < 1 || t0 > t1.saturating_add(1) {
            return Err(Error::InvalidRange { t0, t1 });
        }
        let len = (t1 + 1 - t0) as usize;
        let snapshots = model.snapshots_from(seed, t0).take(len).map(|i| i as u32).collect();
        Ok(Self { model, seed: Some(seed), t0, snapshots })
    }

    /// A window with explicitly chosen snapshots starting at time `t0`.
    pub fn from_indices(model: &'m Model, t0: u64, indices: &[usize]) -> Result<Self> {
        if t0 < 1 {
            return Err(Error::InvalidRange { t0, t1: indices.len() as u64 });
        }
        if let Some(&bad) = indices.iter().find(|&&i| i >= model.len()) {
            return Err(Error::UnknownTree(bad));
        }
        Ok(Self { model, seed: None, t0, snapshots: indices.iter().map(|&i| i as u32).collect() })
    }

    pub fn model(&self) -> &'m Model {
        self.model
    }

    pub fn n(&self) -> usize {
        self.model.n()
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn t0(&self) -> u64 {
        self.t0
    }

    /// Last time step held; `t0 - 1` when empty.
    pub fn t1(&self) -> u64 {
        self.t0 + self.snapshots.len() as u64 - 1
    }

    pub fn len(&self) -> usize {
        self.snapshots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.snapshots.is_empty()
    }

    pub fn contains_time(&self, t: u64) -> bool {
        t >= self.t0 && t <= self.t1()
    }

    /// Catalog index of the snapshot at time `t`.
    pub fn tree_index(&self, t: u64) -> usize {
        assert!(self.contains_time(t), "time {t} outside window [{}, {}]", self.t0, self.t1());
        self.snapshots[(t - self.t0) as usize] as usize
    }

    pub fn snapshot(&self, t: u64) -> &'m Tree {
        self.model.tree(self.tree_index(t))
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.snapshots.iter().map(|&i| i as usize)
    }

    /// Sub-window over `[from, to]`, clipped to what is held.
    pub fn restrict(&self, from: u64, to: u64) -> Self {
        let from = from.max(self.t0);
        let to = to.min(self.t1());
        let snapshots = if from > to {
            Vec::new()
        } else {
            self.snapshots[(from - self.t0) as usize..=(to - self.t0) as usize].to_vec()
        };
        Self { model: self.model, seed: self.seed, t0: from, snapshots }
    }

    /// The same time range with the snapshot order reversed.
    pub fn reverse(&self) -> Self {
        let mut snapshots = self.snapshots.clone();
        snapshots.reverse();
        Self { model: self.model, seed: None, t0: self.t0, snapshots }
    }

    /// Samples further snapshots so the window reaches time `t1`.
    pub fn extend_to(&mut self, t1: u64) -> Result<()> {
        if t1 <= self.t1() {
            return Ok(());
        }
        let seed = self.seed.ok_or(Error::NotExtendable)?;
        let from = self.t1() + 1;
        let extra = (t1 - self.t1()) as usize;
        self.snapshots.extend(self.model.snapshots_from(seed, from).take(extra).map(|i| i as u32));
        Ok(())
    }

    /// Writes the `time,tree_index` dump.
    pub fn write_csv<W: std::io::Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "time,tree_index")?;
        for (i, &s) in self.snapshots.iter().enumerate() {
            writeln!(out, "{},{}", self.t0 + i as u64, s)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::uniform_model;
    use crate::tree::star;

    fn stars(n: usize, k: usize) -> Model {
        uniform_model(n, (1..=k).map(|c| star(n, c).unwrap()).collect()).unwrap()
    }

    #[test]
    fn empty_window() {
        let m = stars(3, 2);
        let w = TemporalWindow::materialize(&m, 1, 1, 0).unwrap();
        assert!(w.is_empty());
        assert_eq!(w.t1(), 0);
        assert!(w.reverse().is_empty());
    }

    #[test]
    fn invalid_ranges() {
        let m = stars(3, 2);
        assert!(TemporalWindow::materialize(&m, 1, 0, 3).is_err());
        assert!(TemporalWindow::materialize(&m, 1, 5, 3).is_err());
        assert!(matches!(TemporalWindow::from_indices(&m, 1, &[0, 2]), Err(Error::UnknownTree(2))));
    }

    #[test]
    fn restriction_matches_direct_sampling() {
        let m = stars(6, 4);
        let whole = TemporalWindow::materialize(&m, 17, 1, 10).unwrap();
        let part = TemporalWindow::materialize(&m, 17, 3, 7).unwrap();
        assert_eq!(whole.restrict(3, 7), part);
        assert_eq!(TemporalWindow::materialize(&m, 17, 1, 10).unwrap(), whole);
    }

    #[test]
    fn extension_matches_direct_sampling() {
        let m = stars(6, 4);
        let mut w = TemporalWindow::materialize(&m, 5, 2, 4).unwrap();
        w.extend_to(30).unwrap();
        assert_eq!(w, TemporalWindow::materialize(&m, 5, 2, 30).unwrap());
        assert_eq!(w.reverse().extend_to(40), Err(Error::NotExtendable));
    }

    #[test]
    fn reverse_swaps_order() {
        let m = stars(3, 2);
        let w = TemporalWindow::from_indices(&m, 4, &[0, 1, 1]).unwrap();
        let r = w.reverse();
        assert_eq!(r.indices().collect::<Vec<_>>(), vec![1, 1, 0]);
        assert_eq!((r.t0(), r.t1()), (4, 6));
        assert_eq!(r.reverse().indices().collect::<Vec<_>>(), vec![0, 1, 1]);
    }

    #[test]
    fn csv_dump() {
        let m = stars(3, 2);
        let w = TemporalWindow::from_indices(&m, 1, &[1, 0]).unwrap();
        let mut buf = Vec::new();
        w.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "time,tree_index\n1,1\n2,0\n");
    }
}
