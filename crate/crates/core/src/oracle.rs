//! Exact exploration times for small instances, plus independent brute-force
//! cross-checks.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::set::VertexSet;
use crate::window::TemporalWindow;

pub const MAX_DP_VERTICES: usize = 20;
pub const MAX_DP_WINDOW: usize = 10_000;

/// Whether the explorer picks its start vertex or faces the worst one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StartMode {
    Best,
    Worst,
}

impl std::str::FromStr for StartMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "best" => Ok(Self::Best),
            "worst" => Ok(Self::Worst),
            other => Err(Error::BadParams(format!("unknown start mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleResult {
    pub mode: StartMode,
    pub targets: Vec<usize>,
    /// Earliest time step by which the targets can be covered; `None` if the
    /// window is too short.
    pub value: Option<u64>,
    /// Start vertex attaining `value` (smallest id on ties).
    pub start: Option<usize>,
    /// Per-start optimum; entry 0 unused.
    pub per_start: Vec<Option<u64>>,
}

/// Earliest cover time of `targets` from `start`, by dynamic programming over
/// `(visited targets, position)` states.
pub fn visit_time_from(window: &TemporalWindow<'_>, targets: &VertexSet, start: usize) -> Option<u64> {
    let n = window.n();
    let mut bit = vec![0u32; n + 1];
    for (i, v) in targets.iter().enumerate() {
        bit[v] = 1 << i;
    }
    let full: u32 = if targets.is_empty() { 0 } else { (1u32 << targets.len()) - 1 };
    let stride = n + 1;
    let mut seen = vec![false; (full as usize + 1) * stride];
    let mut states: Vec<(u32, usize)> = vec![(bit[start], start)];
    seen[bit[start] as usize * stride + start] = true;
    if bit[start] == full {
        return Some(window.t0() - 1);
    }
    for t in window.t0()..=window.t1() {
        let tree = window.snapshot(t);
        let current = states.len();
        for i in 0..current {
            let (mask, v) = states[i];
            for &u in tree.neighbors(v) {
                let m = mask | bit[u];
                let key = m as usize * stride + u;
                if !seen[key] {
                    if m == full {
                        return Some(t);
                    }
                    seen[key] = true;
                    states.push((m, u));
                }
            }
        }
    }
    None
}

/// Exact best- or worst-start time to visit every vertex of `targets`.
pub fn exact_visit_time(
    window: &TemporalWindow<'_>,
    targets: &VertexSet,
    mode: StartMode,
) -> Result<OracleResult> {
    let n = window.n();
    if n > MAX_DP_VERTICES {
        return Err(Error::TooLarge(format!("{n} vertices exceed {MAX_DP_VERTICES}")));
    }
    if window.len() > MAX_DP_WINDOW {
        return Err(Error::TooLarge(format!("{} snapshots exceed {MAX_DP_WINDOW}", window.len())));
    }
    if targets.universe() != n {
        return Err(Error::BadParams("target set over a different vertex count".into()));
    }
    let mut per_start: Vec<Option<u64>> =
        (1..=n).into_par_iter().map(|s| visit_time_from(window, targets, s)).collect();
    per_start.insert(0, None);
    let (value, start) = match mode {
        StartMode::Best => (1..=n)
            .filter_map(|s| per_start[s].map(|v| (v, s)))
            .min()
            .map_or((None, None), |(v, s)| (Some(v), Some(s))),
        StartMode::Worst => {
            if let Some(s) = (1..=n).find(|&s| per_start[s].is_none()) {
                (None, Some(s))
            } else {
                let best = (1..=n).map(|s| per_start[s].expect("feasible")).max().expect("n >= 1");
                let s = (1..=n).find(|&s| per_start[s] == Some(best));
                (Some(best), s)
            }
        }
    };
    Ok(OracleResult { mode, targets: targets.to_vec(), value, start, per_start })
}

/// Exploration time of the whole vertex set.
pub fn texp(window: &TemporalWindow<'_>, mode: StartMode) -> Result<OracleResult> {
    exact_visit_time(window, &VertexSet::full(window.n()), mode)
}

/// Earliest cover time by enumerating every walk; for tiny instances only.
pub fn exhaustive_walk_search(
    window: &TemporalWindow<'_>,
    targets: &VertexSet,
    start: usize,
) -> Result<Option<u64>> {
    let n = window.n();
    if n > 4 || window.len() > 6 {
        return Err(Error::TooLarge(format!("n = {n}, {} snapshots", window.len())));
    }
    fn go(window: &TemporalWindow<'_>, goal: u32, t: u64, v: usize, mask: u32, best: &mut Option<u64>) {
        if mask & goal == goal {
            let arrival = t - 1;
            if best.map_or(true, |b| arrival < b) {
                *best = Some(arrival);
            }
            return;
        }
        if t > window.t1() {
            return;
        }
        go(window, goal, t + 1, v, mask, best);
        for &u in window.snapshot(t).neighbors(v) {
            go(window, goal, t + 1, u, mask | 1 << u, best);
        }
    }
    let goal = targets.iter().fold(0u32, |m, v| m | 1 << v);
    let mut best = None;
    go(window, goal, window.t0(), start, 1 << start, &mut best);
    Ok(best)
}

/// Vertices reachable from `source` by temporal walks whose last step is at most `t`,
/// found by exhaustive memoized search over `(vertex, time)`.
pub fn brute_force_reach(window: &TemporalWindow<'_>, source: usize, t: u64) -> Result<VertexSet> {
    let n = window.n();
    if n > 12 {
        return Err(Error::TooLarge(format!("{n} vertices exceed 12")));
    }
    let last = t.min(window.t1());
    let len = (last + 2 - window.t0()) as usize;
    let mut seen = vec![vec![false; len]; n + 1];
    let mut out = VertexSet::empty(n);
    let mut stack = vec![(source, window.t0())];
    while let Some((v, s)) = stack.pop() {
        let idx = (s - window.t0()) as usize;
        if seen[v][idx] {
            continue;
        }
        seen[v][idx] = true;
        out.insert(v);
        if s <= last {
            stack.push((v, s + 1));
            for &u in window.snapshot(s).neighbors(v) {
                stack.push((u, s + 1));
            }
        }
    }
    Ok(out)
}
