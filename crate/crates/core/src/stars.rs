//! Centre sequences of star windows and their birthday decomposition.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::window::TemporalWindow;

/// The centre of each snapshot of a window of stars.
pub fn centre_sequence(window: &TemporalWindow<'_>) -> Result<Vec<usize>> {
    (window.t0()..=window.t1())
        .map(|t| window.snapshot(t).star_centre().ok_or(Error::NotAStarSnapshot(t as usize)))
        .collect()
}

/// Birthday times `t_1 < t_2 < ...` of a centre sequence: `t_i` closes the
/// shortest interval after `t_{i-1}` in which some centre occurs twice.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StarDecomposition {
    pub k: usize,
    pub ell: usize,
    pub times: Vec<u64>,
    /// First position by which all `k` centres have occurred.
    pub coupon_time: Option<u64>,
}

impl StarDecomposition {
    /// `t_i`, with `t_0 = 0`.
    pub fn t(&self, i: usize) -> u64 {
        if i == 0 {
            0
        } else {
            self.times[i - 1]
        }
    }

    /// `tau_i = t_i - t_{i-1}`.
    pub fn tau(&self, i: usize) -> u64 {
        self.t(i) - self.t(i - 1)
    }

    /// `[t_{ell-1}, t_ell]`, which brackets the time to visit all non-centres.
    pub fn sandwich(&self) -> (u64, u64) {
        if self.ell == 0 {
            return (0, 0);
        }
        (self.t(self.ell - 1), self.t(self.ell))
    }
}

/// Streams through `seq` (centres in `1..=k`) collecting every complete birthday interval.
pub fn birthday_times(seq: &[usize], k: usize) -> (Vec<u64>, Option<u64>) {
    let mut in_interval = vec![false; k + 1];
    let mut touched = Vec::new();
    let mut ever = vec![false; k + 1];
    let mut distinct = 0;
    let mut coupon = None;
    let mut times = Vec::new();
    for (i, &x) in seq.iter().enumerate() {
        let pos = i as u64 + 1;
        if !ever[x] {
            ever[x] = true;
            distinct += 1;
            if distinct == k {
                coupon = Some(pos);
            }
        }
        if in_interval[x] {
            times.push(pos);
            for &y in &touched {
                in_interval[y] = false;
            }
            touched.clear();
        } else {
            in_interval[x] = true;
            touched.push(x);
        }
    }
    (times, coupon)
}

pub fn star_decomposition(seq: &[usize], k: usize, ell: usize) -> Result<StarDecomposition> {
    if let Some(&bad) = seq.iter().find(|&&x| x == 0 || x > k) {
        return Err(Error::BadParams(format!("centre {bad} outside [1, {k}]")));
    }
    let (times, coupon_time) = birthday_times(seq, k);
    if times.len() < ell {
        return Err(Error::SequenceTooShort { needed: ell, found: times.len() });
    }
    Ok(StarDecomposition { k, ell, times, coupon_time })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::star_catalog;

    #[test]
    fn extraction() {
        let m = star_catalog(4, 2).unwrap();
        let w = TemporalWindow::from_indices(&m, 1, &[0, 1, 0]).unwrap();
        assert_eq!(centre_sequence(&w).unwrap(), vec![1, 2, 1]);
        let two = crate::models::star_model(2, &[2]).unwrap();
        let w = TemporalWindow::from_indices(&two, 1, &[0, 0]).unwrap();
        assert_eq!(centre_sequence(&w).unwrap(), vec![1, 1]);
        let path = crate::models::apex_path_model(5).unwrap();
        let w = TemporalWindow::from_indices(&path, 3, &[0]).unwrap();
        assert_eq!(centre_sequence(&w), Err(Error::NotAStarSnapshot(3)));
    }

    #[test]
    fn decomposition_examples() {
        let d = star_decomposition(&[1, 2, 1], 2, 1).unwrap();
        assert_eq!(d.times, vec![3]);
        assert_eq!(d.coupon_time, Some(2));
        let d = star_decomposition(&[1, 1, 1, 1], 1, 2).unwrap();
        assert_eq!(d.times, vec![2, 4]);
        assert_eq!(d.sandwich(), (2, 4));
        assert_eq!(d.tau(2), 2);
        assert_eq!(
            star_decomposition(&[1, 2, 3], 3, 1),
            Err(Error::SequenceTooShort { needed: 1, found: 0 })
        );
    }
}
