//! Closed-form predictions for star models, the birthday and coupon processes,
//! and the lower-bound thresholds.

use serde::Serialize;

use crate::error::{Error, Result};

/// `P[tau_1 > t] = prod_{i=1}^{t-1} (1 - i/k)`.
pub fn birthday_survival(k: u64, t: u64) -> f64 {
    let mut log = 0.0f64;
    for i in 1..t {
        if i >= k {
            return 0.0;
        }
        log += (-(i as f64) / k as f64).ln_1p();
    }
    log.exp()
}

/// Exact `E[tau_1] = sum_{t >= 0} P[tau_1 > t]`.
pub fn tau1_mean(k: u64) -> f64 {
    (0..=k + 1).map(|t| if t == 0 { 1.0 } else { birthday_survival(k, t) }).sum()
}

/// `[sqrt(pi k / 2) - 2/5, sqrt(pi k / 2) + 8/5]`, which contains `E[tau_1]`.
pub fn tau1_bounds(k: u64) -> (f64, f64) {
    let c = (std::f64::consts::PI * k as f64 / 2.0).sqrt();
    (c - 0.4, c + 1.6)
}

/// Expected number of the `k` coupons still missing after `theta` uniform draws.
pub fn coupon_mean(k: u64, theta: u64) -> f64 {
    k as f64 * (1.0 - 1.0 / k as f64).powf(theta as f64)
}

/// Bounds on the exploration time of `k` uniformly weighted stars on `[n]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StarPrediction {
    pub f_minus: Option<f64>,
    pub f_plus: Option<f64>,
    pub centre_lower: f64,
    pub centre_upper: f64,
    pub weak_t: f64,
}

pub fn star_exploration(n: u64, k: u64, c: f64) -> Result<StarPrediction> {
    if k < 2 || k > n || c < 2.0 {
        return Err(Error::BadParams(format!("need 2 <= k <= n and C >= 2 (n = {n}, k = {k}, C = {c})")));
    }
    let kf = k as f64;
    let lnk = kf.ln();
    let leaves = (n - k) as f64;
    let weak_t = leaves * (std::f64::consts::PI * kf / 2.0).sqrt();
    let (f_minus, f_plus) = if n == k {
        (None, None)
    } else {
        let a = (c * lnk / leaves).sqrt();
        let b = 2.0 * (kf / (leaves * leaves)).sqrt();
        let (lo, hi) = tau1_bounds(k);
        (Some(lo * leaves * (1.0 - a - b)), Some(hi * leaves * (1.0 + a + b)))
    };
    Ok(StarPrediction { f_minus, f_plus, centre_lower: kf * lnk / 10.0, centre_upper: c * kf * lnk, weak_t })
}

/// `sqrt(d) n / 50`, below which bounded-degree star copies are rarely explored.
pub fn degree_lower(d: u64, n: u64) -> Result<f64> {
    if d < 5 || d % 2 == 0 || n == 0 || n % (d - 1) != 0 {
        return Err(Error::BadParams(format!("need odd d >= 5 and (d - 1) | n (d = {d}, n = {n})")));
    }
    Ok((d as f64).sqrt() * n as f64 / 50.0)
}

/// `n^2 / 15`, below which no online explorer finishes on `n / 2` stars.
pub fn online_star_lower(n: u64) -> Result<f64> {
    if n < 4 || n % 2 != 0 {
        return Err(Error::BadParams(format!("need an even n >= 4, got {n}")));
    }
    Ok((n * n) as f64 / 15.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn survival() {
        assert_eq!(birthday_survival(5, 1), 1.0);
        assert_eq!(birthday_survival(2, 2), 0.5);
        assert!(close(birthday_survival(365, 23), 0.4927, 1e-4));
        assert_eq!(birthday_survival(3, 5), 0.0);
    }

    #[test]
    fn tau1() {
        let (lo, hi) = tau1_bounds(100);
        assert!(close(lo, 12.133, 1e-3) && close(hi, 14.133, 1e-3));
        let (lo, hi) = tau1_bounds(2);
        assert!(close(lo, 1.373, 1e-3) && close(hi, 3.373, 1e-3));
        assert!(close(tau1_mean(2), 2.5, 1e-12));
        assert!(close(tau1_mean(1), 2.0, 1e-12));
        for k in [2, 10, 365, 10_000] {
            let (lo, hi) = tau1_bounds(k);
            let m = tau1_mean(k);
            assert!(lo <= m && m <= hi, "k = {k}: {m}");
        }
    }

    #[test]
    fn coupons() {
        assert_eq!(coupon_mean(7, 0), 7.0);
        assert!(close(coupon_mean(10, 10), 3.4868, 1e-4));
        assert!(coupon_mean(10, 200) < coupon_mean(10, 100));
    }

    #[test]
    fn star_bounds() {
        let p = star_exploration(2000, 200, 2.0).unwrap();
        assert!(close(p.weak_t, 31904.2, 0.1));
        assert!(p.f_minus.unwrap() < p.weak_t && p.weak_t < p.f_plus.unwrap());
        let all = star_exploration(500, 500, 3.0).unwrap();
        assert_eq!(all.f_minus, None);
        assert!(close(all.centre_lower, 0.1 * 500.0 * 500f64.ln(), 1e-9));
        assert!(close(all.centre_upper, 3.0 * 500.0 * 500f64.ln(), 1e-9));
        let ratio = star_exploration(3_000_000, 1_000_000, 2.0).unwrap().weak_t / 3e6f64.powf(1.5);
        assert!(close(ratio, (2.0 * std::f64::consts::PI / 27.0).sqrt(), 1e-6));
    }

    #[test]
    fn thresholds() {
        assert!(close(degree_lower(9, 80).unwrap(), 4.8, 1e-12));
        assert!(close(degree_lower(5, 8).unwrap(), 0.357, 1e-3));
        assert!(close(online_star_lower(200).unwrap(), 2666.67, 0.01));
        assert!(close(online_star_lower(4).unwrap(), 1.067, 1e-3));
        assert!(online_star_lower(5).is_err());
    }
}
