//! Banded dynamic time warping and the Keogh envelope lower bound.
//!
//! Local cost is the squared difference and the returned distance is the
//! square root of the accumulated cost, so a zero-radius band coincides with
//! plain Euclidean distance.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::scalar::Real;

fn check_equal_len<S>(a: &[S], b: &[S]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::InvalidInput(format!(
            "series lengths differ: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    Ok(())
}

/// DTW distance under a Sakoe-Chiba band of radius `r` (|i−j| ≤ r).
/// Radius n−1 or larger leaves the warp unconstrained.
pub fn dtw_distance<S: Real>(a: &[S], b: &[S], r: usize) -> Result<S> {
    check_equal_len(a, b)?;
    let n = a.len();
    if n == 0 {
        return Ok(S::zero());
    }
    let inf = S::infinity();
    let mut dp = vec![inf; n * n];
    for i in 0..n {
        let lo = i.saturating_sub(r);
        let hi = (i + r).min(n - 1);
        for j in lo..=hi {
            let diff = a[i] - b[j];
            let cost = diff * diff;
            let prev = if i == 0 && j == 0 {
                S::zero()
            } else {
                let mut best = inf;
                if i > 0 && j > 0 {
                    best = best.min(dp[(i - 1) * n + j - 1]);
                }
                if i > 0 {
                    best = best.min(dp[(i - 1) * n + j]);
                }
                if j > 0 {
                    best = best.min(dp[i * n + j - 1]);
                }
                best
            };
            dp[i * n + j] = cost + prev;
        }
    }
    Ok(dp[n * n - 1].sqrt())
}

/// Running min/max of `xs` over the clipped window [i−r, i+r], linear time.
fn envelope<S: Real>(xs: &[S], r: usize) -> (Vec<S>, Vec<S>) {
    let n = xs.len();
    let mut upper = Vec::with_capacity(n);
    let mut lower = Vec::with_capacity(n);
    let mut max_q: VecDeque<usize> = VecDeque::new();
    let mut min_q: VecDeque<usize> = VecDeque::new();
    let mut next = 0usize;
    for i in 0..n {
        let hi = (i + r).min(n - 1);
        while next <= hi {
            while max_q.back().is_some_and(|&k| xs[k] <= xs[next]) {
                max_q.pop_back();
            }
            max_q.push_back(next);
            while min_q.back().is_some_and(|&k| xs[k] >= xs[next]) {
                min_q.pop_back();
            }
            min_q.push_back(next);
            next += 1;
        }
        let lo = i.saturating_sub(r);
        while max_q[0] < lo {
            max_q.pop_front();
        }
        while min_q[0] < lo {
            min_q.pop_front();
        }
        upper.push(xs[max_q[0]]);
        lower.push(xs[min_q[0]]);
    }
    (upper, lower)
}

/// Keogh lower bound: the query's excursion outside the candidate's
/// band-radius envelope. Admissible for `dtw_distance` at the same radius:
/// lb_keogh(q, c, r) ≤ dtw_distance(q, c, r).
pub fn lb_keogh<S: Real>(query: &[S], candidate: &[S], r: usize) -> Result<S> {
    check_equal_len(query, candidate)?;
    let (upper, lower) = envelope(candidate, r);
    let mut sum = S::zero();
    for ((&q, &u), &l) in query.iter().zip(&upper).zip(&lower) {
        let excess = if q > u {
            q - u
        } else if q < l {
            l - q
        } else {
            S::zero()
        };
        sum += excess * excess;
    }
    Ok(sum.sqrt())
}
