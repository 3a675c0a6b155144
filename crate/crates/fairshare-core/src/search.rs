//! Bisection helpers shared by the water-filling rules.

pub(crate) const BISECT_ITERS: usize = 100;

/// Finds the level where a continuous monotone `value` crosses `target`.
/// Works for either monotonic direction; stops early once the value matches
/// the target to 1e-10 or the interval has collapsed.
pub(crate) fn bisect_level(
    mut lo: f64,
    mut hi: f64,
    target: f64,
    value: impl Fn(f64) -> f64,
) -> f64 {
    let increasing = value(lo) <= value(hi);
    let mut mid = 0.5 * (lo + hi);
    for _ in 0..BISECT_ITERS {
        mid = 0.5 * (lo + hi);
        let v = value(mid);
        if (v - target).abs() <= 1e-10 {
            return mid;
        }
        if (v < target) == increasing {
            lo = mid;
        } else {
            hi = mid;
        }
        if interval_exhausted(lo, hi) {
            break;
        }
    }
    mid
}

/// Walks a monotone feasibility boundary: `feasible` must hold at `lo` and
/// fail at `hi`. Returns the highest level confirmed feasible.
pub(crate) fn bisect_boundary(mut lo: f64, mut hi: f64, feasible: impl Fn(f64) -> bool) -> f64 {
    for _ in 0..BISECT_ITERS {
        if interval_exhausted(lo, hi) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if feasible(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

fn interval_exhausted(lo: f64, hi: f64) -> bool {
    hi - lo <= 1e-13 * (1.0 + lo.abs().max(hi.abs()))
}

/// Smallest integer in `lo..=hi` satisfying a monotone predicate (false then
/// true as the argument grows). The caller guarantees `pred(hi)` holds.
pub(crate) fn smallest_satisfying(mut lo: usize, mut hi: usize, pred: impl Fn(usize) -> bool) -> usize {
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    lo
}
