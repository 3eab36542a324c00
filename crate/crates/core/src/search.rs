//! One-dimensional minimisation of (mostly) unimodal functions.

/// Ternary search for the minimum of `f` on `[lo, hi]`.
///
/// Stops once the bracket is narrower than `tol` and returns the best point
/// sampled on the way, endpoints included, so a plateau or a slightly
/// non-unimodal `f` never produces a value worse than what was seen.
pub fn unimodal_min<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    let mut best = (lo, f(lo));
    if hi <= lo {
        return best;
    }
    let keep = |x: f64, fx: f64, best: &mut (f64, f64)| {
        if fx < best.1 {
            *best = (x, fx);
        }
    };
    let fh = f(hi);
    keep(hi, fh, &mut best);
    let (mut a, mut b) = (lo, hi);
    let tol = tol.max(f64::EPSILON * hi.abs().max(lo.abs()).max(1.0));
    while b - a > tol {
        let m1 = a + (b - a) / 3.0;
        let m2 = b - (b - a) / 3.0;
        let (f1, f2) = (f(m1), f(m2));
        keep(m1, f1, &mut best);
        keep(m2, f2, &mut best);
        if f1 < f2 {
            b = m2;
        } else if f1 > f2 {
            a = m1;
        } else if best.0 < m1 {
            // flat: lean toward the best point seen so far
            b = m2;
        } else if best.0 > m2 {
            a = m1;
        } else {
            a = m1;
            b = m2;
        }
    }
    let mid = 0.5 * (a + b);
    let fm = f(mid);
    keep(mid, fm, &mut best);
    best
}

/// Coarse scan with `grid` intervals, then [`unimodal_min`] around the best
/// grid point. Robust against plateaus that fool a bare ternary search.
pub fn bracketed_min<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    grid: usize,
    tol: f64,
) -> (f64, f64) {
    if hi <= lo || grid < 2 {
        return unimodal_min(f, lo, hi, tol);
    }
    let step = (hi - lo) / grid as f64;
    let at = |i: usize| if i == grid { hi } else { lo + step * i as f64 };
    let mut best = (lo, f(lo));
    let mut best_i = 0;
    for i in 1..=grid {
        let x = at(i);
        let fx = f(x);
        if fx < best.1 {
            best = (x, fx);
            best_i = i;
        }
    }
    let (a, b) = (at(best_i.saturating_sub(1)), at((best_i + 1).min(grid)));
    let polished = unimodal_min(&mut f, a, b, tol);
    if polished.1 < best.1 {
        polished
    } else {
        best
    }
}
