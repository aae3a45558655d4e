//! Bracketed scalar root finding: bisection with a secant refinement step.
//! Derivative-free on purpose; every curve shape in this toolkit is handled
//! by the same driver.

use crate::error::{Error, Result};

const MAX_ITER: usize = 200;

/// Find a root of `f` inside `[a, b]`. The endpoints must bracket a sign
/// change (an endpoint value within `f_tol` of zero counts as the root).
/// Converges when the bracket width drops below `x_tol` or |f| below `f_tol`.
pub fn bisect_secant<F>(mut f: F, a: f64, b: f64, x_tol: f64, f_tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let (mut lo, mut hi) = if a <= b { (a, b) } else { (b, a) };
    let mut flo = f(lo);
    let mut fhi = f(hi);
    if flo.abs() <= f_tol {
        return Ok(lo);
    }
    if fhi.abs() <= f_tol {
        return Ok(hi);
    }
    if flo.is_nan() || fhi.is_nan() || flo.signum() == fhi.signum() {
        return Err(Error::NoConvergence("bracket does not straddle a root"));
    }

    for _ in 0..MAX_ITER {
        // secant proposal, clipped into the open bracket; fall back to the
        // midpoint when the proposal is degenerate or leaves the interval
        let mut x = if (fhi - flo).abs() > f64::MIN_POSITIVE {
            hi - fhi * (hi - lo) / (fhi - flo)
        } else {
            0.5 * (lo + hi)
        };
        if !(x > lo && x < hi) {
            x = 0.5 * (lo + hi);
        }
        let fx = f(x);
        if fx.abs() <= f_tol || (hi - lo) <= x_tol {
            return Ok(x);
        }
        if fx.is_nan() {
            return Err(Error::NoConvergence("function returned NaN inside bracket"));
        }
        if fx.signum() == flo.signum() {
            lo = x;
            flo = fx;
        } else {
            hi = x;
            fhi = fx;
        }
        // guarantee progress: a pure secant sequence can stall on one side
        let mid = 0.5 * (lo + hi);
        let fmid = f(mid);
        if fmid.abs() <= f_tol {
            return Ok(mid);
        }
        if fmid.signum() == flo.signum() {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
            fhi = fmid;
        }
        if (hi - lo) <= x_tol {
            return Ok(0.5 * (lo + hi));
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Scan `n` uniform cells over `[a, b]` and return a root for every sign
/// change (plus nodes that already sit on a root). Roots closer together
/// than `dedupe` collapse to one.
pub fn scan_roots<F>(mut f: F, a: f64, b: f64, n: usize, x_tol: f64, f_tol: f64, dedupe: f64) -> Vec<f64>
where
    F: FnMut(f64) -> f64,
{
    let mut roots: Vec<f64> = Vec::new();
    if !(b > a) || n < 2 {
        return roots;
    }
    let push = |r: f64, roots: &mut Vec<f64>| {
        if !roots.iter().any(|&q| (q - r).abs() < dedupe) {
            roots.push(r);
        }
    };
    let step = (b - a) / n as f64;
    let mut x_prev = a;
    let mut f_prev = f(a);
    for i in 1..=n {
        let x = if i == n { b } else { a + step * i as f64 };
        let fx = f(x);
        if f_prev.abs() <= f_tol {
            push(x_prev, &mut roots);
        } else if fx.is_finite()
            && f_prev.is_finite()
            && fx.signum() != f_prev.signum()
        {
            if let Ok(r) = bisect_secant(&mut f, x_prev, x, x_tol, f_tol) {
                push(r, &mut roots);
            }
        }
        x_prev = x;
        f_prev = fx;
    }
    if f_prev.abs() <= f_tol {
        push(x_prev, &mut roots);
    }
    roots.sort_by(|p, q| p.partial_cmp(q).unwrap());
    roots
}

/// Largest `x` in `[good, bad]` (or smallest, when `bad < good`) for which
/// `ok(x)` holds, located by bisection on the boolean. `ok(good)` must be
/// true and `ok(bad)` false.
pub fn boundary_bisect<F>(mut ok: F, good: f64, bad: f64, x_tol: f64) -> f64
where
    F: FnMut(f64) -> bool,
{
    let mut g = good;
    let mut b = bad;
    while (g - b).abs() > x_tol {
        let mid = 0.5 * (g + b);
        if ok(mid) {
            g = mid;
        } else {
            b = mid;
        }
    }
    g
}
