//! The budget-adjustment rule: shift the perceived revenue target until the
//! perceived solution lands on the true budget constraint.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{Economy, RevenueTarget};
use crate::root::bisect_secant;
use crate::solver::{max_perceived_revenue_on_foc, solve_perceived, Solution};

/// Revenue tolerance of the outer fixed-point search.
pub const ADJUST_TOL: f64 = 1e-9;

/// A perceived solution whose taxes satisfy the true budget constraint at
/// `true_target`, obtained by raising the perceived target to
/// `adjusted_target`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AdjustedSolution {
    pub inner: Solution,
    pub adjusted_target: f64,
    pub true_target: f64,
}

/// Find the perceived target R' whose perceived solution raises exactly
/// `r_true` in true revenue. Perceptions stay fixed across the adjustment;
/// when several fixed points exist the smallest feasible R' is returned.
pub fn adjust_budget(econ: &Economy, r_true: RevenueTarget) -> Result<AdjustedSolution> {
    let rt = r_true.value();
    let residual = |rp: f64| -> Result<f64> {
        let sol = solve_perceived(econ, RevenueTarget::new(rp)?)?;
        Ok(sol.true_rev - rt)
    };

    // Perceived revenue weakly exceeds true revenue on the relevant branch,
    // so the bracket starts at the true requirement itself and runs to the
    // largest target the perceived problem can meet.
    let (_, rs_max) = max_perceived_revenue_on_foc(econ);
    let hi = rs_max * (1.0 - 1e-9);
    if hi < rt {
        return Err(Error::Infeasible { target: rt, max_attainable: hi });
    }

    // scan for the first sign change so the smallest fixed point wins
    let n = 256;
    let mut best_true = f64::NEG_INFINITY;
    let mut prev = (rt, residual(rt)?);
    if prev.1.abs() <= ADJUST_TOL {
        return build(econ, rt, rt);
    }
    let mut bracket = None;
    for i in 1..=n {
        let rp = rt + (hi - rt) * i as f64 / n as f64;
        let h = match residual(rp) {
            Ok(v) => v,
            Err(Error::Infeasible { .. }) => break,
            Err(e) => return Err(e),
        };
        best_true = best_true.max(h + rt);
        if h.abs() <= ADJUST_TOL {
            return build(econ, rp, rt);
        }
        if h.signum() != prev.1.signum() {
            bracket = Some((prev.0, rp));
            break;
        }
        prev = (rp, h);
    }

    let (lo, hi) = bracket.ok_or(Error::Infeasible {
        target: rt,
        max_attainable: best_true.max(prev.1 + rt),
    })?;
    let root = bisect_secant(
        |rp| residual(rp).unwrap_or(f64::NAN),
        lo,
        hi,
        1e-13,
        ADJUST_TOL * 0.1,
    )?;
    build(econ, root, rt)
}

fn build(econ: &Economy, adjusted: f64, rt: f64) -> Result<AdjustedSolution> {
    let inner = solve_perceived(econ, RevenueTarget::new(adjusted)?)?;
    if (inner.true_rev - rt).abs() > 1e-8 {
        return Err(Error::NoConvergence("budget adjustment residual check"));
    }
    Ok(AdjustedSolution { inner, adjusted_target: adjusted, true_target: rt })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{true_revenue, Economy};

    #[test]
    fn theta_one_adjustment_is_identity() {
        let econ = Economy::baseline(0.6, 2.5, 1.0).unwrap();
        let adj = adjust_budget(&econ, RevenueTarget::new(0.3).unwrap()).unwrap();
        assert!((adj.adjusted_target - 0.3).abs() < 1e-9);
        let sol = solve_perceived(&econ, RevenueTarget::new(0.3).unwrap()).unwrap();
        assert!((adj.inner.taxes.t1 - sol.taxes.t1).abs() < 1e-9);
        assert!((adj.inner.taxes.t2 - sol.taxes.t2).abs() < 1e-9);
    }

    #[test]
    fn fig1_adjustment_keeps_inverse_ramsey() {
        let econ = Economy::baseline(0.6, 2.5, 0.55).unwrap();
        let adj = adjust_budget(&econ, RevenueTarget::new(0.5).unwrap()).unwrap();
        assert!(adj.inner.taxes.t2 > adj.inner.taxes.t1);
        assert!((true_revenue(adj.inner.taxes, &econ).unwrap() - 0.5).abs() < 1e-8);
        assert!(adj.adjusted_target >= 0.5);
    }

    #[test]
    fn fig2_adjustment_removes_subsidy() {
        let econ = Economy::baseline(0.6, 4.0, 0.45).unwrap();
        let adj = adjust_budget(&econ, RevenueTarget::new(0.2).unwrap()).unwrap();
        assert!(adj.inner.taxes.t1 >= 0.0, "t1 = {}", adj.inner.taxes.t1);
        assert!((true_revenue(adj.inner.taxes, &econ).unwrap() - 0.2).abs() < 1e-8);
    }

    #[test]
    fn infeasible_requirement_is_reported() {
        let econ = Economy::baseline(0.6, 2.5, 0.55).unwrap();
        let err = adjust_budget(&econ, RevenueTarget::new(80.0).unwrap()).unwrap_err();
        assert!(matches!(err, Error::Infeasible { .. }));
    }
}
