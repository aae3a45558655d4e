//! Closed-form and semi-analytic checks: the inverse-Ramsey condition at a
//! solution, the small-revenue approximation, the misperception threshold
//! for inverse-Ramsey outcomes, and the lump-sum comparison via the
//! multiplier path.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{perceived_demand, true_demand, Economy, RevenueTarget, TaxPair};
use crate::quad::adaptive_simpson;
use crate::root::{bisect_secant, boundary_bisect};
use crate::solver::{focal_goods, foc_point, inverse_ramsey_outcome, log_g, solve_perceived, Solution};
use crate::adjust::adjust_budget;

/// Absolute tolerance of the multiplier-path quadrature.
pub const QUAD_TOL: f64 = 1e-7;

/// Evaluation of the closed-form inverse-Ramsey condition at a solution,
/// alongside the direct tax-ratio comparison that defines the outcome.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InverseRamseyReport {
    /// The authoritative verdict (the tax-ratio comparison).
    pub holds: bool,
    /// Left side of the condition: (1 - burden/mu)/(1 - 1/mu) * e_j.
    pub lhs: f64,
    /// Right side of the condition: the perceived elasticity of the focal
    /// good at the solution.
    pub rhs: f64,
    pub mu: f64,
    /// Perceived own share of the burden, x_i*/x-bar_i at the solution.
    pub burden_share: f64,
    /// Direct comparison t_i/(1+t_i) > t_j/(1+t_j).
    pub tax_ratio_check: bool,
}

/// Evaluate the inverse-Ramsey condition at `sol`. The ratio form degenerates
/// when the multiplier sits at 1 (revenue target near zero).
pub fn inverse_ramsey_check(sol: &Solution, econ: &Economy) -> Result<InverseRamseyReport> {
    let mu = sol.mu;
    if (mu - 1.0).abs() < 1e-9 {
        return Err(Error::DegenerateMultiplier { mu });
    }
    let (i, _j) = focal_goods(econ);
    let (t_i, good_i, good_j) = if i == 2 {
        (sol.taxes.t2, econ.good2(), econ.good1())
    } else {
        (sol.taxes.t1, econ.good1(), econ.good2())
    };
    let x_true = true_demand(t_i, good_i)?;
    let x_perc = perceived_demand(t_i, good_i, econ.mode())?;
    let burden_share = x_true / x_perc;
    let lhs = (1.0 - burden_share / mu) / (1.0 - 1.0 / mu) * good_j.e();
    let rhs = good_i.perceived_elasticity(t_i, econ.mode());
    let tax_ratio_check = inverse_ramsey_outcome(sol.taxes, econ);
    Ok(InverseRamseyReport {
        holds: tax_ratio_check,
        lhs,
        rhs,
        mu,
        burden_share,
        tax_ratio_check,
    })
}

/// Small-revenue predicate: inverse-Ramsey holds near R = 0 iff the
/// perceived elasticity of the focal good is below the unweighted average of
/// the two true elasticities.
pub fn small_r_approx_check(econ: &Economy) -> Result<bool> {
    if econ.good1().theta() != 1.0 {
        return Err(Error::Unsupported { theta1: econ.good1().theta() });
    }
    let (i, _) = focal_goods(econ);
    let (good_i, good_j) = if i == 2 {
        (econ.good2(), econ.good1())
    } else {
        (econ.good1(), econ.good2())
    };
    let avg = 0.5 * (good_i.e() + good_j.e());
    let perceived_i = good_i.theta() * good_i.e();
    Ok(avg > perceived_i)
}

/// Largest misperception factor that still produces an inverse-Ramsey
/// outcome for elasticities e_i > e_j at revenue target R, searched over
/// theta in (e_j/e_i, 1). Perceived demand follows the geometric-mean model,
/// i.e. perceived elasticity theta * e_i on the taxed side.
pub fn existence_threshold(e_i: f64, e_j: f64, target: RevenueTarget) -> Result<f64> {
    if !(e_i > e_j && e_j > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "need e_i > e_j > 0, got e_i = {e_i}, e_j = {e_j}"
        )));
    }
    let lo = e_j / e_i;
    let outcome = |theta: f64| -> bool {
        let econ = match Economy::baseline(e_j, e_i, theta) {
            Ok(e) => e,
            Err(_) => return false,
        };
        match solve_perceived(&econ, target) {
            Ok(sol) => sol.flags.inverse_ramsey,
            Err(_) => false,
        }
    };

    // probe for the highest theta with an inverse-Ramsey outcome, then pin
    // the switch point against the first refuting theta above it
    let n = 32;
    let mut last_true: Option<f64> = None;
    let mut first_false_above = 1.0;
    for k in 1..=n {
        let theta = lo + (1.0 - lo) * k as f64 / (n + 1) as f64;
        if outcome(theta) {
            last_true = Some(theta);
            first_false_above = 1.0;
        } else if last_true.is_some() && first_false_above == 1.0 {
            first_false_above = theta;
        }
    }
    let good = last_true.ok_or(Error::ThresholdNotFound { lo, hi: 1.0, target: target.value() })?;
    Ok(boundary_bisect(outcome, good, first_false_above, 1e-9))
}

/// Multiplier path along the perceived-solution branch that is continuously
/// connected to the origin. Solutions are continued in small revenue steps,
/// each warm-started from the previous node, so the path never jumps
/// branches.
pub struct MuPath<'a> {
    econ: &'a Economy,
    /// (r, t2) nodes in increasing r; starts at the origin.
    nodes: Vec<(f64, f64)>,
}

impl<'a> MuPath<'a> {
    pub fn new(econ: &'a Economy) -> Self {
        Self { econ, nodes: vec![(0.0, 0.0)] }
    }

    /// Multiplier at revenue requirement `r` on this branch.
    pub fn mu_at(&mut self, r: f64) -> Result<f64> {
        let t2 = self.t2_at(r)?;
        let t1 = crate::solver::t1_on_foc(t2, self.econ)?;
        Ok((-log_g(t1, self.econ.good1(), self.econ.mode())?).exp())
    }

    /// Tax pair on the branch at revenue requirement `r`.
    pub fn taxes_at(&mut self, r: f64) -> Result<TaxPair> {
        let t2 = self.t2_at(r)?;
        let (tp, _) = foc_point(t2, self.econ)?;
        Ok(tp)
    }

    /// Largest revenue the branch reaches at or below `limit`.
    pub fn reachable(&mut self, limit: f64) -> f64 {
        match self.advance_to(limit) {
            Ok(()) => limit,
            Err(_) => self.nodes.last().map(|n| n.0).unwrap_or(0.0),
        }
    }

    fn t2_at(&mut self, r: f64) -> Result<f64> {
        if !(r >= 0.0) || !r.is_finite() {
            return Err(Error::InvalidParameter(format!("revenue must be >= 0, got {r}")));
        }
        self.advance_to(r)?;
        // locate the bracketing nodes and refine locally
        let idx = self.nodes.partition_point(|n| n.0 < r);
        if idx < self.nodes.len() && (self.nodes[idx].0 - r).abs() < 1e-15 {
            return Ok(self.nodes[idx].1);
        }
        let (r0, t0) = self.nodes[idx.saturating_sub(1)];
        let (r1, t1) = self.nodes[(idx).min(self.nodes.len() - 1)];
        let hint = if r1 > r0 { t0 + (t1 - t0) * (r - r0) / (r1 - r0) } else { t0 };
        let spread = (t1 - t0).abs().max(1e-6);
        self.local_root(r, hint, spread)
            .ok_or(Error::Infeasible { target: r, max_attainable: r0 })
    }

    fn advance_to(&mut self, r_target: f64) -> Result<()> {
        let (mut r0, mut t20) = *self.nodes.last().unwrap();
        if r_target <= r0 {
            return Ok(());
        }
        let mut dr = (r_target - r0).min(0.02).max(1e-9);
        let mut step_t2 = 1e-4;
        loop {
            if r0 >= r_target {
                return Ok(());
            }
            let r1 = (r0 + dr).min(r_target);
            match self.local_root(r1, t20, step_t2) {
                Some(t21) => {
                    step_t2 = (t21 - t20).abs().max(1e-7);
                    self.nodes.push((r1, t21));
                    r0 = r1;
                    t20 = t21;
                    dr = (dr * 1.6).min(0.02);
                }
                None => {
                    dr *= 0.5;
                    if dr < 1e-10 {
                        // branch revenue peak: nothing beyond r0 is reachable
                        return Err(Error::Infeasible { target: r_target, max_attainable: r0 });
                    }
                }
            }
        }
    }

    /// Root of (perceived revenue along the FOC curve) = r closest to
    /// `hint`, searched in an expanding window.
    fn local_root(&self, r: f64, hint: f64, scale: f64) -> Option<f64> {
        let f = |t2: f64| match foc_point(t2, self.econ) {
            Ok((_, rs)) => rs - r,
            Err(_) => f64::NAN,
        };
        let mut delta = (2.0 * scale).max(1e-7);
        for _ in 0..24 {
            let lo = hint - delta;
            let hi = hint + delta;
            let cells = 16;
            let mut best: Option<f64> = None;
            let mut prev_x = lo;
            let mut prev_f = f(lo);
            for i in 1..=cells {
                let x = lo + (hi - lo) * i as f64 / cells as f64;
                let fx = f(x);
                if prev_f.is_finite() && fx.is_finite() && (prev_f == 0.0 || prev_f.signum() != fx.signum()) {
                    if let Ok(root) = bisect_secant(f, prev_x, x, 1e-14, 1e-13) {
                        if best.map_or(true, |b: f64| (root - hint).abs() < (b - hint).abs()) {
                            best = Some(root);
                        }
                    }
                }
                prev_x = x;
                prev_f = fx;
            }
            if best.is_some() {
                return best;
            }
            delta *= 2.0;
            if delta > 0.5 {
                return None;
            }
        }
        None
    }
}

/// Multiplier of the perceived problem at revenue requirement `r`, evaluated
/// along the origin-connected branch. mu(0) = 1 exactly.
pub fn mu_of_r(econ: &Economy, r: f64) -> Result<f64> {
    MuPath::new(econ).mu_at(r)
}

/// Outcome of the lump-sum comparison at target R: commodity taxation is
/// perceived as better exactly when the integral of mu over [0, R] falls
/// short of R.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LumpSumReport {
    pub integral: f64,
    pub target: f64,
    pub commodity_preferred: bool,
    /// Whether the per-good factor g2 is monotone decreasing on t2 >= 0, the
    /// sufficient condition for lump-sum taxation to stay preferred.
    pub aperitivo_monotone: bool,
}

/// Monotone-decrease check for g2(t) = (1+t)^{(1-theta2)e2}(1 - theta2 e2
/// t/(1+t)) on t >= 0, sampled on a grid. The derivative carries the sign of
/// a - b + a(1-b) t with a = (1-theta2) e2 and b = theta2 e2.
fn aperitivo_monotone(econ: &Economy) -> bool {
    let th = econ.good2().theta();
    let e2 = econ.good2().e();
    let a = (1.0 - th) * e2;
    let b = th * e2;
    let n = 400;
    (0..=n).all(|k| {
        let t = 10.0 * k as f64 / n as f64;
        let deriv = crate::model::price_pow(t, a - 2.0) * (a - b + a * (1.0 - b) * t);
        deriv <= 1e-12
    })
}

fn lumpsum_report<F>(econ: &Economy, target: RevenueTarget, mut mu: F) -> Result<LumpSumReport>
where
    F: FnMut(f64) -> Result<f64>,
{
    let r = target.value();
    match adaptive_simpson(&mut mu, 0.0, r, QUAD_TOL) {
        Ok(integral) => Ok(LumpSumReport {
            integral,
            target: r,
            commodity_preferred: integral < r,
            aperitivo_monotone: aperitivo_monotone(econ),
        }),
        Err(Error::Infeasible { max_attainable, .. }) => {
            let reached = max_attainable * (1.0 - 1e-9);
            let partial = adaptive_simpson(&mut mu, 0.0, reached, QUAD_TOL)?;
            Err(Error::PathInfeasible { reached, partial })
        }
        Err(e) => Err(e),
    }
}

/// Integrate the multiplier along the perceived-solution path up to R and
/// compare with the lump-sum cost of the same target.
pub fn lumpsum_compare(econ: &Economy, target: RevenueTarget) -> Result<LumpSumReport> {
    let mut path = MuPath::new(econ);
    lumpsum_report(econ, target, move |r| path.mu_at(r))
}

/// Variant of [`lumpsum_compare`] that evaluates the multiplier on the
/// budget-adjusted path: at each node the perceived target is shifted until
/// the true constraint holds at requirement r.
pub fn lumpsum_compare_adjusted(econ: &Economy, target: RevenueTarget) -> Result<LumpSumReport> {
    lumpsum_report(econ, target, |r| {
        Ok(adjust_budget(econ, RevenueTarget::new(r)?)?.inner.mu)
    })
}
