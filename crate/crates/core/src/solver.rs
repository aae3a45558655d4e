//! The planner's perceived problem: evaluate the log-form first-order
//! condition, trace implicit loci in tax-rate space, solve for the tax pair
//! meeting a perceived revenue target, and classify the economy's curve
//! shape.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    perceived_revenue, true_revenue, welfare, Economy, GoodSpec, PerceptionMode, RevenueTarget,
    TaxPair, TAX_SEARCH_MAX, TAX_SEARCH_MIN,
};
use crate::root::{bisect_secant, boundary_bisect, scan_roots};

/// Residual tolerance every reported solution and traced sample must meet.
pub const RESIDUAL_TOL: f64 = 1e-8;
/// Absolute tolerance for root finding in tax rates.
pub const ROOT_TOL: f64 = 1e-10;
/// Target arc-length step between consecutive trace samples.
pub const TRACE_STEP: f64 = 1e-2;

const BOUNDARY_EPS: f64 = 1e-12;

/// Which implicit locus a trace follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    PerceivedFoc,
    PerceivedBudget,
    TrueBudget,
    TrueFoc,
}

impl CurveKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            CurveKind::PerceivedFoc => "perceived_foc",
            CurveKind::PerceivedBudget => "perceived_budget",
            CurveKind::TrueBudget => "true_budget",
            CurveKind::TrueFoc => "true_foc",
        }
    }
}

/// Why a trace stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceEnd {
    /// Reached the end of the requested parameter range.
    RangeEnd,
    /// The defining equation stopped having a solution on the search domain.
    DomainEdge,
    /// The curve became too steep to resolve at the minimum step size.
    Steep,
}

/// Ordered samples of one implicit locus in (t1, t2) space.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveTrace {
    pub kind: CurveKind,
    pub points: Vec<TaxPair>,
    pub terminal: TraceEnd,
}

/// The Appendix-style taxonomy of perceived-FOC curve shapes, determined by
/// the sign of the initial slope and the existence of a perceived Laffer
/// rate on good 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseLabel {
    Case1,
    Case2,
    Case3,
    Case4,
}

/// Which root of the one-dimensional reduced system a solution came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    OriginBranch,
    OtherBranch,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolutionFlags {
    pub inverse_ramsey: bool,
    pub subsidy_on_good1: bool,
}

/// A solved tax pair for the perceived problem, with the multiplier and
/// diagnostics evaluated at the solution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Solution {
    pub taxes: TaxPair,
    pub mu: f64,
    pub perceived_rev: f64,
    pub true_rev: f64,
    pub welfare: f64,
    pub case: Option<CaseLabel>,
    pub branch: Branch,
    pub flags: SolutionFlags,
}

/// log of g(t) = (1+t)^{(1-theta_eff) e} (1 - theta_eff e t/(1+t)), the
/// per-good factor whose equality across goods is the perceived FOC. The
/// reciprocal of g at the solution is the multiplier mu.
pub(crate) fn log_g(t: f64, good: &GoodSpec, mode: PerceptionMode) -> Result<f64> {
    if !(t > -1.0) || !t.is_finite() {
        return Err(Error::TaxOutOfDomain(t));
    }
    let th = good.effective_theta(t, mode);
    let e = good.e();
    let tau = t / (1.0 + t);
    let u = 1.0 - th * e * tau;
    if u <= 0.0 {
        return Err(Error::BeyondLaffer { t });
    }
    Ok((1.0 - th) * e * t.ln_1p() + u.ln())
}

/// Log-form residual of the perceived first-order condition at a tax pair.
/// Zero exactly on the perceived-FOC locus. Errors when either log argument
/// is non-positive, i.e. the point lies beyond a perceived Laffer rate.
pub fn foc_residual(tp: TaxPair, econ: &Economy) -> Result<f64> {
    let l1 = log_g(tp.t1, econ.good1(), econ.mode())?;
    let l2 = log_g(tp.t2, econ.good2(), econ.mode())?;
    Ok(l1 - l2)
}

/// Solve t/(1+t) = tau for t.
#[inline]
fn from_tau(tau: f64) -> f64 {
    tau / (1.0 - tau)
}

/// Good-1 tax rate on the perceived FOC at a given t2.
///
/// With theta1 = 1 (and on the subsidized branch in taxed-only mode) the
/// left side is 1 - e1 t1/(1+t1), which inverts in closed form. The general
/// theta1 < 1 case falls back to a scan for the root nearest the origin.
pub fn t1_on_foc(t2: f64, econ: &Economy) -> Result<f64> {
    let lg2 = log_g(t2, econ.good2(), econ.mode())?;
    let g = lg2.exp();
    let g1 = econ.good1();
    let e1 = g1.e();

    let closed_form = |g: f64| -> Result<f64> {
        let s = (1.0 - g) / e1;
        if s >= 1.0 {
            return Err(Error::NoSolution { t2 });
        }
        let t1 = from_tau(s);
        if !(TAX_SEARCH_MIN..=TAX_SEARCH_MAX).contains(&t1) {
            return Err(Error::NoSolution { t2 });
        }
        Ok(t1)
    };

    if g1.theta() == 1.0 {
        return closed_form(g);
    }
    if econ.mode() == PerceptionMode::TaxedOnly && g >= 1.0 {
        // the solution sits at t1 <= 0 where perception is accurate
        let t1 = closed_form(g)?;
        debug_assert!(t1 <= 0.0);
        return Ok(t1);
    }

    // general case: find the root of log g1(t) = lg2 closest to zero
    let f = |t: f64| match log_g(t, g1, econ.mode()) {
        Ok(v) => v - lg2,
        Err(_) => f64::NAN,
    };
    let roots = scan_roots(f, TAX_SEARCH_MIN, TAX_SEARCH_MAX, 2000, ROOT_TOL, 0.0, 1e-9);
    roots
        .into_iter()
        .min_by(|a, b| a.abs().partial_cmp(&b.abs()).unwrap())
        .ok_or(Error::NoSolution { t2 })
}

/// A point on the perceived-FOC curve with its perceived revenue.
pub(crate) fn foc_point(t2: f64, econ: &Economy) -> Result<(TaxPair, f64)> {
    let t1 = t1_on_foc(t2, econ)?;
    let tp = TaxPair::new(t1, t2)?;
    Ok((tp, perceived_revenue(tp, econ)?))
}

/// Maximal t2 interval containing zero on which the perceived-FOC curve is
/// defined inside the search domain.
pub(crate) fn foc_t2_interval(econ: &Economy) -> (f64, f64) {
    let ok = |t2: f64| t1_on_foc(t2, econ).is_ok();
    debug_assert!(ok(0.0));

    // scan outward from 0 to find the first failing node on each side, then
    // pin the boundary by bisection on the predicate
    let locate = |bound: f64| -> f64 {
        let n = 1024;
        let mut last_good = 0.0;
        for i in 1..=n {
            let t = bound * i as f64 / n as f64;
            if ok(t) {
                last_good = t;
            } else {
                return boundary_bisect(ok, last_good, t, 1e-13);
            }
        }
        bound
    };
    (locate(TAX_SEARCH_MIN), locate(TAX_SEARCH_MAX))
}

/// Walk a single-valued branch t2 -> t1 adaptively so consecutive samples
/// stay within the target arc-length step. `from` may exceed `to`.
fn walk_adaptive<F>(eval: F, from: f64, to: f64, points: &mut Vec<TaxPair>) -> TraceEnd
where
    F: Fn(f64) -> Result<f64>,
{
    const MIN_STEP: f64 = 1e-12;
    let dir = if to >= from { 1.0 } else { -1.0 };
    let span = (to - from).abs();
    if span == 0.0 {
        if let Ok(t1) = eval(from) {
            points.push(TaxPair { t1, t2: from });
        }
        return TraceEnd::RangeEnd;
    }
    let mut h = TRACE_STEP.min(span / 16.0).max(MIN_STEP);
    let mut cur_t2 = from;
    let mut cur_t1 = match eval(from) {
        Ok(v) => v,
        Err(_) => return TraceEnd::DomainEdge,
    };
    points.push(TaxPair { t1: cur_t1, t2: cur_t2 });

    loop {
        if (cur_t2 - to).abs() < MIN_STEP {
            return TraceEnd::RangeEnd;
        }
        let mut next = cur_t2 + dir * h;
        if (next - from).abs() >= span {
            next = to;
        }
        match eval(next) {
            Err(_) => {
                h *= 0.5;
                if h < MIN_STEP {
                    return TraceEnd::DomainEdge;
                }
            }
            Ok(t1n) => {
                let arc = (t1n - cur_t1).hypot(next - cur_t2);
                if arc > 2.0 * TRACE_STEP {
                    h *= 0.5;
                    if h < MIN_STEP {
                        return TraceEnd::Steep;
                    }
                    continue;
                }
                cur_t1 = t1n;
                cur_t2 = next;
                points.push(TaxPair { t1: cur_t1, t2: cur_t2 });
                if arc < 0.5 * TRACE_STEP {
                    h = (h * 1.5).min(0.25);
                }
            }
        }
    }
}

/// Trace the perceived-FOC locus over a t2 range. The range is clipped to
/// the curve's domain; every sample satisfies the FOC within `RESIDUAL_TOL`.
pub fn trace_foc_curve(econ: &Economy, t2_range: (f64, f64)) -> CurveTrace {
    let (ilo, ihi) = foc_t2_interval(econ);
    let a = t2_range.0.max(ilo).max(TAX_SEARCH_MIN);
    let b = t2_range.1.min(ihi).min(TAX_SEARCH_MAX);
    let mut points = Vec::new();
    let terminal = if a > b {
        TraceEnd::DomainEdge
    } else {
        let end = walk_adaptive(|t2| t1_on_foc(t2, econ), a, b, &mut points);
        if end == TraceEnd::RangeEnd && b < t2_range.1 {
            TraceEnd::DomainEdge
        } else {
            end
        }
    };
    CurveTrace { kind: CurveKind::PerceivedFoc, points, terminal }
}

/// Which revenue function defines a budget locus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BudgetKind {
    Perceived,
    True,
}

struct RevenueCurve {
    e_eff_pos: f64,
    good: GoodSpec,
    mode: PerceptionMode,
    perceived: bool,
}

impl RevenueCurve {
    fn new(good: &GoodSpec, mode: PerceptionMode, which: BudgetKind) -> Self {
        let perceived = which == BudgetKind::Perceived;
        let e_eff_pos = if perceived {
            good.perceived_elasticity(1.0, mode)
        } else {
            good.e()
        };
        Self { e_eff_pos, good: *good, mode, perceived }
    }

    fn rev(&self, t: f64) -> f64 {
        let x = if self.perceived {
            crate::model::perceived_demand(t, &self.good, self.mode)
        } else {
            crate::model::true_demand(t, &self.good)
        };
        t * x.expect("tax rate inside search domain")
    }

    /// Location of the revenue peak on the search domain.
    fn peak_t(&self) -> f64 {
        if self.e_eff_pos > 1.0 {
            (1.0 / (self.e_eff_pos - 1.0)).min(TAX_SEARCH_MAX)
        } else {
            TAX_SEARCH_MAX
        }
    }

    fn max_rev(&self) -> f64 {
        self.rev(self.peak_t())
    }

    /// Root of rev(t) = v on the rising piece (t below the peak).
    fn invert_rising(&self, v: f64) -> Result<f64> {
        bisect_secant(|t| self.rev(t) - v, TAX_SEARCH_MIN, self.peak_t(), 1e-14, 1e-11)
    }

    /// Root of rev(t) = v on the falling piece (t above the peak), if any.
    fn invert_falling(&self, v: f64) -> Result<f64> {
        bisect_secant(|t| self.rev(t) - v, self.peak_t(), TAX_SEARCH_MAX, 1e-14, 1e-11)
    }
}

/// Trace the locus { (t1, t2) : revenue(t1, t2) = R } over the search
/// domain. Revenue separates across goods, so the locus is assembled from
/// the rising and falling branches of good-1 revenue as t2 sweeps its
/// feasible window.
pub fn trace_budget_curve(econ: &Economy, target: RevenueTarget, which: BudgetKind) -> Result<CurveTrace> {
    let r = target.value();
    let c1 = RevenueCurve::new(econ.good1(), econ.mode(), which);
    let c2 = RevenueCurve::new(econ.good2(), econ.mode(), which);
    let m1 = c1.max_rev();
    let m2 = c2.max_rev();
    if r > m1 + m2 {
        return Err(Error::EmptyLocus { target: r, max: m1 + m2 });
    }

    let rev1_min = c1.rev(TAX_SEARCH_MIN);
    // t2 is admissible when R - rev2(t2) lies in the range of good-1 revenue
    let admissible = |t2: f64| {
        let v = r - c2.rev(t2);
        v <= m1 && v >= rev1_min
    };

    // locate the admissible run nearest the origin by scanning, then refine
    // its edges
    let n = 4096;
    let step = (TAX_SEARCH_MAX - TAX_SEARCH_MIN) / n as f64;
    let mut runs: Vec<(f64, f64)> = Vec::new();
    let mut run_start: Option<f64> = None;
    for i in 0..=n {
        let t = TAX_SEARCH_MIN + step * i as f64;
        if admissible(t) {
            if run_start.is_none() {
                run_start = Some(t);
            }
        } else if let Some(s) = run_start.take() {
            runs.push((s, TAX_SEARCH_MIN + step * (i - 1) as f64));
        }
    }
    if let Some(s) = run_start {
        runs.push((s, TAX_SEARCH_MAX));
    }
    let (mut w_lo, mut w_hi) = runs
        .into_iter()
        .min_by(|a, b| run_dist(*a).partial_cmp(&run_dist(*b)).unwrap())
        .ok_or(Error::EmptyLocus { target: r, max: m1 + m2 })?;
    if w_lo > TAX_SEARCH_MIN && !admissible(w_lo - step) {
        w_lo = boundary_bisect(admissible, w_lo, (w_lo - step).max(TAX_SEARCH_MIN), 1e-13);
    }
    if w_hi < TAX_SEARCH_MAX && !admissible(w_hi + step) {
        w_hi = boundary_bisect(admissible, w_hi, (w_hi + step).min(TAX_SEARCH_MAX), 1e-13);
    }

    let mut points = Vec::new();
    let lower = |t2: f64| {
        let v = r - c2.rev(t2);
        c1.invert_rising(v)
    };
    let mut terminal = walk_adaptive(&lower, w_lo, w_hi, &mut points);

    // a falling good-1 branch exists when the revenue peak is interior
    if c1.peak_t() < TAX_SEARCH_MAX {
        let rev1_max_t = c1.rev(TAX_SEARCH_MAX);
        let upper_ok = |t2: f64| admissible(t2) && (r - c2.rev(t2)) >= rev1_max_t;
        let (mut u_lo, mut u_hi) = (f64::NAN, f64::NAN);
        // the upper window is the admissible run intersected with the
        // region where good-1's falling branch can still reach v
        let m = 2048;
        for i in 0..=m {
            let t = w_lo + (w_hi - w_lo) * i as f64 / m as f64;
            if upper_ok(t) {
                if u_lo.is_nan() {
                    u_lo = t;
                }
                u_hi = t;
            }
        }
        if !u_lo.is_nan() {
            if u_lo > w_lo {
                u_lo = boundary_bisect(upper_ok, u_lo, w_lo.max(u_lo - (w_hi - w_lo) / m as f64), 1e-13);
            }
            if u_hi < w_hi {
                u_hi = boundary_bisect(upper_ok, u_hi, w_hi.min(u_hi + (w_hi - w_lo) / m as f64), 1e-13);
            }
            let upper = |t2: f64| {
                let v = r - c2.rev(t2);
                c1.invert_falling(v)
            };
            // cap point where the two branches meet, then descend
            if (r - c2.rev(u_hi) - m1).abs() < 1e-6 {
                points.push(TaxPair { t1: c1.peak_t(), t2: u_hi });
            }
            terminal = walk_adaptive(&upper, u_hi, u_lo, &mut points);
            // close the loop when the lower end is a cap as well
            if (r - c2.rev(u_lo) - m1).abs() < 1e-6 {
                if let Some(first) = points.first().copied() {
                    points.push(TaxPair { t1: c1.peak_t(), t2: u_lo });
                    points.push(first);
                }
            }
        }
    }

    let kind = match which {
        BudgetKind::Perceived => CurveKind::PerceivedBudget,
        BudgetKind::True => CurveKind::TrueBudget,
    };
    Ok(CurveTrace { kind, points, terminal })
}

fn run_dist(run: (f64, f64)) -> f64 {
    if run.0 <= 0.0 && run.1 >= 0.0 {
        0.0
    } else {
        run.0.abs().min(run.1.abs())
    }
}

/// Slope dt1/dt2 of the perceived-FOC curve at the origin:
/// 2 (e2/e1) (theta2 - 1/2).
pub fn initial_slope(econ: &Economy) -> f64 {
    let e1 = econ.good1().e();
    let e2 = econ.good2().e();
    2.0 * (e2 / e1) * (econ.good2().theta() - 0.5)
}

/// Tax rate at which the perceived-FOC curve turns vertical (an extremum of
/// t1 along the curve), when that rate is strictly positive.
pub fn vertical_tangent_t2(econ: &Economy) -> Option<f64> {
    let th = econ.good2().theta();
    let e2 = econ.good2().e();
    if th >= 1.0 {
        return None;
    }
    let denom = (1.0 - th) * (1.0 - th * e2);
    if denom == 0.0 {
        return None;
    }
    let t = 2.0 * (th - 0.5) / denom;
    (t > 0.0).then_some(t)
}

/// Peak of perceived revenue from good 2, 1/(theta2 e2 - 1), when the
/// perceived elasticity exceeds one.
pub fn perceived_laffer_t2(econ: &Economy) -> Option<f64> {
    let b = econ.good2().theta() * econ.good2().e();
    (b > 1.0).then(|| 1.0 / (b - 1.0))
}

/// Classify the economy by initial-slope sign and perceived-Laffer
/// existence. Boundary parameter values are errors, not guesses.
pub fn classify_case(econ: &Economy) -> Result<CaseLabel> {
    let th1 = econ.good1().theta();
    if (th1 - 1.0).abs() > BOUNDARY_EPS {
        return Err(Error::Unsupported { theta1: th1 });
    }
    let th = econ.good2().theta();
    let e2 = econ.good2().e();
    if (th - 0.5).abs() <= BOUNDARY_EPS {
        return Err(Error::BoundaryCase { theta2: th, which: "theta2 = 1/2" });
    }
    if (th * e2 - 1.0).abs() <= BOUNDARY_EPS {
        return Err(Error::BoundaryCase { theta2: th, which: "theta2 = 1/e2" });
    }
    Ok(match (th > 0.5, th * e2 > 1.0) {
        (true, true) => CaseLabel::Case1,
        (false, true) => CaseLabel::Case2,
        (true, false) => CaseLabel::Case3,
        (false, false) => CaseLabel::Case4,
    })
}

/// The "more elastic / misperceived" good i and its counterpart j, as
/// indices (1 or 2). The misperceived good takes priority; with accurate
/// perception on both, the higher-elasticity good is i.
pub(crate) fn focal_goods(econ: &Economy) -> (usize, usize) {
    match econ.misperceived_good() {
        Some(1) => (1, 2),
        Some(2) => (2, 1),
        _ => {
            if econ.good2().e() >= econ.good1().e() {
                (2, 1)
            } else {
                (1, 2)
            }
        }
    }
}

/// Whether a tax pair reverses the Ramsey ordering: the focal good carries
/// the larger t/(1+t).
pub(crate) fn inverse_ramsey_outcome(tp: TaxPair, econ: &Economy) -> bool {
    let (i, _) = focal_goods(econ);
    let tau1 = tp.t1 / (1.0 + tp.t1);
    let tau2 = tp.t2 / (1.0 + tp.t2);
    if i == 2 {
        tau2 > tau1
    } else {
        tau1 > tau2
    }
}

fn solution_at(t2: f64, econ: &Economy) -> Result<Solution> {
    let (taxes, rs) = foc_point(t2, econ)?;
    let mu = (-log_g(taxes.t1, econ.good1(), econ.mode())?).exp();
    Ok(Solution {
        taxes,
        mu,
        perceived_rev: rs,
        true_rev: true_revenue(taxes, econ)?,
        welfare: welfare(taxes, econ)?,
        case: classify_case(econ).ok(),
        branch: Branch::OriginBranch,
        flags: SolutionFlags {
            inverse_ramsey: inverse_ramsey_outcome(taxes, econ),
            subsidy_on_good1: taxes.t1 < 0.0,
        },
    })
}

/// Solve the perceived problem: the tax pair on the perceived-FOC curve
/// whose perceived revenue meets the target. With several candidate roots
/// (backward-bending cases) the one with the highest welfare wins; ties go
/// to the root nearest the origin.
pub fn solve_perceived(econ: &Economy, target: RevenueTarget) -> Result<Solution> {
    let r = target.value();
    let (lo, hi) = foc_t2_interval(econ);
    let f = |t2: f64| match foc_point(t2, econ) {
        Ok((_, rs)) => rs - r,
        Err(_) => f64::NAN,
    };
    let mut roots = scan_roots(f, lo, hi, 2048, 1e-12, 1e-13, 1e-9);
    if !roots.iter().any(|&q| q.abs() < 1e-9) {
        let f0 = f(0.0);
        if f0.is_finite() && f0.abs() <= 1e-12 {
            roots.push(0.0);
        }
    }
    if roots.is_empty() {
        let max_attainable = max_perceived_revenue_on_foc(econ).1;
        return Err(Error::Infeasible { target: r, max_attainable });
    }

    roots.sort_by(|a, b| a.abs().partial_cmp(&b.abs()).unwrap());
    let candidates: Vec<Solution> = roots
        .iter()
        .filter_map(|&t2| solution_at(t2, econ).ok())
        .collect();
    if candidates.is_empty() {
        let max_attainable = max_perceived_revenue_on_foc(econ).1;
        return Err(Error::Infeasible { target: r, max_attainable });
    }
    let mut best = 0usize;
    for idx in 1..candidates.len() {
        if candidates[idx].welfare > candidates[best].welfare + 1e-12 {
            best = idx;
        }
    }
    let mut sol = candidates[best];
    sol.branch = if best == 0 { Branch::OriginBranch } else { Branch::OtherBranch };

    let resid = foc_residual(sol.taxes, econ)?;
    if resid.abs() > RESIDUAL_TOL || (sol.perceived_rev - r).abs() > RESIDUAL_TOL || sol.mu <= 0.0 {
        return Err(Error::NoConvergence("perceived solution failed residual checks"));
    }
    Ok(sol)
}

/// Scan the perceived-FOC curve for its revenue maximum. Returns (t2 at the
/// maximum, maximum perceived revenue).
pub(crate) fn max_perceived_revenue_on_foc(econ: &Economy) -> (f64, f64) {
    let (lo, hi) = foc_t2_interval(econ);
    let n = 2048;
    let mut best = (0.0, f64::NEG_INFINITY);
    for i in 0..=n {
        let t2 = lo + (hi - lo) * i as f64 / n as f64;
        if let Ok((_, rs)) = foc_point(t2, econ) {
            if rs > best.1 {
                best = (t2, rs);
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Economy;

    fn fig1() -> Economy {
        Economy::baseline(0.6, 2.5, 0.55).unwrap()
    }

    fn fig2() -> Economy {
        Economy::baseline(0.6, 4.0, 0.45).unwrap()
    }

    #[test]
    fn foc_residual_zero_at_origin() {
        let tp = TaxPair::new(0.0, 0.0).unwrap();
        assert_eq!(foc_residual(tp, &fig1()).unwrap(), 0.0);
    }

    #[test]
    fn foc_residual_theta_one_reduces_to_ramsey_identity() {
        // with theta2 = 1 the condition F = 0 is e1 t1/(1+t1) = e2 t2/(1+t2)
        let econ = Economy::baseline(0.6, 2.5, 1.0).unwrap();
        let t2 = 0.1;
        let t1 = t1_on_foc(t2, &econ).unwrap();
        assert!((t1 - 0.6097560975609756).abs() < 1e-12);
        let lhs = 0.6 * t1 / (1.0 + t1);
        let rhs = 2.5 * t2 / (1.0 + t2);
        assert!((lhs - rhs).abs() < 1e-14);
    }

    #[test]
    fn foc_residual_errors_beyond_laffer() {
        // fig1 perceived Laffer on good 2 sits at 1/0.375
        let tp = TaxPair::new(0.1, 3.0).unwrap();
        assert!(matches!(
            foc_residual(tp, &fig1()),
            Err(Error::BeyondLaffer { .. })
        ));
    }

    #[test]
    fn t1_on_foc_zero_maps_to_zero() {
        assert_eq!(t1_on_foc(0.0, &fig1()).unwrap(), 0.0);
    }

    #[test]
    fn t1_on_foc_goes_negative_for_fig2_mid_range() {
        let t1 = t1_on_foc(0.3, &fig2()).unwrap();
        assert!(t1 < 0.0, "expected subsidy branch, got {t1}");
    }

    #[test]
    fn trace_starts_at_origin_and_meets_residual() {
        let trace = trace_foc_curve(&fig1(), (0.0, 1.0));
        let first = trace.points[0];
        assert_eq!(first.t1, 0.0);
        assert_eq!(first.t2, 0.0);
        for p in &trace.points {
            assert!(foc_residual(*p, &fig1()).unwrap().abs() < RESIDUAL_TOL);
        }
        assert_eq!(trace.terminal, TraceEnd::RangeEnd);
    }

    #[test]
    fn trace_slope_at_origin_matches_closed_form() {
        let econ = fig1();
        let trace = trace_foc_curve(&econ, (0.0, 1e-5));
        let last = *trace.points.last().unwrap();
        let fd = last.t1 / last.t2;
        assert!((fd - initial_slope(&econ)).abs() < 1e-4);
    }

    #[test]
    fn fig2_trace_bends_backward() {
        // t1 along the curve is non-monotone in t2
        let trace = trace_foc_curve(&fig2(), (0.0, 1.0));
        let min_t1 = trace.points.iter().map(|p| p.t1).fold(f64::INFINITY, f64::min);
        let last = trace.points.last().unwrap();
        assert!(min_t1 < 0.0);
        assert!(last.t1 > min_t1);
    }

    #[test]
    fn initial_slope_examples() {
        assert_eq!(initial_slope(&Economy::baseline(1.0, 2.0, 0.5).unwrap()), 0.0);
        assert!((initial_slope(&fig1()) - 0.4166666666666667).abs() < 1e-12);
        assert!(initial_slope(&Economy::baseline(0.8, 1.9, 0.45).unwrap()) < 0.0);
    }

    #[test]
    fn vertical_tangent_examples() {
        assert!((vertical_tangent_t2(&fig2()).unwrap() - 0.22727272727272727).abs() < 1e-12);
        assert_eq!(vertical_tangent_t2(&fig1()), None);
        assert_eq!(vertical_tangent_t2(&Economy::baseline(1.0, 2.0, 0.5).unwrap()), None);
    }

    #[test]
    fn perceived_laffer_examples() {
        assert!((perceived_laffer_t2(&fig1()).unwrap() - 2.6666666666666665).abs() < 1e-12);
        assert_eq!(perceived_laffer_t2(&Economy::baseline(0.2, 1.1, 0.53).unwrap()), None);
        // boundary theta2 e2 = 1 exactly
        assert_eq!(perceived_laffer_t2(&Economy::baseline(0.6, 2.0, 0.5).unwrap()), None);
    }

    #[test]
    fn classify_the_four_figures() {
        assert_eq!(classify_case(&fig1()).unwrap(), CaseLabel::Case1);
        assert_eq!(classify_case(&fig2()).unwrap(), CaseLabel::Case2);
        assert_eq!(
            classify_case(&Economy::baseline(0.2, 1.1, 0.53).unwrap()).unwrap(),
            CaseLabel::Case3
        );
        assert_eq!(
            classify_case(&Economy::baseline(0.8, 1.9, 0.45).unwrap()).unwrap(),
            CaseLabel::Case4
        );
    }

    #[test]
    fn classify_boundaries_error() {
        assert!(matches!(
            classify_case(&Economy::baseline(0.6, 2.5, 0.5).unwrap()),
            Err(Error::BoundaryCase { .. })
        ));
        assert!(matches!(
            classify_case(&Economy::baseline(0.6, 2.0, 0.5).unwrap()),
            Err(Error::BoundaryCase { .. })
        ));
        let econ = Economy::new(
            GoodSpec::new(0.6, 0.9).unwrap(),
            GoodSpec::new(2.5, 0.55).unwrap(),
            PerceptionMode::TaxedOnly,
        );
        assert!(matches!(classify_case(&econ), Err(Error::Unsupported { .. })));
    }

    #[test]
    fn solve_fig1_is_inverse_ramsey() {
        let sol = solve_perceived(&fig1(), RevenueTarget::new(0.5).unwrap()).unwrap();
        assert!(sol.taxes.t2 > sol.taxes.t1);
        assert!(sol.taxes.t1 > 0.0);
        assert!(sol.flags.inverse_ramsey);
        assert!(foc_residual(sol.taxes, &fig1()).unwrap().abs() < RESIDUAL_TOL);
        assert!((sol.perceived_rev - 0.5).abs() < RESIDUAL_TOL);
        assert!(sol.mu > 0.0);
    }

    #[test]
    fn solve_fig2_subsidizes_good1() {
        let sol = solve_perceived(&fig2(), RevenueTarget::new(0.2).unwrap()).unwrap();
        assert!(sol.taxes.t1 < 0.0);
        assert!(sol.flags.subsidy_on_good1);
    }

    #[test]
    fn solve_infeasible_reports_maximum() {
        let err = solve_perceived(&fig1(), RevenueTarget::new(50.0).unwrap()).unwrap_err();
        match err {
            Error::Infeasible { target, max_attainable } => {
                assert_eq!(target, 50.0);
                assert!(max_attainable > 0.0 && max_attainable < 50.0);
            }
            other => panic!("expected Infeasible, got {other:?}"),
        }
    }

    #[test]
    fn budget_trace_r0_passes_origin() {
        let econ = fig1();
        let trace = trace_budget_curve(&econ, RevenueTarget::new(0.0).unwrap(), BudgetKind::Perceived).unwrap();
        // the locus runs through (0,0); the trace straddles it within a step
        let near_origin = trace
            .points
            .iter()
            .map(|p| p.t1.hypot(p.t2))
            .fold(f64::INFINITY, f64::min);
        assert!(near_origin < 2.0 * TRACE_STEP, "closest approach {near_origin}");
        assert!(trace.points.iter().any(|p| p.t2 < 0.0));
        assert!(trace.points.iter().any(|p| p.t2 > 0.0));
    }

    #[test]
    fn budget_trace_residuals_hold() {
        let econ = fig1();
        let target = RevenueTarget::new(0.5).unwrap();
        for (which, kind) in [
            (BudgetKind::Perceived, CurveKind::PerceivedBudget),
            (BudgetKind::True, CurveKind::TrueBudget),
        ] {
            let trace = trace_budget_curve(&econ, target, which).unwrap();
            assert_eq!(trace.kind, kind);
            assert!(trace.points.len() > 10);
            for p in &trace.points {
                let rev = match which {
                    BudgetKind::Perceived => perceived_revenue(*p, &econ).unwrap(),
                    BudgetKind::True => true_revenue(*p, &econ).unwrap(),
                };
                assert!((rev - 0.5).abs() < RESIDUAL_TOL, "residual {} at {:?}", rev - 0.5, p);
            }
        }
    }

    #[test]
    fn budget_traces_coincide_when_theta_is_one() {
        let econ = Economy::baseline(0.6, 2.5, 1.0).unwrap();
        let target = RevenueTarget::new(0.3).unwrap();
        let perc = trace_budget_curve(&econ, target, BudgetKind::Perceived).unwrap();
        // pointwise: every perceived sample satisfies the true constraint too
        for p in &perc.points {
            assert!((true_revenue(*p, &econ).unwrap() - 0.3).abs() < RESIDUAL_TOL);
        }
    }

    #[test]
    fn budget_trace_empty_locus() {
        let econ = Economy::baseline(3.0, 2.0, 1.0).unwrap();
        // both goods strongly elastic: achievable revenue is small
        let err = trace_budget_curve(&econ, RevenueTarget::new(10.0).unwrap(), BudgetKind::True).unwrap_err();
        assert!(matches!(err, Error::EmptyLocus { .. }));
    }

    #[test]
    fn budget_trace_closed_loop_when_good1_elastic() {
        // interior good-1 Laffer peak: the locus has rising and falling
        // branches that join at caps
        let econ = Economy::baseline(3.0, 2.0, 1.0).unwrap();
        let trace = trace_budget_curve(&econ, RevenueTarget::new(0.3).unwrap(), BudgetKind::True).unwrap();
        let first = trace.points.first().unwrap();
        let last = trace.points.last().unwrap();
        let gap = (first.t1 - last.t1).hypot(first.t2 - last.t2);
        assert!(gap < 1e-6, "loop should close, gap {gap}");
        for p in &trace.points {
            assert!((true_revenue(*p, &econ).unwrap() - 0.3).abs() < RESIDUAL_TOL);
        }
    }
}
