//! Parametric two-good economy: constant-elasticity demand, the perceived
//! demand of a planner who misjudges other consumers' elasticities, revenue,
//! and the quasilinear welfare objective.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Lower edge of the tax-rate domain used by every search and trace.
pub const TAX_SEARCH_MIN: f64 = -0.99;
/// Upper edge of the tax-rate domain used by every search and trace.
pub const TAX_SEARCH_MAX: f64 = 100.0;

/// One good's true own-price elasticity together with the misperception
/// factor applied to it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GoodSpec {
    e: f64,
    theta: f64,
}

impl GoodSpec {
    /// `e` must be positive and `theta` must lie in (0, 1].
    pub fn new(e: f64, theta: f64) -> Result<Self> {
        if !(e > 0.0) || !e.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "elasticity must be positive and finite, got {e}"
            )));
        }
        if !(theta > 0.0 && theta <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "theta must lie in (0, 1], got {theta}"
            )));
        }
        Ok(Self { e, theta })
    }

    pub fn e(&self) -> f64 {
        self.e
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Misperception factor in force at tax rate `t`: below (and at) zero a
    /// taxed-only perceiver sees the true elasticity, a symmetric one keeps
    /// the bias on subsidies as well.
    pub fn effective_theta(&self, t: f64, mode: PerceptionMode) -> f64 {
        match mode {
            PerceptionMode::Symmetric => self.theta,
            PerceptionMode::TaxedOnly => {
                if t > 0.0 {
                    self.theta
                } else {
                    1.0
                }
            }
        }
    }

    /// Perceived own-price elasticity at tax rate `t`.
    pub fn perceived_elasticity(&self, t: f64, mode: PerceptionMode) -> f64 {
        self.effective_theta(t, mode) * self.e
    }
}

/// Where the elasticity bias applies: only to taxed goods (the baseline) or
/// symmetrically to taxed and subsidized goods.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PerceptionMode {
    TaxedOnly,
    Symmetric,
}

/// A two-good economy with a perception mode. All evaluation of demand,
/// revenue, and welfare goes through this type.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Economy {
    good1: GoodSpec,
    good2: GoodSpec,
    mode: PerceptionMode,
}

impl Economy {
    pub fn new(good1: GoodSpec, good2: GoodSpec, mode: PerceptionMode) -> Self {
        Self { good1, good2, mode }
    }

    /// Baseline layout: good 1 correctly perceived, good 2 misperceived.
    pub fn baseline(e1: f64, e2: f64, theta2: f64) -> Result<Self> {
        Ok(Self::new(
            GoodSpec::new(e1, 1.0)?,
            GoodSpec::new(e2, theta2)?,
            PerceptionMode::TaxedOnly,
        ))
    }

    pub fn good1(&self) -> &GoodSpec {
        &self.good1
    }

    pub fn good2(&self) -> &GoodSpec {
        &self.good2
    }

    pub fn mode(&self) -> PerceptionMode {
        self.mode
    }

    /// The same economy with all misperception removed (theta = 1 on both
    /// goods). Used for true-FOC traces and Ramsey-limit comparisons.
    pub fn perfect_perception(&self) -> Economy {
        Economy {
            good1: GoodSpec { e: self.good1.e, theta: 1.0 },
            good2: GoodSpec { e: self.good2.e, theta: 1.0 },
            mode: self.mode,
        }
    }

    /// Index (1 or 2) of the single misperceived good, if exactly one good
    /// has theta < 1.
    pub fn misperceived_good(&self) -> Option<usize> {
        match (self.good1.theta < 1.0, self.good2.theta < 1.0) {
            (false, true) => Some(2),
            (true, false) => Some(1),
            _ => None,
        }
    }
}

/// A point (t1, t2) in tax-rate space; consumer prices are 1 + t_i.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TaxPair {
    pub t1: f64,
    pub t2: f64,
}

impl TaxPair {
    /// Both rates must exceed -1 so consumer prices stay positive.
    pub fn new(t1: f64, t2: f64) -> Result<Self> {
        for t in [t1, t2] {
            if !(t > -1.0) || !t.is_finite() {
                return Err(Error::TaxOutOfDomain(t));
            }
        }
        Ok(Self { t1, t2 })
    }
}

/// An exogenous revenue requirement, R >= 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RevenueTarget(f64);

impl RevenueTarget {
    pub fn new(r: f64) -> Result<Self> {
        if !(r >= 0.0) || !r.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "revenue target must be non-negative and finite, got {r}"
            )));
        }
        Ok(Self(r))
    }

    pub fn value(&self) -> f64 {
        self.0
    }
}

fn check_tax(t: f64) -> Result<()> {
    if t > -1.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::TaxOutOfDomain(t))
    }
}

/// (1 + t)^p evaluated through exp/log so extreme subsidies near t = -1 stay
/// accurate. `ln_1p` keeps precision for small |t|.
#[inline]
pub(crate) fn price_pow(t: f64, p: f64) -> f64 {
    (p * t.ln_1p()).exp()
}

/// True demand x*(t) = (1 + t)^{-e}.
pub fn true_demand(t: f64, good: &GoodSpec) -> Result<f64> {
    check_tax(t)?;
    Ok(price_pow(t, -good.e))
}

/// Perceived demand of others, (1 + t)^{-theta_eff * e}. Continuous at t = 0
/// in both modes because the demand value there does not depend on theta.
pub fn perceived_demand(t: f64, good: &GoodSpec, mode: PerceptionMode) -> Result<f64> {
    check_tax(t)?;
    Ok(price_pow(t, -good.perceived_elasticity(t, mode)))
}

/// Revenue the planner believes the pair raises: sum of t_i times perceived
/// demand.
pub fn perceived_revenue(tp: TaxPair, econ: &Economy) -> Result<f64> {
    let x1 = perceived_demand(tp.t1, &econ.good1, econ.mode)?;
    let x2 = perceived_demand(tp.t2, &econ.good2, econ.mode)?;
    Ok(tp.t1 * x1 + tp.t2 * x2)
}

/// Revenue actually raised: sum of t_i times true demand.
pub fn true_revenue(tp: TaxPair, econ: &Economy) -> Result<f64> {
    let x1 = true_demand(tp.t1, &econ.good1)?;
    let x2 = true_demand(tp.t2, &econ.good2)?;
    Ok(tp.t1 * x1 + tp.t2 * x2)
}

/// One good's contribution to indirect utility, normalized to 0 at t = 0.
///
/// -((1+t)^{1-e} - 1)/(1-e), with the removable singularity at e = 1 filled
/// by -log(1+t). `exp_m1` keeps the expression stable arbitrarily close to
/// e = 1, so only the exact point needs the logarithmic branch.
pub(crate) fn welfare_term(t: f64, e: f64) -> f64 {
    if e == 1.0 {
        -t.ln_1p()
    } else {
        -((1.0 - e) * t.ln_1p()).exp_m1() / (1.0 - e)
    }
}

/// The planner's objective: the representative agent's indirect utility as a
/// function of the tax pair. Its partial derivative in t_i is minus the true
/// demand for good i (Roy's identity in this quasilinear family).
pub fn welfare(tp: TaxPair, econ: &Economy) -> Result<f64> {
    check_tax(tp.t1)?;
    check_tax(tp.t2)?;
    Ok(welfare_term(tp.t1, econ.good1.e) + welfare_term(tp.t2, econ.good2.e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn good(e: f64, theta: f64) -> GoodSpec {
        GoodSpec::new(e, theta).unwrap()
    }

    #[test]
    fn good_spec_rejects_bad_parameters() {
        assert!(GoodSpec::new(0.0, 0.5).is_err());
        assert!(GoodSpec::new(-1.0, 0.5).is_err());
        assert!(GoodSpec::new(1.0, 0.0).is_err());
        assert!(GoodSpec::new(1.0, 1.5).is_err());
        assert!(GoodSpec::new(2.5, 1.0).is_ok());
    }

    #[test]
    fn tax_pair_domain() {
        assert!(TaxPair::new(-1.0, 0.0).is_err());
        assert!(TaxPair::new(0.0, -1.2).is_err());
        assert!(TaxPair::new(-0.999, 50.0).is_ok());
    }

    #[test]
    fn true_demand_examples() {
        let g = good(2.5, 1.0);
        assert_eq!(true_demand(0.0, &g).unwrap(), 1.0);
        assert_eq!(true_demand(1.0, &good(1.0, 1.0)).unwrap(), 0.5);
        // 1.5^{-2.5}
        assert!((true_demand(0.5, &g).unwrap() - 0.36288736930121157).abs() < 1e-15);
        assert!(matches!(
            true_demand(-1.0, &g),
            Err(Error::TaxOutOfDomain(_))
        ));
    }

    #[test]
    fn perceived_demand_branches() {
        let g = good(2.5, 0.55);
        // taxed branch uses theta*e = 1.375
        let taxed = perceived_demand(0.5, &g, PerceptionMode::TaxedOnly).unwrap();
        assert!((taxed - price_pow(0.5, -1.375)).abs() < 1e-15);
        assert!((taxed - 0.5726305562797714).abs() < 1e-12);
        // subsidized branch falls back to the true elasticity
        let sub = perceived_demand(-0.2, &g, PerceptionMode::TaxedOnly).unwrap();
        assert!((sub - true_demand(-0.2, &g).unwrap()).abs() < 1e-15);
        // symmetric mode keeps the bias below zero
        let sym = perceived_demand(-0.2, &g, PerceptionMode::Symmetric).unwrap();
        assert!((sym - price_pow(-0.2, -1.375)).abs() < 1e-15);
        // theta = 1 means no misperception anywhere
        let honest = good(2.5, 1.0);
        for mode in [PerceptionMode::TaxedOnly, PerceptionMode::Symmetric] {
            assert_eq!(
                perceived_demand(0.5, &honest, mode).unwrap(),
                true_demand(0.5, &honest).unwrap()
            );
        }
    }

    #[test]
    fn perceived_revenue_examples() {
        let econ = Economy::baseline(0.6, 2.5, 0.55).unwrap();
        let zero = TaxPair::new(0.0, 0.0).unwrap();
        assert_eq!(perceived_revenue(zero, &econ).unwrap(), 0.0);
        // only good 1 taxed, good 1 correctly perceived: 0.5 * 1.5^{-0.6}
        let tp = TaxPair::new(0.5, 0.0).unwrap();
        let r = perceived_revenue(tp, &econ).unwrap();
        assert!((r - 0.39202634084155785).abs() < 1e-12);
    }

    #[test]
    fn theta_one_makes_revenues_agree() {
        let econ = Economy::baseline(0.6, 2.5, 1.0).unwrap();
        for (t1, t2) in [(0.3, 0.7), (-0.4, 2.0), (1.5, -0.1)] {
            let tp = TaxPair::new(t1, t2).unwrap();
            assert_eq!(
                perceived_revenue(tp, &econ).unwrap(),
                true_revenue(tp, &econ).unwrap()
            );
        }
    }

    #[test]
    fn welfare_roys_identity_and_monotonicity() {
        let econ = Economy::baseline(0.6, 2.5, 0.55).unwrap();
        let h = 1e-6;
        let tp_hi = TaxPair::new(0.3 + h, 0.1).unwrap();
        let tp_lo = TaxPair::new(0.3 - h, 0.1).unwrap();
        let fd = (welfare(tp_hi, &econ).unwrap() - welfare(tp_lo, &econ).unwrap()) / (2.0 * h);
        let x1 = true_demand(0.3, econ.good1()).unwrap();
        assert!((fd + x1).abs() < 1e-6);
        assert!(fd < 0.0);
    }

    #[test]
    fn welfare_unit_elasticity_limit() {
        // the power formula within 1e-6 of e = 1 must agree with -log(1+t)
        for t in [0.2, 1.0, 5.0] {
            let exact = welfare_term(t, 1.0);
            for e in [1.0 - 1e-6, 1.0 + 1e-6] {
                assert!((welfare_term(t, e) - exact).abs() < 1e-4);
            }
            assert!((exact + t.ln_1p()).abs() < 1e-15);
        }
    }
}
