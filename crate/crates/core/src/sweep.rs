//! Parameter sweeps over the misperception factor and the good-2 elasticity,
//! emitting case and inverse-Ramsey diagnostics per cell. Cells are
//! independent; the grid runs on the rayon pool when the `parallel` feature
//! is enabled.

use serde::Serialize;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{Economy, GoodSpec, RevenueTarget};
use crate::solver::{classify_case, initial_slope, perceived_laffer_t2, solve_perceived, CaseLabel};

/// Inclusive uniform axis with `n` samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AxisSpec {
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

impl AxisSpec {
    pub fn new(min: f64, max: f64, n: usize) -> Result<Self> {
        if !(max >= min) || n < 1 {
            return Err(Error::InvalidParameter(format!(
                "axis needs max >= min and n >= 1, got [{min}, {max}] with n = {n}"
            )));
        }
        Ok(Self { min, max, n })
    }

    pub fn values(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.min];
        }
        (0..self.n)
            .map(|i| self.min + (self.max - self.min) * i as f64 / (self.n - 1) as f64)
            .collect()
    }
}

/// Full sweep description: the fixed good-1 spec plus the two axes and the
/// revenue target applied in every cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub good1: GoodSpec,
    pub mode: crate::model::PerceptionMode,
    pub revenue: RevenueTarget,
    pub theta2: AxisSpec,
    pub e2: AxisSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Ok,
    Infeasible,
    Error,
}

impl SolveStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            SolveStatus::Ok => "ok",
            SolveStatus::Infeasible => "infeasible",
            SolveStatus::Error => "error",
        }
    }
}

/// One sweep cell: taxonomy diagnostics plus the solved inverse-Ramsey flag.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepCell {
    pub theta2: f64,
    pub e2: f64,
    pub case: Option<CaseLabel>,
    pub boundary: bool,
    pub initial_slope: f64,
    pub perceived_laffer_t2: Option<f64>,
    pub inverse_ramsey: Option<bool>,
    pub solve_status: SolveStatus,
}

fn eval_cell(spec: &SweepSpec, theta2: f64, e2: f64) -> Result<SweepCell> {
    let good2 = GoodSpec::new(e2, theta2)?;
    let econ = Economy::new(spec.good1, good2, spec.mode);
    let (case, boundary) = match classify_case(&econ) {
        Ok(c) => (Some(c), false),
        Err(Error::BoundaryCase { .. }) => (None, true),
        Err(_) => (None, false),
    };
    let (inverse_ramsey, solve_status) = match solve_perceived(&econ, spec.revenue) {
        Ok(sol) => (Some(sol.flags.inverse_ramsey), SolveStatus::Ok),
        Err(Error::Infeasible { .. }) => (None, SolveStatus::Infeasible),
        Err(_) => (None, SolveStatus::Error),
    };
    Ok(SweepCell {
        theta2,
        e2,
        case,
        boundary,
        initial_slope: initial_slope(&econ),
        perceived_laffer_t2: perceived_laffer_t2(&econ),
        inverse_ramsey,
        solve_status,
    })
}

fn cell_params(spec: &SweepSpec) -> Result<Vec<(f64, f64)>> {
    for theta in [spec.theta2.min, spec.theta2.max] {
        if !(theta > 0.0 && theta <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "theta2 axis must stay in (0, 1], got {theta}"
            )));
        }
    }
    for e in [spec.e2.min, spec.e2.max] {
        if !(e > 0.0) {
            return Err(Error::InvalidParameter(format!("e2 axis must stay positive, got {e}")));
        }
    }
    let thetas = spec.theta2.values();
    let es = spec.e2.values();
    let mut cells = Vec::with_capacity(thetas.len() * es.len());
    for &theta in &thetas {
        for &e2 in &es {
            cells.push((theta, e2));
        }
    }
    Ok(cells)
}

/// Run the sweep; cell order in the result is row-major over (theta2, e2)
/// regardless of how the work is scheduled.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepCell>> {
    #[cfg(feature = "parallel")]
    {
        let cells = cell_params(spec)?;
        cells
            .par_iter()
            .map(|&(theta2, e2)| eval_cell(spec, theta2, e2))
            .collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        run_sweep_seq(spec)
    }
}

/// Always-sequential reference path of [`run_sweep`].
pub fn run_sweep_seq(spec: &SweepSpec) -> Result<Vec<SweepCell>> {
    let cells = cell_params(spec)?;
    cells
        .iter()
        .map(|&(theta2, e2)| eval_cell(spec, theta2, e2))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::PerceptionMode;

    fn spec() -> SweepSpec {
        SweepSpec {
            good1: GoodSpec::new(0.6, 1.0).unwrap(),
            mode: PerceptionMode::TaxedOnly,
            revenue: RevenueTarget::new(0.2).unwrap(),
            theta2: AxisSpec::new(0.3, 0.9, 4).unwrap(),
            e2: AxisSpec::new(1.5, 4.0, 3).unwrap(),
        }
    }

    #[test]
    fn sweep_is_row_major_and_deterministic() {
        let a = run_sweep(&spec()).unwrap();
        let b = run_sweep_seq(&spec()).unwrap();
        assert_eq!(a.len(), 12);
        assert_eq!(a, b);
        // first row fixes theta2 at the axis minimum
        assert!(a[..3].iter().all(|c| c.theta2 == 0.3));
        assert_eq!(a[1].e2, 2.75);
    }

    #[test]
    fn boundary_cells_are_flagged_not_classified() {
        let mut s = spec();
        s.theta2 = AxisSpec::new(0.5, 0.5, 1).unwrap();
        s.e2 = AxisSpec::new(2.5, 2.5, 1).unwrap();
        let cells = run_sweep(&s).unwrap();
        assert_eq!(cells.len(), 1);
        assert!(cells[0].boundary);
        assert_eq!(cells[0].case, None);
    }

    #[test]
    fn bad_axis_is_rejected() {
        let mut s = spec();
        s.theta2 = AxisSpec::new(0.0, 0.9, 3).unwrap();
        assert!(run_sweep(&s).is_err());
    }
}
