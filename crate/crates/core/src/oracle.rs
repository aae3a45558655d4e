//! Brute-force verifier: exhaustive grid maximization of the welfare
//! objective subject to the perceived budget constraint. Deliberately
//! independent of the solver's reduction; used as the oracle in tests.

use serde::{Deserialize, Serialize};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{perceived_demand, Economy, RevenueTarget, TaxPair};
use crate::root::bisect_secant;

/// Rectangular search grid for the oracle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    t_min: f64,
    t_max: f64,
    n: usize,
    constraint_tol: f64,
}

impl GridSpec {
    pub fn new(t_min: f64, t_max: f64, n: usize, constraint_tol: f64) -> Result<Self> {
        if !(t_min > -1.0) {
            return Err(Error::InvalidParameter(format!("t_min must exceed -1, got {t_min}")));
        }
        if !(t_max > t_min) {
            return Err(Error::InvalidParameter(format!(
                "t_max must exceed t_min, got [{t_min}, {t_max}]"
            )));
        }
        if n < 10 {
            return Err(Error::InvalidParameter(format!("need at least 10 samples per axis, got {n}")));
        }
        if !(constraint_tol > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "constraint tolerance must be positive, got {constraint_tol}"
            )));
        }
        Ok(Self { t_min, t_max, n, constraint_tol })
    }

    pub fn t_min(&self) -> f64 {
        self.t_min
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Spacing between adjacent grid lines.
    pub fn cell(&self) -> f64 {
        (self.t_max - self.t_min) / (self.n - 1) as f64
    }

    fn value(&self, i: usize) -> f64 {
        self.t_min + self.cell() * i as f64
    }
}

impl Default for GridSpec {
    /// 2001 x 2001 over (-0.95, 10], wide enough for every figure-scale
    /// solution while finishing in seconds.
    fn default() -> Self {
        Self { t_min: -0.95, t_max: 10.0, n: 2001, constraint_tol: 1e-6 }
    }
}

struct Column {
    t1: f64,
    rev1: f64,
    w1: f64,
}

fn column_best(econ: &Economy, r: f64, grid: &GridSpec, col: &Column) -> Option<(f64, f64, f64)> {
    let good2 = econ.good2();
    let mode = econ.mode();
    let rev2 = |t2: f64| t2 * perceived_demand(t2, good2, mode).expect("grid point in domain");
    let f = |t2: f64| col.rev1 + rev2(t2) - r;

    let mut best: Option<(f64, f64, f64)> = None;
    let mut prev_t = grid.value(0);
    let mut prev_f = f(prev_t);
    for j in 1..grid.n {
        let t2 = grid.value(j);
        let ft = f(t2);
        // project onto the constraint inside this cell along t2
        let projected = if prev_f == 0.0 {
            Some(prev_t)
        } else if prev_f.signum() != ft.signum() {
            bisect_secant(f, prev_t, t2, 1e-12, 1e-12).ok()
        } else {
            None
        };
        if let Some(t2p) = projected {
            if f(t2p).abs() < grid.constraint_tol {
                let w = col.w1 + crate::model::welfare_term(t2p, good2.e());
                if best.map_or(true, |b| w > b.0) {
                    best = Some((w, col.t1, t2p));
                }
            }
        }
        prev_t = t2;
        prev_f = ft;
    }
    best
}

fn columns(econ: &Economy, grid: &GridSpec) -> Vec<Column> {
    (0..grid.n)
        .map(|i| {
            let t1 = grid.value(i);
            let rev1 = t1 * perceived_demand(t1, econ.good1(), econ.mode()).expect("grid point in domain");
            let w1 = crate::model::welfare_term(t1, econ.good1().e());
            Column { t1, rev1, w1 }
        })
        .collect()
}

fn pick_best(bests: Vec<Option<(f64, f64, f64)>>) -> Result<TaxPair> {
    let mut winner: Option<(f64, f64, f64)> = None;
    for b in bests.into_iter().flatten() {
        if winner.map_or(true, |w| b.0 > w.0) {
            winner = Some(b);
        }
    }
    winner
        .map(|(_, t1, t2)| TaxPair { t1, t2 })
        .ok_or(Error::NoFeasiblePoint)
}

/// For every grid column, project grid points onto the perceived budget
/// constraint along t2 and return the feasible point with maximal welfare.
/// Runs columns in parallel when the `parallel` feature is enabled.
pub fn grid_maximize_perceived(econ: &Economy, r: RevenueTarget, grid: &GridSpec) -> Result<TaxPair> {
    #[cfg(feature = "parallel")]
    {
        let cols = columns(econ, grid);
        let bests: Vec<_> = cols
            .par_iter()
            .map(|col| column_best(econ, r.value(), grid, col))
            .collect();
        pick_best(bests)
    }
    #[cfg(not(feature = "parallel"))]
    {
        grid_maximize_perceived_seq(econ, r, grid)
    }
}

/// Always-sequential reference path of [`grid_maximize_perceived`]; the
/// benchmark suite compares the two.
pub fn grid_maximize_perceived_seq(econ: &Economy, r: RevenueTarget, grid: &GridSpec) -> Result<TaxPair> {
    let cols = columns(econ, grid);
    let bests: Vec<_> = cols
        .iter()
        .map(|col| column_best(econ, r.value(), grid, col))
        .collect();
    pick_best(bests)
}
