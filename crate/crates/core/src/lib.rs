//! Solver toolkit for the two-good commodity-tax problem of a planner who
//! misperceives other consumers' demand elasticities.
//!
//! The crate solves the planner's perceived problem (first-order condition
//! plus a perceived budget constraint), applies the budget-adjustment rule
//! that puts the chosen taxes back on the true budget constraint, traces the
//! implicit loci that picture the solution geometry, classifies economies by
//! curve shape, and verifies the associated closed-form results numerically.
//!
//! The `parallel` feature (on by default) runs the brute-force oracle and
//! parameter sweeps on a rayon thread pool; without it every kernel falls
//! back to the sequential reference path that the benchmarks compare
//! against.

mod error;
pub mod model;
mod quad;
mod root;
pub mod solver;

pub mod adjust;
pub mod analysis;
pub mod oracle;
pub mod sweep;

pub use error::{Error, Result};
pub use model::{
    perceived_demand, perceived_revenue, true_demand, true_revenue, welfare, Economy, GoodSpec,
    PerceptionMode, RevenueTarget, TaxPair, TAX_SEARCH_MAX, TAX_SEARCH_MIN,
};
pub use solver::{
    classify_case, foc_residual, initial_slope, perceived_laffer_t2, solve_perceived,
    t1_on_foc, trace_budget_curve, trace_foc_curve, vertical_tangent_t2, Branch, BudgetKind,
    CaseLabel, CurveKind, CurveTrace, Solution, SolutionFlags, TraceEnd,
};

pub use adjust::{adjust_budget, AdjustedSolution};
pub use analysis::{
    existence_threshold, inverse_ramsey_check, lumpsum_compare, lumpsum_compare_adjusted,
    mu_of_r, small_r_approx_check, InverseRamseyReport, LumpSumReport, MuPath,
};
pub use oracle::{grid_maximize_perceived, grid_maximize_perceived_seq, GridSpec};
pub use sweep::{run_sweep, run_sweep_seq, AxisSpec, SweepCell, SweepSpec};
