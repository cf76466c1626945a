//! Numerical checks of the binomial estimates and of the fixed-point table
//! behind the interval-disjointness argument.

mod appendix;
mod binomial;
mod quadrature;

pub use appendix::{
    appendix_table_check, r0, solve_f, solve_f_with_tol, AppendixReport, AppendixRow, ChainLink,
    FixedPointSolution, Printed, SOLVE_F_MAX_R,
};
pub use binomial::{
    binomial_estimate_check, default_grid, EstimateReport, EstimateRow, ASSERT_FROM_N,
    ESTIMATE_MAX_N, EXACT_MAX_N,
};
pub use quadrature::integrate;
