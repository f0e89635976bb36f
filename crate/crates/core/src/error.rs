use thiserror::Error;

/// Errors raised by the core routines.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum Error {
    #[error("argument outside the function domain: {0}")]
    Domain(&'static str),
    #[error("invalid parameters: {0}")]
    InvalidParams(&'static str),
    #[error("solver did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("converged shape lies outside the admissible family")]
    OutOfFamily,
    #[error("endpoint farther than the cable length")]
    Unreachable,
    #[error("no fold point exists for k <= 1/sqrt(2)")]
    NoFoldPoint,
    #[error("bisection interval does not bracket a root")]
    BracketFailure,
    #[error("consecutive control-point tangents are parallel")]
    DegenerateTangents,
    #[error("point outside the grid extent")]
    OutOfBounds,
    #[error("grid cell holds no feasible shape")]
    EmptyCell,
    #[error("start configuration is infeasible")]
    InfeasibleStart,
    #[error("target configuration is infeasible")]
    InfeasibleTarget,
    #[error("no path between start and target")]
    NoPath,
    #[error("expansion budget exhausted")]
    BudgetExhausted,
    #[error("visibility graph does not connect the endpoints")]
    NoEndpointPath,
}

pub type Result<T> = core::result::Result<T, Error>;
