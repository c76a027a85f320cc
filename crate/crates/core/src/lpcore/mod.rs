//! Linear programs: a sparse model type and a simplex solver for it.
//!
//! Every optimization path in the crate (relaxations, reduced LPs, branch
//! and bound nodes, flow-only re-evaluations) goes through [`solve_lp`] or
//! [`solve_with`].

mod lpformat;
mod lu;
mod model;
mod simplex;

use std::time::Duration;

use thiserror::Error;

pub use lpformat::write_lp;
pub use model::{fix_variable, Constraint, LpModel, Relation, RowId, VarId, Variable};
pub use simplex::{solve_with, SolveOptions, FEAS_TOL};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LpError {
    #[error("duplicate variable name `{0}`")]
    DuplicateName(String),
    #[error("unknown variable `{0}`")]
    UnknownName(String),
    #[error("column index {0} out of range")]
    UnknownColumn(usize),
    #[error("invalid bounds [{lower}, {upper}] for `{name}`")]
    InvalidBounds { name: String, lower: f64, upper: f64 },
    #[error("cannot fix `{name}` to {value}: outside [{lower}, {upper}]")]
    FixOutOfBounds { name: String, value: f64, lower: f64, upper: f64 },
    #[error("non-finite value in {0}")]
    NonFinite(String),
    #[error("simplex iteration limit ({0}) reached")]
    IterationLimit(usize),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarStatus {
    Basic,
    AtLower,
    AtUpper,
    Free,
}

/// Final basis of a solve, over structural columns followed by one logical
/// per non-empty row. Feed it back through [`SolveOptions::warm_start`].
#[derive(Debug, Clone, PartialEq)]
pub struct Basis {
    pub status: Vec<VarStatus>,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Objective value; NaN unless `status` is optimal.
    pub objective: f64,
    /// Primal values in column order.
    pub values: Vec<f64>,
    pub iterations: usize,
    pub wall_time: Duration,
    pub basis: Option<Basis>,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }

    pub fn value(&self, id: VarId) -> f64 {
        self.values[id.0]
    }
}

/// Solves `model` from the all-logical start basis.
pub fn solve_lp(model: &LpModel) -> Result<LpSolution, LpError> {
    solve_with(model, &SolveOptions::default())
}
