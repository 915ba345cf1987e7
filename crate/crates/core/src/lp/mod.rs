//! Linear programming substrate backed by the HiGHS solver.
//!
//! Programs are maximization problems with sparse rows. Every optimal answer
//! returned by [`solve`] has been re-checked against the original rows, so
//! callers never see a point violating a constraint by more than
//! [`TAU_FEAS`] (relative to the row's magnitude).

mod game;

use std::num::NonZeroU32;
use std::ops::Bound;

use highs::{HighsModelStatus, RowProblem, Sense};
use thiserror::Error;

pub use game::solve_matrix_game;

/// Feasibility tolerance for constraint satisfaction.
pub const TAU_FEAS: f64 = 1e-9;
/// Tolerance for comparing objective values.
pub const TAU_VAL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LpError {
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
    #[error("malformed program: {0}")]
    Malformed(String),
    #[error("payoff matrix is not skew-symmetric")]
    NotSkewSymmetric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LowerBound {
    Value(f64),
    Unbounded,
}

/// Index of a variable inside a [`LinearProgram`].
pub type Var = usize;

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub terms: Vec<(Var, f64)>,
    pub relation: Relation,
    pub rhs: f64,
}

/// `maximize cᵀx` subject to sparse linear rows and per-variable lower bounds.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LinearProgram {
    objective: Vec<f64>,
    lower: Vec<LowerBound>,
    constraints: Vec<Constraint>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { value: f64, x: Vec<f64> },
    Unbounded,
    Infeasible,
}

impl LpOutcome {
    pub fn value(&self) -> Option<f64> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(*value),
            _ => None,
        }
    }
}

impl LinearProgram {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a variable with objective coefficient `cost`.
    pub fn add_var(&mut self, cost: f64, lower: LowerBound) -> Var {
        self.objective.push(cost);
        self.lower.push(lower);
        self.objective.len() - 1
    }

    pub fn set_cost(&mut self, var: Var, cost: f64) {
        self.objective[var] = cost;
    }

    /// Adds `Σ terms (relation) rhs`. Repeated variables are summed.
    pub fn add_constraint(&mut self, terms: &[(Var, f64)], relation: Relation, rhs: f64) {
        let mut merged: Vec<(Var, f64)> = Vec::with_capacity(terms.len());
        for &(v, c) in terms {
            match merged.iter_mut().find(|(w, _)| *w == v) {
                Some(entry) => entry.1 += c,
                None => merged.push((v, c)),
            }
        }
        merged.retain(|&(_, c)| c != 0.0);
        self.constraints.push(Constraint {
            terms: merged,
            relation,
            rhs,
        });
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn objective_at(&self, x: &[f64]) -> f64 {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    /// Largest relative violation of any row or bound at `x`.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for (v, lb) in self.lower.iter().enumerate() {
            if let LowerBound::Value(l) = lb {
                worst = worst.max((l - x[v]) / (1.0 + l.abs()));
            }
        }
        for row in &self.constraints {
            let mut activity = 0.0;
            let mut scale = 1.0 + row.rhs.abs();
            for &(v, c) in &row.terms {
                activity += c * x[v];
                scale += (c * x[v]).abs();
            }
            let gap = match row.relation {
                Relation::Le => activity - row.rhs,
                Relation::Ge => row.rhs - activity,
                Relation::Eq => (activity - row.rhs).abs(),
            };
            worst = worst.max(gap / scale);
        }
        worst
    }

    fn validate(&self) -> Result<(), LpError> {
        if self.objective.is_empty() {
            return Err(LpError::Malformed("no variables".into()));
        }
        let n = self.objective.len();
        if self.objective.iter().any(|c| !c.is_finite()) {
            return Err(LpError::Malformed("non-finite objective coefficient".into()));
        }
        for (i, row) in self.constraints.iter().enumerate() {
            if !row.rhs.is_finite() {
                return Err(LpError::Malformed(format!("row {i} has a non-finite bound")));
            }
            if row.terms.iter().any(|&(v, c)| v >= n || !c.is_finite()) {
                return Err(LpError::Malformed(format!("row {i} references a bad variable or coefficient")));
            }
        }
        if self
            .lower
            .iter()
            .any(|lb| matches!(lb, LowerBound::Value(l) if !l.is_finite()))
        {
            return Err(LpError::Malformed("non-finite lower bound".into()));
        }
        Ok(())
    }

    fn to_highs(&self, with_objective: bool) -> RowProblem {
        let mut pb = RowProblem::default();
        let cols: Vec<_> = self
            .objective
            .iter()
            .zip(&self.lower)
            .map(|(&c, lb)| {
                let cost = if with_objective { c } else { 0.0 };
                let lower = match lb {
                    LowerBound::Value(l) => Bound::Included(*l),
                    LowerBound::Unbounded => Bound::Unbounded,
                };
                pb.add_column(cost, (lower, Bound::<f64>::Unbounded))
            })
            .collect();
        for row in &self.constraints {
            let terms: Vec<_> = row.terms.iter().map(|&(v, c)| (cols[v], c)).collect();
            let bounds = match row.relation {
                Relation::Le => (Bound::Unbounded, Bound::Included(row.rhs)),
                Relation::Ge => (Bound::Included(row.rhs), Bound::Unbounded),
                Relation::Eq => (Bound::Included(row.rhs), Bound::Included(row.rhs)),
            };
            pb.add_row(bounds, &terms);
        }
        pb
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Attempt {
    Default,
    NoPresolve,
}

fn configure(model: &mut highs::Model, presolve: bool) {
    model.make_quiet();
    model.set_threads(NonZeroU32::MIN);
    model.set_option("random_seed", 0);
    model.set_option("primal_feasibility_tolerance", 1e-10);
    model.set_option("dual_feasibility_tolerance", 1e-10);
    if !presolve {
        model.set_option("presolve", "off");
    }
}

fn run(lp: &LinearProgram, attempt: Attempt, with_objective: bool) -> Result<(HighsModelStatus, Vec<f64>), String> {
    let mut model = lp.to_highs(with_objective).optimise(Sense::Maximise);
    configure(&mut model, attempt == Attempt::Default);
    if attempt == Attempt::NoPresolve {
        model.set_option("solver", "simplex");
    }
    let solved = model.try_solve().map_err(|e| format!("solver error {e:?}"))?;
    let status = solved.status();
    let x = if status == HighsModelStatus::Optimal {
        solved.get_solution().columns().to_vec()
    } else {
        Vec::new()
    };
    Ok((status, x))
}

/// Solves `lp` deterministically: identical programs give bit-identical
/// outcomes on one build.
pub fn solve(lp: &LinearProgram) -> Result<LpOutcome, LpError> {
    lp.validate()?;
    let mut last = String::new();
    for attempt in [Attempt::Default, Attempt::NoPresolve] {
        let (status, x) = match run(lp, attempt, true) {
            Ok(outcome) => outcome,
            Err(e) => {
                log::debug!("lp attempt {attempt:?} failed: {e}");
                last = e;
                continue;
            }
        };
        match status {
            HighsModelStatus::Optimal => {
                let violation = lp.max_violation(&x);
                if violation <= TAU_FEAS {
                    let value = lp.objective_at(&x);
                    return Ok(LpOutcome::Optimal { value, x });
                }
                last = format!("solution violates constraints by {violation:e}");
            }
            HighsModelStatus::Unbounded => return Ok(LpOutcome::Unbounded),
            HighsModelStatus::Infeasible => return Ok(LpOutcome::Infeasible),
            HighsModelStatus::UnboundedOrInfeasible => {
                // Decide by checking feasibility alone.
                match run(lp, Attempt::NoPresolve, false) {
                    Ok((HighsModelStatus::Infeasible, _)) => return Ok(LpOutcome::Infeasible),
                    Ok((HighsModelStatus::Optimal, y)) if lp.max_violation(&y) <= TAU_FEAS => {
                        return Ok(LpOutcome::Unbounded)
                    }
                    Ok((other, _)) => last = format!("could not classify program: {other:?}"),
                    Err(e) => last = e,
                }
            }
            other => last = format!("solver stopped with status {other:?}"),
        }
        log::debug!("lp attempt {attempt:?} failed: {last}");
    }
    Err(LpError::NumericalFailure(last))
}
