//! Maximin strategies of symmetric zero-sum games.
//!
//! The optimal strategies of a symmetric game form a polytope. We return its
//! element of minimum Euclidean norm: a convex QP is solved with Clarabel and
//! the answer is then polished by solving the KKT system restricted to the
//! active set it identifies.

use clarabel::algebra::CscMatrix;
use clarabel::solver::{DefaultSettingsBuilder, DefaultSolver, IPSolver, NonnegativeConeT, SolverStatus, ZeroConeT};
use nalgebra::{DMatrix, DVector};

use super::{LpError, TAU_FEAS};
use crate::lottery::Lottery;

const SUPPORT_CUTOFF: f64 = 1e-7;
const ACTIVE_CUTOFF: f64 = 1e-7;
const POLISH_MAX_SHIFT: f64 = 1e-5;

/// Returns the minimum-norm maximin strategy of the symmetric zero-sum game
/// with skew-symmetric `payoff` (row player's gain).
pub fn solve_matrix_game(payoff: &[Vec<f64>]) -> Result<Lottery, LpError> {
    let m = payoff.len();
    if m == 0 || payoff.iter().any(|row| row.len() != m) {
        return Err(LpError::Malformed("payoff matrix must be square and nonempty".into()));
    }
    if payoff.iter().flatten().any(|a| !a.is_finite()) {
        return Err(LpError::Malformed("payoff matrix has non-finite entries".into()));
    }
    let scale = payoff.iter().flatten().fold(0.0f64, |acc, a| acc.max(a.abs()));
    for x in 0..m {
        for y in 0..m {
            if (payoff[x][y] + payoff[y][x]).abs() > TAU_FEAS * scale.max(1.0) {
                return Err(LpError::NotSkewSymmetric);
            }
        }
    }
    if scale == 0.0 {
        return Ok(Lottery::uniform(m));
    }
    let a: Vec<Vec<f64>> = payoff.iter().map(|row| row.iter().map(|v| v / scale).collect()).collect();
    let raw = min_norm_qp(&a)?;
    let p = polish(&a, &raw).unwrap_or(raw);
    let worst = (0..m)
        .map(|q| (0..m).map(|x| p[x] * a[x][q]).sum::<f64>())
        .fold(f64::INFINITY, f64::min);
    if worst < -1e-9 {
        return Err(LpError::NumericalFailure(format!("maximin check failed by {worst:e}")));
    }
    Lottery::from_weights(p, 1e-12).map_err(|e| LpError::NumericalFailure(e.to_string()))
}

/// `min ½‖p‖²` over `{p ≥ 0, Σp = 1, Aᵀp ≥ 0}`.
fn min_norm_qp(a: &[Vec<f64>]) -> Result<Vec<f64>, LpError> {
    let m = a.len();
    // Rows: Σp = 1, then −p ≤ 0, then −Aᵀp ≤ 0.
    let mut rows = vec![vec![1.0; m]];
    for x in 0..m {
        let mut row = vec![0.0; m];
        row[x] = -1.0;
        rows.push(row);
    }
    for q in 0..m {
        rows.push((0..m).map(|x| -a[x][q]).collect());
    }
    let mut b = vec![0.0; 2 * m + 1];
    b[0] = 1.0;
    let cones = [ZeroConeT(1), NonnegativeConeT(2 * m)];
    let settings = DefaultSettingsBuilder::default()
        .verbose(false)
        .tol_gap_abs(1e-11)
        .tol_gap_rel(1e-11)
        .tol_feas(1e-11)
        .build()
        .map_err(|e| LpError::NumericalFailure(e.to_string()))?;
    let p_mat = CscMatrix::<f64>::identity(m);
    let a_mat = CscMatrix::from(&rows);
    let mut solver = DefaultSolver::new(&p_mat, &vec![0.0; m], &a_mat, &b, &cones, settings)
        .map_err(|e| LpError::NumericalFailure(e.to_string()))?;
    solver.solve();
    match solver.solution.status {
        SolverStatus::Solved | SolverStatus::AlmostSolved => Ok(solver.solution.x.iter().map(|v| v.max(0.0)).collect()),
        other => Err(LpError::NumericalFailure(format!("QP stopped with status {other:?}"))),
    }
}

/// Minimum-norm point of the affine hull of the face identified by `p`.
/// Returns `None` if that point leaves the feasible region or strays from
/// `p`, in which case the caller keeps the unpolished answer.
fn polish(a: &[Vec<f64>], p: &[f64]) -> Option<Vec<f64>> {
    let m = a.len();
    let support: Vec<usize> = (0..m).filter(|&x| p[x] > SUPPORT_CUTOFF).collect();
    let active: Vec<usize> = (0..m)
        .filter(|&q| support.iter().map(|&x| p[x] * a[x][q]).sum::<f64>() < ACTIVE_CUTOFF)
        .collect();
    let rows = active.len() + 1;
    let mut b = DMatrix::<f64>::zeros(rows, support.len());
    let mut rhs = DVector::<f64>::zeros(rows);
    for (r, &q) in active.iter().enumerate() {
        for (c, &x) in support.iter().enumerate() {
            b[(r, c)] = a[x][q];
        }
    }
    for c in 0..support.len() {
        b[(active.len(), c)] = 1.0;
    }
    rhs[active.len()] = 1.0;
    let pinv = b.clone().pseudo_inverse(1e-10).ok()?;
    let sol = &pinv * &rhs;
    if (&b * &sol - &rhs).amax() > 1e-10 {
        return None;
    }
    let mut out = vec![0.0; m];
    for (c, &x) in support.iter().enumerate() {
        if sol[c] < -1e-12 {
            return None;
        }
        out[x] = sol[c].max(0.0);
    }
    for q in 0..m {
        if (0..m).map(|x| out[x] * a[x][q]).sum::<f64>() < -1e-12 {
            return None;
        }
    }
    let shift = out.iter().zip(p).map(|(u, v)| (u - v).abs()).fold(0.0, f64::max);
    (shift <= POLISH_MAX_SHIFT).then_some(out)
}
