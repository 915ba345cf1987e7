#![allow(clippy::needless_range_loop)]

mod common;

use common::worst_response;
use metdist::lp::{solve, solve_matrix_game, LinearProgram, LowerBound, LpOutcome, Relation, TAU_FEAS};
use proptest::prelude::*;

/// `max cᵀx` subject to `Ax ≤ b`, `x ≤ u`, `x ≥ 0` with `b, u ≥ 0`, so the
/// origin is feasible and the program is bounded.
#[derive(Debug, Clone)]
struct Bounded {
    c: Vec<f64>,
    a: Vec<Vec<f64>>,
    b: Vec<f64>,
    u: Vec<f64>,
}

fn bounded() -> impl Strategy<Value = Bounded> {
    (1..=20usize, 0..=12usize).prop_flat_map(|(vars, rows)| {
        (
            prop::collection::vec(-5.0..5.0f64, vars),
            prop::collection::vec(prop::collection::vec(-3.0..3.0f64, vars), rows),
            prop::collection::vec(0.0..10.0f64, rows),
            prop::collection::vec(0.5..4.0f64, vars),
        )
            .prop_map(|(c, a, b, u)| Bounded { c, a, b, u })
    })
}

fn primal(p: &Bounded) -> LinearProgram {
    let mut lp = LinearProgram::new();
    let x: Vec<_> = p.c.iter().map(|&c| lp.add_var(c, LowerBound::Value(0.0))).collect();
    for (row, &rhs) in p.a.iter().zip(&p.b) {
        let terms: Vec<_> = x.iter().zip(row).map(|(&v, &a)| (v, a)).collect();
        lp.add_constraint(&terms, Relation::Le, rhs);
    }
    for (&v, &u) in x.iter().zip(&p.u) {
        lp.add_constraint(&[(v, 1.0)], Relation::Le, u);
    }
    lp
}

/// The dual `min bᵀy + uᵀz` s.t. `Aᵀy + z ≥ c`, written as a maximization of
/// the negated objective.
fn dual(p: &Bounded) -> LinearProgram {
    let mut lp = LinearProgram::new();
    let y: Vec<_> = p.b.iter().map(|&b| lp.add_var(-b, LowerBound::Value(0.0))).collect();
    let z: Vec<_> = p.u.iter().map(|&u| lp.add_var(-u, LowerBound::Value(0.0))).collect();
    for j in 0..p.c.len() {
        let mut terms: Vec<_> = y.iter().zip(&p.a).map(|(&v, row)| (v, row[j])).collect();
        terms.push((z[j], 1.0));
        lp.add_constraint(&terms, Relation::Ge, p.c[j]);
    }
    lp
}

fn skew_game() -> impl Strategy<Value = Vec<Vec<f64>>> {
    (1..=8usize).prop_flat_map(|m| {
        prop::collection::vec(-4i32..=4, m * (m - 1) / 2).prop_map(move |upper| {
            let mut a = vec![vec![0.0; m]; m];
            let mut k = 0;
            for i in 0..m {
                for j in i + 1..m {
                    a[i][j] = upper[k] as f64;
                    a[j][i] = -(upper[k] as f64);
                    k += 1;
                }
            }
            a
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn strong_duality_and_resubstitution(p in bounded()) {
        let lp = primal(&p);
        let LpOutcome::Optimal { value, x } = solve(&lp).unwrap() else {
            return Err(TestCaseError::fail("bounded feasible program not optimal"));
        };
        prop_assert!(lp.max_violation(&x) <= TAU_FEAS);
        prop_assert!((lp.objective_at(&x) - value).abs() <= 1e-9 * (1.0 + value.abs()));
        let LpOutcome::Optimal { value: dual_value, .. } = solve(&dual(&p)).unwrap() else {
            return Err(TestCaseError::fail("dual not optimal"));
        };
        prop_assert!((value + dual_value).abs() <= 1e-7 * (1.0 + value.abs()), "{} vs {}", value, -dual_value);
    }

    #[test]
    fn solving_is_deterministic(p in bounded()) {
        let lp = primal(&p);
        prop_assert_eq!(solve(&lp).unwrap(), solve(&lp).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn game_solution_is_maximin(a in skew_game()) {
        let p = solve_matrix_game(&a).unwrap();
        prop_assert_eq!(p.len(), a.len());
        prop_assert!(worst_response(&p, &a) >= -1e-8, "{} on {:?}", p, a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn game_solution_is_permutation_equivariant(a in skew_game(), seed in any::<u64>()) {
        let m = a.len();
        let mut perm: Vec<usize> = (0..m).collect();
        let mut s = seed;
        for i in (1..m).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let permuted: Vec<Vec<f64>> = (0..m).map(|i| (0..m).map(|j| a[perm[i]][perm[j]]).collect()).collect();
        let p = solve_matrix_game(&a).unwrap();
        let q = solve_matrix_game(&permuted).unwrap();
        for i in 0..m {
            prop_assert!((q.prob(i) - p.prob(perm[i])).abs() <= 1e-7, "{} vs {}", p, q);
        }
    }
}

#[test]
fn unbounded_and_infeasible_programs() {
    let mut lp = LinearProgram::new();
    let x = lp.add_var(1.0, LowerBound::Value(0.0));
    let y = lp.add_var(0.0, LowerBound::Unbounded);
    lp.add_constraint(&[(x, 1.0), (y, -1.0)], Relation::Le, 1.0);
    assert_eq!(solve(&lp).unwrap(), LpOutcome::Unbounded);

    let mut lp = LinearProgram::new();
    let x = lp.add_var(1.0, LowerBound::Value(0.0));
    lp.add_constraint(&[(x, 1.0)], Relation::Le, -1.0);
    assert_eq!(solve(&lp).unwrap(), LpOutcome::Infeasible);
}

#[test]
fn simplex_program_picks_largest_cost() {
    let mut lp = LinearProgram::new();
    let costs = [0.3, -1.0, 2.5, 2.0];
    let x: Vec<_> = costs.iter().map(|&c| lp.add_var(c, LowerBound::Value(0.0))).collect();
    let terms: Vec<_> = x.iter().map(|&v| (v, 1.0)).collect();
    lp.add_constraint(&terms, Relation::Eq, 1.0);
    let out = solve(&lp).unwrap();
    assert!((out.value().unwrap() - 2.5).abs() < 1e-12);
}
