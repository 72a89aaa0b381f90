// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 slpsim authors

#ifndef SLP_SOLVER_HPP
#define SLP_SOLVER_HPP

#include <Eigen/Dense>
#include <vector>

namespace slp {

enum class SolveStatus { Optimal, Infeasible, NumericalFailure };

// min |v|^2  s.t.  eq_coeffs v = eq_rhs,  ineq_coeffs v >= ineq_rhs.
struct LeastNormProblem {
    int dim = 0;
    Eigen::MatrixXd eq_coeffs;   // n_eq x dim
    Eigen::VectorXd eq_rhs;      // n_eq
    Eigen::MatrixXd ineq_coeffs; // n_ineq x dim
    Eigen::VectorXd ineq_rhs;    // n_ineq
};

struct SolverTolerances {
    double feas = 1e-9;   // absolute, on the normalized rhs scale
    double dual = 1e-9;
    double kkt = 1e-8;
    double cs = 1e-8;
    double regularization = 1e-12;  // diagonal shift for near-singular KKT systems
};

// Sign convention: L = |v|^2 - sum_i lambda_i (a_i v - b_i), so at the
// optimum 2 v = A_active^T lambda and inequality multipliers are >= 0.
struct LeastNormResult {
    SolveStatus status = SolveStatus::NumericalFailure;
    Eigen::VectorXd v;
    Eigen::VectorXd eq_duals;    // one per equality row
    Eigen::VectorXd ineq_duals;  // one per inequality row, zero when inactive
    std::vector<int> active;     // inequality rows in the final working set
    double objective = 0.0;      // |v|^2
    int iterations = 0;
};

// Primal-infeasible active-set iteration: start from the equality-constrained
// least-norm point, add the most violated inequality, drop working rows with
// negative multipliers, repeat. Ties resolve to the lowest row index.
LeastNormResult solve_active_set(const LeastNormProblem& p,
                                 const SolverTolerances& tol = {});

// Independent oracle: enumerate every active subset of the inequalities
// (capped at 12 rows), keep KKT-consistent feasible candidates, return the
// one of minimal norm. Exact up to linear-solve precision.
LeastNormResult solve_enumerate(const LeastNormProblem& p,
                                const SolverTolerances& tol = {});

}  // namespace slp

#endif
