// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 slpsim authors

#include "slp/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace slp {

namespace {

double problem_scale(const LeastNormProblem& p) {
    double s = 1.0;
    if (p.eq_rhs.size() > 0) s = std::max(s, p.eq_rhs.cwiseAbs().maxCoeff());
    if (p.ineq_rhs.size() > 0) s = std::max(s, p.ineq_rhs.cwiseAbs().maxCoeff());
    return s;
}

// Stack the equality rows and the working inequality subset.
void stack_rows(const LeastNormProblem& p, const std::vector<int>& working,
                Eigen::MatrixXd& C, Eigen::VectorXd& d) {
    const int n_eq = static_cast<int>(p.eq_coeffs.rows());
    const int m = n_eq + static_cast<int>(working.size());
    C.resize(m, p.dim);
    d.resize(m);
    C.topRows(n_eq) = p.eq_coeffs;
    d.head(n_eq) = p.eq_rhs;
    for (std::size_t k = 0; k < working.size(); ++k) {
        C.row(n_eq + static_cast<int>(k)) = p.ineq_coeffs.row(working[k]);
        d(n_eq + static_cast<int>(k)) = p.ineq_rhs(working[k]);
    }
}

struct WorkingSolve {
    Eigen::VectorXd v;
    Eigen::VectorXd mu;  // multipliers over stacked rows; duals are 2*mu
    bool consistent = false;
};

// Residual d - C (C^T mu) with extended-precision accumulation, so iterative
// refinement converges to the exact normal-equation solution rather than
// stalling at the formation error of C C^T.
Eigen::VectorXd primal_residual_ld(const Eigen::MatrixXd& C, const Eigen::VectorXd& d,
                                   const Eigen::VectorXd& mu) {
    const int m = static_cast<int>(C.rows());
    const int n = static_cast<int>(C.cols());
    std::vector<long double> v(n, 0.0L);
    for (int k = 0; k < m; ++k) {
        const long double mk = mu(k);
        for (int j = 0; j < n; ++j) v[j] += static_cast<long double>(C(k, j)) * mk;
    }
    Eigen::VectorXd r(m);
    for (int i = 0; i < m; ++i) {
        long double acc = d(i);
        for (int j = 0; j < n; ++j) acc -= static_cast<long double>(C(i, j)) * v[j];
        r(i) = static_cast<double>(acc);
    }
    return r;
}

double consistency_threshold(const SolverTolerances& tol, double scale,
                             const Eigen::MatrixXd& C, const Eigen::VectorXd& v) {
    const double cmax = C.size() > 0 ? C.cwiseAbs().maxCoeff() : 0.0;
    const double vmax = v.size() > 0 ? v.cwiseAbs().maxCoeff() : 0.0;
    return std::max(tol.feas * scale, 1e-12 * cmax * vmax * C.cols());
}

// Least-norm point on {C v = d} via the normal system C C^T mu = d,
// v = C^T mu, polished by mixed-precision refinement. Near-singular systems
// get a small diagonal shift (null-space components of mu never reach v);
// if the refined residual stays large the rows are treated as inconsistent,
// after a rank-revealing QR retry.
WorkingSolve solve_working(const LeastNormProblem& p, const std::vector<int>& working,
                           const SolverTolerances& tol, double scale) {
    WorkingSolve ws;
    const int m = static_cast<int>(p.eq_coeffs.rows()) + static_cast<int>(working.size());
    if (m == 0) {
        ws.v = Eigen::VectorXd::Zero(p.dim);
        ws.mu.resize(0);
        ws.consistent = true;
        return ws;
    }
    Eigen::MatrixXd C;
    Eigen::VectorXd d;
    stack_rows(p, working, C, d);
    const Eigen::MatrixXd G = C * C.transpose();
    Eigen::LDLT<Eigen::MatrixXd> ldlt(G);
    bool plain = ldlt.info() == Eigen::Success && ldlt.rcond() > 1e-14;
    if (!plain) {
        const double shift = tol.regularization * std::max(1.0, G.trace() / m);
        ldlt.compute(G + shift * Eigen::MatrixXd::Identity(m, m));
    }
    ws.mu = ldlt.solve(d);
    if (!ws.mu.allFinite()) ws.mu.setZero(m);
    for (int pass = 0; pass < 4; ++pass) {
        const Eigen::VectorXd r = primal_residual_ld(C, d, ws.mu);
        if (r.cwiseAbs().maxCoeff() <= 1e-15 * scale) break;
        const Eigen::VectorXd delta = ldlt.solve(r);
        if (!delta.allFinite()) break;
        ws.mu += delta;
    }
    ws.v = C.transpose() * ws.mu;
    double resid = (C * ws.v - d).cwiseAbs().maxCoeff();
    if (ws.v.allFinite() && resid <= consistency_threshold(tol, scale, C, ws.v)) {
        ws.consistent = true;
        return ws;
    }

    // Rank-revealing retry for working sets where the normal equations lose
    // too much accuracy.
    const auto cod = C.completeOrthogonalDecomposition();
    Eigen::VectorXd v2 = cod.solve(d);
    if (v2.allFinite()) {
        const Eigen::VectorXd r2 = d - C * v2;
        v2 += cod.solve(r2);
        const double resid2 = (C * v2 - d).cwiseAbs().maxCoeff();
        if (resid2 <= consistency_threshold(tol, scale, C, v2)) {
            ws.v = v2;
            ws.mu = C.transpose().completeOrthogonalDecomposition().solve(v2);
            ws.consistent = true;
            return ws;
        }
        if (resid2 < resid) ws.v = v2;
    }
    ws.consistent = false;
    return ws;
}

LeastNormResult assemble(const LeastNormProblem& p, const WorkingSolve& ws,
                         const std::vector<int>& working, int iterations,
                         SolveStatus status) {
    LeastNormResult r;
    r.status = status;
    r.v = ws.v;
    r.objective = ws.v.size() > 0 ? ws.v.squaredNorm() : 0.0;
    const int n_eq = static_cast<int>(p.eq_coeffs.rows());
    r.eq_duals = Eigen::VectorXd::Zero(n_eq);
    r.ineq_duals = Eigen::VectorXd::Zero(p.ineq_coeffs.rows());
    for (int j = 0; j < n_eq; ++j) r.eq_duals(j) = 2.0 * ws.mu(j);
    for (std::size_t k = 0; k < working.size(); ++k) {
        r.ineq_duals(working[k]) = 2.0 * ws.mu(n_eq + static_cast<int>(k));
    }
    r.active = working;
    r.iterations = iterations;
    return r;
}

}  // namespace

LeastNormResult solve_active_set(const LeastNormProblem& p, const SolverTolerances& tol) {
    const int n_eq = static_cast<int>(p.eq_coeffs.rows());
    const int n_in = static_cast<int>(p.ineq_coeffs.rows());
    const double scale = problem_scale(p);
    const double ftol = tol.feas * scale;

    std::vector<int> working;  // inequality row indices, kept sorted
    WorkingSolve ws = solve_working(p, working, tol, scale);
    if (!ws.consistent) {
        // equality subsystem has no solution
        LeastNormResult r;
        r.status = SolveStatus::Infeasible;
        return r;
    }

    const int budget = 100 * std::max(1, n_eq + n_in);
    int iter = 0;
    while (iter++ < budget) {
        if (!ws.v.allFinite()) break;

        // Drop the working inequality with the most negative multiplier.
        int drop_pos = -1;
        double most_negative = -tol.dual;
        for (std::size_t k = 0; k < working.size(); ++k) {
            const double lambda = 2.0 * ws.mu(n_eq + static_cast<int>(k));
            if (lambda < most_negative) {
                most_negative = lambda;
                drop_pos = static_cast<int>(k);
            }
        }
        if (drop_pos >= 0) {
            working.erase(working.begin() + drop_pos);
            ws = solve_working(p, working, tol, scale);
            continue;
        }

        // Add the most violated inequality; lowest index wins ties. The
        // violation threshold grows with the iterate norm so evaluation
        // roundoff on large-norm solutions cannot masquerade as violations.
        int add = -1;
        const double vmax = ws.v.size() > 0 ? ws.v.cwiseAbs().maxCoeff() : 0.0;
        const double amax = n_in > 0 ? p.ineq_coeffs.cwiseAbs().maxCoeff() : 0.0;
        double worst = std::max(ftol, 1e-12 * amax * vmax * p.dim);
        for (int i = 0; i < n_in; ++i) {
            if (std::find(working.begin(), working.end(), i) != working.end()) continue;
            const double viol = p.ineq_rhs(i) - p.ineq_coeffs.row(i).dot(ws.v);
            if (viol > worst) {
                worst = viol;
                add = i;
            }
        }
        if (add < 0) {
            return assemble(p, ws, working, iter, SolveStatus::Optimal);
        }

        // The added row may be linearly dependent on the working rows with a
        // contradictory rhs. In that case either certify infeasibility via
        // the expansion coefficients or evict a positive-coefficient row.
        while (iter++ < budget) {
            std::vector<int> trial_set = working;
            trial_set.insert(std::upper_bound(trial_set.begin(), trial_set.end(), add), add);
            WorkingSolve trial = solve_working(p, trial_set, tol, scale);
            if (trial.consistent) {
                working = std::move(trial_set);
                ws = std::move(trial);
                break;
            }
            Eigen::MatrixXd C;
            Eigen::VectorXd d;
            stack_rows(p, working, C, d);
            const Eigen::VectorXd a_new = p.ineq_coeffs.row(add).transpose();
            Eigen::VectorXd r;
            if (C.rows() == 0) {
                r.resize(0);
            } else {
                r = C.transpose().completeOrthogonalDecomposition().solve(a_new);
            }
            const Eigen::VectorXd fit = C.rows() > 0
                                            ? Eigen::VectorXd(C.transpose() * r)
                                            : Eigen::VectorXd::Zero(p.dim);
            if ((fit - a_new).norm() > 1e-6 * std::max(1.0, a_new.norm())) {
                // the added row is independent of the working rows, so the
                // inconsistency is numerical, not structural
                LeastNormResult res;
                res.status = SolveStatus::NumericalFailure;
                res.iterations = iter;
                return res;
            }
            int evict_pos = -1;
            double largest = tol.dual;
            for (std::size_t k = 0; k < working.size(); ++k) {
                const double rk = r(n_eq + static_cast<int>(k));
                if (rk > largest) {
                    largest = rk;
                    evict_pos = static_cast<int>(k);
                }
            }
            if (evict_pos < 0) {
                // every feasible point satisfies a_new v = r^T d < rhs
                LeastNormResult res;
                res.status = SolveStatus::Infeasible;
                res.iterations = iter;
                return res;
            }
            working.erase(working.begin() + evict_pos);
        }
    }

    LeastNormResult r;
    r.status = SolveStatus::NumericalFailure;
    r.iterations = iter;
    return r;
}

LeastNormResult solve_enumerate(const LeastNormProblem& p, const SolverTolerances& tol) {
    const int n_eq = static_cast<int>(p.eq_coeffs.rows());
    const int n_in = static_cast<int>(p.ineq_coeffs.rows());
    if (n_in > 12) {
        throw std::invalid_argument("solve_enumerate: more than 12 inequality rows");
    }
    const double scale = problem_scale(p);
    const double ftol = tol.feas * scale;

    bool have_best = false;
    double best_obj = std::numeric_limits<double>::infinity();
    Eigen::VectorXd best_v, best_mu;
    std::vector<int> best_set;

    for (unsigned mask = 0; mask < (1u << n_in); ++mask) {
        std::vector<int> subset;
        for (int i = 0; i < n_in; ++i) {
            if (mask & (1u << i)) subset.push_back(i);
        }
        const int m = n_eq + static_cast<int>(subset.size());
        Eigen::VectorXd v, mu;
        if (m == 0) {
            v = Eigen::VectorXd::Zero(p.dim);
            mu.resize(0);
        } else {
            // Householder-QR least-norm path, distinct from the normal-equation
            // route the active-set solver uses.
            Eigen::MatrixXd C;
            Eigen::VectorXd d;
            stack_rows(p, subset, C, d);
            const auto cod = C.completeOrthogonalDecomposition();
            v = cod.solve(d);
            if (!v.allFinite()) continue;
            v += cod.solve(d - C * v);
            if ((C * v - d).cwiseAbs().maxCoeff() >
                consistency_threshold(tol, scale, C, v)) {
                continue;  // inconsistent subset
            }
            mu = C.transpose().completeOrthogonalDecomposition().solve(v);
        }
        const double vmax = v.size() > 0 ? v.cwiseAbs().maxCoeff() : 0.0;
        const double amax = n_in > 0 ? p.ineq_coeffs.cwiseAbs().maxCoeff() : 0.0;
        const double slack_tol = std::max(ftol, 1e-12 * amax * vmax * p.dim);
        bool feasible = true;
        for (int i = 0; i < n_in && feasible; ++i) {
            feasible = p.ineq_coeffs.row(i).dot(v) >= p.ineq_rhs(i) - slack_tol;
        }
        if (!feasible) continue;
        bool dual_ok = true;
        for (std::size_t k = 0; k < subset.size() && dual_ok; ++k) {
            dual_ok = 2.0 * mu(n_eq + static_cast<int>(k)) >= -tol.dual;
        }
        if (!dual_ok) continue;
        const double obj = v.squaredNorm();
        if (!have_best || obj < best_obj) {
            have_best = true;
            best_obj = obj;
            best_v = v;
            best_mu = mu;
            best_set = subset;
        }
    }

    LeastNormResult r;
    if (!have_best) {
        r.status = SolveStatus::Infeasible;
        return r;
    }
    r.status = SolveStatus::Optimal;
    r.v = best_v;
    r.objective = best_obj;
    r.eq_duals = Eigen::VectorXd::Zero(n_eq);
    r.ineq_duals = Eigen::VectorXd::Zero(n_in);
    for (int j = 0; j < n_eq; ++j) r.eq_duals(j) = 2.0 * best_mu(j);
    for (std::size_t k = 0; k < best_set.size(); ++k) {
        r.ineq_duals(best_set[k]) = 2.0 * best_mu(n_eq + static_cast<int>(k));
    }
    r.active = best_set;
    return r;
}

}  // namespace slp
