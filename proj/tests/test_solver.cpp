// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 slpsim authors

#include <doctest.h>

#include <cmath>

#include "slp/rng.hpp"
#include "slp/solver.hpp"

using namespace slp;

namespace {

LeastNormProblem empty_problem(int dim) {
    LeastNormProblem p;
    p.dim = dim;
    p.eq_coeffs.resize(0, dim);
    p.eq_rhs.resize(0);
    p.ineq_coeffs.resize(0, dim);
    p.ineq_rhs.resize(0);
    return p;
}

// Mixed feasible/raw random instances; raw rhs can make the polyhedron empty.
LeastNormProblem random_problem(RngStream& rng) {
    LeastNormProblem p;
    p.dim = 2 + static_cast<int>(rng.uniform_below(7));
    const int n_eq = static_cast<int>(rng.uniform_below(3));
    const int n_in = static_cast<int>(rng.uniform_below(7));
    p.eq_coeffs.resize(n_eq, p.dim);
    p.eq_rhs.resize(n_eq);
    p.ineq_coeffs.resize(n_in, p.dim);
    p.ineq_rhs.resize(n_in);
    for (int i = 0; i < n_eq; ++i) {
        for (int d = 0; d < p.dim; ++d) p.eq_coeffs(i, d) = rng.normal();
    }
    for (int i = 0; i < n_in; ++i) {
        for (int d = 0; d < p.dim; ++d) p.ineq_coeffs(i, d) = rng.normal();
    }
    if (rng.uniform() < 0.5) {
        Eigen::VectorXd v0(p.dim);
        for (int d = 0; d < p.dim; ++d) v0(d) = rng.normal();
        p.eq_rhs = p.eq_coeffs * v0;
        for (int i = 0; i < n_in; ++i) {
            p.ineq_rhs(i) = p.ineq_coeffs.row(i).dot(v0) - std::abs(rng.normal());
        }
    } else {
        for (int i = 0; i < n_eq; ++i) p.eq_rhs(i) = rng.normal();
        for (int i = 0; i < n_in; ++i) p.ineq_rhs(i) = rng.normal();
    }
    return p;
}

}  // namespace

TEST_CASE("unconstrained least norm is zero") {
    const auto r = solve_active_set(empty_problem(4));
    CHECK(r.status == SolveStatus::Optimal);
    CHECK(r.v.norm() == doctest::Approx(0.0));
    const auto e = solve_enumerate(empty_problem(4));
    CHECK(e.status == SolveStatus::Optimal);
    CHECK(e.objective == doctest::Approx(0.0));
}

TEST_CASE("single inequality row has the textbook solution") {
    LeastNormProblem p = empty_problem(3);
    p.ineq_coeffs.resize(1, 3);
    p.ineq_coeffs << 1.0, 2.0, -2.0;
    p.ineq_rhs.resize(1);
    p.ineq_rhs << 4.5;
    const double norm_sq = 9.0;
    for (auto* solve : {&solve_active_set, &solve_enumerate}) {
        const auto r = (*solve)(p, SolverTolerances{});
        CHECK(r.status == SolveStatus::Optimal);
        const Eigen::Vector3d expect = (4.5 / norm_sq) * Eigen::Vector3d(1.0, 2.0, -2.0);
        CHECK((r.v - expect).norm() < 1e-12);
        CHECK(r.ineq_duals(0) == doctest::Approx(2.0 * 4.5 / norm_sq).epsilon(1e-12));
    }
}

TEST_CASE("all-equality problems reduce to the pseudoinverse point") {
    LeastNormProblem p = empty_problem(4);
    p.eq_coeffs.resize(2, 4);
    p.eq_coeffs << 1, 0, 1, 0,
                   0, 2, 0, 1;
    p.eq_rhs.resize(2);
    p.eq_rhs << 2.0, -1.0;
    const Eigen::VectorXd expect =
        p.eq_coeffs.completeOrthogonalDecomposition().solve(p.eq_rhs);
    for (auto* solve : {&solve_active_set, &solve_enumerate}) {
        const auto r = (*solve)(p, SolverTolerances{});
        CHECK(r.status == SolveStatus::Optimal);
        CHECK((r.v - expect).norm() < 1e-12);
    }
}

TEST_CASE("contradictory half-spaces are infeasible") {
    LeastNormProblem p = empty_problem(3);
    p.ineq_coeffs.resize(2, 3);
    p.ineq_coeffs << 1, 1, 0,
                    -1, -1, 0;
    p.ineq_rhs.resize(2);
    p.ineq_rhs << 1.0, 1.0;
    CHECK(solve_active_set(p).status == SolveStatus::Infeasible);
    CHECK(solve_enumerate(p).status == SolveStatus::Infeasible);
}

TEST_CASE("inconsistent equality rows are infeasible") {
    LeastNormProblem p = empty_problem(3);
    p.eq_coeffs.resize(2, 3);
    p.eq_coeffs << 1, 2, 3,
                   2, 4, 6;
    p.eq_rhs.resize(2);
    p.eq_rhs << 1.0, 3.0;
    CHECK(solve_active_set(p).status == SolveStatus::Infeasible);
    CHECK(solve_enumerate(p).status == SolveStatus::Infeasible);
}

TEST_CASE("oracle cap on inequality count") {
    LeastNormProblem p = empty_problem(2);
    p.ineq_coeffs = Eigen::MatrixXd::Ones(13, 2);
    p.ineq_rhs = Eigen::VectorXd::Zero(13);
    CHECK_THROWS_AS(solve_enumerate(p), std::invalid_argument);
}

TEST_CASE("active set agrees with the exhaustive oracle on random instances") {
    RngStream rng(314159, kStreamGeneric, 7);
    int optimal_seen = 0, infeasible_seen = 0;
    for (int i = 0; i < 3000; ++i) {
        const LeastNormProblem p = random_problem(rng);
        const auto a = solve_active_set(p);
        const auto e = solve_enumerate(p);
        REQUIRE_MESSAGE(a.status == e.status, "instance ", i);
        if (a.status != SolveStatus::Optimal) {
            ++infeasible_seen;
            continue;
        }
        ++optimal_seen;
        CHECK(std::abs(a.objective - e.objective) <=
              1e-9 * std::max(1.0, std::abs(e.objective)));
        CHECK((a.v - e.v).cwiseAbs().maxCoeff() <= 1e-7);
        // KKT certificate of the active-set result
        Eigen::VectorXd grad = 2.0 * a.v;
        if (p.eq_coeffs.rows() > 0) grad -= p.eq_coeffs.transpose() * a.eq_duals;
        if (p.ineq_coeffs.rows() > 0) grad -= p.ineq_coeffs.transpose() * a.ineq_duals;
        CHECK(grad.cwiseAbs().maxCoeff() <= 1e-8 * std::max(1.0, a.v.norm()));
        for (int r = 0; r < p.ineq_coeffs.rows(); ++r) {
            CHECK(a.ineq_duals(r) >= -1e-9);
            const double slack = p.ineq_coeffs.row(r).dot(a.v) - p.ineq_rhs(r);
            CHECK(std::abs(a.ineq_duals(r) * slack) <= 1e-8 * std::max(1.0, a.objective));
        }
    }
    // the generator must exercise both outcomes
    CHECK(optimal_seen > 1000);
    CHECK(infeasible_seen > 20);
}

TEST_CASE("relaxing an equality to an inequality never increases the objective") {
    RngStream rng(271828, kStreamGeneric, 8);
    for (int i = 0; i < 300; ++i) {
        LeastNormProblem p = random_problem(rng);
        if (p.eq_coeffs.rows() == 0) continue;
        const auto base = solve_active_set(p);
        if (base.status != SolveStatus::Optimal) continue;
        // move equality row 0 into the inequality block, oriented toward
        // the current point so the relaxation keeps it satisfiable
        LeastNormProblem q = p;
        const Eigen::VectorXd row = p.eq_coeffs.row(0);
        const double rhs = p.eq_rhs(0);
        q.eq_coeffs = p.eq_coeffs.bottomRows(p.eq_coeffs.rows() - 1);
        q.eq_rhs = p.eq_rhs.tail(p.eq_rhs.size() - 1);
        q.ineq_coeffs.conservativeResize(p.ineq_coeffs.rows() + 1, p.dim);
        q.ineq_rhs.conservativeResize(p.ineq_rhs.size() + 1);
        q.ineq_coeffs.row(q.ineq_coeffs.rows() - 1) = row;
        q.ineq_rhs(q.ineq_rhs.size() - 1) = rhs;
        const auto relaxed = solve_active_set(q);
        REQUIRE(relaxed.status == SolveStatus::Optimal);
        CHECK(relaxed.objective <= base.objective + 1e-9 * std::max(1.0, base.objective));
    }
}
