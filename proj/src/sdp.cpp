// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 slpsim authors

#include "slp/sdp.hpp"

#include <cmath>
#include <stdexcept>

namespace slp {

namespace {

// Orthonormal real coordinates for Hermitian n x n matrices:
// [diagonal entries, sqrt(2) Re(upper), sqrt(2) Im(upper)], so that
// trace(X Y) equals the dot product of the coordinate vectors.
Eigen::VectorXd herm_vec(const Eigen::MatrixXcd& X) {
    const int n = static_cast<int>(X.rows());
    Eigen::VectorXd v(n * n);
    int idx = 0;
    for (int i = 0; i < n; ++i) v(idx++) = X(i, i).real();
    const double r2 = std::sqrt(2.0);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            v(idx++) = r2 * X(i, j).real();
            v(idx++) = r2 * X(i, j).imag();
        }
    }
    return v;
}

Eigen::MatrixXcd herm_mat(const Eigen::VectorXd& v, int n) {
    Eigen::MatrixXcd X(n, n);
    int idx = 0;
    for (int i = 0; i < n; ++i) X(i, i) = v(idx++);
    const double inv_r2 = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double re = v(idx++) * inv_r2;
            const double im = v(idx++) * inv_r2;
            X(i, j) = {re, im};
            X(j, i) = {re, -im};
        }
    }
    return X;
}

double barrier_value(const SdpProblem& p, const Eigen::MatrixXcd& Q, double t,
                     bool& interior) {
    interior = false;
    Eigen::LLT<Eigen::MatrixXcd> llt(Q);
    if (llt.info() != Eigen::Success) return 0.0;
    double logdet = 0.0;
    for (int i = 0; i < Q.rows(); ++i) {
        const double pivot = llt.matrixL()(i, i).real();
        if (!(pivot > 0.0)) return 0.0;
        logdet += 2.0 * std::log(pivot);
    }
    double slack_sum = 0.0;
    for (std::size_t j = 0; j < p.constraint_mats.size(); ++j) {
        const double s = (p.constraint_mats[j] * Q).trace().real() - p.rhs(j);
        if (!(s > 0.0)) return 0.0;
        slack_sum += std::log(s);
    }
    interior = true;
    return t * Q.trace().real() - logdet - slack_sum;
}

}  // namespace

SdpProblem make_multicast_problem(const ChannelMatrix& H, const Eigen::VectorXd& zeta,
                                  double sigma) {
    SdpProblem p;
    p.n = H.antennas();
    p.rhs.resize(H.users());
    for (int j = 0; j < H.users(); ++j) {
        const Eigen::RowVectorXcd h = H.entries.row(j);
        p.constraint_mats.push_back(h.adjoint() * h);
        p.rhs(j) = zeta(j) * sigma * sigma;
    }
    return p;
}

SdpResult solve_multicast_sdp(const SdpProblem& p) {
    const int n = p.n;
    const int K = static_cast<int>(p.constraint_mats.size());
    if (n < 1 || K < 1) throw std::invalid_argument("solve_multicast_sdp: empty problem");
    for (int j = 0; j < K; ++j) {
        if (!(p.rhs(j) > 0.0)) {
            throw std::invalid_argument("solve_multicast_sdp: rhs must be positive");
        }
        const Eigen::MatrixXcd& A = p.constraint_mats[j];
        if ((A - A.adjoint()).cwiseAbs().maxCoeff() > 1e-12) {
            throw std::invalid_argument("solve_multicast_sdp: constraint matrix not Hermitian");
        }
        if (!(A.trace().real() > 0.0)) {
            throw std::invalid_argument("solve_multicast_sdp: zero constraint matrix");
        }
    }

    // Strictly feasible start: Q = c I with every slack positive.
    double c = 0.0;
    for (int j = 0; j < K; ++j) {
        c = std::max(c, p.rhs(j) / p.constraint_mats[j].trace().real());
    }
    Eigen::MatrixXcd Q = 2.0 * c * Eigen::MatrixXcd::Identity(n, n);

    SdpResult res;
    const int dim = n * n;
    const double nu = static_cast<double>(n + K);  // total barrier degree
    double t = std::max(1e-3, nu / (1.0 + Q.trace().real()));
    int newton_total = 0;
    const int max_outer = 40;
    const int max_inner = 80;

    for (int outer = 0; outer < max_outer; ++outer) {
        for (int inner = 0; inner < max_inner; ++inner) {
            const Eigen::MatrixXcd Qinv = Q.llt().solve(Eigen::MatrixXcd::Identity(n, n));
            Eigen::VectorXd slack(K);
            for (int j = 0; j < K; ++j) {
                slack(j) = (p.constraint_mats[j] * Q).trace().real() - p.rhs(j);
            }
            Eigen::MatrixXcd grad_mat =
                t * Eigen::MatrixXcd::Identity(n, n) - Qinv;
            for (int j = 0; j < K; ++j) {
                grad_mat -= p.constraint_mats[j] / slack(j);
            }
            const Eigen::VectorXd grad = herm_vec(grad_mat);

            // Hessian in the orthonormal coordinates: D -> Qinv D Qinv plus
            // the rank-one slack terms.
            Eigen::MatrixXd Hess(dim, dim);
            std::vector<Eigen::VectorXd> a_vecs(K);
            for (int j = 0; j < K; ++j) a_vecs[j] = herm_vec(p.constraint_mats[j]);
            for (int k = 0; k < dim; ++k) {
                Eigen::VectorXd e = Eigen::VectorXd::Zero(dim);
                e(k) = 1.0;
                const Eigen::MatrixXcd B = herm_mat(e, n);
                Hess.col(k) = herm_vec(Qinv * B * Qinv);
            }
            for (int j = 0; j < K; ++j) {
                Hess += (a_vecs[j] * a_vecs[j].transpose()) / (slack(j) * slack(j));
            }

            Eigen::LDLT<Eigen::MatrixXd> ldlt(Hess);
            Eigen::VectorXd step = ldlt.solve(-grad);
            if (!step.allFinite()) {
                Hess.diagonal().array() += 1e-12 * std::max(1.0, Hess.trace() / dim);
                step = Hess.ldlt().solve(-grad);
                if (!step.allFinite()) return res;  // NumericalFailure
            }
            ++newton_total;

            const double decrement_sq = -grad.dot(step);
            if (decrement_sq <= 2e-10 * (1.0 + std::abs(t * Q.trace().real()))) break;

            // Backtracking line search staying strictly inside the cone.
            const Eigen::MatrixXcd D = herm_mat(step, n);
            bool interior = false;
            const double f0 = barrier_value(p, Q, t, interior);
            if (!interior) return res;
            double alpha = 1.0;
            bool moved = false;
            for (int ls = 0; ls < 60; ++ls) {
                bool ok = false;
                const Eigen::MatrixXcd Qn = Q + alpha * D;
                const double fn = barrier_value(p, Qn, t, ok);
                if (ok && fn <= f0 - 1e-4 * alpha * decrement_sq) {
                    Q = Qn;
                    moved = true;
                    break;
                }
                alpha *= 0.5;
            }
            if (!moved) break;
        }
        res.trace_history.push_back(Q.trace().real());
        const double gap = nu / t;
        if (gap <= 1e-7 * (1.0 + Q.trace().real())) {
            res.status = SolveStatus::Optimal;
            break;
        }
        t *= 10.0;
    }
    res.newton_steps = newton_total;
    res.Q = Q;
    res.trace_value = Q.trace().real();
    if (res.status != SolveStatus::Optimal) res.status = SolveStatus::NumericalFailure;
    return res;
}

}  // namespace slp
