// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 slpsim authors

#include "slp/precoder.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace slp {

Eigen::VectorXd to_real_stack(const Eigen::VectorXcd& x) {
    const int m = static_cast<int>(x.size());
    Eigen::VectorXd v(2 * m);
    v.head(m) = x.real();
    v.tail(m) = x.imag();
    return v;
}

Eigen::VectorXcd from_real_stack(const Eigen::VectorXd& v) {
    const int m = static_cast<int>(v.size()) / 2;
    Eigen::VectorXcd x(m);
    x.real() = v.head(m);
    x.imag() = v.tail(m);
    return x;
}

namespace {

// Re(h x) and Im(h x) as real functionals of [Re(x); Im(x)].
Eigen::VectorXd real_axis_row(const Eigen::RowVectorXcd& h) {
    const int m = static_cast<int>(h.size());
    Eigen::VectorXd a(2 * m);
    a.head(m) = h.real().transpose();
    a.tail(m) = -h.imag().transpose();
    return a;
}

Eigen::VectorXd imag_axis_row(const Eigen::RowVectorXcd& h) {
    const int m = static_cast<int>(h.size());
    Eigen::VectorXd a(2 * m);
    a.head(m) = h.imag().transpose();
    a.tail(m) = h.real().transpose();
    return a;
}

void check_inputs(const ChannelMatrix& H, const SymbolSlot& slot, const SnrTargets& t) {
    if (slot.spec == nullptr) throw std::invalid_argument("slot has no constellation");
    const int K = H.users();
    if (static_cast<int>(slot.indices.size()) != K) {
        throw std::invalid_argument("slot length does not match channel user count");
    }
    if (t.zeta.size() != K) {
        throw std::invalid_argument("SNR target count does not match user count");
    }
    for (int j = 0; j < K; ++j) {
        if (!(t.zeta(j) > 0.0)) throw std::invalid_argument("SNR targets must be > 0");
        if (slot.indices[j] < 0 ||
            static_cast<std::size_t>(slot.indices[j]) >= slot.spec->size()) {
            throw std::invalid_argument("symbol index out of range");
        }
    }
    if (!(t.sigma > 0.0)) throw std::invalid_argument("sigma must be > 0");
}

LeastNormProblem to_least_norm(const ConstraintSet& cs, std::vector<int>& eq_map,
                               std::vector<int>& ineq_map) {
    LeastNormProblem p;
    p.dim = cs.dim;
    int n_eq = 0, n_in = 0;
    for (const auto& row : cs.rows) {
        (row.sense == Sense::Eq ? n_eq : n_in)++;
    }
    p.eq_coeffs.resize(n_eq, cs.dim);
    p.eq_rhs.resize(n_eq);
    p.ineq_coeffs.resize(n_in, cs.dim);
    p.ineq_rhs.resize(n_in);
    eq_map.clear();
    ineq_map.clear();
    int ie = 0, ii = 0;
    for (std::size_t r = 0; r < cs.rows.size(); ++r) {
        const auto& row = cs.rows[r];
        if (row.sense == Sense::Eq) {
            p.eq_coeffs.row(ie) = row.coeffs.transpose();
            p.eq_rhs(ie) = row.rhs;
            eq_map.push_back(static_cast<int>(r));
            ++ie;
        } else {
            p.ineq_coeffs.row(ii) = row.coeffs.transpose();
            p.ineq_rhs(ii) = row.rhs;
            ineq_map.push_back(static_cast<int>(r));
            ++ii;
        }
    }
    return p;
}

}  // namespace

ConstraintSet build_constraints(const ChannelMatrix& H, const SymbolSlot& slot,
                                const SnrTargets& targets) {
    check_inputs(H, slot, targets);
    const int K = H.users();
    ConstraintSet cs;
    cs.dim = 2 * H.antennas();
    cs.rows.reserve(2 * K);
    for (int j = 0; j < K; ++j) {
        const auto point = slot.spec->points[slot.indices[j]];
        const auto [cls_re, cls_im] = classify(*slot.spec, slot.indices[j]);
        const double level = targets.sigma * std::sqrt(targets.zeta(j));
        const Eigen::RowVectorXcd h = H.entries.row(j);

        auto push = [&](Axis axis, double coord, const CoordinateClass& cls,
                        Eigen::VectorXd a) {
            ConstraintRow row;
            row.user = j;
            row.axis = axis;
            row.rhs = level * coord;
            if (cls.cls == CoordClass::Interior) {
                row.sense = Sense::Eq;
                row.coeffs = std::move(a);
            } else {
                row.sense = Sense::Geq;
                const double s = cls.sign;
                row.coeffs = s * a;
                row.rhs *= s;
            }
            cs.rows.push_back(std::move(row));
        };

        push(Axis::Real, point.real(), cls_re, real_axis_row(h));
        push(Axis::Imag, point.imag(), cls_im, imag_axis_row(h));
    }
    return cs;
}

PrecodeSolution precode_min_power(const ChannelMatrix& H, const SymbolSlot& slot,
                                  const SnrTargets& targets) {
    const ConstraintSet cs = build_constraints(H, slot, targets);
    std::vector<int> eq_map, ineq_map;
    const LeastNormProblem p = to_least_norm(cs, eq_map, ineq_map);
    const LeastNormResult r = solve_active_set(p);

    PrecodeSolution sol;
    sol.status = r.status;
    if (r.status != SolveStatus::Optimal) return sol;
    sol.x = from_real_stack(r.v);
    sol.power = r.objective;
    sol.duals = Eigen::VectorXd::Zero(cs.rows.size());
    for (std::size_t k = 0; k < eq_map.size(); ++k) sol.duals(eq_map[k]) = r.eq_duals(k);
    for (std::size_t k = 0; k < ineq_map.size(); ++k) {
        sol.duals(ineq_map[k]) = r.ineq_duals(k);
    }
    for (int idx : eq_map) sol.active.push_back(idx);
    for (int i : r.active) sol.active.push_back(ineq_map[i]);
    std::sort(sol.active.begin(), sol.active.end());
    return sol;
}

PrecodeSolution precode_zf_symbol(const ChannelMatrix& H, const SymbolSlot& slot,
                                  const SnrTargets& targets) {
    check_inputs(H, slot, targets);
    const int K = H.users();
    PrecodeSolution sol;

    const Eigen::MatrixXcd G = H.entries * H.entries.adjoint();
    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(H.entries);
    const double smax = svd.singularValues()(0);
    const double smin = svd.singularValues()(svd.singularValues().size() - 1);
    if (!(smin > 1e-12 * std::max(1.0, smax))) {
        sol.status = SolveStatus::Infeasible;  // rank-deficient channel
        return sol;
    }

    Eigen::VectorXcd b(K);
    for (int j = 0; j < K; ++j) {
        b(j) = targets.sigma * std::sqrt(targets.zeta(j)) * slot.spec->points[slot.indices[j]];
    }
    const auto ldlt = G.ldlt();
    Eigen::VectorXcd y = ldlt.solve(b);
    // refine against H (H^H y) with extended precision so the channel
    // inversion stays accurate on poorly conditioned draws
    const int M = H.antennas();
    for (int pass = 0; pass < 3; ++pass) {
        std::vector<std::complex<long double>> x_ld(M, {0.0L, 0.0L});
        for (int j = 0; j < K; ++j) {
            const std::complex<long double> yj(y(j).real(), y(j).imag());
            for (int m = 0; m < M; ++m) {
                const auto h = H.entries(j, m);
                x_ld[m] += std::complex<long double>(h.real(), -h.imag()) * yj;
            }
        }
        Eigen::VectorXcd r(K);
        for (int j = 0; j < K; ++j) {
            std::complex<long double> acc(b(j).real(), b(j).imag());
            for (int m = 0; m < M; ++m) {
                const auto h = H.entries(j, m);
                acc -= std::complex<long double>(h.real(), h.imag()) * x_ld[m];
            }
            r(j) = {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
        }
        if (r.cwiseAbs().maxCoeff() <= 1e-15 * b.cwiseAbs().maxCoeff()) break;
        y += ldlt.solve(r);
    }
    sol.x = H.entries.adjoint() * y;
    sol.power = sol.x.squaredNorm();
    sol.status = SolveStatus::Optimal;

    // Multipliers of the all-equality least-norm system, for the certificate.
    const ConstraintSet cs = build_constraints(H, slot, targets);
    Eigen::MatrixXd C(cs.rows.size(), cs.dim);
    for (std::size_t r = 0; r < cs.rows.size(); ++r) C.row(r) = cs.rows[r].coeffs;
    const Eigen::VectorXd v = to_real_stack(sol.x);
    sol.duals = 2.0 * C.transpose().completeOrthogonalDecomposition().solve(v);
    sol.active.resize(cs.rows.size());
    for (std::size_t r = 0; r < cs.rows.size(); ++r) sol.active[r] = static_cast<int>(r);
    return sol;
}

RowspaceFit rowspace_coefficients(const PrecodeSolution& solution, const ChannelMatrix& H) {
    const Eigen::MatrixXcd B = H.entries.adjoint();  // column j = h_j^H
    RowspaceFit fit;
    fit.nu = B.completeOrthogonalDecomposition().solve(solution.x);
    fit.residual = (solution.x - B * fit.nu).norm();
    return fit;
}

std::optional<PrecodeSolution> solve_all_active(const ChannelMatrix& H,
                                                const SymbolSlot& slot,
                                                const SnrTargets& targets) {
    const ConstraintSet cs = build_constraints(H, slot, targets);
    LeastNormProblem p;
    p.dim = cs.dim;
    p.eq_coeffs.resize(cs.rows.size(), cs.dim);
    p.eq_rhs.resize(cs.rows.size());
    for (std::size_t r = 0; r < cs.rows.size(); ++r) {
        p.eq_coeffs.row(r) = cs.rows[r].coeffs.transpose();
        p.eq_rhs(r) = cs.rows[r].rhs;
    }
    p.ineq_coeffs.resize(0, cs.dim);
    p.ineq_rhs.resize(0);

    const SolverTolerances tol;
    const LeastNormResult r = solve_active_set(p, tol);
    if (r.status == SolveStatus::Infeasible) return std::nullopt;  // no all-active point
    if (r.status != SolveStatus::Optimal) {
        PrecodeSolution sol;
        sol.status = SolveStatus::NumericalFailure;
        return sol;
    }
    for (std::size_t i = 0; i < cs.rows.size(); ++i) {
        if (cs.rows[i].sense == Sense::Geq && r.eq_duals(i) < -tol.dual) {
            return std::nullopt;  // active set at the optimum is smaller
        }
    }
    PrecodeSolution sol;
    sol.status = SolveStatus::Optimal;
    sol.x = from_real_stack(r.v);
    sol.power = r.objective;
    sol.duals = r.eq_duals;
    sol.active.resize(cs.rows.size());
    for (std::size_t i = 0; i < cs.rows.size(); ++i) sol.active[i] = static_cast<int>(i);
    return sol;
}

Eigen::VectorXd sinr_conventional(const ChannelMatrix& H, const Eigen::MatrixXcd& precoders,
                                  const Eigen::VectorXd& powers, double sigma2) {
    const int K = H.users();
    Eigen::VectorXd out(K);
    for (int j = 0; j < K; ++j) {
        double signal = 0.0, interference = 0.0;
        for (int i = 0; i < K; ++i) {
            const double g = powers(i) * std::norm((H.entries.row(j) * precoders.col(i))(0));
            if (i == j) {
                signal = g;
            } else {
                interference += g;
            }
        }
        out(j) = signal / (interference + sigma2);
    }
    return out;
}

Eigen::VectorXd sinr_constructive(const ChannelMatrix& H, const Eigen::VectorXcd& x,
                                  double sigma) {
    const int K = H.users();
    Eigen::VectorXd out(K);
    for (int j = 0; j < K; ++j) {
        out(j) = std::norm((H.entries.row(j) * x)(0)) / (sigma * sigma);
    }
    return out;
}

KktReport verify_kkt(const ConstraintSet& cs, const PrecodeSolution& sol) {
    KktReport rep;
    const Eigen::VectorXd v = to_real_stack(sol.x);
    Eigen::VectorXd weighted = Eigen::VectorXd::Zero(cs.dim);
    rep.min_ineq_dual = 0.0;
    bool first_ineq = true;
    for (std::size_t r = 0; r < cs.rows.size(); ++r) {
        const auto& row = cs.rows[r];
        const double val = row.coeffs.dot(v);
        const double slack = val - row.rhs;
        if (row.sense == Sense::Eq) {
            rep.max_primal_violation = std::max(rep.max_primal_violation, std::abs(slack));
        } else {
            rep.max_primal_violation = std::max(rep.max_primal_violation, -slack);
            rep.max_cs_violation =
                std::max(rep.max_cs_violation, std::abs(sol.duals(r) * slack));
            if (first_ineq || sol.duals(r) < rep.min_ineq_dual) {
                rep.min_ineq_dual = sol.duals(r);
                first_ineq = false;
            }
        }
        weighted += sol.duals(r) * row.coeffs;
    }
    rep.stationarity_residual = (v - 0.5 * weighted).norm();
    return rep;
}

}  // namespace slp
