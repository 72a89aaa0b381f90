// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 slpsim authors

#ifndef SLP_PRECODER_HPP
#define SLP_PRECODER_HPP

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "slp/channel.hpp"
#include "slp/constellation.hpp"
#include "slp/solver.hpp"

namespace slp {

// One data symbol per user, as indices into a shared constellation.
struct SymbolSlot {
    const ConstellationSpec* spec = nullptr;
    std::vector<int> indices;
};

struct SnrTargets {
    Eigen::VectorXd zeta;  // per-user linear SNR targets, all > 0
    double sigma = 1.0;    // noise standard deviation
};

enum class Sense { Eq, Geq };

// One real linear constraint on the stacked vector [Re(x); Im(x)].
// Inequalities are stored in normalized >= form: rows for negative-sign
// extreme coordinates carry sign-flipped coefficients and rhs.
struct ConstraintRow {
    Eigen::VectorXd coeffs;  // length 2M
    Sense sense = Sense::Eq;
    double rhs = 0.0;
    int user = 0;
    Axis axis = Axis::Real;
};

struct ConstraintSet {
    int dim = 0;  // 2M
    std::vector<ConstraintRow> rows;  // 2K rows: (user 0 re, user 0 im, user 1 re, ...)
};

struct PrecodeSolution {
    SolveStatus status = SolveStatus::NumericalFailure;
    Eigen::VectorXcd x;
    double power = 0.0;          // |x|^2
    Eigen::VectorXd duals;       // length 2K, aligned to constraint rows
    std::vector<int> active;     // constraint row indices active at the solution
};

// Detection-region constraints for the slot: interior coordinates pin the
// received component exactly, extreme coordinates only bound it from the
// constellation side. rhs = sigma * sqrt(zeta_j) * (unit-power coordinate).
ConstraintSet build_constraints(const ChannelMatrix& H, const SymbolSlot& slot,
                                const SnrTargets& targets);

// Minimum-power precoder subject to the constructive-interference
// constraints (active-set solve over the real-ified system).
PrecodeSolution precode_min_power(const ChannelMatrix& H, const SymbolSlot& slot,
                                  const SnrTargets& targets);

// Symbol-level zero forcing: x = H^H (H H^H)^-1 b with b_j = sigma sqrt(zeta_j) d_j.
// A feasible point of the constructive program, hence an upper bound on it.
PrecodeSolution precode_zf_symbol(const ChannelMatrix& H, const SymbolSlot& slot,
                                  const SnrTargets& targets);

struct RowspaceFit {
    Eigen::VectorXcd nu;  // x ~ sum_j nu_j h_j^H
    double residual = 0.0;
};

// Least-squares expansion of the transmit vector over the user channels.
// A small residual certifies the stationarity structure of the optimum.
RowspaceFit rowspace_coefficients(const PrecodeSolution& solution, const ChannelMatrix& H);

// Closed-form solve assuming all 2K constraints are active. Returns the
// solution when the resulting inequality multipliers are admissible,
// nullopt when the true active set is smaller.
std::optional<PrecodeSolution> solve_all_active(const ChannelMatrix& H,
                                                const SymbolSlot& slot,
                                                const SnrTargets& targets);

// Diagnostics.
Eigen::VectorXd sinr_conventional(const ChannelMatrix& H, const Eigen::MatrixXcd& precoders,
                                  const Eigen::VectorXd& powers, double sigma2);
Eigen::VectorXd sinr_constructive(const ChannelMatrix& H, const Eigen::VectorXcd& x,
                                  double sigma);

struct KktReport {
    double max_primal_violation = 0.0;  // equality residual and inequality shortfall
    double stationarity_residual = 0.0; // |2v - C^T lambda| (scaled by 1/2)
    double max_cs_violation = 0.0;      // |dual * slack| over inequality rows
    double min_ineq_dual = 0.0;
};

KktReport verify_kkt(const ConstraintSet& cs, const PrecodeSolution& sol);

// Real-ification convention shared by all modules: x -> [Re(x); Im(x)].
Eigen::VectorXd to_real_stack(const Eigen::VectorXcd& x);
Eigen::VectorXcd from_real_stack(const Eigen::VectorXd& v);

}  // namespace slp

#endif
