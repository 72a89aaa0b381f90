// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 slpsim authors

#ifndef SLP_SDP_HPP
#define SLP_SDP_HPP

#include <Eigen/Dense>
#include <vector>

#include "slp/channel.hpp"
#include "slp/solver.hpp"

namespace slp {

// min trace(Q)  s.t.  trace(A_j Q) >= rhs_j,  Q Hermitian PSD.
// For the multicast bound A_j = h_j^H h_j and rhs_j = zeta_j sigma^2.
struct SdpProblem {
    int n = 0;
    std::vector<Eigen::MatrixXcd> constraint_mats;
    Eigen::VectorXd rhs;
};

struct SdpResult {
    SolveStatus status = SolveStatus::NumericalFailure;
    double trace_value = 0.0;
    Eigen::MatrixXcd Q;
    std::vector<double> trace_history;  // traces of the (feasible) outer iterates
    int newton_steps = 0;
};

SdpProblem make_multicast_problem(const ChannelMatrix& H, const Eigen::VectorXd& zeta,
                                  double sigma);

// Log-barrier interior point over the PSD cone with slack barriers on the
// trace constraints; barrier parameter grows by 10x per outer round, stops
// when the gap estimate drops below 1e-7 * (1 + trace).
SdpResult solve_multicast_sdp(const SdpProblem& p);

}  // namespace slp

#endif
