// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 slpsim authors

#include "slp/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "slp/rng.hpp"
#include "slp/sdp.hpp"

namespace slp {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double v) { return 10.0 * std::log10(v); }

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void parse_fail(const std::string& name, int line, const std::string& what) {
    throw std::runtime_error(name + ":" + std::to_string(line) + ": " + what);
}

double to_double(const std::string& name, int line, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        parse_fail(name, line, "expected a number, got '" + v + "'");
    }
}

long to_long(const std::string& name, int line, const std::string& v) {
    try {
        std::size_t pos = 0;
        const long d = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        parse_fail(name, line, "expected an integer, got '" + v + "'");
    }
}

}  // namespace

ExperimentConfig parse_config_stream(std::istream& in, const std::string& name) {
    ExperimentConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) parse_fail(name, lineno, "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (value.empty()) parse_fail(name, lineno, "missing value for '" + key + "'");

        if (key == "experiment") {
            if (value == "power_sweep") cfg.kind = ExperimentKind::PowerSweep;
            else if (value == "ee_vs_channel") cfg.kind = ExperimentKind::EeVsChannel;
            else if (value == "ee_vs_target") cfg.kind = ExperimentKind::EeVsTarget;
            else if (value == "validate") cfg.kind = ExperimentKind::Validate;
            else parse_fail(name, lineno, "unknown experiment '" + value + "'");
        } else if (key == "M") {
            cfg.M = static_cast<int>(to_long(name, lineno, value));
        } else if (key == "K") {
            cfg.K = static_cast<int>(to_long(name, lineno, value));
        } else if (key == "orders") {
            cfg.orders.clear();
            std::stringstream ss(value);
            std::string tok;
            while (std::getline(ss, tok, ',')) {
                cfg.orders.push_back(static_cast<int>(to_long(name, lineno, trim(tok))));
            }
            if (cfg.orders.empty()) parse_fail(name, lineno, "empty order list");
        } else if (key == "sigma2_db") {
            cfg.sigma2_db = to_double(name, lineno, value);
        } else if (key == "gamma0_db") {
            cfg.gamma0_db = to_double(name, lineno, value);
        } else if (key == "zeta_db") {
            cfg.zeta_db = to_double(name, lineno, value);
        } else if (key.rfind("zeta_db_", 0) == 0) {
            const int order =
                static_cast<int>(to_long(name, lineno, key.substr(std::string("zeta_db_").size())));
            cfg.zeta_db_order[order] = to_double(name, lineno, value);
        } else if (key == "sweep_start_db") {
            cfg.sweep_start_db = to_double(name, lineno, value);
        } else if (key == "sweep_stop_db") {
            cfg.sweep_stop_db = to_double(name, lineno, value);
        } else if (key == "sweep_step_db") {
            cfg.sweep_step_db = to_double(name, lineno, value);
        } else if (key == "n_channels") {
            cfg.n_channels = static_cast<int>(to_long(name, lineno, value));
        } else if (key == "n_slots") {
            cfg.n_slots = static_cast<int>(to_long(name, lineno, value));
        } else if (key == "seed") {
            cfg.seed = static_cast<std::uint64_t>(to_long(name, lineno, value));
        } else if (key == "precoder") {
            if (value == "mcipm") cfg.precoder = PrecoderKind::MCIPM;
            else if (value == "zf") cfg.precoder = PrecoderKind::ZF;
            else parse_fail(name, lineno, "unknown precoder '" + value + "'");
        } else if (key == "compute_bound") {
            if (value == "true") cfg.compute_bound = true;
            else if (value == "false") cfg.compute_bound = false;
            else parse_fail(name, lineno, "expected true/false for compute_bound");
        } else if (key == "threads") {
            cfg.threads = static_cast<int>(to_long(name, lineno, value));
        } else if (key == "out") {
            cfg.out = value;
        } else {
            parse_fail(name, lineno, "unknown key '" + key + "'");
        }
    }
    if (cfg.sweep_step_db <= 0.0) {
        throw std::runtime_error(name + ": sweep_step_db must be > 0");
    }
    if (cfg.sweep_start_db > cfg.sweep_stop_db) {
        throw std::runtime_error(name + ": sweep_start_db must be <= sweep_stop_db");
    }
    return cfg;
}

ExperimentConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path);
    return parse_config_stream(in, path);
}

std::vector<double> sweep_grid_db(const ExperimentConfig& cfg) {
    std::vector<double> grid;
    const int n = static_cast<int>(
        std::floor((cfg.sweep_stop_db - cfg.sweep_start_db) / cfg.sweep_step_db + 1e-9));
    for (int i = 0; i <= n; ++i) grid.push_back(cfg.sweep_start_db + i * cfg.sweep_step_db);
    return grid;
}

namespace {

std::string format_double(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace

std::string csv_header(int K) {
    std::string h = "variable_db,variable_linear,order,avg_tx_power,avg_tx_power_db";
    for (int j = 1; j <= K; ++j) h += ",ser_user_" + std::to_string(j);
    for (int j = 1; j <= K; ++j) h += ",effective_rate_" + std::to_string(j);
    h += ",energy_efficiency,ci_lower_bound,n_fail";
    return h;
}

std::string csv_row(double variable_db, int order, const MetricsRecord& rec) {
    std::string row = format_double(variable_db);
    row += "," + format_double(db_to_linear(variable_db));
    row += "," + std::to_string(order);
    row += "," + format_double(rec.avg_tx_power);
    row += "," + format_double(linear_to_db(rec.avg_tx_power));
    for (int j = 0; j < rec.ser.size(); ++j) row += "," + format_double(rec.ser(j));
    for (int j = 0; j < rec.effective_rate.size(); ++j) {
        row += "," + format_double(rec.effective_rate(j));
    }
    row += "," + format_double(rec.energy_efficiency);
    row += ",";
    if (rec.ci_lower_bound) row += format_double(*rec.ci_lower_bound);
    row += "," + std::to_string(rec.n_fail);
    return row;
}

int run_experiment(const ExperimentConfig& cfg, std::ostream& log) {
    if (cfg.kind == ExperimentKind::Validate) {
        return run_validation(false, log) == 0 ? 0 : 1;
    }

    std::ofstream out(cfg.out);
    if (!out) {
        log << "error: cannot open output file " << cfg.out << "\n";
        return 1;
    }
    out << csv_header(cfg.K) << "\n";

    const std::vector<double> grid_db = sweep_grid_db(cfg);
    SweepSpec sweep;
    sweep.variable = cfg.kind == ExperimentKind::EeVsChannel ? SweepVariable::Gamma0
                                                             : SweepVariable::ZetaTh;
    for (double db : grid_db) sweep.grid.push_back(db_to_linear(db));

    bool any_flagged = false;
    for (int order : cfg.orders) {
        SimConfig sim;
        sim.M = cfg.M;
        sim.K = cfg.K;
        sim.order = order;
        sim.sigma2 = db_to_linear(cfg.sigma2_db);
        sim.gamma0 = db_to_linear(cfg.gamma0_db);
        sim.n_channels = cfg.n_channels;
        sim.n_slots = cfg.n_slots;
        sim.seed = cfg.seed;
        sim.precoder = cfg.precoder;
        sim.compute_bound = cfg.compute_bound;
        sim.threads = cfg.threads;
        double zeta_db = cfg.zeta_db;
        if (auto it = cfg.zeta_db_order.find(order); it != cfg.zeta_db_order.end()) {
            zeta_db = it->second;
        }
        sim.zeta = Eigen::VectorXd::Constant(cfg.K, db_to_linear(zeta_db));

        const std::vector<MetricsRecord> records = run_sweep(sim, sweep);
        for (std::size_t g = 0; g < records.size(); ++g) {
            out << csv_row(grid_db[g], order, records[g]) << "\n";
            if (records[g].flagged) {
                any_flagged = true;
                log << "warning: order " << order << " point " << grid_db[g]
                    << " dB had " << records[g].n_fail << " failed slots\n";
            }
        }
    }
    log << "wrote " << cfg.out << "\n";
    return any_flagged ? 2 : 0;
}

// ---------------------------------------------------------------------------
// Validation suite
// ---------------------------------------------------------------------------

namespace {

struct CheckReporter {
    std::ostream& log;
    int failures = 0;
    void operator()(const std::string& label, bool ok, const std::string& detail) {
        log << (ok ? "[PASS] " : "[FAIL] ") << label;
        if (!detail.empty()) log << ": " << detail;
        log << "\n";
        if (!ok) ++failures;
    }
};

LeastNormProblem random_least_norm(RngStream& rng) {
    LeastNormProblem p;
    p.dim = 2 + static_cast<int>(rng.uniform_below(7));  // 2..8
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
        // anchored at a known feasible point
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

struct RandomInstance {
    ChannelMatrix H;
    SymbolSlot slot;
    SnrTargets targets;
};

RandomInstance random_mcipm_instance(const ConstellationSpec& spec, int M, int K,
                                     std::uint64_t seed, std::uint32_t trial,
                                     RngStream& rng) {
    RandomInstance ins;
    ins.H = generate_rayleigh(K, M, 1.0, seed, trial);
    ins.slot.spec = &spec;
    ins.slot.indices.resize(K);
    for (int j = 0; j < K; ++j) {
        ins.slot.indices[j] =
            static_cast<int>(rng.uniform_below(static_cast<std::uint32_t>(spec.size())));
    }
    ins.targets.sigma = 1.0;
    ins.targets.zeta.resize(K);
    for (int j = 0; j < K; ++j) ins.targets.zeta(j) = 0.5 + 19.5 * rng.uniform();
    return ins;
}

}  // namespace

int run_validation(bool quick, std::ostream& log) {
    CheckReporter check{log};
    const SolverTolerances tol;

    // Active-set solver vs the exhaustive oracle.
    {
        const int n_instances = quick ? 300 : 2000;
        RngStream rng(20260401, kStreamGeneric, 0);
        int status_mismatch = 0, obj_mismatch = 0, arg_mismatch = 0;
        for (int i = 0; i < n_instances; ++i) {
            const LeastNormProblem p = random_least_norm(rng);
            const LeastNormResult a = solve_active_set(p);
            const LeastNormResult e = solve_enumerate(p);
            if (a.status != e.status) {
                ++status_mismatch;
                continue;
            }
            if (a.status != SolveStatus::Optimal) continue;
            if (std::abs(a.objective - e.objective) > 1e-9 * std::max(1.0, e.objective)) {
                ++obj_mismatch;
            }
            if ((a.v - e.v).cwiseAbs().maxCoeff() > 1e-7) ++arg_mismatch;
        }
        check("oracle equivalence",
              status_mismatch == 0 && obj_mismatch == 0 && arg_mismatch == 0,
              std::to_string(n_instances) + " instances, " +
                  std::to_string(status_mismatch + obj_mismatch + arg_mismatch) +
                  " mismatches");
    }

    // Per-order KKT certificates, row-space structure, dominance, scaling,
    // noiseless detection.
    for (int order : {4, 8, 16}) {
        const ConstellationSpec spec = build_constellation(order);
        const int n_instances = quick ? 50 : 300;
        RngStream rng(977 + order, kStreamGeneric, 1);
        double worst_kkt = 0.0, worst_cs = 0.0, worst_feas = 0.0, worst_dual = 0.0;
        double worst_rowspace = 0.0, worst_scaling = 0.0;
        int dominance_fail = 0, detect_fail = 0, solver_fail = 0;
        for (int i = 0; i < n_instances; ++i) {
            const RandomInstance ins = random_mcipm_instance(
                spec, 2, 2, 4242, static_cast<std::uint32_t>(i + order * 10000), rng);
            const PrecodeSolution sol = precode_min_power(ins.H, ins.slot, ins.targets);
            if (sol.status != SolveStatus::Optimal) {
                ++solver_fail;
                continue;
            }
            const ConstraintSet cs = build_constraints(ins.H, ins.slot, ins.targets);
            const KktReport rep = verify_kkt(cs, sol);
            double rhs_scale = 1.0;
            for (const auto& row : cs.rows) rhs_scale = std::max(rhs_scale, std::abs(row.rhs));
            worst_kkt = std::max(worst_kkt, rep.stationarity_residual);
            worst_cs = std::max(worst_cs, rep.max_cs_violation);
            worst_feas = std::max(worst_feas, rep.max_primal_violation / rhs_scale);
            worst_dual = std::min(worst_dual, rep.min_ineq_dual);

            const RowspaceFit fit = rowspace_coefficients(sol, ins.H);
            worst_rowspace =
                std::max(worst_rowspace, fit.residual / std::max(1e-300, sol.x.norm()));

            const PrecodeSolution zf = precode_zf_symbol(ins.H, ins.slot, ins.targets);
            if (zf.status == SolveStatus::Optimal && sol.power > zf.power + 1e-9) {
                ++dominance_fail;
            }

            SnrTargets scaled = ins.targets;
            scaled.zeta *= 3.0;
            const PrecodeSolution sol3 = precode_min_power(ins.H, ins.slot, scaled);
            if (sol3.status == SolveStatus::Optimal) {
                worst_scaling = std::max(
                    worst_scaling, std::abs(sol3.power / sol.power - 3.0) / 3.0);
            }

            for (int j = 0; j < ins.H.users(); ++j) {
                const std::complex<double> y = (ins.H.entries.row(j) * sol.x)(0);
                const double gain = ins.targets.sigma * std::sqrt(ins.targets.zeta(j));
                if (detect(spec, y / gain) != ins.slot.indices[j]) ++detect_fail;
            }
        }
        const std::string label = "invariants " + std::to_string(order) + "-qam";
        const bool ok = solver_fail == 0 && worst_feas <= tol.feas &&
                        worst_kkt <= tol.kkt && worst_cs <= tol.cs &&
                        worst_dual >= -tol.dual && worst_rowspace <= 1e-8 &&
                        dominance_fail == 0 && worst_scaling <= 1e-10 && detect_fail == 0;
        char detail[160];
        std::snprintf(detail, sizeof detail,
                      "kkt %.1e cs %.1e feas %.1e rowspace %.1e scaling %.1e", worst_kkt,
                      worst_cs, worst_feas, worst_rowspace, worst_scaling);
        check(label, ok, detail);
    }

    return check.failures;
}

}  // namespace slp
