#pragma once

#include "rows.hpp"

#include "queuetail/model.hpp"
#include "queuetail/sim.hpp"

#include <string>
#include <vector>

namespace queuetail::cli {

enum ExitCode : int {
    kOk = 0,
    kInputError = 1,
    kNumericalFailure = 2,
    kVerificationFailure = 3,
};

/// Raised by commands whose internal cross-check exceeds its tolerance.
/// Rows computed so far are still emitted.
struct ResidualFailure {
    std::string what;
};

std::vector<Row> bounds_jsq_rows(const JsqSystem& sys, const std::vector<double>& xs);
std::vector<Row> bounds_ssq_rows(const SsqSystem& sys, const std::vector<double>& xs,
                                 const std::vector<double>& thetas);
std::vector<Row> bounds_mmn_rows(std::int64_t n, double mu, const HtScaling& scaling,
                                 const std::vector<double>& xs);

std::vector<Row> exact_mm1_rows(double eps, const std::vector<double>& xs);

/// Dual-path M/M/n summary. `max_residual` receives the largest relative
/// disagreement between the G_n formulas and the birth-death solver.
std::vector<Row> exact_mmn_rows(const MmnSystem& sys, const std::vector<double>& thetas, double& max_residual);

/// Power-iteration stationary law; Bernoulli pairs are also checked
/// against the geometric closed form (`max_residual`: largest absolute tail
/// difference, else 0).
std::vector<Row> exact_ssq_rows(const SsqSystem& sys, const std::vector<double>& xs,
                                const std::vector<double>& thetas, double& max_residual);

std::vector<Row> simulate_jsq_rows(const JsqSystem& sys, const SimConfig& cfg);
std::vector<Row> simulate_ssq_rows(const SsqSystem& sys, const SimConfig& cfg);

inline constexpr double kResidualTolerance = 1e-8;

}  // namespace queuetail::cli
