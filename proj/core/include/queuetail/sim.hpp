#pragma once

#include "queuetail/estimate.hpp"
#include "queuetail/model.hpp"

#include <cstdint>
#include <limits>
#include <map>
#include <vector>

namespace queuetail {

/// Run-length and estimator settings shared by both simulators.
///
/// horizon_events counts events (JSQ) or slots (SSQ) per replication. The
/// first warmup_fraction of them are discarded and the rest are cut into
/// `batches` equal batches; replications contribute batches * replications
/// batch values in replication order. For near-critical systems a horizon of
/// at least 100 / eps^2 events is recommended.
struct SimConfig {
    std::uint64_t seed = 0;
    std::int64_t horizon_events = 10'000'000;
    double warmup_fraction = 0.2;
    std::int64_t batches = 32;
    std::int64_t replications = 1;
    std::vector<double> tail_grid;
    std::vector<double> theta_grid;
    /// x range used for the LD slope fit of the simulated tail.
    double ld_lo = 0.0;
    double ld_hi = std::numeric_limits<double>::infinity();
    /// Worker threads for replications; 0 means QUEUETAIL_THREADS or hardware concurrency.
    unsigned threads = 0;

    /// Throws ValidationError on out-of-range fields or batches shorter than 100 events.
    void validate() const;
    std::int64_t warmup_events() const;
    std::int64_t batch_length() const;
};

/// Slope of -log(tail) against x and its standard error.
struct LdSlope {
    double slope = 0.0;
    double std_error = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    std::int64_t points_used = 0;
    bool valid = false;
};

/// Weighted least squares of -log p on x over grid points in [x_lo, x_hi]
/// with p > 0, weights (p / se)^2. Falls back to ordinary least squares when
/// any standard error is zero; the slope error is inflated by the residual
/// dispersion when it exceeds one. Throws EstimationError with fewer than 4
/// usable points or a degenerate x spread.
LdSlope estimate_ld_slope(const std::map<double, SimEstimate>& tail, double x_lo, double x_hi);

struct JsqStats {
    std::map<double, SimEstimate> tail;       // P(eps sum q > x)
    std::map<double, SimEstimate> mgf;        // E[e^{theta eps sum q}]
    std::map<double, SimEstimate> beta;       // E[mu sum_i 1{q_i = 0} e^{theta eps sum q}]
    std::map<double, SimEstimate> perp_mgf;   // (1/n) sum_i E[e^{theta |q_i - mean q|}]
    SimEstimate empty_frac;                   // P(q_i = 0)
    LdSlope ld_slope;                         // fitted on tail over [ld_lo, ld_hi]
    std::int64_t events = 0;                  // total over replications
};

/// Event-driven JSQ simulation with time-average estimates.
///
/// The state is the number of queues at each length. An arrival joins the
/// shortest length present, which is uniform tie-breaking up to exchangeability;
/// a departure leaves a uniformly chosen busy server. Each visited state is
/// weighted by its expected holding time 1 / (lambda + mu * busy).
JsqStats simulate_jsq(const JsqSystem& sys, const SimConfig& cfg);

struct SsqStats {
    std::map<double, SimEstimate> tail;            // P(eps q > x)
    std::map<double, SimEstimate> mgf;             // E[e^{theta eps q}]
    std::map<double, SimEstimate> e_neg_theta_u;   // E[e^{-theta eps u}]
    SimEstimate mean_u;                            // E[u]
    std::int64_t slots = 0;
};

/// Lindley recursion from q(0) = 0, recording the unused service
/// u(t) = q(t+1) - q(t) - a(t) + s(t).
SsqStats simulate_ssq(const SsqSystem& sys, const SimConfig& cfg);

/// Effective worker count: cfg.threads if set, else QUEUETAIL_THREADS, else
/// hardware concurrency; never above `tasks`, never below one.
unsigned worker_count(unsigned requested, std::int64_t tasks);

}  // namespace queuetail
