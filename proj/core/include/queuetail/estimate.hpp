#pragma once

#include <cstdint>
#include <span>

namespace queuetail {

/// Steady-state point estimate with a batch-means standard error.
struct SimEstimate {
    double point = 0.0;
    double std_error = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    std::int64_t batches_used = 0;
};

/// Mean of batch values, std_error = sd / sqrt(B), ci95 = point +- 1.96 std_error.
SimEstimate batch_means_estimate(std::span<const double> batch_values);

/// Same, except that an all-zero estimate gets the rule-of-three interval
/// (0, 3 / effective_samples) instead of a degenerate one.
SimEstimate batch_means_probability(std::span<const double> batch_values, double effective_samples);

}  // namespace queuetail
