#include "queuetail/errors.hpp"
#include "queuetail/estimate.hpp"
#include "queuetail/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>

namespace queuetail {

void SimConfig::validate() const {
    if (horizon_events < 1) {
        throw ValidationError("sim: horizon_events must be positive");
    }
    if (!(warmup_fraction >= 0.0 && warmup_fraction <= 0.5)) {
        throw ValidationError("sim: warmup_fraction must lie in [0, 0.5]");
    }
    if (batches < 8) {
        throw ValidationError("sim: batches must be >= 8");
    }
    if (replications < 1) {
        throw ValidationError("sim: replications must be >= 1");
    }
    if (static_cast<double>(horizon_events) * (1.0 - warmup_fraction) < 100.0 * static_cast<double>(batches)) {
        throw ValidationError("sim: horizon too short, each batch needs at least 100 events");
    }
    for (double x : tail_grid) {
        if (!std::isfinite(x) || x < 0.0) {
            throw ValidationError("sim: tail_grid values must be finite and nonnegative");
        }
    }
    for (double t : theta_grid) {
        if (!std::isfinite(t)) {
            throw ValidationError("sim: theta_grid values must be finite");
        }
    }
    if (!(ld_lo <= ld_hi)) {
        throw ValidationError("sim: ld window must satisfy lo <= hi");
    }
}

std::int64_t SimConfig::warmup_events() const {
    return static_cast<std::int64_t>(warmup_fraction * static_cast<double>(horizon_events));
}

std::int64_t SimConfig::batch_length() const {
    return (horizon_events - warmup_events()) / batches;
}

SimEstimate batch_means_estimate(std::span<const double> batch_values) {
    const auto b = static_cast<std::int64_t>(batch_values.size());
    if (b < 2) {
        throw EstimationError("batch means: need at least two batches");
    }
    double sum = 0.0;
    for (double v : batch_values) {
        sum += v;
    }
    const double mean = sum / static_cast<double>(b);
    double ss = 0.0;
    for (double v : batch_values) {
        ss += (v - mean) * (v - mean);
    }
    SimEstimate e;
    e.point = mean;
    e.std_error = std::sqrt(ss / static_cast<double>(b - 1) / static_cast<double>(b));
    e.ci_lo = mean - 1.96 * e.std_error;
    e.ci_hi = mean + 1.96 * e.std_error;
    e.batches_used = b;
    return e;
}

SimEstimate batch_means_probability(std::span<const double> batch_values, double effective_samples) {
    SimEstimate e = batch_means_estimate(batch_values);
    const bool all_zero = std::all_of(batch_values.begin(), batch_values.end(), [](double v) { return v == 0.0; });
    if (all_zero) {
        e.ci_lo = 0.0;
        e.ci_hi = std::min(1.0, 3.0 / effective_samples);
    }
    return e;
}

LdSlope estimate_ld_slope(const std::map<double, SimEstimate>& tail, double x_lo, double x_hi) {
    std::vector<double> xs;
    std::vector<double> ys;
    std::vector<double> ws;
    bool weighted = true;
    for (const auto& [x, est] : tail) {
        if (x < x_lo || x > x_hi || !(est.point > 0.0)) {
            continue;
        }
        xs.push_back(x);
        ys.push_back(-std::log(est.point));
        const double rel = est.std_error / est.point;
        if (!(rel > 0.0)) {
            weighted = false;
        }
        ws.push_back(rel > 0.0 ? 1.0 / (rel * rel) : 1.0);
    }
    const auto m = static_cast<std::int64_t>(xs.size());
    if (m < 4) {
        throw EstimationError("ld slope: fewer than 4 positive tail estimates in window");
    }
    if (!weighted) {
        std::fill(ws.begin(), ws.end(), 1.0);
    }
    double sw = 0.0;
    double sx = 0.0;
    double sy = 0.0;
    for (std::int64_t i = 0; i < m; ++i) {
        sw += ws[i];
        sx += ws[i] * xs[i];
        sy += ws[i] * ys[i];
    }
    const double xbar = sx / sw;
    const double ybar = sy / sw;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::int64_t i = 0; i < m; ++i) {
        sxx += ws[i] * (xs[i] - xbar) * (xs[i] - xbar);
        sxy += ws[i] * (xs[i] - xbar) * (ys[i] - ybar);
    }
    if (!(sxx > 0.0)) {
        throw EstimationError("ld slope: x values in window are degenerate");
    }
    LdSlope out;
    out.slope = sxy / sxx;
    double rss = 0.0;
    for (std::int64_t i = 0; i < m; ++i) {
        const double r = ys[i] - ybar - out.slope * (xs[i] - xbar);
        rss += ws[i] * r * r;
    }
    const double dispersion = rss / static_cast<double>(m - 2);
    const double scale = weighted ? std::max(1.0, dispersion) : dispersion;
    out.std_error = std::sqrt(scale / sxx);
    out.ci_lo = out.slope - 1.96 * out.std_error;
    out.ci_hi = out.slope + 1.96 * out.std_error;
    out.points_used = m;
    out.valid = true;
    return out;
}

unsigned worker_count(unsigned requested, std::int64_t tasks) {
    unsigned n = requested;
    if (n == 0) {
        if (const char* env = std::getenv("QUEUETAIL_THREADS")) {
            try {
                const long v = std::stol(env);
                n = v > 0 ? static_cast<unsigned>(v) : 1U;
            } catch (const std::exception&) {
                n = 1;
            }
        } else {
            n = std::max(1U, std::thread::hardware_concurrency());
        }
    }
    if (tasks < static_cast<std::int64_t>(n)) {
        n = static_cast<unsigned>(std::max<std::int64_t>(1, tasks));
    }
    return n;
}

}  // namespace queuetail
