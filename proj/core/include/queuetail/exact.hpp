#pragma once

#include "queuetail/model.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace queuetail::exact {

/// Truncated stationary law on states 0..truncation_k.
///
/// `log_probs` carries the normalized log-probabilities, which stay finite
/// where `probs` underflows to zero (large-n chains span thousands of
/// orders of magnitude).
struct StationaryDistribution {
    std::vector<double> probs;
    std::vector<double> log_probs;
    std::int64_t truncation_k = 0;
    double certified_tail_mass = 0.0;

    /// P(X > k) over the retained states.
    double tail_above(std::int64_t k) const noexcept;
};

using RateFn = std::function<double(std::int64_t)>;

struct BirthDeathOptions {
    double tail_tol = 1e-12;
    std::int64_t max_states = std::int64_t{1} << 26;
};

/// Stationary law of a birth-death chain from pi_{k+1}/pi_k = birth(k)/death(k+1),
/// accumulated in log space.
///
/// Truncates at the first k where birth(k)/death(k+1) < 1 and the geometric
/// bound pi_k r/(1-r) on the remaining mass drops below tail_tol; this bound
/// is exact for chains whose ratio is non-increasing beyond k (M/M/1, M/M/n,
/// Bernoulli SSQ). Throws InstabilityError if max_states is exhausted.
StationaryDistribution birth_death_stationary(const RateFn& birth, const RateFn& death,
                                              BirthDeathOptions options = {});

/// Convenience wrapper: the M/M/n queue-length chain.
StationaryDistribution mmn_stationary(const MmnSystem& sys, BirthDeathOptions options = {});

/// P(eps q > x) = (1-eps)^{floor(x/eps)+1} for the M/M/1 queue at load 1-eps.
double mm1_scaled_tail(double eps, double x);

/// Closed-form stationary law of the SSQ with Bernoulli(p_a) arrivals and
/// Bernoulli(p_s) service: pi_k = (1 - r) r^k.
struct BernoulliSsqLaw {
    double p_a = 0.0;
    double p_s = 0.0;
    double up = 0.0;     // p_a (1 - p_s)
    double down = 0.0;   // p_s (1 - p_a)
    double r = 0.0;      // up / down

    double pmf(std::int64_t k) const noexcept;
    /// P(q > k).
    double tail_count(std::int64_t k) const noexcept;
    /// P(eps q > x).
    double scaled_tail(double eps, double x) const noexcept;
    /// E[e^{s q}], finite for s < log(1/r).
    double mgf(double s) const;
    /// Exact decay rate of P(eps q > x): log(1/r) / eps.
    double ld_rate(double eps) const noexcept;
};

BernoulliSsqLaw bernoulli_ssq_stationary(double p_a, double p_s);

/// One Lindley step applied to a distribution on 0..K, with any mass that
/// would leave the window accumulated at K.
std::vector<double> ssq_step(const SsqSystem& sys, std::span<const double> dist);

struct PowerIterationOptions {
    double tol = 1e-12;          // total variation between successive iterates
    double tail_tol = 1e-12;     // mass allowed in the top A_max states
    std::int64_t initial_k = 64;
    std::int64_t max_k = std::int64_t{1} << 20;
    std::int64_t max_iterations = 20'000'000;
};

/// Stationary law of an arbitrary bounded-PMF SSQ by truncated power
/// iteration, doubling the truncation until the top states are negligible.
StationaryDistribution ssq_stationary(const SsqSystem& sys, PowerIterationOptions options = {});

/// E_pi[e^{-theta eps u}] for the unused service u = [s - a - q]^+.
double ssq_unused_service_mgf(const SsqSystem& sys, const StationaryDistribution& pi, double theta);
/// 1 - E_pi[e^{-theta eps u}], summed without cancellation.
double ssq_unused_service_deficit(const SsqSystem& sys, const StationaryDistribution& pi, double theta);
/// E_pi[u].
double ssq_unused_service_mean(const SsqSystem& sys, const StationaryDistribution& pi);
/// E_pi[e^{theta eps q}].
double stationary_scaled_mgf(const StationaryDistribution& pi, double eps, double theta);

/// Standard normal CDF via the complementary error function.
double std_normal_cdf(double x) noexcept;

}  // namespace queuetail::exact
