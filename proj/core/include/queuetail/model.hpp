#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace queuetail {

/// Finite probability mass function on nonnegative integers.
///
/// Values must be strictly increasing and nonnegative; probabilities must be
/// nonnegative and sum to one within 1e-12. Inputs are never renormalized:
/// a PMF that fails the checks is rejected with ValidationError.
class BoundedPmf {
public:
    BoundedPmf(std::vector<std::int64_t> values, std::vector<double> probs);

    static BoundedPmf point_mass(std::int64_t value);
    /// Law on {0,1} with P(1) = p.
    static BoundedPmf bernoulli(double p);

    std::span<const std::int64_t> values() const noexcept { return values_; }
    std::span<const double> probs() const noexcept { return probs_; }
    std::size_t size() const noexcept { return values_.size(); }

    std::int64_t max_value() const noexcept { return values_.back(); }
    double mean() const noexcept { return mean_; }
    double variance() const noexcept { return variance_; }

    /// P(X = v); zero off the support.
    double prob_of(std::int64_t v) const noexcept;

private:
    std::vector<std::int64_t> values_;
    std::vector<double> probs_;
    double mean_ = 0.0;
    double variance_ = 0.0;
};

/// Moments of the one-slot increment a - s for independent a, s.
struct DiffMoments {
    double mean_diff = 0.0;   // E[a] - E[s]
    double var_sum = 0.0;     // Var(a) + Var(s)
    double e3 = 0.0;          // max{0, E[(a-s)^3]}
    std::int64_t a_max = 0;   // max of both supports
};

DiffMoments diff_moments(const BoundedPmf& arrival, const BoundedPmf& service);

/// n parallel exponential servers fed by one Poisson stream, lambda = n mu (1 - eps).
class JsqSystem {
public:
    JsqSystem(std::int64_t n, double mu, double eps);

    std::int64_t n() const noexcept { return n_; }
    double mu() const noexcept { return mu_; }
    double eps() const noexcept { return eps_; }
    double lambda() const noexcept { return static_cast<double>(n_) * mu_ * (1.0 - eps_); }
    double rho() const noexcept { return 1.0 - eps_; }

private:
    std::int64_t n_;
    double mu_;
    double eps_;
};

/// Discrete-time single-server queue q(t+1) = [q(t) + a(t) - s(t)]^+.
class SsqSystem {
public:
    SsqSystem(BoundedPmf arrival, BoundedPmf service);

    const BoundedPmf& arrival() const noexcept { return arrival_; }
    const BoundedPmf& service() const noexcept { return service_; }
    double lambda() const noexcept { return arrival_.mean(); }
    double mu() const noexcept { return service_.mean(); }
    /// eps = 1 - lambda / mu.
    double eps() const noexcept { return eps_; }
    const DiffMoments& moments() const noexcept { return moments_; }

private:
    BoundedPmf arrival_;
    BoundedPmf service_;
    double eps_;
    DiffMoments moments_;
};

/// Erlang-C queue with lambda = n mu (1 - eps).
class MmnSystem {
public:
    MmnSystem(std::int64_t n, double mu, double eps);

    std::int64_t n() const noexcept { return n_; }
    double mu() const noexcept { return mu_; }
    double eps() const noexcept { return eps_; }
    double rho() const noexcept { return 1.0 - eps_; }
    double lambda() const noexcept { return static_cast<double>(n_) * mu_ * (1.0 - eps_); }
    /// Idle-server scaling 1 / sqrt(n rho).
    double eta() const noexcept;
    /// n eps eta, the centring of eta * r in units of the scaling.
    double zeta() const noexcept;

private:
    std::int64_t n_;
    double mu_;
    double eps_;
};

/// eps_n = c n^-alpha.
class HtScaling {
public:
    HtScaling(double c, double alpha);

    double c() const noexcept { return c_; }
    double alpha() const noexcept { return alpha_; }
    /// Throws ValidationError when the value leaves (0,1).
    double eps_of(std::int64_t n) const;

private:
    double c_;
    double alpha_;
};

enum class Regime {
    SubHalfinWhitt,          // alpha in (0, 1/2)
    HalfinWhitt,             // alpha = 1/2
    SuperHalfinWhitt,        // alpha in (1/2, 1)
    NonDegenerateSlowdown,   // alpha = 1
    SuperSlowdown,           // alpha > 1
};

/// Exact comparison on the supplied alpha; no tolerance.
Regime classify_regime(double alpha);
std::string_view to_string(Regime regime) noexcept;

enum class BoundSide { Upper, Lower };
std::string_view to_string(BoundSide side) noexcept;

/// (c0 + c1 x) exp(-r1 x - r2 x^2) on a validity window starting at x_min.
///
/// The bound is always evaluable; `conditions_met` records whether the
/// preconditions of the underlying result hold for the system it was built
/// from, and `applies_at` adds the window check.
struct TailBound {
    BoundSide side = BoundSide::Upper;
    double c0 = 0.0;
    double c1 = 0.0;
    double r1 = 0.0;
    double r2 = 0.0;
    double x_min = 0.0;
    bool x_min_inclusive = false;
    bool conditions_met = true;

    /// Returns +inf rather than overflowing through NaN; never negative.
    double eval(double x) const noexcept;
    double log_eval(double x) const noexcept;
    bool in_window(double x) const noexcept;
    bool applies_at(double x) const noexcept { return conditions_met && in_window(x); }
};

/// floor(x / eps) with quotients within a few ulps of an integer snapped to it,
/// so lattice points x = k eps are classified the same way by every module.
std::int64_t lattice_floor(double x, double eps);
/// ceil(x / eps) with the same snapping.
std::int64_t lattice_ceil(double x, double eps);

}  // namespace queuetail
