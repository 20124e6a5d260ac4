#include "queuetail/model.hpp"

#include "queuetail/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>

namespace queuetail {

namespace {

constexpr double kPmfTolerance = 1e-12;

std::string describe(std::string_view what, double value) {
    std::ostringstream os;
    os.precision(17);
    os << what << " (got " << value << ")";
    return os.str();
}

void require_eps(double eps, std::string_view who) {
    if (!(eps > 0.0 && eps < 1.0)) {
        throw ValidationError(describe(std::string(who) + ": eps must lie in (0,1)", eps));
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// BoundedPmf

BoundedPmf::BoundedPmf(std::vector<std::int64_t> values, std::vector<double> probs)
    : values_(std::move(values)), probs_(std::move(probs)) {
    if (values_.empty()) {
        throw ValidationError("pmf: support is empty");
    }
    if (values_.size() != probs_.size()) {
        throw ValidationError("pmf: values and probs differ in length");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (values_[i] < 0) {
            throw ValidationError(describe("pmf: values must be nonnegative", static_cast<double>(values_[i])));
        }
        if (i > 0 && values_[i] <= values_[i - 1]) {
            throw ValidationError("pmf: values must be strictly increasing");
        }
        if (!(probs_[i] >= 0.0) || !std::isfinite(probs_[i])) {
            throw ValidationError(describe("pmf: probabilities must be finite and nonnegative", probs_[i]));
        }
    }
    const double total = std::accumulate(probs_.begin(), probs_.end(), 0.0);
    if (std::abs(total - 1.0) > kPmfTolerance) {
        throw ValidationError(describe("pmf: probabilities must sum to 1 within 1e-12", total));
    }
    if (std::none_of(probs_.begin(), probs_.end(), [](double p) { return p > 0.0; })) {
        throw ValidationError("pmf: no value carries positive probability");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        mean_ += static_cast<double>(values_[i]) * probs_[i];
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        const double d = static_cast<double>(values_[i]) - mean_;
        variance_ += d * d * probs_[i];
    }
}

BoundedPmf BoundedPmf::point_mass(std::int64_t value) {
    return BoundedPmf({value}, {1.0});
}

BoundedPmf BoundedPmf::bernoulli(double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ValidationError(describe("bernoulli: p must lie in [0,1]", p));
    }
    return BoundedPmf({0, 1}, {1.0 - p, p});
}

double BoundedPmf::prob_of(std::int64_t v) const noexcept {
    const auto it = std::lower_bound(values_.begin(), values_.end(), v);
    if (it == values_.end() || *it != v) {
        return 0.0;
    }
    return probs_[static_cast<std::size_t>(it - values_.begin())];
}

DiffMoments diff_moments(const BoundedPmf& arrival, const BoundedPmf& service) {
    DiffMoments m;
    double third = 0.0;
    for (std::size_t i = 0; i < arrival.size(); ++i) {
        for (std::size_t j = 0; j < service.size(); ++j) {
            const double p = arrival.probs()[i] * service.probs()[j];
            const double d = static_cast<double>(arrival.values()[i] - service.values()[j]);
            third += p * d * d * d;
        }
    }
    m.mean_diff = arrival.mean() - service.mean();
    m.var_sum = arrival.variance() + service.variance();
    m.e3 = std::max(0.0, third);
    m.a_max = std::max(arrival.max_value(), service.max_value());
    return m;
}

// ---------------------------------------------------------------------------
// Systems

JsqSystem::JsqSystem(std::int64_t n, double mu, double eps) : n_(n), mu_(mu), eps_(eps) {
    if (n < 1) {
        throw ValidationError(describe("jsq: n must be >= 1", static_cast<double>(n)));
    }
    if (!(mu > 0.0) || !std::isfinite(mu)) {
        throw ValidationError(describe("jsq: mu must be positive", mu));
    }
    require_eps(eps, "jsq");
}

SsqSystem::SsqSystem(BoundedPmf arrival, BoundedPmf service)
    : arrival_(std::move(arrival)), service_(std::move(service)), eps_(0.0) {
    if (!(arrival_.mean() < service_.mean())) {
        throw ValidationError("ssq: unstable, mean(arrival) must be < mean(service)");
    }
    eps_ = 1.0 - arrival_.mean() / service_.mean();
    require_eps(eps_, "ssq");
    moments_ = diff_moments(arrival_, service_);
}

MmnSystem::MmnSystem(std::int64_t n, double mu, double eps) : n_(n), mu_(mu), eps_(eps) {
    if (n < 1) {
        throw ValidationError(describe("mmn: n must be >= 1", static_cast<double>(n)));
    }
    if (!(mu > 0.0) || !std::isfinite(mu)) {
        throw ValidationError(describe("mmn: mu must be positive", mu));
    }
    require_eps(eps, "mmn");
}

double MmnSystem::eta() const noexcept {
    return 1.0 / std::sqrt(static_cast<double>(n_) * rho());
}

double MmnSystem::zeta() const noexcept {
    return static_cast<double>(n_) * eps_ * eta();
}

HtScaling::HtScaling(double c, double alpha) : c_(c), alpha_(alpha) {
    if (!(c > 0.0) || !std::isfinite(c)) {
        throw ValidationError(describe("scaling: c must be positive", c));
    }
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw ValidationError(describe("scaling: alpha must be positive", alpha));
    }
}

double HtScaling::eps_of(std::int64_t n) const {
    if (n < 1) {
        throw ValidationError(describe("scaling: n must be >= 1", static_cast<double>(n)));
    }
    const double eps = c_ * std::pow(static_cast<double>(n), -alpha_);
    require_eps(eps, "scaling");
    return eps;
}

// ---------------------------------------------------------------------------
// Regimes

Regime classify_regime(double alpha) {
    if (!(alpha > 0.0)) {
        throw ValidationError(describe("regime: alpha must be positive", alpha));
    }
    if (alpha < 0.5) return Regime::SubHalfinWhitt;
    if (alpha == 0.5) return Regime::HalfinWhitt;
    if (alpha < 1.0) return Regime::SuperHalfinWhitt;
    if (alpha == 1.0) return Regime::NonDegenerateSlowdown;
    return Regime::SuperSlowdown;
}

std::string_view to_string(Regime regime) noexcept {
    switch (regime) {
        case Regime::SubHalfinWhitt: return "Sub-HW";
        case Regime::HalfinWhitt: return "HW";
        case Regime::SuperHalfinWhitt: return "Super-HW";
        case Regime::NonDegenerateSlowdown: return "NDS";
        case Regime::SuperSlowdown: return "Super-Slowdown";
    }
    return "unknown";
}

std::string_view to_string(BoundSide side) noexcept {
    return side == BoundSide::Upper ? "upper" : "lower";
}

// ---------------------------------------------------------------------------
// TailBound

double TailBound::log_eval(double x) const noexcept {
    const double pre = c0 + c1 * x;
    if (pre <= 0.0) {
        return -std::numeric_limits<double>::infinity();
    }
    return std::log(pre) - r1 * x - r2 * x * x;
}

double TailBound::eval(double x) const noexcept {
    const double pre = c0 + c1 * x;
    if (pre <= 0.0) {
        return 0.0;
    }
    const double exponent = -r1 * x - r2 * x * x;
    const double log_value = std::log(pre) + exponent;
    if (log_value > 709.0) {
        return std::numeric_limits<double>::infinity();
    }
    return pre * std::exp(exponent);
}

bool TailBound::in_window(double x) const noexcept {
    return x_min_inclusive ? x >= x_min : x > x_min;
}

// ---------------------------------------------------------------------------
// Lattice helpers

namespace {

double snapped_quotient(double x, double eps) {
    const double q = x / eps;
    const double r = std::round(q);
    if (std::abs(q - r) <= 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(q))) {
        return r;
    }
    return q;
}

}  // namespace

std::int64_t lattice_floor(double x, double eps) {
    return static_cast<std::int64_t>(std::floor(snapped_quotient(x, eps)));
}

std::int64_t lattice_ceil(double x, double eps) {
    return static_cast<std::int64_t>(std::ceil(snapped_quotient(x, eps)));
}

}  // namespace queuetail
