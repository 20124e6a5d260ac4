#include "queuetail/exact.hpp"

#include "queuetail/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace queuetail::exact {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_add(double a, double b) noexcept {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    if (a < b) std::swap(a, b);
    return a + std::log1p(std::exp(b - a));
}

// Rebuilds a birth-death law from its ratios pi_{k+1} / pi_k in linear space,
// anchored at the mode, so that rounding grows with the distance to the mode
// rather than with the magnitude of the log prefix sums.
StationaryDistribution finalize_ratios(const std::vector<double>& log_pi, const std::vector<double>& ratio,
                                       double log_tail) {
    const std::size_t size = log_pi.size();
    const auto mode = static_cast<std::size_t>(std::max_element(log_pi.begin(), log_pi.end()) - log_pi.begin());
    std::vector<double> v(size, 0.0);
    v[mode] = 1.0;
    for (std::size_t k = mode + 1; k < size; ++k) {
        v[k] = v[k - 1] * ratio[k - 1];
    }
    for (std::size_t k = mode; k-- > 0;) {
        v[k] = v[k + 1] / ratio[k];
    }
    double sum = 0.0;
    double carry = 0.0;
    for (double x : v) {
        const double y = x - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    StationaryDistribution d;
    d.truncation_k = static_cast<std::int64_t>(size) - 1;
    d.probs.resize(size);
    d.log_probs.resize(size);
    const double log_sum = std::log(sum);
    for (std::size_t k = 0; k < size; ++k) {
        d.probs[k] = v[k] / sum;
        d.log_probs[k] = v[k] > 1e-290 ? std::log(v[k]) - log_sum : log_pi[k] - log_pi[mode] - log_sum;
    }
    d.certified_tail_mass = log_tail == kNegInf ? 0.0 : std::exp(log_tail - log_pi[mode] - log_sum);
    return d;
}

}  // namespace

double StationaryDistribution::tail_above(std::int64_t k) const noexcept {
    if (k < 0) return 1.0;
    double s = 0.0;
    for (std::int64_t j = truncation_k; j > k; --j) {
        s += probs[static_cast<std::size_t>(j)];
    }
    return s;
}

StationaryDistribution birth_death_stationary(const RateFn& birth, const RateFn& death,
                                              BirthDeathOptions options) {
    if (!(options.tail_tol > 0.0)) {
        throw ValidationError("birth_death_stationary: tail_tol must be positive");
    }
    const double log_tol = std::log(options.tail_tol);
    std::vector<double> log_pi{0.0};
    std::vector<double> ratio;
    double log_total = 0.0;
    double log_tail = kNegInf;

    for (std::int64_t k = 0;; ++k) {
        const double b = birth(k);
        if (!(b >= 0.0) || !std::isfinite(b)) {
            throw ValidationError("birth_death_stationary: birth rate must be finite and >= 0 at k=" +
                                  std::to_string(k));
        }
        if (b == 0.0) {
            break;  // absorbing upper boundary
        }
        const double d = death(k + 1);
        if (!(d > 0.0) || !std::isfinite(d)) {
            throw ValidationError("birth_death_stationary: death rate must be finite and > 0 at k=" +
                                  std::to_string(k + 1));
        }
        const double log_ratio = std::log(b) - std::log(d);
        const double lk = log_pi.back();
        if (log_ratio < 0.0) {
            // remaining mass <= pi_k r / (1 - r) when ratios do not increase beyond k
            const double log_bound = lk + log_ratio - std::log(-std::expm1(log_ratio));
            if (log_bound - log_total < log_tol) {
                log_tail = log_bound;
                break;
            }
        }
        if (k + 1 >= options.max_states) {
            throw InstabilityError("birth_death_stationary: no geometric decay within " +
                                   std::to_string(options.max_states) + " states");
        }
        const double next = lk + log_ratio;
        log_pi.push_back(next);
        ratio.push_back(b / d);
        log_total = log_add(log_total, next);
    }
    return finalize_ratios(log_pi, ratio, log_tail);
}

StationaryDistribution mmn_stationary(const MmnSystem& sys, BirthDeathOptions options) {
    const double lambda = sys.lambda();
    const double mu = sys.mu();
    const std::int64_t n = sys.n();
    return birth_death_stationary(
        [lambda](std::int64_t) { return lambda; },
        [mu, n](std::int64_t k) { return mu * static_cast<double>(std::min(k, n)); },
        options);
}

double mm1_scaled_tail(double eps, double x) {
    if (!(eps > 0.0 && eps < 1.0)) {
        throw ValidationError("mm1_scaled_tail: eps must lie in (0,1)");
    }
    if (x < 0.0) return 1.0;
    const auto k = lattice_floor(x, eps);
    return std::exp(static_cast<double>(k + 1) * std::log1p(-eps));
}

// ---------------------------------------------------------------------------
// Bernoulli SSQ

double BernoulliSsqLaw::pmf(std::int64_t k) const noexcept {
    if (k < 0) return 0.0;
    return (1.0 - r) * std::pow(r, static_cast<double>(k));
}

double BernoulliSsqLaw::tail_count(std::int64_t k) const noexcept {
    if (k < 0) return 1.0;
    return std::pow(r, static_cast<double>(k + 1));
}

double BernoulliSsqLaw::scaled_tail(double eps, double x) const noexcept {
    if (x < 0.0) return 1.0;
    return tail_count(lattice_floor(x, eps));
}

double BernoulliSsqLaw::mgf(double s) const {
    if (!(r * std::exp(s) < 1.0)) {
        throw DomainError("bernoulli ssq mgf: s must be < log(1/r)");
    }
    return (1.0 - r) / (1.0 - r * std::exp(s));
}

double BernoulliSsqLaw::ld_rate(double eps) const noexcept {
    return -std::log(r) / eps;
}

BernoulliSsqLaw bernoulli_ssq_stationary(double p_a, double p_s) {
    if (!(p_a >= 0.0 && p_s <= 1.0 && p_a < p_s)) {
        throw ValidationError("bernoulli_ssq_stationary: need 0 <= p_a < p_s <= 1");
    }
    BernoulliSsqLaw law;
    law.p_a = p_a;
    law.p_s = p_s;
    law.up = p_a * (1.0 - p_s);
    law.down = p_s * (1.0 - p_a);
    law.r = law.up / law.down;
    return law;
}

// ---------------------------------------------------------------------------
// Generic SSQ by power iteration

namespace {

struct Increment {
    std::int64_t d;
    double p;
};

std::vector<Increment> increment_law(const SsqSystem& sys) {
    const auto& a = sys.arrival();
    const auto& s = sys.service();
    std::vector<Increment> out;
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < s.size(); ++j) {
            const double p = a.probs()[i] * s.probs()[j];
            if (p == 0.0) continue;
            const std::int64_t d = a.values()[i] - s.values()[j];
            auto it = std::find_if(out.begin(), out.end(), [d](const Increment& x) { return x.d == d; });
            if (it == out.end()) {
                out.push_back({d, p});
            } else {
                it->p += p;
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const Increment& x, const Increment& y) { return x.d < y.d; });
    return out;
}

void step_into(std::span<const Increment> inc, std::span<const double> from, std::vector<double>& to) {
    const auto k_max = static_cast<std::int64_t>(from.size()) - 1;
    std::fill(to.begin(), to.end(), 0.0);
    for (std::int64_t q = 0; q <= k_max; ++q) {
        const double m = from[static_cast<std::size_t>(q)];
        if (m == 0.0) continue;
        for (const auto& [d, p] : inc) {
            const std::int64_t next = std::clamp<std::int64_t>(q + d, 0, k_max);
            to[static_cast<std::size_t>(next)] += m * p;
        }
    }
}

}  // namespace

std::vector<double> ssq_step(const SsqSystem& sys, std::span<const double> dist) {
    const auto inc = increment_law(sys);
    std::vector<double> out(dist.size());
    step_into(inc, dist, out);
    return out;
}

StationaryDistribution ssq_stationary(const SsqSystem& sys, PowerIterationOptions options) {
    const auto inc = increment_law(sys);
    const std::int64_t a_max = sys.moments().a_max;
    std::int64_t k = std::max<std::int64_t>(options.initial_k, 4 * a_max + 8);

    std::vector<double> cur(static_cast<std::size_t>(k + 1), 0.0);
    cur[0] = 1.0;
    std::vector<double> next(cur.size());
    std::int64_t iterations = 0;

    for (;;) {
        double tv = 1.0;
        while (tv >= options.tol) {
            if (++iterations > options.max_iterations) {
                throw NumericalError("ssq_stationary: power iteration did not converge", tv);
            }
            step_into(inc, cur, next);
            tv = 0.0;
            for (std::size_t i = 0; i < cur.size(); ++i) {
                tv += std::abs(next[i] - cur[i]);
            }
            tv *= 0.5;
            cur.swap(next);
        }
        const std::int64_t window = std::max<std::int64_t>(8, 4 * a_max);
        double top = 0.0;
        for (std::int64_t q = k; q > k - window && q >= 0; --q) {
            top += cur[static_cast<std::size_t>(q)];
        }
        if (top < options.tail_tol) {
            double total = 0.0;
            for (double v : cur) total += v;
            StationaryDistribution d;
            d.truncation_k = k;
            d.probs.resize(cur.size());
            d.log_probs.resize(cur.size());
            for (std::size_t i = 0; i < cur.size(); ++i) {
                d.probs[i] = cur[i] / total;
                d.log_probs[i] = d.probs[i] > 0.0 ? std::log(d.probs[i]) : kNegInf;
            }
            d.certified_tail_mass = top;
            return d;
        }
        if (2 * k > options.max_k) {
            throw InstabilityError("ssq_stationary: truncation exceeded max_k without negligible top mass");
        }
        k *= 2;
        cur.resize(static_cast<std::size_t>(k + 1), 0.0);
        next.resize(cur.size());
    }
}

double ssq_unused_service_deficit(const SsqSystem& sys, const StationaryDistribution& pi, double theta) {
    const auto& a = sys.arrival();
    const auto& s = sys.service();
    const double scale = theta * sys.eps();
    double deficit = 0.0;
    const std::int64_t q_top = std::min<std::int64_t>(pi.truncation_k, s.max_value());
    for (std::int64_t q = 0; q <= q_top; ++q) {
        const double pq = pi.probs[static_cast<std::size_t>(q)];
        for (std::size_t i = 0; i < a.size(); ++i) {
            for (std::size_t j = 0; j < s.size(); ++j) {
                const std::int64_t u = std::max<std::int64_t>(0, s.values()[j] - a.values()[i] - q);
                if (u == 0) continue;
                deficit += pq * a.probs()[i] * s.probs()[j] * -std::expm1(-scale * static_cast<double>(u));
            }
        }
    }
    return deficit;
}

double ssq_unused_service_mgf(const SsqSystem& sys, const StationaryDistribution& pi, double theta) {
    return 1.0 - ssq_unused_service_deficit(sys, pi, theta);
}

double ssq_unused_service_mean(const SsqSystem& sys, const StationaryDistribution& pi) {
    const auto& a = sys.arrival();
    const auto& s = sys.service();
    double mean = 0.0;
    const std::int64_t q_top = std::min<std::int64_t>(pi.truncation_k, s.max_value());
    for (std::int64_t q = 0; q <= q_top; ++q) {
        const double pq = pi.probs[static_cast<std::size_t>(q)];
        for (std::size_t i = 0; i < a.size(); ++i) {
            for (std::size_t j = 0; j < s.size(); ++j) {
                const std::int64_t u = std::max<std::int64_t>(0, s.values()[j] - a.values()[i] - q);
                mean += pq * a.probs()[i] * s.probs()[j] * static_cast<double>(u);
            }
        }
    }
    return mean;
}

double stationary_scaled_mgf(const StationaryDistribution& pi, double eps, double theta) {
    double log_sum = kNegInf;
    for (std::size_t k = 0; k < pi.log_probs.size(); ++k) {
        log_sum = log_add(log_sum, pi.log_probs[k] + theta * eps * static_cast<double>(k));
    }
    return std::exp(log_sum);
}

double std_normal_cdf(double x) noexcept {
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

}  // namespace queuetail::exact
