#include "queuetail/bounds_ssq.hpp"

#include "queuetail/errors.hpp"

#include <cmath>
#include <numbers>

namespace queuetail::ssq {

SsqBoundParams ssq_bound_params(const SsqSystem& sys) {
    const DiffMoments& m = sys.moments();
    if (!(m.var_sum > 0.0)) {
        throw DegenerateSystemError("ssq_bound_params: Var(a) + Var(s) = 0, bound undefined");
    }
    const double mu = sys.mu();
    const double eps = sys.eps();
    const double s2 = m.var_sum;
    const double a4 = std::pow(static_cast<double>(m.a_max), 4);

    SsqBoundParams p;
    p.theta_eps = 2.0 * mu / s2;
    p.kappa_ssq = 2.0 * mu * m.e3 / (3.0 * s2 * s2) + eps * 9.0 * mu * mu * a4 / (s2 * s2 * s2);
    p.rate = p.theta_eps * (1.0 - p.kappa_ssq * eps);
    p.x_min = (1.0 + p.kappa_ssq * eps) / p.theta_eps;
    p.x_min_printed = p.theta_eps / (1.0 + p.kappa_ssq * eps);
    return p;
}

TailBound ssq_tail_upper(const SsqSystem& sys) {
    const auto p = ssq_bound_params(sys);
    TailBound b;
    b.side = BoundSide::Upper;
    b.c0 = 0.0;
    b.c1 = std::numbers::e * p.theta_eps;
    b.r1 = p.rate;
    b.r2 = 0.0;
    b.x_min = p.x_min;
    b.x_min_inclusive = false;
    b.conditions_met = true;
    return b;
}

double ssq_ld_rate(const SsqSystem& sys) { return ssq_bound_params(sys).rate; }

double ssq_mgf_window(const SsqSystem& sys) {
    const auto p = ssq_bound_params(sys);
    return p.theta_eps / (1.0 + p.kappa_ssq * sys.eps());
}

double ssq_mgf_bound(const SsqSystem& sys, double theta) {
    const auto p = ssq_bound_params(sys);
    const double hi = p.theta_eps / (1.0 + p.kappa_ssq * sys.eps());
    if (!(theta > 0.0 && theta < hi)) {
        throw DomainError("ssq_mgf_bound: theta must lie in (0, theta_eps/(1+kappa eps))");
    }
    return 1.0 / (1.0 - theta / hi);
}

double ssq_gamma(const SsqSystem& sys, double theta) {
    const auto& a = sys.arrival();
    const auto& s = sys.service();
    const double scale = sys.eps() * theta;
    // 1 - E[e^{x}] = -E[expm1(x)], no cancellation near theta = 0
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < s.size(); ++j) {
            const double d = static_cast<double>(a.values()[i] - s.values()[j]);
            acc += a.probs()[i] * s.probs()[j] * std::expm1(scale * d);
        }
    }
    return -acc;
}

double ssq_gamma_lower_bound(const SsqSystem& sys, double theta) {
    const auto p = ssq_bound_params(sys);
    const double eps = sys.eps();
    return theta * eps * eps * sys.mu() * (1.0 - theta / p.theta_eps * (1.0 + p.kappa_ssq * eps));
}

double ssq_unused_service_bound(const SsqSystem& sys, double theta) noexcept {
    return sys.eps() * sys.eps() * theta * sys.mu();
}

double markov_tail_from_mgf(double lambda_rate, double x) {
    if (!(lambda_rate > 0.0)) {
        throw DomainError("markov_tail_from_mgf: rate must be positive");
    }
    if (!(x > 1.0 / lambda_rate)) {
        throw DomainError("markov_tail_from_mgf: x must exceed 1/rate");
    }
    const double lx = lambda_rate * x;
    return std::numbers::e * lx * std::exp(-lx);
}

bool ssq_claim2_check(const SimEstimate& sim_u, double theta, const SsqSystem& sys) noexcept {
    return 1.0 - sim_u.point <= ssq_unused_service_bound(sys, theta) + 3.0 * sim_u.std_error;
}

double ssq_mgf_recursion_step(const SsqSystem& sys, double theta, double mgf_now, double beta_now) {
    return (1.0 - ssq_gamma(sys, theta)) * mgf_now + beta_now;
}

}  // namespace queuetail::ssq
