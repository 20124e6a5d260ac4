#include "queuetail/bounds_jsq.hpp"

#include "queuetail/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace queuetail::jsq {

double JsqConstants::kappa2() noexcept {
    return 4.0 * std::numbers::e * kappa_perp * kappa_perp / theta_perp;
}

double theta_n(double eps) {
    if (!(eps > 0.0 && eps < 1.0)) {
        throw ValidationError("theta_n: eps must lie in (0,1), got " + std::to_string(eps));
    }
    return -std::log1p(-eps) / eps;
}

double jsq_ld_rate(double eps) { return theta_n(eps); }

bool ssc_condition(const JsqSystem& sys) noexcept {
    const double eps = sys.eps();
    if (eps > 0.5) {
        return false;
    }
    const double lhs = static_cast<double>(sys.n()) * eps * std::log(1.0 / eps);
    return lhs < JsqConstants::theta_perp / 4.0;
}

TailBound jsq_tail_upper(const JsqSystem& sys) {
    const double eps = sys.eps();
    const double ssc_term = static_cast<double>(sys.n()) * eps * std::log(1.0 / eps);
    TailBound b;
    b.side = BoundSide::Upper;
    b.c0 = 0.0;
    b.c1 = 2.0 * std::numbers::e * (1.0 + JsqConstants::kappa2() * ssc_term);
    b.r1 = theta_n(eps);
    b.r2 = 0.0;
    b.x_min = 1.0 - eps;
    b.x_min_inclusive = false;
    b.conditions_met = ssc_condition(sys);
    return b;
}

TailBound jsq_tail_lower(const JsqSystem& sys) {
    TailBound b;
    b.side = BoundSide::Lower;
    b.c0 = 1.0 - sys.eps();
    b.c1 = 0.0;
    b.r1 = theta_n(sys.eps());
    b.r2 = 0.0;
    b.x_min = 0.0;
    b.x_min_inclusive = true;
    b.conditions_met = true;
    return b;
}

double jsq_limit_mgf(double theta) {
    if (!(theta < 1.0)) {
        throw DomainError("jsq_limit_mgf: theta must be < 1, the limiting MGF diverges");
    }
    return 1.0 / (1.0 - theta);
}

double jsq_gamma(const JsqSystem& sys, double theta) noexcept {
    const double n_mu = static_cast<double>(sys.n()) * sys.mu();
    // n mu - n mu (1-eps) e^{eps theta} = -n mu [ (1-eps) expm1(eps theta) - eps ]
    return -n_mu * ((1.0 - sys.eps()) * std::expm1(sys.eps() * theta) - sys.eps());
}

double jsq_mgf_identity_residual(const JsqSystem& sys, double theta,
                                 const SimEstimate& sim_lhs, const SimEstimate& sim_beta) {
    const double gamma = jsq_gamma(sys, theta);
    if (!(gamma > 0.0)) {
        throw DomainError("jsq_mgf_identity_residual: gamma_n(theta) <= 0, theta outside the MGF domain");
    }
    if (!(sim_lhs.point > 0.0)) {
        throw DomainError("jsq_mgf_identity_residual: MGF estimate must be positive");
    }
    return std::abs(sim_lhs.point - sim_beta.point / gamma) / sim_lhs.point;
}

}  // namespace queuetail::jsq
