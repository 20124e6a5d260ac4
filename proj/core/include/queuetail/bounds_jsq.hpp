#pragma once

#include "queuetail/estimate.hpp"
#include "queuetail/model.hpp"

namespace queuetail::jsq {

/// Constants of the state-space-collapse MGF bound for JSQ.
struct JsqConstants {
    static constexpr double kappa_perp = 128.0;
    static constexpr double theta_perp = 1.0 / 96.0;
    /// 4 e kappa_perp^2 / theta_perp, composed from the two constants above.
    static double kappa2() noexcept;
};

/// Exact tail decay rate -log(1-eps)/eps of the scaled total queue.
/// Lies in (1, 1/(1-eps)); accurate down to eps ~ 1e-12.
double theta_n(double eps);

/// Same number, named for its role as the large-deviations rate shared by
/// both tail bounds.
double jsq_ld_rate(double eps);

/// n eps log(1/eps) < theta_perp / 4 and eps <= 1/2.
bool ssc_condition(const JsqSystem& sys) noexcept;

/// Upper bound 2 e x (1 + kappa2 n eps log(1/eps)) e^{-theta_n x} for x > 1 - eps.
/// Returned even when ssc_condition fails, with conditions_met = false.
TailBound jsq_tail_upper(const JsqSystem& sys);

/// Lower bound (1 - eps) e^{-theta_n x}, valid for every n and x >= 0.
///
/// The prefactor is what the pooled-server M/M/1 coupling yields:
/// P(eps q > x) = (1-eps)^{floor(x/eps)+1} >= (1-eps)^{x/eps + 1}.
TailBound jsq_tail_lower(const JsqSystem& sys);

/// Heavy-traffic limit 1/(1 - theta) of the scaled total-queue MGF.
double jsq_limit_mgf(double theta);

/// n mu - lambda e^{eps theta}; positive exactly for theta < theta_n(eps).
double jsq_gamma(const JsqSystem& sys, double theta) noexcept;

/// |lhs - beta / gamma(theta)| / lhs for simulated E[e^{theta eps sum q}] and
/// E[mu sum_i 1{q_i=0} e^{theta eps sum q}]. Throws DomainError if gamma <= 0.
double jsq_mgf_identity_residual(const JsqSystem& sys, double theta,
                                 const SimEstimate& sim_lhs, const SimEstimate& sim_beta);

}  // namespace queuetail::jsq
