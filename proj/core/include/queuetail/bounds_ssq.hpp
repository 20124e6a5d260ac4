#pragma once

#include "queuetail/estimate.hpp"
#include "queuetail/model.hpp"

namespace queuetail::ssq {

/// Constants of the single-server tail bound.
///
/// `kappa_ssq` is 2 mu E3 / (3 sigma^4) + eps 9 mu^2 A^4 / sigma^6. Two
/// thresholds are reported: `x_min`, the window the Markov-inequality step
/// actually delivers (x > (1 + kappa eps) / theta_eps), and
/// `x_min_printed` = theta_eps / (1 + kappa eps), kept for display only.
struct SsqBoundParams {
    double theta_eps = 0.0;
    double kappa_ssq = 0.0;
    double rate = 0.0;
    double x_min = 0.0;
    double x_min_printed = 0.0;
};

/// Throws DegenerateSystemError when Var(a) + Var(s) = 0.
SsqBoundParams ssq_bound_params(const SsqSystem& sys);

/// e theta_eps x e^{-rate x} on x > x_min.
TailBound ssq_tail_upper(const SsqSystem& sys);

/// theta_eps (1 - kappa eps). The true decay rate of P(eps q > x) is at least this.
double ssq_ld_rate(const SsqSystem& sys);

/// Right end theta_eps / (1 + kappa eps) of the window on which the MGF bound holds.
double ssq_mgf_window(const SsqSystem& sys);

/// (1 - (theta/theta_eps)(1 + kappa eps))^{-1} for theta in (0, ssq_mgf_window).
double ssq_mgf_bound(const SsqSystem& sys, double theta);

/// 1 - E[e^{eps theta (a - s)}] by exact double summation.
double ssq_gamma(const SsqSystem& sys, double theta);

/// theta eps^2 mu (1 - (theta/theta_eps)(1 + kappa eps)): the lower bound on gamma.
double ssq_gamma_lower_bound(const SsqSystem& sys, double theta);

/// eps^2 theta mu: the upper bound on 1 - E[e^{-theta eps u}].
double ssq_unused_service_bound(const SsqSystem& sys, double theta) noexcept;

/// e lambda x e^{-lambda x}, the tail bound implied by E[e^{tX}] <= 1/(1 - t/lambda).
/// Requires x > 1/lambda.
double markov_tail_from_mgf(double lambda_rate, double x);

/// 1 - sim_u.point <= eps^2 theta mu + 3 sim_u.std_error.
bool ssq_claim2_check(const SimEstimate& sim_u, double theta, const SsqSystem& sys) noexcept;

/// One step of E[V(q(t+1))] = (1 - gamma) E[V(q(t))] + E[beta(t)] with V(q) = e^{theta eps q}.
double ssq_mgf_recursion_step(const SsqSystem& sys, double theta, double mgf_now, double beta_now);

}  // namespace queuetail::ssq
