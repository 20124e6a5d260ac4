#pragma once

#include "queuetail/model.hpp"

namespace queuetail::mmn {

/// Constants of the idle-server bounds. kappa_tilde1 = (int_1^2 e^{-4t^2} dt)^{-1}
/// is computed once by quadrature; the rest are composed from it.
struct MmnConstants {
    double kappa_tilde1 = 0.0;
    double kappa_hw = 0.0;      // 1 + kappa_tilde1 sqrt(3 pi) / 2
    double kappa_super = 0.0;   // 4 e pi kappa_hw
    double kappa_sub = 0.0;     // kappa_tilde1

    static const MmnConstants& get();
};

/// log G_n(t) = -n eps t - n rho (e^{-t} + t - 1).
double gn_log(double t, const MmnSystem& sys) noexcept;

/// Maximiser log(1 - eps) of gn_log.
double gn_log_argmax(const MmnSystem& sys) noexcept;

/// log of int_{-inf}^{upper} G_n(t) dt.
///
/// The integrand is normalised by its maximum over the domain (the Laplace
/// point log(1-eps), or `upper` when that lies to its left), truncated where
/// the normalised exponent falls below -60, and integrated by adaptive
/// Gauss-Kronrod to `rel_tol`. Throws NumericalError with the achieved
/// relative error if the tolerance is not met.
double gn_log_integral(const MmnSystem& sys, double upper, double rel_tol = 1e-10);

/// exp(gn_log_integral); underflows to 0 for very negative `upper`.
double gn_integral(const MmnSystem& sys, double upper, double rel_tol = 1e-10);

struct MmnExactSummary {
    double p_q_eq_n = 0.0;
    double p_w_gt_0 = 0.0;
    double p_r_gt_0 = 0.0;
    double integral_neg = 0.0;       // int_{-inf}^0 G_n, may overflow to inf for huge n
    double log_integral_neg = 0.0;
};

/// P(q = n), P(w > 0), P(r > 0) from the G_n integral identities, in log space.
MmnExactSummary mmn_exact_summary(const MmnSystem& sys);

/// E[e^{theta r} | r > 0] for the number of idle servers r.
double r_mgf_conditional(const MmnSystem& sys, double theta);

/// E[e^{theta w} | w > 0] = 1 / (1 - (1 - e^{-theta}) / eps), theta < log(1/(1-eps)).
double w_mgf_conditional(const MmnSystem& sys, double theta);

/// P(eps w >= x | w > 0) = (1-eps)^{ceil(x/eps) - 1}: the conditional waiting
/// count is geometric with parameter eps.
double w_tail_conditional(const MmnSystem& sys, double x);

/// Gaussian bound on P(eta (r - n eps) > x | r > 0) for the regime label given.
///
/// c0 is 1 (Sub-HW), kappa_hw (HW) or kappa_super c n^{-(alpha - 1/2)} (alpha > 1/2).
/// conditions_met is false when the label disagrees with the scaling, the
/// system's eps is not scaling.eps_of(n), or (alpha > 1/2) n^{2 alpha - 1} <= 4 c^2.
TailBound mmn_idle_tail_bound(const MmnSystem& sys, const HtScaling& scaling, Regime regime);

/// Sub-HW bound exp(-x^2 (1/2 - 2 e eps)) on P(eta (r - n eps) < -x | r > 0).
/// conditions_met is false when 2 e eps >= 1/2 (no decay).
TailBound mmn_idle_lower_tail_bound(const MmnSystem& sys);

enum class ProbBoundKind { Upper, Lower, Limit };

struct IdleProbBound {
    Regime regime = Regime::HalfinWhitt;
    ProbBoundKind kind = ProbBoundKind::Limit;
    double value = 0.0;
    bool conditions_met = false;
    /// Upper bound >= 1 or lower bound <= 0.
    bool vacuous = false;
};

/// Regime-appropriate statement about P(r > 0): upper 4 e pi c n^{1/2 - alpha}
/// for alpha > 1/2, the Halfin-Whitt limit at alpha = 1/2, and the lower
/// bound 1 - (kappa_sub / c) n^{alpha - 1/2} e^{-c n^{1/2 - alpha}} for alpha < 1/2.
IdleProbBound mmn_p_r_bounds(const MmnSystem& sys, const HtScaling& scaling);

/// lim P(r > 0) at eps_n = c / sqrt(n):  v / (1 + v), v = sqrt(2 pi) c e^{c^2/2} Phi(c).
double mmn_hw_limit_p(double c);

/// E[e^{theta Y} | Y > 0] for Y ~ N(zeta, 1): the truncated-normal shape that
/// eta r given r > 0 approaches for large n. Reference comparator only.
double truncated_normal_idle_mgf(const MmnSystem& sys, double theta);

}  // namespace queuetail::mmn
