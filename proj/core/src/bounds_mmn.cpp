#include "queuetail/bounds_mmn.hpp"

#include "queuetail/errors.hpp"
#include "queuetail/exact.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <string>

namespace queuetail::mmn {

namespace {

constexpr double kCutoff = 60.0;
constexpr unsigned kMaxDepth = 25;

// e^{-t} + t - 1, accurate when |t| is small
double shifted_exp(double t) noexcept {
    if (std::abs(t) < 0.1) {
        double term = 0.5 * t * t;
        double sum = term;
        for (int k = 3; k <= 16; ++k) {
            term *= -t / k;
            sum += term;
        }
        return sum;
    }
    return std::expm1(-t) + t;
}

// -log(1 - eps) - eps
double log_gap(double eps) noexcept {
    if (eps < 0.05) {
        double power = eps * eps;
        double sum = 0.0;
        for (int k = 2; k <= 14; ++k) {
            sum += power / k;
            power *= eps;
        }
        return sum;
    }
    return -std::log1p(-eps) - eps;
}

// d/dt gn_log
double gn_log_slope(double t, const MmnSystem& sys) noexcept {
    return static_cast<double>(sys.n()) * std::expm1(-(t - gn_log_argmax(sys)));
}

double gn_log_curvature(double t, const MmnSystem& sys) noexcept {
    return static_cast<double>(sys.n()) * std::exp(-(t - gn_log_argmax(sys)));
}

// Bisecting Gauss-Kronrod. Boost's adaptive driver reports panel errors in
// units of [-1, 1], so scale them here.
template <class F>
double adaptive_gk(const F& f, double a, double b, double abs_tol, unsigned depth, double& err) {
    double e = 0.0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 0, 0.0, &e);
    e *= 0.5 * (b - a);
    if (e <= abs_tol || depth == 0) {
        err += e;
        return v;
    }
    const double m = 0.5 * (a + b);
    return adaptive_gk(f, a, m, 0.5 * abs_tol, depth - 1, err) + adaptive_gk(f, m, b, 0.5 * abs_tol, depth - 1, err);
}

// gn_log(t) - gn_log(peak) without cancellation between the two
double gn_log_drop(double t, double peak, const MmnSystem& sys) noexcept {
    const double n = static_cast<double>(sys.n());
    const double offset = peak - gn_log_argmax(sys);
    const double c = std::exp(-offset);
    const double d = t - peak;
    return -n * (c * shifted_exp(d) - std::expm1(-offset) * d);
}

}  // namespace

const MmnConstants& MmnConstants::get() {
    static const MmnConstants constants = [] {
        double err = 0.0;
        const double integral = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
            [](double t) { return std::exp(-4.0 * t * t); }, 1.0, 2.0, kMaxDepth, 1e-14, &err);
        MmnConstants c;
        c.kappa_tilde1 = 1.0 / integral;
        c.kappa_hw = 1.0 + c.kappa_tilde1 * std::sqrt(3.0 * std::numbers::pi) / 2.0;
        c.kappa_super = 4.0 * std::numbers::e * std::numbers::pi * c.kappa_hw;
        c.kappa_sub = c.kappa_tilde1;
        return c;
    }();
    return constants;
}

// Near zero: -n eps t - n (1 - eps) (e^{-t} + t - 1).
// Elsewhere centred at the maximiser t* = log(1 - eps):
// n (-log(1 - eps) - eps) - n (e^{-(t - t*)} + (t - t*) - 1).
double gn_log(double t, const MmnSystem& sys) noexcept {
    const double n = static_cast<double>(sys.n());
    const double eps = sys.eps();
    if (std::abs(t) < 1e-4) {
        return -n * eps * t - n * (1.0 - eps) * shifted_exp(t);
    }
    return n * log_gap(eps) - n * shifted_exp(t - gn_log_argmax(sys));
}

double gn_log_argmax(const MmnSystem& sys) noexcept {
    return std::log1p(-sys.eps());
}

double gn_log_integral(const MmnSystem& sys, double upper, double rel_tol) {
    if (!std::isfinite(upper)) {
        throw DomainError("gn_log_integral: upper limit must be finite");
    }
    const double t_star = gn_log_argmax(sys);
    const double peak = std::min(upper, t_star);
    const double top = gn_log(peak, sys);

    if (upper < t_star) {
        // Integrand still rising at the endpoint. When it rises too steeply to
        // resolve, use the endpoint expansion int ~ e^{f(u)} / f'(u).
        const double edge = gn_log_slope(upper, sys);
        if (kCutoff / edge < 1e-9 * std::max(1.0, std::abs(upper))) {
            return top - std::log(edge);
        }
    }

    const double width = 1.0 / std::sqrt(gn_log_curvature(peak, sys));
    double h = width;
    while (gn_log_drop(peak - h, peak, sys) > -kCutoff) {
        h *= 2.0;
    }
    const double lo = peak - h;

    double hi = upper;
    if (upper > t_star) {
        h = width;
        while (t_star + h < upper && gn_log_drop(t_star + h, peak, sys) > -kCutoff) {
            h *= 2.0;
        }
        hi = std::min(upper, t_star + h);
    }

    const auto f = [&sys, peak](double t) { return std::exp(gn_log_drop(t, peak, sys)); };
    double err = 0.0;
    const double rough = std::abs(adaptive_gk(f, lo, hi, 0.0, 0, err));
    err = 0.0;
    const double value = adaptive_gk(f, lo, hi, 0.1 * rel_tol * rough, kMaxDepth, err);
    if (!(value > 0.0) || !(err <= rel_tol * value)) {
        char msg[96];
        std::snprintf(msg, sizeof msg, "gn_log_integral: quadrature did not reach relative tolerance %g", rel_tol);
        throw NumericalError(msg,
                             value > 0.0 ? err / value : std::numeric_limits<double>::infinity());
    }
    return top + std::log(value);
}

double gn_integral(const MmnSystem& sys, double upper, double rel_tol) {
    return std::exp(gn_log_integral(sys, upper, rel_tol));
}

MmnExactSummary mmn_exact_summary(const MmnSystem& sys) {
    MmnExactSummary s;
    const double eps = sys.eps();
    const double log_n = std::log(static_cast<double>(sys.n()));
    s.log_integral_neg = gn_log_integral(sys, 0.0);
    s.integral_neg = std::exp(s.log_integral_neg);

    // P(q = n) = 1 / (1/eps + n I)
    const double a = -std::log(eps);
    const double b = log_n + s.log_integral_neg;
    const double log_denominator = std::max(a, b) + std::log1p(std::exp(-std::abs(a - b)));
    s.p_q_eq_n = std::exp(-log_denominator);
    s.p_w_gt_0 = std::exp(std::log1p(-eps) - std::log(eps) - log_denominator);
    s.p_r_gt_0 = std::exp(b - log_denominator);
    return s;
}

double r_mgf_conditional(const MmnSystem& sys, double theta) {
    return std::exp(-gn_log(theta, sys) + gn_log_integral(sys, theta) - gn_log_integral(sys, 0.0));
}

double w_mgf_conditional(const MmnSystem& sys, double theta) {
    const double radius = -std::log1p(-sys.eps());
    if (!(theta < radius)) {
        throw DomainError("w_mgf_conditional: theta must be < log(1/(1-eps))");
    }
    return 1.0 / (1.0 + std::expm1(-theta) / sys.eps());
}

double w_tail_conditional(const MmnSystem& sys, double x) {
    if (!(x > 0.0)) {
        throw DomainError("w_tail_conditional: x must be positive");
    }
    const auto k = lattice_ceil(x, sys.eps());
    return std::exp(static_cast<double>(k - 1) * std::log1p(-sys.eps()));
}

namespace {

bool scaling_matches(const MmnSystem& sys, const HtScaling& scaling) {
    double expected = 0.0;
    try {
        expected = scaling.eps_of(sys.n());
    } catch (const ValidationError&) {
        return false;
    }
    return std::abs(expected - sys.eps()) <= 1e-12 * expected;
}

bool is_super_branch(Regime r) {
    return r == Regime::SuperHalfinWhitt || r == Regime::NonDegenerateSlowdown || r == Regime::SuperSlowdown;
}

}  // namespace

TailBound mmn_idle_tail_bound(const MmnSystem& sys, const HtScaling& scaling, Regime regime) {
    const auto& k = MmnConstants::get();
    const Regime actual = classify_regime(scaling.alpha());
    const bool consistent = scaling_matches(sys, scaling) &&
                            (actual == regime || (is_super_branch(actual) && is_super_branch(regime)));
    const double n = static_cast<double>(sys.n());
    const double c = scaling.c();
    const double alpha = scaling.alpha();

    TailBound b;
    b.side = BoundSide::Upper;
    b.c1 = 0.0;
    b.r1 = 0.0;
    b.r2 = 0.5;
    b.x_min = 0.0;
    b.x_min_inclusive = false;
    switch (regime) {
        case Regime::SubHalfinWhitt:
            b.c0 = 1.0;
            b.conditions_met = consistent;
            break;
        case Regime::HalfinWhitt:
            b.c0 = k.kappa_hw;
            b.conditions_met = consistent;
            break;
        default:
            b.c0 = k.kappa_super * c * std::pow(n, -(alpha - 0.5));
            b.conditions_met = consistent && std::pow(n, 2.0 * alpha - 1.0) > 4.0 * c * c;
            break;
    }
    return b;
}

TailBound mmn_idle_lower_tail_bound(const MmnSystem& sys) {
    TailBound b;
    b.side = BoundSide::Upper;
    b.c0 = 1.0;
    b.c1 = 0.0;
    b.r1 = 0.0;
    b.r2 = 0.5 - 2.0 * std::numbers::e * sys.eps();
    b.x_min = 0.0;
    b.x_min_inclusive = true;
    b.conditions_met = b.r2 > 0.0;
    return b;
}

IdleProbBound mmn_p_r_bounds(const MmnSystem& sys, const HtScaling& scaling) {
    const auto& k = MmnConstants::get();
    const double n = static_cast<double>(sys.n());
    const double c = scaling.c();
    const double alpha = scaling.alpha();
    const bool consistent = scaling_matches(sys, scaling);

    IdleProbBound out;
    out.regime = classify_regime(alpha);
    if (alpha > 0.5) {
        out.kind = ProbBoundKind::Upper;
        out.value = 4.0 * std::numbers::e * std::numbers::pi * c * std::pow(n, 0.5 - alpha);
        out.conditions_met = consistent && std::pow(n, 2.0 * alpha - 1.0) > 4.0 * c * c;
        out.vacuous = out.value >= 1.0;
    } else if (alpha == 0.5) {
        out.kind = ProbBoundKind::Limit;
        out.value = mmn_hw_limit_p(c);
        out.conditions_met = consistent;
    } else {
        out.kind = ProbBoundKind::Lower;
        out.value = 1.0 - (k.kappa_sub / c) * std::pow(n, alpha - 0.5) * std::exp(-c * std::pow(n, 0.5 - alpha));
        out.conditions_met = consistent;
        out.vacuous = out.value <= 0.0;
    }
    return out;
}

double mmn_hw_limit_p(double c) {
    if (!(c > 0.0)) {
        throw ValidationError("mmn_hw_limit_p: c must be positive");
    }
    // v / (1 + v) written as 1 / (1 + 1/v) so that e^{c^2/2} never overflows
    const double inv_v = std::exp(-0.5 * c * c) /
                         (std::sqrt(2.0 * std::numbers::pi) * c * exact::std_normal_cdf(c));
    return 1.0 / (1.0 + inv_v);
}

double truncated_normal_idle_mgf(const MmnSystem& sys, double theta) {
    const double zeta = sys.zeta();
    return std::exp(theta * zeta + 0.5 * theta * theta) * exact::std_normal_cdf(zeta + theta) /
           exact::std_normal_cdf(zeta);
}

}  // namespace queuetail::mmn
