#include "commands.hpp"

#include "queuetail/bounds_jsq.hpp"
#include "queuetail/bounds_mmn.hpp"
#include "queuetail/bounds_ssq.hpp"
#include "queuetail/exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace queuetail::cli {

namespace {

Conditions upper_conditions(const TailBound& b, double x, double value) {
    if (!b.applies_at(x)) {
        return Conditions::False;
    }
    return value >= 1.0 ? Conditions::Vacuous : Conditions::True;
}

Conditions flag(bool ok) {
    return ok ? Conditions::True : Conditions::False;
}

double rel_diff(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

std::int64_t ssq_n_column() {
    return 1;
}

}  // namespace

std::vector<Row> bounds_jsq_rows(const JsqSystem& sys, const std::vector<double>& xs) {
    std::vector<Row> rows;
    RowSink sink(rows, "jsq", sys.n(), sys.eps());
    const auto upper = jsq::jsq_tail_upper(sys);
    const auto lower = jsq::jsq_tail_lower(sys);
    const double eps = sys.eps();
    sink.scalar("ld_rate", jsq::theta_n(eps));
    sink.scalar("ssc_lhs", static_cast<double>(sys.n()) * eps * std::log(1.0 / eps), flag(jsq::ssc_condition(sys)));
    sink.scalar("ssc_threshold", 1.0 / 384.0);
    sink.scalar("upper_c1", upper.c1, flag(upper.conditions_met));
    sink.scalar("upper_x_min", upper.x_min, flag(upper.conditions_met));
    sink.scalar("lower_c0", lower.c0, flag(lower.conditions_met));
    for (double x : xs) {
        const double lo = lower.eval(x);
        const double hi = upper.eval(x);
        sink.at(x, "tail_lower", lo, flag(lower.applies_at(x)));
        sink.at(x, "tail_upper", hi, upper_conditions(upper, x, hi));
    }
    return rows;
}

std::vector<Row> bounds_ssq_rows(const SsqSystem& sys, const std::vector<double>& xs,
                                 const std::vector<double>& thetas) {
    std::vector<Row> rows;
    RowSink sink(rows, "ssq", ssq_n_column(), sys.eps());
    const auto p = ssq::ssq_bound_params(sys);
    const auto upper = ssq::ssq_tail_upper(sys);
    sink.scalar("theta_eps", p.theta_eps);
    sink.scalar("kappa_ssq", p.kappa_ssq);
    sink.scalar("ld_rate", p.rate, flag(p.rate > 0.0));
    sink.scalar("x_min", p.x_min);
    sink.scalar("mgf_window", ssq::ssq_mgf_window(sys));
    for (double x : xs) {
        const double v = upper.eval(x);
        sink.at(x, "tail_upper", v, upper_conditions(upper, x, v));
    }
    const double window = ssq::ssq_mgf_window(sys);
    for (double t : thetas) {
        if (t > 0.0 && t < window) {
            sink.at(t, "mgf_upper", ssq::ssq_mgf_bound(sys, t), Conditions::True);
        } else {
            sink.at(t, "mgf_upper", std::numeric_limits<double>::infinity(), Conditions::False);
        }
    }
    return rows;
}

std::vector<Row> bounds_mmn_rows(std::int64_t n, double mu, const HtScaling& scaling, const std::vector<double>& xs) {
    const MmnSystem sys(n, mu, scaling.eps_of(n));
    const Regime regime = classify_regime(scaling.alpha());
    std::vector<Row> rows;
    RowSink sink(rows, "mmn", n, sys.eps());
    sink.scalar("regime:" + std::string(to_string(regime)), scaling.alpha());
    const auto upper = mmn::mmn_idle_tail_bound(sys, scaling, regime);
    sink.scalar("idle_c0", upper.c0, upper.c0 >= 1.0 ? Conditions::Vacuous : flag(upper.conditions_met));
    for (double x : xs) {
        const double v = upper.eval(x);
        sink.at(x, "idle_tail_upper", v, upper_conditions(upper, x, v));
    }
    if (regime == Regime::SubHalfinWhitt) {
        const auto lower_tail = mmn::mmn_idle_lower_tail_bound(sys);
        for (double x : xs) {
            const double v = lower_tail.eval(x);
            sink.at(x, "idle_lower_tail_upper", v, upper_conditions(lower_tail, x, v));
        }
    }
    const auto pr = mmn::mmn_p_r_bounds(sys, scaling);
    const char* name = pr.kind == mmn::ProbBoundKind::Upper   ? "p_r_gt_0_upper"
                       : pr.kind == mmn::ProbBoundKind::Lower ? "p_r_gt_0_lower"
                                                              : "p_r_gt_0_limit";
    sink.scalar(name, pr.value, pr.vacuous ? Conditions::Vacuous : flag(pr.conditions_met));
    return rows;
}

std::vector<Row> exact_mm1_rows(double eps, const std::vector<double>& xs) {
    std::vector<Row> rows;
    RowSink sink(rows, "mm1", 1, eps);
    for (double x : xs) {
        sink.at(x, "tail", exact::mm1_scaled_tail(eps, x));
    }
    return rows;
}

std::vector<Row> exact_mmn_rows(const MmnSystem& sys, const std::vector<double>& thetas, double& max_residual) {
    std::vector<Row> rows;
    RowSink sink(rows, "mmn", sys.n(), sys.eps());
    const auto s = mmn::mmn_exact_summary(sys);
    const auto pi = exact::mmn_stationary(sys, {.tail_tol = 1e-14});
    const std::int64_t n = sys.n();
    double p_r_bd = 0.0;
    for (std::int64_t k = 0; k < n && k <= pi.truncation_k; ++k) {
        p_r_bd += pi.probs[static_cast<std::size_t>(k)];
    }
    const double p_q_bd = n <= pi.truncation_k ? pi.probs[static_cast<std::size_t>(n)] : 0.0;
    const double p_w_bd = pi.tail_above(n);

    max_residual = std::max({rel_diff(s.p_q_eq_n, p_q_bd), rel_diff(s.p_w_gt_0, p_w_bd), rel_diff(s.p_r_gt_0, p_r_bd)});
    sink.scalar("integral_neg", s.integral_neg);
    sink.scalar("p_q_eq_n", s.p_q_eq_n);
    sink.scalar("p_q_eq_n_bd", p_q_bd);
    sink.scalar("p_w_gt_0", s.p_w_gt_0);
    sink.scalar("p_w_gt_0_bd", p_w_bd);
    sink.scalar("p_r_gt_0", s.p_r_gt_0);
    sink.scalar("p_r_gt_0_bd", p_r_bd);
    for (double t : thetas) {
        const double formula = mmn::r_mgf_conditional(sys, t);
        double acc = 0.0;
        for (std::int64_t k = 0; k < n && k <= pi.truncation_k; ++k) {
            acc += pi.probs[static_cast<std::size_t>(k)] * std::exp(t * static_cast<double>(n - k));
        }
        const double bd = acc / p_r_bd;
        max_residual = std::max(max_residual, rel_diff(formula, bd));
        sink.at(t, "r_mgf_conditional", formula);
        sink.at(t, "r_mgf_conditional_bd", bd);
    }
    sink.scalar("max_rel_residual", max_residual, flag(max_residual <= kResidualTolerance));
    return rows;
}

std::vector<Row> exact_ssq_rows(const SsqSystem& sys, const std::vector<double>& xs,
                                const std::vector<double>& thetas, double& max_residual) {
    std::vector<Row> rows;
    const double eps = sys.eps();
    RowSink sink(rows, "ssq", ssq_n_column(), eps);
    const auto pi = exact::ssq_stationary(sys);
    max_residual = 0.0;

    const auto& a = sys.arrival();
    const auto& s = sys.service();
    const bool bernoulli = a.max_value() <= 1 && s.max_value() <= 1 && a.size() == 2 && s.size() == 2 &&
                           a.values()[0] == 0 && s.values()[0] == 0;

    sink.scalar("p_empty", pi.probs[0]);
    sink.scalar("mean_u", exact::ssq_unused_service_mean(sys, pi));
    for (double x : xs) {
        const double tail = pi.tail_above(lattice_floor(x, eps));
        sink.at(x, "tail", tail);
        if (bernoulli) {
            const auto law = exact::bernoulli_ssq_stationary(a.prob_of(1), s.prob_of(1));
            const double closed = law.scaled_tail(eps, x);
            max_residual = std::max(max_residual, std::abs(tail - closed));
            sink.at(x, "tail_closed_form", closed);
        }
    }
    for (double t : thetas) {
        sink.at(t, "mgf", exact::stationary_scaled_mgf(pi, eps, t));
        sink.at(t, "e_neg_theta_u", exact::ssq_unused_service_mgf(sys, pi, t));
    }
    if (bernoulli) {
        const auto law = exact::bernoulli_ssq_stationary(a.prob_of(1), s.prob_of(1));
        sink.scalar("ld_rate", law.ld_rate(eps));
        sink.scalar("max_abs_residual", max_residual, flag(max_residual <= kResidualTolerance));
    }
    return rows;
}

namespace {

void emit(RowSink& sink, double key, const std::string& quantity, const SimEstimate& e) {
    sink.interval(key, quantity, e.point, e.ci_lo, e.ci_hi);
}

}  // namespace

std::vector<Row> simulate_jsq_rows(const JsqSystem& sys, const SimConfig& cfg) {
    const auto stats = simulate_jsq(sys, cfg);
    std::vector<Row> rows;
    RowSink sink(rows, "jsq", sys.n(), sys.eps());
    const double na = std::numeric_limits<double>::quiet_NaN();
    for (const auto& [x, e] : stats.tail) emit(sink, x, "tail", e);
    for (const auto& [t, e] : stats.mgf) emit(sink, t, "mgf", e);
    for (const auto& [t, e] : stats.beta) emit(sink, t, "beta", e);
    for (const auto& [t, e] : stats.perp_mgf) emit(sink, t, "perp_mgf", e);
    emit(sink, na, "empty_frac", stats.empty_frac);
    if (stats.ld_slope.valid) {
        sink.interval(na, "ld_slope", stats.ld_slope.slope, stats.ld_slope.ci_lo, stats.ld_slope.ci_hi);
    } else {
        sink.interval(na, "ld_slope", na, na, na);
    }
    return rows;
}

std::vector<Row> simulate_ssq_rows(const SsqSystem& sys, const SimConfig& cfg) {
    const auto stats = simulate_ssq(sys, cfg);
    std::vector<Row> rows;
    RowSink sink(rows, "ssq", ssq_n_column(), sys.eps());
    const double na = std::numeric_limits<double>::quiet_NaN();
    for (const auto& [x, e] : stats.tail) emit(sink, x, "tail", e);
    for (const auto& [t, e] : stats.mgf) emit(sink, t, "mgf", e);
    for (const auto& [t, e] : stats.e_neg_theta_u) emit(sink, t, "e_neg_theta_u", e);
    emit(sink, na, "mean_u", stats.mean_u);
    return rows;
}

}  // namespace queuetail::cli
