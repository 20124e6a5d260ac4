#include "verify.hpp"

#include "cli.hpp"
#include "commands.hpp"
#include "rows.hpp"

#include "queuetail/bounds_jsq.hpp"
#include "queuetail/bounds_mmn.hpp"
#include "queuetail/bounds_ssq.hpp"
#include "queuetail/exact.hpp"
#include "queuetail/rng.hpp"
#include "queuetail/sim.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace queuetail::cli {

namespace {

class Suite {
public:
    explicit Suite(std::string name) : name_(std::move(name)) {}

    void check(std::string what, double expected, double observed, double tolerance, bool pass) {
        records_.push_back({name_, std::move(what), expected, observed, tolerance, pass});
    }

    /// |observed - expected| <= tolerance * |expected|
    void rel(std::string what, double expected, double observed, double tolerance) {
        const double err = std::abs(observed - expected);
        check(std::move(what), expected, observed, tolerance, err <= tolerance * std::abs(expected));
    }

    void abs(std::string what, double expected, double observed, double tolerance) {
        check(std::move(what), expected, observed, tolerance, std::abs(observed - expected) <= tolerance);
    }

    /// observed <= bound (expected column holds the bound)
    void at_most(std::string what, double bound, double observed, double slack = 0.0) {
        check(std::move(what), bound, observed, slack, observed <= bound + slack);
    }

    void at_least(std::string what, double bound, double observed, double slack = 0.0) {
        check(std::move(what), bound, observed, slack, observed >= bound - slack);
    }

    std::vector<CheckRecord> take() { return std::move(records_); }

private:
    std::string name_;
    std::vector<CheckRecord> records_;
};

std::string label(const char* fmt, double a) {
    char buf[96];
    std::snprintf(buf, sizeof buf, fmt, a);
    return buf;
}

std::string label(const char* fmt, double a, double b) {
    char buf[96];
    std::snprintf(buf, sizeof buf, fmt, a, b);
    return buf;
}

std::string label(const char* fmt, double a, double b, double c) {
    char buf[128];
    std::snprintf(buf, sizeof buf, fmt, a, b, c);
    return buf;
}

std::vector<double> linspace(double lo, double hi, int count) {
    std::vector<double> v;
    for (int i = 0; i < count; ++i) {
        v.push_back(lo + (hi - lo) * i / (count - 1));
    }
    return v;
}

// Lattice points lo, lo + step, ..., hi.
std::vector<double> lattice(double lo, double hi, double step) {
    std::vector<double> v;
    const auto count = static_cast<int>(std::llround((hi - lo) / step));
    for (int i = 0; i <= count; ++i) {
        v.push_back(lo + step * i);
    }
    return v;
}

// Birth-death reference for M/M/n with the tail carried far enough that
// exponentially weighted sums over the truncation are accurate.
exact::StationaryDistribution deep_mmn(const MmnSystem& sys) {
    return exact::mmn_stationary(sys, {.tail_tol = 1e-250});
}

struct IdleLaw {
    std::vector<double> probs;   // P(r = j | r > 0), j = 1..n at index j
    double p_r = 0.0;
};

IdleLaw idle_law(const MmnSystem& sys, const exact::StationaryDistribution& pi) {
    IdleLaw law;
    const std::int64_t n = sys.n();
    // the solver may stop below n when P(q >= n) is certified negligible
    const std::int64_t top = std::min(n, pi.truncation_k + 1);
    law.probs.assign(static_cast<std::size_t>(n) + 1, 0.0);
    for (std::int64_t k = 0; k < top; ++k) {
        law.p_r += pi.probs[static_cast<std::size_t>(k)];
    }
    for (std::int64_t k = 0; k < top; ++k) {
        law.probs[static_cast<std::size_t>(n - k)] = pi.probs[static_cast<std::size_t>(k)] / law.p_r;
    }
    return law;
}

// P(eta (r - n eps) > x | r > 0) and P(eta (r - n eps) < -x | r > 0)
double idle_upper_tail(const MmnSystem& sys, const IdleLaw& law, double x) {
    const double eta = sys.eta();
    const double centre = static_cast<double>(sys.n()) * sys.eps();
    double s = 0.0;
    for (std::size_t j = 1; j < law.probs.size(); ++j) {
        if (eta * (static_cast<double>(j) - centre) > x) s += law.probs[j];
    }
    return s;
}

double idle_lower_tail(const MmnSystem& sys, const IdleLaw& law, double x) {
    const double eta = sys.eta();
    const double centre = static_cast<double>(sys.n()) * sys.eps();
    double s = 0.0;
    for (std::size_t j = 1; j < law.probs.size(); ++j) {
        if (eta * (static_cast<double>(j) - centre) < -x) s += law.probs[j];
    }
    return s;
}

// ---------------------------------------------------------------------------

std::vector<CheckRecord> suite_mmn_oracle() {
    Suite s("mmn-oracle");
    const std::vector<std::pair<std::int64_t, double>> cases = {{1, 0.5}, {2, 0.5}, {5, 0.2}, {10, 0.1}, {50, 0.05}};
    for (const auto& [n, eps] : cases) {
        const MmnSystem sys(n, 1.0, eps);
        const auto summary = mmn::mmn_exact_summary(sys);
        const auto pi = deep_mmn(sys);
        const auto idle = idle_law(sys, pi);
        const double p_w = pi.tail_above(n);
        const double nn = static_cast<double>(n);
        s.rel(label("P(q=n) n=%g eps=%g", nn, eps), pi.probs[static_cast<std::size_t>(n)], summary.p_q_eq_n, 1e-8);
        s.rel(label("P(w>0) n=%g eps=%g", nn, eps), p_w, summary.p_w_gt_0, 1e-8);
        s.rel(label("P(r>0) n=%g eps=%g", nn, eps), idle.p_r, summary.p_r_gt_0, 1e-8);
        for (double theta : {-1.0, -0.5, 0.5, 1.0}) {
            double bd = 0.0;
            for (std::size_t j = 1; j < idle.probs.size(); ++j) {
                bd += idle.probs[j] * std::exp(theta * static_cast<double>(j));
            }
            s.rel(label("E[e^{theta r}|r>0] n=%g eps=%g theta=%g", nn, eps, theta), bd,
                  mmn::r_mgf_conditional(sys, theta), 1e-8);
        }
        const std::vector<double> w_thetas = eps > 0.06 ? std::vector<double>{0.05, 0.1} : std::vector<double>{0.02, 0.04};
        for (double theta : w_thetas) {
            double bd = 0.0;
            for (std::int64_t k = n + 1; k <= pi.truncation_k; ++k) {
                bd += pi.probs[static_cast<std::size_t>(k)] * std::exp(theta * static_cast<double>(k - n));
            }
            bd /= p_w;
            s.rel(label("E[e^{theta w}|w>0] n=%g eps=%g theta=%g", nn, eps, theta), bd,
                  mmn::w_mgf_conditional(sys, theta), 1e-8);
        }
    }
    return s.take();
}

std::vector<CheckRecord> suite_mmn_integrals() {
    Suite s("mmn-integrals");
    s.abs("int_{-inf}^0 G_n, n=1 eps=0.5", 2.0, mmn::gn_integral(MmnSystem(1, 1.0, 0.5), 0.0), 1e-10);
    s.abs("int_{-inf}^0 G_n, n=2 eps=0.5", 2.0, mmn::gn_integral(MmnSystem(2, 1.0, 0.5), 0.0), 1e-10);
    return s.take();
}

std::vector<CheckRecord> suite_mmn_waiting() {
    Suite s("mmn-waiting");
    const MmnSystem sys(5, 1.0, 0.2);
    const auto pi = deep_mmn(sys);
    const double p_w = pi.tail_above(5);
    double worst = 0.0;
    for (std::int64_t k = 1; k <= 200; ++k) {
        const double bd = pi.probs[static_cast<std::size_t>(5 + k)] / p_w;
        const double geo = 0.2 * std::pow(0.8, static_cast<double>(k - 1));
        worst = std::max(worst, std::abs(bd - geo));
    }
    s.at_most("max_k<=200 |P(w=k|w>0) - eps(1-eps)^{k-1}|", 1e-10, worst);

    std::map<double, SimEstimate> tail;
    for (double x : lattice(2.0, 20.0, 0.2)) {
        SimEstimate e;
        e.point = mmn::w_tail_conditional(sys, x);
        tail[x] = e;
    }
    const auto fit = estimate_ld_slope(tail, 2.0, 20.0);
    s.abs("LD slope of w tail over [2,20]", jsq::theta_n(0.2), fit.slope, 1e-6);
    return s.take();
}

std::vector<CheckRecord> suite_jsq_sandwich() {
    Suite s("jsq-sandwich");
    const JsqSystem sys(1, 1.0, 3e-4);
    s.check("ssc_condition(n=1, eps=3e-4)", 1.0, jsq::ssc_condition(sys) ? 1.0 : 0.0, 0.0, jsq::ssc_condition(sys));
    const auto lower = jsq::jsq_tail_lower(sys);
    const auto upper = jsq::jsq_tail_upper(sys);
    for (double x : linspace(2.0, 50.0, 20)) {
        const double exact = exact::mm1_scaled_tail(3e-4, x);
        s.at_most(label("lower(x) <= exact, x=%.6g", x), exact, lower.eval(x), 1e-12 * exact);
        s.at_most(label("exact <= upper(x), x=%.6g", x), upper.eval(x), exact);
        s.check(label("upper window, x=%.6g", x), upper.x_min, x, 0.0, upper.applies_at(x));
    }
    return s.take();
}

SimConfig jsq_config(std::uint64_t seed, std::int64_t events, std::int64_t reps) {
    SimConfig c;
    c.seed = seed;
    c.horizon_events = events;
    c.replications = reps;
    return c;
}

std::vector<CheckRecord> suite_jsq_sim() {
    Suite s("jsq-sim");
    const JsqSystem sys(2, 1.0, 0.2);
    auto cfg = jsq_config(20240501, 100'000'000, 8);
    cfg.tail_grid = lattice(0.2, 4.0, 0.2);
    cfg.tail_grid.push_back(0.5);
    cfg.ld_lo = 1.0;
    cfg.ld_hi = 4.0;
    const auto stats = simulate_jsq(sys, cfg);
    const auto lower = jsq::jsq_tail_lower(sys);
    for (double x : {0.5, 1.0, 2.0}) {
        const auto it = std::min_element(stats.tail.begin(), stats.tail.end(), [x](const auto& a, const auto& b) {
            return std::abs(a.first - x) < std::abs(b.first - x);
        });
        const auto& e = it->second;
        s.at_least(label("tail >= lower - 3 sigma, x=%g", x), lower.eval(x), e.point, 3.0 * e.std_error);
    }
    const double theta = jsq::theta_n(0.2);
    const auto& fit = stats.ld_slope;
    const double tol = 1.96 * fit.std_error + 0.05 * theta;
    s.check("LD slope over [1,4] covers theta_n(0.2)", theta, fit.slope, tol,
            fit.valid && std::abs(fit.slope - theta) <= tol);
    const auto& ef = stats.empty_frac;
    s.check("empty fraction CI contains eps", 0.2, ef.point, 1.96 * ef.std_error, ef.ci_lo <= 0.2 && 0.2 <= ef.ci_hi);
    return s.take();
}

std::vector<CheckRecord> suite_jsq_ssc() {
    Suite s("jsq-ssc");
    const JsqSystem sys(4, 1.0, 0.1);
    auto cfg = jsq_config(20240502, 100'000'000, 1);
    cfg.theta_grid = {1.0 / 96.0};
    const auto stats = simulate_jsq(sys, cfg);
    const auto& e = stats.perp_mgf.begin()->second;
    s.at_most("perp MGF CI upper end at theta=1/96", jsq::JsqConstants{}.kappa_perp, e.ci_hi);
    return s.take();
}

std::vector<CheckRecord> suite_jsq_trend() {
    Suite s("jsq-trend");
    double previous = std::numeric_limits<double>::infinity();
    for (std::int64_t n : {2, 4, 8}) {
        const double eps = std::pow(static_cast<double>(n), -1.5);
        auto cfg = jsq_config(20240503 + static_cast<std::uint64_t>(n), 100'000'000, 3);
        cfg.theta_grid = {0.5};
        const auto stats = simulate_jsq(JsqSystem(n, 1.0, eps), cfg);
        const double gap = std::abs(stats.mgf.at(0.5).point - jsq::jsq_limit_mgf(0.5));
        s.check(label("|mgf(0.5) - 2| decreases, n=%g", static_cast<double>(n)), previous, gap, 0.0, gap < previous);
        previous = gap;
    }
    return s.take();
}

std::vector<CheckRecord> suite_ssq_dominance() {
    Suite s("ssq-dominance");
    SplitMix64 rng(20240504);
    for (int pair = 0; pair < 20; ++pair) {
        const double p_s = 0.2 + 0.7 * rng.uniform();
        const double p_a = p_s * (0.3 + 0.65 * rng.uniform());
        const SsqSystem sys(BoundedPmf::bernoulli(p_a), BoundedPmf::bernoulli(p_s));
        const auto law = exact::bernoulli_ssq_stationary(p_a, p_s);
        const auto upper = ssq::ssq_tail_upper(sys);
        const double eps = sys.eps();
        double worst = -std::numeric_limits<double>::infinity();
        for (int k = 1; k <= 40; ++k) {
            const double x = upper.x_min + (20.0 - upper.x_min) * k / 40.0;
            worst = std::max(worst, law.scaled_tail(eps, x) - upper.eval(x));
        }
        s.at_most(label("max (exact - bound) on (x_min,20], p_a=%.4f p_s=%.4f", p_a, p_s), 0.0, worst);
        s.at_least(label("exact LD rate >= bound rate, p_a=%.4f p_s=%.4f", p_a, p_s), ssq::ssq_ld_rate(sys),
                   law.ld_rate(eps));
    }
    return s.take();
}

std::vector<CheckRecord> suite_ssq_claims() {
    Suite s("ssq-claims");
    const SsqSystem sys(BoundedPmf::bernoulli(0.4), BoundedPmf::bernoulli(0.5));
    const auto pi = exact::ssq_stationary(sys);
    const double window = ssq::ssq_mgf_window(sys);
    for (int i = 1; i <= 10; ++i) {
        const double theta = window * i / 11.0;
        s.at_most(label("E[1 - e^{-theta eps u}] <= eps^2 theta mu, theta=%.4f", theta),
                  ssq::ssq_unused_service_bound(sys, theta), exact::ssq_unused_service_deficit(sys, pi, theta), 1e-10);
        s.at_least(label("gamma(theta) >= lower bound, theta=%.4f", theta), ssq::ssq_gamma_lower_bound(sys, theta),
                   ssq::ssq_gamma(sys, theta), 1e-10);
    }
    return s.take();
}

std::vector<CheckRecord> suite_mmn_regimes() {
    Suite s("mmn-regimes");
    const auto& k = mmn::MmnConstants::get();
    {
        const HtScaling scaling(1.0, 0.7);
        const MmnSystem sys(100, 1.0, scaling.eps_of(100));
        const auto pi = exact::mmn_stationary(sys);
        const auto idle = idle_law(sys, pi);
        const auto bound = mmn::mmn_idle_tail_bound(sys, scaling, Regime::SuperHalfinWhitt);
        for (double x : lattice(0.5, 4.0, 0.5)) {
            s.at_most(label("Super-HW n=100 idle tail, x=%g", x), bound.eval(x), idle_upper_tail(sys, idle, x));
        }
        const auto pr = mmn::mmn_p_r_bounds(sys, scaling);
        s.at_most("Super-HW n=100 P(r>0) <= 4 e pi c n^{-0.2}", pr.value, idle.p_r);
        (void)k;
    }
    {
        const HtScaling scaling(1.0, 0.3);
        const std::int64_t n = 1'000'000;
        const MmnSystem sys(n, 1.0, scaling.eps_of(n));
        const auto pi = exact::mmn_stationary(sys);
        const auto idle = idle_law(sys, pi);
        const auto pr = mmn::mmn_p_r_bounds(sys, scaling);
        s.at_least("Sub-HW n=1e6 P(r>0) >= lower bound", pr.value, idle.p_r);
        const auto upper = mmn::mmn_idle_tail_bound(sys, scaling, Regime::SubHalfinWhitt);
        const auto lower = mmn::mmn_idle_lower_tail_bound(sys);
        for (double x : lattice(0.5, 3.0, 0.5)) {
            s.at_most(label("Sub-HW n=1e6 upper idle tail, x=%g", x), upper.eval(x), idle_upper_tail(sys, idle, x));
            s.at_most(label("Sub-HW n=1e6 lower idle tail, x=%g", x), lower.eval(x), idle_lower_tail(sys, idle, x));
        }
    }
    {
        const double limit = mmn::mmn_hw_limit_p(1.0);
        double previous = std::numeric_limits<double>::infinity();
        double last = 0.0;
        for (std::int64_t n : {100, 400, 1600, 6400}) {
            const HtScaling scaling(1.0, 0.5);
            const MmnSystem sys(n, 1.0, scaling.eps_of(n));
            const auto idle = idle_law(sys, exact::mmn_stationary(sys));
            const double err = std::abs(idle.p_r - limit);
            s.check(label("HW |P(r>0) - limit| decreases, n=%g", static_cast<double>(n)), previous, err, 0.0,
                    err < previous);
            previous = err;
            last = err;
        }
        s.at_most("HW |P(r>0) - limit| at n=6400", 0.01, last);
    }
    return s.take();
}

std::vector<CheckRecord> suite_mmn_comparator() {
    Suite s("mmn-comparator");
    const HtScaling scaling(1.0, 0.5);
    for (std::int64_t n : {400, 6400}) {
        const MmnSystem sys(n, 1.0, scaling.eps_of(n));
        for (double theta : {-1.0, 0.5, 1.0}) {
            const double exact = mmn::r_mgf_conditional(sys, theta * sys.eta());
            const double normal = mmn::truncated_normal_idle_mgf(sys, theta);
            s.rel(label("HW n=%g E[e^{theta eta r}|r>0] vs truncated normal, theta=%g", static_cast<double>(n), theta),
                  normal, exact, 0.05);
        }
    }
    return s.take();
}

std::vector<CheckRecord> suite_markov() {
    Suite s("markov");
    SplitMix64 rng(20240505);
    double worst_ratio = 0.0;
    double worst_gap = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < 1000; ++i) {
        const double lambda = std::exp(std::log(0.1) + std::log(100.0) * rng.uniform());
        const double x = (1.0 + 40.0 * rng.uniform()) / lambda;
        if (!(x > 1.0 / lambda)) continue;
        const double truth = std::exp(-lambda * x);
        const double bound = ssq::markov_tail_from_mgf(lambda, x);
        worst_gap = std::max(worst_gap, truth - bound);
        const double target = std::numbers::e * lambda * x;
        worst_ratio = std::max(worst_ratio, std::abs(bound / truth - target) / target);
    }
    s.at_most("max (e^{-lambda x} - bound) over 1000 draws", 0.0, worst_gap);
    s.at_most("max relative |bound/true - e lambda x| over 1000 draws", 1e-12, worst_ratio);
    return s.take();
}

std::string run_capture(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    run_cli(args, out, err);
    return out.str();
}

std::vector<CheckRecord> suite_determinism() {
    Suite s("determinism");
    const std::string bern4 = R"({"values":[0,1],"probs":[0.6,0.4]})";
    const std::string bern5 = R"({"values":[0,1],"probs":[0.5,0.5]})";
    const std::vector<std::vector<std::string>> commands = {
        {"simulate", "jsq", "--n", "2", "--eps", "0.2", "--events", "2e6", "--reps", "2", "--theta", "-0.5,0.3"},
        {"simulate", "jsq", "--n", "4", "--eps", "0.1", "--events", "1e6", "--reps", "3", "--threads", "3"},
        {"simulate", "ssq", "--arrival", bern4, "--service", bern5, "--slots", "2e6", "--theta", "0.1"},
    };
    for (const auto& base : commands) {
        auto with_seed = [&](const char* seed) {
            auto args = base;
            args.insert(args.end(), {"--seed", seed});
            return args;
        };
        const std::string a = run_capture(with_seed("42"));
        const std::string b = run_capture(with_seed("42"));
        const std::string c = run_capture(with_seed("43"));
        const std::string name = base[0] + " " + base[1] + " " + base[3];
        s.check(name + ": same seed, identical bytes", 1.0, a == b ? 1.0 : 0.0, 0.0, !a.empty() && a == b);
        s.check(name + ": different seed, different bytes", 1.0, a != c ? 1.0 : 0.0, 0.0, a != c);
    }
    return s.take();
}

using SuiteFn = std::function<std::vector<CheckRecord>()>;

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
    static const std::vector<std::pair<std::string, SuiteFn>> r = {
        {"mmn-oracle", suite_mmn_oracle},
        {"mmn-integrals", suite_mmn_integrals},
        {"mmn-waiting", suite_mmn_waiting},
        {"jsq-sandwich", suite_jsq_sandwich},
        {"jsq-sim", suite_jsq_sim},
        {"jsq-ssc", suite_jsq_ssc},
        {"jsq-trend", suite_jsq_trend},
        {"ssq-dominance", suite_ssq_dominance},
        {"ssq-claims", suite_ssq_claims},
        {"mmn-regimes", suite_mmn_regimes},
        {"markov", suite_markov},
        {"determinism", suite_determinism},
        {"mmn-comparator", suite_mmn_comparator},
    };
    return r;
}

}  // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& [name, fn] : registry()) v.push_back(name);
        return v;
    }();
    return names;
}

bool is_suite(const std::string& name) {
    const auto& names = suite_names();
    return std::find(names.begin(), names.end(), name) != names.end();
}

std::vector<CheckRecord> run_suite(const std::string& name) {
    for (const auto& [n, fn] : registry()) {
        if (n == name) return fn();
    }
    throw std::invalid_argument("unknown verification suite: " + name);
}

nlohmann::json report_json(const std::vector<CheckRecord>& records) {
    auto arr = nlohmann::json::array();
    auto num = [](double v) -> nlohmann::json {
        if (std::isfinite(v)) return v;
        return format_number(v);
    };
    for (const auto& r : records) {
        arr.push_back({{"suite", r.suite},
                       {"check", r.check},
                       {"expected", num(r.expected)},
                       {"observed", num(r.observed)},
                       {"tolerance", num(r.tolerance)},
                       {"pass", r.pass}});
    }
    return arr;
}

}  // namespace queuetail::cli
