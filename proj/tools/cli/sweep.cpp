#include "sweep.hpp"

#include "commands.hpp"

#include "queuetail/errors.hpp"
#include "queuetail/pmf_io.hpp"
#include "queuetail/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <mutex>
#include <set>
#include <thread>

namespace queuetail::cli {

namespace {

using nlohmann::json;

void require_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed,
                  const std::set<std::string>& required = {}) {
    if (!obj.is_object()) {
        throw ValidationError("sweep: '" + where + "' must be an object");
    }
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.contains(key)) {
            throw ValidationError("sweep: unknown key '" + key + "' in '" + where + "'");
        }
    }
    for (const auto& key : required) {
        if (!obj.contains(key)) {
            throw ValidationError("sweep: missing key '" + key + "' in '" + where + "'");
        }
    }
}

double number(const json& v, const std::string& what) {
    if (!v.is_number()) {
        throw ValidationError("sweep: '" + what + "' must be a number");
    }
    return v.get<double>();
}

std::int64_t count(const json& v, const std::string& what) {
    const double d = number(v, what);
    if (!(d >= 0.0) || d != std::floor(d) || d > 9.0e18) {
        throw ValidationError("sweep: '" + what + "' must be a nonnegative integer");
    }
    return static_cast<std::int64_t>(d);
}

std::vector<double> numbers(const json& v, const std::string& what) {
    std::vector<double> out;
    if (v.is_array()) {
        for (const auto& e : v) out.push_back(number(e, what));
    } else {
        out.push_back(number(v, what));
    }
    return out;
}

std::vector<std::int64_t> counts(const json& v, const std::string& what) {
    std::vector<std::int64_t> out;
    if (v.is_array()) {
        for (const auto& e : v) out.push_back(count(e, what));
    } else {
        out.push_back(count(v, what));
    }
    return out;
}

BoundedPmf pmf_from(const json& v, const std::string& base_dir) {
    if (v.is_string()) {
        std::filesystem::path p(v.get<std::string>());
        if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
        return load_pmf_file(p);
    }
    return parse_pmf_json(v.dump());
}

struct Point {
    std::string type;
    std::int64_t n = 1;
    double eps = 0.0;
    double mu = 1.0;
    bool scaled = false;
    double c = 0.0;
    double alpha = 0.0;
};

}  // namespace

SweepPlan parse_sweep(const std::string& text, const std::string& base_dir) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("sweep: invalid JSON: ") + e.what());
    }
    require_keys(doc, "config", {"system", "mode", "grid", "sim", "output"}, {"system", "mode"});
    const auto& sys = doc["system"];
    if (!sys.is_object() || !sys.contains("type") || !sys["type"].is_string()) {
        throw ValidationError("sweep: 'system.type' is required");
    }
    const std::string type = sys["type"];
    if (type == "jsq" || type == "mmn") {
        require_keys(sys, "system", {"type", "n", "eps", "mu", "scaling"}, {"n"});
        if (sys.contains("eps") == sys.contains("scaling")) {
            throw ValidationError("sweep: give exactly one of 'eps' or 'scaling'");
        }
        if (sys.contains("scaling")) {
            require_keys(sys["scaling"], "scaling", {"c", "alpha"}, {"c", "alpha"});
        }
    } else if (type == "mm1") {
        require_keys(sys, "system", {"type", "eps"}, {"eps"});
    } else if (type == "ssq") {
        require_keys(sys, "system", {"type", "arrival", "service"}, {"arrival", "service"});
    } else {
        throw ValidationError("sweep: unknown system type '" + type + "'");
    }
    if (!doc["mode"].is_string()) {
        throw ValidationError("sweep: 'mode' must be a string");
    }
    const std::string mode = doc["mode"];
    const std::set<std::string> modes = {"bounds", "exact", "simulate"};
    if (!modes.contains(mode)) {
        throw ValidationError("sweep: unknown mode '" + mode + "'");
    }
    if ((type == "mm1" && mode != "exact") || (type == "mmn" && mode == "simulate") ||
        (type == "jsq" && mode == "exact")) {
        throw ValidationError("sweep: mode '" + mode + "' is not available for system '" + type + "'");
    }
    if (type == "mmn" && mode == "bounds" && !sys.contains("scaling")) {
        throw ValidationError("sweep: mmn bounds need 'scaling'");
    }
    if (doc.contains("grid")) {
        require_keys(doc["grid"], "grid", {"x", "theta"});
    }
    if (doc.contains("sim")) {
        require_keys(doc["sim"], "sim",
                     {"seed", "horizon_events", "warmup_fraction", "batches", "replications", "ld_window"}, {"seed"});
    } else if (mode == "simulate") {
        throw ValidationError("sweep: simulate mode needs a 'sim' block with a seed");
    }

    SweepPlan plan;
    if (doc.contains("output")) {
        const auto& out = doc["output"];
        require_keys(out, "output", {"format", "path"});
        if (out.contains("format")) {
            if (!out["format"].is_string() || (out["format"] != "csv" && out["format"] != "json")) {
                throw ValidationError("sweep: output.format must be 'csv' or 'json'");
            }
            plan.output.format = out["format"];
        }
        if (out.contains("path")) {
            if (!out["path"].is_string()) throw ValidationError("sweep: output.path must be a string");
            std::filesystem::path p(out["path"].get<std::string>());
            if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
            plan.output.path = p.string();
        }
    }
    if (type == "ssq") {
        // resolve PMFs now so that file errors surface as input errors
        auto resolved = doc;
        resolved["system"]["arrival"] = json::parse(pmf_to_json(pmf_from(sys["arrival"], base_dir)));
        resolved["system"]["service"] = json::parse(pmf_to_json(pmf_from(sys["service"], base_dir)));
        doc = resolved;
    }
    plan.config = doc;
    return plan;
}

std::vector<Row> run_sweep(const SweepPlan& plan, double& max_residual) {
    const auto& doc = plan.config;
    const auto& sys = doc["system"];
    const std::string type = sys["type"];
    const std::string mode = doc["mode"];

    std::vector<double> xs;
    std::vector<double> thetas;
    if (doc.contains("grid")) {
        if (doc["grid"].contains("x")) xs = numbers(doc["grid"]["x"], "grid.x");
        if (doc["grid"].contains("theta")) thetas = numbers(doc["grid"]["theta"], "grid.theta");
    }

    SimConfig cfg;
    if (doc.contains("sim")) {
        const auto& s = doc["sim"];
        cfg.seed = static_cast<std::uint64_t>(count(s["seed"], "sim.seed"));
        if (s.contains("horizon_events")) cfg.horizon_events = count(s["horizon_events"], "sim.horizon_events");
        if (s.contains("warmup_fraction")) cfg.warmup_fraction = number(s["warmup_fraction"], "sim.warmup_fraction");
        if (s.contains("batches")) cfg.batches = count(s["batches"], "sim.batches");
        if (s.contains("replications")) cfg.replications = count(s["replications"], "sim.replications");
        if (s.contains("ld_window")) {
            const auto w = numbers(s["ld_window"], "sim.ld_window");
            if (w.size() != 2) throw ValidationError("sweep: sim.ld_window must be [lo, hi]");
            cfg.ld_lo = w[0];
            cfg.ld_hi = w[1];
        }
        cfg.tail_grid = xs;
        cfg.theta_grid = thetas;
        cfg.validate();
    }

    std::vector<Point> points;
    if (type == "ssq") {
        points.push_back({type});
    } else if (type == "mm1") {
        for (double e : numbers(sys["eps"], "system.eps")) points.push_back({type, 1, e});
    } else {
        const double mu = sys.contains("mu") ? number(sys["mu"], "system.mu") : 1.0;
        for (std::int64_t n : counts(sys["n"], "system.n")) {
            if (sys.contains("scaling")) {
                const HtScaling sc(number(sys["scaling"]["c"], "scaling.c"), number(sys["scaling"]["alpha"], "scaling.alpha"));
                points.push_back({type, n, sc.eps_of(n), mu, true, sc.c(), sc.alpha()});
            } else {
                for (double e : numbers(sys["eps"], "system.eps")) points.push_back({type, n, e, mu});
            }
        }
    }

    std::vector<std::vector<Row>> results(points.size());
    std::vector<double> residuals(points.size(), 0.0);
    const unsigned workers = worker_count(0, static_cast<std::int64_t>(points.size()));
    if (workers > 1) cfg.threads = 1;

    auto run_point = [&](std::size_t i) {
        const Point& p = points[i];
        if (type == "jsq") {
            const JsqSystem js(p.n, p.mu, p.eps);
            results[i] = mode == "bounds" ? bounds_jsq_rows(js, xs) : simulate_jsq_rows(js, cfg);
        } else if (type == "mmn") {
            if (mode == "bounds") {
                results[i] = bounds_mmn_rows(p.n, p.mu, HtScaling(p.c, p.alpha), xs);
            } else {
                results[i] = exact_mmn_rows(MmnSystem(p.n, p.mu, p.eps), thetas, residuals[i]);
            }
        } else if (type == "mm1") {
            results[i] = exact_mm1_rows(p.eps, xs);
        } else {
            const SsqSystem ss(parse_pmf_json(sys["arrival"].dump()), parse_pmf_json(sys["service"].dump()));
            if (mode == "bounds") {
                results[i] = bounds_ssq_rows(ss, xs, thetas);
            } else if (mode == "exact") {
                results[i] = exact_ssq_rows(ss, xs, thetas, residuals[i]);
            } else {
                results[i] = simulate_ssq_rows(ss, cfg);
            }
        }
    };

    if (workers <= 1) {
        for (std::size_t i = 0; i < points.size(); ++i) run_point(i);
    } else {
        std::exception_ptr error;
        std::vector<std::thread> pool;
        std::atomic<std::size_t> next{0};
        std::mutex m;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < points.size(); i = next++) {
                    try {
                        run_point(i);
                    } catch (...) {
                        std::lock_guard lock(m);
                        if (!error) error = std::current_exception();
                    }
                }
            });
        }
        for (auto& t : pool) t.join();
        if (error) std::rethrow_exception(error);
    }

    std::vector<Row> rows;
    for (auto& r : results) rows.insert(rows.end(), r.begin(), r.end());
    max_residual = residuals.empty() ? 0.0 : *std::max_element(residuals.begin(), residuals.end());
    return rows;
}

}  // namespace queuetail::cli
