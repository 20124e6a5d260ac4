#include "cli.hpp"

#include "commands.hpp"
#include "rows.hpp"
#include "sweep.hpp"
#include "verify.hpp"

#include "queuetail/errors.hpp"
#include "queuetail/pmf_io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace queuetail::cli {

namespace {

std::int64_t parse_count(const std::string& text, const std::string& flag) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (errno != 0 || end == text.c_str() || *end != '\0' || !(v >= 1.0) || v != std::floor(v) || v > 9.0e18) {
        throw ValidationError(flag + ": expected a positive integer count, got '" + text + "'");
    }
    return static_cast<std::int64_t>(v);
}

std::uint64_t parse_seed(const std::string& text) {
    errno = 0;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(text.c_str(), &end, 0);
    if (errno != 0 || end == text.c_str() || *end != '\0' || text.front() == '-') {
        throw ValidationError("--seed: expected a nonnegative 64-bit integer, got '" + text + "'");
    }
    return v;
}

BoundedPmf pmf_arg(const std::string& value) {
    const auto first = value.find_first_not_of(" \t\n");
    if (first != std::string::npos && value[first] == '{') {
        return parse_pmf_json(value);
    }
    return load_pmf_file(value);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ValidationError("cannot open '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct SimFlags {
    std::string events = "1e7";
    std::string seed;
    std::string reps = "1";
    std::int64_t batches = 32;
    double warmup = 0.2;
    std::vector<double> ld_window;
    unsigned threads = 0;

    SimConfig config(const std::vector<double>& xs, const std::vector<double>& thetas, const char* count_flag) const {
        SimConfig c;
        c.seed = parse_seed(seed);
        c.horizon_events = parse_count(events, count_flag);
        c.replications = parse_count(reps, "--reps");
        c.batches = batches;
        c.warmup_fraction = warmup;
        c.tail_grid = xs;
        c.theta_grid = thetas;
        c.threads = threads;
        if (!ld_window.empty()) {
            if (ld_window.size() != 2) throw ValidationError("--ld-window: expected lo,hi");
            c.ld_lo = ld_window[0];
            c.ld_hi = ld_window[1];
        }
        c.validate();
        return c;
    }
};

void add_sim_flags(CLI::App* app, SimFlags& f, const char* count_flag) {
    app->add_option(count_flag, f.events, "Events (jsq) or slots (ssq) per replication; 1e8 notation accepted")
        ->capture_default_str();
    app->add_option("--seed", f.seed, "Base seed (required)")->required();
    app->add_option("--reps", f.reps, "Replications")->capture_default_str();
    app->add_option("--batches", f.batches, "Batches per replication")->capture_default_str();
    app->add_option("--warmup", f.warmup, "Warmup fraction of the horizon")->capture_default_str();
    app->add_option("--ld-window", f.ld_window, "x range lo,hi for the LD slope fit")->delimiter(',');
    app->add_option("--threads", f.threads, "Worker threads (0: QUEUETAIL_THREADS or all cores)");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"queuetail: tail bounds, exact laws and simulation for JSQ, SSQ and M/M/n", "queuetail"};
    app.require_subcommand(1);
    std::string format = "csv";
    std::string output;
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    app.add_option("--output", output, "Write to this file instead of stdout");

    std::int64_t n = 1;
    double eps = 0.0;
    double mu = 1.0;
    double c = 0.0;
    double alpha = 0.0;
    std::vector<double> xs;
    std::vector<double> thetas;
    std::string arrival;
    std::string service;

    auto add_x = [&](CLI::App* sub, const char* desc) { sub->add_option("--x", xs, desc)->delimiter(','); };
    auto add_theta = [&](CLI::App* sub) { sub->add_option("--theta", thetas, "theta grid")->delimiter(','); };
    auto add_pmfs = [&](CLI::App* sub) {
        sub->add_option("--arrival", arrival, "Arrival PMF: JSON file or inline JSON")->required();
        sub->add_option("--service", service, "Service PMF: JSON file or inline JSON")->required();
    };

    auto* bounds = app.add_subcommand("bounds", "Analytical tail bounds")->require_subcommand(1);
    auto* b_jsq = bounds->add_subcommand("jsq", "JSQ bounds on P(eps sum q > x)");
    b_jsq->add_option("--n", n, "Servers")->required();
    b_jsq->add_option("--eps", eps, "Heavy-traffic parameter")->required();
    b_jsq->add_option("--mu", mu, "Service rate")->capture_default_str();
    add_x(b_jsq, "x grid");
    auto* b_ssq = bounds->add_subcommand("ssq", "Single-server queue bound on P(eps q > x)");
    add_pmfs(b_ssq);
    add_x(b_ssq, "x grid");
    add_theta(b_ssq);
    auto* b_mmn = bounds->add_subcommand("mmn", "M/M/n idle-server bounds under eps = c n^-alpha");
    b_mmn->add_option("--n", n, "Servers")->required();
    b_mmn->add_option("--c", c, "Scaling constant")->required();
    b_mmn->add_option("--alpha", alpha, "Scaling exponent")->required();
    b_mmn->add_option("--mu", mu, "Service rate")->capture_default_str();
    add_x(b_mmn, "x grid");

    auto* exact_cmd = app.add_subcommand("exact", "Exact stationary quantities")->require_subcommand(1);
    auto* e_mm1 = exact_cmd->add_subcommand("mm1", "M/M/1 scaled tail");
    e_mm1->add_option("--eps", eps, "Heavy-traffic parameter")->required();
    add_x(e_mm1, "x grid");
    auto* e_mmn = exact_cmd->add_subcommand("mmn", "M/M/n summary from G_n integrals and birth-death");
    e_mmn->add_option("--n", n, "Servers")->required();
    e_mmn->add_option("--eps", eps, "Heavy-traffic parameter")->required();
    e_mmn->add_option("--mu", mu, "Service rate")->capture_default_str();
    add_theta(e_mmn);
    auto* e_ssq = exact_cmd->add_subcommand("ssq", "Single-server queue stationary law by power iteration");
    add_pmfs(e_ssq);
    add_x(e_ssq, "x grid");
    add_theta(e_ssq);

    SimFlags sim_flags;
    auto* simulate = app.add_subcommand("simulate", "Seeded steady-state simulation")->require_subcommand(1);
    auto* s_jsq = simulate->add_subcommand("jsq", "JSQ CTMC");
    s_jsq->add_option("--n", n, "Servers")->required();
    s_jsq->add_option("--eps", eps, "Heavy-traffic parameter")->required();
    s_jsq->add_option("--mu", mu, "Service rate")->capture_default_str();
    add_x(s_jsq, "tail grid");
    add_theta(s_jsq);
    add_sim_flags(s_jsq, sim_flags, "--events");
    auto* s_ssq = simulate->add_subcommand("ssq", "Lindley recursion");
    add_pmfs(s_ssq);
    add_x(s_ssq, "tail grid");
    add_theta(s_ssq);
    add_sim_flags(s_ssq, sim_flags, "--slots");

    std::string config_path;
    auto* sweep = app.add_subcommand("sweep", "Run a JSON-configured sweep");
    sweep->add_option("--config", config_path, "Sweep configuration file")->required();

    std::string suite = "all";
    std::string report_path;
    auto* verify = app.add_subcommand("verify", "Run verification suites and emit a JSON report");
    verify->add_option("--suite", suite, "Suite name, 'all' or 'none'")->capture_default_str();
    verify->add_option("--report", report_path, "Write the report here instead of stdout");

    for (auto* sub : {bounds, b_jsq, b_ssq, b_mmn, exact_cmd, e_mm1, e_mmn, e_ssq, simulate, s_jsq, s_ssq, sweep, verify}) {
        sub->fallthrough();
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }

    auto emit = [&](const std::vector<Row>& rows, const std::string& fmt, const std::string& path) {
        if (path.empty()) {
            write_rows(out, rows, fmt);
            return;
        }
        std::ofstream file(path, std::ios::binary);
        if (!file) throw ValidationError("cannot write '" + path + "'");
        write_rows(file, rows, fmt);
    };

    try {
        if (b_jsq->parsed()) {
            emit(bounds_jsq_rows(JsqSystem(n, mu, eps), xs), format, output);
        } else if (b_ssq->parsed()) {
            emit(bounds_ssq_rows(SsqSystem(pmf_arg(arrival), pmf_arg(service)), xs, thetas), format, output);
        } else if (b_mmn->parsed()) {
            emit(bounds_mmn_rows(n, mu, HtScaling(c, alpha), xs), format, output);
        } else if (e_mm1->parsed()) {
            emit(exact_mm1_rows(eps, xs), format, output);
        } else if (e_mmn->parsed() || e_ssq->parsed()) {
            double residual = 0.0;
            const auto rows = e_mmn->parsed()
                                  ? exact_mmn_rows(MmnSystem(n, mu, eps), thetas, residual)
                                  : exact_ssq_rows(SsqSystem(pmf_arg(arrival), pmf_arg(service)), xs, thetas, residual);
            emit(rows, format, output);
            if (residual > kResidualTolerance) {
                err << "error: cross-check residual " << format_number(residual) << " exceeds "
                    << format_number(kResidualTolerance) << '\n';
                return kVerificationFailure;
            }
        } else if (s_jsq->parsed()) {
            const auto cfg = sim_flags.config(xs.empty() ? std::vector<double>{0.5, 1.0, 2.0} : xs, thetas, "--events");
            emit(simulate_jsq_rows(JsqSystem(n, mu, eps), cfg), format, output);
        } else if (s_ssq->parsed()) {
            const auto cfg = sim_flags.config(xs.empty() ? std::vector<double>{0.5, 1.0, 2.0} : xs, thetas, "--slots");
            emit(simulate_ssq_rows(SsqSystem(pmf_arg(arrival), pmf_arg(service)), cfg), format, output);
        } else if (sweep->parsed()) {
            const auto base = std::filesystem::path(config_path).parent_path().string();
            const auto plan = parse_sweep(read_file(config_path), base);
            double residual = 0.0;
            const auto rows = run_sweep(plan, residual);
            const bool format_given = app.get_option("--format")->count() > 0;
            emit(rows, format_given ? format : plan.output.format, output.empty() ? plan.output.path : output);
            if (residual > kResidualTolerance) {
                err << "error: cross-check residual " << format_number(residual) << " exceeds tolerance\n";
                return kVerificationFailure;
            }
        } else if (verify->parsed()) {
            std::vector<std::string> names;
            if (suite == "all") {
                names = suite_names();
            } else if (suite != "none") {
                std::stringstream ss(suite);
                for (std::string item; std::getline(ss, item, ',');) {
                    if (!is_suite(item)) throw ValidationError("unknown suite '" + item + "'");
                    names.push_back(item);
                }
            }
            std::vector<CheckRecord> records;
            for (const auto& name : names) {
                auto r = run_suite(name);
                records.insert(records.end(), r.begin(), r.end());
            }
            const std::string text = report_json(records).dump(2) + "\n";
            if (report_path.empty()) {
                out << text;
            } else {
                std::ofstream file(report_path, std::ios::binary);
                if (!file) throw ValidationError("cannot write '" + report_path + "'");
                file << text;
            }
            const bool ok = std::all_of(records.begin(), records.end(), [](const CheckRecord& r) { return r.pass; });
            return ok ? kOk : kVerificationFailure;
        }
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const DegenerateSystemError& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const NumericalError& e) {
        err << "error: " << e.what() << " (achieved " << format_number(e.achieved_error()) << ")\n";
        return kNumericalFailure;
    } catch (const InstabilityError& e) {
        err << "error: " << e.what() << '\n';
        return kNumericalFailure;
    } catch (const EstimationError& e) {
        err << "error: " << e.what() << '\n';
        return kNumericalFailure;
    }
    return kOk;
}

}  // namespace queuetail::cli
