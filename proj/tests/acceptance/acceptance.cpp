// Runs the verification suites behind each acceptance criterion and prints
// one PASS/FAIL line per criterion. A criterion fails if any check fails or
// the suite exceeds its runtime budget.
//
//   queuetail_acceptance            all criteria
//   queuetail_acceptance 5 7        selected criteria

#include "verify.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

namespace {

struct Criterion {
    int id;
    const char* suite;
    const char* title;
    double budget_s;
};

const std::vector<Criterion> kCriteria = {
    {1, "mmn-oracle", "G_n formulas match the birth-death solver", 5},
    {2, "mmn-integrals", "closed-form G_n integrals equal 2", 1},
    {3, "mmn-waiting", "waiting count given w > 0 is geometric", 1},
    {4, "jsq-sandwich", "single-server JSQ tail sandwich", 1},
    {5, "jsq-sim", "simulated JSQ tail, LD slope and empty fraction", 120},
    {6, "jsq-ssc", "simulated perpendicular MGF below 128", 120},
    {7, "jsq-trend", "|mgf(0.5) - 2| decreasing for n = 2, 4, 8", 600},
    {8, "ssq-dominance", "SSQ tail bound dominates exact Bernoulli tails", 5},
    {9, "ssq-claims", "unused-service and drift bounds on the exact chain", 5},
    {10, "mmn-regimes", "M/M/n idle-server bounds vs exact", 30},
    {11, "markov", "Markov-inequality tail bound", 1},
    {12, "determinism", "simulate output reproducible by seed", 60},
};

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) {
        char* end = nullptr;
        const long v = std::strtol(argv[i], &end, 10);
        if (*end != '\0' || v < 1 || v > static_cast<long>(kCriteria.size())) {
            std::fprintf(stderr, "usage: %s [criterion 1-%zu ...]\n", argv[0], kCriteria.size());
            return 2;
        }
        selected.push_back(static_cast<int>(v));
    }
    if (selected.empty()) {
        for (const auto& c : kCriteria) selected.push_back(c.id);
    }

    int failed = 0;
    for (int id : selected) {
        const auto& c = kCriteria[id - 1];
        const auto t0 = std::chrono::steady_clock::now();
        std::vector<queuetail::cli::CheckRecord> records;
        std::string error;
        try {
            records = queuetail::cli::run_suite(c.suite);
        } catch (const std::exception& e) {
            error = e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

        int bad = 0;
        for (const auto& r : records) bad += !r.pass;
        const bool in_budget = secs <= c.budget_s;
        const bool pass = error.empty() && !records.empty() && bad == 0 && in_budget;
        failed += !pass;

        std::printf("criterion %2d %-14s %s  %zu checks, %zu failed, %.2f s (budget %.0f s)  %s\n", c.id, c.suite,
                    pass ? "PASS" : "FAIL", records.size(), static_cast<std::size_t>(bad), secs, c.budget_s, c.title);
        if (!error.empty()) std::printf("    error: %s\n", error.c_str());
        if (!in_budget) std::printf("    over runtime budget\n");
        for (const auto& r : records) {
            if (!r.pass) {
                std::printf("    failed: %s (expected %.10g, observed %.10g, tolerance %.3g)\n", r.check.c_str(),
                            r.expected, r.observed, r.tolerance);
            }
        }
        std::fflush(stdout);
    }
    std::printf("%zu criteria, %d passed, %d failed\n", selected.size(), static_cast<int>(selected.size()) - failed,
                failed);
    return failed == 0 ? 0 : 1;
}
