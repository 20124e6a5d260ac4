#pragma once

#include "rows.hpp"

#include <string>
#include <vector>

#include <json.hpp>

namespace queuetail::cli {

struct SweepOutput {
    std::string format = "csv";
    std::string path;   // empty: stdout
};

/// Parses and validates a sweep configuration. Unknown keys anywhere in the
/// document are rejected with ValidationError.
///
///   {
///     "system": {"type": "jsq" | "mmn" | "mm1" | "ssq", ...},
///     "mode":   "bounds" | "exact" | "simulate",
///     "grid":   {"x": [...], "theta": [...]},
///     "sim":    {"seed": 1, "horizon_events": 1e6, "warmup_fraction": 0.2,
///                "batches": 32, "replications": 1, "ld_window": [lo, hi]},
///     "output": {"format": "csv" | "json", "path": "out.csv"}
///   }
///
/// jsq and mmn take "n" (integer or list) with either "eps" (number or list)
/// or "scaling": {"c": .., "alpha": ..}; "mu" defaults to 1. mm1 takes "eps".
/// ssq takes "arrival" and "service" as PMF objects or file paths.
struct SweepPlan {
    nlohmann::json config;
    SweepOutput output;
};

SweepPlan parse_sweep(const std::string& text, const std::string& base_dir);

/// Rows for every point of the plan in configuration order. Points run on
/// up to QUEUETAIL_THREADS workers. `max_residual` collects exact-mode
/// cross-check residuals.
std::vector<Row> run_sweep(const SweepPlan& plan, double& max_residual);

}  // namespace queuetail::cli
