#include "cli.hpp"
#include "commands.hpp"
#include "rows.hpp"
#include "verify.hpp"

#include <gtest/gtest.h>

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

using namespace queuetail::cli;

namespace {

struct Result {
    int rc;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int rc = run_cli(args, out, err);
    return {rc, out.str(), err.str()};
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

std::string find_value(const std::string& text, const std::string& quantity, const std::string& at = "na") {
    for (const auto& r : csv_rows(text)) {
        if (r.size() == 9 && r[4] == quantity && r[3] == at) return r[5];
    }
    return "";
}

void expect_no_nan_text(const std::string& text) {
    for (const auto& r : csv_rows(text)) {
        for (const auto& c : r) {
            EXPECT_NE(c, "nan");
            EXPECT_NE(c, "-nan");
            EXPECT_NE(c, "inf");
            EXPECT_NE(c, "-inf");
        }
    }
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
    const auto p = std::filesystem::temp_directory_path() / name;
    std::ofstream(p) << content;
    return p;
}

}  // namespace

TEST(Rows, NumberFormatting) {
    EXPECT_EQ(format_number(0.5), "0.5");
    EXPECT_EQ(format_number(1.0 / 3.0), "0.3333333333");
    EXPECT_EQ(format_number(std::nan("")), "na");
    EXPECT_EQ(format_number(-std::numeric_limits<double>::infinity()), "na");
    EXPECT_EQ(format_number(std::numeric_limits<double>::infinity()), "vacuous");
    EXPECT_EQ(to_string(Conditions::Vacuous), "vacuous");
    EXPECT_EQ(to_string(Conditions::NotApplicable), "na");
}

TEST(Rows, CsvAndJson) {
    std::vector<Row> rows;
    RowSink sink(rows, "mm1", 1, 0.2);
    sink.at(1.0, "tail", 0.262144);
    sink.interval(0.5, "mgf", 1.1, 1.0, 1.2, Conditions::True);
    std::ostringstream csv;
    write_csv(csv, rows);
    EXPECT_EQ(csv.str(), std::string(kCsvHeader) +
                             "\nmm1,1,0.2,1,tail,0.262144,na,na,na\nmm1,1,0.2,0.5,mgf,1.1,1,1.2,true\n");
    const auto j = rows_to_json(rows);
    ASSERT_EQ(j.size(), 2u);
    EXPECT_EQ(j[1]["quantity"], "mgf");
    EXPECT_EQ(j[1]["conditions_met"], "true");
}

TEST(Cli, BoundsJsq) {
    const auto r = run({"bounds", "jsq", "--n", "1", "--eps", "3e-4", "--x", "5,10,20"});
    ASSERT_EQ(r.rc, kOk) << r.err;
    EXPECT_EQ(r.out.substr(0, r.out.find('\n')), kCsvHeader);
    EXPECT_NEAR(std::stod(find_value(r.out, "ld_rate")), 1.00015, 1e-5);
    EXPECT_FALSE(find_value(r.out, "tail_upper", "20").empty());
    expect_no_nan_text(r.out);
}

TEST(Cli, BoundsMmnFlagsVacuous) {
    const auto r = run({"bounds", "mmn", "--n", "100", "--alpha", "0.7", "--c", "1", "--x", "1,2,3"});
    ASSERT_EQ(r.rc, kOk) << r.err;
    bool vacuous = false;
    for (const auto& row : csv_rows(r.out)) {
        if (row.size() == 9 && row[4] == "p_r_gt_0_upper") {
            EXPECT_NEAR(std::stod(row[5]), 13.6, 0.01);
            vacuous = row[8] == "vacuous";
        }
    }
    EXPECT_TRUE(vacuous);
    expect_no_nan_text(r.out);
}

TEST(Cli, BoundsSsqInlinePmfs) {
    const auto r = run({"bounds", "ssq", "--arrival", R"({"values":[0,1],"probs":[0.6,0.4]})", "--service",
                        R"({"values":[0,1],"probs":[0.5,0.5]})", "--x", "5"});
    ASSERT_EQ(r.rc, kOk) << r.err;
    EXPECT_NEAR(std::stod(find_value(r.out, "ld_rate")), 0.47962, 1e-5);
}

TEST(Cli, ExactMmn) {
    const auto r = run({"exact", "mmn", "--n", "2", "--eps", "0.5"});
    ASSERT_EQ(r.rc, kOk) << r.err;
    EXPECT_NEAR(std::stod(find_value(r.out, "p_q_eq_n")), 1.0 / 6.0, 1e-9);
    EXPECT_NEAR(std::stod(find_value(r.out, "p_q_eq_n_bd")), 1.0 / 6.0, 1e-9);
    EXPECT_LT(std::stod(find_value(r.out, "max_rel_residual")), 1e-8);
    const auto one = run({"exact", "mmn", "--n", "1", "--eps", "0.5"});
    EXPECT_NEAR(std::stod(find_value(one.out, "integral_neg")), 2.0, 1e-9);
}

TEST(Cli, ExactMm1) {
    const auto r = run({"exact", "mm1", "--eps", "0.2", "--x", "1"});
    ASSERT_EQ(r.rc, kOk);
    EXPECT_EQ(find_value(r.out, "tail", "1"), "0.262144");
}

TEST(Cli, JsonFormatAndOutputFile) {
    const auto path = std::filesystem::temp_directory_path() / "queuetail_cli_test.json";
    const auto r = run({"exact", "mm1", "--eps", "0.5", "--x", "1", "--format", "json", "--output", path.string()});
    ASSERT_EQ(r.rc, kOk) << r.err;
    EXPECT_TRUE(r.out.empty());
    std::ifstream in(path);
    const auto j = nlohmann::json::parse(in);
    ASSERT_TRUE(j.is_array());
    EXPECT_NEAR(j[0]["value"].get<double>(), 0.125, 1e-12);
    std::filesystem::remove(path);
}

TEST(Cli, SimulateRequiresSeed) {
    EXPECT_EQ(run({"simulate", "jsq", "--n", "2", "--eps", "0.2", "--events", "1e5"}).rc, kInputError);
}

TEST(Cli, SimulateScientificCounts) {
    const auto r = run({"simulate", "jsq", "--n", "2", "--eps", "0.2", "--events", "2e5", "--seed", "1", "--threads", "1"});
    ASSERT_EQ(r.rc, kOk) << r.err;
    EXPECT_FALSE(find_value(r.out, "empty_frac").empty());
    expect_no_nan_text(r.out);
    EXPECT_EQ(run({"simulate", "jsq", "--n", "2", "--eps", "0.2", "--events", "1.5e", "--seed", "1"}).rc, kInputError);
    EXPECT_EQ(run({"simulate", "jsq", "--n", "2", "--eps", "0.2", "--events", "1e5", "--seed", "-3"}).rc, kInputError);
}

TEST(Cli, InputErrors) {
    EXPECT_EQ(run({"bounds", "jsq", "--n", "2", "--eps", "1.5"}).rc, kInputError);
    EXPECT_EQ(run({"bounds", "jsq", "--n", "0", "--eps", "0.5"}).rc, kInputError);
    EXPECT_EQ(run({"bounds", "nope"}).rc, kInputError);
    EXPECT_EQ(run({}).rc, kInputError);
    EXPECT_EQ(run({"verify", "--suite", "no-such-suite"}).rc, kInputError);
    EXPECT_EQ(run({"bounds", "ssq", "--arrival", "{", "--service", "{}"}).rc, kInputError);
    EXPECT_EQ(run({"bounds", "jsq", "--n", "1", "--eps", "0.2", "--format", "xml"}).rc, kInputError);
}

TEST(Cli, VerifyNone) {
    const auto r = run({"verify", "--suite", "none"});
    EXPECT_EQ(r.rc, kOk);
    EXPECT_EQ(nlohmann::json::parse(r.out), nlohmann::json::array());
}

TEST(Cli, VerifyQuickSuites) {
    const auto r = run({"verify", "--suite", "mmn-integrals,markov"});
    ASSERT_EQ(r.rc, kOk) << r.out;
    const auto j = nlohmann::json::parse(r.out);
    ASSERT_FALSE(j.empty());
    for (const auto& rec : j) {
        for (const char* key : {"suite", "check", "expected", "observed", "tolerance", "pass"}) {
            EXPECT_TRUE(rec.contains(key)) << key;
        }
        EXPECT_TRUE(rec["pass"].get<bool>());
    }
}

TEST(Cli, SuiteNames) {
    const auto& names = suite_names();
    ASSERT_GE(names.size(), 12u);
    EXPECT_EQ(names.front(), "mmn-oracle");
    EXPECT_TRUE(is_suite("determinism"));
    EXPECT_FALSE(is_suite("all"));
    EXPECT_THROW(run_suite("bogus"), std::invalid_argument);
}

TEST(Sweep, RejectsUnknownKeys) {
    const auto p = temp_file("queuetail_bad_sweep.json",
                             R"({"system":{"type":"jsq","n":1,"eps":0.2},"mode":"bounds","extra":1})");
    EXPECT_EQ(run({"sweep", "--config", p.string()}).rc, kInputError);
    const auto q = temp_file("queuetail_bad_sweep2.json",
                             R"({"system":{"type":"jsq","n":1,"eps":0.2,"colour":"red"},"mode":"bounds"})");
    EXPECT_EQ(run({"sweep", "--config", q.string()}).rc, kInputError);
    const auto s = temp_file("queuetail_bad_sweep3.json",
                             R"({"system":{"type":"jsq","n":1,"eps":0.2},"mode":"simulate"})");
    EXPECT_EQ(run({"sweep", "--config", s.string()}).rc, kInputError);
    EXPECT_EQ(run({"sweep", "--config", "/nonexistent.json"}).rc, kInputError);
}

TEST(Sweep, GoldenFixtures) {
    for (const char* name : {"jsq_bounds", "ssq_exact"}) {
        const auto cfg = std::filesystem::path(QUEUETAIL_FIXTURE_DIR) / (std::string(name) + ".json");
        const auto golden = std::filesystem::path(QUEUETAIL_GOLDEN_DIR) / (std::string(name) + ".csv");
        const auto r = run({"sweep", "--config", cfg.string()});
        ASSERT_EQ(r.rc, kOk) << r.err;
        std::ifstream in(golden);
        std::stringstream want;
        want << in.rdbuf();
        EXPECT_EQ(r.out, want.str()) << name;
    }
}

TEST(Sweep, SimulatePointsInOrder) {
    const auto p = temp_file("queuetail_sim_sweep.json", R"({
        "system": {"type": "jsq", "n": [2, 1], "eps": 0.3},
        "mode": "simulate",
        "grid": {"x": [1]},
        "sim": {"seed": 4, "horizon_events": 200000, "batches": 8}
    })");
    const auto a = run({"sweep", "--config", p.string()});
    ASSERT_EQ(a.rc, kOk) << a.err;
    const auto rows = csv_rows(a.out);
    ASSERT_GT(rows.size(), 2u);
    EXPECT_EQ(rows[1][1], "2");
    EXPECT_EQ(rows.back()[1], "1");
    EXPECT_EQ(run({"sweep", "--config", p.string()}).out, a.out);
}
