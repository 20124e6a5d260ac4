#include "rows.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace queuetail::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

nlohmann::json json_number(double v) {
    if (std::isfinite(v)) {
        return v;
    }
    return format_number(v);
}

}  // namespace

std::string format_number(double v) {
    if (std::isnan(v) || v == -std::numeric_limits<double>::infinity()) {
        return "na";
    }
    if (std::isinf(v)) {
        return "vacuous";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string to_string(Conditions c) {
    switch (c) {
        case Conditions::True: return "true";
        case Conditions::False: return "false";
        case Conditions::Vacuous: return "vacuous";
        case Conditions::NotApplicable: break;
    }
    return "na";
}

void write_csv(std::ostream& out, const std::vector<Row>& rows) {
    out << kCsvHeader << '\n';
    for (const auto& r : rows) {
        out << r.system << ',' << r.n << ',' << format_number(r.eps) << ',' << format_number(r.x_or_theta) << ','
            << r.quantity << ',' << format_number(r.value) << ',' << format_number(r.ci_lo) << ','
            << format_number(r.ci_hi) << ',' << to_string(r.conditions) << '\n';
    }
}

nlohmann::json rows_to_json(const std::vector<Row>& rows) {
    auto arr = nlohmann::json::array();
    for (const auto& r : rows) {
        arr.push_back({{"system", r.system},
                       {"n", r.n},
                       {"eps", json_number(r.eps)},
                       {"x_or_theta", json_number(r.x_or_theta)},
                       {"quantity", r.quantity},
                       {"value", json_number(r.value)},
                       {"ci_lo", json_number(r.ci_lo)},
                       {"ci_hi", json_number(r.ci_hi)},
                       {"conditions_met", to_string(r.conditions)}});
    }
    return arr;
}

void write_rows(std::ostream& out, const std::vector<Row>& rows, const std::string& format) {
    if (format == "json") {
        out << rows_to_json(rows).dump(2) << '\n';
    } else {
        write_csv(out, rows);
    }
}

void RowSink::scalar(const std::string& quantity, double value, Conditions c) {
    rows_.push_back({system_, n_, eps_, kNaN, quantity, value, kNaN, kNaN, c});
}

void RowSink::at(double x_or_theta, const std::string& quantity, double value, Conditions c) {
    rows_.push_back({system_, n_, eps_, x_or_theta, quantity, value, kNaN, kNaN, c});
}

void RowSink::interval(double x_or_theta, const std::string& quantity, double value, double lo, double hi,
                       Conditions c) {
    rows_.push_back({system_, n_, eps_, x_or_theta, quantity, value, lo, hi, c});
}

}  // namespace queuetail::cli
