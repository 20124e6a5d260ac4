#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace queuetail::cli {

enum class Conditions { True, False, Vacuous, NotApplicable };

/// One output record. Unused numeric fields are NaN and print as "na".
struct Row {
    std::string system;
    std::int64_t n = 1;
    double eps = 0.0;
    double x_or_theta = 0.0;
    std::string quantity;
    double value = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    Conditions conditions = Conditions::NotApplicable;
};

inline constexpr const char* kCsvHeader = "system,n,eps,x_or_theta,quantity,value,ci_lo,ci_hi,conditions_met";

/// "%.10g"; NaN and -inf print as "na", +inf as "vacuous".
std::string format_number(double v);
std::string to_string(Conditions c);

void write_csv(std::ostream& out, const std::vector<Row>& rows);
nlohmann::json rows_to_json(const std::vector<Row>& rows);
void write_rows(std::ostream& out, const std::vector<Row>& rows, const std::string& format);

/// Builder for rows sharing system, n and eps.
class RowSink {
public:
    RowSink(std::vector<Row>& rows, std::string system, std::int64_t n, double eps)
        : rows_(rows), system_(std::move(system)), n_(n), eps_(eps) {}

    void scalar(const std::string& quantity, double value, Conditions c = Conditions::NotApplicable);
    void at(double x_or_theta, const std::string& quantity, double value,
            Conditions c = Conditions::NotApplicable);
    void interval(double x_or_theta, const std::string& quantity, double value, double lo, double hi,
                  Conditions c = Conditions::NotApplicable);

private:
    std::vector<Row>& rows_;
    std::string system_;
    std::int64_t n_;
    double eps_;
};

}  // namespace queuetail::cli
