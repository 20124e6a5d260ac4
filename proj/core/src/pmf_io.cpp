#include "queuetail/pmf_io.hpp"

#include "queuetail/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace queuetail {

namespace {

BoundedPmf from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) {
        throw ValidationError("pmf: document must be a JSON object");
    }
    for (const auto& [key, _] : doc.items()) {
        if (key != "values" && key != "probs") {
            throw ValidationError("pmf: unknown key '" + key + "'");
        }
    }
    if (!doc.contains("values") || !doc.contains("probs")) {
        throw ValidationError("pmf: both 'values' and 'probs' are required");
    }
    const auto& jv = doc.at("values");
    const auto& jp = doc.at("probs");
    if (!jv.is_array() || !jp.is_array()) {
        throw ValidationError("pmf: 'values' and 'probs' must be arrays");
    }
    std::vector<std::int64_t> values;
    std::vector<double> probs;
    for (const auto& v : jv) {
        if (!v.is_number_integer()) {
            throw ValidationError("pmf: values must be integers");
        }
        values.push_back(v.get<std::int64_t>());
    }
    for (const auto& p : jp) {
        if (!p.is_number()) {
            throw ValidationError("pmf: probs must be numbers");
        }
        probs.push_back(p.get<double>());
    }
    return BoundedPmf(std::move(values), std::move(probs));
}

}  // namespace

BoundedPmf parse_pmf_json(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(std::string("pmf: malformed JSON: ") + e.what());
    }
    return from_json(doc);
}

BoundedPmf load_pmf_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("pmf: cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_pmf_json(buf.str());
}

std::string pmf_to_json(const BoundedPmf& pmf) {
    nlohmann::json doc;
    doc["values"] = std::vector<std::int64_t>(pmf.values().begin(), pmf.values().end());
    doc["probs"] = std::vector<double>(pmf.probs().begin(), pmf.probs().end());
    return doc.dump();
}

}  // namespace queuetail
