#pragma once

#include "queuetail/model.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace queuetail {

/// Parses `{"values":[0,1,2],"probs":[0.2,0.5,0.3]}`. Unknown keys, missing
/// keys and non-integer values are rejected with ValidationError.
BoundedPmf parse_pmf_json(std::string_view text);
BoundedPmf load_pmf_file(const std::filesystem::path& path);
std::string pmf_to_json(const BoundedPmf& pmf);

}  // namespace queuetail
