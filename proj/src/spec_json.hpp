#pragma once

#include "json.hpp"
#include "qkdsim/analysis.hpp"

namespace qkdsim::detail {

// Shared by the config round-trip and the report's config echo (config.cpp).
nlohmann::ordered_json spec_to_json(const RunSpec& spec);

}  // namespace qkdsim::detail
