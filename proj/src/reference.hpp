#pragma once

// Reference values compiled in from data/reference_values.json.

#include <json.hpp>

#include <string_view>

namespace gpfsum::detail {

std::string_view reference_json();

/// Parsed once; throws ComputationError if the embedded text is malformed.
const nlohmann::ordered_json& reference_values();

} // namespace gpfsum::detail
