#pragma once

#include "gpfsum/bounds.hpp"
#include "gpfsum/dd.hpp"
#include "gpfsum/engine.hpp"

#include <json.hpp>

#include <string>

namespace gpfsum::detail {

using Json = nlohmann::ordered_json;

/// Decimal text that tolerates infinities and NaN.
std::string decimal(DD v, int digits);
std::string decimal(double v, int digits);

/// {"hi": hex, "lo": hex, "decimal": 31 digits}
Json dd_json(DD v);
/// {"hex": hex, "decimal": 17 digits}
Json double_json(double v);

Json sum_result_json(const SumResult& r);
Json bounds_report_json(const BoundsReport& r);

std::string dump(const Json& j);

} // namespace gpfsum::detail
