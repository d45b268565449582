#include "reference.hpp"

#include "gpfsum/error.hpp"

namespace gpfsum::detail {

const nlohmann::ordered_json& reference_values() {
    static const nlohmann::ordered_json values = [] {
        try {
            return nlohmann::ordered_json::parse(reference_json());
        } catch (const nlohmann::json::exception& e) {
            throw ComputationError(std::string("embedded reference data is malformed: ") + e.what());
        }
    }();
    return values;
}

} // namespace gpfsum::detail
