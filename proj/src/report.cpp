#include "report.hpp"

#include <cmath>

namespace gpfsum::detail {

std::string decimal(DD v, int digits) {
    if (std::isnan(v.hi)) return "nan";
    if (std::isinf(v.hi)) return v.hi > 0 ? "inf" : "-inf";
    return to_decimal(v, digits);
}

std::string decimal(double v, int digits) { return decimal(DD(v), digits); }

Json dd_json(DD v) {
    Json j;
    j["hi"] = hex_bits(v.hi);
    j["lo"] = hex_bits(v.lo);
    j["decimal"] = decimal(v, 31);
    return j;
}

Json double_json(double v) {
    Json j;
    j["hex"] = hex_bits(v);
    j["decimal"] = decimal(v, 17);
    return j;
}

Json sum_result_json(const SumResult& r) {
    Json j;
    j["series"] = to_string(r.kind);
    j["mode"] = to_string(r.mode);
    j["x"] = r.x;
    j["complete"] = r.complete;
    j["blocks_done"] = r.blocks_done;
    j["blocks_total"] = r.blocks_total;
    j["primes_used"] = r.primes_used;
    j["p_last"] = r.p_last;
    j["partial"] = dd_json(r.partial);
    j["constant"] = dd_json(r.constant);
    j["remainder_lo"] = dd_json(r.remainder_lo);
    j["remainder_hi"] = dd_json(r.remainder_hi);
    j["numerical_slack"] = dd_json(r.numerical_slack);
    j["max_ln_drift"] = double_json(r.max_ln_drift);
    j["center"] = dd_json(r.center());
    if (r.enclosure) {
        Json e;
        e["lo"] = dd_json(r.enclosure->lo);
        e["hi"] = dd_json(r.enclosure->hi);
        e["width"] = dd_json(r.enclosure->width());
        j["enclosure"] = e;
        j["certified_digits"] = certified_digits(*r.enclosure);
    } else {
        j["enclosure"] = nullptr;
        j["certified_digits"] = "";
    }
    return j;
}

namespace {

Json violation_json(const std::optional<BoundsViolation>& v) {
    if (!v) return nullptr;
    Json j;
    j["side"] = v->side;
    j["x"] = v->x;
    j["margin"] = double_json(v->margin);
    return j;
}

} // namespace

Json bounds_report_json(const BoundsReport& r) {
    Json j;
    j["from"] = r.lo;
    j["to"] = r.hi;
    j["primes_checked"] = r.primes_checked;
    j["violations"] = r.violations;
    j["min_upper_margin"] = double_json(r.min_upper_margin);
    j["argmin_upper"] = r.argmin_upper;
    j["min_lower_margin"] = double_json(r.min_lower_margin);
    j["argmin_lower"] = r.argmin_lower;
    j["first_violation"] = violation_json(r.first_violation);
    j["last_violation"] = violation_json(r.last_violation);
    Json samples = Json::array();
    for (const auto& s : r.first_samples) {
        Json e;
        e["p"] = s.p;
        e["successor"] = s.successor;
        e["upper"] = double_json(s.upper);
        e["lower"] = double_json(s.lower);
        samples.push_back(e);
    }
    j["first_samples"] = samples;
    j["product_at_to"] = dd_json(r.product_at_hi);
    return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

} // namespace gpfsum::detail
