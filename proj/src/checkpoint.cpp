#include "gpfsum/checkpoint.hpp"

#include "gpfsum/error.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace gpfsum {

using nlohmann::ordered_json;

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

namespace {

ordered_json dd_json(DD v) { return ordered_json::array({hex_bits(v.hi), hex_bits(v.lo)}); }

DD dd_from(const ordered_json& j) {
    if (!j.is_array() || j.size() != 2) throw IoError("checkpoint: double-word value must be a hex pair");
    return DD(from_hex_bits(j[0].get<std::string>()), from_hex_bits(j[1].get<std::string>()));
}

ordered_json payload(const Checkpoint& cp) {
    const StreamTotals& t = cp.totals;
    ordered_json m;
    m["p_last"] = t.mertens.p_last;
    m["product"] = dd_json(t.mertens.product);
    m["ln_p"] = dd_json(t.mertens.ln_p);
    m["ln_anchor_count"] = t.mertens.ln_anchor_count;

    ordered_json sums;
    sums["raw_b"] = dd_json(t.raw_b);
    sums["raw_a"] = dd_json(t.raw_a);
    sums["log_b"] = dd_json(t.log_b);
    sums["log_a"] = dd_json(t.log_a);
    sums["theta"] = dd_json(t.theta);

    ordered_json j;
    j["version"] = cp.version;
    j["kind"] = to_string(cp.kind);
    j["mode"] = to_string(cp.mode);
    j["x_target"] = cp.x_target;
    j["block_bits"] = cp.block_bits;
    j["x_processed"] = t.x_processed;
    j["blocks_done"] = t.blocks_done;
    j["primes"] = t.primes;
    j["mertens"] = m;
    j["sums"] = sums;
    j["max_ln_drift"] = hex_bits(t.max_ln_drift);
    return j;
}

std::string hash_hex(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace

std::string encode_checkpoint(const Checkpoint& cp) {
    ordered_json j = payload(cp);
    j["hash"] = hash_hex(fnv1a64(j.dump()));
    return j.dump(1) + "\n";
}

Checkpoint decode_checkpoint(std::string_view text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const ordered_json::exception& e) {
        throw IoError(std::string("checkpoint is not valid JSON: ") + e.what());
    }
    try {
        if (!j.is_object() || !j.contains("hash")) throw IoError("checkpoint has no integrity hash");
        const std::string stored = j["hash"].get<std::string>();
        j.erase("hash");
        if (stored != hash_hex(fnv1a64(j.dump()))) throw IoError("checkpoint integrity hash mismatch");

        Checkpoint cp;
        cp.version = j.at("version").get<int>();
        if (cp.version != Checkpoint::kVersion) {
            throw IoError("unsupported checkpoint version " + std::to_string(cp.version));
        }
        const auto kind = j.at("kind").get<std::string>();
        const auto mode = j.at("mode").get<std::string>();
        if (kind != "sa" && kind != "sb") throw IoError("checkpoint has unknown kind " + kind);
        if (mode != "raw" && mode != "accel") throw IoError("checkpoint has unknown mode " + mode);
        cp.kind = kind == "sa" ? SeriesKind::sa : SeriesKind::sb;
        cp.mode = mode == "raw" ? SumMode::raw : SumMode::accelerated;
        cp.x_target = j.at("x_target").get<std::uint64_t>();
        cp.block_bits = j.at("block_bits").get<unsigned>();

        StreamTotals& t = cp.totals;
        t.x_processed = j.at("x_processed").get<std::uint64_t>();
        t.blocks_done = j.at("blocks_done").get<std::uint64_t>();
        t.primes = j.at("primes").get<std::uint64_t>();
        const auto& m = j.at("mertens");
        t.mertens.p_last = m.at("p_last").get<std::uint64_t>();
        t.mertens.product = dd_from(m.at("product"));
        t.mertens.ln_p = dd_from(m.at("ln_p"));
        t.mertens.ln_anchor_count = m.at("ln_anchor_count").get<std::uint64_t>();
        const auto& s = j.at("sums");
        t.raw_b = dd_from(s.at("raw_b"));
        t.raw_a = dd_from(s.at("raw_a"));
        t.log_b = dd_from(s.at("log_b"));
        t.log_a = dd_from(s.at("log_a"));
        t.theta = dd_from(s.at("theta"));
        t.max_ln_drift = from_hex_bits(j.at("max_ln_drift").get<std::string>());
        return cp;
    } catch (const ordered_json::exception& e) {
        throw IoError(std::string("malformed checkpoint: ") + e.what());
    } catch (const InvalidArgument& e) {
        throw IoError(std::string("malformed checkpoint: ") + e.what());
    }
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& cp) {
    const std::string text = encode_checkpoint(cp);
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write checkpoint " + tmp.string());
        out << text;
        out.flush();
        if (!out) throw IoError("failed writing checkpoint " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("cannot move checkpoint into place at " + path.string() + ": " + ec.message());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read checkpoint " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return decode_checkpoint(buf.str());
}

} // namespace gpfsum
