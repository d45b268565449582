#pragma once

// Resumable snapshot of a streaming run, taken at a block boundary.  Stored
// as JSON with every binary64 value written as its exact 16-digit hex bit
// pattern and an FNV-1a 64 hash over the canonical payload.

#include "gpfsum/engine.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace gpfsum {

struct Checkpoint {
    static constexpr int kVersion = 1;

    int version = kVersion;
    SeriesKind kind = SeriesKind::sb;
    SumMode mode = SumMode::accelerated;
    std::uint64_t x_target = 0;
    unsigned block_bits = kBlockBits;
    StreamTotals totals;
};

std::uint64_t fnv1a64(std::string_view bytes);

std::string encode_checkpoint(const Checkpoint& cp);

/// Throws IoError on malformed text, version mismatch or hash mismatch.
Checkpoint decode_checkpoint(std::string_view text);

/// Writes through a temporary file and renames it into place.
void save_checkpoint(const std::filesystem::path& path, const Checkpoint& cp);
Checkpoint load_checkpoint(const std::filesystem::path& path);

} // namespace gpfsum
