#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace fkr {

constexpr const char* kVersion = "0.1.0";

// Runs one CLI command (heff | tilings | mc | bounds | render | energy) from JSON text and
// writes its files under out_dir. Returns the summary document as JSON text; throws fkr::Error.
std::string run_command(const std::string& command, const std::string& config_json, const std::string& out_dir,
                        std::optional<uint64_t> seed);

// FNV-1a 64 over the canonical (sorted-key, compact) serialisation, as 16 hex digits.
std::string config_hash(const std::string& config_json);

}  // namespace fkr
