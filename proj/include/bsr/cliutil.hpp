#pragma once

// Support code for the command line tool that benefits from unit tests:
// simulation config resolution and run manifests.
//
// Config precedence, highest first: explicit command line flag, config file
// entry, strategy default. The resolver takes flags as an already-extracted
// string map so the precedence rules are testable without a real argv.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bsr/sim.hpp"

namespace bsr {
namespace cli {

struct SimulateConfig {
    std::string strategy = "dynamic";
    int vehicles = 0;
    int period_hours = 0;
    int scenarios = 5;
    std::int64_t capacity = 10;
    std::string alpha = "1";
    std::string beta = "1";
    int iterations = 720;
    std::uint64_t seed = 42;
    double fleet_factor = 1.0;
};

// config_json_text may be empty (no config file). Unknown keys in the file or
// the override map are an error; silent typos in a config are worse than a
// hard stop.
SimulateConfig resolve_simulate_config(const std::string& config_json_text,
                                       const std::map<std::string, std::string>& flag_overrides);

sim::StrategyConfig to_strategy(const SimulateConfig& c);

// FNV-1a, 64-bit.
std::uint64_t fnv1a64(const char* data, std::size_t n);
inline std::uint64_t fnv1a64(const std::string& s) { return fnv1a64(s.data(), s.size()); }

// Write <output_path>.manifest.json recording the command, its inputs and
// parameters, and an FNV-1a digest of the output's bytes. The manifest also
// carries a wall-clock timestamp, so manifests are the one output exempt
// from byte-for-byte reproducibility; everything else must be identical for
// identical inputs and seeds.
void write_manifest(const std::string& output_path, const std::string& command,
                    const std::vector<std::string>& inputs,
                    const std::map<std::string, std::string>& parameters);

}  // namespace cli
}  // namespace bsr
