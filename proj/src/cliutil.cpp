#include "bsr/cliutil.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "bsr/timeutil.hpp"
#include "json.hpp"

namespace bsr {
namespace cli {

namespace {

using nlohmann::json;

const std::set<std::string> kKeys = {"strategy", "vehicles",   "period_hours", "scenarios",
                                     "capacity", "alpha",      "beta",         "iterations",
                                     "seed",     "fleet_factor"};

// One field's value as a string, respecting flag > file > fallback.
std::string pick(const std::string& key, const std::map<std::string, std::string>& flags,
                 const json& file, const std::string& fallback) {
    auto it = flags.find(key);
    if (it != flags.end()) return it->second;
    if (file.contains(key)) {
        const json& v = file[key];
        if (v.is_string()) return v.get<std::string>();
        if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
        if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
        if (v.is_number_float()) {
            std::ostringstream os;
            os.precision(17);
            os << v.get<double>();
            return os.str();
        }
        throw std::invalid_argument("config key '" + key + "' has an unsupported type");
    }
    return fallback;
}

std::int64_t to_int(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        std::int64_t r = std::stoll(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return r;
    } catch (const std::exception&) {
        throw std::invalid_argument("config key '" + key + "': '" + v + "' is not an integer");
    }
}

std::uint64_t to_uint(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        std::uint64_t r = std::stoull(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return r;
    } catch (const std::exception&) {
        throw std::invalid_argument("config key '" + key + "': '" + v +
                                    "' is not an unsigned integer");
    }
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        double r = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return r;
    } catch (const std::exception&) {
        throw std::invalid_argument("config key '" + key + "': '" + v + "' is not a number");
    }
}

}  // namespace

SimulateConfig resolve_simulate_config(const std::string& config_json_text,
                                       const std::map<std::string, std::string>& flag_overrides) {
    json file = json::object();
    if (!config_json_text.empty()) {
        try {
            file = json::parse(config_json_text);
        } catch (const json::parse_error& e) {
            throw std::invalid_argument(std::string("config file is not valid JSON: ") + e.what());
        }
        if (!file.is_object()) throw std::invalid_argument("config file must hold a JSON object");
        for (const auto& [k, v] : file.items()) {
            (void)v;
            if (!kKeys.count(k)) throw std::invalid_argument("unknown config key '" + k + "'");
        }
    }
    for (const auto& [k, v] : flag_overrides) {
        (void)v;
        if (!kKeys.count(k)) throw std::invalid_argument("unknown override key '" + k + "'");
    }

    SimulateConfig c;
    c.strategy = pick("strategy", flag_overrides, file, "dynamic");
    sim::StrategyConfig defaults;
    if (c.strategy == "static")
        defaults = sim::static_strategy();
    else if (c.strategy == "dynamic")
        defaults = sim::dynamic_strategy();
    else
        throw std::invalid_argument("unknown strategy '" + c.strategy +
                                    "' (expected static or dynamic)");

    c.vehicles = static_cast<int>(
        to_int("vehicles", pick("vehicles", flag_overrides, file, std::to_string(defaults.vehicles))));
    c.period_hours = static_cast<int>(to_int(
        "period_hours",
        pick("period_hours", flag_overrides, file, std::to_string(defaults.period_hours))));
    c.scenarios = static_cast<int>(to_int(
        "scenarios", pick("scenarios", flag_overrides, file, std::to_string(defaults.scenarios))));
    c.capacity = to_int("capacity",
                        pick("capacity", flag_overrides, file, std::to_string(defaults.capacity)));
    c.alpha = pick("alpha", flag_overrides, file, "1");
    c.beta = pick("beta", flag_overrides, file, "1");
    c.iterations = static_cast<int>(to_int(
        "iterations",
        pick("iterations", flag_overrides, file, std::to_string(defaults.iterations))));
    c.seed = to_uint("seed", pick("seed", flag_overrides, file, std::to_string(defaults.seed)));
    c.fleet_factor = to_double("fleet_factor", pick("fleet_factor", flag_overrides, file, "1"));
    return c;
}

sim::StrategyConfig to_strategy(const SimulateConfig& c) {
    sim::StrategyConfig s;
    s.name = c.strategy;
    s.vehicles = c.vehicles;
    s.period_hours = c.period_hours;
    s.scenarios = c.scenarios;
    s.capacity = c.capacity;
    s.alpha = mip::Rational::parse(c.alpha);
    s.beta = mip::Rational::parse(c.beta);
    s.iterations = c.iterations;
    s.seed = c.seed;
    s.validate();
    return s;
}

std::uint64_t fnv1a64(const char* data, std::size_t n) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::size_t i = 0; i < n; ++i) {
        h ^= static_cast<unsigned char>(data[i]);
        h *= 0x100000001b3ULL;
    }
    return h;
}

void write_manifest(const std::string& output_path, const std::string& command,
                    const std::vector<std::string>& inputs,
                    const std::map<std::string, std::string>& parameters) {
    std::ifstream in(output_path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read back " + output_path + " for its manifest");
    std::ostringstream os;
    os << in.rdbuf();
    std::string bytes = os.str();

    char digest[19];
    std::snprintf(digest, sizeof digest, "0x%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes)));

    json j;
    j["format"] = "bsr-manifest";
    j["version"] = 1;
    j["command"] = command;
    j["output"] = output_path;
    j["output_bytes"] = bytes.size();
    j["digest_fnv1a64"] = digest;
    j["inputs"] = inputs;
    j["parameters"] = parameters;
    auto now = std::chrono::system_clock::now();
    j["created_utc"] = format_iso8601_utc(std::chrono::system_clock::to_time_t(now));

    std::ofstream out(output_path + ".manifest.json", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + output_path + ".manifest.json");
    out << j.dump(2) << "\n";
    if (!out) throw std::runtime_error("short write to " + output_path + ".manifest.json");
}

}  // namespace cli
}  // namespace bsr
