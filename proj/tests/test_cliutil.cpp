// Config resolution and manifest tests. Precedence (flag > config file >
// strategy default) is checked one key at a time, and the manifest digest is
// checked against the output's actual bytes.

#include "doctest.h"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "bsr/cliutil.hpp"
#include "bsr/timeutil.hpp"
#include "json.hpp"

using namespace bsr;
using namespace bsr::cli;

TEST_CASE("config precedence is flag over file over default") {
    const std::string file = R"({"vehicles": 7, "alpha": "2/3", "iterations": 100})";

    SUBCASE("defaults only") {
        SimulateConfig c = resolve_simulate_config("", {});
        CHECK(c.strategy == "dynamic");
        CHECK(c.vehicles == 3);
        CHECK(c.period_hours == 1);
        CHECK(c.scenarios == 5);
        CHECK(c.capacity == 10);
        CHECK(c.alpha == "1");
        CHECK(c.beta == "1");
        CHECK(c.iterations == 720);
        CHECK(c.seed == 42);
        CHECK(c.fleet_factor == 1.0);
    }
    SUBCASE("file entries override defaults") {
        SimulateConfig c = resolve_simulate_config(file, {});
        CHECK(c.vehicles == 7);
        CHECK(c.alpha == "2/3");
        CHECK(c.iterations == 100);
        CHECK(c.period_hours == 1);
    }
    SUBCASE("flags override file entries") {
        SimulateConfig c = resolve_simulate_config(file, {{"vehicles", "9"}, {"seed", "5"}});
        CHECK(c.vehicles == 9);
        CHECK(c.seed == 5);
        CHECK(c.alpha == "2/3");
        CHECK(c.iterations == 100);
    }
    SUBCASE("static strategy swaps the fallback tier") {
        SimulateConfig c = resolve_simulate_config(R"({"strategy": "static"})", {});
        CHECK(c.strategy == "static");
        CHECK(c.vehicles == 15);
        CHECK(c.period_hours == 24);

        // An explicit flag still beats the strategy default.
        SimulateConfig d =
            resolve_simulate_config(R"({"strategy": "static"})", {{"vehicles", "4"}});
        CHECK(d.vehicles == 4);
        CHECK(d.period_hours == 24);
    }
    SUBCASE("numeric file values are accepted for string fields") {
        SimulateConfig c = resolve_simulate_config(R"({"alpha": 2, "fleet_factor": 0.5})", {});
        CHECK(c.alpha == "2");
        CHECK(c.fleet_factor == 0.5);
    }
}

TEST_CASE("config rejection paths") {
    CHECK_THROWS_AS(resolve_simulate_config("{nope", {}), std::invalid_argument);
    CHECK_THROWS_AS(resolve_simulate_config("[1,2]", {}), std::invalid_argument);
    CHECK_THROWS_AS(resolve_simulate_config(R"({"vehicels": 3})", {}), std::invalid_argument);
    CHECK_THROWS_AS(resolve_simulate_config("", {{"vehicels", "3"}}), std::invalid_argument);
    CHECK_THROWS_AS(resolve_simulate_config(R"({"strategy": "hybrid"})", {}),
                    std::invalid_argument);
    CHECK_THROWS_AS(resolve_simulate_config("", {{"vehicles", "abc"}}), std::invalid_argument);
    CHECK_THROWS_AS(resolve_simulate_config("", {{"vehicles", "2.5"}}), std::invalid_argument);
    CHECK_THROWS_AS(resolve_simulate_config("", {{"seed", "later"}}), std::invalid_argument);
    CHECK_THROWS_AS(resolve_simulate_config("", {{"fleet_factor", "fast"}}),
                    std::invalid_argument);
}

TEST_CASE("resolved config builds a strategy") {
    SimulateConfig c = resolve_simulate_config(R"({"alpha": "3/4", "vehicles": 2})", {});
    sim::StrategyConfig s = to_strategy(c);
    CHECK(s.name == "dynamic");
    CHECK(s.vehicles == 2);
    CHECK(s.alpha.num == 3);
    CHECK(s.alpha.den == 4);
    CHECK(s.beta.num == 1);
    CHECK(s.seed == 42);

    // to_strategy validates, so nonsense that parses still gets caught.
    SimulateConfig bad = c;
    bad.iterations = 0;
    CHECK_THROWS_AS(to_strategy(bad), std::invalid_argument);
    bad = c;
    bad.alpha = "x";
    CHECK_THROWS_AS(to_strategy(bad), std::invalid_argument);
}

TEST_CASE("fnv1a64 reference vectors") {
    CHECK(fnv1a64(std::string("")) == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64(std::string("a")) == 0xaf63dc4c8601ec8cULL);
    CHECK(fnv1a64(std::string("foobar")) == 0x85944171f73967e8ULL);
    const char nul[] = {'\0'};
    CHECK(fnv1a64(nul, 1) == 0xaf63bd4c8601b7dfULL);
}

TEST_CASE("manifest records the output digest and parameters") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "bsr_manifest_test";
    fs::create_directories(dir);
    fs::path out = dir / "result.csv";

    const std::string payload = "a,b\n1,2\n";
    {
        std::ofstream f(out, std::ios::binary);
        f << payload;
    }
    write_manifest(out.string(), "simulate", {"model.json"},
                   {{"seed", "42"}, {"vehicles", "3"}});

    std::ifstream mf(out.string() + ".manifest.json");
    REQUIRE(mf.good());
    std::ostringstream buf;
    buf << mf.rdbuf();
    nlohmann::json j = nlohmann::json::parse(buf.str());

    CHECK(j.at("format") == "bsr-manifest");
    CHECK(j.at("version") == 1);
    CHECK(j.at("command") == "simulate");
    CHECK(j.at("output") == out.string());
    CHECK(j.at("output_bytes") == payload.size());
    CHECK(j.at("inputs") == nlohmann::json::array({"model.json"}));
    CHECK(j.at("parameters").at("seed") == "42");
    CHECK(j.at("parameters").at("vehicles") == "3");

    char expect[19];
    std::snprintf(expect, sizeof expect, "0x%016llx",
                  static_cast<unsigned long long>(fnv1a64(payload)));
    CHECK(j.at("digest_fnv1a64") == std::string(expect));

    // The timestamp must parse back as ISO-8601 UTC.
    std::int64_t t = parse_iso8601(j.at("created_utc").get<std::string>());
    CHECK(t > 0);

    CHECK_THROWS_AS(write_manifest((dir / "missing.csv").string(), "x", {}, {}),
                    std::runtime_error);
    fs::remove_all(dir);
}
