#include "bsr/demand.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "bsr/rng.hpp"

namespace bsr {
namespace demand {

RateTable RateTable::zeros(int stations) {
    RateTable t;
    t.stations = stations;
    t.rate.assign(3, std::vector<std::vector<double>>(stations, std::vector<double>(24, 0.0)));
    t.count.assign(3, std::vector<std::vector<std::int64_t>>(stations,
                                                             std::vector<std::int64_t>(24, 0)));
    return t;
}

DestTable DestTable::uniform(int stations) {
    DestTable t;
    t.stations = stations;
    t.prob.assign(stations, std::vector<std::vector<double>>(
                                24, std::vector<double>(stations, 1.0 / stations)));
    t.observations.assign(stations, std::vector<std::int64_t>(24, 0));
    return t;
}

std::vector<std::int64_t> category_day_counts(std::int64_t first_day, int days) {
    std::vector<std::int64_t> counts(3, 0);
    for (int i = 0; i < days; ++i) {
        int wd = weekday_from_days(first_day + i);
        ++counts[static_cast<int>(day_category_of_weekday(wd))];
    }
    return counts;
}

DemandModel estimate(const std::vector<Trip>& trips, int stations, int utc_offset_min,
                     std::int64_t window_start_day, int window_days) {
    if (stations <= 0) throw std::invalid_argument("estimate: station count must be positive");

    DemandModel model;
    model.utc_offset_min = utc_offset_min;
    model.rates = RateTable::zeros(stations);
    model.dests = DestTable::uniform(stations);

    if (window_days > 0) {
        model.window_start_day = window_start_day;
        model.window_days = window_days;
    } else {
        if (trips.empty()) throw std::invalid_argument("estimate: no trips and no explicit window");
        std::int64_t lo = local_day_index(trips[0].t_start, utc_offset_min);
        std::int64_t hi = lo;
        for (const auto& t : trips) {
            std::int64_t d = local_day_index(t.t_start, utc_offset_min);
            lo = std::min(lo, d);
            hi = std::max(hi, d);
        }
        model.window_start_day = lo;
        model.window_days = static_cast<int>(hi - lo + 1);
    }

    std::vector<std::vector<std::vector<std::int64_t>>> dest_counts(
        stations, std::vector<std::vector<std::int64_t>>(24, std::vector<std::int64_t>(stations, 0)));

    for (const auto& t : trips) {
        if (t.origin_station < 0 || t.dest_station < 0)
            throw std::invalid_argument("estimate: trip without station annotation (bike " +
                                        t.bike_id + ")");
        if (t.origin_station >= stations || t.dest_station >= stations)
            throw std::invalid_argument("estimate: station id out of range");
        std::int64_t day = local_day_index(t.t_start, utc_offset_min);
        if (day < model.window_start_day || day >= model.window_start_day + model.window_days)
            throw std::invalid_argument("estimate: trip outside the observation window");
        int hour = local_hour(t.t_start, utc_offset_min);
        auto cat = static_cast<int>(day_category_of_weekday(weekday_from_days(day)));
        ++model.rates.count[cat][t.origin_station][hour];
        ++dest_counts[t.origin_station][hour][t.dest_station];
    }

    auto day_counts = category_day_counts(model.window_start_day, model.window_days);
    for (int c = 0; c < 3; ++c) {
        if (day_counts[c] == 0) continue;  // category unobserved; rates stay zero
        double intervals = static_cast<double>(day_counts[c]) * kIntervalsPerHour;
        for (int s = 0; s < stations; ++s)
            for (int h = 0; h < 24; ++h)
                model.rates.rate[c][s][h] = model.rates.count[c][s][h] / intervals;
    }

    for (int s = 0; s < stations; ++s) {
        for (int h = 0; h < 24; ++h) {
            std::int64_t total = 0;
            for (int d = 0; d < stations; ++d) total += dest_counts[s][h][d];
            model.dests.observations[s][h] = total;
            if (total == 0) continue;  // keep the uniform fallback
            for (int d = 0; d < stations; ++d)
                model.dests.prob[s][h][d] = static_cast<double>(dest_counts[s][h][d]) / total;
        }
    }
    return model;
}

std::vector<std::vector<std::int64_t>> ScenarioSet::cumulative_net() const {
    std::vector<std::vector<std::int64_t>> net(scenarios, std::vector<std::int64_t>(stations, 0));
    for (int k = 0; k < scenarios; ++k)
        for (int tau = 0; tau < horizon; ++tau)
            for (int s = 0; s < stations; ++s)
                net[k][s] += flow_in[k][tau][s] - flow_out[k][tau][s];
    return net;
}

ScenarioSet sample_scenarios(const DemandModel& model, std::int64_t start_step, int horizon,
                             int scenarios, std::uint64_t seed) {
    if (horizon <= 0 || scenarios <= 0)
        throw std::invalid_argument("sample_scenarios: horizon and scenario count must be positive");
    int S = model.rates.stations;

    ScenarioSet set;
    set.stations = S;
    set.horizon = horizon;
    set.scenarios = scenarios;
    set.flow_out.assign(scenarios, std::vector<std::vector<std::int64_t>>(
                                       horizon, std::vector<std::int64_t>(S, 0)));
    set.flow_in = set.flow_out;
    set.trips.assign(scenarios,
                     std::vector<std::vector<std::pair<std::int32_t, std::int32_t>>>(horizon));

    for (int k = 0; k < scenarios; ++k) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(k)));
        for (int tau = 0; tau < horizon; ++tau) {
            std::int64_t step = start_step + tau;
            auto cat = day_category_of_step(step);
            int hour = hour_of_day(step);
            for (int s = 0; s < S; ++s) {
                double lambda = model.rates.at(s, cat, hour);
                std::int64_t n = 0;
                for (int i = 0; i < kIntervalsPerHour; ++i) n += poisson(rng, lambda);
                if (n == 0) continue;
                set.flow_out[k][tau][s] += n;
                const auto& probs = model.dests.prob[s][hour];
                for (std::int64_t i = 0; i < n; ++i) {
                    auto dest = static_cast<std::int32_t>(categorical(rng, probs));
                    ++set.flow_in[k][tau][dest];
                    set.trips[k][tau].emplace_back(static_cast<std::int32_t>(s), dest);
                }
            }
        }
    }
    return set;
}

namespace {

nlohmann::json rates_to_json(const RateTable& r) {
    nlohmann::json j;
    const char* names[3] = {"MON_THU", "FRI", "SAT_SUN"};
    for (int c = 0; c < 3; ++c) {
        j[names[c]] = r.rate[c];
        j[std::string(names[c]) + "_count"] = r.count[c];
    }
    return j;
}

}  // namespace

std::string model_to_json(const DemandModel& m) {
    nlohmann::json j;
    j["format"] = "bsr-demand-model";
    j["version"] = 1;
    j["stations"] = m.rates.stations;
    j["utc_offset_min"] = m.utc_offset_min;
    j["window"] = {{"start_day", m.window_start_day}, {"days", m.window_days}};
    j["rates"] = rates_to_json(m.rates);
    j["dest"] = m.dests.prob;
    j["dest_observations"] = m.dests.observations;
    return j.dump();
}

DemandModel model_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    if (j.value("format", "") != "bsr-demand-model")
        throw std::runtime_error("demand model JSON: unexpected format tag");
    DemandModel m;
    int S = j.at("stations").get<int>();
    m.utc_offset_min = j.value("utc_offset_min", 0);
    m.window_start_day = j.at("window").at("start_day").get<std::int64_t>();
    m.window_days = j.at("window").at("days").get<int>();
    m.rates = RateTable::zeros(S);
    const char* names[3] = {"MON_THU", "FRI", "SAT_SUN"};
    for (int c = 0; c < 3; ++c) {
        m.rates.rate[c] = j.at("rates").at(names[c])
                              .get<std::vector<std::vector<double>>>();
        m.rates.count[c] = j.at("rates").at(std::string(names[c]) + "_count")
                               .get<std::vector<std::vector<std::int64_t>>>();
    }
    m.dests = DestTable::uniform(S);
    m.dests.prob = j.at("dest").get<std::vector<std::vector<std::vector<double>>>>();
    m.dests.observations = j.at("dest_observations").get<std::vector<std::vector<std::int64_t>>>();

    for (int c = 0; c < 3; ++c) {
        if (m.rates.rate[c].size() != static_cast<std::size_t>(S))
            throw std::runtime_error("demand model JSON: rate table shape mismatch");
        for (const auto& row : m.rates.rate[c]) {
            if (row.size() != 24) throw std::runtime_error("demand model JSON: expected 24 hours");
            for (double v : row)
                if (!(v >= 0.0)) throw std::runtime_error("demand model JSON: negative rate");
        }
    }
    if (m.dests.prob.size() != static_cast<std::size_t>(S))
        throw std::runtime_error("demand model JSON: dest table shape mismatch");
    return m;
}

void write_model_file(const std::string& path, const DemandModel& m) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write demand model file: " + path);
    out << model_to_json(m) << '\n';
}

DemandModel read_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open demand model file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return model_from_json(ss.str());
}

}  // namespace demand
}  // namespace bsr
