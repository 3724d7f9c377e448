#include "bsr/sim.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "bsr/ingest.hpp"  // format_double
#include "bsr/rng.hpp"

namespace bsr {
namespace sim {

namespace {

// Tags for deriving independent stream seeds per step.
constexpr std::uint64_t kPlanTag = 0x504c414eULL;
constexpr std::uint64_t kRealTag = 0x5245414cULL;

}  // namespace

void StrategyConfig::validate() const {
    if (vehicles < 0 || vehicles > 10000) throw std::invalid_argument("vehicle count out of range");
    if (period_hours < 1 || period_hours > 168)
        throw std::invalid_argument("reposition period must be in [1, 168] hours");
    if (scenarios < 1 || scenarios > 1000) throw std::invalid_argument("scenario count out of range");
    if (capacity < 0 || capacity > 100000) throw std::invalid_argument("vehicle capacity out of range");
    if (iterations < 1 || iterations > 1000000)
        throw std::invalid_argument("iteration count out of range");
}

StrategyConfig static_strategy() {
    StrategyConfig c;
    c.name = "static";
    c.vehicles = 15;
    c.period_hours = 24;
    return c;
}

StrategyConfig dynamic_strategy() {
    StrategyConfig c;
    c.name = "dynamic";
    c.vehicles = 3;
    c.period_hours = 1;
    return c;
}

mip::ProblemInstance make_instance(const std::vector<std::int64_t>& inventory,
                                   const demand::ScenarioSet& scenarios,
                                   const StrategyConfig& cfg) {
    if (scenarios.stations != static_cast<int>(inventory.size()))
        throw std::invalid_argument("scenario station count does not match the inventory");
    mip::ProblemInstance inst;
    inst.stations = static_cast<int>(inventory.size());
    inst.vehicles = cfg.vehicles;
    inst.capacity.assign(cfg.vehicles, cfg.capacity);
    inst.bikes = inventory;
    inst.net_flow = scenarios.cumulative_net();
    inst.alpha = cfg.alpha;
    inst.beta = cfg.beta;
    inst.validate();
    return inst;
}

SimResult run_with_sources(const std::vector<std::int64_t>& inventory, const StrategyConfig& cfg,
                           const PlanningSampler& planning, const RealizedSampler& realized) {
    cfg.validate();
    int S = static_cast<int>(inventory.size());
    if (S < 1) throw std::invalid_argument("simulation needs at least one station");
    for (std::int64_t d : inventory)
        if (d < 0) throw std::invalid_argument("inventory must be non-negative");

    SimResult out;
    std::vector<std::int64_t> d = inventory;
    std::int64_t prev_total = 0;
    for (std::int64_t v : d) prev_total += v;

    for (std::int64_t step = 0; step < cfg.iterations; ++step) {
        std::vector<std::int64_t> repo(S, 0);
        std::int64_t trips = 0;
        if (cfg.vehicles > 0 && step % cfg.period_hours == 0) {
            demand::ScenarioSet scen = planning(step, cfg.period_hours, cfg.scenarios,
                                                derive_seed(cfg.seed, kPlanTag, step));
            mip::RepositionPlan plan = mip::solve(make_instance(d, scen, cfg));
            repo = plan.net_transfer();
            trips = plan.trips();
        }

        StepFlows fl = realized(step, derive_seed(cfg.seed, kRealTag, step));
        if (static_cast<int>(fl.in.size()) != S || static_cast<int>(fl.out.size()) != S)
            throw std::invalid_argument("realized flows have the wrong station count");

        std::int64_t lost = 0;
        std::int64_t total = 0;
        for (int s = 0; s < S; ++s) {
            std::int64_t next = d[s] + fl.in[s] - fl.out[s] + repo[s];
            if (next < 0) {
                lost += -next;
                next = 0;
            }
            d[s] = next;
            total += next;
        }
        if (total < prev_total)
            throw std::logic_error("fleet total shrank; realized flows were not conservative");
        prev_total = total;

        StepRow row;
        row.step = step;
        row.hour = hour_of_day(step);
        row.category = day_category_of_step(step);
        row.lost_demand = lost;
        row.reposition_trips = trips;
        row.total_bikes = total;
        out.rows.push_back(row);
        out.cumulative_lost += lost;
        out.cumulative_trips += trips;
    }
    out.final_inventory = std::move(d);
    return out;
}

SimResult run(const std::vector<std::int64_t>& inventory, const demand::DemandModel& model,
              const StrategyConfig& cfg) {
    if (model.rates.stations != static_cast<int>(inventory.size()))
        throw std::invalid_argument("model station count does not match the inventory");
    PlanningSampler planning = [&model](std::int64_t step, int horizon, int k,
                                        std::uint64_t seed) {
        return demand::sample_scenarios(model, step, horizon, k, seed);
    };
    RealizedSampler realized = [&model](std::int64_t step, std::uint64_t seed) {
        demand::ScenarioSet one = demand::sample_scenarios(model, step, 1, 1, seed);
        StepFlows fl;
        fl.in = one.flow_in[0][0];
        fl.out = one.flow_out[0][0];
        return fl;
    };
    return run_with_sources(inventory, cfg, planning, realized);
}

std::vector<std::int64_t> scale_fleet(const std::vector<std::int64_t>& inventory, double factor) {
    if (!(factor > 0.0) || factor > 1.0)
        throw std::invalid_argument("fleet factor must be in (0, 1]");
    std::vector<std::int64_t> out(inventory.size());
    for (std::size_t i = 0; i < inventory.size(); ++i)
        out[i] = static_cast<std::int64_t>(std::floor(static_cast<double>(inventory[i]) * factor));
    return out;
}

std::string result_to_csv(const SimResult& result) {
    std::string s = "step,hour_of_day,day_category,lost_demand,reposition_trips,total_bikes\n";
    for (const StepRow& r : result.rows) {
        s += std::to_string(r.step);
        s += ',';
        s += std::to_string(r.hour);
        s += ',';
        s += to_string(r.category);
        s += ',';
        s += std::to_string(r.lost_demand);
        s += ',';
        s += std::to_string(r.reposition_trips);
        s += ',';
        s += std::to_string(r.total_bikes);
        s += '\n';
    }
    return s;
}

SweepResult sweep(const std::vector<std::int64_t>& inventory, const demand::DemandModel& model,
                  const StrategyConfig& base, const std::vector<double>& fleet_factors,
                  const std::vector<int>& vehicle_counts, int seeds, int threads) {
    base.validate();
    if (fleet_factors.empty() || vehicle_counts.empty() || seeds < 1)
        throw std::invalid_argument("sweep needs at least one factor, vehicle count, and seed");

    struct Job {
        std::size_t index;
        double factor;
        int vehicles;
        std::uint64_t seed;
    };
    std::vector<Job> jobs;
    for (std::size_t fi = 0; fi < fleet_factors.size(); ++fi)
        for (std::size_t vi = 0; vi < vehicle_counts.size(); ++vi)
            for (int si = 0; si < seeds; ++si)
                jobs.push_back(Job{jobs.size(), fleet_factors[fi], vehicle_counts[vi],
                                   derive_seed(derive_seed(base.seed, fi, vi),
                                               static_cast<std::uint64_t>(si))});

    SweepResult out;
    out.cells.resize(jobs.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mu;

    auto worker = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= jobs.size()) return;
            try {
                const Job& j = jobs[i];
                StrategyConfig cfg = base;
                cfg.vehicles = j.vehicles;
                cfg.seed = j.seed;
                SimResult r = run(scale_fleet(inventory, j.factor), model, cfg);
                out.cells[j.index] = SweepCell{j.factor, j.vehicles, j.seed, r.cumulative_lost,
                                               r.cumulative_trips};
            } catch (...) {
                std::lock_guard<std::mutex> lk(error_mu);
                if (!first_error) first_error = std::current_exception();
                next.store(jobs.size());
                return;
            }
        }
    };

    int n = std::max(1, std::min<int>(threads, static_cast<int>(jobs.size())));
    if (n == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < n; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (first_error) std::rethrow_exception(first_error);
    return out;
}

std::string sweep_to_csv(const SweepResult& result) {
    std::string s = "fleet_factor,vehicles,cumulative_lost_demand,cumulative_reposition_trips,seed\n";
    for (const SweepCell& c : result.cells) {
        s += ingest::format_double(c.fleet_factor);
        s += ',';
        s += std::to_string(c.vehicles);
        s += ',';
        s += std::to_string(c.cumulative_lost);
        s += ',';
        s += std::to_string(c.cumulative_trips);
        s += ',';
        s += std::to_string(c.seed);
        s += '\n';
    }
    return s;
}

SweepResult sweep_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line))
        throw std::invalid_argument("sweep csv is empty");
    SweepResult out;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::vector<std::string> cells;
        std::size_t pos = 0;
        while (true) {
            std::size_t c = line.find(',', pos);
            if (c == std::string::npos) {
                cells.push_back(line.substr(pos));
                break;
            }
            cells.push_back(line.substr(pos, c - pos));
            pos = c + 1;
        }
        if (cells.size() != 5)
            throw std::invalid_argument("sweep csv line " + std::to_string(lineno) +
                                        ": expected 5 fields");
        SweepCell cell;
        auto bad = [&](const char* what) {
            return std::invalid_argument("sweep csv line " + std::to_string(lineno) + ": bad " +
                                         what);
        };
        {
            const std::string& w = cells[0];
            auto r = std::from_chars(w.data(), w.data() + w.size(), cell.fleet_factor);
            if (r.ec != std::errc() || r.ptr != w.data() + w.size()) throw bad("fleet_factor");
        }
        try {
            cell.vehicles = std::stoi(cells[1]);
            cell.cumulative_lost = std::stoll(cells[2]);
            cell.cumulative_trips = std::stoll(cells[3]);
            cell.seed = std::stoull(cells[4]);
        } catch (const std::exception&) {
            throw bad("numeric field");
        }
        out.cells.push_back(cell);
    }
    return out;
}

}  // namespace sim
}  // namespace bsr
