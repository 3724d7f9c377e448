// bsr: command line front end for the rebalancing toolkit.
//
// Subcommands cover the full pipeline: synth (generate a GPS feed with known
// ground truth), extract-trips, cluster, build-demand, solve (one
// repositioning instance), simulate, sweep (fleet-size grid), and report
// (regression/correlation summary of a sweep). Every written file gets a
// sidecar <file>.manifest.json recording the command, inputs, parameters,
// and a digest of the bytes written.
//
// Exit codes: 0 success, 1 runtime failure (bad input data, I/O), 2 usage
// errors (unknown flags, missing required options).

#include <algorithm>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bsr/cliutil.hpp"
#include "bsr/cluster.hpp"
#include "bsr/demand.hpp"
#include "bsr/ingest.hpp"
#include "bsr/mip.hpp"
#include "bsr/sim.hpp"
#include "bsr/stats.hpp"
#include "bsr/synth.hpp"
#include "bsr/timeutil.hpp"

namespace {

using namespace bsr;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
    if (!out) throw std::runtime_error("short write to " + path);
}

std::vector<double> parse_double_list(const std::string& s, const char* what) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw std::runtime_error(std::string(what) + ": '" + item + "' is not a number");
        }
    }
    if (out.empty()) throw std::runtime_error(std::string(what) + " must not be empty");
    return out;
}

std::vector<int> parse_int_list(const std::string& s, const char* what) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stoi(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw std::runtime_error(std::string(what) + ": '" + item + "' is not an integer");
        }
    }
    if (out.empty()) throw std::runtime_error(std::string(what) + " must not be empty");
    return out;
}

// Local calendar date -> local day index.
std::int64_t parse_local_date(const std::string& s) {
    int y = 0, m = 0, d = 0;
    char dash1 = 0, dash2 = 0;
    std::istringstream is(s);
    is >> y >> dash1 >> m >> dash2 >> d;
    if (!is || dash1 != '-' || dash2 != '-' || m < 1 || m > 12 || d < 1 || d > 31)
        throw std::runtime_error("'" + s + "' is not a YYYY-MM-DD date");
    return days_from_civil(y, static_cast<unsigned>(m), static_cast<unsigned>(d));
}

// --- synth ---

struct SynthArgs {
    std::string preset = "uniform";
    int stations = 20;
    std::int64_t fleet = 20;
    double rate = 0.2;
    int days = 7;
    std::uint64_t seed = 1;
    double noise_fraction = 0.0;
    double relocation_fraction = 0.0;
    std::string truth_in;
    std::string out;
    std::string truth_out;
    std::string stations_out;
    std::string model_out;
    std::string trips_out;
};

void run_synth(const SynthArgs& a) {
    synth::GroundTruth truth = a.truth_in.empty()
                                   ? synth::truth_by_name(a.preset, a.stations, a.fleet, a.rate)
                                   : synth::read_truth_file(a.truth_in);
    synth::SynthOptions opt;
    opt.days = a.days;
    opt.seed = a.seed;
    opt.noise_fraction = a.noise_fraction;
    opt.relocation_fraction = a.relocation_fraction;
    synth::SynthResult res = synth::generate(truth, opt);

    std::map<std::string, std::string> params = {
        {"preset", a.truth_in.empty() ? a.preset : "(file)"},
        {"days", std::to_string(a.days)},
        {"seed", std::to_string(a.seed)},
        {"noise_fraction", ingest::format_double(a.noise_fraction)},
        {"relocation_fraction", ingest::format_double(a.relocation_fraction)},
    };
    std::vector<std::string> inputs;
    if (!a.truth_in.empty()) inputs.push_back(a.truth_in);

    {
        std::ofstream out(a.out, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + a.out);
        ingest::write_pings_csv(out, res.pings);
    }
    cli::write_manifest(a.out, "synth", inputs, params);
    if (!a.truth_out.empty()) {
        synth::write_truth_file(a.truth_out, truth);
        cli::write_manifest(a.truth_out, "synth", inputs, params);
    }
    if (!a.stations_out.empty()) {
        cluster::write_stations_file(a.stations_out, truth.as_station_set());
        cli::write_manifest(a.stations_out, "synth", inputs, params);
    }
    if (!a.model_out.empty()) {
        demand::write_model_file(a.model_out, truth.as_demand_model());
        cli::write_manifest(a.model_out, "synth", inputs, params);
    }
    if (!a.trips_out.empty()) {
        std::ofstream out(a.trips_out, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + a.trips_out);
        ingest::write_trips_csv(out, res.trips, true);
        cli::write_manifest(a.trips_out, "synth", inputs, params);
    }
    std::cout << "synth: " << res.pings.size() << " pings, " << res.trips.size() << " trips ("
              << res.unserved << " unserved) over " << a.days << " days\n";
}

// --- extract-trips ---

struct ExtractArgs {
    std::string pings;
    std::string trips_out;
    std::string errors_out;
    std::string usage_out;
    bool strict = false;
    std::string window_start;
    std::string window_end;
};

void run_extract(const ExtractArgs& a) {
    ingest::ParseOptions opts;
    opts.strict = a.strict;
    ingest::ErrorReport report;
    std::vector<ingest::ParsedPing> rows = ingest::parse_pings_file(a.pings, opts, report);
    std::vector<ingest::BikeHistory> histories = ingest::group_histories(std::move(rows), report);
    std::vector<Trip> trips = ingest::extract_trips(histories);

    std::map<std::string, std::string> params = {{"strict", a.strict ? "true" : "false"}};
    {
        std::ofstream out(a.trips_out, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + a.trips_out);
        ingest::write_trips_csv(out, trips, false);
    }
    cli::write_manifest(a.trips_out, "extract-trips", {a.pings}, params);

    if (!a.errors_out.empty()) {
        std::ofstream out(a.errors_out, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + a.errors_out);
        ingest::write_error_report(out, report);
        cli::write_manifest(a.errors_out, "extract-trips", {a.pings}, params);
    }

    if (!a.usage_out.empty()) {
        std::int64_t w0, w1;
        if (!a.window_start.empty() && !a.window_end.empty()) {
            w0 = parse_iso8601(a.window_start);
            w1 = parse_iso8601(a.window_end);
        } else {
            if (histories.empty()) throw std::runtime_error("no pings; cannot infer a usage window");
            w0 = std::numeric_limits<std::int64_t>::max();
            w1 = std::numeric_limits<std::int64_t>::min();
            for (const auto& h : histories) {
                w0 = std::min(w0, h.pings.front().t);
                w1 = std::max(w1, h.pings.back().t);
            }
            w1 += 1;  // half-open window that still contains the last event
        }
        ingest::UsageStats usage = ingest::usage_stats(histories, w0, w1);
        std::map<std::string, std::int64_t> idle_count, idle_seconds;
        for (const auto& iv : usage.idle_intervals) {
            idle_count[iv.bike_id] += 1;
            idle_seconds[iv.bike_id] += iv.end - iv.start;
        }
        std::string csv = "bike_id,trips,idle_intervals,idle_seconds\n";
        for (std::size_t i = 0; i < usage.bike_ids.size(); ++i) {
            const std::string& id = usage.bike_ids[i];
            csv += id;
            csv += ',';
            csv += std::to_string(usage.trips_per_bike[i]);
            csv += ',';
            csv += std::to_string(idle_count.count(id) ? idle_count[id] : 0);
            csv += ',';
            csv += std::to_string(idle_seconds.count(id) ? idle_seconds[id] : 0);
            csv += '\n';
        }
        write_text(a.usage_out, csv);
        cli::write_manifest(a.usage_out, "extract-trips", {a.pings}, params);
    }

    std::cout << "extract-trips: kept " << report.rows_kept << "/" << report.rows_total
              << " rows (" << report.errors.size() << " problems, " << report.duplicates
              << " duplicates), " << trips.size() << " trips\n";
}

// --- cluster ---

struct ClusterArgs {
    std::string trips;
    std::string pings;
    int regions = 8;
    int stations = 120;
    int region = -1;
    std::uint64_t seed = 7;
    bool include_idle = false;
    std::string stations_out;
    std::string trips_out;
};

void run_cluster(const ClusterArgs& a) {
    std::vector<Trip> trips;
    {
        std::ifstream in(a.trips, std::ios::binary);
        if (!in) throw std::runtime_error("cannot open " + a.trips);
        trips = ingest::read_trips_csv(in);
    }
    if (trips.empty()) throw std::runtime_error("no trips in " + a.trips);

    cluster::RegionSegmentation seg = cluster::segment_regions(trips, a.regions, a.seed);
    std::int32_t region = a.region >= 0 ? a.region : cluster::largest_region(seg, a.regions);
    if (region >= a.regions) throw std::runtime_error("region index out of range");
    std::vector<Trip> local = cluster::filter_to_region(trips, seg, region);
    if (local.empty()) throw std::runtime_error("region " + std::to_string(region) + " has no trips");

    cluster::StationSet stations =
        cluster::build_stations(local, seg.projection, a.stations, a.seed);

    std::int64_t placed = 0;
    if (!a.pings.empty()) {
        ingest::ParseOptions popt;
        ingest::ErrorReport rep;
        std::vector<ingest::ParsedPing> rows = ingest::parse_pings_file(a.pings, popt, rep);
        std::vector<Ping> pings;
        pings.reserve(rows.size());
        for (const auto& r : rows) pings.push_back(r.ping);
        auto first = cluster::first_ping_per_bike(local, pings, a.include_idle);
        for (std::int64_t c : cluster::assign_initial_inventory(stations, first)) placed += c;
    }

    std::map<std::string, std::string> params = {
        {"regions", std::to_string(a.regions)},   {"stations", std::to_string(a.stations)},
        {"region", std::to_string(region)},       {"seed", std::to_string(a.seed)},
        {"include_idle", a.include_idle ? "true" : "false"},
    };
    std::vector<std::string> inputs = {a.trips};
    if (!a.pings.empty()) inputs.push_back(a.pings);

    cluster::write_stations_file(a.stations_out, stations);
    cli::write_manifest(a.stations_out, "cluster", inputs, params);
    if (!a.trips_out.empty()) {
        std::ofstream out(a.trips_out, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + a.trips_out);
        ingest::write_trips_csv(out, local, true);
        cli::write_manifest(a.trips_out, "cluster", inputs, params);
    }

    std::cout << "cluster: region " << region << " keeps " << local.size() << "/" << trips.size()
              << " trips; " << stations.stations.size() << " stations; " << placed
              << " bikes placed\n";
}

// --- build-demand ---

struct BuildDemandArgs {
    std::string trips;
    std::string stations;
    std::string out;
    int utc_offset_min = 480;
    std::string window_start;
    int window_days = 0;
};

void run_build_demand(const BuildDemandArgs& a) {
    std::vector<Trip> trips;
    {
        std::ifstream in(a.trips, std::ios::binary);
        if (!in) throw std::runtime_error("cannot open " + a.trips);
        trips = ingest::read_trips_csv(in);
    }
    cluster::StationSet stations = cluster::read_stations_file(a.stations);

    std::int64_t start_day = -1;
    if (!a.window_start.empty()) start_day = parse_local_date(a.window_start);
    demand::DemandModel model = demand::estimate(
        trips, static_cast<int>(stations.stations.size()), a.utc_offset_min, start_day,
        a.window_days);

    demand::write_model_file(a.out, model);
    cli::write_manifest(a.out, "build-demand", {a.trips, a.stations},
                        {{"utc_offset_min", std::to_string(a.utc_offset_min)},
                         {"window_start_day", std::to_string(model.window_start_day)},
                         {"window_days", std::to_string(model.window_days)}});

    std::int64_t cells = 0;
    for (const auto& cat : model.rates.count)
        for (const auto& st : cat)
            for (std::int64_t c : st)
                if (c > 0) ++cells;
    std::cout << "build-demand: " << trips.size() << " trips over " << model.window_days
              << " local days; " << cells << " active rate cells\n";
}

// --- solve ---

struct SolveArgs {
    std::string instance;
    std::string out;
    bool exhaustive = false;
    std::string alpha, beta;
};

void run_solve(const SolveArgs& a) {
    mip::ProblemInstance inst = mip::read_instance_file(a.instance);
    if (!a.alpha.empty()) inst.alpha = mip::Rational::parse(a.alpha);
    if (!a.beta.empty()) inst.beta = mip::Rational::parse(a.beta);
    mip::RepositionPlan plan = a.exhaustive ? mip::solve_exhaustive(inst) : mip::solve(inst);
    mip::write_plan_file(a.out, plan);
    cli::write_manifest(a.out, "solve", {a.instance},
                        {{"exhaustive", a.exhaustive ? "true" : "false"},
                         {"alpha", inst.alpha.str()},
                         {"beta", inst.beta.str()}});
    std::cout << "solve: objective " << plan.objective_num << "/" << plan.objective_den << " with "
              << plan.trips() << " vehicle trips\n";
}

// --- simulate / sweep ---

struct SimulateArgs {
    std::string stations;
    std::string model;
    std::string config;
    std::string out;
    // raw override strings; presence tracked by the option objects
    std::string strategy, alpha, beta;
    int vehicles = 0, period_hours = 0, scenarios = 0, iterations = 0;
    std::int64_t capacity = 0;
    std::uint64_t seed = 0;
    double fleet_factor = 0.0;
    // sweep extras
    std::string fleet_factors = "0.4,0.6,0.8,1.0";
    std::string vehicle_counts;
    int seeds = 5;
    int threads = 1;
};

std::vector<std::int64_t> load_inventory(const std::string& stations_path, int* stations_out) {
    cluster::StationSet set = cluster::read_stations_file(stations_path);
    std::vector<std::int64_t> inv;
    for (const auto& st : set.stations) inv.push_back(st.initial_bikes);
    *stations_out = static_cast<int>(set.stations.size());
    return inv;
}

cli::SimulateConfig resolve_from_args(const SimulateArgs& a, CLI::App* sub) {
    std::map<std::string, std::string> overrides;
    if (sub->count("--strategy")) overrides["strategy"] = a.strategy;
    if (sub->count("--vehicles")) overrides["vehicles"] = std::to_string(a.vehicles);
    if (sub->count("--period-hours")) overrides["period_hours"] = std::to_string(a.period_hours);
    if (sub->count("--scenarios")) overrides["scenarios"] = std::to_string(a.scenarios);
    if (sub->count("--capacity")) overrides["capacity"] = std::to_string(a.capacity);
    if (sub->count("--alpha")) overrides["alpha"] = a.alpha;
    if (sub->count("--beta")) overrides["beta"] = a.beta;
    if (sub->count("--iterations")) overrides["iterations"] = std::to_string(a.iterations);
    if (sub->count("--seed")) overrides["seed"] = std::to_string(a.seed);
    if (sub->count("--fleet-factor"))
        overrides["fleet_factor"] = ingest::format_double(a.fleet_factor);
    std::string cfg_text = a.config.empty() ? "" : slurp(a.config);
    return cli::resolve_simulate_config(cfg_text, overrides);
}

void run_simulate(const SimulateArgs& a, CLI::App* sub) {
    cli::SimulateConfig rc = resolve_from_args(a, sub);
    sim::StrategyConfig cfg = cli::to_strategy(rc);
    int stations = 0;
    std::vector<std::int64_t> inv = load_inventory(a.stations, &stations);
    demand::DemandModel model = demand::read_model_file(a.model);
    if (model.rates.stations != stations)
        throw std::runtime_error("model and station set disagree on the station count");

    sim::SimResult res = sim::run(sim::scale_fleet(inv, rc.fleet_factor), model, cfg);
    write_text(a.out, sim::result_to_csv(res));

    std::vector<std::string> inputs = {a.stations, a.model};
    if (!a.config.empty()) inputs.push_back(a.config);
    cli::write_manifest(a.out, "simulate", inputs,
                        {{"strategy", cfg.name},
                         {"vehicles", std::to_string(cfg.vehicles)},
                         {"period_hours", std::to_string(cfg.period_hours)},
                         {"scenarios", std::to_string(cfg.scenarios)},
                         {"capacity", std::to_string(cfg.capacity)},
                         {"alpha", cfg.alpha.str()},
                         {"beta", cfg.beta.str()},
                         {"iterations", std::to_string(cfg.iterations)},
                         {"seed", std::to_string(cfg.seed)},
                         {"fleet_factor", ingest::format_double(rc.fleet_factor)}});

    std::cout << "simulate: " << cfg.name << " strategy, " << cfg.iterations << " hours, lost "
              << res.cumulative_lost << ", reposition trips " << res.cumulative_trips << "\n";
}

void run_sweep(const SimulateArgs& a, CLI::App* sub) {
    cli::SimulateConfig rc = resolve_from_args(a, sub);
    sim::StrategyConfig base = cli::to_strategy(rc);
    int stations = 0;
    std::vector<std::int64_t> inv = load_inventory(a.stations, &stations);
    demand::DemandModel model = demand::read_model_file(a.model);
    if (model.rates.stations != stations)
        throw std::runtime_error("model and station set disagree on the station count");

    std::vector<double> factors = parse_double_list(a.fleet_factors, "--fleet-factors");
    std::vector<int> vehicles = a.vehicle_counts.empty()
                                    ? std::vector<int>{base.vehicles}
                                    : parse_int_list(a.vehicle_counts, "--vehicle-counts");

    sim::SweepResult res = sim::sweep(inv, model, base, factors, vehicles, a.seeds, a.threads);
    write_text(a.out, sim::sweep_to_csv(res));

    std::vector<std::string> inputs = {a.stations, a.model};
    if (!a.config.empty()) inputs.push_back(a.config);
    cli::write_manifest(a.out, "sweep", inputs,
                        {{"strategy", base.name},
                         {"fleet_factors", a.fleet_factors},
                         {"vehicle_counts", a.vehicle_counts.empty() ? std::to_string(base.vehicles)
                                                                     : a.vehicle_counts},
                         {"seeds", std::to_string(a.seeds)},
                         {"iterations", std::to_string(base.iterations)},
                         {"seed", std::to_string(base.seed)}});

    std::cout << "sweep: " << res.cells.size() << " cells ("
              << factors.size() << " factors x " << vehicles.size() << " vehicle counts x "
              << a.seeds << " seeds)\n";
}

// --- report ---

struct ReportArgs {
    std::string sweep;
    std::string out;
};

void run_report(const ReportArgs& a) {
    sim::SweepResult sw = sim::sweep_from_csv(slurp(a.sweep));
    if (sw.cells.empty()) throw std::runtime_error("sweep has no rows");

    // group rows by vehicle count
    std::map<int, std::vector<const sim::SweepCell*>> groups;
    for (const auto& c : sw.cells) groups[c.vehicles].push_back(&c);

    std::ostringstream os;
    os << "sweep report: " << a.sweep << "\n";
    for (const auto& [veh, cells] : groups) {
        std::vector<double> x, lost, trips;
        for (const auto* c : cells) {
            x.push_back(c->fleet_factor);
            lost.push_back(static_cast<double>(c->cumulative_lost));
            trips.push_back(static_cast<double>(c->cumulative_trips));
        }
        os << "vehicles=" << veh << " (" << cells.size() << " runs)\n";
        OlsFit fl = ols_fit(x, lost);
        os << "  lost demand vs fleet factor: slope " << ingest::format_double(fl.slope)
           << ", intercept " << ingest::format_double(fl.intercept) << ", r2 "
           << ingest::format_double(fl.r2) << "\n";
        SpearmanResult sl = spearman(x, lost);
        os << "  spearman(lost, factor): rho " << ingest::format_double(sl.rho) << ", p "
           << ingest::format_double(sl.p_two_sided) << "\n";
        OlsFit ft = ols_fit(x, trips);
        os << "  reposition trips vs fleet factor: slope " << ingest::format_double(ft.slope)
           << ", r2 " << ingest::format_double(ft.r2) << "\n";
        SpearmanResult st = spearman(x, trips);
        os << "  spearman(trips, factor): rho " << ingest::format_double(st.rho) << ", p "
           << ingest::format_double(st.p_two_sided) << "\n";
    }

    if (a.out.empty()) {
        std::cout << os.str();
    } else {
        write_text(a.out, os.str());
        cli::write_manifest(a.out, "report", {a.sweep}, {});
        std::cout << "report: written to " << a.out << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dockless bike share rebalancing toolkit"};
    app.require_subcommand(1);

    SynthArgs sy;
    CLI::App* synth_cmd = app.add_subcommand("synth", "generate a synthetic GPS feed");
    synth_cmd->add_option("--preset", sy.preset, "uniform, commuter, or calibration");
    synth_cmd->add_option("--stations", sy.stations, "station count")->check(CLI::Range(2, 2000));
    synth_cmd->add_option("--fleet", sy.fleet, "bikes per station");
    synth_cmd->add_option("--rate", sy.rate, "demand rate per 2-minute interval");
    synth_cmd->add_option("--days", sy.days, "days to simulate");
    synth_cmd->add_option("--seed", sy.seed, "random seed");
    synth_cmd->add_option("--noise-fraction", sy.noise_fraction, "stray ping probability");
    synth_cmd->add_option("--relocation-fraction", sy.relocation_fraction,
                          "fast out-and-back hop probability");
    synth_cmd->add_option("--truth", sy.truth_in, "ground truth JSON (overrides the preset)");
    synth_cmd->add_option("--output", sy.out, "ping CSV output")->required();
    synth_cmd->add_option("--truth-out", sy.truth_out, "write the ground truth JSON");
    synth_cmd->add_option("--stations-out", sy.stations_out, "write the truth as a station set");
    synth_cmd->add_option("--model-out", sy.model_out, "write the truth as a demand model");
    synth_cmd->add_option("--trips-out", sy.trips_out, "write the generated trips CSV");
    synth_cmd->callback([&]() { run_synth(sy); });

    ExtractArgs ex;
    CLI::App* extract_cmd = app.add_subcommand("extract-trips", "turn a ping CSV into trips");
    extract_cmd->add_option("--input", ex.pings, "ping CSV input")->required();
    extract_cmd->add_option("--output", ex.trips_out, "trip CSV output")->required();
    extract_cmd->add_option("--errors-out", ex.errors_out, "write skipped-row report");
    extract_cmd->add_option("--usage-out", ex.usage_out, "write per-bike usage CSV");
    extract_cmd->add_flag("--strict", ex.strict, "fail on the first invalid row");
    extract_cmd->add_option("--window-start", ex.window_start, "usage window start (ISO 8601)");
    extract_cmd->add_option("--window-end", ex.window_end, "usage window end (ISO 8601)");
    extract_cmd->callback([&]() { run_extract(ex); });

    ClusterArgs cl;
    CLI::App* cluster_cmd = app.add_subcommand("cluster", "build abstract stations from trips");
    cluster_cmd->add_option("--input", cl.trips, "trip CSV input")->required();
    cluster_cmd->add_option("--pings", cl.pings, "ping CSV for initial inventory");
    cluster_cmd->add_option("--regions", cl.regions, "first-stage cluster count")
        ->check(CLI::Range(1, 64));
    cluster_cmd->add_option("--stations", cl.stations, "second-stage station count")
        ->check(CLI::Range(1, 4096));
    cluster_cmd->add_option("--region", cl.region, "region to keep (default: largest)");
    cluster_cmd->add_option("--seed", cl.seed, "clustering seed");
    cluster_cmd->add_flag("--include-idle-bikes", cl.include_idle,
                          "count bikes with no trips toward initial inventory");
    cluster_cmd->add_option("--output", cl.stations_out, "station set JSON output")
        ->required();
    cluster_cmd->add_option("--trips-out", cl.trips_out, "annotated trip CSV output");
    cluster_cmd->callback([&]() { run_cluster(cl); });

    BuildDemandArgs bd;
    CLI::App* demand_cmd = app.add_subcommand("build-demand", "estimate the demand model");
    demand_cmd->add_option("--input", bd.trips, "annotated trip CSV")->required();
    demand_cmd->add_option("--stations", bd.stations, "station set JSON")->required();
    demand_cmd->add_option("--output", bd.out, "demand model JSON output")->required();
    demand_cmd->add_option("--utc-offset-min", bd.utc_offset_min,
                           "minutes added to UTC for local binning");
    demand_cmd->add_option("--window-start", bd.window_start, "local first day (YYYY-MM-DD)");
    demand_cmd->add_option("--window-days", bd.window_days, "window length in days");
    demand_cmd->callback([&]() { run_build_demand(bd); });

    SolveArgs so;
    CLI::App* solve_cmd = app.add_subcommand("solve", "solve one repositioning instance");
    solve_cmd->add_option("--input", so.instance, "instance JSON")->required();
    solve_cmd->add_option("--output", so.out, "plan JSON output")->required();
    solve_cmd->add_flag("--exhaustive", so.exhaustive, "use the exhaustive reference solver");
    solve_cmd->add_option("--alpha", so.alpha, "override the trip cost");
    solve_cmd->add_option("--beta", so.beta, "override the lost demand weight");
    solve_cmd->callback([&]() { run_solve(so); });

    SimulateArgs si;
    CLI::App* sim_cmd = app.add_subcommand("simulate", "run the hourly rebalancing simulation");
    auto add_sim_opts = [](CLI::App* cmd, SimulateArgs& s) {
        cmd->add_option("--stations", s.stations, "station set JSON")->required();
        cmd->add_option("--model", s.model, "demand model JSON")->required();
        cmd->add_option("--config", s.config, "JSON config file");
        cmd->add_option("--output", s.out, "output CSV")->required();
        cmd->add_option("--strategy", s.strategy, "static or dynamic");
        cmd->add_option("--vehicles", s.vehicles, "repositioning vehicles");
        cmd->add_option("--period-hours", s.period_hours, "hours between solves");
        cmd->add_option("--scenarios", s.scenarios, "scenarios per solve");
        cmd->add_option("--capacity", s.capacity, "bikes per vehicle");
        cmd->add_option("--alpha", s.alpha, "trip cost");
        cmd->add_option("--beta", s.beta, "lost demand weight");
        cmd->add_option("--iterations", s.iterations, "hours to simulate");
        cmd->add_option("--seed", s.seed, "simulation seed");
        cmd->add_option("--fleet-factor", s.fleet_factor, "scale the initial inventory");
    };
    add_sim_opts(sim_cmd, si);
    sim_cmd->callback([&]() { run_simulate(si, sim_cmd); });

    SimulateArgs sw;
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "simulate a grid of fleet sizes");
    add_sim_opts(sweep_cmd, sw);
    sweep_cmd->add_option("--fleet-factors", sw.fleet_factors, "comma list of fleet factors");
    sweep_cmd->add_option("--vehicle-counts", sw.vehicle_counts, "comma list of vehicle counts");
    sweep_cmd->add_option("--seeds", sw.seeds, "replicates per cell")->check(CLI::Range(1, 1000));
    sweep_cmd->add_option("--threads", sw.threads, "worker threads")->check(CLI::Range(1, 256));
    sweep_cmd->callback([&]() { run_sweep(sw, sweep_cmd); });

    ReportArgs re;
    CLI::App* report_cmd = app.add_subcommand("report", "summarize a sweep CSV");
    report_cmd->add_option("--input", re.sweep, "sweep CSV input")->required();
    report_cmd->add_option("--output", re.out, "text report output (default stdout)");
    report_cmd->callback([&]() { run_report(re); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
