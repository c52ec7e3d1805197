#include "parkshare/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <map>
#include <optional>

#include "parkshare/io.hpp"

namespace parkshare::cli {

namespace fs = std::filesystem;
using io::json;

namespace {

// Artifact paths for one run: a primary output plus siblings derived from
// its stem, all rooted in --out-dir unless --out gave an explicit path.
struct OutputPlan {
    fs::path primary;

    fs::path sibling(const std::string& suffix) const {
        fs::path p = primary;
        p.replace_extension();
        return fs::path(p.string() + suffix);
    }
    fs::path manifest() const { return sibling(".manifest.json"); }
};

OutputPlan plan_outputs(const std::string& out, const std::string& out_dir,
                        const std::string& default_name) {
    OutputPlan plan;
    if (!out.empty())
        plan.primary = fs::path(out);
    else
        plan.primary = fs::path(out_dir) / default_name;
    return plan;
}

// The manifest excludes anything time- or host-dependent, so identical
// invocations write identical bytes.
void write_manifest(const OutputPlan& plan, const std::string& subcommand,
                    std::uint64_t seed, const json& config,
                    const std::map<std::string, std::string>& inputs,
                    std::vector<std::string> outputs) {
    json in = json::object();
    for (const auto& [path, digest] : inputs) in[path] = digest;
    outputs.push_back(plan.manifest().filename().string());
    json manifest{{"tool", kToolName},    {"version", kToolVersion},
                  {"subcommand", subcommand}, {"seed", seed},
                  {"config", config},     {"inputs", in},
                  {"outputs", outputs}};
    io::write_json(plan.manifest(), manifest);
}

int run_estimate_cdf(const std::string& durations, const OutputPlan& plan,
                     const std::vector<double>& queries) {
    DurationDistribution dist = io::ingest_durations(durations);
    io::write_json(plan.primary, io::to_json(dist));
    std::vector<std::string> outputs{plan.primary.filename().string()};
    if (!queries.empty()) {
        std::string csv = "x,cdf\n";
        for (double x : queries)
            csv += io::format_double(x) + "," + io::format_double(dist.cdf(x)) + "\n";
        io::write_file(plan.sibling(".queries.csv"), csv);
        outputs.push_back(plan.sibling(".queries.csv").filename().string());
    }
    write_manifest(plan, "estimate-cdf", 0,
                   json{{"durations", durations}, {"queries", queries}},
                   {{durations, io::file_digest(durations)}}, outputs);
    return 0;
}

int run_dimension(const std::string& params_path, double target, const OutputPlan& plan) {
    ScenarioParams params = io::scenario_from_json(io::load_json(params_path));
    DimensionReport report = dimension(params, target);
    io::write_json(plan.primary, io::to_json(report));
    io::write_file(plan.sibling(".curve.csv"), io::curve_csv(report.curve));
    write_manifest(plan, "dimension", 0,
                   json{{"params", params_path}, {"target", target}},
                   {{params_path, io::file_digest(params_path)}},
                   {plan.primary.filename().string(),
                    plan.sibling(".curve.csv").filename().string()});
    return 0;
}

int run_dimension_curve(const std::string& params_path, std::optional<double> phi,
                        std::optional<int> spaces, const OutputPlan& plan) {
    double phi_value = 0.0;
    int m = 0;
    std::map<std::string, std::string> inputs;
    if (!params_path.empty()) {
        ScenarioParams params = io::scenario_from_json(io::load_json(params_path));
        phi_value = phi ? *phi : prob_home_early(params);
        m = spaces ? *spaces : params.secondary_spaces;
        inputs[params_path] = io::file_digest(params_path);
    } else {
        if (!phi || !spaces)
            throw std::invalid_argument("dimension-curve needs --params or both --phi and --spaces");
        phi_value = *phi;
        m = *spaces;
    }
    std::vector<double> curve(m + 1);
    for (int q = 0; q <= m; ++q) curve[q] = prob_reserve_insufficient(m, q, phi_value);
    io::write_file(plan.primary, io::curve_csv(curve));
    write_manifest(plan, "dimension-curve", 0,
                   json{{"params", params_path}, {"phi", phi_value}, {"spaces", m}}, inputs,
                   {plan.primary.filename().string()});
    return 0;
}

int run_simulate_events(const std::string& params_path, long trials, std::uint64_t seed,
                        const OutputPlan& plan) {
    ScenarioParams params = io::scenario_from_json(io::load_json(params_path));
    EventEstimates est = monte_carlo_events(params, trials, seed);
    io::write_json(plan.primary, io::to_json(est));
    write_manifest(plan, "simulate-events", seed,
                   json{{"params", params_path}, {"trials", trials}},
                   {{params_path, io::file_digest(params_path)}},
                   {plan.primary.filename().string()});
    return 0;
}

int run_allocate(const std::string& config_path, std::optional<std::uint64_t> seed,
                 const OutputPlan& plan) {
    SimConfig config = io::sim_config_from_json(io::load_json(config_path));
    if (seed) config.seed = *seed;
    SimTrace trace = run(config);
    io::write_file(plan.primary, io::trace_csv(trace));

    OptimalAllocation opt = solve_optimal(config.population, config.premium_spaces);
    json summary;
    std::vector<double> final_means(config.population.size(), 0.0);
    if (!trace.class_averages.empty()) final_means = trace.class_averages.back();
    std::vector<double> distance(final_means.size(), 0.0);
    for (std::size_t c = 0; c < final_means.size(); ++c)
        distance[c] = std::abs(final_means[c] - opt.class_z[c]);
    double mean_occ = 0.0;
    for (int occ : trace.occupancy) mean_occ += occ;
    if (!trace.occupancy.empty()) mean_occ /= static_cast<double>(trace.occupancy.size());
    summary["final_class_averages"] = final_means;
    summary["final_user_averages"] = trace.final_user_averages;
    summary["mean_occupancy"] = mean_occ;
    summary["overshoot_days"] = trace.overshoot_days();
    summary["overshoot_frequency"] = trace.overshoot_frequency();
    summary["gamma_initial"] = trace.gamma_initial;
    summary["target_occupancy"] = trace.target;
    summary["optimal"] = io::to_json(opt);
    summary["distance_to_optimum"] = distance;
    io::write_json(plan.sibling(".summary.json"), summary);

    write_manifest(plan, "allocate", config.seed, io::resolved_sim_config(config),
                   {{config_path, io::file_digest(config_path)}},
                   {plan.primary.filename().string(),
                    plan.sibling(".summary.json").filename().string()});
    return 0;
}

int run_solve(const std::string& population_path, int spaces, const OutputPlan& plan) {
    Population pop = io::population_from_json(io::load_json(population_path));
    OptimalAllocation opt = solve_optimal(pop, spaces);
    io::write_json(plan.primary, io::to_json(opt));
    write_manifest(plan, "solve", 0,
                   json{{"population", population_path}, {"spaces", spaces}},
                   {{population_path, io::file_digest(population_path)}},
                   {plan.primary.filename().string()});
    return 0;
}

} // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"Shared-parking toolkit: reserve dimensioning and stochastic "
                 "premium-space allocation"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string out_dir = ".";
    app.add_option("--out-dir", out_dir, "Directory for output artifacts")
        ->capture_default_str();

    // estimate-cdf
    auto* cmd_est = app.add_subcommand("estimate-cdf",
                                       "Estimate an empirical duration distribution from CSV");
    std::string durations;
    std::vector<double> queries;
    std::string est_out;
    cmd_est->add_option("--durations", durations, "Duration CSV (header `duration_minutes`)")
        ->required();
    cmd_est->add_option("--query", queries, "Evaluate the CDF at these points");
    cmd_est->add_option("--out", est_out, "Distribution JSON path");

    // dimension
    auto* cmd_dim = app.add_subcommand("dimension", "Reserve report for a QoS target");
    std::string dim_params;
    double dim_target = 0.0;
    std::string dim_out;
    cmd_dim->add_option("--params", dim_params, "Scenario JSON")->required();
    cmd_dim->add_option("--target", dim_target, "Insufficiency probability target in (0,1)")
        ->required();
    cmd_dim->add_option("--out", dim_out, "Report JSON path");

    // dimension-curve
    auto* cmd_curve = app.add_subcommand("dimension-curve", "p(M,Q) curve as CSV");
    std::string curve_params;
    std::optional<double> curve_phi;
    std::optional<int> curve_spaces;
    std::string curve_out;
    cmd_curve->add_option("--params", curve_params, "Scenario JSON");
    cmd_curve->add_option("--phi", curve_phi, "Home-early probability (overrides scenario)");
    cmd_curve->add_option("--spaces", curve_spaces, "Secondary space count M");
    cmd_curve->add_option("--out", curve_out, "Curve CSV path");

    // simulate-events
    auto* cmd_sim = app.add_subcommand("simulate-events",
                                       "Monte Carlo oracle for the event probabilities");
    std::string sim_params;
    long sim_trials = 1000000;
    std::uint64_t sim_seed = 0;
    std::string sim_out;
    cmd_sim->add_option("--params", sim_params, "Scenario JSON")->required();
    cmd_sim->add_option("--trials", sim_trials, "Trial count")->capture_default_str();
    cmd_sim->add_option("--seed", sim_seed, "Master seed")->capture_default_str();
    cmd_sim->add_option("--out", sim_out, "Estimates JSON path");

    // allocate
    auto* cmd_alloc = app.add_subcommand("allocate", "Run the stochastic allocation simulator");
    std::string alloc_config;
    std::optional<std::uint64_t> alloc_seed;
    std::string alloc_out;
    cmd_alloc->add_option("--config", alloc_config, "Simulation config JSON")->required();
    cmd_alloc->add_option("--seed", alloc_seed, "Master seed (overrides config)");
    cmd_alloc->add_option("--out", alloc_out, "Trace CSV path");

    // solve
    auto* cmd_solve = app.add_subcommand("solve", "Exact optimal allocation via the multiplier");
    std::string solve_population;
    int solve_spaces = 0;
    std::string solve_out;
    cmd_solve->add_option("--population", solve_population, "Population JSON")->required();
    cmd_solve->add_option("--spaces", solve_spaces, "Premium space count N")->required();
    cmd_solve->add_option("--out", solve_out, "Allocation JSON path");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (cmd_est->parsed())
            return run_estimate_cdf(durations, plan_outputs(est_out, out_dir, "distribution.json"),
                                    queries);
        if (cmd_dim->parsed())
            return run_dimension(dim_params, dim_target,
                                 plan_outputs(dim_out, out_dir, "report.json"));
        if (cmd_curve->parsed())
            return run_dimension_curve(curve_params, curve_phi, curve_spaces,
                                       plan_outputs(curve_out, out_dir, "curve.csv"));
        if (cmd_sim->parsed())
            return run_simulate_events(sim_params, sim_trials, sim_seed,
                                       plan_outputs(sim_out, out_dir, "estimates.json"));
        if (cmd_alloc->parsed())
            return run_allocate(alloc_config, alloc_seed,
                                plan_outputs(alloc_out, out_dir, "trace.csv"));
        if (cmd_solve->parsed())
            return run_solve(solve_population, solve_spaces,
                             plan_outputs(solve_out, out_dir, "allocation.json"));
    } catch (const std::exception& e) {
        std::cerr << kToolName << ": " << e.what() << "\n";
        return 1;
    }
    return 2;
}

int run(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args);
}

} // namespace parkshare::cli
