#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <string>

#include "parkshare/cli.hpp"
#include "parkshare/io.hpp"

using namespace parkshare;
namespace fs = std::filesystem;

namespace {

const std::string kDataDir = PARKSHARE_DATA_DIR;

// Scratch directory that cleans up after itself.
struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag)
        : path(fs::temp_directory_path() / ("parkshare_" + tag)) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

io::json small_scenario_json() {
    DurationDistribution landlord =
        DurationDistribution::from_atoms({{0.0, 0.042}, {170.0, 0.958}});
    DurationDistribution user =
        DurationDistribution::from_atoms({{85.0, 0.95}, {340.0, 0.05}});
    return io::to_json(ScenarioParams{170.0, 20, landlord, user});
}

io::json small_sim_config_json() {
    SimConfig cfg;
    cfg.premium_spaces = 20;
    cfg.horizon = 50;
    cfg.seed = 5;
    cfg.population = {{20, CostFunction::power(2.0)}, {20, CostFunction::power(4.0)}};
    cfg.controller = {ControllerMode::Integrator, 1e-3, 0.0, 0.0};
    return io::to_json(cfg);
}

} // namespace

TEST_CASE("duration ingestion builds the empirical distribution") {
    TempDir tmp("ingest");
    io::write_file(tmp.file("d.csv"), "duration_minutes\n100\n150\n170\n200\n");
    DurationDistribution d = io::ingest_durations(tmp.file("d.csv"));
    CHECK(d.cdf(170.0) == doctest::Approx(0.75).epsilon(1e-15));

    SUBCASE("header-only file is rejected") {
        io::write_file(tmp.file("empty.csv"), "duration_minutes\n");
        CHECK_THROWS_WITH_AS(io::ingest_durations(tmp.file("empty.csv")),
                             doctest::Contains("no duration rows"), std::runtime_error);
    }

    SUBCASE("malformed rows name their line") {
        io::write_file(tmp.file("bad.csv"), "duration_minutes\n12\noops\n14\n");
        CHECK_THROWS_WITH_AS(io::ingest_durations(tmp.file("bad.csv")),
                             doctest::Contains(":3:"), std::runtime_error);
        io::write_file(tmp.file("neg.csv"), "duration_minutes\n-5\n");
        CHECK_THROWS_AS(io::ingest_durations(tmp.file("neg.csv")), std::runtime_error);
    }

    SUBCASE("wrong header is rejected") {
        io::write_file(tmp.file("h.csv"), "minutes\n5\n");
        CHECK_THROWS_AS(io::ingest_durations(tmp.file("h.csv")), std::runtime_error);
    }

    SUBCASE("missing file") {
        CHECK_THROWS_AS(io::ingest_durations(tmp.file("nope.csv")), std::runtime_error);
    }
}

TEST_CASE("the lognormal fixture hits its analytic anchors") {
    DurationDistribution csv = io::ingest_durations(kDataDir + "/durations_lognormal.csv");
    REQUIRE(csv.samples().size() == 100000);

    // The fixture's generating distribution: sigma = 0.6, 95th percentile
    // at 170 minutes, hence median = 170 * exp(-0.6 * z95).
    const double z95 = 1.6448536269514722;
    const double median = 170.0 * std::exp(-0.6 * z95);
    CHECK(std::abs(csv.cdf(median) - 0.5) <= 0.005);
    CHECK(csv.prob_greater(170.0) == doctest::Approx(0.05).epsilon(1e-12));

    // The JSON fixture carries the same sample cloud.
    DurationDistribution js = io::distribution_from_json(
        io::load_json(kDataDir + "/user_departure_lognormal.json"));
    CHECK(js.samples() == csv.samples());
}

TEST_CASE("distribution json round-trips") {
    DurationDistribution d({{0.0, 0.25}, {170.0, 0.25}}, {10.0, 20.0, 30.0});
    DurationDistribution back = io::distribution_from_json(io::to_json(d));
    CHECK(back.atoms().size() == 2);
    CHECK(back.samples() == d.samples());
    CHECK(back.cdf(20.0) == d.cdf(20.0));
    CHECK(io::to_json(back) == io::to_json(d));
}

TEST_CASE("scenario json round-trips") {
    io::json j = small_scenario_json();
    ScenarioParams p = io::scenario_from_json(j);
    CHECK(p.rental_window_end == 170.0);
    CHECK(p.secondary_spaces == 20);
    CHECK(io::to_json(p) == j);
}

TEST_CASE("population json handles both cost families") {
    io::json j = {{"classes",
                   {{{"count", 300}, {"cost", {{"power", 4.0}}}},
                    {{"count", 2},
                     {"cost", {{"table", {{0.0, 0.5}, {1.0, 2.0}}}, {"scale", 2.0}}}}}}};
    Population pop = io::population_from_json(j);
    REQUIRE(pop.size() == 2);
    CHECK(pop[0].cost.is_power());
    CHECK(pop[0].cost.power_exponent() == 4.0);
    CHECK_FALSE(pop[1].cost.is_power());
    CHECK(pop[1].cost.derivative(1.0) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(io::to_json(io::population_from_json(io::to_json(pop))) == io::to_json(pop));

    CHECK_THROWS_AS(io::cost_from_json(io::json{{"neither", 1}}), std::invalid_argument);
    CHECK_THROWS_AS(io::population_from_json(io::json{{"classes", io::json::array()}}),
                    std::invalid_argument);
}

TEST_CASE("sim config round-trips with defaults materialized") {
    io::json j = small_sim_config_json();
    SimConfig cfg = io::sim_config_from_json(j);
    CHECK(io::to_json(cfg) == j);

    io::json resolved = io::resolved_sim_config(cfg);
    CHECK_FALSE(resolved.at("target_occupancy").is_null());
    SimConfig again = io::sim_config_from_json(resolved);
    CHECK(io::resolved_sim_config(again) == resolved);
}

TEST_CASE("report serialization spells out the unattainable case") {
    DimensionReport r;
    r.phi = 0.5;
    r.p_overstay = 0.0;
    r.curve = {1.0, 0.5, 0.25};
    r.target = 0.1;
    io::json j = io::to_json(r);
    CHECK(j.at("q_min") == "unattainable");
    r.q_min = 2;
    CHECK(io::to_json(r).at("q_min") == 2);
}

TEST_CASE("csv formatting survives a double round-trip") {
    for (double x : {0.1, 1.0 / 3.0, 3.141592653589793, 2.2250738585072014e-308}) {
        CHECK(std::stod(io::format_double(x)) == x);
    }
    std::vector<double> curve{1.0, 0.1234567890123456789, 0.5};
    const std::string csv = io::curve_csv(curve);
    CHECK(csv.rfind("Q,p_insufficient\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
}

TEST_CASE("cli estimate-cdf writes distribution, queries and manifest") {
    TempDir tmp("cli_est");
    io::write_file(tmp.file("d.csv"), "duration_minutes\n100\n150\n170\n200\n");
    int rc = cli::run({"estimate-cdf", "--durations", tmp.file("d.csv"), "--out",
                       tmp.file("dist.json"), "--query", "170", "--query", "90"});
    REQUIRE(rc == 0);
    DurationDistribution d = io::distribution_from_json(io::load_json(tmp.file("dist.json")));
    CHECK(d.cdf(170.0) == doctest::Approx(0.75).epsilon(1e-15));

    const std::string queries = io::read_file(tmp.file("dist.queries.csv"));
    CHECK(queries.find("170,0.75") != std::string::npos);

    io::json manifest = io::load_json(tmp.file("dist.manifest.json"));
    CHECK(manifest.at("tool") == "parkshare");
    CHECK(manifest.at("subcommand") == "estimate-cdf");
    CHECK(manifest.at("inputs").size() == 1);
    for (const auto& [path, digest] : manifest.at("inputs").items())
        CHECK(digest.get<std::string>().rfind("fnv1a:", 0) == 0);
}

TEST_CASE("cli dimension emits a report and a curve") {
    TempDir tmp("cli_dim");
    io::write_json(tmp.file("scenario.json"), small_scenario_json());
    int rc = cli::run({"--out-dir", tmp.path.string(), "dimension", "--params",
                       tmp.file("scenario.json"), "--target", "0.001"});
    REQUIRE(rc == 0);
    io::json report = io::load_json(tmp.file("report.json"));
    CHECK(report.at("phi").get<double>() ==
          doctest::Approx(0.042 + 0.958 * 0.05).epsilon(1e-12));
    CHECK(report.at("q_min").is_number());

    const std::string curve = io::read_file(tmp.file("report.curve.csv"));
    CHECK(curve.rfind("Q,p_insufficient\n0,1\n", 0) == 0);
}

TEST_CASE("cli dimension-curve accepts direct phi") {
    TempDir tmp("cli_curve");
    int rc = cli::run({"dimension-curve", "--phi", "0.1", "--spaces", "10", "--out",
                       tmp.file("curve.csv")});
    REQUIRE(rc == 0);
    const std::string curve = io::read_file(tmp.file("curve.csv"));
    CHECK(std::count(curve.begin(), curve.end(), '\n') == 12);

    CHECK(cli::run({"dimension-curve", "--phi", "0.1", "--out", tmp.file("x.csv")}) == 1);
}

TEST_CASE("cli simulate-events matches the library oracle") {
    TempDir tmp("cli_sim");
    io::write_json(tmp.file("scenario.json"), small_scenario_json());
    int rc = cli::run({"simulate-events", "--params", tmp.file("scenario.json"), "--trials",
                       "20000", "--seed", "9", "--out", tmp.file("est.json")});
    REQUIRE(rc == 0);
    io::json est = io::load_json(tmp.file("est.json"));
    EventEstimates direct =
        monte_carlo_events(io::scenario_from_json(small_scenario_json()), 20000, 9);
    CHECK(est.at("phi_hat").get<double>() == direct.phi_hat);
    CHECK(est.at("day_trials").get<long>() == direct.day_trials);
}

TEST_CASE("cli allocate writes trace, summary and manifest") {
    TempDir tmp("cli_alloc");
    io::write_json(tmp.file("sim.json"), small_sim_config_json());
    int rc = cli::run({"allocate", "--config", tmp.file("sim.json"), "--out",
                       tmp.file("trace.csv")});
    REQUIRE(rc == 0);

    const std::string trace = io::read_file(tmp.file("trace.csv"));
    CHECK(trace.rfind("day,occupancy,gamma,residual,classmean_1,classmean_2\n", 0) == 0);
    CHECK(std::count(trace.begin(), trace.end(), '\n') == 51); // header + 50 days

    io::json summary = io::load_json(tmp.file("trace.summary.json"));
    CHECK(summary.at("final_class_averages").size() == 2);
    CHECK(summary.at("optimal").at("class_z").size() == 2);
    CHECK(summary.at("final_user_averages").size() == 40);

    io::json manifest = io::load_json(tmp.file("trace.manifest.json"));
    CHECK(manifest.at("seed") == 5);
    CHECK_FALSE(manifest.at("config").at("controller").at("alpha").is_null());
}

TEST_CASE("cli solve reproduces the library optimum") {
    TempDir tmp("cli_solve");
    io::write_json(tmp.file("pop.json"),
                   io::json{{"classes",
                             {{{"count", 300}, {"cost", {{"power", 4.0}}}},
                              {{"count", 300}, {"cost", {{"power", 6.0}}}},
                              {{"count", 300}, {"cost", {{"power", 8.0}}}}}}});
    int rc = cli::run({"solve", "--population", tmp.file("pop.json"), "--spaces", "450",
                       "--out", tmp.file("alloc.json")});
    REQUIRE(rc == 0);
    io::json alloc = io::load_json(tmp.file("alloc.json"));
    OptimalAllocation direct = solve_optimal(
        io::population_from_json(io::load_json(tmp.file("pop.json"))), 450.0);
    CHECK(alloc.at("mu_star").get<double>() == direct.mu_star);
    CHECK(alloc.at("class_z").size() == 3);
    CHECK(alloc.at("interior") == true);
}

TEST_CASE("cli reruns are byte-identical") {
    TempDir tmp("cli_repro");
    io::write_json(tmp.file("scenario.json"), small_scenario_json());
    const std::vector<std::string> args{"--out-dir", tmp.path.string(), "dimension",
                                        "--params", tmp.file("scenario.json"), "--target",
                                        "0.001"};
    REQUIRE(cli::run(args) == 0);
    const std::string report1 = io::read_file(tmp.file("report.json"));
    const std::string curve1 = io::read_file(tmp.file("report.curve.csv"));
    const std::string manifest1 = io::read_file(tmp.file("report.manifest.json"));
    REQUIRE(cli::run(args) == 0);
    CHECK(io::read_file(tmp.file("report.json")) == report1);
    CHECK(io::read_file(tmp.file("report.curve.csv")) == curve1);
    CHECK(io::read_file(tmp.file("report.manifest.json")) == manifest1);
}

TEST_CASE("cli exit codes distinguish usage and domain errors") {
    TempDir tmp("cli_codes");
    CHECK(cli::run({"no-such-command"}) == 2);
    CHECK(cli::run({"dimension", "--bogus-flag", "1"}) == 2);
    CHECK(cli::run({"dimension", "--params", tmp.file("missing.json"), "--target", "0.5"}) ==
          1);
    io::write_file(tmp.file("garbage.json"), "{not json");
    CHECK(cli::run({"dimension", "--params", tmp.file("garbage.json"), "--target", "0.5"}) ==
          1);
    CHECK(cli::run({"--help"}) == 0);
    CHECK(cli::run({}) == 2);
}
