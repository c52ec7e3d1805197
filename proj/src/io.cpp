#include "parkshare/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace parkshare::io {

namespace {

double parse_duration(const std::string& token, const std::filesystem::path& path,
                      long line) {
    double value = 0.0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || !(value >= 0.0)) {
        std::ostringstream msg;
        msg << path.string() << ":" << line << ": expected a non-negative duration, got '"
            << token << "'";
        throw std::runtime_error(msg.str());
    }
    return value;
}

std::string strip_cr(std::string s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
}

} // namespace

DurationDistribution ingest_durations(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error(path.string() + ": empty file");
    if (strip_cr(line) != "duration_minutes")
        throw std::runtime_error(path.string() + ":1: expected header 'duration_minutes'");
    std::vector<double> samples;
    long lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        line = strip_cr(line);
        if (line.empty()) continue;
        samples.push_back(parse_duration(line, path, lineno));
    }
    if (samples.empty())
        throw std::runtime_error(path.string() + ": no duration rows after the header");
    return DurationDistribution::estimate_empirical(std::move(samples));
}

json to_json(const DurationDistribution& dist) {
    json atoms = json::array();
    for (const MassPoint& a : dist.atoms()) atoms.push_back({{"value", a.value}, {"mass", a.mass}});
    return {{"atoms", atoms}, {"samples", dist.samples()}};
}

DurationDistribution distribution_from_json(const json& j) {
    std::vector<MassPoint> atoms;
    for (const json& a : j.value("atoms", json::array()))
        atoms.push_back({a.at("value").get<double>(), a.at("mass").get<double>()});
    std::vector<double> samples = j.value("samples", std::vector<double>{});
    return DurationDistribution(std::move(atoms), std::move(samples));
}

json to_json(const ScenarioParams& params) {
    return {{"rental_window_end", params.rental_window_end},
            {"secondary_spaces", params.secondary_spaces},
            {"landlord_return", to_json(params.landlord_return)},
            {"user_departure", to_json(params.user_departure)}};
}

ScenarioParams scenario_from_json(const json& j) {
    ScenarioParams params{j.at("rental_window_end").get<double>(),
                          j.at("secondary_spaces").get<int>(),
                          distribution_from_json(j.at("landlord_return")),
                          distribution_from_json(j.at("user_departure"))};
    validate(params);
    return params;
}

json to_json(const CostFunction& cost) {
    json j;
    if (cost.is_power())
        j["power"] = cost.power_exponent();
    else
        j["table"] = *cost.table_knots();
    j["scale"] = cost.scale();
    return j;
}

CostFunction cost_from_json(const json& j) {
    const double scale = j.value("scale", 1.0);
    if (j.contains("power")) return CostFunction::power(j.at("power").get<double>(), scale);
    if (j.contains("table")) {
        std::vector<std::array<double, 2>> knots;
        for (const json& k : j.at("table"))
            knots.push_back({k.at(0).get<double>(), k.at(1).get<double>()});
        return CostFunction::piecewise_derivative(std::move(knots), scale);
    }
    throw std::invalid_argument("cost needs either 'power' or 'table'");
}

json to_json(const Population& pop) {
    json classes = json::array();
    for (const PopulationClass& c : pop)
        classes.push_back({{"count", c.count}, {"cost", to_json(c.cost)}});
    return {{"classes", classes}};
}

Population population_from_json(const json& j) {
    Population pop;
    for (const json& c : j.at("classes"))
        pop.push_back({c.at("count").get<int>(), cost_from_json(c.at("cost"))});
    if (pop.empty()) throw std::invalid_argument("population has no classes");
    return pop;
}

json to_json(const DimensionReport& report) {
    json curve = json::array();
    for (std::size_t q = 0; q < report.curve.size(); ++q)
        curve.push_back({static_cast<int>(q), report.curve[q]});
    json j{{"phi", report.phi},
           {"p_overstay", report.p_overstay},
           {"target", report.target},
           {"curve", curve}};
    if (report.q_min)
        j["q_min"] = *report.q_min;
    else
        j["q_min"] = "unattainable";
    return j;
}

json to_json(const EventEstimates& est) {
    return {{"phi_hat", est.phi_hat},
            {"p_overstay_hat", est.p_overstay_hat},
            {"insufficiency_curve_hat", est.insufficiency_curve},
            {"pair_trials", est.pair_trials},
            {"day_trials", est.day_trials}};
}

json to_json(const OptimalAllocation& opt) {
    return {{"class_z", opt.class_z},
            {"class_counts", opt.class_counts},
            {"mu_star", opt.mu_star},
            {"objective", opt.objective_value},
            {"interior", opt.interior}};
}

namespace {

std::string mode_name(ControllerMode mode) {
    switch (mode) {
    case ControllerMode::Integrator: return "integrator";
    case ControllerMode::Pi: return "pi";
    case ControllerMode::Frozen: return "frozen";
    }
    return "integrator";
}

ControllerMode mode_from_name(const std::string& name) {
    if (name == "integrator") return ControllerMode::Integrator;
    if (name == "pi") return ControllerMode::Pi;
    if (name == "frozen") return ControllerMode::Frozen;
    throw std::invalid_argument("unknown controller mode '" + name + "'");
}

} // namespace

json to_json(const SimConfig& config) {
    json controller{{"mode", mode_name(config.controller.mode)},
                    {"kp", config.controller.kp},
                    {"ki", config.controller.ki}};
    if (config.controller.alpha)
        controller["alpha"] = *config.controller.alpha;
    else
        controller["alpha"] = nullptr;
    json j{{"premium_spaces", config.premium_spaces},
           {"horizon", config.horizon},
           {"seed", config.seed},
           {"population", to_json(config.population)},
           {"target_margin_sigmas", config.target_margin_sigmas},
           {"p_min", config.clamp.min_prob},
           {"p_max", config.clamp.max_prob},
           {"controller", controller}};
    if (config.target_occupancy)
        j["target_occupancy"] = *config.target_occupancy;
    else
        j["target_occupancy"] = nullptr;
    if (config.gamma0)
        j["gamma0"] = *config.gamma0;
    else
        j["gamma0"] = nullptr;
    return j;
}

SimConfig sim_config_from_json(const json& j) {
    SimConfig config;
    config.premium_spaces = j.at("premium_spaces").get<int>();
    config.horizon = j.at("horizon").get<int>();
    config.seed = j.value("seed", std::uint64_t{0});
    config.population = population_from_json(j.at("population"));
    config.target_margin_sigmas = j.value("target_margin_sigmas", 0.0);
    if (j.contains("target_occupancy") && !j.at("target_occupancy").is_null())
        config.target_occupancy = j.at("target_occupancy").get<double>();
    config.clamp.min_prob = j.value("p_min", 1e-4);
    config.clamp.max_prob = j.value("p_max", 1.0 - 1e-4);
    if (j.contains("controller")) {
        const json& c = j.at("controller");
        config.controller.mode = mode_from_name(c.value("mode", std::string("integrator")));
        if (c.contains("alpha") && !c.at("alpha").is_null())
            config.controller.alpha = c.at("alpha").get<double>();
        config.controller.kp = c.value("kp", 0.0);
        config.controller.ki = c.value("ki", 0.0);
    }
    if (j.contains("gamma0") && !j.at("gamma0").is_null())
        config.gamma0 = j.at("gamma0").get<double>();
    return config;
}

json resolved_sim_config(const SimConfig& config) {
    SimConfig resolved = config;
    if (!resolved.target_occupancy)
        resolved.target_occupancy =
            resolved.premium_spaces -
            resolved.target_margin_sigmas * std::sqrt(resolved.premium_spaces);
    if (resolved.controller.mode == ControllerMode::Integrator && !resolved.controller.alpha)
        resolved.controller.alpha =
            0.5 * alpha_upper_bound(resolved.population, resolved.clamp.min_prob);
    return to_json(resolved);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << contents;
}

json load_json(const std::filesystem::path& path) {
    try {
        return json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
}

void write_json(const std::filesystem::path& path, const json& j) {
    write_file(path, j.dump(2) + "\n");
}

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string curve_csv(const std::vector<double>& curve) {
    std::string out = "Q,p_insufficient\n";
    for (std::size_t q = 0; q < curve.size(); ++q) {
        out += std::to_string(q);
        out += ',';
        out += format_double(curve[q]);
        out += '\n';
    }
    return out;
}

std::string trace_csv(const SimTrace& trace) {
    std::string out = "day,occupancy,gamma,residual";
    const std::size_t classes = trace.class_averages.empty() ? 0 : trace.class_averages[0].size();
    for (std::size_t c = 1; c <= classes; ++c) out += ",classmean_" + std::to_string(c);
    out += '\n';
    for (std::size_t d = 0; d < trace.occupancy.size(); ++d) {
        out += std::to_string(d + 1);
        out += ',';
        out += std::to_string(trace.occupancy[d]);
        out += ',';
        out += format_double(trace.gamma_series[d]);
        out += ',';
        out += format_double(trace.consensus_residuals[d]);
        for (double m : trace.class_averages[d]) {
            out += ',';
            out += format_double(m);
        }
        out += '\n';
    }
    return out;
}

std::string file_digest(const std::filesystem::path& path) {
    const std::string bytes = read_file(path);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 0x100000001b3ULL;
    }
    char buf[24];
    std::snprintf(buf, sizeof(buf), "fnv1a:%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace parkshare::io
