#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "parkshare/allocation.hpp"
#include "parkshare/dimensioning.hpp"
#include "parkshare/duration_distribution.hpp"
#include "parkshare/kkt.hpp"

namespace parkshare::io {

using nlohmann::json;

// ---- duration CSV (one `duration_minutes` header, one value per line) ----

// Parses the CSV and builds the empirical distribution of its rows.
// Malformed rows raise std::runtime_error naming the line; a file with
// no data rows is invalid.
DurationDistribution ingest_durations(const std::filesystem::path& path);

// ---- JSON codecs ----
// Distribution schema: {"atoms":[{"value":v,"mass":m},...],"samples":[...]}
json to_json(const DurationDistribution& dist);
DurationDistribution distribution_from_json(const json& j);

// Scenario schema: {"rental_window_end":W,"secondary_spaces":M,
//                   "landlord_return":{...},"user_departure":{...}}
json to_json(const ScenarioParams& params);
ScenarioParams scenario_from_json(const json& j);

// Cost schema: {"power":p[,"scale":s]} or {"table":[[z,d],...][,"scale":s]}
json to_json(const CostFunction& cost);
CostFunction cost_from_json(const json& j);

// Population schema: {"classes":[{"count":c,"cost":{...}},...]}
json to_json(const Population& pop);
Population population_from_json(const json& j);

json to_json(const DimensionReport& report);
json to_json(const EventEstimates& est);
json to_json(const OptimalAllocation& opt);

// Simulation config; all defaults materialize on the way out so a
// resolved config re-ingests to itself.
json to_json(const SimConfig& config);
SimConfig sim_config_from_json(const json& j);
json resolved_sim_config(const SimConfig& config);

// ---- flat-file helpers ----
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& contents);
json load_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const json& j);

// p(M, Q) curve as CSV with header `Q,p_insufficient`.
std::string curve_csv(const std::vector<double>& curve);

// Trace CSV with header `day,occupancy,gamma,residual,classmean_1,...`.
std::string trace_csv(const SimTrace& trace);

// Doubles in CSV output carry 17 significant digits so they re-read
// bit-exactly.
std::string format_double(double x);

// FNV-1a 64-bit digest of a file's bytes, hex-encoded.
std::string file_digest(const std::filesystem::path& path);

} // namespace parkshare::io
