#pragma once

// Scenario files (JSON) and result emission (JSON / CSV).
//
// Scenario layout:
//   {
//     "config":   {"omega": 0.8, "tol": 1e-9},
//     "uavs":     [{"x": .., "u": .., "deadline": .., "battery_capacity": .., "battery_level": ..}],
//     "vehicles": [{"v": .., "gamma": .., "capacity": 1}],
//     "theta":    [t00, t01, ..., t10, ...],     // I x J, row-major, radians
//     "seed":     7,
//     "label":    "case1"
//   }
// Unbounded deadline / battery_capacity / gamma are written as the string "inf".
// Readers also accept theta as a nested array of rows.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "hitch/core.hpp"
#include "hitch/matching.hpp"
#include "hitch/simlab.hpp"

namespace hitch {

nlohmann::json scenario_to_json(const Scenario& s);
// Throws ScenarioError on malformed or invalid input.
Scenario scenario_from_json(const nlohmann::json& j);

std::string dump_scenario(const Scenario& s);
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::filesystem::path& path);
void save_scenario(const std::filesystem::path& path, const Scenario& s);

nlohmann::json plan_to_json(const HitchPlan& plan);
nlohmann::json match_to_json(const MatchResult& result, std::optional<bool> certificate);

// Shortest text that round-trips the double ("inf" / "-inf" / "nan" for non-finite).
std::string format_number(double value);

void write_experiment_csv(std::ostream& out, const std::vector<ExperimentRow>& rows);
void write_sweep_csv(std::ostream& out, const SweepTable& table);

}  // namespace hitch
