#include "hitch/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

namespace hitch {

namespace {

using nlohmann::json;

json number_or_inf(double value) {
  if (value == kUnbounded) return "inf";
  return value;
}

double read_number(const json& node, const std::string& context, bool allow_inf) {
  if (node.is_number()) return node.get<double>();
  if (allow_inf && node.is_string() && node.get<std::string>() == "inf") return kUnbounded;
  throw ScenarioError(context + ": expected a number" + (allow_inf ? " or \"inf\"" : ""));
}

double read_field(const json& obj, const char* key, const std::string& context, bool allow_inf,
                  std::optional<double> fallback = std::nullopt) {
  const auto it = obj.find(key);
  if (it == obj.end()) {
    if (fallback) return *fallback;
    throw ScenarioError(context + ": missing \"" + key + "\"");
  }
  return read_number(*it, context + "." + key, allow_inf);
}

const json& require_array(const json& root, const char* key) {
  const auto it = root.find(key);
  if (it == root.end() || !it->is_array()) {
    throw ScenarioError(std::string("scenario: \"") + key + "\" must be an array");
  }
  return *it;
}

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

json scenario_to_json(const Scenario& s) {
  json root;
  root["config"] = {{"omega", s.config.omega}, {"tol", s.config.tol}};
  json uavs = json::array();
  for (const UavTask& t : s.tasks) {
    uavs.push_back({{"x", t.x},
                    {"u", t.u},
                    {"deadline", number_or_inf(t.deadline)},
                    {"battery_capacity", number_or_inf(t.battery_capacity)},
                    {"battery_level", t.battery_level}});
  }
  root["uavs"] = std::move(uavs);
  json vehicles = json::array();
  for (const VehicleOffer& o : s.offers) {
    vehicles.push_back({{"v", o.v}, {"gamma", number_or_inf(o.gamma)}, {"capacity", o.capacity}});
  }
  root["vehicles"] = std::move(vehicles);
  json theta = json::array();
  for (const auto& row : s.geoms) {
    for (const PairGeometry& g : row) theta.push_back(g.theta);
  }
  root["theta"] = std::move(theta);
  root["seed"] = s.seed;
  root["label"] = s.label;
  return root;
}

Scenario scenario_from_json(const json& root) {
  if (!root.is_object()) throw ScenarioError("scenario: top level must be an object");
  Scenario s;

  if (const auto it = root.find("config"); it != root.end()) {
    if (!it->is_object()) throw ScenarioError("scenario: \"config\" must be an object");
    s.config.omega = read_field(*it, "omega", "config", false, s.config.omega);
    s.config.tol = read_field(*it, "tol", "config", false, s.config.tol);
  }

  const json& uavs = require_array(root, "uavs");
  for (std::size_t i = 0; i < uavs.size(); ++i) {
    const std::string ctx = "uavs[" + std::to_string(i) + "]";
    const json& node = uavs[i];
    if (!node.is_object()) throw ScenarioError(ctx + ": expected an object");
    UavTask t;
    t.x = read_field(node, "x", ctx, false);
    t.u = read_field(node, "u", ctx, false);
    t.deadline = read_field(node, "deadline", ctx, true, kUnbounded);
    t.battery_capacity = read_field(node, "battery_capacity", ctx, true, kUnbounded);
    t.battery_level = read_field(node, "battery_level", ctx, false, 0.0);
    s.tasks.push_back(t);
  }

  const json& vehicles = require_array(root, "vehicles");
  for (std::size_t j = 0; j < vehicles.size(); ++j) {
    const std::string ctx = "vehicles[" + std::to_string(j) + "]";
    const json& node = vehicles[j];
    if (!node.is_object()) throw ScenarioError(ctx + ": expected an object");
    VehicleOffer o;
    o.v = read_field(node, "v", ctx, false);
    o.gamma = read_field(node, "gamma", ctx, true, 0.0);
    const double cap = read_field(node, "capacity", ctx, false, 1.0);
    if (cap != std::floor(cap) || cap < 1.0 || cap > 1e6) {
      throw ScenarioError(ctx + ".capacity: expected an integer >= 1");
    }
    o.capacity = static_cast<int>(cap);
    s.offers.push_back(o);
  }

  const std::size_t n_rows = s.tasks.size();
  const std::size_t n_cols = s.offers.size();
  const json theta = root.contains("theta") ? root["theta"] : json::array();
  if (!theta.is_array()) throw ScenarioError("scenario: \"theta\" must be an array");
  std::vector<double> flat;
  const bool nested = !theta.empty() && theta[0].is_array();
  if (nested) {
    if (theta.size() != n_rows) {
      throw ScenarioError("theta: expected " + std::to_string(n_rows) + " rows");
    }
    for (std::size_t i = 0; i < theta.size(); ++i) {
      if (!theta[i].is_array() || theta[i].size() != n_cols) {
        throw ScenarioError("theta[" + std::to_string(i) + "]: expected " +
                            std::to_string(n_cols) + " entries");
      }
      for (const json& v : theta[i]) flat.push_back(read_number(v, "theta", false));
    }
  } else {
    for (const json& v : theta) flat.push_back(read_number(v, "theta", false));
  }
  if (flat.size() != n_rows * n_cols) {
    throw ScenarioError("theta: expected " + std::to_string(n_rows * n_cols) +
                        " entries (uavs x vehicles), got " + std::to_string(flat.size()));
  }
  s.geoms.assign(n_rows, std::vector<PairGeometry>(n_cols));
  for (std::size_t i = 0; i < n_rows; ++i) {
    for (std::size_t j = 0; j < n_cols; ++j) s.geoms[i][j].theta = flat[i * n_cols + j];
  }

  if (const auto it = root.find("seed"); it != root.end()) {
    if (!it->is_number_integer()) throw ScenarioError("scenario: \"seed\" must be an integer");
    s.seed = it->get<std::uint64_t>();
  }
  if (const auto it = root.find("label"); it != root.end()) {
    if (!it->is_string()) throw ScenarioError("scenario: \"label\" must be a string");
    s.label = it->get<std::string>();
  }

  s.validate();
  return s;
}

std::string dump_scenario(const Scenario& s) { return scenario_to_json(s).dump(2) + "\n"; }

Scenario parse_scenario(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ScenarioError(std::string("scenario: invalid JSON: ") + e.what());
  }
  return scenario_from_json(root);
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open scenario file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_scenario(buf.str());
  } catch (const ScenarioError& e) {
    throw ScenarioError(path.string() + ": " + e.what());
  }
}

void save_scenario(const std::filesystem::path& path, const Scenario& s) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ScenarioError("cannot write scenario file " + path.string());
  out << dump_scenario(s);
}

json plan_to_json(const HitchPlan& plan) {
  json j;
  j["eligible"] = plan.eligibility.eligible;
  j["reason"] = std::string(to_string(plan.eligibility.reason));
  j["threshold_angle"] =
      plan.eligibility.threshold_angle ? json(*plan.eligibility.threshold_angle) : json(nullptr);
  j["y_star"] = plan.y_star;
  j["binding"] = std::string(to_string(plan.binding));
  j["total_time"] = plan.total_time;
  j["energy"] = plan.energy;
  j["consumption"] = plan.consumption;
  j["saving"] = plan.saving;
  j["swap_and_depart"] = plan.swap_and_depart;
  return j;
}

json match_to_json(const MatchResult& result, std::optional<bool> certificate) {
  json j;
  json assignment = json::array();
  for (const auto& a : result.assignment) assignment.push_back(a ? json(*a) : json(nullptr));
  j["assignment"] = std::move(assignment);
  j["total_saving"] = result.total_saving;
  json pairs = json::array();
  for (const MatchedPair& p : result.per_pair) {
    pairs.push_back({{"uav", p.uav}, {"vehicle", p.vehicle}, {"saving", p.weight},
                     {"plan", plan_to_json(p.plan)}});
  }
  j["pairs"] = std::move(pairs);
  j["dual_certificate"] = certificate ? json(*certificate) : json(nullptr);
  return j;
}

void write_experiment_csv(std::ostream& out, const std::vector<ExperimentRow>& rows) {
  out << "uav_count,n_trials,mean_direct,mean_greedy,mean_msa,std_msa,mean_saving_msa,"
         "mean_saving_greedy,mean_iterations\n";
  for (const ExperimentRow& r : rows) {
    out << r.uav_count << ',' << r.n_trials << ',' << format_number(r.mean_direct) << ','
        << format_number(r.mean_greedy) << ',' << format_number(r.mean_msa) << ','
        << format_number(r.std_msa) << ',' << format_number(r.mean_saving_msa) << ','
        << format_number(r.mean_saving_greedy) << ',' << format_number(r.mean_iterations) << '\n';
  }
}

void write_sweep_csv(std::ostream& out, const SweepTable& table) {
  for (std::size_t k = 0; k < table.header.size(); ++k) {
    out << (k ? "," : "") << table.header[k];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) out << (k ? "," : "") << format_number(row[k]);
    out << '\n';
  }
}

}  // namespace hitch
