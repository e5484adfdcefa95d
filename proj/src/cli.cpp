#include "hitch/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <memory>
#include <numbers>
#include <ostream>
#include <sstream>

#include "hitch/core.hpp"
#include "hitch/io.hpp"
#include "hitch/matching.hpp"
#include "hitch/simlab.hpp"

namespace hitch::cli {

namespace {

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double parse_value(const std::string& text, const char* name) {
  if (text == "inf" || text == "unbounded") return kUnbounded;
  double value = 0.0;
  std::istringstream in(text);
  in >> value;
  if (!in || !in.eof()) throw InputError(std::string("--") + name + ": not a number: " + text);
  return value;
}

double to_radians(double angle, bool degrees) {
  if (!degrees) return angle;
  double rad = angle * std::numbers::pi / 180.0;
  if (angle == 180.0) rad = std::numbers::pi;
  return rad;
}

std::vector<std::size_t> parse_counts(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    if (item.find_first_not_of("0123456789") != std::string::npos) {
      throw InputError("--uavs: expected a comma-separated list of counts, got " + text);
    }
    out.push_back(static_cast<std::size_t>(std::stoull(item)));
  }
  if (out.empty()) throw InputError("--uavs: at least one UAV count is required");
  return out;
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("HITCH_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw InputError(std::string("HITCH_SEED is not an integer: ") + env);
    }
  }
  return 1;
}

// Writes to --output when given, otherwise to `out`.
template <class Fn>
void emit(const std::string& path, std::ostream& out, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(out);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw InputError("cannot write " + path);
  fn(file);
}

struct PlanArgs {
  double x = 0.0;
  double u = 0.0;
  double v = 0.0;
  std::string gamma = "0";
  double theta = 0.0;
  double omega = 0.8;
  std::string deadline = "inf";
  std::string battery_capacity = "inf";
  double battery_level = 0.0;
  double tol = 1e-9;
  bool degrees = false;
  std::string format = "human";
};

int cmd_plan(const PlanArgs& a, std::ostream& out) {
  PlannerConfig cfg{a.omega, a.tol};
  UavTask task;
  task.x = a.x;
  task.u = a.u;
  task.deadline = parse_value(a.deadline, "deadline");
  task.battery_capacity = parse_value(a.battery_capacity, "battery-capacity");
  task.battery_level = a.battery_level;
  const VehicleOffer offer{a.v, parse_value(a.gamma, "gamma"), 1};
  const PairGeometry geom{to_radians(a.theta, a.degrees)};

  const HitchPlan plan = plan_pair(cfg, task, offer, geom, true);
  if (a.format == "json") {
    nlohmann::json j = plan_to_json(plan);
    j["baseline"] = baseline_consumption(task);
    out << j.dump(2) << '\n';
    return kOk;
  }
  out << std::setprecision(6);
  out << "eligible:        " << (plan.eligibility.eligible ? "yes" : "no") << " ("
      << to_string(plan.eligibility.reason) << ")\n";
  out << "threshold_angle: ";
  if (plan.eligibility.threshold_angle) {
    out << *plan.eligibility.threshold_angle << " rad\n";
  } else {
    out << "n/a\n";
  }
  out << "y_star:          " << plan.y_star << " km\n";
  out << "binding:         " << to_string(plan.binding) << (plan.swap_and_depart ? " (swap and depart)" : "") << '\n';
  out << "total_time:      " << plan.total_time << " h\n";
  out << "energy:          " << plan.energy << '\n';
  out << "consumption:     " << plan.consumption << '\n';
  out << "baseline:        " << baseline_consumption(task) << '\n';
  out << "saving:          " << plan.saving << '\n';
  return kOk;
}

struct MatchArgs {
  std::string scenario;
  std::string solver = "msa";
  bool limited = false;
  std::string format = "human";
};

int cmd_match(const MatchArgs& a, std::ostream& out) {
  const Scenario s = load_scenario(a.scenario);
  const SavingMatrix m = build_saving_matrix(s.config, s.tasks, s.offers, s.geoms, a.limited);

  MatchResult result;
  std::optional<bool> certificate;
  std::size_t iterations = 0;
  if (a.solver == "msa") {
    MsaOutcome outcome = msa_solve(m, s.config.tol);
    certificate = verify_duals(m, outcome.result, outcome.duals, 1e-9);
    iterations = outcome.duals.iterations;
    result = std::move(outcome.result);
  } else if (a.solver == "greedy") {
    result = greedy_match(m, s.config.tol);
  } else {
    result = brute_force_match(m, s.config.tol);
  }

  if (a.format == "json") {
    nlohmann::json j = match_to_json(result, certificate);
    j["solver"] = a.solver;
    if (a.solver == "msa") j["iterations"] = iterations;
    out << j.dump(2) << '\n';
    return kOk;
  }
  out << std::setprecision(6);
  out << "solver:       " << a.solver << '\n';
  out << "uavs:         " << s.tasks.size() << ", vehicles: " << s.offers.size() << '\n';
  for (std::size_t i = 0; i < result.assignment.size(); ++i) {
    out << "  uav " << i << " -> ";
    if (!result.assignment[i]) {
      out << "fly direct\n";
      continue;
    }
    const MatchedPair* pair = nullptr;
    for (const MatchedPair& p : result.per_pair) {
      if (p.uav == i) pair = &p;
    }
    out << "vehicle " << *result.assignment[i] << "  y*=" << pair->plan.y_star
        << " binding=" << to_string(pair->plan.binding) << " saving=" << pair->weight << '\n';
  }
  out << "total_saving: " << result.total_saving << '\n';
  if (certificate) {
    out << "certificate:  " << (*certificate ? "dual feasible, optimal" : "FAILED") << '\n';
    out << "iterations:   " << iterations << '\n';
  }
  return kOk;
}

struct SimulateArgs {
  int case_id = 1;
  std::string uavs = "5,10,15,20,25,30,35,40";
  std::size_t vehicles = 20;
  std::size_t trials = 100;
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
  double x_max = 20.0;
  double u = 60.0;
  double v = 40.0;
  double gamma = 0.3;
  double omega = 0.8;
  std::optional<double> deadline_factor;
  int capacity = 1;
  bool random_capacity = false;
  bool heterogeneous = false;
  bool limited = false;
  std::string output;
  std::string emit_scenarios;
  std::string format = "csv";
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  GeneratorParams params = a.case_id == 2 ? GeneratorParams::case2() : GeneratorParams::case1();
  params.n_vehicles = a.vehicles;
  params.x_max = a.x_max;
  params.u = a.u;
  params.v = a.v;
  params.gamma = a.gamma;
  params.omega = a.omega;
  params.deadline_factor = a.deadline_factor;
  params.capacity = a.capacity;
  params.random_capacity = a.random_capacity;
  params.heterogeneous = a.heterogeneous;
  params.validate();

  ExperimentOptions opts;
  opts.n_trials = a.trials;
  opts.uav_counts = parse_counts(a.uavs);
  opts.master_seed = a.seed ? *a.seed : default_seed();
  opts.threads = a.threads;
  opts.limited = a.limited;
  if (opts.n_trials < 1) throw InputError("--trials must be >= 1");

  if (!a.emit_scenarios.empty()) {
    const std::filesystem::path dir(a.emit_scenarios);
    std::filesystem::create_directories(dir);
    for (std::size_t count : opts.uav_counts) {
      GeneratorParams p = params;
      p.n_uavs = count;
      for (std::size_t t = 0; t < opts.n_trials; ++t) {
        const Scenario s = generate_scenario(p, derive_trial_seed(opts.master_seed, count, t));
        save_scenario(dir / ("scenario_u" + std::to_string(count) + "_t" + std::to_string(t) + ".json"), s);
      }
    }
  }

  const ExperimentResult result = run_experiment(params, opts);
  emit(a.output, out, [&](std::ostream& os) {
    if (a.format == "json") {
      nlohmann::json rows = nlohmann::json::array();
      for (const ExperimentRow& r : result.rows) {
        rows.push_back({{"uav_count", r.uav_count},
                        {"n_trials", r.n_trials},
                        {"mean_direct", r.mean_direct},
                        {"mean_greedy", r.mean_greedy},
                        {"mean_msa", r.mean_msa},
                        {"std_msa", r.std_msa},
                        {"mean_saving_msa", r.mean_saving_msa},
                        {"mean_saving_greedy", r.mean_saving_greedy},
                        {"mean_iterations", r.mean_iterations},
                        {"max_iterations", r.max_iterations},
                        {"extra_vs_direct", r.extra_vs_direct},
                        {"extra_vs_greedy_saving", r.extra_vs_greedy_saving},
                        {"extra_vs_greedy_total", r.extra_vs_greedy_total}});
      }
      os << rows.dump(2) << '\n';
    } else {
      write_experiment_csv(os, result.rows);
    }
  });
  return kOk;
}

struct SweepArgs {
  std::string kind = "speed";
  std::optional<double> x, u, omega, theta, v, gamma;
  std::optional<std::string> deadline;
  std::optional<double> from, to, from2, to2;
  std::optional<std::size_t> points, points2;
  bool degrees = false;
  std::string output;
};

int cmd_sweep(const SweepArgs& a, std::ostream& out) {
  SweepKind kind;
  if (a.kind == "speed") {
    kind = SweepKind::SpeedVsConsumption;
  } else if (a.kind == "gamma") {
    kind = SweepKind::GammaVsConsumption;
  } else if (a.kind == "surface") {
    kind = SweepKind::SpeedGammaSurface;
  } else {
    kind = SweepKind::BatteryRegimes;
  }
  SweepSpec spec = SweepSpec::defaults(kind);
  if (a.x) spec.x = *a.x;
  if (a.u) spec.u = *a.u;
  if (a.omega) spec.omega = *a.omega;
  if (a.theta) spec.theta = to_radians(*a.theta, a.degrees);
  if (a.v) spec.v = *a.v;
  if (a.gamma) spec.gamma = *a.gamma;
  if (a.deadline) spec.deadline = parse_value(*a.deadline, "deadline");
  if (a.from) spec.axis1.start = *a.from;
  if (a.to) spec.axis1.stop = *a.to;
  if (a.points) spec.axis1.count = *a.points;
  if (spec.axis2) {
    if (a.from2) spec.axis2->start = *a.from2;
    if (a.to2) spec.axis2->stop = *a.to2;
    if (a.points2) spec.axis2->count = *a.points2;
  }
  if (spec.axis1.count < 1 || (spec.axis2 && spec.axis2->count < 1)) {
    throw InputError("sweep axes need at least one point");
  }
  const SweepTable table = sweep_curves(spec);
  emit(a.output, out, [&](std::ostream& os) { write_sweep_csv(os, table); });
  return kOk;
}

int cmd_validate(const std::vector<std::string>& files, std::ostream& out, std::ostream& err) {
  int status = kOk;
  for (const std::string& f : files) {
    try {
      const Scenario s = load_scenario(f);
      out << f << ": ok (" << s.tasks.size() << " uavs, " << s.offers.size() << " vehicles)\n";
    } catch (const ScenarioError& e) {
      err << e.what() << '\n';
      status = kInputError;
    }
  }
  return status;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"UAV hitching planner: single-pair plans, fleet matching and experiments"};
  app.name(args.empty() ? "hitch" : args[0]);
  app.require_subcommand(1);

  PlanArgs plan_args;
  auto* plan = app.add_subcommand("plan", "Optimal hitching plan for one UAV and one vehicle");
  plan->add_option("--x", plan_args.x, "Distance to destination (km)")->required();
  plan->add_option("--u", plan_args.u, "UAV flight speed (km/h)")->required();
  plan->add_option("--v", plan_args.v, "Vehicle speed (km/h)")->required();
  plan->add_option("--gamma", plan_args.gamma, "Charging rate, or inf for battery swap")->capture_default_str();
  plan->add_option("--theta", plan_args.theta, "Heading deviation (radians)")->required();
  plan->add_option("--omega", plan_args.omega, "Energy weight")->capture_default_str();
  plan->add_option("--deadline", plan_args.deadline, "Deadline (h) or inf")->capture_default_str();
  plan->add_option("--battery-capacity", plan_args.battery_capacity, "e_full or inf")->capture_default_str();
  plan->add_option("--battery-level", plan_args.battery_level, "e_i")->capture_default_str();
  plan->add_option("--tol", plan_args.tol)->capture_default_str();
  plan->add_flag("--degrees", plan_args.degrees, "Read --theta in degrees");
  plan->add_option("--format", plan_args.format)->check(CLI::IsMember({"human", "json"}))->capture_default_str();

  MatchArgs match_args;
  auto* match = app.add_subcommand("match", "Assign the UAVs of a scenario file to vehicles");
  match->add_option("scenario,--scenario", match_args.scenario, "Scenario JSON file")->required();
  match->add_option("--solver", match_args.solver)
      ->check(CLI::IsMember({"msa", "greedy", "brute"}))
      ->capture_default_str();
  match->add_flag("--limited", match_args.limited, "Use the battery-limited planner");
  match->add_option("--format", match_args.format)->check(CLI::IsMember({"human", "json"}))->capture_default_str();

  SimulateArgs sim_args;
  auto* sim = app.add_subcommand("simulate", "Monte Carlo comparison of MSA, greedy and direct flight");
  sim->add_option("--case", sim_args.case_id, "1: theta in [0, pi], 2: theta in [0, pi/2]")
      ->check(CLI::IsMember({1, 2}))
      ->capture_default_str();
  sim->add_option("--uavs", sim_args.uavs, "Comma-separated UAV counts")->capture_default_str();
  sim->add_option("--vehicles", sim_args.vehicles)->capture_default_str();
  sim->add_option("--trials", sim_args.trials)->capture_default_str();
  sim->add_option("--seed", sim_args.seed, "Master seed (default: $HITCH_SEED or 1)");
  sim->add_option("--threads", sim_args.threads)->capture_default_str();
  sim->add_option("--x-max", sim_args.x_max)->capture_default_str();
  sim->add_option("--u", sim_args.u)->capture_default_str();
  sim->add_option("--v", sim_args.v)->capture_default_str();
  sim->add_option("--gamma", sim_args.gamma)->capture_default_str();
  sim->add_option("--omega", sim_args.omega)->capture_default_str();
  sim->add_option("--deadline-factor", sim_args.deadline_factor, "D_i = factor * x_i / u");
  sim->add_option("--capacity", sim_args.capacity)->capture_default_str();
  sim->add_flag("--random-capacity", sim_args.random_capacity, "Capacity uniform on 1..--capacity");
  sim->add_flag("--heterogeneous", sim_args.heterogeneous, "Sample v and gamma per vehicle");
  sim->add_flag("--limited", sim_args.limited);
  sim->add_option("--output,-o", sim_args.output, "CSV path (default stdout)");
  sim->add_option("--emit-scenarios", sim_args.emit_scenarios, "Directory for the generated scenario files");
  sim->add_option("--format", sim_args.format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();

  SweepArgs sweep_args;
  auto* sweep = app.add_subcommand("sweep", "Parameter sweeps of the optimal consumption");
  sweep->add_option("--kind", sweep_args.kind)
      ->check(CLI::IsMember({"speed", "gamma", "surface", "battery"}))
      ->capture_default_str();
  sweep->add_option("--x", sweep_args.x);
  sweep->add_option("--u", sweep_args.u);
  sweep->add_option("--omega", sweep_args.omega);
  sweep->add_option("--theta", sweep_args.theta);
  sweep->add_option("--v", sweep_args.v);
  sweep->add_option("--gamma", sweep_args.gamma);
  sweep->add_option("--deadline", sweep_args.deadline);
  sweep->add_option("--from", sweep_args.from, "First axis start");
  sweep->add_option("--to", sweep_args.to, "First axis stop");
  sweep->add_option("--points", sweep_args.points, "First axis point count");
  sweep->add_option("--from2", sweep_args.from2);
  sweep->add_option("--to2", sweep_args.to2);
  sweep->add_option("--points2", sweep_args.points2);
  sweep->add_flag("--degrees", sweep_args.degrees);
  sweep->add_option("--output,-o", sweep_args.output);

  std::vector<std::string> files;
  auto* validate = app.add_subcommand("validate", "Check scenario files");
  validate->add_option("files", files)->required();

  std::vector<const char*> argv;
  for (const std::string& s : args) argv.push_back(s.c_str());
  if (argv.empty()) argv.push_back("hitch");

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kInputError;
  }

  try {
    if (*plan) return cmd_plan(plan_args, out);
    if (*match) return cmd_match(match_args, out);
    if (*sim) return cmd_simulate(sim_args, out);
    if (*sweep) return cmd_sweep(sweep_args, out);
    if (*validate) return cmd_validate(files, out, err);
  } catch (const SizeGuardExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kGuardError;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const ContractError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const UnboundedHitch& e) {
    err << "error: " << e.what() << " (set a deadline)\n";
    return kInputError;
  } catch (const ScenarioError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}

}  // namespace hitch::cli
