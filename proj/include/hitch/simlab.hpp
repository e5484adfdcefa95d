#pragma once

// Seeded scenario generation and Monte Carlo comparison of fly-direct,
// greedy matching and Max-Saving matching.

#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "hitch/core.hpp"
#include "hitch/matching.hpp"

namespace hitch {

struct Scenario {
  std::vector<UavTask> tasks;
  std::vector<VehicleOffer> offers;
  std::vector<std::vector<PairGeometry>> geoms;  // tasks.size() x offers.size()
  PlannerConfig config;
  std::uint64_t seed = 0;
  std::string label;

  // Throws ScenarioError describing the first violated invariant.
  void validate() const;
};

struct GeneratorParams {
  std::size_t n_uavs = 10;
  std::size_t n_vehicles = 10;
  double theta_min = 0.0;
  double theta_max = std::numbers::pi;
  double x_max = 20.0;
  double u = 60.0;
  double v = 40.0;
  double gamma = 0.3;
  double omega = 0.8;
  // D_i = deadline_factor * x_i / u; unset means no deadline.
  std::optional<double> deadline_factor;
  // Fixed capacity, or uniform on {1, ..., capacity} when random_capacity.
  int capacity = 1;
  bool random_capacity = false;
  // Per-vehicle v and gamma drawn uniformly from the ranges below.
  bool heterogeneous = false;
  double v_min = 20.0;
  double v_max = 80.0;
  double gamma_min = 0.0;
  double gamma_max = 0.5;
  std::string label;

  static GeneratorParams case1();  // theta in [0, pi]
  static GeneratorParams case2();  // theta in [0, pi/2]

  void validate() const;
};

// Deterministic in (params, seed).
Scenario generate_scenario(const GeneratorParams& params, std::uint64_t seed);

// Seed of trial `trial` at population `n_uavs`, independent of run order.
std::uint64_t derive_trial_seed(std::uint64_t master_seed, std::size_t n_uavs, std::size_t trial);

struct TrialReport {
  std::size_t n_uavs = 0;
  std::size_t n_vehicles = 0;
  double total_direct = 0.0;
  double total_greedy = 0.0;
  double total_msa = 0.0;
  double saving_msa = 0.0;
  double saving_greedy = 0.0;
  // (saving_msa - saving_greedy) / total_direct
  double improvement_pct = 0.0;
  // Same numerator over saving_greedy, and (total_greedy - total_msa) / total_greedy.
  double improvement_vs_greedy_saving = 0.0;
  double improvement_vs_greedy_total = 0.0;
  std::size_t iterations = 0;
  std::size_t phases = 0;
  std::uint64_t seed = 0;
};

TrialReport run_trial(const Scenario& s, bool limited = false);

struct ExperimentRow {
  std::size_t uav_count = 0;
  std::size_t n_trials = 0;
  double mean_direct = 0.0;
  double mean_greedy = 0.0;
  double mean_msa = 0.0;
  double std_msa = 0.0;
  double mean_saving_msa = 0.0;
  double mean_saving_greedy = 0.0;
  double mean_iterations = 0.0;
  std::size_t max_iterations = 0;
  // Additional MSA reduction over greedy, as ratios of the trial means.
  double extra_vs_direct = 0.0;
  double extra_vs_greedy_saving = 0.0;
  double extra_vs_greedy_total = 0.0;
};

struct ExperimentResult {
  std::vector<ExperimentRow> rows;
  std::vector<std::vector<TrialReport>> trials;  // per uav count, in trial order
};

struct ExperimentOptions {
  std::size_t n_trials = 100;
  std::vector<std::size_t> uav_counts;
  std::uint64_t master_seed = 0;
  unsigned threads = 1;
  bool limited = false;
};

// Trials run in parallel when threads > 1; aggregation always sums in trial
// order so the output does not depend on the thread count.
ExperimentResult run_experiment(const GeneratorParams& params, const ExperimentOptions& options);

ExperimentRow aggregate(std::size_t uav_count, const std::vector<TrialReport>& trials);

enum class SweepKind { SpeedVsConsumption, GammaVsConsumption, SpeedGammaSurface, BatteryRegimes };

struct Axis {
  double start = 0.0;
  double stop = 0.0;
  std::size_t count = 1;

  std::vector<double> values() const;
};

struct SweepSpec {
  SweepKind kind = SweepKind::SpeedVsConsumption;
  double x = 5.0;
  double u = 60.0;
  double omega = 0.8;
  double theta = 0.0;
  double v = 40.0;
  double gamma = 0.0;
  double deadline = kUnbounded;
  Axis axis1;
  std::optional<Axis> axis2;

  // Default parameter set for each sweep kind.
  static SweepSpec defaults(SweepKind kind);
};

struct SweepTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

// Speed / gamma / surface sweeps report the optimal consumption C*; the
// battery sweep reports the optimal ride length over (headroom, deadline).
SweepTable sweep_curves(const SweepSpec& spec);

}  // namespace hitch
