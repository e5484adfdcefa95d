#include "hitch/simlab.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <random>
#include <thread>

namespace hitch {

namespace {

// Uniform double in [0, 1) from the top 53 bits; unlike
// std::uniform_real_distribution this is identical across standard libraries.
double unit_interval(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::mt19937_64 seeded_engine(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  return std::mt19937_64(seq);
}

std::string where(const char* what, std::size_t index) {
  return std::string(what) + "[" + std::to_string(index) + "]";
}

}  // namespace

void Scenario::validate() const {
  try {
    config.validate();
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      try {
        tasks[i].validate();
      } catch (const DomainError& e) {
        throw ScenarioError(where("uavs", i) + ": " + e.what());
      }
    }
    for (std::size_t j = 0; j < offers.size(); ++j) {
      try {
        offers[j].validate();
      } catch (const DomainError& e) {
        throw ScenarioError(where("vehicles", j) + ": " + e.what());
      }
    }
  } catch (const DomainError& e) {
    throw ScenarioError(std::string("config: ") + e.what());
  }
  if (geoms.size() != tasks.size()) {
    throw ScenarioError("theta: expected " + std::to_string(tasks.size()) + " rows, got " +
                        std::to_string(geoms.size()));
  }
  for (std::size_t i = 0; i < geoms.size(); ++i) {
    if (geoms[i].size() != offers.size()) {
      throw ScenarioError(where("theta", i) + ": expected " + std::to_string(offers.size()) +
                          " entries, got " + std::to_string(geoms[i].size()));
    }
    for (std::size_t j = 0; j < geoms[i].size(); ++j) {
      try {
        geoms[i][j].validate();
      } catch (const DomainError& e) {
        throw ScenarioError(where("theta", i) + where("", j) + ": " + e.what());
      }
    }
  }
}

GeneratorParams GeneratorParams::case1() {
  GeneratorParams p;
  p.theta_max = std::numbers::pi;
  p.label = "case1";
  return p;
}

GeneratorParams GeneratorParams::case2() {
  GeneratorParams p;
  p.theta_max = std::numbers::pi / 2.0;
  p.label = "case2";
  return p;
}

void GeneratorParams::validate() const {
  if (!(theta_min >= 0.0 && theta_min <= theta_max && theta_max <= std::numbers::pi)) {
    throw DomainError("generator: theta range must satisfy 0 <= min <= max <= pi");
  }
  if (!(x_max > 0.0) || !std::isfinite(x_max)) throw DomainError("generator: x_max must be > 0");
  if (!(u > 0.0) || !std::isfinite(u)) throw DomainError("generator: u must be > 0");
  if (!(omega >= 0.0 && omega <= 1.0)) throw DomainError("generator: omega must lie in [0, 1]");
  if (capacity < 1) throw DomainError("generator: capacity must be >= 1");
  if (deadline_factor && !(*deadline_factor >= 1.0)) {
    throw DomainError("generator: deadline factor must be >= 1 (direct flight must be feasible)");
  }
  if (heterogeneous) {
    if (!(v_min > 0.0 && v_min <= v_max) || !std::isfinite(v_max)) {
      throw DomainError("generator: vehicle speed range must satisfy 0 < min <= max");
    }
    if (!(gamma_min >= 0.0 && gamma_min <= gamma_max) || !std::isfinite(gamma_max)) {
      throw DomainError("generator: gamma range must satisfy 0 <= min <= max");
    }
  } else {
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("generator: v must be > 0");
    if (!(gamma >= 0.0)) throw DomainError("generator: gamma must be >= 0");
  }
}

Scenario generate_scenario(const GeneratorParams& params, std::uint64_t seed) {
  params.validate();
  std::mt19937_64 rng = seeded_engine(seed);

  Scenario s;
  s.seed = seed;
  s.label = params.label;
  s.config.omega = params.omega;

  s.tasks.reserve(params.n_uavs);
  for (std::size_t i = 0; i < params.n_uavs; ++i) {
    UavTask t;
    t.x = params.x_max * (1.0 - unit_interval(rng));  // (0, x_max]
    t.u = params.u;
    if (params.deadline_factor) t.deadline = *params.deadline_factor * t.x / t.u;
    s.tasks.push_back(t);
  }

  s.offers.reserve(params.n_vehicles);
  for (std::size_t j = 0; j < params.n_vehicles; ++j) {
    VehicleOffer o;
    if (params.heterogeneous) {
      o.v = params.v_min + (params.v_max - params.v_min) * unit_interval(rng);
      o.gamma = params.gamma_min + (params.gamma_max - params.gamma_min) * unit_interval(rng);
    } else {
      o.v = params.v;
      o.gamma = params.gamma;
    }
    o.capacity = params.random_capacity
                     ? 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(params.capacity))
                     : params.capacity;
    s.offers.push_back(o);
  }

  const double span = params.theta_max - params.theta_min;
  s.geoms.assign(params.n_uavs, std::vector<PairGeometry>(params.n_vehicles));
  for (auto& row : s.geoms) {
    for (auto& g : row) g.theta = params.theta_min + span * unit_interval(rng);
  }
  return s;
}

std::uint64_t derive_trial_seed(std::uint64_t master_seed, std::size_t n_uavs, std::size_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed),
                    static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(n_uavs), static_cast<std::uint32_t>(trial),
                    static_cast<std::uint32_t>(static_cast<std::uint64_t>(trial) >> 32)};
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
}

TrialReport run_trial(const Scenario& s, bool limited) {
  s.validate();
  const SavingMatrix m = build_saving_matrix(s.config, s.tasks, s.offers, s.geoms, limited);
  const MsaOutcome msa = msa_solve(m, s.config.tol);
  const MatchResult greedy = greedy_match(m, s.config.tol);

  TrialReport r;
  r.n_uavs = s.tasks.size();
  r.n_vehicles = s.offers.size();
  r.seed = s.seed;
  r.iterations = msa.duals.iterations;
  r.phases = msa.duals.phases;
  for (std::size_t i = 0; i < s.tasks.size(); ++i) {
    const double direct = baseline_consumption(s.tasks[i]);
    r.total_direct += direct;
    r.total_msa += msa.result.columns[i] ? m.plan(i, *msa.result.columns[i]).consumption : direct;
    r.total_greedy += greedy.columns[i] ? m.plan(i, *greedy.columns[i]).consumption : direct;
  }
  r.saving_msa = msa.result.total_saving;
  r.saving_greedy = greedy.total_saving;
  const double extra = r.saving_msa - r.saving_greedy;
  if (r.total_direct > 0.0) r.improvement_pct = extra / r.total_direct;
  if (r.saving_greedy > 0.0) r.improvement_vs_greedy_saving = extra / r.saving_greedy;
  if (r.total_greedy > 0.0) {
    r.improvement_vs_greedy_total = (r.total_greedy - r.total_msa) / r.total_greedy;
  }
  return r;
}

ExperimentRow aggregate(std::size_t uav_count, const std::vector<TrialReport>& trials) {
  ExperimentRow row;
  row.uav_count = uav_count;
  row.n_trials = trials.size();
  if (trials.empty()) return row;
  const double n = static_cast<double>(trials.size());
  double iterations = 0.0;
  for (const TrialReport& t : trials) {
    row.mean_direct += t.total_direct;
    row.mean_greedy += t.total_greedy;
    row.mean_msa += t.total_msa;
    row.mean_saving_msa += t.saving_msa;
    row.mean_saving_greedy += t.saving_greedy;
    iterations += static_cast<double>(t.iterations);
    row.max_iterations = std::max(row.max_iterations, t.iterations);
  }
  row.mean_direct /= n;
  row.mean_greedy /= n;
  row.mean_msa /= n;
  row.mean_saving_msa /= n;
  row.mean_saving_greedy /= n;
  row.mean_iterations = iterations / n;
  if (trials.size() > 1) {
    double ss = 0.0;
    for (const TrialReport& t : trials) ss += (t.total_msa - row.mean_msa) * (t.total_msa - row.mean_msa);
    row.std_msa = std::sqrt(ss / (n - 1.0));
  }
  const double extra = row.mean_saving_msa - row.mean_saving_greedy;
  if (row.mean_direct > 0.0) row.extra_vs_direct = extra / row.mean_direct;
  if (row.mean_saving_greedy > 0.0) row.extra_vs_greedy_saving = extra / row.mean_saving_greedy;
  if (row.mean_greedy > 0.0) row.extra_vs_greedy_total = (row.mean_greedy - row.mean_msa) / row.mean_greedy;
  return row;
}

ExperimentResult run_experiment(const GeneratorParams& params, const ExperimentOptions& options) {
  if (options.n_trials < 1) throw DomainError("run_experiment: n_trials must be >= 1");
  params.validate();

  struct Job {
    std::size_t group;
    std::size_t trial;
  };
  std::vector<Job> jobs;
  ExperimentResult result;
  result.trials.resize(options.uav_counts.size());
  for (std::size_t g = 0; g < options.uav_counts.size(); ++g) {
    result.trials[g].resize(options.n_trials);
    for (std::size_t t = 0; t < options.n_trials; ++t) jobs.push_back({g, t});
  }

  auto run_job = [&](const Job& job) {
    GeneratorParams p = params;
    p.n_uavs = options.uav_counts[job.group];
    const std::uint64_t seed = derive_trial_seed(options.master_seed, p.n_uavs, job.trial);
    result.trials[job.group][job.trial] = run_trial(generate_scenario(p, seed), options.limited);
  };

  const unsigned n_threads = std::max(1u, std::min<unsigned>(options.threads, jobs.size()));
  if (n_threads <= 1) {
    for (const Job& job : jobs) run_job(job);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned w = 0; w < n_threads; ++w) {
      pool.emplace_back([&] {
        for (std::size_t k = next++; k < jobs.size() && !failed; k = next++) {
          try {
            run_job(jobs[k]);
          } catch (...) {
            if (!failed.exchange(true)) failure = std::current_exception();
          }
        }
      });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }

  for (std::size_t g = 0; g < options.uav_counts.size(); ++g) {
    result.rows.push_back(aggregate(options.uav_counts[g], result.trials[g]));
  }
  return result;
}

std::vector<double> Axis::values() const {
  if (count == 0) return {};
  if (count == 1) return {start};
  std::vector<double> out(count);
  const double step = (stop - start) / static_cast<double>(count - 1);
  for (std::size_t k = 0; k < count; ++k) out[k] = start + step * static_cast<double>(k);
  out.back() = stop;
  return out;
}

SweepSpec SweepSpec::defaults(SweepKind kind) {
  SweepSpec s;
  s.kind = kind;
  switch (kind) {
    case SweepKind::SpeedVsConsumption:
      s.axis1 = {4.0, 80.0, 77};
      break;
    case SweepKind::GammaVsConsumption:
      s.omega = 0.3;
      s.v = 30.0;  // u / v = 2
      s.axis1 = {0.0, 3.0, 61};
      break;
    case SweepKind::SpeedGammaSurface:
      // A binding deadline is what makes an intermediate speed optimal.
      s.deadline = 1.5 * s.x / s.u;
      s.axis1 = {20.0, 80.0, 61};
      s.axis2 = Axis{0.0, 0.5, 51};
      break;
    case SweepKind::BatteryRegimes:
      s.v = 30.0;
      s.gamma = 0.3;
      s.theta = std::numbers::pi / 4.0;
      s.axis1 = {0.0, 0.05, 26};
      s.axis2 = Axis{s.x / s.u, 3.0 * s.x / s.u, 21};
      break;
  }
  return s;
}

SweepTable sweep_curves(const SweepSpec& spec) {
  PlannerConfig cfg;
  cfg.omega = spec.omega;
  UavTask task;
  task.x = spec.x;
  task.u = spec.u;
  task.deadline = spec.deadline;
  const PairGeometry geom{spec.theta};

  auto optimal_consumption = [&](double v, double gamma) {
    return plan_pair(cfg, task, VehicleOffer{v, gamma, 1}, geom, false).consumption;
  };

  SweepTable table;
  const std::vector<double> first = spec.axis1.values();
  switch (spec.kind) {
    case SweepKind::SpeedVsConsumption:
      table.header = {"v", "value"};
      for (double v : first) table.rows.push_back({v, optimal_consumption(v, spec.gamma)});
      break;
    case SweepKind::GammaVsConsumption:
      table.header = {"gamma", "value"};
      for (double g : first) table.rows.push_back({g, optimal_consumption(spec.v, g)});
      break;
    case SweepKind::SpeedGammaSurface: {
      if (!spec.axis2) throw DomainError("surface sweep needs a second (gamma) axis");
      table.header = {"v", "gamma", "value"};
      const std::vector<double> second = spec.axis2->values();
      for (double v : first) {
        for (double g : second) table.rows.push_back({v, g, optimal_consumption(v, g)});
      }
      break;
    }
    case SweepKind::BatteryRegimes: {
      if (!spec.axis2) throw DomainError("battery sweep needs a second (deadline) axis");
      table.header = {"delta_e", "deadline", "value"};
      const std::vector<double> second = spec.axis2->values();
      const VehicleOffer offer{spec.v, spec.gamma, 1};
      for (double headroom : first) {
        for (double d : second) {
          UavTask t = task;
          t.battery_level = 1.0;
          t.battery_capacity = 1.0 + headroom;
          t.deadline = d;
          table.rows.push_back({headroom, d, optimal_distance_limited(cfg, t, offer, geom).y_star});
        }
      }
      break;
    }
  }
  return table;
}

}  // namespace hitch
