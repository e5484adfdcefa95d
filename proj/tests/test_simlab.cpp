#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hitch/simlab.hpp"
#include "oracles.hpp"

using namespace hitch;

namespace {

constexpr double kPi = std::numbers::pi;

void expect_same_report(const TrialReport& a, const TrialReport& b) {
  EXPECT_EQ(a.total_direct, b.total_direct);
  EXPECT_EQ(a.total_greedy, b.total_greedy);
  EXPECT_EQ(a.total_msa, b.total_msa);
  EXPECT_EQ(a.saving_msa, b.saving_msa);
  EXPECT_EQ(a.saving_greedy, b.saving_greedy);
  EXPECT_EQ(a.iterations, b.iterations);
  EXPECT_EQ(a.seed, b.seed);
}

}  // namespace

TEST(Generator, Deterministic) {
  GeneratorParams p = GeneratorParams::case1();
  const Scenario a = generate_scenario(p, 42);
  const Scenario b = generate_scenario(p, 42);
  ASSERT_EQ(a.tasks.size(), b.tasks.size());
  for (std::size_t i = 0; i < a.tasks.size(); ++i) {
    EXPECT_EQ(a.tasks[i].x, b.tasks[i].x);
    for (std::size_t j = 0; j < a.offers.size(); ++j) {
      EXPECT_EQ(a.geoms[i][j].theta, b.geoms[i][j].theta);
    }
  }
  const Scenario c = generate_scenario(p, 43);
  EXPECT_NE(a.tasks[0].x, c.tasks[0].x);
}

TEST(Generator, RangesAndDefaults) {
  GeneratorParams p = GeneratorParams::case2();
  p.n_uavs = 50;
  p.n_vehicles = 30;
  const Scenario s = generate_scenario(p, 5);
  s.validate();
  EXPECT_EQ(s.config.omega, 0.8);
  for (const auto& t : s.tasks) {
    EXPECT_GT(t.x, 0.0);
    EXPECT_LE(t.x, 20.0);
    EXPECT_EQ(t.u, 60.0);
    EXPECT_FALSE(t.has_deadline());
  }
  for (const auto& o : s.offers) {
    EXPECT_EQ(o.v, 40.0);
    EXPECT_EQ(o.gamma, 0.3);
    EXPECT_EQ(o.capacity, 1);
  }
  for (const auto& row : s.geoms) {
    for (const auto& g : row) {
      EXPECT_GE(g.theta, 0.0);
      EXPECT_LE(g.theta, kPi / 2);
    }
  }
}

TEST(Generator, EmptyScenario) {
  GeneratorParams p;
  p.n_uavs = 0;
  const Scenario s = generate_scenario(p, 1);
  EXPECT_TRUE(s.tasks.empty());
  EXPECT_TRUE(s.geoms.empty());
  const TrialReport r = run_trial(s);
  EXPECT_EQ(r.total_direct, 0.0);
  EXPECT_EQ(r.total_msa, 0.0);
  EXPECT_EQ(r.improvement_pct, 0.0);
}

TEST(Generator, OptionalPolicies) {
  GeneratorParams p;
  p.deadline_factor = 1.5;
  p.capacity = 3;
  p.random_capacity = true;
  p.heterogeneous = true;
  p.n_vehicles = 40;
  const Scenario s = generate_scenario(p, 9);
  s.validate();
  for (const auto& t : s.tasks) EXPECT_DOUBLE_EQ(t.deadline, 1.5 * t.x / t.u);
  bool varied = false;
  for (const auto& o : s.offers) {
    EXPECT_GE(o.capacity, 1);
    EXPECT_LE(o.capacity, 3);
    EXPECT_GE(o.v, 20.0);
    EXPECT_LE(o.v, 80.0);
    EXPECT_GE(o.gamma, 0.0);
    EXPECT_LE(o.gamma, 0.5);
    varied = varied || o.capacity != s.offers[0].capacity;
  }
  EXPECT_TRUE(varied);
}

TEST(Generator, RejectsBadRanges) {
  GeneratorParams p;
  p.theta_max = 4.0;
  EXPECT_THROW(generate_scenario(p, 1), DomainError);
  p = GeneratorParams{};
  p.x_max = 0.0;
  EXPECT_THROW(generate_scenario(p, 1), DomainError);
  p = GeneratorParams{};
  p.theta_min = 1.0;
  p.theta_max = 0.5;
  EXPECT_THROW(generate_scenario(p, 1), DomainError);
  p = GeneratorParams{};
  p.deadline_factor = 0.5;
  EXPECT_THROW(generate_scenario(p, 1), DomainError);
}

TEST(TrialSeed, DependsOnAllInputs) {
  const auto a = derive_trial_seed(7, 10, 0);
  EXPECT_EQ(a, derive_trial_seed(7, 10, 0));
  EXPECT_NE(a, derive_trial_seed(8, 10, 0));
  EXPECT_NE(a, derive_trial_seed(7, 11, 0));
  EXPECT_NE(a, derive_trial_seed(7, 10, 1));
}

TEST(Trial, IneligibleVehiclesFlyDirect) {
  GeneratorParams p;
  p.n_uavs = 4;
  p.n_vehicles = 3;
  p.theta_min = 2.5;
  p.theta_max = kPi;
  p.gamma = 0.0;
  const TrialReport r = run_trial(generate_scenario(p, 3));
  EXPECT_EQ(r.total_msa, r.total_direct);
  EXPECT_EQ(r.total_greedy, r.total_direct);
  EXPECT_EQ(r.saving_msa, 0.0);
}

TEST(Trial, SingleEligiblePair) {
  Scenario s;
  s.tasks.resize(1);
  s.tasks[0].x = 5;
  s.tasks[0].u = 60;
  s.offers = {{40, 0.3, 1}};
  s.geoms = {{{0.5}}};
  const TrialReport r = run_trial(s);
  const HitchPlan plan = optimal_distance(s.config, s.tasks[0], s.offers[0], s.geoms[0][0]);
  EXPECT_DOUBLE_EQ(r.total_direct, 5.0 / 60);
  EXPECT_NEAR(r.total_msa, 5.0 / 60 - plan.saving, 1e-15);
  EXPECT_NEAR(r.saving_msa, plan.saving, 1e-15);
}

TEST(Trial, OrderingOnEveryTrial) {
  for (auto params : {GeneratorParams::case1(), GeneratorParams::case2()}) {
    params.n_uavs = 20;
    params.n_vehicles = 20;
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      const TrialReport r = run_trial(generate_scenario(params, seed));
      EXPECT_LE(r.total_msa, r.total_greedy + 1e-9);
      EXPECT_LE(r.total_greedy, r.total_direct + 1e-9);
      EXPECT_GE(r.improvement_pct, 0.0);
      EXPECT_NEAR(r.total_direct - r.total_msa, r.saving_msa, 1e-9);
    }
  }
}

TEST(Trial, LimitedBatteryNeverBeatsUnlimited) {
  GeneratorParams p = GeneratorParams::case2();
  p.n_uavs = 10;
  p.n_vehicles = 10;
  Scenario s = generate_scenario(p, 4);
  for (auto& t : s.tasks) {
    t.battery_capacity = 1.0;
    t.battery_level = 0.995;
  }
  const TrialReport open = run_trial(s, false);
  const TrialReport capped = run_trial(s, true);
  EXPECT_LE(capped.saving_msa, open.saving_msa + 1e-12);
  EXPECT_LE(capped.total_msa, capped.total_direct + 1e-12);
}

TEST(Experiment, SingleTrialAggregatesToItself) {
  GeneratorParams p = GeneratorParams::case1();
  p.n_vehicles = 8;
  ExperimentOptions o;
  o.n_trials = 1;
  o.uav_counts = {6};
  o.master_seed = 21;
  const ExperimentResult r = run_experiment(p, o);
  ASSERT_EQ(r.rows.size(), 1u);
  const TrialReport& t = r.trials[0][0];
  const ExperimentRow& row = r.rows[0];
  EXPECT_EQ(row.mean_direct, t.total_direct);
  EXPECT_EQ(row.mean_msa, t.total_msa);
  EXPECT_EQ(row.mean_greedy, t.total_greedy);
  EXPECT_EQ(row.std_msa, 0.0);
  EXPECT_EQ(row.mean_iterations, static_cast<double>(t.iterations));
}

TEST(Experiment, DirectBaselineIsLinear) {
  GeneratorParams p = GeneratorParams::case1();
  p.n_vehicles = 10;
  ExperimentOptions o;
  o.n_trials = 100;
  o.uav_counts = {10, 20, 40};
  o.master_seed = 3;
  o.threads = 4;
  const ExperimentResult r = run_experiment(p, o);
  for (const auto& row : r.rows) {
    const double expected = row.uav_count * (p.x_max / 2) / p.u;
    EXPECT_NEAR(row.mean_direct, expected, 0.05 * expected);
  }
}

TEST(Experiment, NarrowAnglesSaveMore) {
  ExperimentOptions o;
  o.n_trials = 100;
  o.uav_counts = {5, 20, 40};
  o.master_seed = 11;
  o.threads = 4;
  GeneratorParams c1 = GeneratorParams::case1();
  GeneratorParams c2 = GeneratorParams::case2();
  c1.n_vehicles = c2.n_vehicles = 40;
  const ExperimentResult r1 = run_experiment(c1, o);
  const ExperimentResult r2 = run_experiment(c2, o);
  for (std::size_t k = 0; k < o.uav_counts.size(); ++k) {
    EXPECT_GE(r2.rows[k].mean_saving_msa, r1.rows[k].mean_saving_msa);
  }
}

TEST(Experiment, ThreadCountDoesNotChangeResults) {
  GeneratorParams p = GeneratorParams::case2();
  p.n_vehicles = 15;
  ExperimentOptions o;
  o.n_trials = 30;
  o.uav_counts = {5, 15};
  o.master_seed = 77;
  const ExperimentResult serial = run_experiment(p, o);
  o.threads = 7;
  const ExperimentResult parallel = run_experiment(p, o);
  for (std::size_t k = 0; k < o.uav_counts.size(); ++k) {
    for (std::size_t t = 0; t < o.n_trials; ++t) {
      expect_same_report(serial.trials[k][t], parallel.trials[k][t]);
    }
    EXPECT_EQ(serial.rows[k].mean_msa, parallel.rows[k].mean_msa);
    EXPECT_EQ(serial.rows[k].std_msa, parallel.rows[k].std_msa);
  }
}

TEST(Experiment, TrialsIndependentOfPopulationList) {
  GeneratorParams p = GeneratorParams::case1();
  p.n_vehicles = 10;
  ExperimentOptions a;
  a.n_trials = 5;
  a.uav_counts = {8};
  a.master_seed = 2;
  ExperimentOptions b = a;
  b.uav_counts = {3, 8};
  const ExperimentResult ra = run_experiment(p, a);
  const ExperimentResult rb = run_experiment(p, b);
  for (std::size_t t = 0; t < 5; ++t) expect_same_report(ra.trials[0][t], rb.trials[1][t]);
}

TEST(Experiment, RejectsZeroTrials) {
  ExperimentOptions o;
  o.n_trials = 0;
  o.uav_counts = {1};
  EXPECT_THROW(run_experiment(GeneratorParams{}, o), DomainError);
}

TEST(Homogeneity, ScalingDistances) {
  GeneratorParams p = GeneratorParams::case2();
  p.n_uavs = 12;
  p.n_vehicles = 12;
  const Scenario s = generate_scenario(p, 8);
  for (double lambda : {0.5, 2.0, 4.0}) {
    Scenario scaled = s;
    for (auto& t : scaled.tasks) t.x *= lambda;
    const TrialReport a = run_trial(s);
    const TrialReport b = run_trial(scaled);
    EXPECT_EQ(b.total_direct, lambda * a.total_direct);
    for (std::size_t i = 0; i < s.tasks.size(); ++i) {
      std::vector<VehicleChoice> choices;
      for (std::size_t j = 0; j < s.offers.size(); ++j) {
        choices.push_back({s.offers[j], s.geoms[i][j]});
        const HitchPlan pa = optimal_distance(s.config, s.tasks[i], s.offers[j], s.geoms[i][j]);
        const HitchPlan pb = optimal_distance(s.config, scaled.tasks[i], s.offers[j], s.geoms[i][j]);
        if (pa.binding == Binding::Interior) {
          EXPECT_EQ(pb.binding, Binding::Interior);
          EXPECT_NEAR(pb.consumption, lambda * pa.consumption, 1e-15 * lambda);
        }
      }
      EXPECT_EQ(select_vehicle(s.config, s.tasks[i], choices).first,
                select_vehicle(s.config, scaled.tasks[i], choices).first);
    }
  }
}

TEST(Sweep, SpeedCurveCrossesBaselineAtTwelve) {
  const SweepTable t = sweep_curves(SweepSpec::defaults(SweepKind::SpeedVsConsumption));
  EXPECT_EQ(t.header, (std::vector<std::string>{"v", "value"}));
  ASSERT_EQ(t.rows.size(), 77u);
  const double base = 5.0 / 60;
  for (const auto& row : t.rows) {
    if (row[0] <= 12.0) {
      EXPECT_EQ(row[1], base) << "v=" << row[0];
    } else {
      EXPECT_LT(row[1], base) << "v=" << row[0];
    }
  }
}

TEST(Sweep, ZeroGammaMatchesHitchingOnly) {
  const SweepSpec spec = SweepSpec::defaults(SweepKind::GammaVsConsumption);
  const SweepTable t = sweep_curves(spec);
  EXPECT_EQ(t.rows.front()[0], 0.0);
  PlannerConfig cfg;
  cfg.omega = spec.omega;
  UavTask task;
  task.x = spec.x;
  task.u = spec.u;
  EXPECT_EQ(t.rows.front()[1], optimal_distance_ho(cfg, task, {spec.v, 0}, {spec.theta}).consumption);
}

TEST(Sweep, SurfaceZeroGammaStrictlyDecreasing) {
  const SweepTable t = sweep_curves(SweepSpec::defaults(SweepKind::SpeedGammaSurface));
  double prev = std::numeric_limits<double>::infinity();
  int seen = 0;
  for (const auto& row : t.rows) {
    if (row[1] != 0.0) continue;
    EXPECT_LT(row[2], prev) << "v=" << row[0];
    prev = row[2];
    ++seen;
  }
  EXPECT_EQ(seen, 61);
}

TEST(Sweep, SurfaceHasInteriorMinimisingSpeed) {
  const SweepSpec spec = SweepSpec::defaults(SweepKind::SpeedGammaSurface);
  const SweepTable t = sweep_curves(spec);
  const std::size_t n_gamma = spec.axis2->count;
  int interior = 0;
  for (std::size_t g = 0; g < n_gamma; ++g) {
    std::size_t best = 0;
    for (std::size_t v = 0; v < spec.axis1.count; ++v) {
      if (t.rows[v * n_gamma + g][2] < t.rows[best * n_gamma + g][2]) best = v;
    }
    if (best > 0 && best + 1 < spec.axis1.count) ++interior;
  }
  EXPECT_GT(interior, 0);
}

TEST(Sweep, SurfaceCellsMatchDirectEvaluation) {
  const SweepSpec spec = SweepSpec::defaults(SweepKind::SpeedGammaSurface);
  const SweepTable t = sweep_curves(spec);
  UavTask task;
  task.x = spec.x;
  task.u = spec.u;
  task.deadline = spec.deadline;
  std::mt19937_64 rng(10);
  std::uniform_int_distribution<std::size_t> pick(0, t.rows.size() - 1);
  for (int k = 0; k < 10; ++k) {
    const auto& row = t.rows[pick(rng)];
    const VehicleOffer o{row[0], row[1]};
    const PairGeometry g{spec.theta};
    auto f = [&](double y) {
      if (oracle::time(task, o, g, y) > task.deadline) return 1e300;
      return oracle::cost(spec.omega, task, o, g, y, false);
    };
    const auto best = oracle::minimize(f, 0.0, std::max(3 * task.x, oracle::inverse_time(task, o, g)));
    EXPECT_NEAR(row[2], best.value, 1e-6 * std::max(std::abs(best.value), task.x / task.u)) << "v=" << row[0] << " gamma=" << row[1];
  }
}

TEST(Sweep, BatteryRegimes) {
  const SweepSpec spec = SweepSpec::defaults(SweepKind::BatteryRegimes);
  const SweepTable t = sweep_curves(spec);
  ASSERT_EQ(t.rows.size(), 26u * 21u);
  PlannerConfig cfg;
  bool saw_cap = false, saw_ho = false, saw_full = false;
  for (const auto& row : t.rows) {
    UavTask task;
    task.x = spec.x;
    task.u = spec.u;
    task.deadline = row[1];
    const double y_ho = optimal_distance_ho(cfg, task, {spec.v, 0}, {spec.theta}).y_star;
    const double y_full = optimal_distance(cfg, task, {spec.v, spec.gamma}, {spec.theta}).y_star;
    const double y_cap = row[0] * spec.v / spec.gamma;
    const double expected = y_cap <= y_ho ? y_ho : std::min(y_cap, y_full);
    EXPECT_NEAR(row[2], expected, 1e-12);
    saw_ho = saw_ho || (row[0] == 0.0 && row[2] == y_ho);
    saw_cap = saw_cap || (y_cap > y_ho && y_cap < y_full);
    saw_full = saw_full || y_cap >= y_full;
  }
  EXPECT_TRUE(saw_ho);
  EXPECT_TRUE(saw_cap);
  EXPECT_TRUE(saw_full);
}

TEST(Sweep, AxisValues) {
  EXPECT_EQ((Axis{1.0, 1.0, 1}.values()), std::vector<double>{1.0});
  const auto v = Axis{0.0, 1.0, 5}.values();
  ASSERT_EQ(v.size(), 5u);
  EXPECT_EQ(v.front(), 0.0);
  EXPECT_EQ(v.back(), 1.0);
  EXPECT_EQ(v[2], 0.5);
}
