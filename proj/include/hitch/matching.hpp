#pragma once

// Stage-two assignment of UAVs to vehicles: maximise the total consumption
// saving sum_ij w_ij b_ij with every UAV on at most one vehicle and vehicle j
// carrying at most z_j UAVs.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "hitch/core.hpp"

namespace hitch {

// Savings w_ij = C_i0 - C*_ij over expanded columns: a vehicle with capacity
// z occupies z identical columns.
struct SavingMatrix {
  std::size_t n_uavs = 0;
  std::size_t n_columns = 0;
  std::vector<double> weights;               // row-major, n_uavs x n_columns
  std::vector<HitchPlan> plans;              // same layout as weights
  std::vector<std::size_t> column_origin;    // expanded column -> vehicle index

  double weight(std::size_t uav, std::size_t column) const {
    return weights[uav * n_columns + column];
  }
  const HitchPlan& plan(std::size_t uav, std::size_t column) const {
    return plans[uav * n_columns + column];
  }
  std::size_t n_vehicles() const;

  // Matrix straight from savings, one column per entry of `capacities`
  // (default: every vehicle carries one UAV). Negative weights are clamped.
  static SavingMatrix from_weights(std::size_t n_uavs, std::size_t n_vehicles,
                                   std::span<const double> weights,
                                   std::span<const int> capacities = {});
};

// geoms[i][j] describes UAV i relative to vehicle j.
SavingMatrix build_saving_matrix(const PlannerConfig& cfg, std::span<const UavTask> tasks,
                                 std::span<const VehicleOffer> offers,
                                 const std::vector<std::vector<PairGeometry>>& geoms,
                                 bool limited);

struct MatchedPair {
  std::size_t uav = 0;
  std::size_t vehicle = 0;
  std::size_t column = 0;
  double weight = 0.0;
  HitchPlan plan;
};

struct MatchResult {
  std::vector<std::optional<std::size_t>> assignment;  // UAV -> vehicle
  std::vector<std::optional<std::size_t>> columns;     // UAV -> expanded column
  double total_saving = 0.0;
  std::vector<MatchedPair> per_pair;
};

// Final dual potentials of the primal-dual solver.
struct DualState {
  std::vector<double> p;  // per UAV
  std::vector<double> q;  // per expanded column
  std::vector<std::size_t> reachable_uavs;
  std::vector<std::size_t> reachable_vehicles;
  double epsilon = 0.0;   // last dual adjustment
  std::size_t iterations = 0;  // dual adjustments performed
  std::size_t phases = 0;      // roots processed
};

struct MsaOutcome {
  MatchResult result;
  DualState duals;
};

// Max-Saving primal-dual matching.
MsaOutcome msa_solve(const SavingMatrix& m, double tol = 1e-9);
inline MatchResult msa_match(const SavingMatrix& m, double tol = 1e-9) {
  return msa_solve(m, tol).result;
}

inline constexpr std::size_t kBruteForceLimit = 8;

// Exhaustive search; throws SizeGuardExceeded past 8 UAVs or 8 vehicles.
MatchResult brute_force_match(const SavingMatrix& m, double tol = 1e-9);

// Largest remaining weight first.
MatchResult greedy_match(const SavingMatrix& m, double tol = 1e-9);

// Dual feasibility, tight matched edges and complementary slackness.
bool verify_duals(const SavingMatrix& m, const MatchResult& result, const DualState& duals,
                  double tol = 1e-9);

}  // namespace hitch
