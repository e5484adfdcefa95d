#include "hitch/matching.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>
#include <tuple>

namespace hitch {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
constexpr double kInf = std::numeric_limits<double>::infinity();

MatchResult make_result(const SavingMatrix& m, const std::vector<std::size_t>& row_to_col) {
  MatchResult out;
  out.assignment.assign(m.n_uavs, std::nullopt);
  out.columns.assign(m.n_uavs, std::nullopt);
  for (std::size_t i = 0; i < m.n_uavs; ++i) {
    const std::size_t col = row_to_col[i];
    if (col == kNone) continue;
    MatchedPair pair;
    pair.uav = i;
    pair.column = col;
    pair.vehicle = m.column_origin[col];
    pair.weight = m.weight(i, col);
    if (!m.plans.empty()) pair.plan = m.plan(i, col);
    out.assignment[i] = pair.vehicle;
    out.columns[i] = col;
    out.total_saving += pair.weight;
    out.per_pair.push_back(std::move(pair));
  }
  return out;
}

}  // namespace

std::size_t SavingMatrix::n_vehicles() const {
  if (column_origin.empty()) return 0;
  return *std::max_element(column_origin.begin(), column_origin.end()) + 1;
}

SavingMatrix SavingMatrix::from_weights(std::size_t n_uavs, std::size_t n_vehicles,
                                        std::span<const double> weights,
                                        std::span<const int> capacities) {
  if (weights.size() != n_uavs * n_vehicles) {
    throw DomainError("SavingMatrix: expected " + std::to_string(n_uavs * n_vehicles) +
                      " weights, got " + std::to_string(weights.size()));
  }
  if (!capacities.empty() && capacities.size() != n_vehicles) {
    throw DomainError("SavingMatrix: one capacity per vehicle required");
  }
  SavingMatrix m;
  m.n_uavs = n_uavs;
  for (std::size_t j = 0; j < n_vehicles; ++j) {
    const int z = capacities.empty() ? 1 : capacities[j];
    if (z < 1) throw DomainError("SavingMatrix: capacity must be >= 1");
    for (int k = 0; k < z; ++k) m.column_origin.push_back(j);
  }
  m.n_columns = m.column_origin.size();
  m.weights.resize(n_uavs * m.n_columns);
  m.plans.resize(n_uavs * m.n_columns);
  for (std::size_t i = 0; i < n_uavs; ++i) {
    for (std::size_t c = 0; c < m.n_columns; ++c) {
      m.weights[i * m.n_columns + c] = std::max(0.0, weights[i * n_vehicles + m.column_origin[c]]);
    }
  }
  return m;
}

SavingMatrix build_saving_matrix(const PlannerConfig& cfg, std::span<const UavTask> tasks,
                                 std::span<const VehicleOffer> offers,
                                 const std::vector<std::vector<PairGeometry>>& geoms,
                                 bool limited) {
  if (geoms.size() != tasks.size()) {
    throw DomainError("build_saving_matrix: geometry has " + std::to_string(geoms.size()) +
                      " rows for " + std::to_string(tasks.size()) + " UAVs");
  }
  for (const auto& row : geoms) {
    if (row.size() != offers.size()) {
      throw DomainError("build_saving_matrix: geometry row length does not match vehicle count");
    }
  }

  SavingMatrix m;
  m.n_uavs = tasks.size();
  for (std::size_t j = 0; j < offers.size(); ++j) {
    offers[j].validate();
    for (int k = 0; k < offers[j].capacity; ++k) m.column_origin.push_back(j);
  }
  m.n_columns = m.column_origin.size();
  m.weights.resize(m.n_uavs * m.n_columns);
  m.plans.resize(m.n_uavs * m.n_columns);

  std::vector<HitchPlan> row(offers.size());
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    for (std::size_t j = 0; j < offers.size(); ++j) {
      row[j] = plan_pair(cfg, tasks[i], offers[j], geoms[i][j], limited);
    }
    for (std::size_t c = 0; c < m.n_columns; ++c) {
      const HitchPlan& plan = row[m.column_origin[c]];
      m.plans[i * m.n_columns + c] = plan;
      m.weights[i * m.n_columns + c] = plan.binding == Binding::NoHitch ? 0.0 : std::max(0.0, plan.saving);
    }
  }
  return m;
}

MsaOutcome msa_solve(const SavingMatrix& m, double tol) {
  const std::size_t n_rows = m.n_uavs;
  const std::size_t n_cols = m.n_columns;

  MsaOutcome out;
  DualState& dual = out.duals;
  dual.p.assign(n_rows, 0.0);
  dual.q.assign(n_cols, 0.0);

  double max_weight = 0.0;
  for (std::size_t i = 0; i < n_rows; ++i) {
    for (std::size_t j = 0; j < n_cols; ++j) {
      dual.p[i] = std::max(dual.p[i], m.weight(i, j));
    }
    max_weight = std::max(max_weight, dual.p[i]);
  }
  const double tight = 1e-12 * (1.0 + max_weight);
  // Edges at or below tol never enter the matching.
  auto usable = [&](std::size_t i, std::size_t j) { return m.weight(i, j) > tol; };

  std::vector<std::size_t> row_to_col(n_rows, kNone);
  std::vector<std::size_t> col_to_row(n_cols, kNone);

  std::vector<char> in_rows(n_rows);
  std::vector<char> in_cols(n_cols);
  std::vector<double> slack(n_cols);
  std::vector<std::size_t> slack_from(n_cols);
  std::vector<std::size_t> parent(n_cols);
  std::vector<std::size_t> tree_rows;
  std::vector<std::size_t> tree_cols;

  auto relax = [&](std::size_t i) {
    for (std::size_t j = 0; j < n_cols; ++j) {
      if (in_cols[j] || !usable(i, j)) continue;
      const double s = dual.p[i] + dual.q[j] - m.weight(i, j);
      if (s < slack[j]) {
        slack[j] = s;
        slack_from[j] = i;
      }
    }
  };

  // Flip the alternating path ending at column `col` back to `root`.
  auto augment = [&](std::size_t col, std::size_t root) {
    for (;;) {
      const std::size_t i = parent[col];
      const std::size_t next = row_to_col[i];
      row_to_col[i] = col;
      col_to_row[col] = i;
      if (i == root) break;
      col = next;
    }
  };

  for (std::size_t root = 0; root < n_rows; ++root) {
    if (dual.p[root] <= tight) {
      dual.p[root] = 0.0;
      continue;
    }
    ++dual.phases;
    std::fill(in_rows.begin(), in_rows.end(), 0);
    std::fill(in_cols.begin(), in_cols.end(), 0);
    std::fill(slack.begin(), slack.end(), kInf);
    tree_rows.assign(1, root);
    tree_cols.clear();
    in_rows[root] = 1;
    relax(root);

    for (;;) {
      std::size_t best_col = kNone;
      double best_slack = kInf;
      for (std::size_t j = 0; j < n_cols; ++j) {
        if (!in_cols[j] && slack[j] < best_slack) {
          best_slack = slack[j];
          best_col = j;
        }
      }

      if (best_col != kNone && best_slack <= tight) {
        in_cols[best_col] = 1;
        tree_cols.push_back(best_col);
        parent[best_col] = slack_from[best_col];
        const std::size_t owner = col_to_row[best_col];
        if (owner == kNone) {
          augment(best_col, root);
          break;
        }
        in_rows[owner] = 1;
        tree_rows.push_back(owner);
        relax(owner);
        continue;
      }

      std::size_t low_row = root;
      double low_p = kInf;
      for (std::size_t i : tree_rows) {
        if (dual.p[i] < low_p) {
          low_p = dual.p[i];
          low_row = i;
        }
      }

      const double eps = std::min(low_p, best_slack);
      for (std::size_t i : tree_rows) dual.p[i] -= eps;
      for (std::size_t j : tree_cols) dual.q[j] += eps;
      for (std::size_t j = 0; j < n_cols; ++j) {
        if (!in_cols[j] && slack[j] != kInf) slack[j] -= eps;
      }
      ++dual.iterations;
      dual.epsilon = eps;

      if (low_p <= best_slack) {
        // A UAV potential reached zero: it may stay unmatched.
        dual.p[low_row] = 0.0;
        if (low_row != root) {
          const std::size_t freed = row_to_col[low_row];
          row_to_col[low_row] = kNone;
          col_to_row[freed] = kNone;
          augment(freed, root);
        }
        break;
      }
      slack[best_col] = 0.0;
    }
    dual.reachable_uavs = tree_rows;
    dual.reachable_vehicles = tree_cols;
  }

  out.result = make_result(m, row_to_col);
  return out;
}

MatchResult brute_force_match(const SavingMatrix& m, double tol) {
  const std::size_t n_vehicles = m.n_vehicles();
  if (m.n_uavs > kBruteForceLimit || n_vehicles > kBruteForceLimit) {
    throw SizeGuardExceeded("brute_force_match: instance with " + std::to_string(m.n_uavs) +
                            " UAVs and " + std::to_string(n_vehicles) + " vehicles exceeds the " +
                            std::to_string(kBruteForceLimit) + "x" +
                            std::to_string(kBruteForceLimit) + " guard");
  }
  // Duplicated columns are interchangeable, so enumerate vehicles and hand
  // out their slots in column order.
  std::vector<std::vector<std::size_t>> slots(n_vehicles);
  for (std::size_t j = 0; j < m.n_columns; ++j) slots[m.column_origin[j]].push_back(j);
  std::vector<std::size_t> taken(n_vehicles, 0);
  std::vector<std::size_t> current(m.n_uavs, kNone);
  std::vector<std::size_t> best = current;
  double best_total = 0.0;

  auto search = [&](auto&& self, std::size_t i, double total) -> void {
    if (i == m.n_uavs) {
      if (total > best_total) {
        best_total = total;
        best = current;
      }
      return;
    }
    self(self, i + 1, total);
    for (std::size_t k = 0; k < n_vehicles; ++k) {
      if (taken[k] == slots[k].size()) continue;
      const std::size_t j = slots[k][taken[k]];
      if (!(m.weight(i, j) > tol)) continue;
      ++taken[k];
      current[i] = j;
      self(self, i + 1, total + m.weight(i, j));
      current[i] = kNone;
      --taken[k];
    }
  };
  search(search, 0, 0.0);
  return make_result(m, best);
}

MatchResult greedy_match(const SavingMatrix& m, double tol) {
  std::vector<std::tuple<double, std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i < m.n_uavs; ++i) {
    for (std::size_t j = 0; j < m.n_columns; ++j) {
      if (m.weight(i, j) > tol) edges.emplace_back(m.weight(i, j), i, j);
    }
  }
  std::sort(edges.begin(), edges.end(), [](const auto& a, const auto& b) {
    if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) > std::get<0>(b);
    if (std::get<1>(a) != std::get<1>(b)) return std::get<1>(a) < std::get<1>(b);
    return std::get<2>(a) < std::get<2>(b);
  });

  std::vector<std::size_t> row_to_col(m.n_uavs, kNone);
  std::vector<char> col_used(m.n_columns, 0);
  for (const auto& [w, i, j] : edges) {
    if (row_to_col[i] != kNone || col_used[j]) continue;
    row_to_col[i] = j;
    col_used[j] = 1;
  }
  return make_result(m, row_to_col);
}

bool verify_duals(const SavingMatrix& m, const MatchResult& result, const DualState& duals,
                  double tol) {
  if (duals.p.size() != m.n_uavs || duals.q.size() != m.n_columns) return false;
  if (result.columns.size() != m.n_uavs) return false;

  for (double p : duals.p) {
    if (p < -tol) return false;
  }
  for (double q : duals.q) {
    if (q < -tol) return false;
  }
  for (std::size_t i = 0; i < m.n_uavs; ++i) {
    for (std::size_t j = 0; j < m.n_columns; ++j) {
      if (duals.p[i] + duals.q[j] < m.weight(i, j) - tol) return false;
    }
  }

  std::vector<char> col_matched(m.n_columns, 0);
  double total = 0.0;
  for (std::size_t i = 0; i < m.n_uavs; ++i) {
    const auto& col = result.columns[i];
    if (!col) {
      if (duals.p[i] > tol) return false;
      continue;
    }
    if (*col >= m.n_columns || col_matched[*col]) return false;
    col_matched[*col] = 1;
    const double w = m.weight(i, *col);
    if (std::abs(duals.p[i] + duals.q[*col] - w) > tol) return false;
    total += w;
  }
  for (std::size_t j = 0; j < m.n_columns; ++j) {
    if (!col_matched[j] && duals.q[j] > tol) return false;
  }
  return std::abs(total - result.total_saving) <= tol * (1.0 + std::abs(total));
}

}  // namespace hitch
