#pragma once

// Single UAV / single vehicle hitching model.
//
// Units: distances in km, speeds in km/h, times in hours. Energy is measured
// in flight-hour equivalents: the UAV burns one unit per hour of flight, and a
// vehicle with charging rate gamma restores gamma units per hour of riding.

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string_view>
#include <utility>

#include "hitch/errors.hpp"

namespace hitch {

inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

struct UavTask {
  double x = 0.0;                     // distance to destination
  double u = 0.0;                     // flight speed
  double deadline = kUnbounded;       // max total travel time D
  double battery_capacity = kUnbounded;  // e_full
  double battery_level = 0.0;            // e_i

  bool has_deadline() const { return deadline != kUnbounded; }
  bool has_finite_battery() const { return battery_capacity != kUnbounded; }
  double direct_time() const { return x / u; }

  // Throws DomainError naming the violated invariant.
  void validate() const;
};

struct VehicleOffer {
  double v = 0.0;      // ground speed
  double gamma = 0.0;  // charging rate; 0 = hitching only, kUnbounded = battery swap
  int capacity = 1;    // UAVs carried at once

  bool hitching_only() const { return gamma == 0.0; }
  bool battery_swap() const { return gamma == kUnbounded; }

  void validate() const;
};

struct PairGeometry {
  double theta = 0.0;  // deviation of the vehicle's heading from the destination bearing

  void validate() const;
};

struct PlannerConfig {
  double omega = 0.8;  // weight on energy vs. travel time
  double tol = 1e-9;

  void validate() const;
};

enum class EligibilityReason { Eligible, SpeedTooLow, ChargeTooLow, AngleTooWide };

struct Eligibility {
  bool eligible = false;
  std::optional<double> threshold_angle;
  EligibilityReason reason = EligibilityReason::SpeedTooLow;
};

enum class Binding { Interior, Deadline, BatteryFull, NoHitch };

struct HitchPlan {
  double y_star = 0.0;
  double total_time = 0.0;
  double energy = 0.0;
  double consumption = 0.0;
  double saving = 0.0;
  Binding binding = Binding::NoHitch;
  Eligibility eligibility;
  // Battery-swap vehicles only: the UAV takes a fresh battery and leaves at once.
  bool swap_and_depart = false;
};

std::string_view to_string(EligibilityReason reason);
std::string_view to_string(Binding binding);

// Straight-line distance from the drop-off point y km along the vehicle ray to
// the destination.
double flight_leg(const UavTask& task, const PairGeometry& geom, double y);

double travel_time(const UavTask& task, const VehicleOffer& offer, const PairGeometry& geom,
                   double y);

// Unbounded-battery energy: flight term minus (gamma / v) * y.
double energy(const UavTask& task, const VehicleOffer& offer, const PairGeometry& geom, double y);

// Charging is capped at e_full - e_i.
double energy_limited(const UavTask& task, const VehicleOffer& offer, const PairGeometry& geom,
                      double y);

// omega * E + (1 - omega) * T, with E from energy() or energy_limited().
double consumption(const PlannerConfig& cfg, const UavTask& task, const VehicleOffer& offer,
                   const PairGeometry& geom, double y, bool limited);

// Direct-flight consumption C_i0 = x / u.
inline double baseline_consumption(const UavTask& task) { return task.direct_time(); }

// Hitching-only vehicles slower than this never help: (1 - omega) * u.
double speed_threshold(const PlannerConfig& cfg, const UavTask& task);

Eligibility eligibility_ho(const PlannerConfig& cfg, const UavTask& task,
                           const VehicleOffer& offer, const PairGeometry& geom);

Eligibility eligibility(const PlannerConfig& cfg, const UavTask& task, const VehicleOffer& offer,
                        const PairGeometry& geom);

// Largest y >= 0 with travel_time(y) <= deadline.
double max_hitch_distance(const UavTask& task, const VehicleOffer& offer,
                          const PairGeometry& geom);

HitchPlan optimal_distance_ho(const PlannerConfig& cfg, const UavTask& task,
                              const VehicleOffer& offer, const PairGeometry& geom);

HitchPlan optimal_distance(const PlannerConfig& cfg, const UavTask& task,
                           const VehicleOffer& offer, const PairGeometry& geom);

HitchPlan optimal_distance_limited(const PlannerConfig& cfg, const UavTask& task,
                                   const VehicleOffer& offer, const PairGeometry& geom);

HitchPlan battery_swap_plan(const PlannerConfig& cfg, const UavTask& task,
                            const VehicleOffer& offer, const PairGeometry& geom);

// Picks the right planner for the offer: battery swap for infinite gamma,
// otherwise the limited-battery planner when `limited` is set and the UAV has
// a finite battery, otherwise the unbounded-battery planner.
HitchPlan plan_pair(const PlannerConfig& cfg, const UavTask& task, const VehicleOffer& offer,
                    const PairGeometry& geom, bool limited);

struct VehicleChoice {
  VehicleOffer offer;
  PairGeometry geom;
};

// Argmin of consumption over the offers; ties go to the lowest index.
std::pair<std::size_t, HitchPlan> select_vehicle(const PlannerConfig& cfg, const UavTask& task,
                                                 std::span<const VehicleChoice> offers,
                                                 bool limited = true);

}  // namespace hitch
