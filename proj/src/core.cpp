#include "hitch/core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace hitch {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt_value(double v) { return std::to_string(v); }

void require_distance(double y) {
  if (!(y >= 0.0) || !std::isfinite(y)) {
    throw DomainError("hitch distance must be finite and >= 0, got " + fmt_value(y));
  }
}

// cos(phi) of the eligibility threshold: (1 - (1 + gamma) * omega) * u / v.
// Written as (u - omega*u*(1+gamma)) so that gamma = 0, omega = 0.8, u = 60
// yields the speed threshold 12 exactly.
double threshold_cosine(const PlannerConfig& cfg, const UavTask& task, const VehicleOffer& offer) {
  const double scaled = task.u - cfg.omega * (1.0 + offer.gamma) * task.u;
  return scaled / offer.v;
}

struct Threshold {
  Eligibility eligibility;
  double cos_phi = 1.0;
  bool full_circle = false;  // phi == pi: every direction pays off
};

Threshold classify(const PlannerConfig& cfg, const UavTask& task, const VehicleOffer& offer,
                   const PairGeometry& geom) {
  Threshold out;
  const double og = cfg.omega * offer.gamma;
  const double vu = offer.v / task.u;
  if (offer.hitching_only()) {
    if (offer.v <= (task.u - cfg.omega * task.u) * (1.0 + cfg.tol)) {
      out.eligibility = {false, std::nullopt, EligibilityReason::SpeedTooLow};
      return out;
    }
  } else if (og <= 1.0 - cfg.omega - vu + cfg.tol) {
    out.eligibility = {false, std::nullopt, EligibilityReason::ChargeTooLow};
    return out;
  }

  double phi = kPi;
  if (!offer.hitching_only() && og >= 1.0 - cfg.omega + vu) {
    out.full_circle = true;
    out.cos_phi = -1.0;
  } else {
    out.cos_phi = std::clamp(threshold_cosine(cfg, task, offer), -1.0, 1.0);
    phi = std::acos(out.cos_phi);
  }

  const bool inside = out.full_circle || geom.theta < phi - cfg.tol;
  out.eligibility = {inside, phi,
                     inside ? EligibilityReason::Eligible : EligibilityReason::AngleTooWide};
  return out;
}

// Stationary point of the consumption along the ray:
// x cos(theta) - x sin(theta) cot(phi).
double interior_distance(const UavTask& task, const PairGeometry& geom, double cos_phi) {
  const double sin_phi = std::sqrt((1.0 - cos_phi) * (1.0 + cos_phi));
  return task.x * (std::cos(geom.theta) - std::sin(geom.theta) * cos_phi / sin_phi);
}

HitchPlan no_hitch(const UavTask& task, const Eligibility& el) {
  HitchPlan plan;
  const double base = baseline_consumption(task);
  plan.y_star = 0.0;
  plan.total_time = base;
  plan.energy = base;
  plan.consumption = base;
  plan.saving = 0.0;
  plan.binding = Binding::NoHitch;
  plan.eligibility = el;
  return plan;
}

HitchPlan finalize(const PlannerConfig& cfg, const UavTask& task, const VehicleOffer& offer,
                   const PairGeometry& geom, double y, Binding binding, const Eligibility& el,
                   bool limited) {
  if (!(y > 0.0)) return no_hitch(task, el);
  HitchPlan plan;
  plan.y_star = y;
  plan.total_time = travel_time(task, offer, geom, y);
  plan.energy = limited ? energy_limited(task, offer, geom, y) : energy(task, offer, geom, y);
  plan.consumption = cfg.omega * plan.energy + (1.0 - cfg.omega) * plan.total_time;
  plan.saving = baseline_consumption(task) - plan.consumption;
  plan.binding = binding;
  plan.eligibility = el;
  // A capped ride can in principle lose to flying direct; never recommend it.
  if (plan.saving < 0.0) return no_hitch(task, el);
  return plan;
}

void validate_all(const PlannerConfig& cfg, const UavTask& task, const VehicleOffer& offer,
                  const PairGeometry& geom) {
  cfg.validate();
  task.validate();
  offer.validate();
  geom.validate();
}

VehicleOffer without_charging(VehicleOffer offer) {
  offer.gamma = 0.0;
  return offer;
}

}  // namespace

void UavTask::validate() const {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("UavTask: x must be finite and > 0");
  if (!(u > 0.0) || !std::isfinite(u)) throw DomainError("UavTask: u must be finite and > 0");
  if (!(deadline > 0.0)) throw DomainError("UavTask: deadline must be > 0 or unbounded");
  if (has_deadline() && deadline < x / u) {
    throw DomainError("UavTask: deadline must be >= x/u (direct flight must be feasible)");
  }
  if (!(battery_capacity > 0.0)) {
    throw DomainError("UavTask: battery_capacity must be > 0 or unbounded");
  }
  if (!(battery_level >= 0.0) || !std::isfinite(battery_level)) {
    throw DomainError("UavTask: battery_level must be finite and >= 0");
  }
  if (battery_level > battery_capacity) {
    throw DomainError("UavTask: battery_level must not exceed battery_capacity");
  }
}

void VehicleOffer::validate() const {
  if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("VehicleOffer: v must be finite and > 0");
  if (!(gamma >= 0.0)) throw DomainError("VehicleOffer: gamma must be >= 0");
  if (capacity < 1) throw DomainError("VehicleOffer: capacity must be >= 1");
}

void PairGeometry::validate() const {
  if (!(theta >= 0.0 && theta <= kPi)) {
    throw DomainError("PairGeometry: theta must lie in [0, pi], got " + fmt_value(theta));
  }
}

void PlannerConfig::validate() const {
  if (!(omega >= 0.0 && omega <= 1.0)) throw DomainError("PlannerConfig: omega must lie in [0, 1]");
  if (!(tol > 0.0)) throw DomainError("PlannerConfig: tol must be > 0");
}

std::string_view to_string(EligibilityReason reason) {
  switch (reason) {
    case EligibilityReason::Eligible: return "Eligible";
    case EligibilityReason::SpeedTooLow: return "SpeedTooLow";
    case EligibilityReason::ChargeTooLow: return "ChargeTooLow";
    case EligibilityReason::AngleTooWide: return "AngleTooWide";
  }
  return "?";
}

std::string_view to_string(Binding binding) {
  switch (binding) {
    case Binding::Interior: return "Interior";
    case Binding::Deadline: return "Deadline";
    case Binding::BatteryFull: return "BatteryFull";
    case Binding::NoHitch: return "NoHitch";
  }
  return "?";
}

double flight_leg(const UavTask& task, const PairGeometry& geom, double y) {
  // hypot keeps the theta = 0 case exact: |x - y|.
  return std::hypot(task.x - y * std::cos(geom.theta), y * std::sin(geom.theta));
}

double travel_time(const UavTask& task, const VehicleOffer& offer, const PairGeometry& geom,
                   double y) {
  require_distance(y);
  return y / offer.v + flight_leg(task, geom, y) / task.u;
}

double energy(const UavTask& task, const VehicleOffer& offer, const PairGeometry& geom, double y) {
  require_distance(y);
  return flight_leg(task, geom, y) / task.u - offer.gamma / offer.v * y;
}

double energy_limited(const UavTask& task, const VehicleOffer& offer, const PairGeometry& geom,
                      double y) {
  require_distance(y);
  const double headroom = task.battery_capacity - task.battery_level;
  const double charged = offer.gamma == 0.0 ? 0.0 : std::min(headroom, offer.gamma / offer.v * y);
  return flight_leg(task, geom, y) / task.u - charged;
}

double consumption(const PlannerConfig& cfg, const UavTask& task, const VehicleOffer& offer,
                   const PairGeometry& geom, double y, bool limited) {
  const double e = limited ? energy_limited(task, offer, geom, y) : energy(task, offer, geom, y);
  return cfg.omega * e + (1.0 - cfg.omega) * travel_time(task, offer, geom, y);
}

double speed_threshold(const PlannerConfig& cfg, const UavTask& task) {
  return task.u - cfg.omega * task.u;
}

Eligibility eligibility_ho(const PlannerConfig& cfg, const UavTask& task,
                           const VehicleOffer& offer, const PairGeometry& geom) {
  validate_all(cfg, task, offer, geom);
  if (!offer.hitching_only()) {
    throw ContractError("eligibility_ho requires a hitching-only vehicle (gamma = 0)");
  }
  return classify(cfg, task, offer, geom).eligibility;
}

Eligibility eligibility(const PlannerConfig& cfg, const UavTask& task, const VehicleOffer& offer,
                        const PairGeometry& geom) {
  if (offer.hitching_only()) return eligibility_ho(cfg, task, offer, geom);
  validate_all(cfg, task, offer, geom);
  if (offer.battery_swap()) return {true, kPi, EligibilityReason::Eligible};
  return classify(cfg, task, offer, geom).eligibility;
}

double max_hitch_distance(const UavTask& task, const VehicleOffer& offer,
                          const PairGeometry& geom) {
  if (!task.has_deadline()) {
    throw ContractError("max_hitch_distance requires a bounded deadline");
  }
  const double x = task.x;
  const double u = task.u;
  const double v = offer.v;
  const double d = task.deadline;
  const double c = std::cos(geom.theta);
  const double reach = v * d;  // riding longer than this alone breaks the deadline

  // Squaring T(y) = D under D - y/v >= 0:
  //   (1 - u^2/v^2) y^2 + (2 D u^2 / v - 2 x cos) y + (x^2 - u^2 D^2) = 0
  const double ratio = u / v;
  const double qa = 1.0 - ratio * ratio;
  const double qb = 2.0 * (u * ratio * d - x * c);
  const double qc = (x - u * d) * (x + u * d);

  double roots[2];
  int n_roots = 0;
  if (qa == 0.0) {
    if (qb == 0.0) {
      // theta = 0, u = v, D = x/u: T is constant on [0, x].
      return qc == 0.0 ? std::min(x, reach) : 0.0;
    }
    roots[n_roots++] = -qc / qb;
  } else {
    const double disc = std::max(0.0, qb * qb - 4.0 * qa * qc);
    const double q = -0.5 * (qb + std::copysign(std::sqrt(disc), qb));
    if (q != 0.0) {
      roots[n_roots++] = q / qa;
      roots[n_roots++] = qc / q;
    } else {
      roots[n_roots++] = 0.0;
    }
  }

  const double slack = 1e-12 * std::max(1.0, reach);
  double best = -1.0;
  for (int k = 0; k < n_roots; ++k) {
    const double y = roots[k];
    if (!std::isfinite(y) || y < -slack || y > reach + slack) continue;
    best = std::max(best, y);
  }
  if (best <= 0.0) return 0.0;
  return std::min(best, reach);
}

HitchPlan optimal_distance_ho(const PlannerConfig& cfg, const UavTask& task,
                              const VehicleOffer& offer, const PairGeometry& geom) {
  const Eligibility el = eligibility_ho(cfg, task, offer, geom);
  if (!el.eligible) return no_hitch(task, el);
  const Threshold th = classify(cfg, task, offer, geom);

  double y = interior_distance(task, geom, th.cos_phi);
  Binding binding = Binding::Interior;
  if (task.has_deadline()) {
    const double cap = max_hitch_distance(task, offer, geom);
    if (cap < y) {
      y = cap;
      binding = Binding::Deadline;
    }
  }
  return finalize(cfg, task, offer, geom, y, binding, el, false);
}

HitchPlan optimal_distance(const PlannerConfig& cfg, const UavTask& task,
                           const VehicleOffer& offer, const PairGeometry& geom) {
  if (offer.hitching_only()) return optimal_distance_ho(cfg, task, offer, geom);
  validate_all(cfg, task, offer, geom);
  if (offer.battery_swap()) {
    throw ContractError("optimal_distance requires a finite charging rate; use battery_swap_plan");
  }
  const Threshold th = classify(cfg, task, offer, geom);
  if (!th.eligibility.eligible) return no_hitch(task, th.eligibility);

  double y = 0.0;
  Binding binding = Binding::Interior;
  if (th.full_circle) {
    if (!task.has_deadline()) {
      throw UnboundedHitch(
          "charging outpaces every detour (threshold angle = pi) and no deadline bounds the ride");
    }
    y = max_hitch_distance(task, offer, geom);
    binding = Binding::Deadline;
  } else {
    y = interior_distance(task, geom, th.cos_phi);
    if (task.has_deadline()) {
      const double cap = max_hitch_distance(task, offer, geom);
      if (cap < y) {
        y = cap;
        binding = Binding::Deadline;
      }
    }
  }
  return finalize(cfg, task, offer, geom, y, binding, th.eligibility, false);
}

HitchPlan optimal_distance_limited(const PlannerConfig& cfg, const UavTask& task,
                                   const VehicleOffer& offer, const PairGeometry& geom) {
  if (offer.hitching_only()) return optimal_distance_ho(cfg, task, offer, geom);
  if (!task.has_finite_battery()) return optimal_distance(cfg, task, offer, geom);
  if (offer.battery_swap()) return battery_swap_plan(cfg, task, offer, geom);
  validate_all(cfg, task, offer, geom);
  // A full battery cannot take any charge.
  if (task.battery_level >= task.battery_capacity) {
    return optimal_distance_ho(cfg, task, without_charging(offer), geom);
  }

  const Threshold th = classify(cfg, task, offer, geom);
  if (!th.eligibility.eligible) return no_hitch(task, th.eligibility);

  // Riding past this point no longer charges anything.
  const double full_at = (task.battery_capacity - task.battery_level) * offer.v / offer.gamma;

  const HitchPlan ho = optimal_distance_ho(cfg, task, without_charging(offer), geom);
  double y = 0.0;
  Binding binding = Binding::NoHitch;
  if (full_at <= ho.y_star) {
    y = ho.y_star;
    binding = ho.binding;
  } else {
    double y_charging = kUnbounded;
    Binding charging_binding = Binding::Interior;
    try {
      const HitchPlan unlimited = optimal_distance(cfg, task, offer, geom);
      y_charging = unlimited.y_star;
      charging_binding = unlimited.binding;
    } catch (const UnboundedHitch&) {
      // the battery cap is what stops the ride
    }
    if (full_at >= y_charging) {
      y = y_charging;
      binding = charging_binding;
    } else {
      y = full_at;
      binding = Binding::BatteryFull;
      if (task.has_deadline()) {
        const double cap = max_hitch_distance(task, offer, geom);
        if (cap < y) {
          y = cap;
          binding = Binding::Deadline;
        }
      }
    }
  }
  return finalize(cfg, task, offer, geom, y, binding, th.eligibility, true);
}

HitchPlan battery_swap_plan(const PlannerConfig& cfg, const UavTask& task,
                            const VehicleOffer& offer, const PairGeometry& geom) {
  validate_all(cfg, task, offer, geom);
  if (!offer.battery_swap()) {
    throw ContractError("battery_swap_plan requires gamma = infinity");
  }
  const Eligibility swap_el{true, kPi, EligibilityReason::Eligible};
  // After the swap the battery is full, so the rest of the ride is hitching only.
  HitchPlan plan = optimal_distance_ho(cfg, task, without_charging(offer), geom);
  plan.eligibility = swap_el;
  plan.swap_and_depart = plan.binding == Binding::NoHitch;
  return plan;
}

HitchPlan plan_pair(const PlannerConfig& cfg, const UavTask& task, const VehicleOffer& offer,
                    const PairGeometry& geom, bool limited) {
  if (offer.battery_swap()) return battery_swap_plan(cfg, task, offer, geom);
  if (limited && task.has_finite_battery()) {
    return optimal_distance_limited(cfg, task, offer, geom);
  }
  return optimal_distance(cfg, task, offer, geom);
}

std::pair<std::size_t, HitchPlan> select_vehicle(const PlannerConfig& cfg, const UavTask& task,
                                                 std::span<const VehicleChoice> offers,
                                                 bool limited) {
  if (offers.empty()) throw DomainError("select_vehicle: no vehicles offered");
  std::size_t best = 0;
  HitchPlan best_plan = plan_pair(cfg, task, offers[0].offer, offers[0].geom, limited);
  for (std::size_t k = 1; k < offers.size(); ++k) {
    HitchPlan candidate = plan_pair(cfg, task, offers[k].offer, offers[k].geom, limited);
    if (candidate.consumption < best_plan.consumption - cfg.tol) {
      best = k;
      best_plan = std::move(candidate);
    }
  }
  return {best, best_plan};
}

}  // namespace hitch
