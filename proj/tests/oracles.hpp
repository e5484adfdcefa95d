#pragma once

// Numeric reference solvers used only by the tests. They evaluate the model
// from its defining formulas and never call the closed-form planners.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>

#include "hitch/core.hpp"

namespace oracle {

inline double flight(const hitch::UavTask& t, const hitch::PairGeometry& g, double y) {
  const double sq = t.x * t.x - 2.0 * t.x * y * std::cos(g.theta) + y * y;
  return std::sqrt(std::max(0.0, sq));
}

inline double time(const hitch::UavTask& t, const hitch::VehicleOffer& o,
                   const hitch::PairGeometry& g, double y) {
  return y / o.v + flight(t, g, y) / t.u;
}

// Weighted consumption, with the charge capped at e_full - e_i when `limited`.
inline double cost(double omega, const hitch::UavTask& t, const hitch::VehicleOffer& o,
                   const hitch::PairGeometry& g, double y, bool limited) {
  double charged = o.gamma * y / o.v;
  if (limited && t.battery_capacity != hitch::kUnbounded) {
    charged = std::min(charged, t.battery_capacity - t.battery_level);
  }
  const double e = flight(t, g, y) / t.u - charged;
  return omega * e + (1.0 - omega) * time(t, o, g, y);
}

// Largest y in [0, v D] with T(y) <= D, by bisection (T is convex and T(0) <= D).
inline double inverse_time(const hitch::UavTask& t, const hitch::VehicleOffer& o,
                           const hitch::PairGeometry& g) {
  const double d = t.deadline;
  double lo = 0.0;
  double hi = o.v * d;
  if (time(t, o, g, hi) <= d) return hi;
  for (int k = 0; k < 400 && hi - lo > 0.0; ++k) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (time(t, o, g, mid) <= d) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

struct Minimum {
  double y = 0.0;
  double value = 0.0;
};

// Grid search followed by golden-section refinement in the bracket around the
// best grid point. If the best point sits on the right edge the interval is
// doubled (convex objectives only), up to `max_doublings` times.
template <class Fn>
Minimum minimize(Fn&& f, double lo, double hi, std::size_t points = 10001, int max_doublings = 8) {
  for (int round = 0;; ++round) {
    std::size_t best = 0;
    double best_value = std::numeric_limits<double>::infinity();
    const double step = (hi - lo) / static_cast<double>(points - 1);
    for (std::size_t k = 0; k < points; ++k) {
      const double y = k + 1 == points ? hi : lo + step * static_cast<double>(k);
      const double value = f(y);
      if (value < best_value) {
        best_value = value;
        best = k;
      }
    }
    if (best + 1 == points && round < max_doublings) {
      hi = lo + 2.0 * (hi - lo);
      continue;
    }
    double a = lo + step * static_cast<double>(best == 0 ? 0 : best - 1);
    double b = std::min(hi, lo + step * static_cast<double>(best + 1));
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - ratio * (b - a);
    double d = a + ratio * (b - a);
    double fc = f(c);
    double fd = f(d);
    for (int k = 0; k < 200 && b - a > 1e-13 * std::max(1.0, std::abs(b)); ++k) {
      if (fc < fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - ratio * (b - a);
        fc = f(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + ratio * (b - a);
        fd = f(d);
      }
    }
    Minimum out{lo + step * static_cast<double>(best), best_value};
    for (double y : {a, b, c, d}) {
      const double value = f(y);
      if (value < out.value) out = {y, value};
    }
    return out;
  }
}

}  // namespace oracle
