#pragma once

// Lattice points inside or on the stretched, scaled curve r*Gamma(s), the
// graph of y = r s f(s x / r). Positive mode counts (j, k) with j, k >= 1;
// nonnegative mode also counts the points on the axes and the origin.

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "lattice/curves.hpp"
#include "lattice/numeric.hpp"

namespace lattice {

enum class Quadrant { positive, nonnegative };

struct CountQuery {
  Curve curve;
  double r = 1;
  double s = 1;
  Quadrant mode = Quadrant::positive;

  void validate() const {
    if (!(r > 0) || !std::isfinite(r)) throw std::invalid_argument("count: r must be positive and finite");
    if (!(s > 0) || !std::isfinite(s)) throw std::invalid_argument("count: s must be positive and finite");
  }
};

namespace detail {

inline std::int64_t clamp_nonneg(std::int64_t v) { return v < 0 ? 0 : v; }

// Sum over columns (or rows, whichever is shorter) of the snapped height.
inline std::int64_t count_generic(const Curve& c, double r, double s) {
  const std::int64_t columns = clamp_nonneg(floor_snap(r * c.L() / s));
  const std::int64_t rows = clamp_nonneg(floor_snap(r * s * c.M()));
  std::int64_t total = 0;
  if (columns <= rows) {
    for (std::int64_t j = 1; j <= columns; ++j) {
      total += clamp_nonneg(floor_snap(r * s * c.f(static_cast<double>(j) * s / r)));
    }
  } else {
    for (std::int64_t k = 1; k <= rows; ++k) {
      total += clamp_nonneg(floor_snap((r / s) * c.g(static_cast<double>(k) / (r * s))));
    }
  }
  return total;
}

// Circle: (js)^2 + (k/s)^2 <= r^2, tested on squared quantities so exact
// inputs (Pythagorean points) land on the boundary exactly.
inline std::int64_t count_circle(double r, double s) {
  const double r2 = r * r;
  const std::int64_t columns = clamp_nonneg(floor_snap(r / s));
  const std::int64_t rows = clamp_nonneg(floor_snap(r * s));
  std::int64_t total = 0;
  if (columns <= rows) {
    const double s2 = s * s;
    for (std::int64_t j = 1; j <= columns; ++j) {
      const double js = static_cast<double>(j) * s;
      total += floor_sqrt_snap(s2 * (r2 - js * js));
    }
  } else {
    for (std::int64_t k = 1; k <= rows; ++k) {
      const double ks = static_cast<double>(k) / s;
      total += floor_sqrt_snap((r2 - ks * ks) / (s * s));
    }
  }
  return total;
}

// Triangle under s x + y / s = r.
inline std::int64_t count_line(double r, double s) {
  const std::int64_t columns = clamp_nonneg(floor_snap(r / s));
  const std::int64_t rows = clamp_nonneg(floor_snap(r * s));
  std::int64_t total = 0;
  if (columns <= rows) {
    for (std::int64_t j = 1; j <= columns; ++j) {
      total += clamp_nonneg(floor_snap(s * (r - static_cast<double>(j) * s)));
    }
  } else {
    for (std::int64_t k = 1; k <= rows; ++k) {
      total += clamp_nonneg(floor_snap((r - static_cast<double>(k) / s) / s));
    }
  }
  return total;
}

}  // namespace detail

inline std::int64_t count(const CountQuery& q) {
  q.validate();
  const Curve& c = q.curve;
  const double r = q.r;
  const double s = q.s;
  std::int64_t positive = 0;
  switch (c.kind()) {
    case CurveKind::square:
      positive = detail::clamp_nonneg(floor_snap(r / s)) * detail::clamp_nonneg(floor_snap(r * s));
      break;
    case CurveKind::diamond:
      positive = detail::count_line(r, s);
      break;
    case CurveKind::pcircle:
      positive = c.exponent() == 2.0 ? detail::count_circle(r, s) : detail::count_generic(c, r, s);
      break;
    case CurveKind::custom:
      positive = detail::count_generic(c, r, s);
      break;
  }
  if (q.mode == Quadrant::positive) return positive;
  return positive + detail::clamp_nonneg(floor_snap(r * c.L() / s)) +
         detail::clamp_nonneg(floor_snap(r * s * c.M())) + 1;
}

inline std::int64_t count(const Curve& curve, double r, double s, Quadrant mode = Quadrant::positive) {
  return count(CountQuery{curve, r, s, mode});
}

// Lattice points under the line y = r - x: floor(r) floor(r - 1) / 2.
inline std::int64_t count_p1_balanced(double r) {
  if (!(r > 0)) throw std::invalid_argument("count_p1_balanced: r must be positive");
  const std::int64_t n = floor_snap(r);
  if (n < 1) return 0;
  return n * (n - 1) / 2;
}

// N(sqrt(2) (m + 1/2), sqrt(2)) for the diamond.
inline std::int64_t count_p1_sqrt2(std::int64_t m) {
  if (m < 1) throw std::invalid_argument("count_p1_sqrt2: m must be at least 1");
  return m * m;
}

// rho in  Ncal(r,s) = N(r,s) + r (L/s + s M) + rho ; always within [-1, 1].
inline double relation_residual(const Curve& curve, double r, double s) {
  const auto closed = count(curve, r, s, Quadrant::nonnegative);
  const auto open = count(curve, r, s, Quadrant::positive);
  return static_cast<double>(closed - open) - r * (curve.L() / s + s * curve.M());
}

}  // namespace lattice
