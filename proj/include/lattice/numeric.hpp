#pragma once

// Small numerical toolbox shared by the curve, counting and estimate
// modules: snapped floors, bracketed root finding, unimodal maximization
// and quadrature.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "lattice/error.hpp"

namespace lattice {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Relative tolerance used to decide that a computed boundary value "is" an
// integer. Lattice points on the curve count as inside.
inline constexpr double kSnapTolerance = 1e-9;

inline bool near_integer(double x, double n) {
  return std::abs(x - n) <= kSnapTolerance * (1.0 + std::abs(x));
}

// floor(x), except that values within kSnapTolerance of an integer are
// snapped to it first.
inline std::int64_t floor_snap(double x) {
  const double n = std::nearbyint(x);
  if (near_integer(x, n)) return static_cast<std::int64_t>(n);
  return static_cast<std::int64_t>(std::floor(x));
}

// Largest integer k >= 0 with k*k <= t (snapped). Returns 0 for t < 0.
inline std::int64_t floor_sqrt_snap(double t) {
  if (!(t > 0)) return 0;
  auto k = static_cast<std::int64_t>(std::sqrt(t));
  const double slack = kSnapTolerance * (1.0 + t);
  auto sq = [](std::int64_t v) { return static_cast<double>(v) * static_cast<double>(v); };
  while (sq(k + 1) <= t + slack) ++k;
  while (k > 0 && sq(k) > t + slack) --k;
  return k;
}

// Bisection for a sign change of `fn` on [lo, hi]. `fn(lo)` and `fn(hi)`
// must have opposite signs (zero counts as either). Iterates until the
// bracket has collapsed to adjacent doubles or `max_iter` is reached.
template <class Fn>
double bisect(Fn&& fn, double lo, double hi, double rel_tol = 1e-15, int max_iter = 200) {
  double flo = fn(lo);
  if (flo == 0) return lo;
  for (int it = 0; it < max_iter; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) return mid;
    const double fmid = fn(mid);
    if (fmid == 0) return mid;
    if ((fmid < 0) == (flo < 0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
    if (hi - lo <= rel_tol * std::max(std::abs(lo), std::abs(hi))) return 0.5 * (lo + hi);
  }
  throw ConvergenceError("bisection did not converge on [" + std::to_string(lo) + ", " +
                             std::to_string(hi) + "]",
                         hi - lo);
}

// Golden-section search for the maximizer of a unimodal function on [a, b].
template <class Fn>
std::pair<double, double> golden_max(Fn&& fn, double a, double b, double rel_tol = 1e-13) {
  constexpr double invphi = 0.6180339887498949;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = fn(c);
  double fd = fn(d);
  for (int it = 0; it < 300 && (b - a) > rel_tol * (std::abs(a) + std::abs(b)); ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = fn(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = fn(d);
    }
  }
  return fc >= fd ? std::pair{c, fc} : std::pair{d, fd};
}

// Maximum of `fn` over [a, b]: a uniform grid of `grid` points followed by
// golden-section refinement in the two cells around the grid argmax.
template <class Fn>
std::pair<double, double> max_on_interval(Fn&& fn, double a, double b, int grid = 10000) {
  if (b <= a) return {a, fn(a)};
  const double h = (b - a) / grid;
  int best_i = 0;
  double best = fn(a);
  for (int i = 1; i <= grid; ++i) {
    const double v = fn(i == grid ? b : a + i * h);
    if (v > best) {
      best = v;
      best_i = i;
    }
  }
  const double lo = std::max(a, a + (best_i - 1) * h);
  const double hi = std::min(b, a + (best_i + 1) * h);
  auto [x, v] = golden_max(fn, lo, hi);
  if (v > best) return {x, v};
  return {best_i == grid ? b : a + best_i * h, best};
}

// Adaptive quadrature for smooth integrands (Gauss-Kronrod 61).
template <class Fn>
double integrate_smooth(Fn&& fn, double a, double b, double rel_tol = 1e-12) {
  if (b <= a) return 0.0;
  double err = 0;
  double l1 = 0;
  const double q = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      fn, a, b, 15, rel_tol, &err, &l1);
  if (err > 1e-10 * std::max(l1, 1e-300) && err > 1e-14) {
    throw ConvergenceError("Gauss-Kronrod quadrature did not converge", err);
  }
  return q;
}

// Tanh-sinh quadrature over [a, b]; tolerates integrable endpoint
// singularities provided `fn` can be evaluated arbitrarily close to them.
template <class Fn>
double integrate_tanh_sinh(Fn&& fn, double a, double b, double rel_tol = 1e-12) {
  if (b <= a) return 0.0;
  boost::math::quadrature::tanh_sinh<double> integrator;
  double err = 0;
  double l1 = 0;
  double q = 0;
  try {
    q = integrator.integrate(fn, a, b, rel_tol, &err, &l1);
  } catch (const std::exception& ex) {
    throw ConvergenceError(std::string("tanh-sinh quadrature failed: ") + ex.what(), kInf);
  }
  if (!std::isfinite(q) || (err > 1e-10 * std::max(l1, 1e-300) && err > 1e-14)) {
    throw ConvergenceError("tanh-sinh quadrature did not converge", err);
  }
  return q;
}

namespace detail {

// Tail of a power-law singularity: estimate the local exponent from two
// samples and integrate c*|x - e|^(-gamma) over a width `eta` strip.
template <class Fn>
double singular_tail(Fn&& fn, double edge, double eta, double direction) {
  const double v1 = std::abs(fn(edge + direction * eta));
  const double v2 = std::abs(fn(edge + direction * 0.5 * eta));
  if (!(v1 > 0) || !std::isfinite(v1) || !std::isfinite(v2)) return 0.0;
  double gamma = std::log(v2 / v1) / std::log(2.0);
  gamma = std::clamp(gamma, -4.0, 0.99);
  return eta * v1 / (1.0 - gamma);
}

}  // namespace detail

// Integral over [a, b] of an integrand with possible integrable power-law
// singularities at either endpoint. A strip of relative width 1e-8 at each
// end is excluded from the quadrature and replaced by an analytic tail.
template <class Fn>
double integrate_singular(Fn&& fn, double a, double b, double rel_tol = 1e-12) {
  if (b <= a) return 0.0;
  const double eta = 1e-8 * (b - a);
  const double core = integrate_tanh_sinh(fn, a + eta, b - eta, rel_tol);
  return core + detail::singular_tail(fn, a, eta, +1.0) + detail::singular_tail(fn, b, eta, -1.0);
}

}  // namespace lattice
