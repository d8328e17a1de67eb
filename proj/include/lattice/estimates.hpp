#pragma once

// Explicit counting bounds, evaluated numerically and compared with exact
// counts. Each bound produces a BoundReport with slack = rhs - lhs.

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lattice/counting.hpp"
#include "lattice/curves.hpp"
#include "lattice/error.hpp"
#include "lattice/numeric.hpp"

namespace lattice {

// psi(x) = x - floor(x) - 1/2.
inline double sawtooth(double x) { return x - std::floor(x) - 0.5; }

// Integral of psi over [0, t]; periodic, with values in [-1/8, 0].
inline double sawtooth_antiderivative(double t) {
  const double u = t - std::floor(t);
  return 0.5 * u * (u - 1.0);
}

// Sum of psi(h(n)) over integers a < n <= b.
template <class Fn>
double sawtooth_sum(Fn&& h, double a, double b) {
  double total = 0;
  const auto first = static_cast<std::int64_t>(std::floor(a)) + 1;
  const auto last = static_cast<std::int64_t>(std::floor(b));
  for (std::int64_t n = first; n <= last; ++n) total += sawtooth(h(static_cast<double>(n)));
  return total;
}

namespace detail {

// Sample points on (lo, hi]: a geometric approach to lo plus a uniform grid.
inline std::vector<double> hypothesis_samples(double lo, double hi, int grid = 100) {
  std::vector<double> xs;
  const double w = hi - lo;
  for (double frac : {1e-9, 1e-7, 1e-5, 1e-3}) xs.push_back(lo + frac * w);
  for (int i = 1; i <= grid; ++i) xs.push_back(lo + w * i / grid);
  return xs;
}

// Throws PreconditionError unless `second` keeps one strict sign, stays
// away from zero and is monotone across the samples.
template <class Fn>
void check_monotone_nonzero(Fn&& second, const std::vector<double>& xs, const std::string& what) {
  std::vector<double> v;
  v.reserve(xs.size());
  double largest = 0;
  for (double x : xs) {
    const double y = second(x);
    if (!std::isfinite(y)) throw PreconditionError(what + " is not finite", x);
    v.push_back(y);
    largest = std::max(largest, std::abs(y));
  }
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0 || (v[i] > 0) != (v[0] > 0)) throw PreconditionError(what + " changes sign or vanishes", xs[i]);
    if (std::abs(v[i]) < 1e-6 * largest) throw PreconditionError(what + " is not bounded away from zero", xs[i]);
  }
  int direction = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    const double d = v[i] - v[i - 1];
    if (std::abs(d) <= 1e-12 * (std::abs(v[i]) + std::abs(v[i - 1]))) continue;
    const int sign = d > 0 ? 1 : -1;
    if (direction == 0) direction = sign;
    if (sign != direction) throw PreconditionError(what + " is not monotone", xs[i]);
  }
}

}  // namespace detail

// Right-hand side of the van der Corput estimate
//   |sum_{a<n<=b} psi(h(n))| <= 6 int_a^b |h''|^(1/3) + 175 max |h''|^(-1/2) + 1
// for h'' monotone and nonzero on [a, b] (checked on 100 samples).
template <class Fn>
double vdc_bound(Fn&& h_second, double a, double b) {
  if (b < a) throw std::invalid_argument("vdc_bound: empty interval must have a <= b");
  if (b == a) {
    const double c = std::abs(h_second(a));
    if (c == 0) throw PreconditionError("vdc_bound: h'' vanishes", a);
    return 175.0 / std::sqrt(c) + 1.0;
  }
  std::vector<double> xs{a};
  for (int i = 1; i <= 99; ++i) xs.push_back(a + (b - a) * i / 99);
  detail::check_monotone_nonzero(h_second, xs, "vdc_bound: h''");
  const double integral = integrate_smooth([&](double t) { return std::cbrt(std::abs(h_second(t))); }, a, b);
  // h'' monotone: the maximum of |h''|^(-1/2) sits at an endpoint.
  const double smallest = std::min(std::abs(h_second(a)), std::abs(h_second(b)));
  return 6.0 * integral + 175.0 / std::sqrt(smallest) + 1.0;
}

struct BoundInputs {
  std::string curve;
  double p = kNaN;
  double r = kNaN;
  double s = kNaN;
  // delta(r) for the general remainder bound, t for the balanced bound.
  double aux = kNaN;
};

struct BoundReport {
  std::string name;
  double lhs = 0;
  double rhs = 0;
  double slack = 0;
  bool holds = false;
  BoundInputs inputs;
};

inline BoundReport make_report(std::string name, double lhs, double rhs, BoundInputs inputs) {
  BoundReport b;
  b.name = std::move(name);
  b.lhs = lhs;
  b.rhs = rhs;
  b.slack = rhs - lhs;
  b.holds = b.slack >= -1e-9 * (1.0 + std::abs(rhs));
  b.inputs = std::move(inputs);
  return b;
}

// Cutoffs delta(r), epsilon(r) near the axes for the general remainder
// bound, with the decay exponents of |f''(delta)|^(-1/2) r^(1/2) etc.
struct GeneralCurveParams {
  std::function<double(double)> delta;
  std::function<double(double)> epsilon;
  double a1 = 1.0 / 6;
  double a2 = 1.0 / 6;
  double b1 = 1.0 / 6;
  double b2 = 1.0 / 6;

  double e() const { return std::min({1.0 / 6, a1, a2, b1, b2}); }

  // delta = epsilon = r^(-1/p), all exponents 1/(2p).
  static GeneralCurveParams for_pcircle(double p) {
    if (!(p > 1) || !std::isfinite(p)) throw std::invalid_argument("for_pcircle: p must be finite and > 1");
    GeneralCurveParams g;
    g.delta = [p](double r) { return std::pow(r, -1.0 / p); };
    g.epsilon = g.delta;
    g.a1 = g.a2 = g.b1 = g.b2 = 1.0 / (2.0 * p);
    return g;
  }
};

// Per-curve quantities shared by all the bounds. Construct once per curve
// and reuse across (r, s); const member functions are thread-safe.
class BoundEvaluator {
 public:
  explicit BoundEvaluator(Curve curve) : c_(std::move(curve)) {
    area_ = quadrant_area(c_);
    dirichlet_c_ = c_.M() - c_.f(c_.L() / 2);
    neumann_c_ = c_.M() - c_.f(c_.L() / 4);
    const Point corner = c_.corner();
    if (c_.kind() == CurveKind::pcircle || c_.kind() == CurveKind::custom) {
      curved_ = true;
      int_f_ = integrate_singular([&](double x) { return std::cbrt(std::abs(c_.d2f(x))); }, 0.0, corner.x);
      int_g_ = integrate_singular([&](double y) { return std::cbrt(std::abs(c_.d2g(y))); }, 0.0, corner.y);
      slope_f_ = std::abs(c_.df(corner.x));
      slope_g_ = std::abs(c_.dg(corner.y));
      try {
        detail::check_monotone_nonzero([&](double x) { return c_.d2f(x); },
                                       detail::hypothesis_samples(0.0, corner.x), "f''");
        detail::check_monotone_nonzero([&](double y) { return c_.d2g(y); },
                                       detail::hypothesis_samples(0.0, corner.y), "g''");
        auto inv_root = [](double v) { return 1.0 / std::sqrt(std::abs(v)); };
        max_f_ = max_on_interval([&](double x) { return inv_root(c_.d2f(x)); }, corner.x * 1e-12, corner.x).second;
        max_g_ = max_on_interval([&](double y) { return inv_root(c_.d2g(y)); }, corner.y * 1e-12, corner.y).second;
      } catch (const PreconditionError& ex) {
        smooth_error_ = ex.what();
        smooth_witness_ = ex.witness();
      }
    }
  }

  const Curve& curve() const { return c_; }
  double area() const { return area_; }
  // M - f(L/2) and M - f(L/4).
  double dirichlet_constant() const { return dirichlet_c_; }
  double neumann_constant() const { return neumann_c_; }
  // Integrals of |f''|^(1/3) over [0, alpha] and |g''|^(1/3) over [0, beta].
  double curvature_integral_f() const { return int_f_; }
  double curvature_integral_g() const { return int_g_; }
  bool smooth_hypotheses_hold() const { return curved_ && !smooth_error_; }

  // N(r, s) >= r^2 A - r (L/s + s M) - 1.
  BoundReport rough_lower_bound(double r, double s) const {
    const double bound = r * r * area_ - r * (c_.L() / s + s * c_.M()) - 1.0;
    return make_report("rough_lower_bound", bound, static_cast<double>(count(c_, r, s)), inputs(r, s));
  }

  // N(r, s) <= r^2 A - C r s / 2 with C = M - f(L/2), for r >= s / L.
  BoundReport two_term_upper_bound(double r, double s) const {
    if (r < s / c_.L()) {
      throw PreconditionError("two_term_upper_bound requires r >= s / L (r = " + std::to_string(r) +
                                  ", s / L = " + std::to_string(s / c_.L()) + ")",
                              r);
    }
    const double bound = r * r * area_ - 0.5 * dirichlet_c_ * r * s;
    return make_report("two_term_upper_bound", static_cast<double>(count(c_, r, s)), bound, inputs(r, s));
  }

  // Closed-quadrant count >= r^2 A + C' r s / 2 with C' = M - f(L/4).
  BoundReport neumann_lower_bound(double r, double s) const {
    const double bound = r * r * area_ + 0.5 * neumann_c_ * r * s;
    return make_report("neumann_lower_bound", bound,
                       static_cast<double>(count(c_, r, s, Quadrant::nonnegative)), inputs(r, s));
  }

  // |N - r^2 A + r (L/s + s M) / 2|, the two-term remainder.
  double remainder(double r, double s) const {
    return std::abs(static_cast<double>(count(c_, r, s)) - r * r * area_ + 0.5 * r * (c_.L() / s + s * c_.M()));
  }

  // Remainder estimate for curves with f'' < 0 monotone on [0, alpha] and
  // g'' < 0 monotone on [0, beta].
  BoundReport remainder_bound_smooth(double r, double s) const {
    if (!curved_) throw PreconditionError("remainder_bound_smooth: curve has no curvature", 0.0);
    if (smooth_error_) {
      throw PreconditionError("remainder_bound_smooth: " + *smooth_error_ +
                                  "; use remainder_bound_general",
                              smooth_witness_);
    }
    const double rhs = 6.0 * std::cbrt(r * r) * (int_f_ + int_g_) +
                       175.0 * std::sqrt(r) * (std::pow(s, -1.5) * max_f_ + std::pow(s, 1.5) * max_g_) +
                       0.25 * (s * s * slope_f_ + slope_g_ / (s * s)) + 3.0;
    return make_report("remainder_bound_smooth", remainder(r, s), rhs, inputs(r, s));
  }

  // Smallest r at which the cutoffs fall inside the first partition cells.
  double general_min_radius(const GeneralCurveParams& params) const {
    const double a1 = c_.partition_f()[1];
    const double b1 = c_.partition_g()[1];
    double lo = 1e-6;
    double hi = 1.0;
    auto ok = [&](double r) { return params.delta(r) < a1 && params.epsilon(r) < b1; };
    while (!ok(hi)) {
      lo = hi;
      hi *= 2;
      if (hi > 1e12) throw PreconditionError("cutoffs never fall below the first partition point", hi);
    }
    return bisect([&](double r) { return ok(r) ? 1.0 : -1.0; }, lo, hi, 1e-12);
  }

  // Remainder estimate for piecewise C^2 curves, with cutoffs delta(r),
  // epsilon(r) near the intercepts.
  BoundReport remainder_bound_general(double r, double s, const GeneralCurveParams& params) const {
    if (!curved_) throw PreconditionError("remainder_bound_general: curve has no curvature", 0.0);
    const auto pf = c_.partition_f();
    const auto pg = c_.partition_g();
    const double delta = params.delta(r);
    const double eps = params.epsilon(r);
    if (!(delta > 0 && delta < pf[1])) {
      throw PreconditionError("remainder_bound_general requires 0 < delta(r) < alpha_1", delta);
    }
    if (!(eps > 0 && eps < pg[1])) {
      throw PreconditionError("remainder_bound_general requires 0 < epsilon(r) < beta_1", eps);
    }
    const double root_r = std::sqrt(r);
    const double down = std::pow(s, -1.5);
    const double up = std::pow(s, 1.5);
    auto inv_root = [](double v) {
      if (v == 0) throw PreconditionError("second derivative vanishes at a partition point", 0.0);
      return 1.0 / std::sqrt(std::abs(v));
    };
    double partition_terms = 0;
    double slope_terms = 0;
    for (std::size_t i = 1; i < pf.size(); ++i) {
      partition_terms += down * inv_root(c_.d2f(pf[i]));
      slope_terms += s * s * std::abs(c_.df(pf[i]));
    }
    for (std::size_t i = 1; i < pg.size(); ++i) {
      partition_terms += up * inv_root(c_.d2g(pg[i]));
      slope_terms += std::abs(c_.dg(pg[i])) / (s * s);
    }
    const double l = static_cast<double>(pf.size() - 1);
    const double ell = static_cast<double>(pg.size() - 1);
    const double rhs = 6.0 * std::cbrt(r * r) * (int_f_ + int_g_) +
                       175.0 * root_r * (down * inv_root(c_.d2f(delta)) + up * inv_root(c_.d2g(eps))) +
                       350.0 * root_r * partition_terms + 0.25 * slope_terms +
                       0.5 * r * (delta / s + s * eps) + l + ell + 1.0;
    BoundInputs in = inputs(r, s);
    in.aux = delta;
    return make_report("remainder_bound_general", remainder(r, s), rhs, in);
  }

 private:
  BoundInputs inputs(double r, double s) const { return BoundInputs{c_.label(), c_.exponent(), r, s, kNaN}; }

  Curve c_;
  double area_ = 0;
  double dirichlet_c_ = 0;
  double neumann_c_ = 0;
  bool curved_ = false;
  double int_f_ = 0;
  double int_g_ = 0;
  double slope_f_ = 0;
  double slope_g_ = 0;
  double max_f_ = kNaN;
  double max_g_ = kNaN;
  std::optional<std::string> smooth_error_;
  double smooth_witness_ = kNaN;
};

inline BoundReport rough_lower_bound(const Curve& curve, double r, double s) {
  return BoundEvaluator(curve).rough_lower_bound(r, s);
}
inline BoundReport two_term_upper_bound(const Curve& curve, double r, double s) {
  return BoundEvaluator(curve).two_term_upper_bound(r, s);
}
inline BoundReport neumann_lower_bound(const Curve& curve, double r, double s) {
  return BoundEvaluator(curve).neumann_lower_bound(r, s);
}
inline BoundReport remainder_bound_smooth(const Curve& curve, double r, double s) {
  return BoundEvaluator(curve).remainder_bound_smooth(r, s);
}
inline BoundReport remainder_bound_general(const Curve& curve, double r, double s,
                                           const GeneralCurveParams& params) {
  return BoundEvaluator(curve).remainder_bound_general(r, s, params);
}

// If s + 1/s <= 2 + t then |s - 1| <= 3 sqrt(t).
inline double balanced_deviation_bound(double t) {
  if (!(t > 0 && t < 1)) throw std::invalid_argument("balanced_deviation_bound: t must lie in (0, 1)");
  return 3.0 * std::sqrt(t);
}

}  // namespace lattice
