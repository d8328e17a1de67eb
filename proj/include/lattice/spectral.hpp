#pragma once

// Rectangle eigenvalue problems through lattice counting.
//
//   Dirichlet:   (j s)^2 + (k / s)^2,        j, k >= 1
//   Neumann:     (j s)^2 + (k / s)^2,        j, k >= 0
//   oscillator:  s (j - 1/2) + (k - 1/2) / s, j, k >= 1
//
// The number of levels <= r^2 (or <= E for the oscillator) is a lattice
// count, so optimizing the n-th level over s reduces to a search over r
// driving the stretch sweep.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "lattice/curves.hpp"
#include "lattice/numeric.hpp"
#include "lattice/sweep.hpp"

namespace lattice {

enum class Problem { dirichlet_min, neumann_max, oscillator_min };

inline const char* problem_name(Problem p) {
  switch (p) {
    case Problem::dirichlet_min:
      return "dirichlet_min";
    case Problem::neumann_max:
      return "neumann_max";
    case Problem::oscillator_min:
      return "oscillator_min";
  }
  return "?";
}

struct EigenResult {
  std::int64_t n = 0;
  double value = 0;
  std::vector<Interval> s_set;
  Problem problem = Problem::dirichlet_min;
  double sup_s = kNaN;
  // Every s > 0 is optimal (the first Neumann eigenvalue).
  bool degenerate = false;
};

enum class Spectrum { dirichlet, neumann, oscillator };

// Levels of one spectrum at fixed s, with exact counting against the same
// floating-point level expression used for enumeration.
class LevelSet {
 public:
  LevelSet(Spectrum kind, double s) : kind_(kind), s_(s) {
    if (!(s > 0) || !std::isfinite(s)) throw std::invalid_argument("eigenvalue: s must be positive and finite");
    start_ = kind == Spectrum::neumann ? 0 : 1;
  }

  double level(std::int64_t j, std::int64_t k) const {
    const double jd = static_cast<double>(j);
    const double kd = static_cast<double>(k);
    if (kind_ == Spectrum::oscillator) return s_ * (jd - 0.5) + (kd - 0.5) / s_;
    const double x = jd * s_;
    const double y = kd / s_;
    return x * x + y * y;
  }

  // Largest k >= start with level(j, k) <= e, or start - 1 if none.
  std::int64_t column_top(std::int64_t j, double e) const {
    double guess = 0;
    if (kind_ == Spectrum::oscillator) {
      guess = s_ * (e - s_ * (static_cast<double>(j) - 0.5)) + 0.5;
    } else {
      const double x = static_cast<double>(j) * s_;
      guess = s_ * std::sqrt(std::max(0.0, e - x * x));
    }
    std::int64_t k = std::max<std::int64_t>(start_ - 1, static_cast<std::int64_t>(std::floor(guess)));
    while (k >= start_ && level(j, k) > e) --k;
    while (level(j, k + 1) <= e) ++k;
    return k;
  }

  // Number of levels <= e, with multiplicity.
  std::int64_t count_le(double e) const {
    std::int64_t total = 0;
    for (std::int64_t j = start_; level(j, start_) <= e; ++j) total += column_top(j, e) - start_ + 1;
    return total;
  }

  // The n-th smallest level (n >= 1).
  double nth(std::int64_t n) const {
    if (n < 1) throw std::invalid_argument("eigenvalue: n must be at least 1");
    double lo = -1.0;
    double hi = level(start_, start_) + 1.0;
    while (count_le(hi) < n) hi *= 2;
    std::int64_t count_lo = 0;
    std::int64_t count_hi = count_le(hi);
    while (count_hi - count_lo > 64) {
      const double mid = lo + 0.5 * (hi - lo);
      if (mid <= lo || mid >= hi) break;
      const std::int64_t c = count_le(mid);
      if (c >= n) {
        hi = mid;
        count_hi = c;
      } else {
        lo = mid;
        count_lo = c;
      }
    }
    std::vector<double> band;
    for (std::int64_t j = start_; level(j, start_) <= hi; ++j) {
      const std::int64_t first = lo < level(j, start_) ? start_ : column_top(j, lo) + 1;
      const std::int64_t last = column_top(j, hi);
      for (std::int64_t k = first; k <= last; ++k) band.push_back(level(j, k));
    }
    const auto index = static_cast<std::size_t>(n - count_lo - 1);
    std::nth_element(band.begin(), band.begin() + static_cast<std::ptrdiff_t>(index), band.end());
    return band[index];
  }

 private:
  Spectrum kind_;
  double s_;
  std::int64_t start_ = 1;
};

inline double dirichlet_eigenvalue(std::int64_t n, double s) { return LevelSet(Spectrum::dirichlet, s).nth(n); }
inline double neumann_eigenvalue(std::int64_t n, double s) { return LevelSet(Spectrum::neumann, s).nth(n); }
inline double oscillator_eigenvalue(std::int64_t n, double s) { return LevelSet(Spectrum::oscillator, s).nth(n); }

// Two-term asymptotics of the optimal eigenvalues.
inline double dirichlet_asymptotic(double n) {
  const double c = 4.0 / std::numbers::pi;
  return c * n + std::pow(c, 1.5) * std::sqrt(n);
}
inline double neumann_asymptotic(double n) {
  const double c = 4.0 / std::numbers::pi;
  return c * n - std::pow(c, 1.5) * std::sqrt(n);
}

namespace detail {

inline constexpr double kRadiusTolerance = 1e-14;

// Smallest x in (lo, hi] with pred(x); pred(lo) false, pred(hi) true.
template <class Pred>
std::pair<double, double> bisect_predicate(Pred&& pred, double lo, double hi) {
  for (int it = 0; it < 200 && hi - lo > kRadiusTolerance * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (pred(mid) ? hi : lo) = mid;
  }
  return {lo, hi};
}

// Polish the extremal level over one optimal interval. The radius search
// resolves the threshold only to the sweep's tie tolerance, so the level is
// optimized directly over s; it is unimodal on these short intervals.
template <class Level>
double polish(Level&& level, const Interval& iv, bool maximize) {
  const double a = iv.lo;
  const double b = std::isfinite(iv.hi) ? iv.hi : 2 * std::max(a, 1.0);
  auto fn = [&](double s) { return maximize ? level(s) : -level(s); };
  double best = fn(iv.midpoint());
  if (a > 0 && b > a) best = std::max(best, golden_max(fn, a, b, 1e-16).second);
  return maximize ? best : -best;
}

inline EigenResult from_stretch(std::int64_t n, Problem problem, double value, const StretchResult& sr) {
  EigenResult out;
  out.n = n;
  out.problem = problem;
  out.value = value;
  out.s_set = sr.intervals;
  out.sup_s = sr.sup_s;
  return out;
}

}  // namespace detail

// min over s of the n-th Dirichlet eigenvalue. With r_n the least radius at
// which some stretched circle holds n points, the minimum is r_n^2.
inline EigenResult minimize_dirichlet(std::int64_t n, const SweepOptions& opt = {}) {
  if (n < 1) throw std::invalid_argument("minimize_dirichlet: n must be at least 1");
  const Curve circle = pcircle(2);
  auto enough = [&](double r) { return maximize_count(circle, r, opt).extremal_count >= n; };
  double hi = std::sqrt(dirichlet_eigenvalue(n, 1.0));
  double lo = 0.5 * hi;
  while (enough(lo)) lo *= 0.5;
  std::tie(lo, hi) = detail::bisect_predicate(enough, lo, hi);
  const StretchResult sr = maximize_count(circle, hi, opt);
  double value = hi * hi;
  auto level = [&](double s) { return dirichlet_eigenvalue(n, s); };
  for (const Interval& iv : sr.intervals) value = std::min(value, detail::polish(level, iv, false));
  return detail::from_stretch(n, Problem::dirichlet_min, value, sr);
}

// max over s of the n-th Neumann eigenvalue: the largest radius at which
// some stretched circle holds at most n - 1 closed-quadrant points.
inline EigenResult maximize_neumann(std::int64_t n, const SweepOptions& opt = {}) {
  if (n < 1) throw std::invalid_argument("maximize_neumann: n must be at least 1");
  if (n == 1) {
    EigenResult out;
    out.n = 1;
    out.problem = Problem::neumann_max;
    out.value = 0;
    out.s_set = {Interval{0.0, kInf, false, false}};
    out.sup_s = kInf;
    out.degenerate = true;
    return out;
  }
  const Curve circle = pcircle(2);
  auto sparse = [&](double r) { return minimize_count_nonneg(circle, r, opt).extremal_count <= n - 1; };
  double lo = std::sqrt(neumann_eigenvalue(n, 1.0)) * (1 - 1e-8);
  while (!sparse(lo)) lo *= 0.5;
  double hi = 2 * lo;
  while (sparse(hi)) hi *= 2;
  // Here the predicate is "too many points", true above the threshold.
  std::tie(lo, hi) = detail::bisect_predicate([&](double r) { return !sparse(r); }, lo, hi);
  const StretchResult sr = minimize_count_nonneg(circle, lo, opt);
  double value = lo * lo;
  auto level = [&](double s) { return neumann_eigenvalue(n, s); };
  for (const Interval& iv : sr.intervals) value = std::max(value, detail::polish(level, iv, true));
  return detail::from_stretch(n, Problem::neumann_max, value, sr);
}

// min over s of the n-th oscillator level.
inline EigenResult minimize_oscillator(std::int64_t n, const SweepOptions& opt = {}) {
  if (n < 1) throw std::invalid_argument("minimize_oscillator: n must be at least 1");
  auto stretch = [&](double e) {
    return detail::maximize_membership(StretchMembership::shifted_line(e, 0.5), opt);
  };
  auto enough = [&](double e) { return stretch(e).extremal_count >= n; };
  double hi = oscillator_eigenvalue(n, 1.0);
  double lo = 0.5 * hi;
  while (enough(lo)) lo *= 0.5;
  std::tie(lo, hi) = detail::bisect_predicate(enough, lo, hi);
  const StretchResult sr = stretch(hi);
  double value = hi;
  auto level = [&](double s) { return oscillator_eigenvalue(n, s); };
  for (const Interval& iv : sr.intervals) value = std::min(value, detail::polish(level, iv, false));
  return detail::from_stretch(n, Problem::oscillator_min, value, sr);
}

}  // namespace lattice
