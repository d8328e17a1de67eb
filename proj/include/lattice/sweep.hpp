#pragma once

// Exact optimization of s -> N(r, s) (and of the closed-quadrant count)
// by sweeping over the s-values where a lattice point enters or leaves
// r*Gamma(s).
//
// For a fixed lattice point (j, k) the set of s with (j, k) inside or on
// r*Gamma(s) is a closed interval [s_enter, s_exit]. With u = j s / r the
// membership test k <= r s f(j s / r) becomes
//
//     u f(u) >= j k / r^2,
//
// and u f(u) is unimodal, so the interval endpoints are the two roots of a
// scalar equation. For the p-circle this is a quadratic in v = u^p.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <queue>
#include <span>
#include <stdexcept>
#include <vector>

#include "lattice/counting.hpp"
#include "lattice/curves.hpp"
#include "lattice/numeric.hpp"

namespace lattice {

struct Event {
  std::int64_t j = 0;
  std::int64_t k = 0;
  double s_enter = 0;
  double s_exit = 0;
};

struct Interval {
  double lo = 0;
  double hi = 0;
  bool lo_closed = true;
  bool hi_closed = true;

  bool contains(double s) const {
    const bool above = lo_closed ? s >= lo : s > lo;
    const bool below = hi_closed ? s <= hi : s < hi;
    return above && below;
  }
  double midpoint() const { return hi == kInf ? lo * 2 : 0.5 * (lo + hi); }
};

struct StretchResult {
  double r = 0;
  std::int64_t extremal_count = 0;
  // Disjoint, increasing.
  std::vector<Interval> intervals;
  double sup_s = kNaN;
  // No lattice point is ever enclosed, so every s > 0 attains the count 0.
  bool degenerate = false;

  double inf_s() const { return intervals.empty() ? kNaN : intervals.front().lo; }
  bool contains(double s) const {
    if (degenerate) return s > 0;
    return std::any_of(intervals.begin(), intervals.end(),
                       [s](const Interval& i) { return i.contains(s); });
  }
};

struct SweepOptions {
  // Above this radius the events are merged lazily, column by column,
  // instead of being materialized and sorted.
  double stream_threshold = 1e4;
};

// Breakpoints closer than this (relative) are treated as one s-value.
inline constexpr double kTieTolerance = 1e-12;

// Membership intervals [s_enter, s_exit] of lattice points for one radius.
class StretchMembership {
 public:
  static StretchMembership for_curve(const Curve& curve, double r) {
    if (!(r > 0) || !std::isfinite(r)) throw std::invalid_argument("sweep: r must be positive and finite");
    StretchMembership m(curve);
    m.r_ = r;
    m.area_ = curve.max_rectangle();
    switch (curve.kind()) {
      case CurveKind::diamond:
        m.kind_ = Kind::line;
        break;
      case CurveKind::pcircle:
        m.kind_ = Kind::power;
        m.p_ = curve.exponent();
        break;
      case CurveKind::square:
        m.kind_ = Kind::square;
        break;
      case CurveKind::custom:
        m.kind_ = Kind::custom;
        m.u_peak_ = golden_max([&](double u) { return u * curve.f(u); }, 0.0, curve.L()).first;
        break;
    }
    return m;
  }

  // Points (j - shift, k - shift), j, k >= 1, under the line a s + b / s <= r.
  static StretchMembership shifted_line(double r, double shift) {
    if (!(r > 0) || !std::isfinite(r)) throw std::invalid_argument("sweep: r must be positive and finite");
    if (!(shift >= 0 && shift < 1)) throw std::invalid_argument("sweep: shift must lie in [0, 1)");
    StretchMembership m(diamond());
    m.kind_ = Kind::line;
    m.r_ = r;
    m.shift_ = shift;
    m.area_ = 0.25;
    return m;
  }

  double r() const { return r_; }

  std::int64_t j_bound() const {
    const double base = 1.0 - shift_;
    return floor_snap(shift_ + area_ * r_ * r_ / base);
  }

  std::int64_t k_bound(std::int64_t j) const {
    const double a = static_cast<double>(j) - shift_;
    return floor_snap(shift_ + area_ * r_ * r_ / a);
  }

  bool interval(std::int64_t j, std::int64_t k, double& lo, double& hi) const {
    const double a = static_cast<double>(j) - shift_;
    const double b = static_cast<double>(k) - shift_;
    switch (kind_) {
      case Kind::line:
        return line_interval(a, b, r_, lo, hi);
      case Kind::square:
        lo = b / r_;
        hi = r_ / a;
        return lo <= hi * (1 + kTieTolerance);
      case Kind::power:
        return power_interval(a, b, lo, hi);
      case Kind::custom:
        return custom_interval(a, b, lo, hi);
    }
    return false;
  }

  // Lattice points from the same column enter in increasing k order and
  // leave in decreasing k order.
  template <class Fn>
  void for_each(Fn&& fn) const {
    const std::int64_t jmax = j_bound();
    for (std::int64_t j = 1; j <= jmax; ++j) {
      const std::int64_t kmax = k_bound(j);
      for (std::int64_t k = 1; k <= kmax; ++k) {
        double lo = 0;
        double hi = 0;
        if (!interval(j, k, lo, hi)) break;
        fn(j, k, lo, hi);
      }
    }
  }

 private:
  enum class Kind { line, power, square, custom };

  explicit StretchMembership(Curve curve) : curve_(std::move(curve)) {}

  // a s + b / s <= r  <=>  a s^2 - r s + b <= 0.
  static bool line_interval(double a, double b, double r, double& lo, double& hi) {
    const double twice_root_ab = 2.0 * std::sqrt(a * b);
    double disc = (r - twice_root_ab) * (r + twice_root_ab);
    if (disc < 0) {
      if (disc < -kTieTolerance * r * r) return false;
      disc = 0;
    }
    const double root = std::sqrt(disc);
    hi = (r + root) / (2.0 * a);
    lo = 2.0 * b / (r + root);
    return true;
  }

  // u^p (1 - u^p) = c^p with c = a b / r^2: a quadratic in v = u^p.
  bool power_interval(double a, double b, double& lo, double& hi) const {
    const double c = a * b / (r_ * r_);
    const double cp = p_ == 2.0 ? c * c : std::pow(c, p_);
    double disc = 1.0 - 4.0 * cp;
    if (disc < 0) {
      if (disc < -kTieTolerance) return false;
      disc = 0;
    }
    const double root = std::sqrt(disc);
    const double v_lo = 2.0 * cp / (1.0 + root);
    const double v_hi = 0.5 * (1.0 + root);
    const double scale = r_ / a;
    if (p_ == 2.0) {
      lo = scale * std::sqrt(v_lo);
      hi = scale * std::sqrt(v_hi);
    } else {
      lo = scale * std::pow(v_lo, 1.0 / p_);
      hi = scale * std::pow(v_hi, 1.0 / p_);
    }
    return true;
  }

  bool custom_interval(double a, double b, double& lo, double& hi) const {
    const double c = a * b / (r_ * r_);
    auto excess = [&](double u) { return u * curve_.f(u) - c; };
    const double peak = excess(u_peak_);
    if (peak < 0) {
      if (peak < -kTieTolerance * c) return false;
      lo = hi = r_ * u_peak_ / a;
      return true;
    }
    const double u_lo = bisect(excess, 0.0, u_peak_);
    const double u_hi = bisect(excess, u_peak_, curve_.L());
    lo = r_ * u_lo / a;
    hi = r_ * u_hi / a;
    return true;
  }

  Curve curve_;
  Kind kind_ = Kind::line;
  double r_ = 1;
  double p_ = 1;
  double shift_ = 0;
  double area_ = 0.25;
  double u_peak_ = 0;
};

// Diamond (p = 1): closed-form roots of j s^2 - r s + k = 0 for every
// positive lattice point with 4 j k <= r^2.
inline std::vector<Event> events_p1(double r) {
  std::vector<Event> out;
  StretchMembership::for_curve(diamond(), r).for_each([&](std::int64_t j, std::int64_t k, double lo, double hi) {
    out.push_back(Event{j, k, lo, hi});
  });
  return out;
}

// p-circle with 1 < p < inf. phi(s) = (j s)^p + (k / s)^p is strictly
// convex with minimum 2 (j k)^(p/2) at s* = sqrt(k / j); the two crossings
// of r^p are located by bisection on the monotone branches.
inline std::vector<Event> events_p(double p, double r) {
  if (!(p > 1) || !std::isfinite(p)) throw std::invalid_argument("events_p: p must be finite and > 1");
  if (!(r > 0) || !std::isfinite(r)) throw std::invalid_argument("events_p: r must be positive");
  std::vector<Event> out;
  const double rp = std::pow(r, p);
  const double jk_limit = r * r * std::pow(2.0, -2.0 / p);
  for (std::int64_t j = 1; static_cast<double>(j) <= jk_limit * (1 + 1e-12); ++j) {
    const double jd = static_cast<double>(j);
    for (std::int64_t k = 1; jd * static_cast<double>(k) <= jk_limit * (1 + 1e-12); ++k) {
      const double kd = static_cast<double>(k);
      auto excess = [&](double s) { return (std::pow(jd * s / r, p) + std::pow(kd / (s * r), p)) - 1.0; };
      const double s_star = std::sqrt(kd / jd);
      const double minimum = 2.0 * std::pow(jd * kd, p / 2.0);
      if (minimum > rp * (1 + kTieTolerance)) break;
      if (minimum >= rp * (1 - kTieTolerance)) {
        out.push_back(Event{j, k, s_star, s_star});
        continue;
      }
      const double enter = bisect(excess, kd / r, s_star, 1e-15);
      const double exit = bisect(excess, s_star, r / jd, 1e-15);
      out.push_back(Event{j, k, enter, exit});
    }
  }
  return out;
}

// Events for any supported curve, using the closed forms where available.
inline std::vector<Event> events(const Curve& curve, double r) {
  std::vector<Event> out;
  StretchMembership::for_curve(curve, r).for_each([&](std::int64_t j, std::int64_t k, double lo, double hi) {
    out.push_back(Event{j, k, lo, hi});
  });
  return out;
}

// One piece of the step function s -> count: either an open gap between
// consecutive breakpoints or a single breakpoint.
struct Segment {
  double lo = 0;
  double hi = 0;
  bool lo_closed = false;
  bool hi_closed = false;
  std::int64_t count = 0;
};

namespace detail {

class VectorSource {
 public:
  explicit VectorSource(std::span<const double> values) : values_(values) {}
  bool empty() const { return pos_ == values_.size(); }
  double peek() const { return values_[pos_]; }
  void pop() { ++pos_; }

 private:
  std::span<const double> values_;
  std::size_t pos_ = 0;
};

// Lazy k-way merge of per-column event sequences.
class ColumnMergeSource {
 public:
  ColumnMergeSource(const StretchMembership& m, bool enters) : m_(&m), enters_(enters) {
    const std::int64_t jmax = m.j_bound();
    for (std::int64_t j = 1; j <= jmax; ++j) {
      std::int64_t kmax = m.k_bound(j);
      double lo = 0;
      double hi = 0;
      while (kmax >= 1 && !m.interval(j, kmax, lo, hi)) --kmax;
      if (kmax < 1) break;
      if (enters_) {
        push(j, 1, kmax);
      } else {
        push(j, kmax, kmax);
      }
    }
  }
  bool empty() const { return heap_.empty(); }
  double peek() const { return heap_.top().value; }
  void pop() {
    Cursor c = heap_.top();
    heap_.pop();
    const std::int64_t next = enters_ ? c.k + 1 : c.k - 1;
    if (next >= 1 && next <= c.kmax) push(c.j, next, c.kmax);
  }

 private:
  struct Cursor {
    double value;
    std::int64_t j;
    std::int64_t k;
    std::int64_t kmax;
    bool operator>(const Cursor& o) const { return value > o.value; }
  };

  void push(std::int64_t j, std::int64_t k, std::int64_t kmax) {
    double lo = 0;
    double hi = 0;
    m_->interval(j, k, lo, hi);
    heap_.push(Cursor{enters_ ? lo : hi, j, k, kmax});
  }

  const StretchMembership* m_;
  bool enters_;
  std::priority_queue<Cursor, std::vector<Cursor>, std::greater<>> heap_;
};

template <class A, class B>
class MergedSource {
 public:
  MergedSource(A& a, B& b) : a_(a), b_(b) {}
  bool empty() const { return a_.empty() && b_.empty(); }
  double peek() const {
    if (a_.empty()) return b_.peek();
    if (b_.empty()) return a_.peek();
    return std::min(a_.peek(), b_.peek());
  }
  void pop() {
    if (b_.empty() || (!a_.empty() && a_.peek() <= b_.peek())) {
      a_.pop();
    } else {
      b_.pop();
    }
  }

 private:
  A& a_;
  B& b_;
};

// Walks the step function from s = 0+ to s = +inf. `active` is the count on
// the initial gap (0, first breakpoint).
template <class EnterSource, class ExitSource, class Visitor>
void scan(EnterSource& enters, ExitSource& exits, std::int64_t active, Visitor&& visit) {
  double prev = 0.0;
  while (!enters.empty() || !exits.empty()) {
    double x = kInf;
    if (!enters.empty()) x = enters.peek();
    if (!exits.empty()) x = std::min(x, exits.peek());
    const double limit = x + kTieTolerance * x;
    std::int64_t entered = 0;
    std::int64_t left = 0;
    while (!enters.empty() && enters.peek() <= limit) {
      enters.pop();
      ++entered;
    }
    while (!exits.empty() && exits.peek() <= limit) {
      exits.pop();
      ++left;
    }
    visit(Segment{prev, x, false, false, active});
    active += entered;
    visit(Segment{x, x, true, true, active});
    active -= left;
    prev = x;
  }
  visit(Segment{prev, kInf, false, false, active});
}

enum class Goal { maximize, minimize };

// Tracks the extremal count and the union of segments attaining it,
// restricted to segments inside [window_lo, window_hi].
class ExtremumTracker {
 public:
  ExtremumTracker(Goal goal, double window_lo, double window_hi)
      : goal_(goal), lo_(window_lo), hi_(window_hi) {}

  void operator()(const Segment& seg) {
    if (seg.lo < lo_ || seg.hi > hi_) {
      extending_ = false;
      return;
    }
    const bool better = !seen_ || (goal_ == Goal::maximize ? seg.count > best_ : seg.count < best_);
    if (better) {
      seen_ = true;
      best_ = seg.count;
      intervals_.clear();
      intervals_.push_back(Interval{seg.lo, seg.hi, seg.lo_closed, seg.hi_closed});
      extending_ = true;
    } else if (seg.count == best_) {
      if (extending_) {
        intervals_.back().hi = seg.hi;
        intervals_.back().hi_closed = seg.hi_closed;
      } else {
        intervals_.push_back(Interval{seg.lo, seg.hi, seg.lo_closed, seg.hi_closed});
      }
      extending_ = true;
    } else {
      extending_ = false;
    }
  }

  StretchResult result(double r) const {
    StretchResult out;
    out.r = r;
    out.extremal_count = best_;
    out.intervals = intervals_;
    if (!intervals_.empty()) out.sup_s = intervals_.back().hi;
    return out;
  }

 private:
  Goal goal_;
  double lo_;
  double hi_;
  bool seen_ = false;
  bool extending_ = false;
  std::int64_t best_ = 0;
  std::vector<Interval> intervals_;
};

struct AxisEvents {
  std::vector<double> enters;  // sorted
  std::vector<double> exits;   // sorted
  std::int64_t initially_active = 0;
  double window_lo = 0;
  double window_hi = kInf;
};

// Points on the axes for the closed-quadrant count, truncated to the
// s-window outside of which the count exceeds its value at s = 1.
inline AxisEvents axis_events(const Curve& curve, double r) {
  AxisEvents ax;
  const std::int64_t bound = count(curve, r, 1.0, Quadrant::nonnegative) + 1;
  ax.exits.reserve(static_cast<std::size_t>(bound));
  ax.enters.reserve(static_cast<std::size_t>(bound));
  // (j, 0) is inside iff s <= r L / j; (0, k) iff s >= k / (r M).
  for (std::int64_t j = bound; j >= 1; --j) ax.exits.push_back(r * curve.L() / static_cast<double>(j));
  for (std::int64_t k = 1; k <= bound; ++k) ax.enters.push_back(static_cast<double>(k) / (r * curve.M()));
  ax.initially_active = bound + 1;  // x-axis points and the origin
  ax.window_lo = ax.exits.front();
  ax.window_hi = ax.enters.back();
  return ax;
}

template <class Visitor>
void sweep_positive(const StretchMembership& m, const SweepOptions& opt, Visitor&& visit,
                    const AxisEvents* axis = nullptr) {
  const std::int64_t initial = axis ? axis->initially_active : 0;
  if (m.r() > opt.stream_threshold) {
    ColumnMergeSource enters(m, true);
    ColumnMergeSource exits(m, false);
    std::span<const double> none;
    VectorSource axis_enters(axis ? std::span<const double>(axis->enters) : none);
    VectorSource axis_exits(axis ? std::span<const double>(axis->exits) : none);
    MergedSource all_enters(enters, axis_enters);
    MergedSource all_exits(exits, axis_exits);
    scan(all_enters, all_exits, initial, visit);
    return;
  }
  std::vector<double> enters;
  std::vector<double> exits;
  m.for_each([&](std::int64_t, std::int64_t, double lo, double hi) {
    enters.push_back(lo);
    exits.push_back(hi);
  });
  if (axis) {
    enters.insert(enters.end(), axis->enters.begin(), axis->enters.end());
    exits.insert(exits.end(), axis->exits.begin(), axis->exits.end());
  }
  std::sort(enters.begin(), enters.end());
  std::sort(exits.begin(), exits.end());
  VectorSource es(enters);
  VectorSource xs(exits);
  scan(es, xs, initial, visit);
}

inline StretchResult maximize_membership(const StretchMembership& m, const SweepOptions& opt) {
  ExtremumTracker tracker(Goal::maximize, 0.0, kInf);
  sweep_positive(m, opt, tracker);
  StretchResult out = tracker.result(m.r());
  if (out.extremal_count == 0) {
    out.degenerate = true;
    out.intervals.clear();
    out.sup_s = kNaN;
  }
  return out;
}

}  // namespace detail

// S(r): the s-values maximizing the positive-quadrant count, as closed
// intervals, with the maximal count.
inline StretchResult maximize_count(const Curve& curve, double r, const SweepOptions& opt = {}) {
  return detail::maximize_membership(StretchMembership::for_curve(curve, r), opt);
}

inline StretchResult maximize_count(double p, double r, const SweepOptions& opt = {}) {
  return maximize_count(curve_for_exponent(p), r, opt);
}

// The closed-quadrant analogue: s-values minimizing the count including
// axis points. The optimal set is generally a union of open intervals.
inline StretchResult minimize_count_nonneg(const Curve& curve, double r, const SweepOptions& opt = {}) {
  const auto m = StretchMembership::for_curve(curve, r);
  const auto axis = detail::axis_events(curve, r);
  detail::ExtremumTracker tracker(detail::Goal::minimize, axis.window_lo, axis.window_hi);
  detail::sweep_positive(m, opt, tracker, &axis);
  return tracker.result(r);
}

inline StretchResult minimize_count_nonneg(double p, double r, const SweepOptions& opt = {}) {
  return minimize_count_nonneg(curve_for_exponent(p), r, opt);
}

// The step function s -> N(r, s) for inspection and testing at moderate r.
// In nonnegative mode only the segments inside the window where the axis
// points are tracked are returned: [r L / (U + 1), (U + 1) / (r M)] with
// U the closed count at s = 1.
inline std::vector<Segment> count_profile(const Curve& curve, double r,
                                          Quadrant mode = Quadrant::positive) {
  std::vector<Segment> out;
  const auto m = StretchMembership::for_curve(curve, r);
  auto collect = [&](const Segment& s) { out.push_back(s); };
  SweepOptions materialize;
  materialize.stream_threshold = kInf;
  if (mode == Quadrant::positive) {
    detail::sweep_positive(m, materialize, collect);
  } else {
    const auto axis = detail::axis_events(curve, r);
    detail::sweep_positive(m, materialize, collect, &axis);
    std::erase_if(out, [&](const Segment& s) { return s.lo < axis.window_lo || s.hi > axis.window_hi; });
  }
  return out;
}

}  // namespace lattice
