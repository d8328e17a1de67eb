#pragma once

// Concave, strictly decreasing first-quadrant curves y = f(x), 0 <= x <= L,
// with f(0) = M and f(L) = 0, together with the inverse x = g(y) and the
// first two derivatives of both. The p-circle |x|^p + |y|^p = 1 family is
// built in; other curves are assembled from sampled tables.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lattice/error.hpp"
#include "lattice/numeric.hpp"

namespace lattice {

enum class CurveKind { pcircle, diamond, square, custom };

struct Point {
  double x = 0;
  double y = 0;
};

// One graph representation of the curve: value and derivatives plus the
// partition of (0, endpoint] on which the second derivative is monotonic.
struct CurveBranch {
  std::function<double(double)> value;
  std::function<double(double)> first;
  std::function<double(double)> second;
  // 0 = t_0 < t_1 < ... < t_l, where t_l is the corner coordinate.
  std::vector<double> partition;
};

// Immutable handle; copies share the underlying evaluators.
class Curve {
 public:
  Curve(CurveKind kind, double exponent, double L, double M, CurveBranch f, CurveBranch g,
        Point corner, std::string label)
      : impl_(std::make_shared<const Impl>(Impl{kind, exponent, L, M, std::move(f), std::move(g),
                                                corner, std::move(label)})) {}

  CurveKind kind() const { return impl_->kind; }
  // p for the p-circle family (1 for the diamond, +inf for the square);
  // NaN for custom curves.
  double exponent() const { return impl_->exponent; }
  double L() const { return impl_->L; }
  double M() const { return impl_->M; }
  Point corner() const { return impl_->corner; }
  const std::string& label() const { return impl_->label; }

  // f on [0, L]; clamped to M and 0 outside.
  double f(double x) const {
    if (x <= 0) return impl_->M;
    if (x >= impl_->L) return 0.0;
    return impl_->f.value(x);
  }
  double df(double x) const {
    open(x, impl_->L, "f'");
    return impl_->f.first(x);
  }
  double d2f(double x) const {
    open(x, impl_->L, "f''");
    return impl_->f.second(x);
  }

  // g on [0, M]; clamped to L and 0 outside.
  double g(double y) const {
    if (y <= 0) return impl_->L;
    if (y >= impl_->M) return 0.0;
    return impl_->g.value(y);
  }
  double dg(double y) const {
    open(y, impl_->M, "g'");
    return impl_->g.first(y);
  }
  double d2g(double y) const {
    open(y, impl_->M, "g''");
    return impl_->g.second(y);
  }

  std::span<const double> partition_f() const { return impl_->f.partition; }
  std::span<const double> partition_g() const { return impl_->g.partition; }

  // The p-circle family is symmetric under swapping the axes (f == g).
  bool symmetric() const { return impl_->kind != CurveKind::custom; }

  // Largest area of an axis-parallel rectangle with a corner at the origin
  // and the opposite corner on the curve: max over x of x f(x).
  double max_rectangle() const {
    switch (impl_->kind) {
      case CurveKind::pcircle:
        return std::pow(2.0, -2.0 / impl_->exponent);
      case CurveKind::diamond:
        return 0.25;
      case CurveKind::square:
        return 1.0;
      case CurveKind::custom:
        break;
    }
    // x f(x) is log-concave, hence unimodal.
    return golden_max([this](double x) { return x * f(x); }, 0.0, impl_->L).second;
  }

 private:
  struct Impl {
    CurveKind kind;
    double exponent;
    double L;
    double M;
    CurveBranch f;
    CurveBranch g;
    Point corner;
    std::string label;
  };

  static void open(double t, double end, const char* what) {
    if (!(t > 0 && t < end)) {
      throw DomainError(std::string(what) + " is only defined on the open interval (0, " +
                        std::to_string(end) + "), got " + std::to_string(t));
    }
  }

  std::shared_ptr<const Impl> impl_;
};

namespace detail {

// 1 - x^p computed without cancellation near x = 1.
inline double one_minus_pow(double x, double p) { return -std::expm1(p * std::log(x)); }

inline CurveBranch pcircle_branch(double p, double corner) {
  CurveBranch b;
  b.value = [p](double x) { return std::pow(one_minus_pow(x, p), 1.0 / p); };
  b.first = [p](double x) {
    return -std::pow(x, p - 1.0) * std::pow(one_minus_pow(x, p), 1.0 / p - 1.0);
  };
  b.second = [p](double x) {
    return -(p - 1.0) * std::pow(x, p - 2.0) * std::pow(one_minus_pow(x, p), 1.0 / p - 2.0);
  };
  // f''' = -(p-1) x^(p-3) (1-x^p)^(1/p-3) ((1+p) x^p + p - 2) changes sign
  // at most once in (0, 1), and only when p < 2.
  auto third = [p](double x) {
    return -(p - 1.0) * std::pow(x, p - 3.0) * std::pow(one_minus_pow(x, p), 1.0 / p - 3.0) *
           ((1.0 + p) * std::pow(x, p) + p - 2.0);
  };
  b.partition = {0.0};
  const double lo = corner * 1e-9;
  if (p < 2.0 && (third(lo) < 0) != (third(corner) < 0)) {
    b.partition.push_back(bisect(third, lo, corner, 1e-12));
  }
  b.partition.push_back(corner);
  return b;
}

}  // namespace detail

// The p-circle |x|^p + |y|^p = 1 in the first quadrant, for 1 < p < inf;
// p = +inf gives the unit square.
inline Curve pcircle(double p);

inline Curve unit_square() {
  CurveBranch b;
  b.value = [](double) { return 1.0; };
  b.first = [](double) { return 0.0; };
  b.second = [](double) { return 0.0; };
  b.partition = {0.0, 1.0};
  return Curve(CurveKind::square, kInf, 1.0, 1.0, b, b, Point{1.0, 1.0}, "square");
}

// The p = 1 circle: the segment x + y = 1.
inline Curve diamond() {
  CurveBranch b;
  b.value = [](double x) { return 1.0 - x; };
  b.first = [](double) { return -1.0; };
  b.second = [](double) { return 0.0; };
  b.partition = {0.0, 0.5};
  return Curve(CurveKind::diamond, 1.0, 1.0, 1.0, b, b, Point{0.5, 0.5}, "diamond");
}

inline Curve pcircle(double p) {
  if (p == kInf) return unit_square();
  if (!std::isfinite(p)) throw std::invalid_argument("pcircle: exponent must be finite or +inf");
  if (!(p > 1.0)) throw std::invalid_argument("pcircle: exponent must exceed 1 (use diamond() for p = 1)");
  const double corner = std::pow(2.0, -1.0 / p);
  CurveBranch b = detail::pcircle_branch(p, corner);
  char label[64];
  std::snprintf(label, sizeof label, "pcircle(%.12g)", p);
  return Curve(CurveKind::pcircle, p, 1.0, 1.0, b, b, Point{corner, corner}, label);
}

// Any member of the family, including p = 1 and p = inf.
inline Curve curve_for_exponent(double p) {
  if (p == 1.0) return diamond();
  return pcircle(p);
}

// Sampled description of a custom curve. f is interpolated by cubic
// Hermite pieces through (x, f, df); f'' is interpolated linearly. The
// inverse g and its derivatives are derived from f.
struct CurveTable {
  std::vector<double> x;
  std::vector<double> f;
  std::vector<double> df;
  std::vector<double> d2f;
  std::vector<double> partition_f;  // interior partition points, optional
  std::vector<double> partition_g;
  bool has_corner = false;
  Point corner;
};

namespace detail {

struct HermiteTable {
  std::vector<double> x, f, df, d2f;

  std::size_t cell(double t) const {
    auto it = std::upper_bound(x.begin(), x.end(), t);
    std::size_t i = it == x.begin() ? 0 : static_cast<std::size_t>(it - x.begin()) - 1;
    return std::min(i, x.size() - 2);
  }
  double value(double t) const {
    const std::size_t i = cell(t);
    const double h = x[i + 1] - x[i];
    const double u = (t - x[i]) / h;
    const double h00 = (1 + 2 * u) * (1 - u) * (1 - u);
    const double h10 = u * (1 - u) * (1 - u);
    const double h01 = u * u * (3 - 2 * u);
    const double h11 = u * u * (u - 1);
    return h00 * f[i] + h10 * h * df[i] + h01 * f[i + 1] + h11 * h * df[i + 1];
  }
  double first(double t) const {
    const std::size_t i = cell(t);
    const double h = x[i + 1] - x[i];
    const double u = (t - x[i]) / h;
    const double d00 = 6 * u * u - 6 * u;
    const double d10 = 3 * u * u - 4 * u + 1;
    const double d01 = -6 * u * u + 6 * u;
    const double d11 = 3 * u * u - 2 * u;
    return (d00 * f[i] + d01 * f[i + 1]) / h + d10 * df[i] + d11 * df[i + 1];
  }
  double second(double t) const {
    const std::size_t i = cell(t);
    const double u = (t - x[i]) / (x[i + 1] - x[i]);
    return (1 - u) * d2f[i] + u * d2f[i + 1];
  }
};

inline std::vector<double> make_partition(std::vector<double> interior, double end) {
  std::vector<double> out{0.0};
  std::sort(interior.begin(), interior.end());
  for (double t : interior) {
    if (t > out.back() && t < end) out.push_back(t);
  }
  out.push_back(end);
  return out;
}

}  // namespace detail

inline Curve custom_curve(const CurveTable& table) {
  const std::size_t n = table.x.size();
  if (n < 3 || table.f.size() != n || table.df.size() != n || table.d2f.size() != n) {
    throw std::invalid_argument("custom curve: x, f, df, d2f must have equal length >= 3");
  }
  if (table.x.front() != 0.0) throw std::invalid_argument("custom curve: x must start at 0");
  for (std::size_t i = 1; i < n; ++i) {
    if (!(table.x[i] > table.x[i - 1])) throw std::invalid_argument("custom curve: x must increase");
    if (!(table.f[i] < table.f[i - 1])) {
      throw PreconditionError("custom curve: f must be strictly decreasing", table.x[i]);
    }
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double left = (table.f[i] - table.f[i - 1]) / (table.x[i] - table.x[i - 1]);
    const double right = (table.f[i + 1] - table.f[i]) / (table.x[i + 1] - table.x[i]);
    if (right > left + 1e-12 * (1 + std::abs(left))) {
      throw PreconditionError("custom curve: samples are not concave", table.x[i]);
    }
  }
  if (std::abs(table.f.back()) > 1e-12 * table.f.front()) {
    throw std::invalid_argument("custom curve: f must vanish at the last sample");
  }

  auto hermite = std::make_shared<detail::HermiteTable>(
      detail::HermiteTable{table.x, table.f, table.df, table.d2f});
  hermite->f.back() = 0.0;
  const double L = table.x.back();
  const double M = table.f.front();

  auto fvalue = [hermite](double x) { return hermite->value(x); };
  // g by inversion of f.
  auto gvalue = [hermite, L, M](double y) {
    if (y <= 0) return L;
    if (y >= M) return 0.0;
    return bisect([&](double x) { return hermite->value(x) - y; }, 0.0, L, 1e-15);
  };

  Point corner = table.corner;
  if (!table.has_corner) {
    // Where the curve meets the diagonal of its bounding box.
    const double cx = bisect([&](double x) { return hermite->value(x) - (M / L) * x; }, 0.0, L, 1e-15);
    corner = Point{cx, hermite->value(cx)};
  }

  CurveBranch fb;
  fb.value = fvalue;
  fb.first = [hermite](double x) { return hermite->first(x); };
  fb.second = [hermite](double x) { return hermite->second(x); };
  fb.partition = detail::make_partition(table.partition_f, corner.x);

  CurveBranch gb;
  gb.value = gvalue;
  gb.first = [hermite, gvalue](double y) { return 1.0 / hermite->first(gvalue(y)); };
  gb.second = [hermite, gvalue](double y) {
    const double x = gvalue(y);
    const double d1 = hermite->first(x);
    return -hermite->second(x) / (d1 * d1 * d1);
  };
  gb.partition = detail::make_partition(table.partition_g, corner.y);

  return Curve(CurveKind::custom, kNaN, L, M, std::move(fb), std::move(gb), corner, "custom");
}

// Area enclosed by the curve and the coordinate axes.
inline double quadrant_area(const Curve& curve) {
  switch (curve.kind()) {
    case CurveKind::diamond:
      return 0.5;
    case CurveKind::square:
      return 1.0;
    case CurveKind::pcircle:
      if (curve.exponent() == 2.0) return std::numbers::pi / 4.0;
      return integrate_tanh_sinh([&](double x) { return curve.f(x); }, 0.0, curve.L(), 1e-13);
    case CurveKind::custom:
      break;
  }
  return integrate_smooth([&](double x) { return curve.f(x); }, 0.0, curve.L());
}

}  // namespace lattice
