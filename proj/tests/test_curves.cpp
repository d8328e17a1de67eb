#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "lattice/curves.hpp"
#include "oracles.hpp"

using namespace lattice;

TEST(PCircle, PythagoreanPoint) {
  const Curve c = pcircle(2);
  EXPECT_NEAR(c.f(0.6), 0.8, 1e-15);
  EXPECT_NEAR(c.g(0.8), 0.6, 1e-15);
}

TEST(PCircle, InterceptsAndCorner) {
  for (double p : {1.5, 2.0, 3.0, 7.0}) {
    const Curve c = pcircle(p);
    EXPECT_EQ(c.L(), 1.0);
    EXPECT_EQ(c.M(), 1.0);
    EXPECT_DOUBLE_EQ(c.corner().x, std::pow(2.0, -1 / p));
    EXPECT_NEAR(c.f(c.corner().x), c.corner().y, 1e-14);
  }
  EXPECT_NEAR(pcircle(2).corner().x, 0.70710678118654752, 1e-15);
}

TEST(PCircle, DerivativesMatchFiniteDifferences) {
  const double h = 1e-5;
  for (double p : {1.5, 2.0, 3.0, 4.0}) {
    const Curve c = pcircle(p);
    for (double x = 0.05; x <= 0.95 + 1e-12; x += 0.05) {
      const double fd1 = (c.f(x + h) - c.f(x - h)) / (2 * h);
      const double fd2 = (c.df(x + h) - c.df(x - h)) / (2 * h);
      EXPECT_NEAR(c.df(x), fd1, 1e-6 * std::abs(fd1)) << "p=" << p << " x=" << x;
      EXPECT_NEAR(c.d2f(x), fd2, 1e-6 * std::abs(fd2)) << "p=" << p << " x=" << x;
    }
  }
}

TEST(PCircle, SecondDerivativeCubeAtHalf) {
  // Second difference of (1 - x^3)^(1/3) at 0.5.
  const double h = 1e-4;
  auto f = [](double x) { return std::cbrt(1 - x * x * x); };
  const double fd = (f(0.5 + h) - 2 * f(0.5) + f(0.5 - h)) / (h * h);
  EXPECT_NEAR(pcircle(3).d2f(0.5), fd, 1e-6 * std::abs(fd));
}

TEST(PCircle, SymmetricAndInverse) {
  for (double p : {1.25, 2.0, 3.5}) {
    const Curve c = pcircle(p);
    EXPECT_TRUE(c.symmetric());
    for (double x = 0.01; x < 1; x += 0.01) {
      EXPECT_EQ(c.f(x), c.g(x));
      EXPECT_NEAR(c.g(c.f(x)), x, 1e-9);
    }
  }
}

TEST(PCircle, DecreasingAndConcave) {
  oracle::Gen gen(7);
  for (double p : {1.1, 1.5, 2.0, 3.0, 10.0}) {
    const Curve c = pcircle(p);
    for (int i = 0; i < 500; ++i) {
      double a = gen.uniform(0, 1);
      double b = gen.uniform(0, 1);
      if (a > b) std::swap(a, b);
      if (a == b) continue;
      EXPECT_GT(c.f(a), c.f(b));
      EXPECT_GE(c.f(0.5 * (a + b)), 0.5 * (c.f(a) + c.f(b)) - 1e-15);
    }
  }
}

TEST(PCircle, SecondDerivativeNegativeAtCorner) {
  for (double p : {1.01, 1.5, 2.0, 3.0, 8.0, 50.0}) {
    const Curve c = pcircle(p);
    EXPECT_LT(c.d2f(c.corner().x), 0.0) << p;
  }
}

TEST(PCircle, PartitionAtThirdDerivativeSignChange) {
  for (double p : {1.2, 1.5, 1.8}) {
    const Curve c = pcircle(p);
    const auto part = c.partition_f();
    ASSERT_EQ(part.size(), 3u);
    EXPECT_EQ(part[0], 0.0);
    EXPECT_NEAR(part[1], std::pow((2 - p) / (1 + p), 1 / p), 1e-10);
    EXPECT_DOUBLE_EQ(part[2], std::pow(2.0, -1 / p));
  }
  for (double p : {2.0, 3.0, 4.0}) {
    const Curve c = pcircle(p);
    const auto part = c.partition_f();
    ASSERT_EQ(part.size(), 2u);
    EXPECT_DOUBLE_EQ(part[1], std::pow(2.0, -1 / p));
  }
}

TEST(PCircle, DerivativesRejectEndpoints) {
  const Curve c = pcircle(2);
  EXPECT_THROW(c.df(0.0), DomainError);
  EXPECT_THROW(c.df(1.0), DomainError);
  EXPECT_THROW(c.d2f(0.0), DomainError);
  EXPECT_THROW(c.d2g(1.0), DomainError);
  EXPECT_NO_THROW(c.d2f(0.999));
}

TEST(PCircle, RejectsBadExponents) {
  EXPECT_THROW(pcircle(1.0), std::invalid_argument);
  EXPECT_THROW(pcircle(0.5), std::invalid_argument);
  EXPECT_THROW(pcircle(std::nan("")), std::invalid_argument);
  EXPECT_THROW(pcircle(-kInf), std::invalid_argument);
  EXPECT_EQ(pcircle(kInf).kind(), CurveKind::square);
  EXPECT_EQ(curve_for_exponent(1.0).kind(), CurveKind::diamond);
}

TEST(Area, ClosedForms) {
  EXPECT_NEAR(quadrant_area(pcircle(2)), std::numbers::pi / 4, 1e-10);
  EXPECT_EQ(quadrant_area(diamond()), 0.5);
  EXPECT_EQ(quadrant_area(unit_square()), 1.0);
}

TEST(Area, QuadratureMatchesGammaFormula) {
  for (double p : {1.1, 1.5, 3.0, 4.0, 12.0}) {
    EXPECT_NEAR(quadrant_area(pcircle(p)), oracle::pcircle_area(p), 1e-10) << p;
  }
}

TEST(Area, CubeCircleAgainstRomberg) {
  // Substituting x = 1 - t^2 removes the endpoint singularity.
  auto integrand = [](double t) {
    const double x = 1 - t * t;
    return std::cbrt(1 - x * x * x) * 2 * t;
  };
  const double ref = oracle::romberg(integrand, 0.0, 1.0);
  EXPECT_NEAR(quadrant_area(pcircle(3)), ref, 1e-10);
}

namespace {

// Samples of f(x) = 1 - x^2 on [0, 1].
CurveTable parabola_table(int n) {
  CurveTable t;
  for (int i = 0; i <= n; ++i) {
    const double x = static_cast<double>(i) / n;
    t.x.push_back(x);
    t.f.push_back(1 - x * x);
    t.df.push_back(-2 * x);
    t.d2f.push_back(-2);
  }
  return t;
}

}  // namespace

TEST(CustomCurve, ParabolaInterpolatesExactly) {
  const Curve c = custom_curve(parabola_table(16));
  EXPECT_EQ(c.kind(), CurveKind::custom);
  EXPECT_EQ(c.L(), 1.0);
  EXPECT_EQ(c.M(), 1.0);
  for (double x = 0.013; x < 1; x += 0.037) {
    EXPECT_NEAR(c.f(x), 1 - x * x, 1e-14);
    EXPECT_NEAR(c.df(x), -2 * x, 1e-13);
    EXPECT_NEAR(c.d2f(x), -2, 1e-13);
    const double y = 1 - x * x;
    EXPECT_NEAR(c.g(y), x, 1e-12);
    EXPECT_NEAR(c.dg(y), -1 / (2 * x), 1e-9 / x);
    EXPECT_NEAR(c.d2g(y), -1 / (4 * x * x * x), 1e-8 / (x * x * x));
  }
  EXPECT_NEAR(quadrant_area(c), 2.0 / 3.0, 1e-12);
  const double golden = (std::sqrt(5.0) - 1) / 2;
  EXPECT_NEAR(c.corner().x, golden, 1e-12);
  EXPECT_NEAR(c.corner().y, golden, 1e-12);
  EXPECT_NEAR(c.max_rectangle(), 2 / (3 * std::sqrt(3.0)), 1e-12);
}

TEST(CustomCurve, ExplicitCornerAndPartition) {
  CurveTable t = parabola_table(8);
  t.has_corner = true;
  t.corner = Point{0.5, 0.75};
  t.partition_f = {0.25};
  const Curve c = custom_curve(t);
  EXPECT_EQ(c.corner().x, 0.5);
  const auto part = c.partition_f();
  ASSERT_EQ(part.size(), 3u);
  EXPECT_EQ(part[1], 0.25);
  EXPECT_EQ(part[2], 0.5);
  EXPECT_EQ(c.partition_g().back(), 0.75);
}

TEST(CustomCurve, Validation) {
  CurveTable t = parabola_table(8);
  t.f[3] = t.f[2];
  EXPECT_THROW(custom_curve(t), PreconditionError);

  t = parabola_table(8);
  t.f[4] += 0.1;  // breaks concavity only
  t.f[4] = 0.5 * (t.f[3] + t.f[5]) - 0.01;
  EXPECT_THROW(custom_curve(t), PreconditionError);

  t = parabola_table(8);
  t.f.back() = 0.1;
  EXPECT_THROW(custom_curve(t), std::invalid_argument);

  t = parabola_table(8);
  t.x.pop_back();
  EXPECT_THROW(custom_curve(t), std::invalid_argument);
}
