#include <gtest/gtest.h>

#include <cmath>

#include "lattice/sweep.hpp"
#include "oracles.hpp"

using namespace lattice;

namespace {

bool near_interval(const StretchResult& res, double s, double tol) {
  for (const auto& iv : res.intervals) {
    if (s >= iv.lo * (1 - tol) && s <= iv.hi * (1 + tol)) return true;
  }
  return false;
}

bool deep_inside(const StretchResult& res, double s, double tol) {
  for (const auto& iv : res.intervals) {
    if (s > iv.lo * (1 + tol) && s < iv.hi * (1 - tol)) return true;
  }
  return false;
}

// Checks the sweep's maximum and optimal set against count() evaluated on
// the oracle probe set.
void expect_matches_probes(double p, double r) {
  const Curve c = curve_for_exponent(p);
  const StretchResult res = maximize_count(c, r);
  const auto pts = oracle::probes(oracle::breakpoints(p, r));
  std::int64_t best = 0;
  for (double s : pts) best = std::max(best, count(c, r, s));
  ASSERT_EQ(res.extremal_count, best) << "p=" << p << " r=" << r;
  if (best == 0) {
    EXPECT_TRUE(res.degenerate);
    return;
  }
  for (double s : pts) {
    const bool optimal = count(c, r, s) == best;
    if (optimal) {
      EXPECT_TRUE(near_interval(res, s, 1e-9)) << "p=" << p << " r=" << r << " s=" << s;
    } else {
      EXPECT_FALSE(deep_inside(res, s, 1e-9)) << "p=" << p << " r=" << r << " s=" << s;
    }
  }
}

}  // namespace

TEST(Events, DiamondFixtures) {
  const auto ev = events_p1(4.96);
  EXPECT_EQ(ev.size(), 14u);
  const Event& first = ev.front();
  EXPECT_EQ(first.j, 1);
  EXPECT_EQ(first.k, 1);
  EXPECT_NEAR(first.s_enter, (4.96 - std::sqrt(4.96 * 4.96 - 4)) / 2, 1e-14);
  EXPECT_NEAR(first.s_exit, (4.96 + std::sqrt(4.96 * 4.96 - 4)) / 2, 1e-14);
  EXPECT_NEAR(first.s_enter, 0.21055, 1e-5);
  EXPECT_NEAR(first.s_exit, 4.74945, 1e-5);
  for (const Event& e : ev) {
    const double jd = static_cast<double>(e.j);
    EXPECT_LE(e.s_enter, e.s_exit);
    EXPECT_NEAR(e.s_enter * e.s_exit, static_cast<double>(e.k) / jd, 1e-9 * e.k / jd);
    EXPECT_NEAR(e.s_enter + e.s_exit, 4.96 / jd, 1e-9 * 4.96 / jd);
  }
}

TEST(Events, DiamondTangency) {
  const auto ev = events_p1(2.0);
  ASSERT_EQ(ev.size(), 1u);
  EXPECT_DOUBLE_EQ(ev[0].s_enter, 1.0);
  EXPECT_DOUBLE_EQ(ev[0].s_exit, 1.0);
}

TEST(Events, BisectionFixtures) {
  const auto ev = events_p(2.0, 5.0);
  bool found = false;
  for (const Event& e : ev) {
    if (e.j == 3 && e.k == 4) {
      found = true;
      EXPECT_TRUE(std::abs(e.s_enter - 1) < 1e-9 || std::abs(e.s_exit - 1) < 1e-9);
    }
  }
  EXPECT_TRUE(found);

  const auto tangent = events_p(2.0, std::sqrt(2.0));
  ASSERT_EQ(tangent.size(), 1u);
  EXPECT_NEAR(tangent[0].s_enter, 1.0, 1e-9);
  EXPECT_NEAR(tangent[0].s_exit, 1.0, 1e-9);
}

TEST(Events, BisectionCountMatchesEnumeration) {
  std::size_t expected = 0;
  for (int j = 1; j <= 100; ++j) {
    for (int k = 1; k <= 100; ++k) {
      if (2 * std::pow(j * k, 0.75) <= std::pow(10.0, 1.5)) ++expected;
    }
  }
  EXPECT_EQ(events_p(1.5, 10.0).size(), expected);
  EXPECT_THROW(events_p(1.0, 10.0), std::invalid_argument);
}

TEST(Events, ClosedFormsAgreeWithBisection) {
  for (double p : {1.5, 2.0, 3.0, 6.0}) {
    for (double r : {3.3, 9.7, 21.1}) {
      const auto a = events(pcircle(p), r);
      const auto b = events_p(p, r);
      ASSERT_EQ(a.size(), b.size()) << p << " " << r;
      for (std::size_t i = 0; i < a.size(); ++i) {
        ASSERT_EQ(a[i].j, b[i].j);
        ASSERT_EQ(a[i].k, b[i].k);
        EXPECT_NEAR(a[i].s_enter, b[i].s_enter, 1e-10 * b[i].s_enter);
        EXPECT_NEAR(a[i].s_exit, b[i].s_exit, 1e-10 * b[i].s_exit);
      }
    }
  }
}

TEST(Events, AgreeWithOracleSpans) {
  for (double p : {1.0, 1.5, 2.0, 3.0}) {
    const double r = 12.34;
    for (const Event& e : events(curve_for_exponent(p), r)) {
      oracle::Span sp{};
      ASSERT_TRUE(oracle::membership_span(p, r, e.j, e.k, sp));
      EXPECT_NEAR(e.s_enter, sp.lo, 1e-9 * sp.lo);
      EXPECT_NEAR(e.s_exit, sp.hi, 1e-9 * sp.hi);
    }
  }
}

TEST(Maximize, DiamondAtFigureRadius) {
  const StretchResult res = maximize_count(1.0, 4.96);
  EXPECT_EQ(res.extremal_count, 9);
  ASSERT_EQ(res.intervals.size(), 2u);
  EXPECT_NEAR(res.intervals[0].lo, 0.70506, 1e-5);
  EXPECT_NEAR(res.intervals[0].hi, 0.71051, 1e-5);
  EXPECT_NEAR(res.intervals[1].lo, 1.40743, 1e-5);
  EXPECT_NEAR(res.intervals[1].hi, 1.41831, 1e-5);
  EXPECT_TRUE(res.contains(std::sqrt(2.0)));
  EXPECT_TRUE(res.contains(1 / std::sqrt(2.0)));
  EXPECT_FALSE(res.contains(1.0));
  EXPECT_DOUBLE_EQ(res.sup_s, res.intervals[1].hi);
  for (const auto& iv : res.intervals) {
    EXPECT_TRUE(iv.lo_closed);
    EXPECT_TRUE(iv.hi_closed);
  }
}

TEST(Maximize, CircleAtFigureRadius) {
  const StretchResult res = maximize_count(2.0, 4.96);
  EXPECT_GE(res.extremal_count, 16);
  for (const auto& iv : res.intervals) {
    EXPECT_EQ(count(pcircle(2), 4.96, iv.midpoint()), res.extremal_count);
  }
}

TEST(Maximize, SinglePointOptimum) {
  const StretchResult res = maximize_count(1.0, 2.0);
  EXPECT_EQ(res.extremal_count, 1);
  ASSERT_EQ(res.intervals.size(), 1u);
  EXPECT_DOUBLE_EQ(res.intervals[0].lo, 1.0);
  EXPECT_DOUBLE_EQ(res.intervals[0].hi, 1.0);
  EXPECT_FALSE(res.degenerate);
}

TEST(Maximize, NoEventsIsDegenerate) {
  const StretchResult res = maximize_count(2.0, 1.2);
  EXPECT_EQ(res.extremal_count, 0);
  EXPECT_TRUE(res.degenerate);
  EXPECT_TRUE(res.intervals.empty());
  EXPECT_TRUE(std::isnan(res.sup_s));
}

TEST(Maximize, MatchesProbeOracle) {
  oracle::Gen gen(41);
  for (double p : {1.0, 1.5, 2.0, 3.0}) {
    for (int i = 0; i < 12; ++i) expect_matches_probes(p, gen.uniform(1, 30));
  }
}

TEST(Maximize, ReciprocalSymmetry) {
  oracle::Gen gen(43);
  for (double p : {1.0, 1.5, 2.0, 3.0}) {
    for (int i = 0; i < 20; ++i) {
      const double r = gen.uniform(2, 60);
      const auto res = maximize_count(p, r);
      const auto& iv = res.intervals;
      for (std::size_t a = 0; a < iv.size(); ++a) {
        const auto& mirror = iv[iv.size() - 1 - a];
        EXPECT_NEAR(iv[a].lo, 1 / mirror.hi, 1e-9 * iv[a].lo) << p << " " << r;
        EXPECT_NEAR(iv[a].hi, 1 / mirror.lo, 1e-9 * iv[a].hi) << p << " " << r;
      }
      EXPECT_NEAR(res.inf_s(), 1 / res.sup_s, 1e-9);
    }
  }
}

TEST(Maximize, NondecreasingInR) {
  for (double p : {1.0, 2.0, 3.0}) {
    std::int64_t prev = 0;
    for (double r = 1; r <= 40; r += 0.173) {
      const auto cur = maximize_count(p, r).extremal_count;
      EXPECT_GE(cur, prev) << p << " " << r;
      prev = cur;
    }
  }
}

TEST(Maximize, StreamingMatchesMaterialized) {
  SweepOptions stream;
  stream.stream_threshold = 0;
  for (double p : {1.0, 1.5, 2.0, 3.0, kInf}) {
    for (double r : {2.0, 4.96, 17.3, 55.5, 130.1}) {
      const auto a = maximize_count(p, r);
      const auto b = maximize_count(p, r, stream);
      ASSERT_EQ(a.extremal_count, b.extremal_count);
      ASSERT_EQ(a.intervals.size(), b.intervals.size());
      for (std::size_t i = 0; i < a.intervals.size(); ++i) {
        EXPECT_EQ(a.intervals[i].lo, b.intervals[i].lo);
        EXPECT_EQ(a.intervals[i].hi, b.intervals[i].hi);
      }
      const auto c = minimize_count_nonneg(p, r);
      const auto d = minimize_count_nonneg(p, r, stream);
      ASSERT_EQ(c.extremal_count, d.extremal_count);
      ASSERT_EQ(c.intervals.size(), d.intervals.size());
      for (std::size_t i = 0; i < c.intervals.size(); ++i) {
        EXPECT_EQ(c.intervals[i].lo, d.intervals[i].lo);
        EXPECT_EQ(c.intervals[i].hi, d.intervals[i].hi);
      }
    }
  }
}

TEST(Maximize, OptimaStayInsideEnvelopeForCircle) {
  for (double r = 100; r <= 400; r += 7.3) {
    const auto res = maximize_count(2.0, r);
    EXPECT_LE(res.sup_s, 4.5) << r;
    EXPECT_GE(res.inf_s(), 1 / 4.5) << r;
  }
}

TEST(Profile, DiamondCounterReturnsToZero) {
  for (double r : {4.96, 13.7, 40.0}) {
    const auto prof = count_profile(diamond(), r);
    ASSERT_FALSE(prof.empty());
    EXPECT_EQ(prof.front().count, 0);
    EXPECT_EQ(prof.back().count, 0);
    for (const auto& seg : prof) {
      const double s = seg.hi == kInf ? seg.lo * 2 : 0.5 * (seg.lo + seg.hi);
      if (seg.lo == 0) continue;
      EXPECT_EQ(seg.count, count(diamond(), r, s)) << r << " " << s;
    }
  }
}

TEST(Profile, ClosedQuadrantMatchesCount) {
  for (double p : {1.0, 2.0, 3.0}) {
    const double r = 9.1;
    for (const auto& seg : count_profile(curve_for_exponent(p), r, Quadrant::nonnegative)) {
      ASSERT_GT(seg.lo, 0);
      ASSERT_LT(seg.hi, kInf);
      const double s = 0.5 * (seg.lo + seg.hi);
      EXPECT_EQ(seg.count, count(curve_for_exponent(p), r, s, Quadrant::nonnegative)) << p << " " << s;
    }
  }
}

TEST(Minimize, SquareAgainstDenseGrid) {
  const double r = 3.5;
  const auto res = minimize_count_nonneg(kInf, r);
  std::int64_t best = INT64_MAX;
  for (double s = 0.05; s < 20; s *= 1.0001) {
    best = std::min(best, static_cast<std::int64_t>((std::floor(r / s) + 1) * (std::floor(r * s) + 1)));
  }
  EXPECT_EQ(res.extremal_count, best);
  for (const auto& iv : res.intervals) {
    const double s = iv.midpoint();
    EXPECT_EQ((std::floor(r / s) + 1) * (std::floor(r * s) + 1), best);
  }
}

TEST(Minimize, MatchesProbeOracle) {
  oracle::Gen gen(47);
  for (double p : {1.0, 1.5, 2.0, 3.0}) {
    const Curve c = curve_for_exponent(p);
    for (int i = 0; i < 10; ++i) {
      const double r = gen.uniform(1, 25);
      auto pts = oracle::breakpoints(p, r);
      for (int j = 1; j <= 4 * static_cast<int>(r) + 4; ++j) {
        pts.push_back(r / j);
        pts.push_back(j / r);
      }
      std::sort(pts.begin(), pts.end());
      const auto probe = oracle::probes(pts);
      std::int64_t best = INT64_MAX;
      for (double s : probe) best = std::min(best, count(c, r, s, Quadrant::nonnegative));
      const auto res = minimize_count_nonneg(c, r);
      ASSERT_EQ(res.extremal_count, best) << p << " " << r;
      for (const auto& iv : res.intervals) {
        EXPECT_EQ(count(c, r, iv.midpoint(), Quadrant::nonnegative), best);
      }
      for (double s : probe) {
        if (count(c, r, s, Quadrant::nonnegative) != best) {
          EXPECT_FALSE(deep_inside(res, s, 1e-9)) << p << " " << r << " " << s;
        } else {
          EXPECT_TRUE(near_interval(res, s, 1e-9)) << p << " " << r << " " << s;
        }
      }
    }
  }
}

TEST(Minimize, OptimalSetsAreOpenIntervals) {
  const auto res = minimize_count_nonneg(2.0, 30.0);
  ASSERT_FALSE(res.intervals.empty());
  for (const auto& iv : res.intervals) {
    EXPECT_LT(iv.lo, iv.hi);
    EXPECT_FALSE(iv.lo_closed);
    EXPECT_FALSE(iv.hi_closed);
  }
}

TEST(CustomSweep, MatchesDenseEvaluation) {
  CurveTable t;
  for (int i = 0; i <= 32; ++i) {
    const double x = i / 32.0;
    t.x.push_back(x);
    t.f.push_back(1 - x * x);
    t.df.push_back(-2 * x);
    t.d2f.push_back(-2);
  }
  const Curve c = custom_curve(t);
  auto f = [](double x) { return x >= 1 ? 0.0 : 1 - x * x; };
  for (double r : {5.5, 11.2}) {
    const auto res = maximize_count(c, r);
    // Brute evaluation at the event endpoints of the sweep itself plus midpoints.
    std::vector<double> pts;
    for (const Event& e : events(c, r)) {
      pts.push_back(e.s_enter);
      pts.push_back(e.s_exit);
    }
    std::sort(pts.begin(), pts.end());
    std::int64_t best = 0;
    for (double s : oracle::probes(pts)) best = std::max(best, oracle::brute_count_fn(f, 1, 1, r, s));
    EXPECT_EQ(res.extremal_count, best) << r;
    for (const auto& iv : res.intervals) {
      EXPECT_EQ(oracle::brute_count_fn(f, 1, 1, r, iv.midpoint()), best);
    }
  }
}
