#include <gtest/gtest.h>

#include <sstream>

#include "qtop/errors.hpp"
#include "qtop/extension.hpp"
#include "support/oracles.hpp"

namespace qtop {
namespace {

using testing::golden;

ExtensionOptions small() {
  ExtensionOptions o;
  o.samples_per_circle = 32;
  return o;
}

const ExtendedSymbol& golden_ext() {
  static const ExtendedSymbol ext = build_extended(golden(), small());
  return ext;
}

TEST(ChartPoint, ParsesAndFormats) {
  const ChartPoint p = parse_chart_point("rho=0.25;chart=DT;phi=1.5;theta=-2");
  EXPECT_EQ(p.chart, Chart::DT);
  EXPECT_EQ(p.rho, 0.25);
  EXPECT_EQ(p.theta, -2.0);
  EXPECT_FALSE(p.t.has_value());
  EXPECT_EQ(format_chart_point(p), "chart=DT;theta=-2;rho=0.25;phi=1.5");
  const ChartPoint q = parse_chart_point(format_chart_point(ChartPoint{Chart::TD, 0.1, 0.3, 0.7, 2.0}));
  EXPECT_EQ(q.t, 2.0);
  EXPECT_EQ(q.theta, 0.1);
}

TEST(ChartPoint, RejectsMalformedText) {
  for (const char* s : {"chart=XY;theta=0;rho=0;phi=0", "chart=TD;theta=0;rho=0", "chart=TD;theta=a;rho=0;phi=0",
                        "chart=TD;theta=0;rho=0;phi=0;q=1", "garbage"}) {
    try {
      parse_chart_point(s);
      ADD_FAILURE() << s;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::ParseError) << s;
    }
  }
}

TEST(ChartPoint, CoordinatesFollowCharts) {
  const ChartPoint td{Chart::TD, 0.5, 0.4, 1.0, std::nullopt};
  EXPECT_LT(std::abs(td.z() - unit(0.5)), 1e-15);
  EXPECT_LT(std::abs(td.w() - 0.4 * unit(1.0)), 1e-15);
  const ChartPoint dt{Chart::DT, 0.5, 0.4, 1.0, std::nullopt};
  EXPECT_LT(std::abs(dt.z() - 0.4 * unit(0.5)), 1e-15);
  EXPECT_LT(std::abs(dt.w() - unit(1.0)), 1e-15);
}

TEST(Extended, GoldenMatchesClosedFormsOffSamples) {
  for (double th : {0.0, 0.37, 2.9}) {
    for (double rho : {0.0, 0.5, 1.0}) {
      for (double ph : {0.11, 4.2}) {
        const ChartPoint td{Chart::TD, th, rho, ph, std::nullopt};
        const ChartPoint dt{Chart::DT, th, rho, ph, std::nullopt};
        EXPECT_LT((golden_ext().eval(td) - testing::golden_extended_td(td.z(), td.w())).norm(), 1e-9);
        EXPECT_LT((golden_ext().eval(dt) - testing::golden_extended_dt(dt.z(), dt.w())).norm(), 1e-9);
      }
    }
  }
}

TEST(Extended, AgreesWithSymbolOnTheTorus) {
  EXPECT_LT(golden_ext().seam_error(), 1e-10);
  const ChartPoint p{Chart::DT, 1.2, 1.0, -0.4, std::nullopt};
  EXPECT_LT((golden_ext().eval(p) - golden().eval({p.z(), p.w()})).norm(), 1e-10);
}

TEST(Extended, GridEvaluationMatchesPointwise) {
  const ChartGrid grid = ChartGrid::uniform(4, 3, 5);
  const auto values = golden_ext().eval_grid(Chart::TD, grid);
  ASSERT_EQ(values.size(), grid.size());
  const ChartPoint p{Chart::TD, grid.thetas[3], grid.rhos[1], grid.phis[2], std::nullopt};
  EXPECT_LT((values[grid.index(3, 1, 2)] - golden_ext().eval(p)).norm(), 1e-12);
}

TEST(Extended, RejectsPointsOffTheBoundary) {
  try {
    golden_ext().eval(ChartPoint{Chart::TD, 0.0, 1.5, 0.0, std::nullopt});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::OutOfDomain);
  }
  EXPECT_THROW(golden_ext().eval(ChartPoint{Chart::TD, 0.0, 0.5, 0.0, 1.0}), Error);
}

TEST(Extended, TrigInterpolationTracksExactFactors) {
  ExtensionOptions o = small();
  o.trig_interpolation = true;
  const ExtendedSymbol fast = build_extended(golden(), o);
  EXPECT_TRUE(fast.interpolation_accurate());
  const ChartPoint p{Chart::TD, 0.123, 0.7, 2.2, std::nullopt};
  EXPECT_LT((fast.eval(p) - testing::golden_extended_td(p.z(), p.w())).norm(), 1e-8);
}

TEST(Extended, NonCanonicalSliceRaisesNotFredholm) {
  try {
    build_extended(golden().shifted(1, 1), small());
    FAIL();
  } catch (const NotFredholmError& e) {
    EXPECT_EQ(e.direction(), 1);
    EXPECT_FALSE(e.has_family());
  }
}

TEST(Extended, HermitianSymbolGivesHermitianExtension) {
  const LaurentSymbol sx = LaurentSymbol::constant(2, testing::mat2(0.0, 0.5, 0.5, 0.0));
  const LaurentSymbol sz = LaurentSymbol::constant(2, testing::mat2(1.0, 0.0, 0.0, -1.0));
  const LaurentSymbol cos_z = LaurentSymbol::from_terms(2, 2, {{{1, 0}, Matrix::Identity(2, 2)},
                                                               {{-1, 0}, Matrix::Identity(2, 2)}});
  const LaurentSymbol cos_w = LaurentSymbol::from_terms(2, 2, {{{0, 1}, 0.5 * Matrix::Identity(2, 2)},
                                                               {{0, -1}, 0.5 * Matrix::Identity(2, 2)}});
  const LaurentSymbol h = sx * cos_z + sz * (cos_w + LaurentSymbol::constant(2, 2.0 * Matrix::Identity(2, 2)));
  const ExtendedSymbol ext = build_extended(h, small());
  EXPECT_TRUE(check_hermitian(ext, 8, 1e-8).pass);
  EXPECT_TRUE(check_equivariance(ext, az_class(AZLabel::AI), 8, 1e-8).pass);
  EXPECT_FALSE(check_hermitian(golden_ext(), 8, 1e-8).pass);
}

TEST(Extended, CsvHasOneRowPerEntry) {
  std::ostringstream os;
  write_extended_csv(os, golden_ext(), ChartGrid::uniform(2, 2, 2));
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line.rfind("chart,theta,rho,phi", 0), 0u);
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  EXPECT_EQ(rows, 2 * 8 * 4);
}

LaurentSymbol gap_closing_family() {
  // [[z, cos t], [0, 1/z]]: canonical unless cos t = 0.
  const Matrix e01 = testing::unit_entry(2, 0, 1, 0.5);
  return LaurentSymbol::from_terms(3, 2, {{{1, 0, 0}, testing::unit_entry(2, 0, 0)},
                                          {{-1, 0, 0}, testing::unit_entry(2, 1, 1)},
                                          {{0, 0, 1}, e01},
                                          {{0, 0, -1}, e01}});
}

TEST(Family, GapScanLocatesClosing) {
  const FamilyGapScan scan = scan_family_gap(gap_closing_family(), 2, 16);
  EXPECT_TRUE(scan.closed);
  EXPECT_LT(std::min(std::abs(scan.argmin_t - kPi / 2), std::abs(scan.argmin_t - 3 * kPi / 2)), kTwoPi / 16);
  EXPECT_EQ(scan.indices, (std::vector<int>{1, -1}));
}

TEST(Family, ClosingRaisesNotFredholmWithT) {
  ExtensionOptions o;
  o.samples_per_circle = 8;
  o.t_samples = 16;
  try {
    build_extended_family(gap_closing_family(), 2, o);
    FAIL();
  } catch (const NotFredholmError& e) {
    EXPECT_TRUE(e.has_family());
    const double t = e.family_angle();
    EXPECT_LT(std::min(std::abs(t - kPi / 2), std::abs(t - 3 * kPi / 2)), kTwoPi / 16);
  }
}

TEST(Family, ConstantFamilyMatchesSurface) {
  const LaurentSymbol f = golden();
  LaurentSymbol f3(3, 2);
  for (const auto& [e, a] : f.terms()) f3 = f3 + LaurentSymbol::monomial({e[0], e[1], 0}, a);
  ExtensionOptions o = small();
  o.t_samples = 4;
  const ExtendedSymbol ext = build_extended_family(f3, 2, o);
  const ChartPoint p{Chart::DT, 0.3, 0.6, 1.9, 0.7};
  EXPECT_LT((ext.eval(p) - testing::golden_extended_dt(p.z(), p.w())).norm(), 1e-9);
}

}  // namespace
}  // namespace qtop
