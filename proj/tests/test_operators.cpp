#include <gtest/gtest.h>

#include <sstream>

#include "qtop/errors.hpp"
#include "qtop/linalg.hpp"
#include "qtop/operators.hpp"
#include "qtop/symmetry.hpp"
#include "support/oracles.hpp"

namespace qtop {
namespace {

using testing::golden;

LaurentSymbol scalar(std::vector<std::pair<Exponent, Complex>> terms) {
  std::vector<std::pair<Exponent, Matrix>> t;
  for (auto& [e, c] : terms) t.push_back({e, Matrix::Constant(1, 1, c)});
  return LaurentSymbol::from_terms(static_cast<int>(terms.front().first.size()), 1, t);
}

TEST(Assemble, SegmentFollowsToeplitzConvention) {
  const TruncatedOperator op = assemble(scalar({{{1}, 1.0}}), Geometry::segment(3));
  Matrix expect = Matrix::Zero(3, 3);
  expect(1, 0) = expect(2, 1) = 1.0;
  EXPECT_EQ(op.matrix, expect);
}

TEST(Assemble, QuarterBlocksAreCoefficients) {
  const TruncatedOperator op = assemble(golden(), Geometry::quarter(3));
  ASSERT_EQ(op.matrix.rows(), 18);
  // Output site (m, n) = (1, 0) from input (0, 0) carries a_{(1, 0)}.
  const int out = (1 * 3 + 0) * 2, in = 0;
  EXPECT_EQ(op.matrix.block(out, in, 2, 2), testing::unit_entry(2, 0, 0));
}

TEST(Assemble, PaddingCoversTheSupport) {
  AssemblyOptions o;
  o.pad = 1;
  const TruncatedOperator op = assemble(scalar({{{1}, 1.0}}), Geometry::segment(3), o);
  EXPECT_EQ(op.matrix.rows(), 4);
  EXPECT_EQ(op.matrix.cols(), 3);
  EXPECT_EQ(op.matrix(3, 2), Complex(1.0));
}

TEST(Assemble, HalfPlaneWrapsParallelDirection) {
  const TruncatedOperator op = assemble(scalar({{{0, 1}, 1.0}}), Geometry::half_plane(0, 4, 2));
  // Variable 1 is periodic with 4 sites: n = 3 maps to n = 0.
  EXPECT_EQ(op.matrix(0 * 4 + 0, 0 * 4 + 3), Complex(1.0));
}

TEST(Assemble, RefusesHugeMatrices) {
  AssemblyOptions o;
  o.dense_cap = 100;
  try {
    assemble(golden(), Geometry::quarter(10), o);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SizeOverflow);
  }
}

TEST(NumericalIndex, ShiftsOnSegments) {
  for (int k : {-2, 1, 3}) {
    EXPECT_EQ(numerical_index(scalar({{{k}, 1.0}}), {16, 24}).index, -k);
  }
}

TEST(NumericalIndex, GoldenAndAdjointOnQuarters) {
  const IndexReport g = numerical_index(golden(), {6, 8});
  EXPECT_EQ(g.index, 1);
  ASSERT_EQ(g.per_size.size(), 2u);
  EXPECT_EQ(g.per_size[0].kernel, 1);
  EXPECT_EQ(g.per_size[0].cokernel, 0);
  EXPECT_EQ(numerical_index(golden().adjoint(), {6, 8}).index, -1);
}

TEST(NumericalIndex, NonFredholmSymbolIsRejected) {
  EXPECT_THROW(numerical_index(golden().shifted(0, 1), {6, 8}), NotFredholmError);
}

TEST(HalfPlaneGap, GappedAndGaplessEdges) {
  const HalfPlaneGap g = half_plane_gap(golden(), 0, 8, 8);
  EXPECT_FALSE(g.closing);
  EXPECT_GT(g.gap, 0.5);
  const HalfPlaneGap c = half_plane_gap(scalar({{{1, 0}, 1.0}, {{-1, 0}, 1.0}}), 0, 8, 16);
  EXPECT_TRUE(c.closing);
  EXPECT_LT(c.gap, 0.2);
}

TEST(Corner, EigendecompositionOfQuarterSection) {
  const Matrix h = assemble(assemble_chiral(golden()), Geometry::quarter(8)).matrix;
  const linalg::HermitianEigen e = linalg::hermitian_eigen(h);
  EXPECT_LT((h * e.vectors - e.vectors * e.values.cast<Complex>().asDiagonal()).norm(), 1e-11);
  EXPECT_LT((e.vectors.adjoint() * e.vectors - Matrix::Identity(h.rows(), h.cols())).norm(), 1e-11);
  for (Eigen::Index i = 1; i < e.values.size(); ++i) EXPECT_LE(e.values(i - 1), e.values(i));
}

TEST(Corner, GoldenChiralHasOneCornerMode) {
  const LaurentSymbol h = assemble_chiral(golden());
  const CornerSpectrum s = corner_spectrum(h, 12, default_chirality(4));
  EXPECT_EQ(s.corner_count, 1);
  EXPECT_EQ(s.signed_count, 1);
  EXPECT_GE(s.next_eigenvalue, 0.1);
  EXPECT_TRUE(s.separated);
  int at_origin = 0;
  for (const CornerMode& m : s.zero_modes) {
    if (m.corner_weight > 0.5) {
      ++at_origin;
      EXPECT_GE(m.chirality, 0.99);
    }
  }
  EXPECT_EQ(at_origin, 1);
  const CornerSpectrum a = corner_spectrum(assemble_chiral(golden().adjoint()), 12, default_chirality(4));
  EXPECT_EQ(a.signed_count, -1);
}

TEST(Corner, ValidatesInput) {
  try {
    corner_spectrum(golden(), 4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotHermitian);
  }
  const LaurentSymbol massive = assemble_chiral(golden()) + LaurentSymbol::identity(2, 4);
  try {
    corner_spectrum(massive, 4, default_chirality(4));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ChiralViolation);
  }
}

TEST(Corner, CsvListsEveryEigenvalue) {
  const CornerSpectrum s = corner_spectrum(assemble_chiral(golden()), 4, default_chirality(4));
  std::ostringstream os;
  write_spectrum_csv(os, s, 0.5);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "t,eigenvalue_index,lambda,chirality,participation_near_corner");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  EXPECT_EQ(rows, 4 * 4 * 4);
}

Matrix diag2(double a, double b) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

TEST(Flow, ClosedLoopWithCancellingCrossings) {
  const auto r = track_spectral_flow([](double t) { return diag2(0.3 * std::sin(t), 2.0); }, 0.0, kTwoPi, 16,
                                     true);
  EXPECT_EQ(r.flow, 0);
  ASSERT_EQ(r.crossings.size(), 2u);
  EXPECT_EQ(r.crossings[0].sign + r.crossings[1].sign, 0);
}

TEST(Flow, OpenPathCountsNetCrossing) {
  const auto r = track_spectral_flow([](double t) { return diag2(t, -3.0); }, -0.2, 0.3, 11, false);
  EXPECT_EQ(r.flow, 1);
  const auto d = track_spectral_flow([](double t) { return diag2(-t, t + 0.01); }, -0.2, 0.3, 11, false);
  EXPECT_EQ(d.flow, 0);
  EXPECT_EQ(d.crossings.size(), 2u);
}

TEST(Flow, ConstantFamilyHasNoFlow) {
  const LaurentSymbol h = assemble_chiral(golden());
  LaurentSymbol f3(3, 4);
  for (const auto& [e, a] : h.terms()) f3 = f3 + LaurentSymbol::monomial({e[0], e[1], 0}, a);
  FlowOptions o;
  o.certificate_samples = 4;
  const SpectralFlowResult r = spectral_flow(f3, 2, 4, 6, o);
  EXPECT_EQ(r.flow, 0);
  EXPECT_TRUE(r.crossings.empty());
}

TEST(DenseBinary, RoundTrips) {
  const TruncatedOperator op = assemble(golden(), Geometry::quarter(3));
  std::stringstream ss;
  write_dense_binary(ss, op);
  int band = 0;
  const Matrix back = read_dense_binary(ss, &band);
  EXPECT_EQ(band, 2);
  EXPECT_EQ(back, op.matrix);
}

}  // namespace
}  // namespace qtop
