#include <gtest/gtest.h>

#include "qtop/errors.hpp"
#include "qtop/linalg.hpp"
#include "qtop/wienerhopf.hpp"
#include "qtop/winding.hpp"
#include "support/oracles.hpp"

namespace qtop {
namespace {

using testing::golden;
using testing::mat2;

LaurentSymbol golden_slice_in_z(double w_angle) {
  return slice(golden(), 0, {unit(w_angle)}).to_symbol();
}

TEST(ToeplitzSection, PlacesCoefficientsOnDiagonals) {
  const LaurentSymbol shift = LaurentSymbol::monomial({1}, Matrix::Identity(1, 1));
  const Matrix t = toeplitz_section(shift, 3);
  Matrix expect = Matrix::Zero(3, 3);
  expect(1, 0) = expect(2, 1) = 1.0;
  EXPECT_EQ(t, expect);
  const Matrix tall = toeplitz_tall_section(shift, 3);
  EXPECT_EQ(tall.rows(), 4);
  EXPECT_EQ(tall(3, 2), Complex(1.0));
}

// Divide-and-conquer SVD drivers mis-factor sections like this one.
TEST(ToeplitzSection, LargeTallSolveIsAccurate) {
  std::mt19937_64 rng(41);
  const LaurentSymbol f = testing::product_with_indices(rng, {0, 0, 0});
  const Matrix a = toeplitz_tall_section(f, 80);
  Matrix rhs = Matrix::Zero(a.rows(), 3);
  rhs.topRows(3) = Matrix::Identity(3, 3);
  const linalg::SvdSolve s = linalg::svd_solve(a, rhs);
  EXPECT_LT((a * s.x - rhs).norm(), 1e-12);
  EXPECT_NEAR(s.singular_values(s.singular_values.size() - 1), linalg::sigma_min(a), 1e-12);
}

TEST(KernelDim, BackwardShiftHasKernel) {
  const LaurentSymbol back2 = LaurentSymbol::monomial({-2}, Matrix::Identity(1, 1));
  EXPECT_EQ(toeplitz_kernel_dim(back2), 2);
  EXPECT_EQ(toeplitz_kernel_dim(back2.adjoint()), 0);
}

TEST(PartialIndices, RecoverPlantedIndices) {
  std::mt19937_64 rng(17);
  const std::vector<std::vector<int>> cases{{0}, {2}, {-1}, {0, 0}, {1, -1}, {2, 0}, {-1, -1}, {1, 0, -2}};
  for (const auto& kappa : cases) {
    const LaurentSymbol f = testing::product_with_indices(rng, kappa);
    EXPECT_EQ(partial_indices(f), testing::sorted_desc(kappa));
  }
}

TEST(PartialIndices, SumEqualsWindingOfDeterminant) {
  std::mt19937_64 rng(23);
  const LaurentSymbol f = testing::product_with_indices(rng, {2, -1, 0});
  const auto k = partial_indices(f);
  EXPECT_EQ(k[0] + k[1] + k[2], winding_number(det_on_circle(f, 512)));
}

TEST(Factorization, RecoversPlantedCanonicalFactors) {
  std::mt19937_64 rng(31);
  const Matrix a = testing::random_with_norm(rng, 2, 0.4);
  const Matrix b0 = testing::random_unitary(rng, 2);
  const Matrix b1 = b0 * testing::random_with_norm(rng, 2, 0.4);
  const LaurentSymbol minus = LaurentSymbol::from_terms(1, 2, {{{0}, Matrix::Identity(2, 2)}, {{-1}, a}});
  const LaurentSymbol plus = LaurentSymbol::from_terms(1, 2, {{{0}, b0}, {{1}, b1}});
  const FactorizationResult r = canonical_factorize(minus * plus);
  ASSERT_GE(r.minus_coeffs.size(), 2u);
  EXPECT_LT((r.minus_coeffs[0] - Matrix::Identity(2, 2)).norm(), 1e-10);
  EXPECT_LT((r.minus_coeffs[1] - a).norm(), 1e-10);
  for (double th : {0.0, 1.0, 2.5}) {
    const Complex z = 0.7 * unit(th);
    EXPECT_LT((r.plus_at(z) - (b0 + b1 * z)).norm(), 1e-9);
  }
}

TEST(Factorization, GoldenSliceMatchesHandFactors) {
  const double phi = 0.8;
  const Complex w = unit(phi);
  const FactorizationResult r = canonical_factorize(golden_slice_in_z(phi));
  EXPECT_LE(r.residual, 1e-10);
  for (double th : {0.0, 2.0, 4.0}) {
    const Complex z = unit(th);
    EXPECT_LT((r.minus_at(z) - mat2(1.0, 0.0, -w / z, 1.0)).norm(), 1e-10);
    EXPECT_LT((r.plus_at(0.5 * z) - mat2(0.5 * z, -1.0 / w, 2.0 * w, 0.0)).norm(), 1e-10);
  }
  const FactorizationCheck c = verify_factorization(golden_slice_in_z(phi), r);
  EXPECT_LE(c.residual, 1e-10);
  EXPECT_TRUE(c.tail_ok);
}

TEST(Factorization, UniqueUnderTruncationChange) {
  std::mt19937_64 rng(41);
  const LaurentSymbol f = testing::product_with_indices(rng, {0, 0, 0});
  FactorizationOptions lo, hi;
  lo.truncation = 48;
  hi.truncation = 96;
  const FactorizationResult a = canonical_factorize(f, lo), b = canonical_factorize(f, hi);
  for (double th : {0.0, 1.3, 3.9}) {
    EXPECT_LT((a.plus_inverse_at(unit(th)) - b.plus_inverse_at(unit(th))).norm(), 1e-8);
    EXPECT_LT((a.minus_at(unit(th)) - b.minus_at(unit(th))).norm(), 1e-8);
  }
}

TEST(Factorization, ConstantSymbolIsItsOwnPlusFactor) {
  const Matrix m = mat2(2.0, 1.0, 0.0, 3.0);
  const FactorizationResult r = canonical_factorize(LaurentSymbol::constant(1, m));
  EXPECT_LT((r.plus_at(0.3) - m).norm(), 1e-14);
  EXPECT_LT((r.minus_at(unit(1.0)) - Matrix::Identity(2, 2)).norm(), 1e-14);
}

TEST(Factorization, NonCanonicalCarriesIndices) {
  const LaurentSymbol f = LaurentSymbol::from_terms(
      1, 2, {{{1}, testing::unit_entry(2, 0, 0)}, {{-1}, testing::unit_entry(2, 1, 1)}});
  EXPECT_FALSE(is_canonical(f));
  try {
    canonical_factorize(f);
    FAIL();
  } catch (const NotCanonicalError& e) {
    EXPECT_EQ(e.indices(), (std::vector<int>{1, -1}));
  }
}

TEST(Factorization, SingularOnCircleIsRejected) {
  const LaurentSymbol f = LaurentSymbol::from_terms(
      1, 1, {{{0}, Matrix::Identity(1, 1)}, {{1}, -Matrix::Identity(1, 1)}});
  try {
    partial_indices(f);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SingularOnTorus);
  }
}

TEST(RadialScan, GoldenSlicesStayInvertible) {
  std::vector<double> radii;
  for (int k = 0; k <= 8; ++k) radii.push_back(k / 8.0);
  for (double phi : {0.0, 1.7, 4.0}) {
    const LaurentSymbol s = golden_slice_in_z(phi);
    const RadialScanResult r = radial_scan(s, canonical_factorize(s), radii);
    EXPECT_GE(r.min_sigma(), 0.1);
  }
}

TEST(HalfPlanes, GoldenIsCertifiedAndShiftedCopyIsNot) {
  const HalfPlaneCertificate ok = certify_half_planes(golden(), 16);
  EXPECT_TRUE(ok.fredholm);
  EXPECT_GT(ok.min_gap[0], 0.1);
  const HalfPlaneCertificate bad = certify_half_planes(golden().shifted(0, 1), 16);
  EXPECT_FALSE(bad.fredholm);
  ASSERT_FALSE(bad.failures.empty());
  EXPECT_EQ(bad.failures.front().direction, 0);
}

TEST(Gap, VanishesForNonInvertibleToeplitz) {
  const LaurentSymbol shift = LaurentSymbol::monomial({1}, Matrix::Identity(1, 1));
  EXPECT_LT(toeplitz_gap(shift), 1e-12);
  EXPECT_NEAR(toeplitz_gap(LaurentSymbol::identity(1, 1)), 1.0, 1e-12);
}

}  // namespace
}  // namespace qtop
