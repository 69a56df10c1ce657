#include <gtest/gtest.h>

#include "qtop/errors.hpp"
#include "qtop/laurent.hpp"
#include "qtop/symbol_io.hpp"
#include "qtop/symmetry.hpp"
#include "qtop/winding.hpp"
#include "support/oracles.hpp"

namespace qtop {
namespace {

using testing::golden;
using testing::mat2;

TEST(Laurent, EvaluatesGoldenPointwise) {
  const Complex z = unit(0.4), w = unit(-1.3);
  const Matrix expect = mat2(z, -1.0 / w, w, 1.0 / z);
  EXPECT_LT((golden().eval({z, w}) - expect).norm(), 1e-14);
}

TEST(Laurent, RejectsDuplicateExponents) {
  const Matrix one = Matrix::Identity(1, 1);
  try {
    LaurentSymbol::from_terms(1, 1, {{{1}, one}, {{1}, one}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DuplicateExponent);
  }
}

TEST(Laurent, RejectsWrongSizes) {
  EXPECT_THROW(LaurentSymbol::from_terms(2, 2, {{{1}, Matrix::Identity(2, 2)}}), Error);
  EXPECT_THROW(LaurentSymbol::from_terms(1, 2, {{{1}, Matrix::Identity(3, 3)}}), Error);
}

TEST(Laurent, NegativePowerAtZeroIsRejected) {
  try {
    golden().eval({Complex(0.0), unit(0.2)});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ZeroCoordinate);
  }
}

TEST(Laurent, ProductMatchesPointwiseProduct) {
  std::mt19937_64 rng(3);
  const LaurentSymbol a = testing::near_identity(rng, 2, 0.5);
  const LaurentSymbol b = golden();
  const Complex z = unit(0.9), w = unit(2.1);
  EXPECT_LT(((a * b).eval({z, w}) - a.eval({z, w}) * b.eval({z, w})).norm(), 1e-13);
}

TEST(Laurent, AdjointIsPointwiseConjugateTranspose) {
  const Complex z = unit(0.9), w = unit(2.1);
  EXPECT_LT((golden().adjoint().eval({z, w}) - golden().eval({z, w}).adjoint()).norm(), 1e-14);
}

TEST(Laurent, TransposeTauConjugatesCoordinates) {
  std::mt19937_64 rng(5);
  const LaurentSymbol f = testing::near_identity(rng, 2, 0.7);
  const Complex z = unit(0.9), w = unit(2.1);
  EXPECT_LT((f.transpose_tau().eval({z, w}) - f.eval({std::conj(z), std::conj(w)}).transpose()).norm(),
            1e-13);
}

TEST(Laurent, ChiralAssemblyAndBlockRoundTrip) {
  const LaurentSymbol h = golden();
  const LaurentSymbol big = assemble_chiral(h);
  EXPECT_EQ(big.band_dim(), 4);
  EXPECT_LT(coefficient_distance(chiral_block(big), h), 1e-15);
  const Matrix v = big.eval({unit(0.3), unit(1.7)});
  EXPECT_LT((v - v.adjoint()).norm(), 1e-14);
}

TEST(Laurent, SliceFixesOtherVariables) {
  const SliceSymbol s = slice(golden(), 1, {unit(0.5)});
  const Complex w = unit(-0.8);
  EXPECT_LT((s.eval(w) - golden().eval({unit(0.5), w})).norm(), 1e-14);
  EXPECT_LT((s.to_symbol().eval({w}) - s.eval(w)).norm(), 1e-14);
}

TEST(SymbolIo, RoundTripsExactly) {
  std::mt19937_64 rng(11);
  const LaurentSymbol f = testing::near_identity(rng, 3, 0.3).shifted(1, -2);
  const LaurentSymbol g = parse_symbol(format_symbol(f));
  EXPECT_EQ(coefficient_distance(f, g), 0.0);
}

TEST(SymbolIo, ReportsLineOfSyntaxError) {
  try {
    parse_symbol("{\n \"num_vars\": 1,\n \"band_dim\": 1,\n \"terms\": [ oops ]\n}");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ParseError);
    EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos) << e.what();
  }
}

TEST(SymbolIo, RejectsDuplicateExponentInDocument) {
  const char* doc = R"({"num_vars":1,"band_dim":1,"terms":[
    {"exponents":[1],"matrix":[[[1,0]]]},{"exponents":[1],"matrix":[[[2,0]]]}]})";
  try {
    parse_symbol(doc);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DuplicateExponent);
  }
}

TEST(SymbolIo, RejectsMissingFields) {
  EXPECT_THROW(parse_symbol(R"({"band_dim":1,"terms":[]})"), Error);
  EXPECT_THROW(parse_symbol(R"({"num_vars":1,"band_dim":2,"terms":[{"exponents":[0],"matrix":[[[1,0]]]}]})"),
               Error);
}

TEST(Winding, CountsTurnsOfSampledLoops) {
  for (int k : {-3, -1, 0, 2}) {
    std::vector<Complex> s;
    for (int j = 0; j < 64; ++j) s.push_back(std::pow(unit(kTwoPi * j / 64), k) * 2.0 + 0.3 * (k != 0 ? 1.0 : 0.0));
    EXPECT_EQ(winding_number(s), k);
  }
}

TEST(Winding, RejectsUndersampledAndSingularLoops) {
  // Half a turn per step leaves the direction of rotation undetermined.
  const std::vector<Complex> coarse{1.0, -1.0};
  try {
    winding_number(coarse);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UndersampledLoop);
  }
  const std::vector<Complex> zero{1.0, 0.0, -1.0};
  try {
    winding_number(zero);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SingularOnTorus);
  }
}

TEST(Symmetry, ParsesAllTenLabels) {
  for (const char* s : {"A", "AIII", "AI", "BDI", "D", "DIII", "AII", "CII", "C", "CI"}) {
    const auto label = parse_az_label(s);
    ASSERT_TRUE(label.has_value()) << s;
    EXPECT_EQ(to_string(*label), s);
  }
  EXPECT_FALSE(parse_az_label("E8").has_value());
}

TEST(Symmetry, ChiralGoldenBelongsToAIIIAndBDI) {
  const LaurentSymbol h = assemble_chiral(golden());
  EXPECT_TRUE(check_symmetry(h, az_class(AZLabel::AIII)).pass());
  // Real coefficients: h(conj p)^T = h(p)^*.
  EXPECT_TRUE(check_symmetry(h, az_class(AZLabel::BDI)).pass());
}

TEST(Symmetry, ComplexPhaseBreaksBDI) {
  const LaurentSymbol h = assemble_chiral(golden().scaled(unit(0.4)));
  EXPECT_TRUE(check_symmetry(h, az_class(AZLabel::AIII)).pass());
  EXPECT_FALSE(check_symmetry(h, az_class(AZLabel::BDI)).pass());
}

TEST(Symmetry, NonHermitianFailsEveryHamiltonianClass) {
  const SymmetryReport r = check_symmetry(golden(), az_class(AZLabel::AI));
  EXPECT_FALSE(r.pass());
  EXPECT_GT(r.max_violation(), 0.5);
}

TEST(Symmetry, QuaternionicClassNeedsEvenBand) {
  const LaurentSymbol h = LaurentSymbol::identity(2, 3);
  EXPECT_THROW(check_symmetry(h, az_class(AZLabel::AII)), Error);
}

TEST(Symmetry, SharpMatrixIsAnInvolutionUpToSign) {
  std::mt19937_64 rng(2);
  const Matrix m = testing::random_matrix(rng, 4, 1.0);
  EXPECT_LT((sharp_matrix(sharp_matrix(m)) - m).norm(), 1e-13);
}

}  // namespace
}  // namespace qtop
