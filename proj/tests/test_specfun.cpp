#include "molcom/errors.hpp"
#include "molcom/specfun.hpp"

#include "fixture_io.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace molcom::specfun;
using molcom::testing::max_component_error;

namespace {

// Reference values computed with mpmath at 60 digits.
constexpr double dawson_half = 0.42443638350202229593;
constexpr double e_erfc_1 = 0.42758357615580700441;
constexpr Complex w_1_plus_i{ 0.30474420525691259246, 0.20821893820283162729 };
// f(1; 1/2, 0), (2/pi) int_0^inf u e^{-u} cos(u^2) du by adaptive quadrature
constexpr double std_half_pdf_at_1 = 0.086107146912604118325;

std::vector<Complex>
identity_grid()
{
  const std::vector<double> xs = { -30, -17, -9.5, -4, -1.7, -0.6, -0.05, 0,
                                   0.003, 0.2, 0.9, 1.5, 3, 5.5, 7.2, 10,
                                   13, 19, 24, 30 };
  const std::vector<double> ys = { -30, -8, -2.2, -0.3, 0, 1e-6, 0.04, 1.1,
                                   6.8, 30 };
  std::vector<Complex> grid;
  for (double x : xs)
    for (double y : ys)
      grid.emplace_back(x, y);
  return grid;
}

} // namespace

TEST(Dawson, Examples)
{
  EXPECT_EQ(dawson(Complex{ 0.0, 0.0 }), Complex(0.0, 0.0));
  EXPECT_NEAR(dawson(Complex{ 0.5, 0.0 }).real(), dawson_half, 1e-15);
  EXPECT_EQ(dawson(Complex{ 0.5, 0.0 }).imag(), 0.0);
  EXPECT_EQ(dawson(Complex{ -1.0, 0.0 }), -dawson(Complex{ 1.0, 0.0 }));
  EXPECT_EQ(dawson(-1.0), -dawson(1.0));
}

TEST(Dawson, RealAndComplexOverloadsAgree)
{
  for (double x : { 0.1, 0.49, 0.51, 2.0, 7.3, 12.0, 40.0, 1e4 })
    EXPECT_NEAR(dawson(x), dawson(Complex{ x, 0.0 }).real(), 1e-15 * dawson(x));
}

TEST(Faddeeva, Examples)
{
  EXPECT_EQ(faddeeva({ 0.0, 0.0 }), Complex(1.0, 0.0));
  const Complex wi = faddeeva({ 0.0, 1.0 });
  EXPECT_NEAR(wi.real(), e_erfc_1, 1e-15);
  EXPECT_EQ(wi.imag(), 0.0);
  EXPECT_LT(max_component_error(faddeeva({ 1.0, 1.0 }), w_1_plus_i), 1e-14);
}

TEST(Faddeeva, RejectsNonFinite)
{
  EXPECT_THROW(faddeeva({ NAN, 0.0 }), molcom::DomainError);
  EXPECT_THROW(faddeeva({ 0.0, INFINITY }), molcom::DomainError);
}

TEST(Faddeeva, MatchesArbitraryPrecisionFixture)
{
  const auto fixture = molcom::testing::read_complex_fixture("faddeeva.csv");
  ASSERT_GE(fixture.size(), 500u);
  double worst = 0;
  for (const auto& f : fixture) {
    const double err = max_component_error(faddeeva(f.z), f.value);
    worst = std::max(worst, err);
    EXPECT_LE(err, 1e-12) << "z = " << f.z;
  }
  RecordProperty("worst_relative_error", std::to_string(worst));
}

TEST(Faddeeva, OverflowIsARangeError)
{
  const auto pts = molcom::testing::read_points("faddeeva_overflow.csv");
  ASSERT_FALSE(pts.empty());
  for (const auto& z : pts)
    EXPECT_THROW(faddeeva(z), molcom::RangeError) << "z = " << z;
}

TEST(Dawson, MatchesArbitraryPrecisionFixture)
{
  const auto fixture = molcom::testing::read_complex_fixture("dawson.csv");
  ASSERT_GE(fixture.size(), 500u);
  for (const auto& f : fixture)
    EXPECT_LE(max_component_error(dawson(f.z), f.value), 1e-12) << "z = " << f.z;
  for (const auto& z : molcom::testing::read_points("dawson_overflow.csv"))
    EXPECT_THROW(dawson(z), molcom::RangeError) << "z = " << z;
}

TEST(Voigt, Examples)
{
  EXPECT_NEAR(voigt_k(0.0, 1.0), e_erfc_1, 1e-15);
  EXPECT_EQ(voigt_k(0.7, 0.3), voigt_k(-0.7, 0.3));
  EXPECT_EQ(voigt_l(0.0, 2.5), 0.0);
  EXPECT_NEAR(voigt_l(1.0, 1.0), w_1_plus_i.imag(), 1e-15);
  EXPECT_EQ(voigt_l(-1.0, 1.0), -voigt_l(1.0, 1.0));

  // K(-p,p) + L(-p,p) = sqrt(8 pi) f(1; 1/2, 0) with p = 1/sqrt(8)
  const double p = 1.0 / std::sqrt(8.0);
  EXPECT_NEAR(voigt_k(-p, p) + voigt_l(-p, p),
              std::sqrt(8 * std::numbers::pi) * std_half_pdf_at_1, 1e-14);
}

TEST(Voigt, DomainErrorForNonPositiveB)
{
  EXPECT_THROW(voigt_k(1.0, 0.0), molcom::DomainError);
  EXPECT_THROW(voigt_k(1.0, -0.5), molcom::DomainError);
  EXPECT_THROW(voigt_l(1.0, 0.0), molcom::DomainError);
  EXPECT_THROW(voigt_l(0.0, NAN), molcom::DomainError);
}

TEST(Identities, DawsonFaddeevaRelation)
{
  int checked = 0;
  for (const Complex z : identity_grid()) {
    Complex f, w, e;
    try {
      f = dawson(z);
      w = faddeeva(z);
      e = exp_neg_square(z);
    } catch (const molcom::RangeError&) {
      continue;
    }
    const Complex rhs = Complex(0, 0.5 / std::numbers::inv_sqrtpi) * (e - w);
    EXPECT_LE(std::abs(f - rhs), 1e-11 * (1 + std::abs(f))) << "z = " << z;
    ++checked;
  }
  EXPECT_GT(checked, 150);
}

TEST(Identities, Reflection)
{
  for (const Complex z : identity_grid()) {
    if (z.imag() < 0)
      continue;
    Complex lhs, rhs;
    try {
      lhs = faddeeva(-z);
      rhs = 2.0 * exp_neg_square(z) - faddeeva(z);
    } catch (const molcom::RangeError&) {
      continue;
    }
    // w(-z) itself grows like exp(y^2) below the real axis, so the tolerance
    // scales with the larger side of the identity.
    const double scale = 1 + std::abs(faddeeva(z)) + std::abs(lhs);
    EXPECT_LE(std::abs(lhs - rhs), 1e-11 * scale) << "z = " << z;
  }
}

TEST(Identities, VoigtDecomposition)
{
  for (const Complex z : identity_grid()) {
    if (z.imag() <= 0)
      continue;
    const Complex w = faddeeva(z);
    EXPECT_EQ(voigt_k(z.real(), z.imag()), w.real());
    EXPECT_EQ(voigt_l(z.real(), z.imag()), w.imag());
  }
}

TEST(Identities, RealAxisLaw)
{
  for (double x = -30; x <= 30; x += 0.37) {
    const double want = std::exp(-x * x);
    const double got = faddeeva({ x, 0.0 }).real();
    if (want == 0.0)
      EXPECT_EQ(got, 0.0);
    else
      EXPECT_LE(std::abs(got - want), 1e-12 * want) << "x = " << x;
  }
}

TEST(Voigt, RealPartDecreasingAlongImaginaryAxis)
{
  double previous = voigt_k(0.0, 0.01);
  for (double b = 0.01 * 1.05; b <= 30; b *= 1.05) {
    const double k = voigt_k(0.0, b);
    EXPECT_LT(k, previous) << "b = " << b;
    previous = k;
  }
}

TEST(Erfcx, MatchesLibraryInSafeRange)
{
  for (double x : { -3.0, -0.5, 0.0, 0.3, 2.0, 5.0 })
    EXPECT_NEAR(erfcx(x), std::exp(x * x) * std::erfc(x), 1e-13 * erfcx(x));
  EXPECT_THROW(erfcx(-30.0), molcom::RangeError);
}
