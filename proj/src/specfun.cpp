#include "molcom/specfun.hpp"

#include "molcom/errors.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace molcom::specfun {

namespace {

constexpr double inv_sqrt_pi = std::numbers::inv_sqrtpi;
constexpr double half_sqrt_pi = 0.886226925452758013649;

// Parameters of the exponentially convergent series. The truncation error of
// the series is of order exp(-pi^2 / a^2), which equals DBL_EPSILON for this a.
constexpr double series_a = 0.518321480430085929872;
constexpr double series_a2 = 0.268657157075235951582; // a^2
constexpr double series_c = 0.329973702884629072537;  // 2a / pi
constexpr double series_tol = 1e-17;

struct TwoTerm
{
  double hi;
  double lo;
};

TwoTerm
two_product(double a, double b)
{
  const double p = a * b;
  return { p, std::fma(a, b, -p) };
}

TwoTerm
two_sum(double a, double b)
{
  const double s = a + b;
  const double bb = s - a;
  return { s, (a - (s - bb)) + (b - bb) };
}

// exp(x^2) without the rounding error of forming x^2.
double
exp_square(double x)
{
  const auto sq = two_product(x, x);
  return std::exp(sq.hi) * (1.0 + sq.lo);
}

double
sinc(double x, double sin_x)
{
  return std::abs(x) < 1e-4 ? 1.0 - x * x / 6.0 : sin_x / x;
}

double
sinh_taylor(double x)
{
  const double x2 = x * x;
  return x * (1.0 + x2 * (1.0 / 6.0 + x2 / 120.0));
}

void
require_finite(Complex z, const char* what)
{
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw DomainError(std::string(what) + ": argument must be finite");
}

Complex
checked(Complex value, Complex z, const char* what)
{
  if (!std::isfinite(value.real()) || !std::isfinite(value.imag()))
    throw RangeError(std::string(what) + "(" + std::to_string(z.real()) +
                     (z.imag() < 0 ? " - " : " + ") +
                     std::to_string(std::abs(z.imag())) +
                     "i) overflows double precision");
  return value;
}

// Laplace continued fraction for w(x + iy), y >= 0. The number of terms comes
// from a fit of the count needed to reach double precision.
Complex
continued_fraction(double x, double y)
{
  const double ax = std::abs(x);
  if (ax + y > 1e7) {
    // w(z) ~ i / (sqrt(pi) z), scaled to avoid overflow in |z|^2
    if (ax > y) {
      const double yx = y / x;
      const double denom = inv_sqrt_pi / (x + yx * y);
      return { denom * yx, denom };
    }
    const double xy = x / y;
    const double denom = inv_sqrt_pi / (xy * x + y);
    return { denom, denom * xy };
  }
  if (ax + y > 4000) {
    // two-term truncation: w(z) ~ i z / (sqrt(pi) (z^2 - 1/2))
    const double dr = x * x - y * y - 0.5;
    const double di = 2 * x * y;
    const double denom = inv_sqrt_pi / (dr * dr + di * di);
    return { denom * (x * di - y * dr), denom * (x * dr + y * di) };
  }
  double nu = std::floor(3.9 + 11.398 / (0.08254 * ax + 0.1421 * y + 0.2023));
  double wr = x;
  double wi = y;
  for (nu = 0.5 * (nu - 1); nu > 0.4; nu -= 0.5) {
    const double denom = nu / (wr * wr + wi * wi);
    wr = x - wr * denom;
    wi = y + wi * denom;
  }
  const double denom = inv_sqrt_pi / (wr * wr + wi * wi);
  return { denom * wi, denom * wr };
}

// Power series w(z) = sum_k (iz)^k / Gamma(k/2 + 1), used for |z| < 0.1.
Complex
taylor_origin(Complex z)
{
  static const auto coeffs = [] {
    std::array<double, 20> c{};
    c[0] = 1.0;
    c[1] = 2.0 * inv_sqrt_pi;
    for (std::size_t k = 2; k < c.size(); ++k)
      c[k] = c[k - 2] / (0.5 * static_cast<double>(k));
    return c;
  }();
  const Complex iz{ -z.imag(), z.real() };
  Complex power = 1.0;
  Complex sum = 0.0;
  for (double c : coeffs) {
    sum += c * power;
    power *= iz;
  }
  return sum;
}

// Zaghloul-Ali series for |x| < 10 and moderate |y|; valid for either sign of y.
Complex
series_mid(double x0, double y)
{
  const double x = std::abs(x0);
  double sum1 = 0, sum2 = 0, sum3 = 0, sum4 = 0, sum5 = 0;
  double prod2ax = 1, prodm2ax = 1;
  double expx2;

  if (x < 5e-4) {
    // sum5 - sum4 accumulated together through sinh to avoid cancellation
    const double x2 = x * x;
    expx2 = 1 - x2 * (1 - 0.5 * x2);
    const double ax2 = 2 * series_a * x;
    const double exp2ax = 1 + ax2 * (1 + ax2 * (0.5 + ax2 / 6.0));
    const double expm2ax = 1 - ax2 * (1 - ax2 * (0.5 - ax2 / 6.0));
    for (int n = 1;; ++n) {
      const double nn = static_cast<double>(n);
      const double coef =
        std::exp(-series_a2 * nn * nn) * expx2 / (series_a2 * nn * nn + y * y);
      prod2ax *= exp2ax;
      prodm2ax *= expm2ax;
      sum1 += coef;
      sum2 += coef * prodm2ax;
      sum3 += coef * prod2ax;
      sum5 += coef * (2 * series_a) * nn * sinh_taylor(2 * series_a * nn * x);
      if (coef * prod2ax < series_tol * sum3)
        break;
    }
  } else {
    expx2 = std::exp(-x * x);
    const double exp2ax = std::exp(2 * series_a * x);
    const double expm2ax = 1 / exp2ax;
    for (int n = 1;; ++n) {
      const double nn = static_cast<double>(n);
      const double coef =
        std::exp(-series_a2 * nn * nn) * expx2 / (series_a2 * nn * nn + y * y);
      prod2ax *= exp2ax;
      prodm2ax *= expm2ax;
      sum1 += coef;
      sum2 += coef * prodm2ax;
      sum4 += (coef * prodm2ax) * (series_a * nn);
      sum3 += coef * prod2ax;
      sum5 += (coef * prod2ax) * (series_a * nn);
      if ((coef * prod2ax) * (series_a * nn) < series_tol * sum5)
        break;
    }
  }

  // for y < -6, erfcx(y) = 2 exp(y^2) to double precision
  const double expx2_erfcx =
    y > -6 ? expx2 * erfcx(y) : 2 * std::exp(y * y - x * x);
  const double sinxy = std::sin(x0 * y);
  const double sin2xy = std::sin(2 * x0 * y);
  const double cos2xy = std::cos(2 * x0 * y);
  const double coef1 = expx2_erfcx - series_c * y * sum1;
  const double coef2 = series_c * x0 * expx2;
  const Complex head{ coef1 * cos2xy + coef2 * sinxy * sinc(x0 * y, sinxy),
                      coef2 * sinc(2 * x0 * y, sin2xy) - coef1 * sin2xy };
  return head + Complex{ 0.5 * series_c * y * (sum2 + sum3),
                         0.5 * series_c * std::copysign(sum5 - sum4, x0) };
}

// Series for 10 <= |x| with small |y|: only the terms near n0 = x/a matter,
// summed outward in both directions.
Complex
series_large_x(double x0, double y)
{
  const double x = std::abs(x0);
  Complex head;
  if (y < 0)
    head = std::polar(2 * std::exp(y * y - x * x) - std::exp(-x * x), -2 * x0 * y);
  else
    head = std::exp(-x * x);

  const double n0 = std::floor(x / series_a + 0.5);
  const double dx = series_a * n0 - x;
  double sum3 = std::exp(-dx * dx) / (series_a2 * (n0 * n0) + y * y);
  double sum5 = series_a * n0 * sum3;
  const double exp1 = std::exp(4 * series_a * dx);
  double exp1dn = 1;
  double dn = 1;
  bool done = false;
  for (; n0 - dn > 0; dn += 1) {
    const double np = n0 + dn;
    const double nm = n0 - dn;
    double tp = std::exp(-(series_a * dn + dx) * (series_a * dn + dx));
    double tm = tp * (exp1dn *= exp1);
    tp /= (series_a2 * (np * np) + y * y);
    tm /= (series_a2 * (nm * nm) + y * y);
    sum3 += tp + tm;
    sum5 += series_a * (np * tp + nm * tm);
    if (series_a * (np * tp + nm * tm) < series_tol * sum5) {
      done = true;
      break;
    }
  }
  while (!done) {
    const double np = n0 + dn;
    const double tp = std::exp(-(series_a * dn + dx) * (series_a * dn + dx)) /
                      (series_a2 * (np * np) + y * y);
    dn += 1;
    sum3 += tp;
    sum5 += series_a * np * tp;
    done = series_a * np * tp < series_tol * sum5;
  }
  return head + Complex{ 0.5 * series_c * y * sum3,
                         0.5 * series_c * std::copysign(sum5, x0) };
}

double
dawson_nonnegative(double x);

Complex
faddeeva_unchecked(Complex z)
{
  const double x0 = z.real();
  const double y = z.imag();
  const double x = std::abs(x0);
  const double ya = std::abs(y);

  if (x0 == 0.0)
    return { erfcx(y), x0 };
  if (y == 0.0)
    return { std::exp(-x * x), std::copysign(2 * inv_sqrt_pi * dawson_nonnegative(x), x0) };

  if (x * x + y * y < 0.01) {
    return taylor_origin(z);
  }

  if (ya > 7 || (x > 6 && (ya > 0.1 || (x > 8 && ya > 1e-10) || x > 28))) {
    const double xs = y < 0 ? -x0 : x0;
    Complex w = continued_fraction(xs, ya);
    if (y < 0)
      return 2.0 * exp_neg_square(z) - w;
    return w;
  }

  return x < 10 ? series_mid(x0, y) : series_large_x(x0, y);
}

Complex
dawson_taylor(Complex z)
{
  const Complex m2z2 = -2.0 * z * z;
  Complex term = z;
  Complex sum = z;
  for (int n = 0; n < 200; ++n) {
    term *= m2z2 / (2.0 * n + 3.0);
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum))
      break;
  }
  return sum;
}

// Rybicki's exponentially convergent sum F(x) = pi^{-1/2} sum_{n odd}
// exp(-(x - nh)^2) / n; the discretization error is O(exp(-(pi / 2h)^2)).
double
dawson_rybicki(double x)
{
  constexpr double h = 0.25;
  constexpr double width = 6.5;
  const auto lo = static_cast<long>(std::ceil((x - width) / h));
  const auto hi = static_cast<long>(std::floor((x + width) / h));
  double sum = 0.0;
  for (long n = lo; n <= hi; ++n) {
    if (n % 2 == 0)
      continue;
    const double d = x - static_cast<double>(n) * h;
    sum += std::exp(-d * d) / static_cast<double>(n);
  }
  return inv_sqrt_pi * sum;
}

// Asymptotic series F(x) = (1/2x) sum_k (2k-1)!! / (2x^2)^k for x >= 7, where
// the optimal truncation error is below 1e-20. Returns the series without its
// leading 1, so that 1 - 2x F(x) can be formed without cancellation.
double
dawson_asymptotic_tail(double x)
{
  const double inv = 1.0 / x;
  const double t = 0.5 * inv * inv;
  double term = 1.0;
  double sum = 0.0;
  for (int k = 1; k < 60; ++k) {
    term *= (2.0 * k - 1.0) * t;
    sum += term;
    if (term < 1e-18 * sum)
      break;
  }
  return sum;
}

double
dawson_nonnegative(double x)
{
  if (x < 0.5)
    return dawson_taylor({ x, 0.0 }).real();
  if (x < 7)
    return dawson_rybicki(x);
  return 0.5 / x * (1.0 + dawson_asymptotic_tail(x));
}

// F'(x) = 1 - 2x F(x) for x >= 0.
double
dawson_derivative_nonnegative(double x, double f)
{
  if (x < 7)
    return 1.0 - 2.0 * x * f;
  return -dawson_asymptotic_tail(x);
}

// F(x + iy) for small y near the real axis, from the Taylor expansion in y
// about F(x). Needs 2xy small.
Complex
dawson_near_real_axis(double x, double y)
{
  const double x2 = x * x;
  const double y2 = y * y;
  const double d = dawson_nonnegative(x);
  const double g = dawson_derivative_nonnegative(x, d);
  return { d + y2 * (d + x * g) +
             y2 * y2 *
               (d * (0.5 - x2 * (2 - 2.0 / 3.0 * x2)) + x * (5.0 / 6.0 - x2 / 3.0)),
           y * (g + y2 * (2.0 / 3.0) * (1 - x2 - d * x * (3 - 2 * x2)) +
                y2 * y2 *
                  (4.0 / 15.0 - x2 * (0.6 - 2.0 / 15.0 * x2) -
                   d * x * (1 - x2 * (4.0 / 3.0 - 4.0 / 15.0 * x2)))) };
}

// First quadrant only: x >= 0, y >= 0.
Complex
dawson_first_quadrant(double x, double y)
{
  if (y == 0.0)
    return dawson_nonnegative(x);
  if (x * x + y * y < 0.25)
    return dawson_taylor({ x, y });
  if (y < 5e-3 && 2 * x * y < 5e-3 && x < 1e7)
    return dawson_near_real_axis(x, y);
  const Complex diff = exp_neg_square({ x, y }) - faddeeva_unchecked({ x, y });
  return half_sqrt_pi * Complex{ -diff.imag(), diff.real() };
}

} // namespace

double
erfcx(double x)
{
  if (std::isnan(x))
    throw DomainError("erfcx: argument must not be NaN");
  if (x < 0) {
    if (x < -26.7)
      throw RangeError("erfcx(" + std::to_string(x) + ") overflows double precision");
    return 2 * exp_square(x) - erfcx(-x);
  }
  if (x > 7)
    return continued_fraction(0.0, x).real();
  return exp_square(x) * std::erfc(x);
}

Complex
exp_neg_square(Complex z)
{
  const double x = z.real();
  const double y = z.imag();
  const auto x2 = two_product(x, x);
  const auto y2 = two_product(y, y);
  const auto re = two_sum(y2.hi, -x2.hi);
  const double re_lo = re.lo + y2.lo - x2.lo;
  const auto xy = two_product(x, y);
  const double phase = -2 * xy.hi;
  const double phase_lo = -2 * xy.lo;
  const double magnitude = std::exp(re.hi) * (1.0 + re_lo);
  const double c = std::cos(phase);
  const double s = std::sin(phase);
  return { magnitude * (c - s * phase_lo), magnitude * (s + c * phase_lo) };
}

Complex
faddeeva(Complex z)
{
  require_finite(z, "faddeeva");
  return checked(faddeeva_unchecked(z), z, "faddeeva");
}

double
dawson(double x)
{
  if (!std::isfinite(x))
    throw DomainError("dawson: argument must be finite");
  return std::copysign(dawson_nonnegative(std::abs(x)), x);
}

Complex
dawson(Complex z)
{
  require_finite(z, "dawson");
  const double x = z.real();
  const double y = z.imag();
  // F is odd with real Taylor coefficients, so reduce to the first quadrant.
  Complex f = dawson_first_quadrant(std::abs(x), std::abs(y));
  if (x < 0)
    f = -f;
  if ((x < 0) != (y < 0))
    f = std::conj(f);
  if (y == 0.0)
    f.imag(0.0);
  return checked(f, z, "dawson");
}

double
voigt_k(double a, double b)
{
  if (!(b > 0) || !std::isfinite(a) || !std::isfinite(b))
    throw DomainError("voigt_k: requires finite a and b > 0, got b = " +
                      std::to_string(b));
  return faddeeva({ a, b }).real();
}

double
voigt_l(double a, double b)
{
  if (!(b > 0) || !std::isfinite(a) || !std::isfinite(b))
    throw DomainError("voigt_l: requires finite a and b > 0, got b = " +
                      std::to_string(b));
  return faddeeva({ a, b }).imag();
}

} // namespace molcom::specfun
