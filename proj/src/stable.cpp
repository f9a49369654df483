#include "molcom/stable.hpp"

#include "molcom/errors.hpp"
#include "molcom/parallel.hpp"
#include "quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace molcom::stable {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double inv_sqrt_2pi = 0.398942280401432677940;
// Below this |x| the standardized alpha = 1/2 density is summed from its
// expansion about the origin instead of the error-function form.
constexpr double origin_series_radius = 1e-3;
constexpr double inversion_tolerance = 1e-9;

void
require_beta(double beta)
{
  if (!(std::abs(beta) <= 1.0))
    throw DomainError("skewness beta must lie in [-1, 1]");
}

void
require_finite(double x, const char* what)
{
  if (!std::isfinite(x))
    throw DomainError(std::string(what) + " must be finite");
}

void
require_levy_scale(double c)
{
  if (!(c > 0.0) || !std::isfinite(c))
    throw DomainError("Levy scale c must be positive and finite");
}

double
clamp_probability(double p)
{
  return std::clamp(p, 0.0, 1.0);
}

// f(x) = (2/pi) sum_k Re[T_k], T_0 = (1 - i beta)^-2,
// T_{k+1} = T_k * (-2i (2k+3) x) / (1 - i beta)^2.
double
half_pdf_origin_series(double x, double beta)
{
  const Complex a2 = Complex(1.0, -beta) * Complex(1.0, -beta);
  Complex term = 1.0 / a2;
  Complex sum = term;
  for (int k = 0; k < 16; ++k) {
    term *= Complex(0.0, -2.0 * (2 * k + 3) * x) / a2;
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum))
      break;
  }
  return 2.0 / pi * sum.real();
}

double
half_cdf_at_zero(double beta)
{
  return 0.5 - 2.0 / pi * std::atan(beta);
}

// Mass of the standardized alpha = 1/2 law beyond |x| >= 1 on one side,
// via t = 1/r^2 which turns the algebraic tail into a smooth integrand on
// [0, 1/sqrt(|x|)].
double
half_tail_mass(double x, double beta)
{
  const double sign = x > 0 ? 1.0 : -1.0;
  auto integrand = [&](double r) {
    const double r2 = r * r;
    return 2.0 * std_half_pdf(sign / r2, beta) / (r2 * r);
  };
  return detail::integrate(integrand, 0.0, 1.0 / std::sqrt(std::abs(x)), 1e-16).value;
}

double
half_central_mass(double x, double beta)
{
  auto integrand = [&](double t) { return std_half_pdf(t, beta); };
  // Panels start where the density switches representation and grow
  // geometrically: the density is smooth but not analytic at the origin, so
  // a single rule over [0, x] converges slowly.
  if (std::abs(x) <= origin_series_radius)
    return detail::integrate(integrand, 0.0, x, 1e-16).value;
  double a = std::copysign(origin_series_radius, x);
  double sum = detail::integrate(integrand, 0.0, a, 1e-16).value;
  while (std::abs(a) < std::abs(x)) {
    const double b = std::abs(4.0 * a) < std::abs(x) ? 4.0 * a : x;
    sum += detail::integrate(integrand, a, b, 1e-16).value;
    a = b;
  }
  return sum;
}

double
gaussian_pdf(double x, double mu, double c)
{
  const double z = (x - mu) / (2.0 * c);
  return std::exp(-z * z) / (2.0 * c) * std::numbers::inv_sqrtpi;
}

Standardized
standardize_checked(const StableParams& params)
{
  params.validate();
  return standardize(params);
}

// Phase of e^{-itx} phi(t) for the standard law, as a function of t >= 0.
double
inversion_phase(double t, double x, double alpha, double beta)
{
  if (alpha == 1.0)
    return t > 0.0 ? -x * t - 2.0 / pi * beta * t * std::log(t) : 0.0;
  return -x * t + beta * std::pow(t, alpha) * std::tan(pi * alpha / 2.0);
}

enum class InversionKind
{
  density,
  distribution
};

// Integrates e^{-t^alpha} {cos, sin/t}(phase) over t in [0, inf) in panels
// that each span at most about pi of phase. For alpha < 1 the variable
// u = t^alpha absorbs the cusp of the integrand at the origin.
detail::Integral
inversion_integral(double x, double alpha, double beta, InversionKind kind)
{
  const bool substitute = alpha < 1.0;
  const double skew_rate =
    alpha == 1.0 ? 0.0 : std::abs(beta * std::tan(pi * alpha / 2.0));
  // e^{-u} < 1e-17 beyond u = 39.2.
  const double decay_end = 39.2;
  const double upper = substitute ? decay_end : std::pow(decay_end, 1.0 / alpha);

  // t = u^(1/alpha); alpha = 1/2 is the common case and avoids pow.
  const double inv_alpha = 1.0 / alpha;
  auto to_t = [&](double v) {
    if (!substitute)
      return v;
    return inv_alpha == 2.0 ? v * v : std::pow(v, inv_alpha);
  };
  auto rate = [&](double v) {
    if (substitute)
      return std::abs(x) / alpha * std::pow(v, 1.0 / alpha - 1.0) + skew_rate;
    if (alpha == 1.0)
      return std::abs(x) + 2.0 / pi * std::abs(beta) * (std::abs(std::log(std::max(v, 1e-300))) + 1.0);
    return std::abs(x) + alpha * skew_rate * std::pow(v, alpha - 1.0);
  };
  auto integrand = [&](double v) {
    const double t = to_t(v);
    const double decay = substitute ? std::exp(-v) : std::exp(-std::pow(t, alpha));
    const double theta = inversion_phase(t, x, alpha, beta);
    if (kind == InversionKind::density) {
      const double jacobian = substitute ? t / v * inv_alpha : 1.0;
      return decay * std::cos(theta) * jacobian;
    }
    // sin(theta)/t dt = sin(theta)/(alpha u) du under the substitution.
    const double weight = substitute ? 1.0 / (alpha * v) : 1.0 / t;
    return decay * std::sin(theta) * weight;
  };

  // Refuse abscissae whose phase would need an impractical number of panels.
  const double total_phase =
    std::abs(x) * to_t(upper) + skew_rate * (substitute ? upper : std::pow(upper, alpha));
  if (total_phase / pi > 1e6)
    throw ConvergenceError("characteristic function inversion: integrand too oscillatory at x = " +
                             std::to_string(x),
                           std::numeric_limits<double>::quiet_NaN(),
                           std::numeric_limits<double>::infinity());

  const double max_width = substitute ? 2.0 : 1.0;
  detail::Integral total;
  double a = 0.0;
  if (alpha == 1.0 && beta != 0.0) {
    // t log t has an unbounded phase rate at the origin and sin(theta)/t a
    // log singularity; on this panel t = s^4 makes both smooth.
    const double b = std::min(1e-3, pi / (std::abs(x) + 1.0));
    auto smoothed = [&](double s) {
      const double s2 = s * s;
      return integrand(s2 * s2) * 4.0 * s2 * s;
    };
    const auto part = detail::integrate(smoothed, 0.0, std::sqrt(std::sqrt(b)), 1e-14);
    total.value += part.value;
    total.error += part.error;
    a = b;
  }
  while (a < upper) {
    double h = std::min(max_width, pi / rate(a));
    h = std::min(h, pi / rate(a + h));
    const double b = std::min(upper, a + h);
    const auto part = detail::integrate(integrand, a, b, 1e-14);
    total.value += part.value;
    total.error += part.error;
    a = b;
  }
  return total;
}

} // namespace

void
StableParams::validate() const
{
  require_finite(mu, "location mu");
  if (!(c >= 0.0) || !std::isfinite(c))
    throw DomainError("scale c must be finite and >= 0");
  if (!(alpha > 0.0 && alpha <= 2.0))
    throw DomainError("stability index alpha must lie in (0, 2]");
  require_beta(beta);
}

Standardized
standardize(const StableParams& params)
{
  params.validate();
  if (params.c == 0.0)
    throw DomainError("scale c = 0 is a point mass and has no standard form");
  AffineMap map{ params.mu, params.c };
  if (params.alpha == 1.0)
    map.shift += 2.0 / pi * params.beta * params.c * std::log(params.c);
  return { { 0.0, 1.0, params.alpha, params.beta }, map };
}

Complex
cf_stable(double t, const StableParams& params)
{
  params.validate();
  require_finite(t, "argument t");
  if (t == 0.0)
    return 1.0;
  const double sgn = t > 0 ? 1.0 : -1.0;
  const double phi = params.alpha == 1.0 ? -2.0 / pi * std::log(std::abs(t))
                                         : std::tan(pi * params.alpha / 2.0);
  const double magnitude = std::pow(std::abs(params.c * t), params.alpha);
  const double phase = params.mu * t + magnitude * params.beta * sgn * phi;
  return std::polar(std::exp(-magnitude), phase);
}

double
levy_pdf(double x, double mu, double c)
{
  require_levy_scale(c);
  if (!(x > mu))
    return 0.0;
  const double s = x - mu;
  return std::sqrt(c / (2.0 * pi * s * s * s)) * std::exp(-c / (2.0 * s));
}

double
levy_cdf(double x, double mu, double c)
{
  require_levy_scale(c);
  if (!(x > mu))
    return 0.0;
  return std::erfc(std::sqrt(c / (2.0 * (x - mu))));
}

double
levy_sf(double x, double mu, double c)
{
  require_levy_scale(c);
  if (!(x > mu))
    return 1.0;
  return std::erf(std::sqrt(c / (2.0 * (x - mu))));
}

double
std_half_pdf(double x, double beta)
{
  require_beta(beta);
  require_finite(x, "abscissa x");
  if (x == 0.0)
    return 2.0 * (1.0 - beta * beta) / (pi * (1.0 + beta * beta) * (1.0 + beta * beta));
  if (std::abs(x) < origin_series_radius && std::abs(beta) != 1.0)
    return std::max(0.0, half_pdf_origin_series(x, beta));

  const double ax = std::abs(x);
  const double root = std::sqrt(8.0 * ax);
  const double p = (1.0 + beta) / root;
  const double q = (1.0 - beta) / root;
  const double norm = 1.0 / std::sqrt(8.0 * pi * ax * ax * ax);
  double value;
  if (x > 0) {
    const Complex w = specfun::faddeeva(Complex(-p, q));
    value = ((1.0 + beta) * w.real() + (1.0 - beta) * w.imag()) * norm;
  } else {
    const Complex w = specfun::faddeeva(Complex(q, p));
    value = ((1.0 - beta) * w.real() - (1.0 + beta) * w.imag()) * norm;
  }
  return std::max(0.0, value);
}

double
std_half_cdf(double x, double beta)
{
  require_beta(beta);
  if (std::isnan(x))
    throw DomainError("abscissa x must not be NaN");
  if (beta == 1.0)
    return levy_cdf(x, 0.0, 1.0);
  if (beta == -1.0)
    return levy_sf(-x, 0.0, 1.0);
  if (std::isinf(x))
    return x > 0 ? 1.0 : 0.0;
  if (x < -1.0)
    return clamp_probability(half_tail_mass(x, beta));
  if (x > 1.0)
    return clamp_probability(1.0 - half_tail_mass(x, beta));
  return clamp_probability(half_cdf_at_zero(beta) + half_central_mass(x, beta));
}

double
std_half_sf(double x, double beta)
{
  require_beta(beta);
  if (std::isnan(x))
    throw DomainError("abscissa x must not be NaN");
  if (beta == 1.0)
    return levy_sf(x, 0.0, 1.0);
  if (beta == -1.0)
    return levy_cdf(-x, 0.0, 1.0);
  if (std::isinf(x))
    return x > 0 ? 0.0 : 1.0;
  if (x > 1.0)
    return clamp_probability(half_tail_mass(x, beta));
  if (x < -1.0)
    return clamp_probability(1.0 - half_tail_mass(x, beta));
  return clamp_probability(1.0 - half_cdf_at_zero(beta) - half_central_mass(x, beta));
}

double
pdf(double x, const StableParams& params)
{
  const auto [std_params, map] = standardize_checked(params);
  if (params.alpha == 0.5)
    return std_half_pdf(map.forward(x), params.beta) / map.scale;
  if (params.alpha == 2.0)
    return gaussian_pdf(x, params.mu, params.c);
  return cf_inversion_pdf(x, params);
}

double
cdf(double x, const StableParams& params)
{
  const auto [std_params, map] = standardize_checked(params);
  if (params.alpha == 0.5)
    return std_half_cdf(map.forward(x), params.beta);
  if (params.alpha == 2.0)
    return 0.5 * std::erfc(-(x - params.mu) / (2.0 * params.c));
  return cf_inversion_cdf(x, params);
}

double
sf(double x, const StableParams& params)
{
  const auto [std_params, map] = standardize_checked(params);
  if (params.alpha == 0.5)
    return std_half_sf(map.forward(x), params.beta);
  if (params.alpha == 2.0)
    return 0.5 * std::erfc((x - params.mu) / (2.0 * params.c));
  return clamp_probability(1.0 - cf_inversion_cdf(x, params));
}

std::vector<double>
cdf_sorted(std::span<const double> ascending, const StableParams& params)
{
  const auto [std_params, map] = standardize_checked(params);
  for (std::size_t i = 1; i < ascending.size(); ++i)
    if (!(ascending[i] >= ascending[i - 1]))
      throw DomainError("cdf_sorted requires ascending abscissae");

  std::vector<double> out(ascending.size());
  if (params.alpha != 0.5 || std::abs(params.beta) == 1.0) {
    for (std::size_t i = 0; i < ascending.size(); ++i)
      out[i] = cdf(ascending[i], params);
    return out;
  }

  // 4-point Gauss-Legendre nodes and weights on [-1, 1].
  constexpr double node[2] = { 0.339981043584856264803, 0.861136311594052575224 };
  constexpr double weight[2] = { 0.652145154862546142627, 0.347854845137453857373 };
  constexpr std::size_t anchor_every = 1024;
  const double beta = params.beta;

  double prev_y = 0.0;
  double prev_f = 0.0;
  for (std::size_t i = 0; i < ascending.size(); ++i) {
    const double y = map.forward(ascending[i]);
    const double h = y - prev_y;
    const double reach = 0.02 * std::max({ std::abs(y), std::abs(prev_y), 0.05 });
    const bool step = i % anchor_every != 0 && h <= reach && std::isfinite(y);
    if (step) {
      const double mid = prev_y + 0.5 * h;
      double sum = 0.0;
      for (int k = 0; k < 2; ++k)
        sum += weight[k] * (std_half_pdf(mid - 0.5 * h * node[k], beta) +
                            std_half_pdf(mid + 0.5 * h * node[k], beta));
      prev_f = clamp_probability(prev_f + 0.5 * h * sum);
    } else {
      prev_f = std_half_cdf(y, beta);
    }
    prev_y = y;
    out[i] = prev_f;
  }
  return out;
}

double
cf_inversion_pdf(double x, const StableParams& params)
{
  const auto [std_params, map] = standardize_checked(params);
  require_finite(x, "abscissa x");
  const double y = map.forward(x);
  const auto integral =
    inversion_integral(y, params.alpha, params.beta, InversionKind::density);
  const double value = integral.value / pi;
  if (!(integral.error / pi <= inversion_tolerance))
    throw ConvergenceError("characteristic function inversion of the density", value,
                           integral.error / pi);
  return std::max(0.0, value) / map.scale;
}

double
cf_inversion_cdf(double x, const StableParams& params)
{
  const auto [std_params, map] = standardize_checked(params);
  require_finite(x, "abscissa x");
  const double y = map.forward(x);
  const auto integral =
    inversion_integral(y, params.alpha, params.beta, InversionKind::distribution);
  const double value = 0.5 - integral.value / pi;
  if (!(integral.error / pi <= inversion_tolerance))
    throw ConvergenceError("characteristic function inversion of the distribution", value,
                           integral.error / pi);
  return clamp_probability(value);
}

double
tail_stable_half(double x, double beta)
{
  require_beta(beta);
  if (!(x > 0.0))
    throw DomainError("tail threshold x must be positive");
  return clamp_probability((1.0 + beta) / std::sqrt(2.0 * pi * x));
}

double
tail_gaussian(double x)
{
  if (!(x > 0.0))
    throw DomainError("tail threshold x must be positive");
  return clamp_probability(std::exp(-0.5 * x * x) * inv_sqrt_2pi / x);
}

TailApprox
tail_comparison(double x, TailFamily family, double beta)
{
  TailApprox out;
  out.x = x;
  out.family = family;
  if (family == TailFamily::stable_half) {
    out.p_approx = tail_stable_half(x, beta);
    out.p_exact = std_half_sf(x, beta);
  } else {
    out.p_approx = tail_gaussian(x);
    out.p_exact = 0.5 * std::erfc(x / std::numbers::sqrt2);
  }
  // A Gaussian tail is never exactly zero, so a zero there is an underflow
  // too; a stable tail with beta = -1 is exactly zero on the right.
  for (double* p : { &out.p_exact, &out.p_approx }) {
    if (*p >= tail_underflow)
      continue;
    if (*p > 0.0 || family == TailFamily::gaussian)
      out.underflow = true;
    *p = 0.0;
  }
  return out;
}

std::string
to_string(Method method)
{
  return method == Method::closed_form ? "closed_form" : "cf_inversion";
}

DensityTable
make_density_table(const StableParams& params,
                   std::span<const double> abscissae,
                   Method method,
                   unsigned threads)
{
  params.validate();
  for (std::size_t i = 1; i < abscissae.size(); ++i)
    if (!(abscissae[i] > abscissae[i - 1]))
      throw DomainError("density table abscissae must be strictly increasing");

  DensityTable table;
  table.abscissae.assign(abscissae.begin(), abscissae.end());
  table.pdf.resize(abscissae.size());
  table.cdf.resize(abscissae.size());
  table.method = method;
  table.params = params;
  parallel_for(abscissae.size(), threads, [&](std::size_t i) {
    const double x = abscissae[i];
    if (method == Method::closed_form) {
      table.pdf[i] = pdf(x, params);
      table.cdf[i] = cdf(x, params);
    } else {
      table.pdf[i] = cf_inversion_pdf(x, params);
      table.cdf[i] = cf_inversion_cdf(x, params);
    }
  });
  return table;
}

} // namespace molcom::stable
