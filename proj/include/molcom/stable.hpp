#pragma once

#include "molcom/specfun.hpp"

#include <span>
#include <string>
#include <vector>

//! Stable laws S(mu, c, alpha, beta) with characteristic function
//!
//!   phi(t) = exp[ i mu t - |c t|^alpha (1 - i beta sgn(t) Phi) ],
//!   Phi = tan(pi alpha / 2) for alpha != 1, -(2/pi) log|t| for alpha = 1.
//!
//! alpha = 1/2, beta = 1 is the Levy law of first hitting times; alpha = 2 is
//! the Gaussian with variance 2c^2.
namespace molcom::stable {

using specfun::Complex;

struct StableParams
{
  double mu = 0.0;    // location
  double c = 1.0;     // scale
  double alpha = 0.5; // stability index
  double beta = 0.0;  // skewness

  //! Throws DomainError unless c >= 0, 0 < alpha <= 2, |beta| <= 1, mu finite.
  void validate() const;

  bool operator==(const StableParams&) const = default;
};

//! Standard normal N(0, 1) as a member of the family.
inline constexpr StableParams standard_gaussian{ 0.0, 0.70710678118654752440, 2.0, 0.0 };

//! Affine map y = (x - shift) / scale between a law and its standard form.
struct AffineMap
{
  double shift = 0.0;
  double scale = 1.0;

  double forward(double x) const { return (x - shift) / scale; }
  double inverse(double y) const { return shift + scale * y; }
};

struct Standardized
{
  StableParams params; // (0, 1, alpha, beta)
  AffineMap map;
};

//! Standard form Y = (X - mu) / c. For alpha = 1 with beta != 0 the shift
//! also absorbs the (2/pi) beta c log c term of the log branch. Throws
//! DomainError for c = 0 (point mass).
Standardized standardize(const StableParams& params);

Complex cf_stable(double t, const StableParams& params);

double levy_pdf(double x, double mu, double c);
double levy_cdf(double x, double mu, double c);
//! 1 - levy_cdf, without cancellation.
double levy_sf(double x, double mu, double c);

//! Density of S(0, 1, 1/2, beta) through the complex error function:
//!
//!   x > 0: [(1+b) K(-p, q) + (1-b) L(-p, q)] / sqrt(8 pi x^3)
//!   x = 0: 2 (1 - b^2) / (pi (1 + b^2)^2)
//!   x < 0: [(1-b) K(q, p) - (1+b) L(q, p)] / sqrt(8 pi |x|^3)
//!
//! with p = (1+b)/sqrt(8|x|), q = (1-b)/sqrt(8|x|). For |x| < 1e-3 the
//! convergent-in-practice expansion about x = 0 replaces the closed form,
//! which loses digits there to cancellation.
double std_half_pdf(double x, double beta);

//! CDF of S(0, 1, 1/2, beta) by quadrature of std_half_pdf.
double std_half_cdf(double x, double beta);

//! Survival function 1 - std_half_cdf, computed without cancellation.
double std_half_sf(double x, double beta);

double pdf(double x, const StableParams& params);
double cdf(double x, const StableParams& params);
double sf(double x, const StableParams& params);

//! cdf at every point of an ascending sequence. For alpha = 1/2 the values
//! are accumulated between neighbours with a 4-point Gauss-Legendre rule on
//! the closed-form density and re-anchored to cdf() every 1024 points and
//! across wide gaps; agreement with cdf() is ~1e-12. Intended for
//! goodness-of-fit on large samples.
std::vector<double> cdf_sorted(std::span<const double> ascending, const StableParams& params);

//! Density by numerical inversion of cf_stable (Gauss-Kronrod panels between
//! oscillations, truncated where |phi| < 1e-17). Independent of the closed
//! forms; absolute error <= 1e-9 on standardized scale for |x| <= 100.
//! Throws ConvergenceError when the accumulated error estimate exceeds that.
double cf_inversion_pdf(double x, const StableParams& params);

//! Gil-Pelaez inversion F(x) = 1/2 - (1/pi) int_0^inf Im[e^{-itx} phi(t)] / t dt.
double cf_inversion_cdf(double x, const StableParams& params);

//! Asymptotic P(X > x) ~ (1 + beta) / sqrt(2 pi x) for standardized alpha = 1/2.
//! Clamped to [0, 1]; meaningful for x >= tail_validity_threshold.
double tail_stable_half(double x, double beta);

//! Asymptotic standard normal tail exp(-x^2/2) / (x sqrt(2 pi)), clamped to [0, 1].
double tail_gaussian(double x);

inline constexpr double tail_validity_threshold = 1.0;
inline constexpr double tail_underflow = 1e-300;

enum class TailFamily
{
  stable_half,
  gaussian
};

struct TailApprox
{
  double x = 0.0;
  double p_exact = 0.0;
  double p_approx = 0.0;
  TailFamily family = TailFamily::stable_half;
  bool underflow = false; // a probability fell below 1e-300 and is reported as 0
};

//! Exact vs asymptotic tail at x. beta is ignored for the Gaussian family,
//! whose exact tail is that of N(0, 1).
TailApprox tail_comparison(double x, TailFamily family, double beta = 0.0);

enum class Method
{
  closed_form,
  cf_inversion
};

std::string to_string(Method method);

struct DensityTable
{
  std::vector<double> abscissae;
  std::vector<double> pdf;
  std::vector<double> cdf;
  Method method = Method::closed_form;
  StableParams params;
};

//! Evaluates pdf and cdf on strictly increasing abscissae. Work is spread
//! over `threads` workers (0 = hardware); values do not depend on it.
DensityTable make_density_table(const StableParams& params,
                                std::span<const double> abscissae,
                                Method method = Method::closed_form,
                                unsigned threads = 1);

} // namespace molcom::stable
