#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace molcom::detail {

struct Integral
{
  double value = 0.0;
  double error = 0.0;
};

//! One 21-point Gauss-Kronrod rule on [a, b]. Endpoints are never sampled,
//! so integrable endpoint singularities are allowed. The raw |K - G|
//! difference measures the embedded 10-point Gauss rule, which is far less
//! accurate than the Kronrod result; it is mapped to an estimate of the
//! Kronrod error with the QUADPACK heuristic, using the L1 norm in place of
//! the mean absolute deviation.
template<class F>
Integral
kronrod21(F& f, double a, double b)
{
  Integral out;
  double diff = 0.0;
  double l1 = 0.0;
  out.value = boost::math::quadrature::gauss_kronrod<double, 21>::integrate(
    f, a, b, 0, 0.0, &diff, &l1);
  // Boost reports the difference on the reference interval [-1, 1].
  diff *= 0.5 * std::abs(b - a);
  l1 = std::abs(l1);
  if (l1 > 0.0)
    out.error = std::max(l1 * std::min(1.0, std::pow(200.0 * diff / l1, 1.5)),
                         50.0 * std::numeric_limits<double>::epsilon() * l1);
  return out;
}

//! Bisects until each piece meets max(abs_tol, rel_tol * |piece|) scaled to
//! its share of [a, b], or max_depth is reached. The returned error is the
//! sum of the per-piece Kronrod estimates.
template<class F>
Integral
integrate(F&& f, double a, double b, double abs_tol, double rel_tol = 1e-13,
          unsigned max_depth = 16)
{
  auto recurse = [&](auto& self, double lo, double hi, double tol, unsigned depth) -> Integral {
    const Integral whole = kronrod21(f, lo, hi);
    if (whole.error <= std::max(tol, rel_tol * std::abs(whole.value)) || depth == 0)
      return whole;
    const double mid = 0.5 * (lo + hi);
    const Integral left = self(self, lo, mid, 0.5 * tol, depth - 1);
    const Integral right = self(self, mid, hi, 0.5 * tol, depth - 1);
    return { left.value + right.value, left.error + right.error };
  };
  return recurse(recurse, a, b, abs_tol, max_depth);
}

} // namespace molcom::detail
