#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace molcom {

//! Argument outside the mathematical domain of an operation (e.g. b <= 0 for
//! the Voigt functions, c <= 0 for a Levy law).
class DomainError : public std::domain_error
{
public:
  using std::domain_error::domain_error;
};

//! Result not representable in double precision (overflow of e^{-z^2} in the
//! lower half plane, etc.).
class RangeError : public std::range_error
{
public:
  using std::range_error::range_error;
};

//! A numerical integration or iteration did not reach its error target.
class ConvergenceError : public std::runtime_error
{
public:
  ConvergenceError(const std::string& what, double estimate, double error)
    : std::runtime_error(what + " (estimate " + format(estimate) + ", error bound " +
                         format(error) + ")")
    , estimate_(estimate)
    , error_(error)
  {}

  double estimate() const noexcept { return estimate_; }
  double error_bound() const noexcept { return error_; }

private:
  static std::string format(double v)
  {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
  }

  double estimate_;
  double error_;
};

} // namespace molcom
