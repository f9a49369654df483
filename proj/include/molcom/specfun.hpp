#pragma once

#include <complex>

//! Complex error function and its relatives.
//!
//! All functions are pure. Accuracy target is 1e-12 relative error in each
//! component over the rectangle |Re z|, |Im z| <= 30, wherever the result is
//! representable in double precision. Results whose magnitude overflows throw
//! molcom::RangeError.
namespace molcom::specfun {

using Complex = std::complex<double>;

//! Faddeeva function w(z) = exp(-z^2) erfc(-iz).
Complex faddeeva(Complex z);

//! Dawson integral F(z) = exp(-z^2) * integral_0^z exp(t^2) dt.
Complex dawson(Complex z);

//! Real Dawson integral.
double dawson(double x);

//! Scaled complementary error function exp(x^2) erfc(x).
double erfcx(double x);

//! exp(-z^2) evaluated with error-free products, so that the result keeps full
//! relative accuracy even when |z|^2 is large.
Complex exp_neg_square(Complex z);

//! Real Voigt function K(a, b) = Re w(a + ib); requires b > 0.
double voigt_k(double a, double b);

//! Imaginary Voigt function L(a, b) = Im w(a + ib); requires b > 0.
double voigt_l(double a, double b);

} // namespace molcom::specfun
