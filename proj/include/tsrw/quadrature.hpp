#pragma once

#include <complex>
#include <functional>

namespace tsrw {

struct QuadratureSettings {
  double abs_tol = 1e-10;
  double rel_tol = 1e-9;
  int max_subdivisions = 200;

  /// Throws ConfigError unless both tolerances are positive and
  /// max_subdivisions >= 10.
  void validate() const;

  QuadratureSettings tightened(double factor) const {
    return {abs_tol / factor, rel_tol / factor, max_subdivisions * 4};
  }
};

template <class T>
struct QuadResult {
  T value{};
  double error = 0.0;
  int evaluations = 0;
};

using RealFn = std::function<double(double)>;
using ComplexFn = std::function<std::complex<double>(double)>;

// Adaptive Gauss-Kronrod (10/21-point) integration over a finite interval.
// All routines throw NumericError when the tolerance cannot be met within
// max_subdivisions.
QuadResult<double> integrate(const RealFn& f, double a, double b, const QuadratureSettings& s);
QuadResult<std::complex<double>> integrate(const ComplexFn& f, double a, double b,
                                           const QuadratureSettings& s);

/// Integral over [a, inf), a > 0, through r = a*exp(y), y = t/(1-t). Power-law
/// tails become exponentially decaying in y.
QuadResult<double> integrate_to_infinity(const RealFn& f, double a, const QuadratureSettings& s);

/// Integral over [a, b] with 0 < a < b computed in y = log(r); suited to
/// integrands that behave like powers of r.
QuadResult<double> integrate_log(const RealFn& f, double a, double b, const QuadratureSettings& s);

/// Integral over (0, b] of an integrand that behaves like r^leading_exponent
/// near 0 (leading_exponent > -1). The substitution r = b*t^m with
/// m = 2/(leading_exponent+1) makes the transformed integrand vanish like t.
QuadResult<double> integrate_from_zero(const RealFn& f, double b, double leading_exponent,
                                       const QuadratureSettings& s);
QuadResult<std::complex<double>> integrate_from_zero(const ComplexFn& f, double b,
                                                     double leading_exponent,
                                                     const QuadratureSettings& s);

/// Fourier-type tail integral  int_a^inf exp(i*theta*r) * amplitude(r) dr  for a
/// non-negative, non-increasing, integrable amplitude. Integrates half-period
/// pieces and stops either when the remaining tail is provably below tolerance
/// (|tail| <= 2*sqrt(2)*amplitude(R)/|theta|) or when the Wynn epsilon
/// extrapolation of the partial sums has settled.
QuadResult<std::complex<double>> fourier_tail(const RealFn& amplitude, double theta, double a,
                                              const QuadratureSettings& s);

}  // namespace tsrw
