#pragma once

namespace tsrw::special {

/// Upper incomplete gamma function Gamma(a, x) for a in (-2, 1] and x > 0.
/// Negative non-integer parameters are reached by the downward recurrence
/// Gamma(s, x) = (Gamma(s+1, x) - x^s e^-x) / s from a parameter in (0, 1]
/// when x < 1 (power series), and by the Legendre continued fraction directly
/// when x >= 1, where the recurrence would cancel.
double upper_gamma(double a, double x);

/// Gamma(a, x) * e^x * x^-a, i.e. the continued-fraction factor alone. Defined
/// for the same range as upper_gamma; finite for large x where Gamma(a, x)
/// itself underflows.
double upper_gamma_scaled(double a, double x);

/// Exponential integral E1(x) = Gamma(0, x), x > 0.
double exp_integral_e1(double x);

}  // namespace tsrw::special
