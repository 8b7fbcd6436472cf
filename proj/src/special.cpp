#include "tsrw/special.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "tsrw/error.hpp"

namespace tsrw::special {
namespace {

constexpr double kEps = 2.0 * std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;
constexpr int kMaxIter = 10000;

// Modified Lentz evaluation of the continued fraction
// Gamma(a,x) = e^-x x^a / (x+1-a- 1(1-a)/(x+3-a- 2(2-a)/(x+5-a- ...))).
double continued_fraction(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  throw NumericError("incomplete gamma continued fraction did not converge", 0.0);
}

// Lower incomplete gamma gamma(b, x) by its power series, b > 0.
double lower_series(double b, double x) {
  double term = 1.0 / b;
  double sum = term;
  for (int n = 1; n < kMaxIter; ++n) {
    term *= x / (b + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) {
      return sum * std::exp(-x + b * std::log(x));
    }
  }
  throw NumericError("incomplete gamma series did not converge", 0.0);
}

void check_args(double a, double x) {
  if (!(x > 0.0)) throw DomainError("domain", "incomplete gamma needs x > 0");
  if (!(a > -2.0 && a <= 1.0)) throw DomainError("domain", "incomplete gamma needs a in (-2, 1]");
}

}  // namespace

double exp_integral_e1(double x) {
  if (!(x > 0.0)) throw DomainError("domain", "E1 needs x > 0");
  if (x >= 1.0) return std::exp(-x) * continued_fraction(0.0, x);
  double sum = 0.0;
  double term = 1.0;
  for (int k = 1; k < kMaxIter; ++k) {
    term *= -x / k;
    const double add = term / k;
    sum += add;
    if (std::abs(add) < kEps * std::abs(sum)) break;
  }
  return -std::numbers::egamma - std::log(x) - sum;
}

double upper_gamma(double a, double x) {
  check_args(a, x);
  if (x >= 1.0) return std::exp(-x + a * std::log(x)) * continued_fraction(a, x);

  const double rounded = std::round(a);
  if (a == rounded) {
    // a in {1, 0, -1}
    if (a == 1.0) return std::exp(-x);
    double value = exp_integral_e1(x);
    if (a == -1.0) value = std::exp(-x) / x - value;
    return value;
  }
  double s = a;
  while (s <= 0.0) s += 1.0;
  double value = std::tgamma(s) - lower_series(s, x);
  while (s - 1.0 >= a - 1e-12) {
    s -= 1.0;
    value = (value - std::exp(-x + s * std::log(x))) / s;
  }
  return value;
}

double upper_gamma_scaled(double a, double x) {
  check_args(a, x);
  if (x >= 1.0) return continued_fraction(a, x);
  return upper_gamma(a, x) * std::exp(x - a * std::log(x));
}

}  // namespace tsrw::special
