#include "tsrw/tempering.hpp"

#include <algorithm>
#include <cmath>

#include "tsrw/error.hpp"
#include "tsrw/special.hpp"

namespace tsrw {

std::string to_string(TemperingFamily f) {
  switch (f) {
    case TemperingFamily::ConditionallyExponential: return "ConditionallyExponential";
    case TemperingFamily::ExponentialQ: return "ExponentialQ";
    case TemperingFamily::NoTempering: return "NoTempering";
    case TemperingFamily::CustomQ: return "CustomQ";
  }
  return "unknown";
}

TemperingFamily tempering_family_from_string(const std::string& name) {
  if (name == "ConditionallyExponential") return TemperingFamily::ConditionallyExponential;
  if (name == "ExponentialQ") return TemperingFamily::ExponentialQ;
  if (name == "NoTempering") return TemperingFamily::NoTempering;
  if (name == "CustomQ") {
    throw ConfigError("tempering_invalid", "CustomQ is only available through the library");
  }
  throw ConfigError("tempering_invalid", "unknown tempering family '" + name + "'");
}

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 2.0)) {
    throw ConfigError("alpha_invalid", "alpha must lie in (0, 2)");
  }
}

void check_rates(const std::vector<double>& rates) {
  if (rates.empty()) throw ConfigError("tempering_invalid", "tempering rates are missing");
  for (double r : rates) {
    if (!(r > 0.0) || !std::isfinite(r)) {
      throw ConfigError("tempering_invalid", "tempering rates must be positive");
    }
  }
}

// Near α = 1 the incomplete-gamma recurrence divides by (1 - α) after a
// cancellation; the defining integral is used there instead.
constexpr double kGammaRecurrenceGuard = 1e-4;

}  // namespace

TemperingSpec::TemperingSpec(double alpha, TemperingFamily family, std::vector<double> rates,
                             QuadratureSettings quad)
    : alpha_(alpha), family_(family), rates_(std::move(rates)), quad_(quad) {
  check_alpha(alpha_);
  quad_.validate();
}

TemperingSpec TemperingSpec::conditionally_exponential(double alpha, std::vector<double> rates,
                                                       QuadratureSettings quad) {
  check_rates(rates);
  return TemperingSpec(alpha, TemperingFamily::ConditionallyExponential, std::move(rates), quad);
}

TemperingSpec TemperingSpec::exponential_q(double alpha, std::vector<double> rates,
                                           QuadratureSettings quad) {
  check_rates(rates);
  return TemperingSpec(alpha, TemperingFamily::ExponentialQ, std::move(rates), quad);
}

TemperingSpec TemperingSpec::none(double alpha, QuadratureSettings quad) {
  return TemperingSpec(alpha, TemperingFamily::NoTempering, {}, quad);
}

TemperingSpec TemperingSpec::custom(double alpha, CustomQ q, const SpectralMeasure& sigma,
                                    QuadratureSettings quad) {
  if (!q.q) throw ConfigError("tempering_invalid", "CustomQ needs a callable");
  if (!q.declared_non_increasing) {
    throw ConfigError("tempering_invalid", "CustomQ must be declared non-increasing in r");
  }
  TemperingSpec spec(alpha, TemperingFamily::CustomQ, {}, quad);
  for (const auto& atom : sigma.atoms()) {
    const Direction& s = atom.direction;
    const double at_zero = q.q(1e-300, s);
    if (!(std::abs(at_zero - alpha) <= 1e-6)) {
      throw ConfigError("tempering_invalid", "CustomQ must satisfy q(0+, s) = alpha");
    }
    double prev = at_zero;
    for (int k = -120; k <= 120; ++k) {
      const double r = std::pow(10.0, k / 10.0);
      const double v = q.q(r, s);
      if (!std::isfinite(v) || v < 0.0 || v > alpha * (1.0 + 1e-12)) {
        throw ConfigError("tempering_invalid", "CustomQ must take values in [0, alpha]");
      }
      if (v > prev + 1e-14 * alpha) {
        throw ConfigError("tempering_invalid", "CustomQ is not non-increasing in r");
      }
      prev = v;
    }
    if (!(prev < 1e-6 * alpha)) {
      throw ConfigError("tempering_invalid", "CustomQ must vanish at infinity");
    }
    spec.custom_dirs_.push_back(s);
  }
  spec.custom_ = std::make_shared<const CustomQ>(std::move(q));
  return spec;
}

double TemperingSpec::rate(std::size_t atom) const {
  if (rates_.empty()) throw DomainError("domain", "tempering family has no rates");
  if (rates_.size() == 1) return rates_.front();
  return rates_.at(atom);
}

void TemperingSpec::check_compatible(const SpectralMeasure& sigma) const {
  if (rates_.size() > 1 && rates_.size() != sigma.size()) {
    throw ConfigError("tempering_invalid", "tempering rates do not match the spectral atoms");
  }
  if (family_ == TemperingFamily::CustomQ && custom_dirs_.size() != sigma.size()) {
    throw ConfigError("tempering_invalid", "CustomQ was built for a different spectral measure");
  }
}

double TemperingSpec::q(double r, std::size_t atom) const {
  if (!(r > 0.0)) throw DomainError("domain", "q(r, s) needs r > 0");
  switch (family_) {
    case TemperingFamily::ConditionallyExponential: {
      const double lr = rate(atom) * r;
      return (alpha_ + lr) * std::exp(-lr);
    }
    case TemperingFamily::ExponentialQ: return alpha_ * std::exp(-rate(atom) * r);
    case TemperingFamily::NoTempering: return alpha_;
    case TemperingFamily::CustomQ: return custom_->q(r, custom_dirs_.at(atom));
  }
  return 0.0;
}

double TemperingSpec::pi_by_quadrature(double u, std::size_t atom) const {
  // u^α r^{-α-1} q(r) = (u/r)^α q(r) / r, written to avoid overflow at small u.
  auto f = [&](double r) { return std::pow(u / r, alpha_) * q(r, atom) / r; };
  return integrate_to_infinity(f, u, quad_).value;
}

double TemperingSpec::pi(double u, std::size_t atom) const {
  if (!(u > 0.0)) throw DomainError("domain", "pi(u, s) needs u > 0");
  switch (family_) {
    case TemperingFamily::ConditionallyExponential: return std::exp(-rate(atom) * u);
    case TemperingFamily::NoTempering: return 1.0;
    case TemperingFamily::ExponentialQ: {
      if (alpha_ != 1.0 && std::abs(alpha_ - 1.0) < kGammaRecurrenceGuard) {
        return pi_by_quadrature(u, atom);
      }
      const double x = rate(atom) * u;
      if (x >= 1.0) return alpha_ * std::exp(-x) * special::upper_gamma_scaled(-alpha_, x);
      return std::min(1.0, alpha_ * std::pow(x, alpha_) * special::upper_gamma(-alpha_, x));
    }
    case TemperingFamily::CustomQ: return std::min(1.0, pi_by_quadrature(u, atom));
  }
  return 0.0;
}

double TemperingSpec::pi_derivative(double u, std::size_t atom) const {
  if (!(u > 0.0)) throw DomainError("domain", "pi derivative needs u > 0");
  switch (family_) {
    case TemperingFamily::ConditionallyExponential: {
      const double l = rate(atom);
      return -l * std::exp(-l * u);
    }
    case TemperingFamily::NoTempering: return 0.0;
    default: return std::min(0.0, (alpha_ * pi(u, atom) - q(u, atom)) / u);
  }
}

double TemperingSpec::tail_mass(double u, std::size_t atom) const {
  return std::pow(u, -alpha_) * pi(u, atom);
}

double TemperingSpec::inverse_survival(double survival, std::size_t atom) const {
  switch (family_) {
    case TemperingFamily::NoTempering: return kNoTruncation;
    case TemperingFamily::ConditionallyExponential: return -std::log(survival) / rate(atom);
    default: break;
  }
  double lo = 1e-12;
  if (pi(lo, atom) <= survival) return lo;
  double hi = 1.0;
  while (pi(hi, atom) > survival) {
    hi *= 2.0;
    if (hi > 1e300) throw NumericError("could not bracket the tempering variable", hi);
  }
  // Bisection on the geometric midpoint down to relative width 1e-10; keeps
  // the leftmost point of flat stretches of π.
  while (hi > lo * (1.0 + 1e-10)) {
    const double mid = std::sqrt(lo * hi);
    if (pi(mid, atom) <= survival) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

RegularityReport verify_tempering_regularity(const TemperingSpec& spec, std::size_t n_atoms,
                                             double beta) {
  const double alpha = spec.alpha();
  if (!(alpha > 1.0 && alpha < 2.0)) {
    throw DomainError("domain", "regularity check applies to 1 < alpha < 2");
  }
  if (!(beta > alpha)) throw DomainError("domain", "regularity check needs beta > alpha");
  RegularityReport rep;
  rep.beta = beta;
  constexpr int kPerDecade = 10;
  double small_max = 0.0;
  double next_max = 0.0;
  for (int k = -6 * kPerDecade; k <= 0; ++k) {
    const double u = std::pow(10.0, static_cast<double>(k) / kPerDecade);
    double v = 0.0;
    for (std::size_t a = 0; a < std::max<std::size_t>(n_atoms, 1); ++a) {
      v = std::max(v, std::pow(u, 1.0 - beta) * (alpha - spec.q(u, a)));
    }
    rep.grid.push_back(u);
    rep.values.push_back(v);
    rep.sup_value = std::max(rep.sup_value, v);
    if (k <= -5 * kPerDecade) small_max = std::max(small_max, v);
    if (k >= -5 * kPerDecade && k <= -4 * kPerDecade) next_max = std::max(next_max, v);
  }
  if (rep.sup_value <= 0.0) {
    rep.growth_ratio = 0.0;
    rep.bounded = true;
  } else if (next_max <= 0.0) {
    rep.growth_ratio = std::numeric_limits<double>::infinity();
    rep.bounded = small_max <= 0.0;
  } else {
    rep.growth_ratio = small_max / next_max;
    rep.bounded = rep.growth_ratio <= 1.05;
  }
  return rep;
}

RegularityReport find_regularity_exponent(const TemperingSpec& spec, std::size_t n_atoms) {
  const double alpha = spec.alpha();
  RegularityReport rep;
  for (double frac : {0.5, 0.25, 0.1, 0.01}) {
    rep = verify_tempering_regularity(spec, n_atoms, alpha + frac * (2.0 - alpha));
    if (rep.bounded) return rep;
  }
  return rep;
}

}  // namespace tsrw
