#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "tsrw/quadrature.hpp"
#include "tsrw/random_stream.hpp"
#include "tsrw/spectral_measure.hpp"

namespace tsrw {

enum class TemperingFamily { ConditionallyExponential, ExponentialQ, NoTempering, CustomQ };

std::string to_string(TemperingFamily f);
TemperingFamily tempering_family_from_string(const std::string& name);

/// User-supplied tempering function q(r, s). Only accepted when the caller
/// declares it non-increasing in r; the declaration is spot-checked.
struct CustomQ {
  std::function<double(double r, const Direction& s)> q;
  bool declared_non_increasing = false;
};

/// Sentinel returned by sample_T when there is no tempering: min(R, v*T) = R.
inline constexpr double kNoTruncation = std::numeric_limits<double>::infinity();

/// Tempering function q(r, s) of the Lévy measure r^{-α-1} q(r,s) dr σ(ds),
/// together with the survival function π(u, s) of the tempering variable T.
///
/// Directions are referenced by atom index of the spectral measure the spec is
/// used with. Rates may be given per atom or as a single broadcast value.
class TemperingSpec {
 public:
  static TemperingSpec conditionally_exponential(double alpha, std::vector<double> rates,
                                                 QuadratureSettings quad = {});
  static TemperingSpec exponential_q(double alpha, std::vector<double> rates,
                                     QuadratureSettings quad = {});
  static TemperingSpec none(double alpha, QuadratureSettings quad = {});
  /// Throws ConfigError when q is not declared non-increasing or fails the
  /// grid checks (monotone, q(0+) = α within 1e-6, q(1e12) < 1e-6 α).
  static TemperingSpec custom(double alpha, CustomQ q, const SpectralMeasure& sigma,
                              QuadratureSettings quad = {});

  double alpha() const noexcept { return alpha_; }
  TemperingFamily family() const noexcept { return family_; }
  const QuadratureSettings& quadrature() const noexcept { return quad_; }
  /// λ_s for the rate-based families.
  double rate(std::size_t atom) const;
  const std::vector<double>& rates() const noexcept { return rates_; }

  /// Throws ConfigError when per-atom data does not cover every atom of sigma.
  void check_compatible(const SpectralMeasure& sigma) const;

  /// q(r, s); DomainError for r <= 0.
  double q(double r, std::size_t atom) const;
  /// π(u, s) = u^α ∫_u^∞ r^{-α-1} q(r, s) dr.
  double pi(double u, std::size_t atom) const;
  /// ∂π/∂u = (α π(u,s) - q(u,s)) / u  (≤ 0).
  double pi_derivative(double u, std::size_t atom) const;
  /// ∫_u^∞ r^{-α-1} q(r, s) dr = u^{-α} π(u, s).
  double tail_mass(double u, std::size_t atom) const;

  /// Smallest u with π(u, s) <= survival, survival in (0, 1).
  double inverse_survival(double survival, std::size_t atom) const;
  /// Draws T ~ Π(du, s) from one uniform of `rng`.
  double sample_T(std::size_t atom, RandomStream& rng) const {
    return inverse_survival(rng.uniform(), atom);
  }

  /// True when T can be drawn in closed form (no root finding).
  bool closed_form_sampler() const noexcept {
    return family_ == TemperingFamily::ConditionallyExponential ||
           family_ == TemperingFamily::NoTempering;
  }

 private:
  TemperingSpec(double alpha, TemperingFamily family, std::vector<double> rates,
                QuadratureSettings quad);
  double pi_by_quadrature(double u, std::size_t atom) const;

  double alpha_;
  TemperingFamily family_;
  std::vector<double> rates_;
  QuadratureSettings quad_;
  std::shared_ptr<const CustomQ> custom_;
  std::vector<Direction> custom_dirs_;
};

struct RegularityReport {
  double beta = 0.0;
  double sup_value = 0.0;
  std::vector<double> grid;
  std::vector<double> values;  // max over atoms at each grid point
  double growth_ratio = 0.0;   // max over [1e-6,1e-5] / max over [1e-5,1e-4]
  bool bounded = true;
};

/// Evaluates u^{1-β}[α - q(u,s)] on a log grid over [1e-6, 1] for every atom.
/// The function is judged bounded unless its maximum over the smallest decade
/// exceeds 1.05 times the maximum over the next decade. Advisory only.
RegularityReport verify_tempering_regularity(const TemperingSpec& spec, std::size_t n_atoms,
                                             double beta);

/// Runs verify_tempering_regularity for a few β in (α, 2] and returns the first
/// bounded report (or the last one tried).
RegularityReport find_regularity_exponent(const TemperingSpec& spec, std::size_t n_atoms);

}  // namespace tsrw
