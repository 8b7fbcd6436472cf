#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "tsrw/random_stream.hpp"
#include "tsrw/spectral_measure.hpp"

namespace tsrw {

enum class RadialVariant { ExactPareto, MixedScalePareto };

std::string to_string(RadialVariant v);

/// One Pareto scale of a radial mixture.
struct ParetoComponent {
  double scale;
  double weight;
};

/// A drawn jump H = R s together with its direction atom.
struct Jump {
  std::vector<double> h;
  double radius = 0.0;
  std::size_t atom = 0;
};

/// Heavy-tailed jump law: Pareto radius (or a finite mixture of Pareto scales
/// with a common index) independent of a direction drawn from σ.
class JumpModel {
 public:
  static JumpModel exact_pareto(double alpha, double x_m, SpectralMeasure sigma);
  /// Mixture weights are normalized; components with equal scales are kept.
  static JumpModel mixed_scale_pareto(double alpha, std::vector<ParetoComponent> components,
                                      SpectralMeasure sigma);

  double alpha() const noexcept { return alpha_; }
  /// Smallest radial scale (support starts here).
  double x_m() const noexcept { return scales_.front(); }
  RadialVariant variant() const noexcept { return variant_; }
  const SpectralMeasure& sigma() const noexcept { return sigma_; }
  std::size_t dim() const noexcept { return sigma_.dim(); }

  /// Mixture description: scales ascending, normalized weights and their
  /// cumulative sums (last exactly 1). A single entry for ExactPareto.
  const std::vector<double>& scales() const noexcept { return scales_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  const std::vector<double>& cumulative_weights() const noexcept { return cum_; }

  /// P(‖H‖ > r).
  double tail(double r) const noexcept;

  /// b_n = inf{x : P(‖H‖ > x) <= 1/n}.
  double norming_b(std::uint64_t n) const;

  /// E‖H‖; DomainError "mean_undefined" unless alpha > 1.
  double mean_radius() const;
  /// E(H) = E‖H‖ Σ w_s s / σ(S^{d-1}).
  std::vector<double> mean_jump() const;

  /// Draws H from the next 4-uniform frame of `rng` (the position is first
  /// rounded up to a frame boundary). Uses the same kernel as the batch paths.
  Jump sample_jump(RandomStream& rng) const;

 private:
  JumpModel(double alpha, RadialVariant variant, std::vector<ParetoComponent> components,
            SpectralMeasure sigma);

  double alpha_;
  RadialVariant variant_;
  SpectralMeasure sigma_;
  std::vector<double> scales_;
  std::vector<double> weights_;
  std::vector<double> cum_;
};

}  // namespace tsrw
