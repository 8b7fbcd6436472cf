#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tsrw/heavy_tail.hpp"
#include "tsrw/random_stream.hpp"
#include "tsrw/tempering.hpp"

namespace tsrw {

enum class Centering { None, TruncatedMean, JumpMean };

std::string to_string(Centering c);
Centering centering_from_string(const std::string& name);

struct CenteringMethod {
  enum class Kind { Auto, Quadrature, MonteCarlo };
  Kind kind = Kind::Auto;  // Quadrature, or MonteCarlo for CustomQ
  std::uint64_t draws = 1'000'000;
  std::uint64_t seed = 0;
};

/// One triangular-array experiment.
struct WalkPlan {
  std::uint64_t n = 1;
  std::uint64_t replicates = 1;
  Centering centering = Centering::None;
  std::optional<double> v_override;
  std::uint64_t seed = 0;
  std::vector<double> time_grid;  // paths mode only
  CenteringMethod centering_method;
  /// Worker threads; 0 uses the hardware concurrency. Never affects output.
  unsigned threads = 0;

  /// Throws ConfigError for n or replicates of 0, a non-positive v_override or
  /// a time grid that is not strictly increasing in [0, inf).
  void validate() const;
};

/// replicates x d matrix of normalized values, row-major.
struct SampleBatch {
  std::size_t dim = 1;
  std::vector<double> values;
  std::uint64_t n = 0;
  double v_n = 0.0;
  std::vector<double> centering;  // a_n as used (before the factor t)
  Centering mode = Centering::None;
  std::uint64_t seed = 0;
  double t = 1.0;

  std::size_t rows() const noexcept { return dim ? values.size() / dim : 0; }
  const double* row(std::size_t i) const noexcept { return values.data() + i * dim; }
};

struct CenteringEstimate {
  std::vector<double> value;
  std::vector<double> std_error;  // zeros for quadrature
};

/// v_n = b_n / σ(S^{d-1})^{1/α}.
double tempering_threshold(const JumpModel& model, std::uint64_t n);
double tempering_threshold(const JumpModel& model, const SpectralMeasure& sigma, std::uint64_t n);

/// s min(‖H‖, v T) from the next 4-uniform frame of rng.
Jump sample_tempered_jump(const JumpModel& model, const TemperingSpec& spec, double v,
                          RandomStream& rng);

/// a_n = n E[v^{-1} Y 1(‖Y‖ < v)].
CenteringEstimate centering_truncated_mean(const JumpModel& model, const TemperingSpec& spec,
                                           std::uint64_t n, double v,
                                           const CenteringMethod& method = {});

/// Centering vector selected by the plan (zeros for None, n E(H)/v for
/// JumpMean). DomainError "mean_undefined" for JumpMean with alpha <= 1.
CenteringEstimate plan_centering(const WalkPlan& plan, const JumpModel& model,
                                 const TemperingSpec& spec, double v);

/// Normalized row sums v^{-1} S_n(n) - a_n, one per replicate; replicate r uses
/// Philox stream r under the plan seed.
SampleBatch simulate_rowsum(const WalkPlan& plan, const JumpModel& model,
                            const TemperingSpec& spec);

/// v^{-1} S_n(floor(n t)) - t a_n at each grid time, sharing one stream per
/// replicate across times. One batch per grid time.
std::vector<SampleBatch> simulate_paths(const WalkPlan& plan, const JumpModel& model,
                                        const TemperingSpec& spec);

/// floor(n t) with a small guard so that t = k/n maps to k.
std::uint64_t steps_at(std::uint64_t n, double t);

}  // namespace tsrw
