#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "tsrw/heavy_tail.hpp"
#include "tsrw/quadrature.hpp"
#include "tsrw/spectral_measure.hpp"
#include "tsrw/tempering.hpp"
#include "tsrw/walk_engine.hpp"

namespace tsrw {

/// Compensation of the Lévy-Khintchine integrand:
///   Truncated  e^{i<λ,x>} - 1 - i<λ,x> 1(‖x‖ <= 1)
///   MeanZero   e^{i<λ,x>} - 1 - i<λ,x>         (alpha > 1)
///   DriftFree  e^{i<λ,x>} - 1                  (alpha < 1)
enum class Convention { Truncated, MeanZero, DriftFree };

std::string to_string(Convention c);
Convention convention_from_string(const std::string& name);

/// Lévy exponent ψ(λ) = ∫ g(<λ,x>) M(dx) of the tempered stable law with
/// M(dr, ds) = r^{-α-1} q(r,s) dr σ(ds), no Gaussian part and no drift.
class LevyExponent {
 public:
  /// Throws DomainError for MeanZero with alpha <= 1 or DriftFree with
  /// alpha >= 1, and ConfigError when spec does not fit sigma.
  LevyExponent(SpectralMeasure sigma, TemperingSpec spec, Convention convention,
               QuadratureSettings quad = {});

  std::complex<double> operator()(std::span<const double> lambda) const;
  std::complex<double> operator()(double lambda) const {
    return (*this)(std::span<const double>(&lambda, 1));
  }

  double alpha() const noexcept { return spec_.alpha(); }
  std::size_t dim() const noexcept { return sigma_.dim(); }
  Convention convention() const noexcept { return convention_; }
  const SpectralMeasure& sigma() const noexcept { return sigma_; }
  const TemperingSpec& spec() const noexcept { return spec_; }
  const QuadratureSettings& quadrature() const noexcept { return quad_; }

  /// Radial part for one atom at θ = <λ, s>.
  std::complex<double> radial(double theta, std::size_t atom) const;

 private:
  SpectralMeasure sigma_;
  TemperingSpec spec_;
  Convention convention_;
  QuadratureSettings quad_;
  std::vector<double> pi_one_;     // π(1, s)
  std::vector<double> first_tail_;  // ∫_1^∞ q r^{-α} dr (MeanZero only)
};

inline std::complex<double> levy_exponent_eval(const LevyExponent& L,
                                               std::span<const double> lambda) {
  return L(lambda);
}

/// m = -α ∫∫ ḡ(r,s) s r^{-α-1} dr σ(ds) with ḡ(r,s) = ∫_0^r (r-u) Π(du,s).
/// Requires 1 < α < 2, a tempered family and a bounded regularity check.
std::vector<double> tempered_mean(const SpectralMeasure& sigma, const TemperingSpec& spec,
                                  const QuadratureSettings& quad = {});

/// ∫_{‖x‖>=1} x M(dx).
std::vector<double> large_jump_mean(const SpectralMeasure& sigma, const TemperingSpec& spec,
                                    const QuadratureSettings& quad = {});

/// θ = -m + ∫_{‖x‖>=1} x M(dx).
std::vector<double> shift_theta(const SpectralMeasure& sigma, const TemperingSpec& spec,
                                const QuadratureSettings& quad = {});

/// Annular sector {r1 <= ‖x‖ < r2, x/‖x‖ in atoms}; an empty atom list means all.
struct AnnularSector {
  double r1 = 1.0;
  double r2 = 2.0;
  std::vector<std::size_t> atoms;
};

/// M(A) = Σ_{s in A} w_s ∫_{r1}^{r2} q(r,s) r^{-α-1} dr (r2 may be +inf).
double levy_mass(const SpectralMeasure& sigma, const TemperingSpec& spec, const AnnularSector& A,
                 const QuadratureSettings& quad = {});

struct CFGrid {
  std::size_t dim = 1;
  std::vector<double> points;  // n x dim, row-major
  std::vector<std::complex<double>> values;

  std::size_t size() const noexcept { return dim ? points.size() / dim : 0; }
  std::span<const double> point(std::size_t i) const { return {points.data() + i * dim, dim}; }
};

/// d = 1: 201 points on [-5, 5]. d >= 2: 41 points on [-5, 5] along each
/// coordinate axis and each diagonal e_i ± e_j (normalized).
CFGrid default_cf_grid(std::size_t dim, double half_width = 5.0);

/// Mean of exp(i<λ, x>) over rows. Exactly 1 at λ = 0.
CFGrid empirical_cf(std::span<const double> samples, std::size_t dim, const CFGrid& grid);
inline CFGrid empirical_cf(const SampleBatch& batch, const CFGrid& grid) {
  return empirical_cf(batch.values, batch.dim, grid);
}

struct CFDistance {
  double sup_abs = 0.0;
  std::vector<double> per_point;
  std::vector<std::complex<double>> theory;
};

/// |φ̂(λ) - theory(λ)| per point.
CFDistance cf_distance(const CFGrid& empirical, const std::vector<std::complex<double>>& theory);
/// theory(λ) = exp(ψ(λ) + i<drift, λ>); drift empty means zero.
CFDistance cf_distance(const CFGrid& empirical, const LevyExponent& L,
                       const std::vector<double>& drift = {});

struct VagueRow {
  AnnularSector set;
  std::uint64_t hits = 0;
  double estimate = 0.0;  // n hits / draws
  double target = 0.0;    // levy_mass
  double relative_error = 0.0;
  double std_error = 0.0;  // binomial, on the estimate scale
  bool under_sampled = false;  // fewer than 100 hits
};

/// n P̂(v_n^{-1} Y ∈ A) from `draws` single tempered jumps (stream 0 of seed)
/// against M(A).
std::vector<VagueRow> vague_convergence_table(const JumpModel& model, const TemperingSpec& spec,
                                              std::uint64_t n,
                                              const std::vector<AnnularSector>& sets,
                                              std::uint64_t draws, std::uint64_t seed,
                                              unsigned threads = 0);

struct UanProfile {
  std::vector<double> deltas;
  std::vector<double> values;  // n v^{-2} E‖Y 1(‖Y‖ <= v δ)‖²
  double slope = 0.0;          // least-squares slope of log value on log δ
};

UanProfile uan_profile(const JumpModel& model, const TemperingSpec& spec, std::uint64_t n,
                       const std::vector<double>& deltas);

struct DensityResult {
  std::vector<double> x;
  std::vector<double> density;
  double mass_defect = 0.0;   // |1 - Σ density Δx|
  double clipped_mass = 0.0;  // Σ |negative values| Δx removed by clipping
  double window = 0.0;        // λ cutoff
  double step = 0.0;          // λ spacing
};

/// Fourier inversion of exp(ψ(λ) + i λ drift) for d = 1 on `points` uniform
/// x values in [x_min, x_max].
DensityResult density_1d(const std::function<std::complex<double>(double)>& psi, double drift,
                         double x_min, double x_max, std::size_t points);
DensityResult density_1d(const LevyExponent& L, double drift, double x_min, double x_max,
                         std::size_t points);

}  // namespace tsrw
