#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "tsrw/random_stream.hpp"

namespace tsrw {

/// Unit vector in R^d.
class Direction {
 public:
  /// Normalizes `coords`. Throws ConfigError for an empty or zero vector.
  /// `norm_deviation`, when given, receives |‖coords‖ - 1|.
  static Direction normalized(std::vector<double> coords, double* norm_deviation = nullptr);

  std::size_t dim() const noexcept { return coords_.size(); }
  std::span<const double> coords() const noexcept { return coords_; }
  double operator[](std::size_t i) const noexcept { return coords_[i]; }
  double dot(std::span<const double> v) const noexcept;

 private:
  explicit Direction(std::vector<double> c) : coords_(std::move(c)) {}
  std::vector<double> coords_;
};

struct Atom {
  Direction direction;
  double weight;
};

/// Finite atomic spectral measure on the unit sphere. Immutable once built;
/// safe to share between threads.
class SpectralMeasure {
 public:
  /// Validates (non-empty, positive weights, common dimension) and merges atoms
  /// whose coordinates agree within 1e-12 by summing their weights.
  explicit SpectralMeasure(std::vector<Atom> atoms);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return atoms_.size(); }
  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  const Atom& atom(std::size_t i) const { return atoms_.at(i); }

  double total_mass() const noexcept { return total_mass_; }

  /// Cumulative normalized weights; the last entry is exactly 1.
  std::span<const double> cumulative() const noexcept { return cumulative_; }

  /// Index of the atom selected by the uniform u in (0, 1).
  std::size_t atom_for_uniform(double u) const noexcept;

  std::size_t sample_atom(RandomStream& rng) const { return atom_for_uniform(rng.uniform()); }
  const Direction& sample_direction(RandomStream& rng) const {
    return atoms_[sample_atom(rng)].direction;
  }

  /// Σ_i w_i f(s_i).
  double integrate(const std::function<double(const Direction&)>& f) const;
  std::vector<double> integrate_vector(
      const std::function<std::vector<double>(const Direction&)>& f) const;

  /// Σ_i w_i s_i (the first moment of σ).
  std::vector<double> first_moment() const;

  /// True when every atom has a mirror atom of equal weight.
  bool is_symmetric(double tol = 1e-12) const;

 private:
  std::vector<Atom> atoms_;
  std::vector<double> cumulative_;
  std::size_t dim_ = 0;
  double total_mass_ = 0.0;
};

}  // namespace tsrw
