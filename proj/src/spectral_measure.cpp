#include "tsrw/spectral_measure.hpp"

#include <cmath>

#include "tsrw/error.hpp"

namespace tsrw {

Direction Direction::normalized(std::vector<double> coords, double* norm_deviation) {
  if (coords.empty()) throw ConfigError("sigma_invalid", "direction must have d >= 1 coordinates");
  double norm2 = 0.0;
  for (double c : coords) {
    if (!std::isfinite(c)) throw ConfigError("sigma_invalid", "direction has non-finite coordinate");
    norm2 += c * c;
  }
  const double norm = std::sqrt(norm2);
  if (!(norm > 0.0)) throw ConfigError("sigma_invalid", "direction must be non-zero");
  if (norm_deviation) *norm_deviation = std::abs(norm - 1.0);
  if (norm != 1.0) {
    for (double& c : coords) c /= norm;
  }
  return Direction(std::move(coords));
}

double Direction::dot(std::span<const double> v) const noexcept {
  double acc = 0.0;
  for (std::size_t i = 0; i < coords_.size(); ++i) acc += coords_[i] * v[i];
  return acc;
}

SpectralMeasure::SpectralMeasure(std::vector<Atom> atoms) {
  if (atoms.empty()) throw ConfigError("sigma_invalid", "spectral measure needs at least one atom");
  dim_ = atoms.front().direction.dim();
  for (auto& a : atoms) {
    if (a.direction.dim() != dim_) {
      throw ConfigError("sigma_invalid", "spectral measure atoms have mixed dimensions");
    }
    if (!(a.weight > 0.0) || !std::isfinite(a.weight)) {
      throw ConfigError("sigma_invalid", "spectral measure weights must be positive");
    }
    bool merged = false;
    for (auto& kept : atoms_) {
      bool same = true;
      for (std::size_t k = 0; k < dim_ && same; ++k) {
        same = std::abs(kept.direction[k] - a.direction[k]) <= 1e-12;
      }
      if (same) {
        kept.weight += a.weight;
        merged = true;
        break;
      }
    }
    if (!merged) atoms_.push_back(std::move(a));
  }
  for (const auto& a : atoms_) total_mass_ += a.weight;
  double running = 0.0;
  for (const auto& a : atoms_) {
    running += a.weight;
    cumulative_.push_back(running / total_mass_);
  }
  cumulative_.back() = 1.0;
}

std::size_t SpectralMeasure::atom_for_uniform(double u) const noexcept {
  // Counting form, shared with the batch kernels.
  std::size_t idx = 0;
  for (std::size_t i = 0; i + 1 < cumulative_.size(); ++i) idx += (u >= cumulative_[i]) ? 1 : 0;
  return idx;
}

double SpectralMeasure::integrate(const std::function<double(const Direction&)>& f) const {
  double acc = 0.0;
  for (const auto& a : atoms_) acc += a.weight * f(a.direction);
  return acc;
}

std::vector<double> SpectralMeasure::integrate_vector(
    const std::function<std::vector<double>(const Direction&)>& f) const {
  std::vector<double> acc;
  for (const auto& a : atoms_) {
    const auto v = f(a.direction);
    if (acc.empty()) acc.assign(v.size(), 0.0);
    for (std::size_t k = 0; k < v.size(); ++k) acc[k] += a.weight * v[k];
  }
  return acc;
}

std::vector<double> SpectralMeasure::first_moment() const {
  std::vector<double> m(dim_, 0.0);
  for (const auto& a : atoms_) {
    for (std::size_t k = 0; k < dim_; ++k) m[k] += a.weight * a.direction[k];
  }
  return m;
}

bool SpectralMeasure::is_symmetric(double tol) const {
  for (const auto& a : atoms_) {
    bool found = false;
    for (const auto& b : atoms_) {
      bool mirror = std::abs(a.weight - b.weight) <= tol;
      for (std::size_t k = 0; k < dim_ && mirror; ++k) {
        mirror = std::abs(a.direction[k] + b.direction[k]) <= tol;
      }
      if (mirror) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

}  // namespace tsrw
