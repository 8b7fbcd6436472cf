#include "tsrw/heavy_tail.hpp"

#include <algorithm>
#include <cmath>

#include "jump_kernel.hpp"
#include "tsrw/error.hpp"

namespace tsrw {

std::string to_string(RadialVariant v) {
  return v == RadialVariant::ExactPareto ? "ExactPareto" : "MixedScalePareto";
}

JumpModel::JumpModel(double alpha, RadialVariant variant, std::vector<ParetoComponent> components,
                     SpectralMeasure sigma)
    : alpha_(alpha), variant_(variant), sigma_(std::move(sigma)) {
  if (!(alpha > 0.0 && alpha < 2.0)) throw ConfigError("alpha_invalid", "alpha must lie in (0, 2)");
  if (sigma_.dim() > static_cast<std::size_t>(simd::kMaxDim)) {
    throw ConfigError("dimension_unsupported",
                      "dimension above " + std::to_string(simd::kMaxDim) + " is not supported");
  }
  if (components.empty()) throw ConfigError("model_invalid", "radial law needs a component");
  double total = 0.0;
  for (const auto& c : components) {
    if (!(c.scale > 0.0) || !std::isfinite(c.scale)) {
      throw ConfigError("model_invalid", "Pareto scales must be positive");
    }
    if (!(c.weight > 0.0) || !std::isfinite(c.weight)) {
      throw ConfigError("model_invalid", "mixture weights must be positive");
    }
    total += c.weight;
  }
  std::stable_sort(components.begin(), components.end(),
                   [](const ParetoComponent& a, const ParetoComponent& b) { return a.scale < b.scale; });
  double running = 0.0;
  for (const auto& c : components) {
    scales_.push_back(c.scale);
    weights_.push_back(c.weight / total);
    running += c.weight;
    cum_.push_back(running / total);
  }
  cum_.back() = 1.0;
}

JumpModel JumpModel::exact_pareto(double alpha, double x_m, SpectralMeasure sigma) {
  return JumpModel(alpha, RadialVariant::ExactPareto, {{x_m, 1.0}}, std::move(sigma));
}

JumpModel JumpModel::mixed_scale_pareto(double alpha, std::vector<ParetoComponent> components,
                                        SpectralMeasure sigma) {
  return JumpModel(alpha, RadialVariant::MixedScalePareto, std::move(components),
                   std::move(sigma));
}

double JumpModel::tail(double r) const noexcept {
  double p = 0.0;
  for (std::size_t k = 0; k < scales_.size(); ++k) {
    p += weights_[k] * (r <= scales_[k] ? 1.0 : std::pow(r / scales_[k], -alpha_));
  }
  return p;
}

double JumpModel::norming_b(std::uint64_t n) const {
  if (n == 0) throw DomainError("domain", "norming needs n >= 1");
  const double nd = static_cast<double>(n);
  if (variant_ == RadialVariant::ExactPareto) return scales_.front() * std::pow(nd, 1.0 / alpha_);
  if (n == 1) return scales_.front();
  const double target = 1.0 / nd;
  double lo = scales_.front();
  double hi = scales_.back() * std::pow(nd, 1.0 / alpha_);
  while (hi - lo > 1e-12 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (tail(mid) <= target) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

double JumpModel::mean_radius() const {
  if (!(alpha_ > 1.0)) throw DomainError("mean_undefined", "E(H) does not exist for alpha <= 1");
  double m = 0.0;
  for (std::size_t k = 0; k < scales_.size(); ++k) {
    m += weights_[k] * alpha_ * scales_[k] / (alpha_ - 1.0);
  }
  return m;
}

std::vector<double> JumpModel::mean_jump() const {
  const double r = mean_radius();
  auto m = sigma_.first_moment();
  for (double& x : m) x *= r / sigma_.total_mass();
  return m;
}

Jump JumpModel::sample_jump(RandomStream& rng) const {
  const detail::JumpKernel kernel(*this, nullptr, 1.0, rng.seed());
  return kernel.draw(rng);
}

namespace detail {

namespace {

double spec_inverse_survival(const void* ctx, double survival, int atom) {
  return static_cast<const TemperingSpec*>(ctx)->inverse_survival(survival,
                                                                  static_cast<std::size_t>(atom));
}

}  // namespace

JumpKernel::JumpKernel(const JumpModel& model, const TemperingSpec* spec, double v,
                       std::uint64_t seed) {
  const SpectralMeasure& sigma = model.sigma();
  const int dim = static_cast<int>(sigma.dim());
  const auto cum = sigma.cumulative();
  atom_cum_.assign(cum.begin(), cum.end());
  for (const auto& a : sigma.atoms()) {
    for (int k = 0; k < dim; ++k) dirs_.push_back(a.direction[k]);
  }
  comp_cum_ = model.cumulative_weights();
  comp_scale_ = model.scales();

  p_.seed = seed;
  p_.dim = dim;
  p_.n_atoms = static_cast<int>(sigma.size());
  p_.atom_cum = atom_cum_.data();
  p_.atom_dirs = dirs_.data();
  p_.n_components = static_cast<int>(comp_scale_.size());
  p_.comp_cum = comp_cum_.data();
  p_.comp_scale = comp_scale_.data();
  p_.neg_inv_alpha = -1.0 / model.alpha();
  p_.v = v;
  p_.kind = simd::TemperKind::None;

  if (spec) {
    spec->check_compatible(sigma);
    if (spec->alpha() != model.alpha()) {
      throw ConfigError("alpha_mismatch", "tempering and jump model use different alpha");
    }
    switch (spec->family()) {
      case TemperingFamily::NoTempering: break;
      case TemperingFamily::ConditionallyExponential:
        for (std::size_t i = 0; i < sigma.size(); ++i) neg_inv_rate_.push_back(-1.0 / spec->rate(i));
        p_.atom_neg_inv_rate = neg_inv_rate_.data();
        p_.kind = simd::TemperKind::Exponential;
        break;
      default:
        p_.kind = simd::TemperKind::Generic;
        p_.inverse_survival = &spec_inverse_survival;
        p_.ctx = spec;
        break;
    }
  }
}

Jump JumpKernel::draw(RandomStream& rng) const {
  const std::uint64_t frame = (rng.position() + kUniformsPerJump - 1) / kUniformsPerJump;
  double radius = 0.0;
  std::int32_t atom = 0;
  simd::JumpBatchTask task;
  task.stream = rng.stream_id();
  task.first_jump = frame;
  task.count = 1;
  task.radius = &radius;
  task.atom = &atom;
  // A single jump gains nothing from vector lanes; the scalar kernel produces
  // the same bits.
  simd::scalar::table.generate_jumps(p_, task);
  rng.skip((frame + 1) * kUniformsPerJump - rng.position());

  Jump j;
  j.radius = radius;
  j.atom = static_cast<std::size_t>(atom);
  const double* dir = direction(atom);
  j.h.assign(dir, dir + p_.dim);
  for (double& x : j.h) x *= radius;
  return j;
}

}  // namespace detail

}  // namespace tsrw
