#include "tsrw/walk_engine.hpp"

#include <algorithm>
#include <cmath>

#include "jump_kernel.hpp"
#include "parallel.hpp"
#include "tsrw/error.hpp"
#include "tsrw/quadrature.hpp"

namespace tsrw {

std::string to_string(Centering c) {
  switch (c) {
    case Centering::None: return "None";
    case Centering::TruncatedMean: return "TruncatedMean";
    case Centering::JumpMean: return "JumpMean";
  }
  return "unknown";
}

Centering centering_from_string(const std::string& name) {
  if (name == "None") return Centering::None;
  if (name == "TruncatedMean") return Centering::TruncatedMean;
  if (name == "JumpMean") return Centering::JumpMean;
  throw ConfigError("plan_invalid", "unknown centering '" + name + "'");
}

void WalkPlan::validate() const {
  if (n == 0) throw ConfigError("plan_invalid", "n must be positive");
  if (replicates == 0) throw ConfigError("plan_invalid", "replicates must be positive");
  if (v_override && !(*v_override > 0.0 && std::isfinite(*v_override))) {
    throw ConfigError("plan_invalid", "v_override must be positive");
  }
  for (std::size_t i = 0; i < time_grid.size(); ++i) {
    if (!(time_grid[i] >= 0.0) || !std::isfinite(time_grid[i])) {
      throw ConfigError("plan_invalid", "time grid values must be finite and non-negative");
    }
    if (i > 0 && !(time_grid[i] > time_grid[i - 1])) {
      throw ConfigError("plan_invalid", "time grid must be strictly increasing");
    }
  }
}

double tempering_threshold(const JumpModel& model, std::uint64_t n) {
  return tempering_threshold(model, model.sigma(), n);
}

double tempering_threshold(const JumpModel& model, const SpectralMeasure& sigma, std::uint64_t n) {
  return model.norming_b(n) / std::pow(sigma.total_mass(), 1.0 / model.alpha());
}

Jump sample_tempered_jump(const JumpModel& model, const TemperingSpec& spec, double v,
                          RandomStream& rng) {
  if (!(v > 0.0)) throw DomainError("domain", "threshold v must be positive");
  const detail::JumpKernel kernel(model, &spec, v, rng.seed());
  return kernel.draw(rng);
}

namespace {

// n E[Z 1(Z < 1)], Z = min(R/v, T), for one atom, written as
// ∫_0^1 n P(R > v z) π(z) dz - n P(R > v) π(1). The radial tail has kinks at
// the Pareto scales, which split the range.
double truncated_mean_radial(const JumpModel& model, const TemperingSpec& spec, std::size_t atom,
                             std::uint64_t n, double v) {
  const double nd = static_cast<double>(n);
  auto f = [&](double z) { return nd * model.tail(v * z) * spec.pi(z, atom); };
  std::vector<double> cuts{0.0};
  for (double x : model.scales()) {
    const double k = x / v;
    if (k > 0.0 && k < 1.0 && k > cuts.back()) cuts.push_back(k);
  }
  cuts.push_back(1.0);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    total += integrate(RealFn(f), cuts[i], cuts[i + 1], spec.quadrature()).value;
  }
  return total - nd * model.tail(v) * spec.pi(1.0, atom);
}

CenteringEstimate truncated_mean_monte_carlo(const JumpModel& model, const TemperingSpec& spec,
                                             std::uint64_t n, double v, std::uint64_t draws,
                                             std::uint64_t seed) {
  if (draws < 2) throw ConfigError("plan_invalid", "Monte Carlo centering needs at least 2 draws");
  const detail::JumpKernel kernel(model, &spec, v, seed);
  const auto& table = simd::active_kernels();
  const std::size_t dim = model.dim();
  const double scale = static_cast<double>(n);
  std::vector<double> sum(dim, 0.0), sum2(dim, 0.0);
  constexpr std::uint64_t kBatch = 4096;
  std::vector<double> radius(kBatch);
  std::vector<std::int32_t> atom(kBatch);
  for (std::uint64_t first = 0; first < draws; first += kBatch) {
    simd::JumpBatchTask task;
    task.stream = 0;
    task.first_jump = first;
    task.count = std::min(kBatch, draws - first);
    task.radius = radius.data();
    task.atom = atom.data();
    table.generate_jumps(kernel.params(), task);
    for (std::uint64_t i = 0; i < task.count; ++i) {
      if (!(radius[i] < v)) continue;
      const double* dir = kernel.direction(atom[i]);
      for (std::size_t k = 0; k < dim; ++k) {
        const double c = scale * radius[i] / v * dir[k];
        sum[k] += c;
        sum2[k] += c * c;
      }
    }
  }
  CenteringEstimate est;
  const double N = static_cast<double>(draws);
  for (std::size_t k = 0; k < dim; ++k) {
    const double mean = sum[k] / N;
    const double var = std::max(0.0, (sum2[k] - N * mean * mean) / (N - 1.0));
    est.value.push_back(mean);
    est.std_error.push_back(std::sqrt(var / N));
  }
  return est;
}

}  // namespace

CenteringEstimate centering_truncated_mean(const JumpModel& model, const TemperingSpec& spec,
                                           std::uint64_t n, double v,
                                           const CenteringMethod& method) {
  if (!(v > 0.0)) throw DomainError("domain", "threshold v must be positive");
  spec.check_compatible(model.sigma());
  CenteringMethod::Kind kind = method.kind;
  if (kind == CenteringMethod::Kind::Auto) {
    kind = spec.family() == TemperingFamily::CustomQ ? CenteringMethod::Kind::MonteCarlo
                                                     : CenteringMethod::Kind::Quadrature;
  }
  if (kind == CenteringMethod::Kind::MonteCarlo) {
    return truncated_mean_monte_carlo(model, spec, n, v, method.draws, method.seed);
  }
  const SpectralMeasure& sigma = model.sigma();
  CenteringEstimate est;
  est.value.assign(sigma.dim(), 0.0);
  est.std_error.assign(sigma.dim(), 0.0);
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    const Atom& a = sigma.atom(i);
    const double radial = truncated_mean_radial(model, spec, i, n, v);
    const double w = a.weight / sigma.total_mass();
    for (std::size_t k = 0; k < sigma.dim(); ++k) est.value[k] += w * radial * a.direction[k];
  }
  return est;
}

CenteringEstimate plan_centering(const WalkPlan& plan, const JumpModel& model,
                                 const TemperingSpec& spec, double v) {
  CenteringEstimate est;
  const std::size_t dim = model.dim();
  switch (plan.centering) {
    case Centering::None:
      est.value.assign(dim, 0.0);
      est.std_error.assign(dim, 0.0);
      return est;
    case Centering::JumpMean: {
      est.value = model.mean_jump();
      for (double& x : est.value) x *= static_cast<double>(plan.n) / v;
      est.std_error.assign(dim, 0.0);
      return est;
    }
    case Centering::TruncatedMean:
      return centering_truncated_mean(model, spec, plan.n, v, plan.centering_method);
  }
  return est;
}

std::uint64_t steps_at(std::uint64_t n, double t) {
  if (!(t > 0.0)) return 0;
  const double x = static_cast<double>(n) * t;
  return static_cast<std::uint64_t>(std::floor(x + 1e-9 * std::max(1.0, x)));
}

namespace {

// Raw sums S(k_c) for every replicate and checkpoint: out[(r * ncp + c) * d + k].
std::vector<double> raw_row_sums(const WalkPlan& plan, const JumpModel& model,
                                 const TemperingSpec& spec, double v,
                                 const std::vector<std::uint64_t>& checkpoints) {
  const detail::JumpKernel kernel(model, &spec, v, plan.seed);
  const auto& table = simd::active_kernels();
  const std::size_t dim = model.dim();
  const std::size_t ncp = checkpoints.size();
  std::vector<double> out(plan.replicates * ncp * dim);
  constexpr std::uint64_t kChunk = 64;
  const std::size_t chunks = (plan.replicates + kChunk - 1) / kChunk;
  detail::parallel_chunks(chunks, plan.threads, [&](std::size_t c) {
    simd::RowSumTask task;
    task.first_stream = c * kChunk;
    task.count = std::min<std::uint64_t>(kChunk, plan.replicates - task.first_stream);
    task.n_checkpoints = ncp;
    task.checkpoints = checkpoints.data();
    task.out = out.data() + task.first_stream * ncp * dim;
    table.accumulate_rows(kernel.params(), task);
  });
  return out;
}

SampleBatch make_batch(const WalkPlan& plan, std::size_t dim, double v,
                       const std::vector<double>& a, double t) {
  SampleBatch b;
  b.dim = dim;
  b.n = plan.n;
  b.v_n = v;
  b.centering = a;
  b.mode = plan.centering;
  b.seed = plan.seed;
  b.t = t;
  b.values.resize(plan.replicates * dim);
  return b;
}

double threshold_for(const WalkPlan& plan, const JumpModel& model) {
  return plan.v_override ? *plan.v_override : tempering_threshold(model, plan.n);
}

}  // namespace

SampleBatch simulate_rowsum(const WalkPlan& plan, const JumpModel& model,
                            const TemperingSpec& spec) {
  plan.validate();
  const double v = threshold_for(plan, model);
  const auto a = plan_centering(plan, model, spec, v).value;
  const std::vector<std::uint64_t> checkpoints{plan.n};
  const auto raw = raw_row_sums(plan, model, spec, v, checkpoints);
  const std::size_t dim = model.dim();
  SampleBatch b = make_batch(plan, dim, v, a, 1.0);
  for (std::size_t r = 0; r < plan.replicates; ++r) {
    for (std::size_t k = 0; k < dim; ++k) {
      b.values[r * dim + k] = raw[r * dim + k] / v - 1.0 * a[k];
    }
  }
  for (double x : b.values) {
    if (!std::isfinite(x)) throw NumericError("non-finite row sum", x);
  }
  return b;
}

std::vector<SampleBatch> simulate_paths(const WalkPlan& plan, const JumpModel& model,
                                        const TemperingSpec& spec) {
  plan.validate();
  if (plan.time_grid.empty()) throw ConfigError("time_grid_missing", "paths need a time grid");
  const double v = threshold_for(plan, model);
  const auto a = plan_centering(plan, model, spec, v).value;
  std::vector<std::uint64_t> checkpoints;
  for (double t : plan.time_grid) checkpoints.push_back(steps_at(plan.n, t));
  const auto raw = raw_row_sums(plan, model, spec, v, checkpoints);
  const std::size_t dim = model.dim();
  const std::size_t ncp = checkpoints.size();
  std::vector<SampleBatch> out;
  for (std::size_t c = 0; c < ncp; ++c) {
    const double t = plan.time_grid[c];
    SampleBatch b = make_batch(plan, dim, v, a, t);
    for (std::size_t r = 0; r < plan.replicates; ++r) {
      for (std::size_t k = 0; k < dim; ++k) {
        b.values[r * dim + k] = raw[(r * ncp + c) * dim + k] / v - t * a[k];
      }
    }
    for (double x : b.values) {
      if (!std::isfinite(x)) throw NumericError("non-finite path value", x);
    }
    out.push_back(std::move(b));
  }
  return out;
}

}  // namespace tsrw
