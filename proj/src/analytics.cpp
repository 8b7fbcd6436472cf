#include "tsrw/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "jump_kernel.hpp"
#include "parallel.hpp"
#include "tsrw/error.hpp"
#include "tsrw/simd/kernels.hpp"

namespace tsrw {

using C = std::complex<double>;

std::string to_string(Convention c) {
  switch (c) {
    case Convention::Truncated: return "Truncated";
    case Convention::MeanZero: return "MeanZero";
    case Convention::DriftFree: return "DriftFree";
  }
  return "unknown";
}

Convention convention_from_string(const std::string& name) {
  if (name == "Truncated") return Convention::Truncated;
  if (name == "MeanZero") return Convention::MeanZero;
  if (name == "DriftFree") return Convention::DriftFree;
  throw ConfigError("convention_invalid", "unknown convention '" + name + "'");
}

namespace {

// ∫_1^∞ q(r,s) r^{-α} dr.
double first_moment_tail(const TemperingSpec& spec, std::size_t atom,
                         const QuadratureSettings& quad) {
  const double a = spec.alpha();
  if (spec.family() == TemperingFamily::NoTempering) {
    if (!(a > 1.0)) throw DomainError("mean_undefined", "large jumps have no mean for alpha <= 1");
    return a / (a - 1.0);
  }
  auto f = [&](double r) { return spec.q(r, atom) * std::pow(r, -a); };
  return integrate_to_infinity(f, 1.0, quad).value;
}

// Threshold below which e^{ix} - 1 - ix is replaced by its Taylor polynomial.
constexpr double kSeriesCutoff = 1e-4;

}  // namespace

LevyExponent::LevyExponent(SpectralMeasure sigma, TemperingSpec spec, Convention convention,
                           QuadratureSettings quad)
    : sigma_(std::move(sigma)), spec_(std::move(spec)), convention_(convention), quad_(quad) {
  quad_.validate();
  spec_.check_compatible(sigma_);
  const double a = spec_.alpha();
  if (convention_ == Convention::MeanZero && !(a > 1.0)) {
    throw DomainError("mean_undefined", "MeanZero convention needs alpha > 1");
  }
  if (convention_ == Convention::DriftFree && !(a < 1.0)) {
    throw DomainError("domain", "DriftFree convention needs alpha < 1");
  }
  for (std::size_t i = 0; i < sigma_.size(); ++i) {
    pi_one_.push_back(spec_.pi(1.0, i));
    first_tail_.push_back(convention_ == Convention::MeanZero ? first_moment_tail(spec_, i, quad_)
                                                              : 0.0);
  }
}

C LevyExponent::radial(double theta, std::size_t atom) const {
  if (theta == 0.0) return C{};
  const double th = std::abs(theta);
  const double a = spec_.alpha();
  const bool drift_free = convention_ == Convention::DriftFree;

  auto small = [&](double r) -> C {
    const double x = th * r;
    C g;
    if (x < kSeriesCutoff) {
      const double x2 = x * x;
      g = drift_free ? C(-0.5 * x2 + x2 * x2 / 24.0, x - x2 * x / 6.0)
                     : C(-0.5 * x2 + x2 * x2 / 24.0, -x2 * x / 6.0);
    } else {
      const double h = std::sin(0.5 * x);
      g = drift_free ? C(-2.0 * h * h, std::sin(x)) : C(-2.0 * h * h, std::sin(x) - x);
    }
    return g * (spec_.q(r, atom) * std::pow(r, -a - 1.0));
  };
  const double leading = drift_free ? -a : 1.0 - a;
  C value = integrate_from_zero(ComplexFn(small), 1.0, leading, quad_).value;

  auto amplitude = [&](double r) { return spec_.q(r, atom) * std::pow(r, -a - 1.0); };
  value += fourier_tail(amplitude, th, 1.0, quad_).value - pi_one_[atom];
  if (convention_ == Convention::MeanZero) value -= C(0.0, th * first_tail_[atom]);
  return theta < 0.0 ? std::conj(value) : value;
}

C LevyExponent::operator()(std::span<const double> lambda) const {
  if (lambda.size() != sigma_.dim()) {
    throw ConfigError("dimension_mismatch", "λ has the wrong dimension");
  }
  C psi{};
  for (std::size_t i = 0; i < sigma_.size(); ++i) {
    const Atom& at = sigma_.atom(i);
    const double theta = at.direction.dot(lambda);
    if (theta != 0.0) psi += at.weight * radial(theta, i);
  }
  return psi;
}

namespace {

// ḡ(r) = ∫_0^r (1 - π(u)) du, equal to ∫_0^r (r-u) Π(du) after integrating by
// parts.
double gbar(const TemperingSpec& spec, std::size_t atom, double r, const QuadratureSettings& quad) {
  if (spec.family() == TemperingFamily::ConditionallyExponential) {
    const double l = spec.rate(atom);
    const double x = l * r;
    if (x < 1e-3) return r * x * (0.5 - x / 6.0 + x * x / 24.0 - x * x * x / 120.0);
    return r + std::expm1(-x) / l;
  }
  auto f = [&](double u) { return 1.0 - spec.pi(u, atom); };
  double value = integrate(RealFn(f), 0.0, std::min(r, 1.0), quad).value;
  if (r > 1.0) value += integrate_log(f, 1.0, r, quad).value;
  return value;
}

void require_mean_regime(const SpectralMeasure& sigma, const TemperingSpec& spec) {
  const double a = spec.alpha();
  if (!(a > 1.0 && a < 2.0)) throw DomainError("mean_undefined", "the mean needs 1 < alpha < 2");
  if (spec.family() == TemperingFamily::NoTempering) {
    throw DomainError("not_applicable", "the tempered mean needs a tempered family");
  }
  spec.check_compatible(sigma);
}

}  // namespace

std::vector<double> tempered_mean(const SpectralMeasure& sigma, const TemperingSpec& spec,
                                  const QuadratureSettings& quad) {
  require_mean_regime(sigma, spec);
  const RegularityReport reg = find_regularity_exponent(spec, sigma.size());
  if (!reg.bounded) {
    throw DomainError("regularity_failed", "tempering function fails the regularity check");
  }
  const double a = spec.alpha();
  std::vector<double> m(sigma.dim(), 0.0);
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    auto f = [&](double r) { return gbar(spec, i, r, quad) * std::pow(r, -a - 1.0); };
    const double radial =
        integrate_from_zero(RealFn(f), 1.0, 1.0 - a, quad).value + integrate_to_infinity(f, 1.0, quad).value;
    const Atom& at = sigma.atom(i);
    for (std::size_t k = 0; k < sigma.dim(); ++k) m[k] -= a * at.weight * radial * at.direction[k];
  }
  return m;
}

std::vector<double> large_jump_mean(const SpectralMeasure& sigma, const TemperingSpec& spec,
                                    const QuadratureSettings& quad) {
  spec.check_compatible(sigma);
  std::vector<double> out(sigma.dim(), 0.0);
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    const double j = first_moment_tail(spec, i, quad);
    const Atom& at = sigma.atom(i);
    for (std::size_t k = 0; k < sigma.dim(); ++k) out[k] += at.weight * j * at.direction[k];
  }
  return out;
}

std::vector<double> shift_theta(const SpectralMeasure& sigma, const TemperingSpec& spec,
                                const QuadratureSettings& quad) {
  auto theta = large_jump_mean(sigma, spec, quad);
  const auto m = tempered_mean(sigma, spec, quad);
  for (std::size_t k = 0; k < theta.size(); ++k) theta[k] -= m[k];
  return theta;
}

double levy_mass(const SpectralMeasure& sigma, const TemperingSpec& spec, const AnnularSector& A,
                 const QuadratureSettings& quad) {
  if (A.r1 == A.r2) return 0.0;
  if (!(A.r1 > 0.0) || !(A.r2 > A.r1)) {
    throw DomainError("domain", "sector needs 0 < r1 <= r2");
  }
  spec.check_compatible(sigma);
  std::vector<std::size_t> atoms = A.atoms;
  if (atoms.empty()) {
    for (std::size_t i = 0; i < sigma.size(); ++i) atoms.push_back(i);
  }
  const double a = spec.alpha();
  double mass = 0.0;
  for (std::size_t i : atoms) {
    const double w = sigma.atom(i).weight;
    if (spec.family() == TemperingFamily::NoTempering) {
      const double upper = std::isinf(A.r2) ? 0.0 : std::pow(A.r2, -a);
      mass += w * (std::pow(A.r1, -a) - upper);
      continue;
    }
    auto f = [&](double r) { return spec.q(r, i) * std::pow(r, -a - 1.0); };
    const double radial = std::isinf(A.r2) ? integrate_to_infinity(f, A.r1, quad).value
                                           : integrate_log(f, A.r1, A.r2, quad).value;
    mass += w * radial;
  }
  return mass;
}

CFGrid default_cf_grid(std::size_t dim, double half_width) {
  CFGrid g;
  g.dim = dim;
  if (dim == 1) {
    constexpr int kPoints = 201;
    const double step = 2.0 * half_width / (kPoints - 1);
    for (int i = 0; i < kPoints; ++i) g.points.push_back((i - kPoints / 2) * step);
  } else {
    constexpr int kPoints = 41;
    const double step = 2.0 * half_width / (kPoints - 1);
    std::vector<std::vector<double>> lines;
    for (std::size_t k = 0; k < dim; ++k) {
      std::vector<double> e(dim, 0.0);
      e[k] = 1.0;
      lines.push_back(e);
    }
    const double h = 1.0 / std::numbers::sqrt2;
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t j = i + 1; j < dim; ++j) {
        for (double sign : {1.0, -1.0}) {
          std::vector<double> e(dim, 0.0);
          e[i] = h;
          e[j] = sign * h;
          lines.push_back(e);
        }
      }
    }
    bool origin = false;
    for (const auto& e : lines) {
      for (int i = 0; i < kPoints; ++i) {
        const double t = (i - kPoints / 2) * step;
        if (t == 0.0) {
          if (origin) continue;
          origin = true;
        }
        for (double c : e) g.points.push_back(t * c);
      }
    }
  }
  g.values.assign(g.size(), C{});
  return g;
}

CFGrid empirical_cf(std::span<const double> samples, std::size_t dim, const CFGrid& grid) {
  if (dim != grid.dim) throw ConfigError("dimension_mismatch", "CF grid dimension differs");
  if (dim == 0 || samples.empty() || samples.size() % dim != 0) {
    throw ConfigError("samples_invalid", "empirical CF needs a non-empty sample matrix");
  }
  const std::size_t rows = samples.size() / dim;
  CFGrid out = grid;
  std::vector<double> cs(grid.size()), sn(grid.size());
  simd::CfTask task;
  task.samples = samples.data();
  task.rows = rows;
  task.dim = static_cast<int>(dim);
  task.lambdas = grid.points.data();
  task.n_lambda = grid.size();
  task.cos_sum = cs.data();
  task.sin_sum = sn.data();
  simd::active_kernels().cf_sums(task);
  const double n = static_cast<double>(rows);
  out.values.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto p = grid.point(i);
    const bool zero = std::all_of(p.begin(), p.end(), [](double x) { return x == 0.0; });
    out.values[i] = zero ? C(1.0, 0.0) : C(cs[i] / n, sn[i] / n);
  }
  return out;
}

CFDistance cf_distance(const CFGrid& empirical, const std::vector<C>& theory) {
  if (theory.size() != empirical.size()) {
    throw ConfigError("grid_mismatch", "theoretical and empirical grids differ");
  }
  CFDistance d;
  d.theory = theory;
  for (std::size_t i = 0; i < theory.size(); ++i) {
    const double e = std::abs(empirical.values[i] - theory[i]);
    d.per_point.push_back(e);
    d.sup_abs = std::max(d.sup_abs, e);
  }
  return d;
}

CFDistance cf_distance(const CFGrid& empirical, const LevyExponent& L,
                       const std::vector<double>& drift) {
  if (empirical.dim != L.dim()) throw ConfigError("grid_mismatch", "grid dimension differs");
  if (!drift.empty() && drift.size() != L.dim()) {
    throw ConfigError("grid_mismatch", "drift dimension differs");
  }
  std::vector<C> theory;
  for (std::size_t i = 0; i < empirical.size(); ++i) {
    const auto p = empirical.point(i);
    double shift = 0.0;
    for (std::size_t k = 0; k < drift.size(); ++k) shift += drift[k] * p[k];
    theory.push_back(std::exp(L(p) + C(0.0, shift)));
  }
  return cf_distance(empirical, theory);
}

std::vector<VagueRow> vague_convergence_table(const JumpModel& model, const TemperingSpec& spec,
                                              std::uint64_t n,
                                              const std::vector<AnnularSector>& sets,
                                              std::uint64_t draws, std::uint64_t seed,
                                              unsigned threads) {
  if (draws == 0) throw ConfigError("diagnostic_invalid", "vague convergence needs draws > 0");
  const SpectralMeasure& sigma = model.sigma();
  const std::size_t n_sets = sets.size();
  std::vector<std::vector<char>> member(n_sets, std::vector<char>(sigma.size(), 0));
  for (std::size_t j = 0; j < n_sets; ++j) {
    if (!(sets[j].r1 > 0.0) || sets[j].r2 < sets[j].r1) {
      throw ConfigError("diagnostic_invalid", "sectors need 0 < r1 <= r2");
    }
    if (sets[j].atoms.empty()) {
      std::fill(member[j].begin(), member[j].end(), 1);
    }
    for (std::size_t i : sets[j].atoms) {
      if (i >= sigma.size()) throw ConfigError("diagnostic_invalid", "sector atom out of range");
      member[j][i] = 1;
    }
  }
  const double v = tempering_threshold(model, n);
  const detail::JumpKernel kernel(model, &spec, v, seed);
  const auto& table = simd::active_kernels();

  constexpr std::uint64_t kChunk = 1 << 16;
  const std::size_t chunks = (draws + kChunk - 1) / kChunk;
  std::vector<std::uint64_t> counts(chunks * n_sets, 0);
  detail::parallel_chunks(chunks, threads, [&](std::size_t c) {
    std::vector<double> radius(kChunk);
    std::vector<std::int32_t> atom(kChunk);
    simd::JumpBatchTask task;
    task.stream = 0;
    task.first_jump = c * kChunk;
    task.count = std::min<std::uint64_t>(kChunk, draws - task.first_jump);
    task.radius = radius.data();
    task.atom = atom.data();
    table.generate_jumps(kernel.params(), task);
    for (std::uint64_t i = 0; i < task.count; ++i) {
      const double z = radius[i] / v;
      for (std::size_t j = 0; j < n_sets; ++j) {
        if (z >= sets[j].r1 && z < sets[j].r2 && member[j][atom[i]]) ++counts[c * n_sets + j];
      }
    }
  });

  std::vector<VagueRow> rows;
  const double N = static_cast<double>(draws);
  const double nd = static_cast<double>(n);
  for (std::size_t j = 0; j < n_sets; ++j) {
    VagueRow row;
    row.set = sets[j];
    for (std::size_t c = 0; c < chunks; ++c) row.hits += counts[c * n_sets + j];
    const double p = static_cast<double>(row.hits) / N;
    row.estimate = nd * p;
    row.std_error = nd * std::sqrt(p * (1.0 - p) / N);
    row.target = levy_mass(sigma, spec, sets[j], spec.quadrature());
    row.relative_error = row.target > 0.0 ? std::abs(row.estimate - row.target) / row.target
                                          : std::abs(row.estimate);
    row.under_sampled = row.hits < 100;
    rows.push_back(row);
  }
  return rows;
}

UanProfile uan_profile(const JumpModel& model, const TemperingSpec& spec, std::uint64_t n,
                       const std::vector<double>& deltas) {
  if (deltas.empty()) throw DomainError("domain", "uan profile needs deltas");
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (!(deltas[i] > 0.0) || (i > 0 && !(deltas[i] > deltas[i - 1]))) {
      throw DomainError("domain", "deltas must be positive and ascending");
    }
  }
  const SpectralMeasure& sigma = model.sigma();
  spec.check_compatible(sigma);
  const double v = tempering_threshold(model, n);
  const double nd = static_cast<double>(n);
  UanProfile prof;
  prof.deltas = deltas;
  for (double delta : deltas) {
    // n E[Z² 1(Z <= δ)] = ∫_0^δ 2z n P(Z > z) dz - δ² n P(Z > δ), Z = ‖Y‖/v.
    std::vector<double> cuts{0.0};
    for (double x : model.scales()) {
      const double k = x / v;
      if (k > cuts.back() && k < delta) cuts.push_back(k);
    }
    cuts.push_back(delta);
    double value = 0.0;
    for (std::size_t i = 0; i < sigma.size(); ++i) {
      auto f = [&](double z) { return 2.0 * z * nd * model.tail(v * z) * spec.pi(z, i); };
      double part = 0.0;
      for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
        part += integrate(RealFn(f), cuts[c], cuts[c + 1], spec.quadrature()).value;
      }
      part -= delta * delta * nd * model.tail(v * delta) * spec.pi(delta, i);
      value += sigma.atom(i).weight / sigma.total_mass() * part;
    }
    prof.values.push_back(value);
  }
  if (deltas.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < deltas.size(); ++i) {
      if (!(prof.values[i] > 0.0)) throw NumericError("uan profile has a non-positive value", 0.0);
      const double x = std::log(deltas[i]);
      const double y = std::log(prof.values[i]);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double m = static_cast<double>(deltas.size());
    prof.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  }
  return prof;
}

DensityResult density_1d(const std::function<C(double)>& psi, double drift, double x_min,
                         double x_max, std::size_t points) {
  if (points < 2 || !(x_max > x_min)) {
    throw ConfigError("density_invalid", "density grid needs points >= 2 and x_max > x_min");
  }
  constexpr double kEdge = 1e-8;
  constexpr double kMaxWindow = 1e6;
  double window = 1.0;
  while (std::abs(std::exp(psi(window))) >= kEdge || std::abs(std::exp(psi(0.75 * window))) >= kEdge) {
    window *= 2.0;
    if (window > kMaxWindow) {
      throw NumericError("characteristic function decays too slowly; widen the window", window);
    }
  }
  // λ spacing: the inversion is periodic in x with period 2π/h, kept at eight
  // times the grid span.
  const double span = x_max - x_min;
  double h = 2.0 * std::numbers::pi / (8.0 * std::max(span, 1.0));
  const std::size_t steps = std::max<std::size_t>(64, static_cast<std::size_t>(std::ceil(window / h)));
  h = window / static_cast<double>(steps);

  std::vector<C> phi(steps + 1);
  for (std::size_t j = 0; j <= steps; ++j) {
    const double l = h * static_cast<double>(j);
    phi[j] = j == 0 ? C(1.0, 0.0) : std::exp(psi(l) + C(0.0, l * drift));
  }

  DensityResult res;
  res.window = window;
  res.step = h;
  const double dx = span / static_cast<double>(points - 1);
  double mass = 0.0;
  for (std::size_t i = 0; i < points; ++i) {
    const double x = x_min + dx * static_cast<double>(i);
    double acc = 0.5 * phi[0].real();
    for (std::size_t j = 1; j <= steps; ++j) {
      const double l = h * static_cast<double>(j);
      const double term = (phi[j] * C(std::cos(l * x), -std::sin(l * x))).real();
      acc += j == steps ? 0.5 * term : term;
    }
    double f = acc * h / std::numbers::pi;
    const double trap = (i == 0 || i + 1 == points) ? 0.5 : 1.0;
    if (f < 0.0) {
      res.clipped_mass += -f * dx * trap;
      f = 0.0;
    }
    mass += f * dx * trap;
    res.x.push_back(x);
    res.density.push_back(f);
  }
  res.mass_defect = std::abs(1.0 - mass);
  return res;
}

DensityResult density_1d(const LevyExponent& L, double drift, double x_min, double x_max,
                         std::size_t points) {
  if (L.dim() != 1) throw ConfigError("dimension_unsupported", "density inversion needs d = 1");
  return density_1d([&](double l) { return L(l); }, drift, x_min, x_max, points);
}

}  // namespace tsrw
