// Acceptance suite: one PASS/FAIL line per criterion.
#include <json.hpp>

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "tsrw/analytics.hpp"
#include "tsrw/quadrature.hpp"

using namespace tsrw;
using C = std::complex<double>;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(const char* id, bool pass, const std::string& detail, double seconds) {
  std::printf("%s %s  %s  (%.1f s)\n", id, pass ? "PASS" : "FAIL", detail.c_str(), seconds);
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

SpectralMeasure plus_only() { return SpectralMeasure({{Direction::normalized({1.0}), 1.0}}); }

SpectralMeasure two_sided(double wp, double wm) {
  return SpectralMeasure({{Direction::normalized({1.0}), wp}, {Direction::normalized({-1.0}), wm}});
}

double ks_distance(std::vector<double> x, const std::function<double(double)>& cdf) {
  std::sort(x.begin(), x.end());
  const double n = double(x.size());
  double d = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double F = cdf(x[i]);
    d = std::max({d, std::abs(F - i / n), std::abs((i + 1) / n - F)});
  }
  return d;
}

// sup_λ |φ̂(λ) - exp(ψ(λ) + iλ drift)| on the default 1-d grid.
double cf_sup(const SampleBatch& batch, const LevyExponent& L, double drift = 0.0) {
  const CFGrid emp = empirical_cf(batch, default_cf_grid(1));
  return cf_distance(emp, L, {drift}).sup_abs;
}

void a1() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<TemperingSpec> specs{TemperingSpec::conditionally_exponential(0.7, {1.0}),
                                         TemperingSpec::conditionally_exponential(1.5, {1.0}),
                                         TemperingSpec::exponential_q(1.5, {2.0}),
                                         TemperingSpec::none(1.2)};
  bool pass = true;
  double worst = 0;
  for (const auto& s : specs) {
    for (int i = 0; i < 40; ++i) {
      const double r = 1e-3 * std::pow(1e5, i / 39.0);
      const double err = std::abs(s.alpha() * s.pi(r, 0) - r * s.pi_derivative(r, 0) - s.q(r, 0));
      worst = std::max(worst, err / s.alpha());
      pass = pass && err <= 1e-6 * s.alpha();
    }
  }
  report("A1", pass, fmt("structural identity: max |a pi - r pi' - q| / a = %.2e (limit 1e-6)", worst),
         seconds_since(t0));
}

void a2() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t N = 100000;
  std::string detail = "KS distance:";
  bool pass = true;
  for (const auto& s : {TemperingSpec::conditionally_exponential(1.5, {1.0}),
                        TemperingSpec::exponential_q(1.5, {2.0})}) {
    RandomStream rng(2, 0);
    std::vector<double> t;
    for (std::size_t i = 0; i < N; ++i) t.push_back(s.sample_T(0, rng));
    const double d = ks_distance(t, [&](double x) { return 1.0 - s.pi(x, 0); });
    pass = pass && d <= 0.01;
    detail += " " + to_string(s.family()) + fmt("=%.4f", d);
  }
  // π ≡ 1 for NoTempering: T is +inf with probability one.
  const auto none = TemperingSpec::none(1.5);
  RandomStream rng(2, 0);
  bool all_inf = true;
  for (std::size_t i = 0; i < N; ++i) all_inf = all_inf && std::isinf(none.sample_T(0, rng));
  pass = pass && all_inf;
  detail += all_inf ? " NoTempering=0 (all draws +inf)" : " NoTempering: finite draw";
  report("A2", pass, detail + " (limit 0.01)", seconds_since(t0));
}

void a3() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto sigma = two_sided(0.5, 0.5);
  const auto spec = TemperingSpec::none(1.5);
  const LevyExponent L(sigma, spec, Convention::MeanZero);
  const auto grid = default_cf_grid(1);
  const double coef = 1.5 * std::tgamma(-1.5) * std::cos(0.75 * M_PI);
  double cross = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double l = grid.point(i)[0];
    cross = std::max(cross, std::abs(L(l) - C(coef * std::pow(std::abs(l), 1.5), 0.0)));
  }
  WalkPlan plan;
  plan.n = 5000;
  plan.replicates = 50000;
  plan.centering = Centering::JumpMean;
  plan.seed = 20240301;
  const auto batch = simulate_rowsum(plan, JumpModel::exact_pareto(1.5, 1.0, sigma), spec);
  const double sup = cf_sup(batch, L);
  report("A3", sup <= 0.05 && cross <= 1e-6,
         fmt("stable reduction: sup CF error %.4f (limit 0.05); quadrature vs closed form %.1e (limit 1e-6)",
             sup, cross),
         seconds_since(t0));
}

void a4() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto sigma = two_sided(0.7, 0.3);
  const auto spec = TemperingSpec::conditionally_exponential(0.7, {1.0});
  WalkPlan plan;
  plan.n = 5000;
  plan.replicates = 50000;
  plan.seed = 20240302;
  const auto batch = simulate_rowsum(plan, JumpModel::exact_pareto(0.7, 1.0, sigma), spec);
  const double sup = cf_sup(batch, LevyExponent(sigma, spec, Convention::DriftFree));
  report("A4", sup <= 0.05, fmt("alpha<1 without centering: sup CF error %.4f (limit 0.05)", sup),
         seconds_since(t0));
}

// Exact mean of v^{-1} S_n - n E(H)/v at finite n: -n ∫_0^∞ P(R > v z)(1 - π(z)) dz.
double finite_n_mean(const JumpModel& model, const TemperingSpec& spec, std::uint64_t n, double v) {
  const QuadratureSettings q = spec.quadrature().tightened(10);
  auto f = [&](double z) { return model.tail(v * z) * (1.0 - spec.pi(z, 0)); };
  const double k = model.x_m() / v;
  return -double(n) * (integrate(RealFn(f), 0.0, k, q).value + integrate_to_infinity(f, k, q).value);
}

void a5() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto sigma = plus_only();
  const auto spec = TemperingSpec::conditionally_exponential(1.5, {1.0});
  const auto model = JumpModel::exact_pareto(1.5, 1.0, sigma);
  WalkPlan plan;
  plan.n = 10000;
  plan.replicates = 50000;
  plan.centering = Centering::JumpMean;
  plan.seed = 20240303;
  const auto batch = simulate_rowsum(plan, model, spec);
  double s = 0, s2 = 0;
  for (double x : batch.values) {
    s += x;
    s2 += x * x;
  }
  const double N = double(batch.values.size());
  const double mean = s / N;
  const double se = std::sqrt((s2 / N - mean * mean) / (N - 1));
  const double m = tempered_mean(sigma, spec)[0];
  const double theta = shift_theta(sigma, spec)[0];
  const double shift_err = std::abs(-theta + large_jump_mean(sigma, spec)[0] - m);
  const bool pass = std::abs(mean - m) <= 4 * se && shift_err <= 1e-8;
  report("A5", pass,
         fmt("mean: empirical %.5f vs m %.5f, |diff| %.4f, 4 SE %.4f;", mean, m, std::abs(mean - m), 4 * se) +
             fmt(" shift consistency %.1e (limit 1e-8)", shift_err),
         seconds_since(t0));
  const double exact = finite_n_mean(model, spec, plan.n, batch.v_n);
  std::printf("   info: exact mean at n=%llu is %.5f (bias to the limit %.4f); empirical - exact = %.4f, "
              "4 SE %.4f -> %s\n",
              static_cast<unsigned long long>(plan.n), exact, exact - m, mean - exact, 4 * se,
              std::abs(mean - exact) <= 4 * se ? "consistent" : "inconsistent");
}

// Exact characteristic function of v^{-1} S_n - a at finite n for a one-atom
// model on +1: n log(1 + iλ ∫_0^∞ e^{iλz} P(Y/v > z) dz) - iλa.
C finite_n_cf(const JumpModel& model, const TemperingSpec& spec, std::uint64_t n, double v, double a,
              double lambda) {
  if (lambda == 0.0) return 1.0;
  if (lambda < 0.0) return std::conj(finite_n_cf(model, spec, n, v, a, -lambda));
  const QuadratureSettings q = spec.quadrature().tightened(10);
  auto surv = [&](double z) { return model.tail(v * z) * spec.pi(z, 0); };
  auto f = [&](double z) { return std::exp(C(0, lambda * z)) * surv(z); };
  C inner = integrate(ComplexFn(f), 0.0, 1.0 / v, q).value + integrate(ComplexFn(f), 1.0 / v, 1.0, q).value +
            fourier_tail(surv, lambda, 1.0, q).value;
  return std::exp(double(n) * std::log(1.0 + C(0, lambda) * inner) - C(0, lambda * a));
}

void a6() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto sigma = plus_only();
  const auto spec = TemperingSpec::conditionally_exponential(1.5, {1.0});
  const auto model = JumpModel::exact_pareto(1.5, 1.0, sigma);
  WalkPlan plan;
  plan.n = 10000;
  plan.replicates = 50000;
  plan.centering = Centering::TruncatedMean;
  plan.centering_method.kind = CenteringMethod::Kind::Quadrature;
  plan.seed = 20240304;
  const auto batch = simulate_rowsum(plan, model, spec);
  const LevyExponent L(sigma, spec, Convention::Truncated);
  const auto grid = default_cf_grid(1);
  const CFGrid emp = empirical_cf(batch, grid);
  const double sup = cf_distance(emp, L).sup_abs;
  report("A6", sup <= 0.05, fmt("truncated-mean centering: sup CF error %.4f (limit 0.05)", sup),
         seconds_since(t0));

  double bias = 0, residual = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double l = grid.point(i)[0];
    const C exact = finite_n_cf(model, spec, plan.n, batch.v_n, batch.centering[0], l);
    bias = std::max(bias, std::abs(exact - std::exp(L(l))));
    residual = std::max(residual, std::abs(emp.values[i] - exact));
  }
  std::printf("   info: exact CF at n=%llu differs from the limit by %.4f (a_n^2/n = %.3f); "
              "empirical vs exact finite-n sup %.4f\n",
              static_cast<unsigned long long>(plan.n), bias,
              batch.centering[0] * batch.centering[0] / double(plan.n), residual);
}

void a7() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto closed = vague_convergence_table(JumpModel::exact_pareto(1.0, 1.0, plus_only()),
                                              TemperingSpec::none(1.0), 1000, {{1.0, 2.0, {}}},
                                              10'000'000, 7);
  const auto ce = TemperingSpec::conditionally_exponential(1.5, {1.0});
  const auto tempered = vague_convergence_table(JumpModel::exact_pareto(1.5, 1.0, plus_only()), ce,
                                                1000, {{1.0, INFINITY, {0}}}, 10'000'000, 8);
  const auto& a = closed[0];
  const auto& b = tempered[0];
  report("A7", a.relative_error <= 0.05 && b.relative_error <= 0.05,
         fmt("vague convergence: [1,2] estimate %.4f vs 0.5 (rel %.4f); tempered [1,inf) %.4f vs %.4f",
             a.estimate, a.relative_error, b.estimate, b.target) +
             fmt(" (rel %.4f, limit 0.05)", b.relative_error),
         seconds_since(t0));
}

void a8() {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<double> deltas;
  for (int i = 0; i < 10; ++i) deltas.push_back(0.05 * std::pow(20.0, i / 9.0));
  const auto prof = uan_profile(JumpModel::exact_pareto(1.5, 1.0, plus_only()),
                                TemperingSpec::conditionally_exponential(1.5, {1.0}), 10000, deltas);
  report("A8", std::abs(prof.slope - 0.5) <= 0.15,
         fmt("UAN profile slope %.4f (band 0.5 +- 0.15)", prof.slope), seconds_since(t0));
}

void a9() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto sigma = two_sided(0.7, 0.3);
  const auto spec = TemperingSpec::conditionally_exponential(0.7, {1.0});
  WalkPlan plan;
  plan.n = 5000;
  plan.replicates = 50000;
  plan.seed = 20240305;
  plan.time_grid = {0.5, 1.0};
  const auto paths = simulate_paths(plan, JumpModel::exact_pareto(0.7, 1.0, sigma), spec);
  const auto grid = default_cf_grid(1);
  const auto half = empirical_cf(paths[0], grid);
  const auto one = empirical_cf(paths[1], grid);
  double split = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    split = std::max(split, std::abs(one.values[i] - half.values[i] * half.values[i]));
  }
  const double sup = cf_distance(one, LevyExponent(sigma, spec, Convention::DriftFree)).sup_abs;
  report("A9", split <= 0.07 && sup <= 0.05,
         fmt("finite-dimensional: sup |phi_1 - phi_0.5^2| %.4f (limit 0.07); sup |phi_1 - e^psi| %.4f "
             "(limit 0.05)",
             split, sup),
         seconds_since(t0));
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void a10() {
  const auto t0 = std::chrono::steady_clock::now();
  const fs::path root = fs::temp_directory_path() / ("tsrw_a10_" + std::to_string(::getpid()));
  fs::create_directories(root);
  const nlohmann::json cfg = {
      {"model", {{"alpha", 0.7}, {"x_m", 1.0}}},
      {"sigma", nlohmann::json::array({{{"direction", {1.0}}, {"weight", 0.7}},
                                       {{"direction", {-1.0}}, {"weight", 0.3}}})},
      {"tempering", {{"family", "ConditionallyExponential"}, {"rates", 1.0}}},
      {"plan", {{"n", 5000}, {"replicates", 50000}, {"centering", "None"}, {"seed", 20240302}}}};
  std::ofstream(root / "a4.json") << cfg.dump(2);
  struct Variant {
    std::string env, threads, name;
  };
  const std::vector<Variant> variants{{"", "1", "t1"}, {"", "4", "t4"}, {"TSRW_SIMD=scalar ", "2", "scalar_t2"}};
  std::vector<std::string> outputs;
  bool ran = true;
  for (const auto& v : variants) {
    const fs::path out = root / v.name;
    const std::string cmd = v.env + std::string(TSRW_CLI_PATH) + " simulate --config " +
                            (root / "a4.json").string() + " --threads " + v.threads + " --out " +
                            out.string();
    const int status = std::system(cmd.c_str());
    ran = ran && WIFEXITED(status) && WEXITSTATUS(status) == 0;
    outputs.push_back(slurp(out / "samples.csv"));
  }
  const bool same = ran && !outputs[0].empty() && outputs[0] == outputs[1] && outputs[0] == outputs[2];
  std::error_code ec;
  fs::remove_all(root, ec);
  report("A10", same,
         fmt("reproducibility: samples.csv (%.0f bytes) identical across --threads 1/4 and the scalar "
             "kernels",
             double(outputs[0].size())),
         seconds_since(t0));
}

}  // namespace

int main() {
  const std::pair<const char*, void (*)()> criteria[] = {{"A1", a1}, {"A2", a2}, {"A3", a3}, {"A4", a4},
                                                          {"A5", a5}, {"A6", a6}, {"A7", a7}, {"A8", a8},
                                                          {"A9", a9}, {"A10", a10}};
  for (const auto& [id, run] : criteria) {
    try {
      run();
    } catch (const std::exception& e) {
      report(id, false, std::string("threw: ") + e.what(), 0.0);
    }
  }
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
