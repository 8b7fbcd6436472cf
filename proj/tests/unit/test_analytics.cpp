#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <complex>
#include <numbers>

#include "tsrw/analytics.hpp"
#include "tsrw/error.hpp"

using namespace tsrw;
using C = std::complex<double>;

namespace {

SpectralMeasure plus_only(double w = 1.0) {
  return SpectralMeasure({{Direction::normalized({1.0}), w}});
}

SpectralMeasure two_sided(double wp, double wm) {
  return SpectralMeasure({{Direction::normalized({1.0}), wp}, {Direction::normalized({-1.0}), wm}});
}

const double kThetas[] = {-5.0, -1.3, -0.3, -2e-5, 0.01, 0.7, 2.0, 5.0};

bool close(C a, C b, double rel) { return std::abs(a - b) <= rel * std::max(1.0, std::abs(b)); }

// ∫_0^∞ (e^{iθr} - 1 - iθr) r^{-β-1} e^{-λr} dr
C mean_zero_kernel(double beta, double rate, double theta) {
  return std::tgamma(-beta) * (std::pow(C(rate, -theta), beta) - std::pow(rate, beta) +
                               C(0, theta * beta * std::pow(rate, beta - 1)));
}

// J1 = ∫_1^∞ (1.5 + r) e^{-r} r^{-1.5} dr
constexpr double kJ1CondExp = 0.54602715295300301179;

}  // namespace

TEST_CASE("exponent is zero at the origin") {
  for (auto conv : {Convention::Truncated, Convention::MeanZero}) {
    const LevyExponent L(two_sided(0.7, 0.3), TemperingSpec::conditionally_exponential(1.5, {1.0}), conv);
    CHECK(L(0.0) == C(0.0, 0.0));
  }
  const LevyExponent D(plus_only(), TemperingSpec::none(0.7), Convention::DriftFree);
  CHECK(D(0.0) == C(0.0, 0.0));
}

TEST_CASE("convention preconditions") {
  CHECK_THROWS_AS(LevyExponent(plus_only(), TemperingSpec::none(0.7), Convention::MeanZero), DomainError);
  CHECK_THROWS_AS(LevyExponent(plus_only(), TemperingSpec::none(1.5), Convention::DriftFree), DomainError);
  CHECK_THROWS_AS(LevyExponent(two_sided(1, 1), TemperingSpec::conditionally_exponential(1.5, {1.0, 2.0, 3.0}),
                               Convention::Truncated),
                  ConfigError);
}

TEST_CASE("one-sided stable closed form") {
  // ∫ (e^{iθr} - 1) α r^{-α-1} dr = α Γ(-α) (-iθ)^α
  const double alpha = 0.7;
  const LevyExponent L(plus_only(), TemperingSpec::none(alpha), Convention::DriftFree);
  for (double t : kThetas) {
    const C exact = alpha * std::tgamma(-alpha) * std::pow(C(0, -t), alpha);
    CAPTURE(t);
    CHECK(close(L(t), exact, 1e-6));
  }
}

TEST_CASE("symmetric stable closed form") {
  const LevyExponent L(two_sided(0.5, 0.5), TemperingSpec::none(1.5), Convention::MeanZero);
  const double coef = 1.5 * std::tgamma(-1.5) * std::cos(0.75 * std::numbers::pi);
  CHECK(coef == doctest::Approx(-2.506628274631000502).epsilon(1e-14));
  for (double t : kThetas) {
    const C v = L(t);
    CAPTURE(t);
    CHECK(std::abs(v.imag()) <= 1e-9 * std::max(1.0, std::abs(v)));
    CHECK(v.real() == doctest::Approx(coef * std::pow(std::abs(t), 1.5)).epsilon(1e-6));
  }
}

TEST_CASE("tempered exponents against closed forms") {
  SUBCASE("ConditionallyExponential mean zero and truncated") {
    const auto spec = TemperingSpec::conditionally_exponential(1.5, {1.0});
    const LevyExponent mz(plus_only(), spec, Convention::MeanZero);
    const LevyExponent tr(plus_only(), spec, Convention::Truncated);
    for (double t : kThetas) {
      const C exact = 1.5 * mean_zero_kernel(1.5, 1.0, t) + 1.0 * mean_zero_kernel(0.5, 1.0, t);
      CAPTURE(t);
      CHECK(close(mz(t), exact, 1e-6));
      CHECK(close(tr(t), exact + C(0, t * kJ1CondExp), 1e-6));
    }
  }
  SUBCASE("ExponentialQ mean zero") {
    const LevyExponent mz(plus_only(), TemperingSpec::exponential_q(1.5, {2.0}), Convention::MeanZero);
    for (double t : kThetas) CHECK(close(mz(t), 1.5 * mean_zero_kernel(1.5, 2.0, t), 1e-6));
  }
  SUBCASE("ConditionallyExponential drift free") {
    const double a = 0.7, lam = 1.0;
    const LevyExponent df(plus_only(), TemperingSpec::conditionally_exponential(a, {lam}),
                          Convention::DriftFree);
    for (double t : kThetas) {
      const C z(lam, -t);
      const C exact = a * std::tgamma(-a) * (std::pow(z, a) - std::pow(lam, a)) +
                      lam * std::tgamma(1 - a) * (std::pow(z, a - 1) - std::pow(lam, a - 1));
      CHECK(close(df(t), exact, 1e-6));
    }
  }
}

TEST_CASE("exponent properties on the default grid") {
  const auto grid = default_cf_grid(1);
  const SpectralMeasure sigma = two_sided(0.8, 0.2);
  const auto spec = TemperingSpec::conditionally_exponential(1.5, {1.0, 2.0});
  for (auto conv : {Convention::Truncated, Convention::MeanZero}) {
    const LevyExponent L(sigma, spec, conv);
    for (std::size_t i = 0; i < grid.size(); i += 7) {
      const double t = grid.point(i)[0];
      const C a = L(t), b = L(-t);
      CHECK(std::abs(b - std::conj(a)) <= 1e-12 * std::max(1.0, std::abs(a)));
      CHECK(a.real() <= 0.0);
    }
  }
}

TEST_CASE("convention consistency") {
  // ψ_T(λ) - i λ θ = ψ_MZ(λ) + i λ m with θ = J1 - m.
  const SpectralMeasure sigma = two_sided(0.8, 0.2);
  for (const auto& spec : {TemperingSpec::conditionally_exponential(1.5, {1.0, 2.0}),
                           TemperingSpec::exponential_q(1.3, {0.5})}) {
    const LevyExponent tr(sigma, spec, Convention::Truncated);
    const LevyExponent mz(sigma, spec, Convention::MeanZero);
    const double m = tempered_mean(sigma, spec)[0];
    const double theta = shift_theta(sigma, spec)[0];
    for (double t : kThetas) {
      CHECK(std::abs(tr(t) - C(0, t * theta) - (mz(t) + C(0, t * m))) <= 1e-7);
    }
  }
}

TEST_CASE("tempered mean") {
  CHECK(tempered_mean(plus_only(), TemperingSpec::conditionally_exponential(1.5, {1.0}))[0] ==
        doctest::Approx(-3.5449077018110320546).epsilon(1e-9));
  CHECK(tempered_mean(plus_only(), TemperingSpec::exponential_q(1.5, {2.0}))[0] ==
        doctest::Approx(-7.519884823892966133807).epsilon(1e-9));
  CHECK(std::abs(tempered_mean(two_sided(1, 1), TemperingSpec::conditionally_exponential(1.5, {1.0}))[0]) <=
        1e-12);
  CHECK_THROWS_AS(tempered_mean(plus_only(), TemperingSpec::none(1.5)), DomainError);
  CHECK_THROWS_AS(tempered_mean(plus_only(), TemperingSpec::conditionally_exponential(0.7, {1.0})),
                  DomainError);

  // m is the mean of the law, so the mean-zero exponent has zero slope at 0.
  const LevyExponent mz(plus_only(), TemperingSpec::conditionally_exponential(1.5, {1.0}),
                        Convention::MeanZero);
  const double h = 1e-4;
  CHECK(std::abs((mz(h) - mz(-h)) / (2 * h)) <= 1e-5);
}

TEST_CASE("shift and large-jump mean") {
  const auto ce = TemperingSpec::conditionally_exponential(1.5, {1.0});
  CHECK(large_jump_mean(plus_only(), ce)[0] == doctest::Approx(kJ1CondExp).epsilon(1e-10));
  CHECK(shift_theta(plus_only(), ce)[0] ==
        doctest::Approx(kJ1CondExp + 3.5449077018110320546).epsilon(1e-9));
  const auto eq = TemperingSpec::exponential_q(1.5, {2.0});
  CHECK(large_jump_mean(plus_only(), eq)[0] == doctest::Approx(0.06384910575248578602).epsilon(1e-10));
  const auto sigma = two_sided(0.7, 0.3);
  const auto spec = TemperingSpec::conditionally_exponential(1.5, {1.0, 3.0});
  const double th = shift_theta(sigma, spec)[0];
  CHECK(std::abs(-th + large_jump_mean(sigma, spec)[0] - tempered_mean(sigma, spec)[0]) <= 1e-8);
  CHECK(std::abs(shift_theta(two_sided(1, 1), ce)[0]) <= 1e-12);
}

TEST_CASE("Levy measure of annular sectors") {
  CHECK(levy_mass(plus_only(), TemperingSpec::none(1.0), {1.0, 2.0, {}}) == doctest::Approx(0.5));
  CHECK(levy_mass(plus_only(), TemperingSpec::none(1.0), {2.0, 2.0, {}}) == 0.0);
  const auto sigma = two_sided(0.7, 0.3);
  const auto ce = TemperingSpec::conditionally_exponential(1.5, {1.0, 2.0});
  const double eps = 0.3;
  const double expected =
      std::pow(eps, -1.5) * (0.7 * ce.pi(eps, 0) + 0.3 * ce.pi(eps, 1));
  CHECK(levy_mass(sigma, ce, {eps, INFINITY, {}}) == doctest::Approx(expected).epsilon(1e-9));
  const double whole = levy_mass(sigma, ce, {0.5, INFINITY, {}});
  const double parts = levy_mass(sigma, ce, {0.5, 1.0, {}}) + levy_mass(sigma, ce, {1.0, 3.0, {}}) +
                       levy_mass(sigma, ce, {3.0, INFINITY, {}});
  CHECK(std::abs(whole - parts) <= 1e-10 * whole);
  const double by_atom = levy_mass(sigma, ce, {0.5, 2.0, {0}}) + levy_mass(sigma, ce, {0.5, 2.0, {1}});
  CHECK(std::abs(by_atom - levy_mass(sigma, ce, {0.5, 2.0, {}})) <= 1e-12);
}

TEST_CASE("default grids") {
  const auto g1 = default_cf_grid(1);
  CHECK(g1.size() == 201);
  CHECK(g1.point(0)[0] == -5.0);
  CHECK(g1.point(100)[0] == 0.0);
  CHECK(g1.point(200)[0] == 5.0);
  const auto g2 = default_cf_grid(2);
  CHECK(g2.size() == 4 * 40 + 1);
  const auto g3 = default_cf_grid(3);
  CHECK(g3.size() == 9 * 40 + 1);
}

TEST_CASE("empirical characteristic function") {
  const auto grid = default_cf_grid(1);
  SUBCASE("one sample") {
    const std::vector<double> x{0.37};
    const auto cf = empirical_cf(x, 1, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      CHECK(std::abs(std::abs(cf.values[i]) - 1.0) <= 1e-14);
      CHECK(std::abs(cf.values[i] - std::exp(C(0, 0.37 * grid.point(i)[0]))) <= 1e-13);
    }
    CHECK(cf.values[100] == C(1.0, 0.0));
  }
  SUBCASE("symmetric law has small imaginary part") {
    const auto model = JumpModel::exact_pareto(1.5, 1.0, two_sided(0.5, 0.5));
    WalkPlan plan;
    plan.n = 200;
    plan.replicates = 20000;
    plan.seed = 4;
    const auto batch = simulate_rowsum(plan, model, TemperingSpec::conditionally_exponential(1.5, {1.0}));
    const auto cf = empirical_cf(batch, grid);
    const double band = 4 / std::sqrt(double(plan.replicates));
    for (const auto& v : cf.values) {
      CHECK(std::abs(v.imag()) <= band);
      CHECK(std::abs(v) <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("CF distance") {
  const auto grid = default_cf_grid(1);
  SUBCASE("Gaussian draws against their own CF") {
    RandomStream rng(21, 0);
    std::vector<double> x;
    for (int i = 0; i < 50000; ++i) {
      const double r = std::sqrt(-2 * std::log(rng.uniform()));
      const double a = 2 * std::numbers::pi * rng.uniform();
      x.push_back(r * std::cos(a));
      x.push_back(r * std::sin(a));
    }
    const auto cf = empirical_cf(x, 1, grid);
    std::vector<C> theory;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double l = grid.point(i)[0];
      theory.push_back(std::exp(-l * l / 2));
    }
    CHECK(cf_distance(cf, theory).sup_abs <= 0.02);
  }
  SUBCASE("identical inputs") {
    const LevyExponent L(plus_only(), TemperingSpec::conditionally_exponential(1.5, {1.0}),
                         Convention::MeanZero);
    CFGrid exact = grid;
    exact.values.clear();
    for (std::size_t i = 0; i < grid.size(); ++i) exact.values.push_back(std::exp(L(grid.point(i))));
    CHECK(cf_distance(exact, L).sup_abs == 0.0);
  }
  SUBCASE("wrong alpha is detected") {
    const LevyExponent right(plus_only(), TemperingSpec::none(1.5), Convention::MeanZero);
    const LevyExponent wrong(plus_only(), TemperingSpec::none(1.2), Convention::MeanZero);
    CFGrid exact = grid;
    exact.values.clear();
    for (std::size_t i = 0; i < grid.size(); ++i) exact.values.push_back(std::exp(right(grid.point(i))));
    CHECK(cf_distance(exact, wrong).sup_abs >= 0.1);
  }
}

TEST_CASE("vague convergence table") {
  const auto model = JumpModel::exact_pareto(1.0, 1.0, plus_only());
  const auto none = TemperingSpec::none(1.0);
  for (std::uint64_t n : {1000ull, 10000ull}) {
    const auto rows = vague_convergence_table(model, none, n, {{1.0, 2.0, {}}, {1e9, INFINITY, {}}},
                                              1000 * n, 8);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].target == doctest::Approx(0.5));
    CHECK(std::abs(rows[0].estimate - 0.5) <= 4 * rows[0].std_error);
    CHECK_FALSE(rows[0].under_sampled);
    CHECK(rows[1].hits == 0);
    CHECK(rows[1].under_sampled);
  }
  const auto m15 = JumpModel::exact_pareto(1.5, 1.0, two_sided(0.6, 0.4));
  const auto ce = TemperingSpec::conditionally_exponential(1.5, {1.0});
  const auto t = vague_convergence_table(m15, ce, 1000, {{1.0, INFINITY, {0}}}, 2'000'000, 9);
  CHECK(t[0].target == doctest::Approx(0.6 * std::exp(-1.0)));
  CHECK(std::abs(t[0].estimate - t[0].target) <= 4 * t[0].std_error + 0.01 * t[0].target);
}

TEST_CASE("UAN profile") {
  std::vector<double> deltas;
  for (int i = 0; i < 10; ++i) deltas.push_back(0.05 * std::pow(20.0, i / 9.0));
  const auto model = JumpModel::exact_pareto(1.5, 1.0, plus_only());
  const auto prof = uan_profile(model, TemperingSpec::conditionally_exponential(1.5, {1.0}), 10000, deltas);
  CHECK(std::abs(prof.slope - 0.5) <= 0.15);
  for (std::size_t i = 1; i < prof.values.size(); ++i) CHECK(prof.values[i] >= prof.values[i - 1]);

  // Untempered: n v^{-2} E[R^2 1(R <= v δ)] = n v^{-2} α/(2-α) ((vδ)^{2-α} - 1).
  const std::uint64_t n = 1000;
  const auto un = uan_profile(model, TemperingSpec::none(1.5), n, deltas);
  const double v = tempering_threshold(model, n);
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    const double c = v * deltas[i];
    const double exact = c <= 1.0 ? 0.0 : n / (v * v) * 3.0 * (std::pow(c, 0.5) - 1.0);
    CHECK(un.values[i] == doctest::Approx(exact).epsilon(1e-8));
  }
}

TEST_CASE("density inversion") {
  SUBCASE("standard normal") {
    const auto d = density_1d([](double l) { return C(-l * l / 2, 0); }, 0.0, -5.0, 5.0, 201);
    double worst = 0;
    for (std::size_t i = 0; i < d.x.size(); ++i) {
      const double phi = std::exp(-d.x[i] * d.x[i] / 2) / std::sqrt(2 * std::numbers::pi);
      worst = std::max(worst, std::abs(d.density[i] - phi));
    }
    CHECK(worst <= 1e-6);
  }
  SUBCASE("symmetric tempered stable") {
    const LevyExponent L(two_sided(0.5, 0.5), TemperingSpec::conditionally_exponential(1.5, {1.0}),
                         Convention::MeanZero);
    const auto d = density_1d(L, 0.0, -20.0, 20.0, 801);
    CHECK(d.mass_defect <= 1e-4);
    for (std::size_t i = 0; i < d.x.size(); ++i) {
      CHECK(d.density[i] >= 0.0);
      CHECK(std::abs(d.density[i] - d.density[d.x.size() - 1 - i]) <= 1e-6);
    }
    // p(0) = (1/π) ∫_0^∞ e^{ψ(λ)} dλ for a real, even exponent.
    // e^ψ is below 1e-30 beyond λ = 40.
    const double p0 = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
                          [&](double l) { return std::exp(L(l).real()); }, 0.0, 40.0, 15, 1e-12) /
                      std::numbers::pi;
    CHECK(d.density[400] == doctest::Approx(p0).epsilon(1e-6));
  }
  SUBCASE("mean of the skewed law") {
    const auto spec = TemperingSpec::conditionally_exponential(1.5, {1.0});
    const LevyExponent L(plus_only(), spec, Convention::MeanZero);
    const double m = tempered_mean(plus_only(), spec)[0];
    const auto d = density_1d(L, m, -40.0, 40.0, 4001);
    const double dx = d.x[1] - d.x[0];
    double mean = 0;
    for (std::size_t i = 0; i < d.x.size(); ++i) mean += d.x[i] * d.density[i] * dx;
    CHECK(std::abs(mean - m) <= 0.01);
  }
}
