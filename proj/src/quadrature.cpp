#include "tsrw/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <queue>
#include <string>
#include <vector>

#include "tsrw/error.hpp"

namespace tsrw {

void QuadratureSettings::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) {
    throw ConfigError("quadrature_invalid", "quadrature tolerances must be positive");
  }
  if (max_subdivisions < 10) {
    throw ConfigError("quadrature_invalid", "max_subdivisions must be at least 10");
  }
}

namespace {

// QUADPACK qk21 abscissae and weights; Gauss weights pair with odd indices.
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208980534606, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

template <class T>
struct Segment {
  double a;
  double b;
  T value;
  double error;
};

template <class T, class F>
Segment<T> gk21(const F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const T fc = f(center);
  T kronrod = fc * kWgk[10];
  T gauss{};
  for (int j = 0; j < 10; ++j) {
    const double dx = half * kXgk[j];
    const T f1 = f(center - dx);
    const T f2 = f(center + dx);
    kronrod += (f1 + f2) * kWgk[j];
    if (j % 2 == 1) gauss += (f1 + f2) * kWg[j / 2];
  }
  kronrod *= half;
  gauss *= half;
  return {a, b, kronrod, std::abs(kronrod - gauss)};
}

template <class T, class F>
QuadResult<T> adaptive(const F& f, double a, double b, const QuadratureSettings& s) {
  if (a == b) return {};
  if (a > b) {
    auto r = adaptive<T>(f, b, a, s);
    r.value = -r.value;
    return r;
  }
  auto by_error = [](const Segment<T>& x, const Segment<T>& y) { return x.error < y.error; };
  std::priority_queue<Segment<T>, std::vector<Segment<T>>, decltype(by_error)> heap(by_error);
  std::vector<Segment<T>> frozen;  // too narrow to split further

  Segment<T> first = gk21<T>(f, a, b);
  T total = first.value;
  double total_err = first.error;
  heap.push(first);
  int evaluations = 21;
  int subdivisions = 1;

  auto converged = [&] { return total_err <= std::max(s.abs_tol, s.rel_tol * std::abs(total)); };
  while (!converged() && subdivisions < s.max_subdivisions && !heap.empty()) {
    Segment<T> worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b) ||
        (worst.b - worst.a) < 1e-14 * std::max(std::abs(worst.a), std::abs(worst.b))) {
      frozen.push_back(worst);
      continue;
    }
    Segment<T> left = gk21<T>(f, worst.a, mid);
    Segment<T> right = gk21<T>(f, mid, worst.b);
    evaluations += 42;
    ++subdivisions;
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }

  // Re-sum to shed the drift of the incremental updates.
  T value{};
  double err = 0.0;
  for (const auto& seg : frozen) {
    value += seg.value;
    err += seg.error;
  }
  while (!heap.empty()) {
    value += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  if (!std::isfinite(std::abs(value))) {
    throw NumericError("quadrature produced a non-finite value", err);
  }
  if (err > std::max(s.abs_tol, s.rel_tol * std::abs(value))) {
    throw NumericError("adaptive quadrature did not converge on [" + std::to_string(a) + ", " +
                           std::to_string(b) + "], error estimate " + std::to_string(err),
                       err);
  }
  return {value, err, evaluations};
}

// exp(y) overflows beyond this; every integrand routed through the log map
// decays at least like a power, so the cut-off region contributes nothing.
constexpr double kMaxLogRadius = 700.0;

template <class T, class F>
QuadResult<T> from_zero(const F& f, double b, double leading_exponent,
                        const QuadratureSettings& s) {
  if (!(leading_exponent > -1.0)) {
    throw DomainError("non_integrable", "integrand is not integrable at 0");
  }
  const double m = 2.0 / (leading_exponent + 1.0);
  auto g = [&](double t) -> T {
    if (t <= 0.0) return T{};
    const double tm1 = std::pow(t, m - 1.0);
    return f(b * tm1 * t) * (b * m * tm1);
  };
  return adaptive<T>(g, 0.0, 1.0, s);
}

template <class T>
T wynn_epsilon(const std::vector<T>& sums) {
  constexpr std::size_t kWindow = 30;
  const std::size_t start = sums.size() > kWindow ? sums.size() - kWindow : 0;
  std::vector<T> prev(sums.size() - start, T{});
  std::vector<T> cur(sums.begin() + static_cast<std::ptrdiff_t>(start), sums.end());
  T best = cur.back();
  for (std::size_t k = 1; cur.size() > 1; ++k) {
    std::vector<T> next(cur.size() - 1);
    for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
      const T diff = cur[i + 1] - cur[i];
      if (std::abs(diff) == 0.0) return best;
      next[i] = prev[i + 1] + T{1.0} / diff;
    }
    if (k % 2 == 0) best = next.back();
    prev = std::move(cur);
    cur = std::move(next);
  }
  return best;
}

}  // namespace

QuadResult<double> integrate(const RealFn& f, double a, double b, const QuadratureSettings& s) {
  return adaptive<double>(f, a, b, s);
}

QuadResult<std::complex<double>> integrate(const ComplexFn& f, double a, double b,
                                           const QuadratureSettings& s) {
  return adaptive<std::complex<double>>(f, a, b, s);
}

QuadResult<double> integrate_to_infinity(const RealFn& f, double a, const QuadratureSettings& s) {
  if (!(a > 0.0)) throw DomainError("domain", "integrate_to_infinity needs a > 0");
  auto g = [&](double t) -> double {
    if (t >= 1.0) return 0.0;
    const double one_minus = 1.0 - t;
    const double y = t / one_minus;
    if (y > kMaxLogRadius) return 0.0;
    const double r = a * std::exp(y);
    const double fr = f(r);
    if (fr == 0.0) return 0.0;
    return fr * r / (one_minus * one_minus);
  };
  return adaptive<double>(g, 0.0, 1.0, s);
}

QuadResult<double> integrate_log(const RealFn& f, double a, double b, const QuadratureSettings& s) {
  if (!(a > 0.0) || !(b >= a)) throw DomainError("domain", "integrate_log needs 0 < a <= b");
  auto g = [&](double y) {
    const double r = std::exp(y);
    return f(r) * r;
  };
  return adaptive<double>(g, std::log(a), std::log(b), s);
}

QuadResult<double> integrate_from_zero(const RealFn& f, double b, double leading_exponent,
                                       const QuadratureSettings& s) {
  return from_zero<double>(f, b, leading_exponent, s);
}

QuadResult<std::complex<double>> integrate_from_zero(const ComplexFn& f, double b,
                                                     double leading_exponent,
                                                     const QuadratureSettings& s) {
  return from_zero<std::complex<double>>(f, b, leading_exponent, s);
}

QuadResult<std::complex<double>> fourier_tail(const RealFn& amplitude, double theta, double a,
                                              const QuadratureSettings& s) {
  using C = std::complex<double>;
  if (theta == 0.0) throw DomainError("domain", "fourier_tail needs theta != 0");
  constexpr int kMaxPieces = 4000;
  const double period = std::numbers::pi / std::abs(theta);
  QuadratureSettings piece_settings = s;
  piece_settings.abs_tol = s.abs_tol / 50.0;

  auto integrand = [&](double r) -> C {
    const double amp = amplitude(r);
    return amp == 0.0 ? C{} : C{std::cos(theta * r), std::sin(theta * r)} * amp;
  };

  std::vector<C> sums;
  C total{};
  double piece_err = 0.0;
  int evaluations = 0;
  C last_est{};
  C prev_est{};
  int settled = 0;
  for (int k = 0; k < kMaxPieces; ++k) {
    const double lo = a + k * period;
    const double hi = lo + period;
    // At low frequency a piece can be far wider than the scale on which the
    // amplitude decays; geometric sub-pieces keep the mass near lo resolved.
    double sub_lo = lo;
    while (sub_lo < hi) {
      const double sub_hi = (sub_lo > 0.0 && hi > 2.0 * sub_lo) ? 2.0 * sub_lo : hi;
      const auto piece = adaptive<C>(integrand, sub_lo, sub_hi, piece_settings);
      total += piece.value;
      piece_err += piece.error;
      evaluations += piece.evaluations;
      sub_lo = sub_hi;
    }
    sums.push_back(total);

    const double target = 0.5 * std::max(s.abs_tol, s.rel_tol * std::abs(total));
    const double tail_bound = 2.0 * std::numbers::sqrt2 * amplitude(hi) / std::abs(theta);
    if (tail_bound <= target) return {total, tail_bound + piece_err, evaluations};

    if (sums.size() >= 4) {
      const C est = wynn_epsilon(sums);
      if (sums.size() >= 6 && std::abs(est - last_est) <= target &&
          std::abs(last_est - prev_est) <= target) {
        if (++settled >= 2) return {est, std::abs(est - last_est) + piece_err, evaluations};
      } else {
        settled = 0;
      }
      prev_est = last_est;
      last_est = est;
    }
  }
  throw NumericError("oscillatory tail integral did not settle", std::abs(last_est - prev_est));
}

}  // namespace tsrw
