#include <cmath>
#include <cstdint>
#include <cstring>

#include "tsrw/simd/kernels.hpp"

namespace {

constexpr int W = 1;

struct V {
  double x;
  V() = default;
  explicit V(double v) : x(v) {}
};
struct M {
  bool b;
};
struct U {
  std::uint64_t x;
  U() = default;
  explicit U(std::uint64_t v) : x(v) {}
};

inline V operator+(V a, V b) { return V(a.x + b.x); }
inline V operator-(V a, V b) { return V(a.x - b.x); }
inline V operator*(V a, V b) { return V(a.x * b.x); }
inline V operator/(V a, V b) { return V(a.x / b.x); }

inline M and_(M a, M b) { return {a.b && b.b}; }
inline M or_(M a, M b) { return {a.b || b.b}; }
inline M lt(V a, V b) { return {a.x < b.x}; }
inline M le(V a, V b) { return {a.x <= b.x}; }
inline M gt(V a, V b) { return {a.x > b.x}; }
inline M ge(V a, V b) { return {a.x >= b.x}; }
inline bool any(M m) { return m.b; }
inline V select(M m, V t, V f) { return m.b ? t : f; }
inline V vfloor(V a) { return V(std::floor(a.x)); }
inline V vabs(V a) { return V(std::fabs(a.x)); }

inline U operator&(U a, U b) { return U(a.x & b.x); }
inline U operator|(U a, U b) { return U(a.x | b.x); }
inline U operator^(U a, U b) { return U(a.x ^ b.x); }
inline U operator+(U a, U b) { return U(a.x + b.x); }
inline U operator-(U a, U b) { return U(a.x - b.x); }
inline U operator<<(U a, int n) { return U(a.x << n); }
inline U operator>>(U a, int n) { return U(a.x >> n); }
inline U mul32(U a, U b) { return U((a.x & 0xFFFFFFFFull) * (b.x & 0xFFFFFFFFull)); }

inline U as_bits(V a) {
  std::uint64_t u;
  std::memcpy(&u, &a.x, sizeof u);
  return U(u);
}
inline V as_double(U a) {
  double d;
  std::memcpy(&d, &a.x, sizeof d);
  return V(d);
}
inline U lane_iota(std::uint64_t base) { return U(base); }
inline V load_strided(const double* p, std::size_t) { return V(p[0]); }
inline void store(V a, double* out) { out[0] = a.x; }

inline void large_sincos_fixup(V x, M, V& s, V& c) {
  s = V(std::sin(x.x));
  c = V(std::cos(x.x));
}

#include "vecmath.inl"

void accumulate_rows(const tsrw::simd::JumpKernelParams& p, const tsrw::simd::RowSumTask& t) {
  accumulate_rows_body(p, t);
}
void generate_jumps(const tsrw::simd::JumpKernelParams& p, const tsrw::simd::JumpBatchTask& t) {
  generate_jumps_body(p, t);
}
void cf_sums(const tsrw::simd::CfTask& t) { cf_sums_body(t); }

}  // namespace

namespace tsrw::simd {

double ref_log(double x) { return vlog(V(x)).x; }
double ref_exp(double x) { return vexp(V(x)).x; }
void ref_sincos(double x, double& s, double& c) {
  V sv, cv;
  vsincos(V(x), sv, cv);
  s = sv.x;
  c = cv.x;
}

namespace scalar {
const KernelTable table{"scalar", &accumulate_rows, &generate_jumps, &cf_sums};
}

}  // namespace tsrw::simd
