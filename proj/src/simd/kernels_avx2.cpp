// Compiled with -mavx2 only. Avoid inline library templates here: any shared
// inline function instantiated in this TU could be picked by the linker for
// the whole program and then run on CPUs without AVX2.

#include <immintrin.h>

#include <cstddef>
#include <cstdint>

#include "tsrw/simd/kernels.hpp"

extern "C" double sin(double);
extern "C" double cos(double);

namespace {

constexpr int W = 4;

struct V {
  __m256d x;
  V() = default;
  explicit V(double v) : x(_mm256_set1_pd(v)) {}
  explicit V(__m256d v) : x(v) {}
};
struct M {
  __m256d m;
};
struct U {
  __m256i x;
  U() = default;
  explicit U(std::uint64_t v) : x(_mm256_set1_epi64x(static_cast<long long>(v))) {}
  explicit U(__m256i v) : x(v) {}
};

inline V operator+(V a, V b) { return V(_mm256_add_pd(a.x, b.x)); }
inline V operator-(V a, V b) { return V(_mm256_sub_pd(a.x, b.x)); }
inline V operator*(V a, V b) { return V(_mm256_mul_pd(a.x, b.x)); }
inline V operator/(V a, V b) { return V(_mm256_div_pd(a.x, b.x)); }

inline M and_(M a, M b) { return {_mm256_and_pd(a.m, b.m)}; }
inline M or_(M a, M b) { return {_mm256_or_pd(a.m, b.m)}; }
inline M lt(V a, V b) { return {_mm256_cmp_pd(a.x, b.x, _CMP_LT_OQ)}; }
inline M le(V a, V b) { return {_mm256_cmp_pd(a.x, b.x, _CMP_LE_OQ)}; }
inline M gt(V a, V b) { return {_mm256_cmp_pd(a.x, b.x, _CMP_GT_OQ)}; }
inline M ge(V a, V b) { return {_mm256_cmp_pd(a.x, b.x, _CMP_GE_OQ)}; }
inline bool any(M m) { return _mm256_movemask_pd(m.m) != 0; }
inline V select(M m, V t, V f) { return V(_mm256_blendv_pd(f.x, t.x, m.m)); }
inline V vfloor(V a) { return V(_mm256_floor_pd(a.x)); }
inline V vabs(V a) { return V(_mm256_andnot_pd(_mm256_set1_pd(-0.0), a.x)); }

inline U operator&(U a, U b) { return U(_mm256_and_si256(a.x, b.x)); }
inline U operator|(U a, U b) { return U(_mm256_or_si256(a.x, b.x)); }
inline U operator^(U a, U b) { return U(_mm256_xor_si256(a.x, b.x)); }
inline U operator+(U a, U b) { return U(_mm256_add_epi64(a.x, b.x)); }
inline U operator-(U a, U b) { return U(_mm256_sub_epi64(a.x, b.x)); }
inline U operator<<(U a, int n) { return U(_mm256_slli_epi64(a.x, n)); }
inline U operator>>(U a, int n) { return U(_mm256_srli_epi64(a.x, n)); }
inline U mul32(U a, U b) { return U(_mm256_mul_epu32(a.x, b.x)); }

inline U as_bits(V a) { return U(_mm256_castpd_si256(a.x)); }
inline V as_double(U a) { return V(_mm256_castsi256_pd(a.x)); }
inline U lane_iota(std::uint64_t base) {
  const long long b = static_cast<long long>(base);
  return U(_mm256_set_epi64x(b + 3, b + 2, b + 1, b));
}
inline V load_strided(const double* p, std::size_t stride) {
  return V(_mm256_set_pd(p[3 * stride], p[2 * stride], p[stride], p[0]));
}
inline void store(V a, double* out) { _mm256_storeu_pd(out, a.x); }

inline void large_sincos_fixup(V x, M large, V& s, V& c) {
  double xs[4], ss[4], cs[4];
  store(x, xs);
  store(s, ss);
  store(c, cs);
  const int mask = _mm256_movemask_pd(large.m);
  for (int l = 0; l < 4; ++l) {
    if (mask & (1 << l)) {
      ss[l] = ::sin(xs[l]);
      cs[l] = ::cos(xs[l]);
    }
  }
  s = V(_mm256_loadu_pd(ss));
  c = V(_mm256_loadu_pd(cs));
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

namespace tsrw::simd::avx2 {
const KernelTable table{"avx2", &accumulate_rows, &generate_jumps, &cf_sums};
}
