#include <atomic>
#include <cstdlib>
#include <cstring>

#include "tsrw/error.hpp"
#include "tsrw/simd/kernels.hpp"

namespace tsrw::simd {

namespace {

// -1: none, otherwise static_cast<int>(Isa).
std::atomic<int> g_override{-1};

Isa best_available() {
  if (isa_available(Isa::Avx2)) return Isa::Avx2;
  return Isa::Scalar;
}

Isa from_environment() {
  const char* env = std::getenv("TSRW_SIMD");
  if (!env || !*env) return best_available();
  if (std::strcmp(env, "scalar") == 0) return Isa::Scalar;
  if (std::strcmp(env, "avx2") == 0 && isa_available(Isa::Avx2)) return Isa::Avx2;
  return best_available();
}

}  // namespace

std::string to_string(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
  }
  return "unknown";
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2:
#if defined(TSRW_BUILD_AVX2)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
  }
  return false;
}

Isa active_isa() {
  const int o = g_override.load(std::memory_order_relaxed);
  if (o >= 0) return static_cast<Isa>(o);
  static const Isa chosen = from_environment();
  return chosen;
}

void set_isa_override(std::optional<Isa> isa) {
  if (isa && !isa_available(*isa)) {
    throw ConfigError("isa_unavailable", "instruction set " + to_string(*isa) + " is not available");
  }
  g_override.store(isa ? static_cast<int>(*isa) : -1, std::memory_order_relaxed);
}

const KernelTable& kernels(Isa isa) {
#if defined(TSRW_BUILD_AVX2)
  if (isa == Isa::Avx2 && isa_available(Isa::Avx2)) return avx2::table;
#endif
  (void)isa;
  return scalar::table;
}

}  // namespace tsrw::simd
