#pragma once

// Batch kernels for the hot loops: tempered jump generation / row summation and
// empirical characteristic-function sums. Each kernel exists as a scalar
// reference and as SIMD variants selected at runtime. The jump kernels of every
// variant execute the same IEEE operation sequence per lane, so their outputs
// are bit-identical; the CF kernels differ only in summation order.
//
// The structs below are the plain-data ABI shared by all variants.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

namespace tsrw::simd {

/// Maximum dimension d handled by the batch kernels.
inline constexpr int kMaxDim = 16;

enum class TemperKind : int {
  None = 0,         // Y = H
  Exponential = 1,  // T = -log(U) / λ_s
  Generic = 2,      // T from an inverse-survival callback (scalar path only)
};

/// Per-jump uniforms come from one Philox stream as four consecutive slots:
/// radius, direction, radial component, tempering variable (blocks 2j, 2j+1).
struct JumpKernelParams {
  std::uint64_t seed = 0;
  int dim = 1;
  int n_atoms = 1;
  const double* atom_cum = nullptr;      // n_atoms, last entry exactly 1
  const double* atom_dirs = nullptr;     // n_atoms * dim
  const double* atom_neg_inv_rate = nullptr;  // n_atoms; -1/λ_s
  int n_components = 1;
  const double* comp_cum = nullptr;      // n_components, last entry exactly 1
  const double* comp_scale = nullptr;    // n_components; Pareto scale x_k
  double neg_inv_alpha = -1.0;
  double v = 1.0;                        // truncation threshold v_n
  TemperKind kind = TemperKind::None;
  double (*inverse_survival)(const void* ctx, double survival, int atom) = nullptr;
  const void* ctx = nullptr;
};

/// Raw row sums for replicates [first_stream, first_stream + count): replicate
/// r reads stream r. out[(i * n_checkpoints + c) * dim + k] is coordinate k of
/// the sum of the first checkpoints[c] jumps of replicate first_stream + i.
struct RowSumTask {
  std::uint64_t first_stream = 0;
  std::uint64_t count = 0;
  std::uint64_t n_checkpoints = 0;
  const std::uint64_t* checkpoints = nullptr;  // non-decreasing
  double* out = nullptr;
};

/// Single jumps [first_jump, first_jump + count) of one stream: truncated
/// radius and atom index.
struct JumpBatchTask {
  std::uint64_t stream = 0;
  std::uint64_t first_jump = 0;
  std::uint64_t count = 0;
  double* radius = nullptr;
  std::int32_t* atom = nullptr;
};

/// Σ_rows cos<λ, x>, Σ_rows sin<λ, x> for each λ (row-major inputs).
struct CfTask {
  const double* samples = nullptr;  // rows * dim
  std::size_t rows = 0;
  int dim = 1;
  const double* lambdas = nullptr;  // n_lambda * dim
  std::size_t n_lambda = 0;
  double* cos_sum = nullptr;
  double* sin_sum = nullptr;
};

struct KernelTable {
  const char* name;
  void (*accumulate_rows)(const JumpKernelParams&, const RowSumTask&);
  void (*generate_jumps)(const JumpKernelParams&, const JumpBatchTask&);
  void (*cf_sums)(const CfTask&);
};

enum class Isa { Scalar, Avx2 };

std::string to_string(Isa isa);

/// Compiled in and supported by the running CPU.
bool isa_available(Isa isa);

/// Best available ISA unless overridden (set_isa_override, or the environment
/// variable TSRW_SIMD=scalar|avx2).
Isa active_isa();

void set_isa_override(std::optional<Isa> isa);

const KernelTable& kernels(Isa isa);
inline const KernelTable& active_kernels() { return kernels(active_isa()); }

/// Scalar reference math used by the jump kernels, exported for tests.
double ref_log(double x);
double ref_exp(double x);
void ref_sincos(double x, double& s, double& c);

namespace scalar {
extern const KernelTable table;
}
#if defined(TSRW_BUILD_AVX2)
namespace avx2 {
extern const KernelTable table;
}
#endif

}  // namespace tsrw::simd
