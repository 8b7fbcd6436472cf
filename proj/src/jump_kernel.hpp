#pragma once

// Packs a jump model and tempering spec into the plain-data kernel parameters.

#include <cstdint>
#include <vector>

#include "tsrw/heavy_tail.hpp"
#include "tsrw/random_stream.hpp"
#include "tsrw/simd/kernels.hpp"
#include "tsrw/tempering.hpp"

namespace tsrw::detail {

class JumpKernel {
 public:
  /// spec == nullptr gives untempered jumps.
  JumpKernel(const JumpModel& model, const TemperingSpec* spec, double v, std::uint64_t seed);
  JumpKernel(const JumpKernel&) = delete;
  JumpKernel& operator=(const JumpKernel&) = delete;

  const simd::JumpKernelParams& params() const noexcept { return p_; }
  int dim() const noexcept { return p_.dim; }
  /// Direction of atom i.
  const double* direction(int atom) const noexcept { return dirs_.data() + atom * p_.dim; }

  /// Jump at the frame containing rng's position (rounded up to a frame
  /// boundary); advances rng past the frame.
  Jump draw(RandomStream& rng) const;

 private:
  simd::JumpKernelParams p_;
  std::vector<double> atom_cum_;
  std::vector<double> dirs_;
  std::vector<double> neg_inv_rate_;
  std::vector<double> comp_cum_;
  std::vector<double> comp_scale_;
};

}  // namespace tsrw::detail
