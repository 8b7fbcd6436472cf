#pragma once

#include <array>
#include <bit>
#include <cstdint>

namespace tsrw {

/// Philox4x32-10 counter-based generator. A block is a
/// pure function of (counter, key), so any position of any stream can be
/// computed independently of every other.
using PhiloxBlock = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

inline constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
inline constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
inline constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
inline constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

constexpr PhiloxBlock philox4x32_10(PhiloxBlock ctr, PhiloxKey key) noexcept {
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = std::uint64_t{kPhiloxM0} * ctr[0];
    const std::uint64_t p1 = std::uint64_t{kPhiloxM1} * ctr[2];
    ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
           static_cast<std::uint32_t>(p1),
           static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
           static_cast<std::uint32_t>(p0)};
    key[0] += kPhiloxW0;
    key[1] += kPhiloxW1;
  }
  return ctr;
}

/// Maps 64 random bits to a double in the open interval (0, 1): the top 52 bits
/// become the mantissa of a number in [1, 2), then the half-ulp offset 2^-53
/// keeps the result away from 0. Exact in every step.
inline double bits_to_open_uniform(std::uint64_t bits) noexcept {
  const double one_to_two = std::bit_cast<double>((bits >> 12) | 0x3FF0000000000000ull);
  return (one_to_two - 1.0) + 0x1p-53;
}

/// Counter layout shared with the batch kernels: word 0/1 hold the block index,
/// word 2/3 the stream id; the key is the 64-bit seed.
inline PhiloxBlock stream_block(std::uint64_t seed, std::uint64_t stream,
                                std::uint64_t block) noexcept {
  return philox4x32_10(
      {static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32),
       static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)},
      {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)});
}

/// Sequential view of one Philox stream. Each block yields two uniforms; the
/// position is counted in uniforms so callers can align to block boundaries.
///
/// A stream is owned by one worker at a time; copies are independent cursors
/// over the same underlying sequence.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream_id, std::uint64_t position = 0)
      : seed_(seed), stream_(stream_id), position_(position) {}

  double uniform() noexcept {
    const std::uint64_t block = position_ >> 1;
    if (block != cached_block_ || !has_cache_) {
      cached_ = stream_block(seed_, stream_, block);
      cached_block_ = block;
      has_cache_ = true;
    }
    const unsigned half = static_cast<unsigned>(position_ & 1u) * 2;
    ++position_;
    return bits_to_open_uniform(std::uint64_t{cached_[half]} |
                                (std::uint64_t{cached_[half + 1]} << 32));
  }

  void skip(std::uint64_t uniforms) noexcept { position_ += uniforms; }

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_; }
  std::uint64_t position() const noexcept { return position_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t position_;
  PhiloxBlock cached_{};
  std::uint64_t cached_block_ = 0;
  bool has_cache_ = false;
};

/// Uniforms consumed per tempered jump, in slot order: radius, direction,
/// radial-mixture component, tempering variable. Jump j of a stream occupies
/// uniforms [4j, 4j+4), i.e. blocks 2j and 2j+1.
inline constexpr std::uint64_t kUniformsPerJump = 4;

}  // namespace tsrw
