#pragma once

#include <array>
#include <cstdint>

namespace rmt {

// Descriptor of a reproducible random stream.
struct RngStream {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
  bool operator==(const RngStream&) const = default;
};

// The Philox4x32-10 bijection on one 128-bit counter block.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key);

// Philox4x32-10 counter-based generator. The 128-bit counter is laid out as
// (block, chunk, stream_lo, stream_hi) so every (seed, stream, chunk) triple
// owns 2^32 blocks of 4 words. Output depends only on integer arithmetic, so
// sequences are identical across platforms.
class Philox {
 public:
  Philox(RngStream s, std::uint32_t chunk = 0);

  std::uint32_t next_u32();
  std::uint64_t next_u64();
  // Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform();
  // Standard normal via Box-Muller (own implementation, not std::normal_distribution,
  // whose algorithm is implementation-defined).
  double normal();

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> ctr_;
  std::array<std::uint32_t, 4> buf_{};
  int pos_ = 4;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace rmt
