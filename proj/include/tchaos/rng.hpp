#pragma once
#include <array>
#include <cstdint>

namespace tchaos {

// Philox4x32-10 (Salmon et al. 2011). Counter-based: output is a pure function
// of (counter, key), so any stream position can be generated independently.
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key);

// Stream keyed by (seed, index, tag). Draws consume consecutive blocks.
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t index, std::uint32_t tag = 0);

  std::uint32_t next_u32();
  std::uint64_t next_u64();
  // Uniform in the open interval (0,1), 53-bit resolution.
  double uniform();
  double normal();

 private:
  void refill();

  PhiloxKey key_;
  std::uint64_t index_;
  std::uint32_t tag_;
  std::uint32_t block_ = 0;
  PhiloxCounter buf_{};
  int pos_ = 4;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Tags separating independent uses of one (seed, index) pair.
namespace stream_tag {
inline constexpr std::uint32_t field = 1;
inline constexpr std::uint32_t bootstrap = 2;
inline constexpr std::uint32_t points = 3;
inline constexpr std::uint32_t mc = 4;
inline constexpr std::uint32_t model = 5;
}  // namespace stream_tag

}  // namespace tchaos
