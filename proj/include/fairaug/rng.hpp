#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace fairaug {

// Name recorded in run configs; changing the generator or the draw order
// changes every augmented file, so it is part of the output contract.
inline constexpr std::string_view kRngName = "philox4x32-10";

// Philox4x32 with 10 rounds (Salmon et al., Random123).
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

// Stage tags keep the draws of different pipeline stages independent.
enum class RngStage : std::uint32_t {
  params = 1,
  occlusion = 2,
  noise = 3,
  fixture = 4,
};

// Deterministic stream keyed by (master_seed, sample_index, stage). The
// key is the 64-bit seed; the counter holds (block, stage, index lo, index
// hi). Draws depend on nothing else, so samples can be processed in any
// order on any number of threads.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t sample_index, RngStage stage);

  std::uint32_t next_u32();
  std::uint64_t next_u64();
  // Uniform in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Integer in [0, n), n >= 1, by rejection (no modulo bias).
  std::uint32_t below(std::uint32_t n);
  bool bernoulli(double p) { return uniform() < p; }
  // Standard normal via Box-Muller; values are produced in pairs.
  double normal();

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> counter_;
  std::array<std::uint32_t, 4> block_{};
  int used_ = 4;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace fairaug
