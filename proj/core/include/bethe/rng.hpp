#pragma once

#include <cstdint>

namespace bethe {

// All seeded randomness in the library goes through splitmix64, either as a
// sequential stream or as a stateless counter lookup.  Pure integer ops, so
// streams are identical across platforms.  Outputs that record provenance
// should carry kRngId.
inline constexpr char kRngId[] = "splitmix64";

inline std::uint64_t splitmix64_finalize(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// n-th value of the stream started at `seed`, without materializing a state.
inline std::uint64_t splitmix64_at(std::uint64_t seed, std::uint64_t n) {
  return splitmix64_finalize(seed + (n + 1) * 0x9e3779b97f4a7c15ull);
}

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ull;
    return splitmix64_finalize(state_);
  }

  // uniform in [0, 1), 53-bit mantissa
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // uniform-ish choice in [0, n); fixed-point scaling, deterministic
  std::uint64_t next_below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * n) >> 64);
  }

 private:
  std::uint64_t state_;
};

}  // namespace bethe
