#pragma once

#include <bit>
#include <cstdint>
#include <string_view>

namespace twonorm {

/// SplitMix64; small, fully specified and identical on every platform, which
/// the seeded generators and per-trial sub-seeds rely on.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  /// Uniform on [0, 1).
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [lo, hi].
  int uniform_int(int lo, int hi) noexcept {
    return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }

 private:
  std::uint64_t state_;
};

inline std::uint64_t mix_seed(std::uint64_t h, std::uint64_t v) noexcept {
  SplitMix64 g(h ^ (v + 0x632be59bd9b4e019ULL + (h << 6) + (h >> 2)));
  return g.next();
}

inline std::uint64_t mix_seed_real(std::uint64_t h, double v) noexcept {
  return mix_seed(h, std::bit_cast<std::uint64_t>(v));
}

inline std::uint64_t mix_seed_str(std::uint64_t h, std::string_view s) noexcept {
  std::uint64_t f = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    f ^= c;
    f *= 0x100000001b3ULL;
  }
  return mix_seed(h, f);
}

}  // namespace twonorm
