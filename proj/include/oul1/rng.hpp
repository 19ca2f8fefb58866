#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "oul1/types.hpp"

namespace oul1 {

/// Addresses one independent random stream. Streams with distinct indices under
/// the same root seed are independent; the mapping to generator state is
/// injective for a fixed root.
struct SeedSpec {
  std::uint64_t root_seed = 0;
  std::uint64_t stream_index = 0;

  SeedSpec with_stream(std::uint64_t stream) const { return SeedSpec{root_seed, stream}; }
};

/// Derive a decorrelated root for auxiliary draws (for example the sup-mean
/// estimation inside an experiment) so they never collide with replicate streams.
inline std::uint64_t derived_root(std::uint64_t root_seed, std::uint64_t salt) {
  std::uint64_t z = root_seed + 0x9E3779B97F4A7C15ull * (salt + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Deterministic standard-normal stream. mt19937_64 plus an explicit
/// Box-Muller keeps the byte stream identical across standard libraries
/// (std::normal_distribution is implementation-defined).
class NormalStream {
 public:
  explicit NormalStream(SeedSpec seed)
      : engine_(derived_root(seed.root_seed, seed.stream_index)) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
    const double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;          // [0, 1)
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  Vector draw(Index count) {
    Vector z(count);
    for (Index i = 0; i < count; ++i) z[i] = next();
    return z;
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace oul1
