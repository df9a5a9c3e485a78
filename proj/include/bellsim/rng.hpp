#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace bellsim {

/// splitmix64 step; the de-facto standard 64-bit seed mixer.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Stream-split rule: worker/chunk k draws its seed from a splitmix64
/// sequence anchored at the base seed, so streams are decorrelated and any
/// chunk is reproducible in isolation.
inline std::uint64_t derive_stream_seed(std::uint64_t base_seed,
                                        std::uint64_t stream_index) {
  std::uint64_t state = base_seed ^ (stream_index * 0xD1B54A32D192ED03ULL);
  std::uint64_t seed = splitmix64_next(state);
  seed ^= splitmix64_next(state);
  return seed;
}

/// Seeded mt19937_64 wrapper. Uniform doubles come straight from the raw
/// engine words with a fixed 53-bit mapping; std::uniform_real_distribution
/// is avoided because its output is not pinned down by the standard.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform double in [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

 private:
  std::mt19937_64 engine_;
};

/// Inverse-CDF draw over probabilities in their given order. Ties at bin
/// boundaries resolve to the lower index; a draw past the accumulated total
/// (floating-point shortfall) lands on the last bin.
inline std::size_t sample_categorical(Rng& rng,
                                      std::span<const double> probs) {
  const double u = rng.uniform();
  double cumulative = 0.0;
  for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
    cumulative += probs[i];
    if (u < cumulative) return i;
  }
  return probs.size() - 1;
}

}  // namespace bellsim
