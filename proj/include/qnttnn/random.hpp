#ifndef QNTTNN_RANDOM_HPP
#define QNTTNN_RANDOM_HPP

#include <cstdint>

#include "qnttnn/tensor.hpp"

namespace qnttnn {

/// SplitMix64 generator (Steele, Lea, Flood 2014). Fully specified so that
/// masks and synthetic data are identical on every platform:
///   state += 0x9E3779B97F4A7C15
///   z = (state ^ (state >> 30)) * 0xBF58476D1CE4E5B9
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   return z ^ (z >> 31)
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

  constexpr std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform on [0, 1) with 53 random bits.
  constexpr double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller; consumes two uniforms per draw.
  double normal();

 private:
  std::uint64_t state_;
};

/// Independent Bernoulli(rate) per quaternion entry, drawn in storage order
/// (i fastest, then j, then k). Throws InvalidArgument unless 0 < rate <= 1.
Mask sample_mask(Index n1, Index n2, Index n3, double rate, std::uint64_t seed);

}  // namespace qnttnn

#endif  // QNTTNN_RANDOM_HPP
