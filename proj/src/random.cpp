#include "qnttnn/random.hpp"

#include <cmath>
#include <numbers>

#include "qnttnn/errors.hpp"

namespace qnttnn {

double SplitMix64::normal() {
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Mask sample_mask(Index n1, Index n2, Index n3, double rate, std::uint64_t seed) {
  if (!(rate > 0.0 && rate <= 1.0)) {
    throw InvalidArgument("sample_mask: rate must lie in (0, 1]");
  }
  Mask mask(n1, n2, n3);
  SplitMix64 rng(seed);
  for (Index k = 0; k < n3; ++k)
    for (Index j = 0; j < n2; ++j)
      for (Index i = 0; i < n1; ++i) mask.set(i, j, k, rng.uniform() < rate);
  return mask;
}

}  // namespace qnttnn
