#include "srvar/random.hpp"

#include <cmath>

namespace srvar {

Rng Rng::substream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  Rng rng(0);
  rng.engine_.seed(seq);
  return rng;
}

double Rng::uniform() {
  // 53 random bits shifted by half a unit: never exactly 0 or 1.
  const std::uint64_t bits = engine_() >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double Rng::gamma(double shape) {
  std::gamma_distribution<double> dist(shape, 1.0);
  return dist(engine_);
}

}  // namespace srvar
