#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace srvar {

/**
 * Random stream injected into every sampling routine.
 *
 * Wraps a 64-bit Mersenne twister together with the cached state of its normal
 * generator, so copying an Rng copies the full stream position. Nothing in the
 * library keeps a global generator.
 */
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Independent stream derived from (seed, stream) through a seed sequence.
  static Rng substream(std::uint64_t seed, std::uint64_t stream);

  double normal() { return normal_(engine_); }
  /// Uniform on the open interval (0, 1).
  double uniform();
  /// Gamma(shape, 1).
  double gamma(double shape);
  double chi_squared(double dof) { return 2.0 * gamma(0.5 * dof); }
  /// Exponential with the given rate.
  double exponential(double rate) { return -std::log(uniform()) / rate; }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

}  // namespace srvar
