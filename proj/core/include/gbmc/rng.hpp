#pragma once

#include <cstdint>
#include <random>

namespace gbmc {

/// Reproducible random stream. Identical (seed, stream) pairs give identical
/// sequences on one platform; distinct streams are statistically independent.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed = 0, std::uint64_t stream = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  bool bernoulli(double p) { return uniform() < p; }
  /// Uniform integer in [0, n); n must be positive.
  std::uint64_t below(std::uint64_t n);
  double normal();

  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
};

/// floor(x) + Bernoulli(frac(x)). Integer inputs consume no random draw.
std::int64_t stochastic_round(double x, RngStream& rng);

}  // namespace gbmc
