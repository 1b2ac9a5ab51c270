#include "gbmc/rng.hpp"

#include <cmath>

#include "gbmc/error.hpp"

namespace gbmc {

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32), 0x9e3779b9u};
  engine_.seed(seq);
}

std::uint64_t RngStream::below(std::uint64_t n) {
  if (n == 0) throw InvalidArgument("RngStream::below needs n > 0");
  // Lemire-style rejection keeps the result exactly uniform.
  const std::uint64_t limit = (~std::uint64_t{0} / n) * n;
  std::uint64_t r;
  do {
    r = engine_();
  } while (r >= limit);
  return r % n;
}

double RngStream::normal() {
  // Box-Muller; the spare value is discarded to keep draws stateless.
  double u1;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

std::int64_t stochastic_round(double x, RngStream& rng) {
  if (!(x >= 0.0)) throw InvalidArgument("stochastic_round needs x >= 0");
  const double fl = std::floor(x);
  const double frac = x - fl;
  auto n = static_cast<std::int64_t>(fl);
  if (frac > 0.0 && rng.uniform() < frac) ++n;
  return n;
}

}  // namespace gbmc
