#include "conch/rng.hpp"

#include <bit>
#include <cmath>
#include <numbers>

namespace conch {

namespace {

std::uint32_t lo32(std::uint64_t v) { return static_cast<std::uint32_t>(v); }
std::uint32_t hi32(std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); }

}  // namespace

Rng::Rng(std::uint64_t seed) {
  std::seed_seq seq{lo32(seed), hi32(seed)};
  engine_.seed(seq);
}

Rng::Rng(std::seed_seq& seq) : engine_(seq) {}

Rng Rng::stream(std::uint64_t seed, std::uint64_t index) {
  // The trailing tag keeps stream seeds disjoint from the two-word seeds above.
  std::seed_seq seq{lo32(seed), hi32(seed), lo32(index), hi32(index), 0x5eedu};
  return Rng(seq);
}

double Rng::uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::uint64_t Rng::below(std::uint64_t n) {
  if (n <= 1) return 0;
  // Mask-and-reject: unbiased, at most two draws expected.
  const std::uint64_t mask = ~std::uint64_t{0} >> std::countl_zero(n - 1);
  while (true) {
    std::uint64_t v = engine_() & mask;
    if (v < n) return v;
  }
}

Integer Rng::below(const Integer& n) {
  if (n <= 1) return 0;
  if (n <= std::numeric_limits<std::uint64_t>::max()) return Integer(below(n.convert_to<std::uint64_t>()));
  const Integer top = n - 1;
  const std::size_t bits = boost::multiprecision::msb(top) + 1;
  while (true) {
    Integer v = 0;
    std::size_t have = 0;
    while (have < bits) {
      v <<= 64;
      v |= engine_();
      have += 64;
    }
    v >>= (have - bits);
    if (v < n) return v;
  }
}

double Rng::normal(double mean, double stdev) {
  const double u1 = 1.0 - uniform01();  // (0, 1]
  const double u2 = uniform01();
  const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  return mean + stdev * z;
}

bool Rng::flip(double p) { return uniform01() < p; }

}  // namespace conch
