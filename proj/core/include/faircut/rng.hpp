#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "faircut/errors.hpp"
#include "faircut/rational.hpp"

namespace faircut {

/// All randomness flows from one master seed through labeled streams, so any
/// reported run can be replayed from (inputs, seed) alone.
constexpr std::uint64_t kFnvOffset = 1469598103934665603ull;
constexpr std::uint64_t kFnvPrime = 1099511628211ull;

constexpr std::uint64_t fnv1a_step(std::uint64_t h, std::uint64_t byte) {
  return (h ^ (byte & 0xff)) * kFnvPrime;
}

inline std::uint64_t derive_seed(std::uint64_t master, std::string_view label,
                                 std::uint64_t index = 0) {
  std::uint64_t h = kFnvOffset;
  for (int i = 0; i < 8; ++i) h = fnv1a_step(h, master >> (8 * i));
  for (char c : label) h = fnv1a_step(h, static_cast<std::uint64_t>(c));
  for (int i = 0; i < 8; ++i) h = fnv1a_step(h, index >> (8 * i));
  return h;
}

/// Uniform integer in [0, bound), bound >= 1, by rejection on raw mt19937_64
/// output. uniform_int_distribution is implementation-defined, so it is not
/// used anywhere in this library.
inline mpz_class uniform_below(const mpz_class& bound, std::mt19937_64& rng) {
  internal_check(bound >= 1, "uniform_below: bound must be >= 1");
  if (bound == 1) return 0;
  const std::size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
  const std::size_t words = (bits + 63) / 64;
  const mpz_class mask = (mpz_class(1) << bits) - 1;
  while (true) {
    mpz_class draw = 0;
    for (std::size_t w = 0; w < words; ++w) {
      const std::uint64_t word = rng();
      draw <<= 64;
      mpz_class chunk(static_cast<unsigned long>(word >> 32));
      chunk <<= 32;
      chunk += static_cast<unsigned long>(word & 0xffffffffull);
      draw += chunk;
    }
    draw &= mask;
    if (draw < bound) return draw;
  }
}

/// Exact Bernoulli(p) for rational p in [0,1].
inline bool bernoulli_exact(const Rat& p, std::mt19937_64& rng) {
  internal_check(p >= 0 && p <= 1, "bernoulli_exact: p outside [0,1]");
  if (p == 0) return false;
  if (p == 1) return true;
  mpz_class draw = uniform_below(mpz_class(p.get_den()), rng);
  return draw < p.get_num();
}

}  // namespace faircut
