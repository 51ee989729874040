#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace netepi {

using RngEngine = std::mt19937_64;

// SplitMix64 finalizer. Used wherever a derived seed or stream split is
// needed; it is a bijection on 64-bit words.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// All sampling goes through these helpers instead of <random> distributions,
// whose output sequences are implementation-defined. mt19937_64 itself is
// fully specified, so results are reproducible across standard libraries.

// Canonical double in [0,1) from the top 53 bits.
inline double uniform01(RngEngine& eng) { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }

// Uniform double strictly inside (0,1).
inline double uniform_open01(RngEngine& eng) {
  double u;
  do {
    u = uniform01(eng);
  } while (u <= 0.0);
  return u;
}

// Unbiased integer in [0, n). Lemire multiply-shift with rejection.
inline std::uint64_t uniform_below(RngEngine& eng, std::uint64_t n) {
  if (n == 0) return 0;
  while (true) {
    const std::uint64_t x = eng();
    const unsigned __int128 m = static_cast<unsigned __int128>(x) * n;
    const std::uint64_t lo = static_cast<std::uint64_t>(m);
    if (lo >= n || lo >= (0ULL - n) % n) return static_cast<std::uint64_t>(m >> 64);
  }
}

inline bool bernoulli(RngEngine& eng, double p) { return uniform01(eng) < p; }

// Binomial(n, p) as n Bernoulli trials; n is small everywhere we draw.
inline std::int64_t binomial(RngEngine& eng, std::int64_t n, double p) {
  std::int64_t k = 0;
  for (std::int64_t i = 0; i < n; ++i) k += bernoulli(eng, p) ? 1 : 0;
  return k;
}

// Standard normal via the Marsaglia polar method.
inline double gaussian(RngEngine& eng) {
  double u, v, s;
  do {
    u = 2.0 * uniform01(eng) - 1.0;
    v = 2.0 * uniform01(eng) - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  return u * std::sqrt(-2.0 * std::log(s) / s);
}

// Gamma(shape, scale) via Marsaglia-Tsang; the shape < 1 case is boosted
// through Gamma(shape + 1).
inline double gamma_draw(RngEngine& eng, double shape, double scale) {
  if (shape < 1.0) {
    const double u = uniform_open01(eng);
    return gamma_draw(eng, shape + 1.0, scale) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  while (true) {
    double x, v;
    do {
      x = gaussian(eng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform_open01(eng);
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v * scale;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v * scale;
  }
}

}  // namespace netepi
