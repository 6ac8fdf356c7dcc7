#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace rtgq {

// SplitMix64 finalizer. Used only to derive seeds, never as a draw source.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed of child `index` under `master`. Sweep points and replications use this.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return mix64(mix64(master) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

// Named simulator streams. Each stream owns its own engine so that drawing
// from one never shifts another.
enum class Stream : std::uint64_t {
  Arrivals = 1,
  Services = 2,
  Retrials = 3,
  TieBreaks = 4,
};

// A deterministic random source: mt19937_64 plus hand-written conversions, so
// the draw sequence does not depend on the standard library's distributions.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : engine_(seed) {}
  RandomSource(std::uint64_t master, Stream stream)
      : engine_(derive_seed(master, static_cast<std::uint64_t>(stream))) {}

  // Uniform on (0, 1]; never returns 0 so -log(u) is finite.
  double uniform_open0() noexcept {
    return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
  }

  // Uniform on [0, 1).
  double uniform() noexcept { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double exponential(double rate) noexcept { return -std::log(uniform_open0()) / rate; }

  // Uniform integer in [0, n), unbiased by rejection.
  std::uint64_t below(std::uint64_t n) noexcept {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace rtgq
