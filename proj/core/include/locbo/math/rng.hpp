#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

#include "locbo/math/normal.hpp"

namespace locbo::math {

/// Deterministic random stream. All draws are produced through explicit
/// bit-level mappings so that a given seed yields the same sequence on
/// every platform and standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Independent stream derived from a base seed and a path of indices,
  /// e.g. substream(seed, {round, candidate}).
  static Rng substream(std::uint64_t base, std::initializer_list<std::uint64_t> path) {
    std::uint64_t s = splitmix(base ^ 0x9e3779b97f4a7c15ull);
    for (std::uint64_t p : path) s = splitmix(s ^ splitmix(p + 0x632be59bd9b4e019ull));
    return Rng(s);
  }

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform draw in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform draw in (0, 1), safe for inverse-c.d.f. transforms.
  double uniform_open() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal draw via the inverse c.d.f.
  double normal() { return norm_quantile(uniform_open()); }

 private:
  static std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
  }

  std::mt19937_64 gen_;
};

}  // namespace locbo::math
