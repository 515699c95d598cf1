#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace rrtplus {

// Seedable random stream. All draws go through the hand-rolled mappings
// below instead of std:: distributions, so a given seed produces the same
// stream on every platform; mt19937_64 itself is pinned by the standard.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform double in [0, 1), 53-bit resolution.
  double u01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + u01() * (hi - lo); }

  // Uniform index in [0, n). Lemire multiply-shift; slight bias is far below
  // anything these benchmarks can detect and the result is reproducible.
  std::size_t index(std::size_t n) {
    return static_cast<std::size_t>(
        (static_cast<unsigned __int128>(next()) * n) >> 64);
  }

  bool chance(double p) { return u01() < p; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[index(i)]);
    }
  }

  // Derives an independent stream seed (splitmix64 finalizer over
  // seed + stream salt). Used to keep sampler/permutation/shortcut
  // entropy separate within one trial.
  static std::uint64_t substream(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace rrtplus
