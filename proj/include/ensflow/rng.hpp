#pragma once

#include <cstdint>
#include <random>

namespace ensflow {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Deterministic generator. Streams fork from the root seed as
/// splitmix64(root ^ splitmix64(stream + 1)), so worker i of a parallel run
/// owns an independent, reproducible sequence. Uniform doubles are built from
/// the top 53 bits of the engine output; no library distribution objects are
/// involved, so identical seeds give identical streams everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : root_(seed), eng_(splitmix64(seed)) {}

  Rng fork(std::uint64_t stream) const { return Rng(splitmix64(root_ ^ splitmix64(stream + 1))); }

  std::uint64_t next() { return eng_(); }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  /// Uniform on [a, b).
  double uniform(double a, double b) { return a + (b - a) * uniform(); }

 private:
  std::uint64_t root_;
  std::mt19937_64 eng_;
};

}  // namespace ensflow
