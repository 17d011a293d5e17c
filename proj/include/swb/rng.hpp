#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace swb {

/// Deterministic random source. Every consumer derives a named substream
/// from the master seed, so adding or reordering checks (or running them on
/// worker threads) never perturbs the numbers another check draws.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  /// Independent stream identified by (this stream, tag).
  Rng sub(std::string_view tag) const;

  /// Uniform in [0, 1).
  double unit();
  /// Uniform in [lo, hi).
  double range(double lo, double hi);
  /// Uniform integer in {0, ..., n-1}.
  int pick(int n);
  /// n independent uniforms in [lo, hi).
  std::vector<double> box(int n, double lo, double hi);
  /// n independent standard normals.
  std::vector<double> gaussian(int n);

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 eng_;
};

}  // namespace swb
