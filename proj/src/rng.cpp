#include "swb/rng.hpp"

#include <cmath>

namespace swb {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace

Rng::Rng(std::uint64_t seed) : seed_(seed), eng_(splitmix64(seed)) {}

Rng Rng::sub(std::string_view tag) const {
  return Rng(splitmix64(seed_ ^ fnv1a(tag)));
}

double Rng::unit() {
  // 53 random bits, uniform dyadic rational in [0, 1). Implementation
  // independent, unlike std::uniform_real_distribution.
  return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
}

double Rng::range(double lo, double hi) { return lo + (hi - lo) * unit(); }

int Rng::pick(int n) { return static_cast<int>(eng_() % static_cast<std::uint64_t>(n)); }

std::vector<double> Rng::box(int n, double lo, double hi) {
  std::vector<double> v(n);
  for (auto& x : v) x = range(lo, hi);
  return v;
}

std::vector<double> Rng::gaussian(int n) {
  // Box-Muller on our own uniforms keeps the stream implementation defined
  // by this file alone.
  std::vector<double> v(n);
  for (int i = 0; i < n; i += 2) {
    double u1 = unit(), u2 = unit();
    while (u1 <= 1e-300) u1 = unit();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    v[i] = r * std::cos(a);
    if (i + 1 < n) v[i + 1] = r * std::sin(a);
  }
  return v;
}

}  // namespace swb
