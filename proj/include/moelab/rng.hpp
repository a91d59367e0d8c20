#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace moelab {

// splitmix64 finalizer, used to turn seeds and indices into well-mixed keys.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Seeded random stream with deterministic substream derivation.
///
/// A substream is keyed by (parent key, index) only, never by how many draws
/// the parent has made, so per-trial streams reproduce exactly no matter how
/// trials are scheduled across workers.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : key_(seed), gen_(mix64(seed)) {}

  RngStream substream(std::uint64_t index) const {
    return RngStream(mix64(key_ ^ mix64(index + 0x51ed2701a9e0c53bull)));
  }

  std::uint64_t key() const { return key_; }

  std::uint64_t next_u64() { return gen_(); }

  // uniform double in [0, 1)
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // standard normal via Box-Muller; the spare value is cached
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const auto [c, s] = box_muller();
    spare_ = s;
    have_spare_ = true;
    return c;
  }

  // complex normal with independent N(0,1) real and imaginary parts
  std::complex<double> complex_gaussian() {
    const auto [c, s] = box_muller();
    return {c, s};
  }

 private:
  std::pair<double, double> box_muller() {
    double u1 = uniform();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * 3.14159265358979323846 * uniform();
    return {r * std::cos(phi), r * std::sin(phi)};
  }

  std::uint64_t key_;
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace moelab
