#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace topo {

/// Deterministic random source.
///
/// Uniform variates come from std::mt19937_64 (the Mersenne Twister with the
/// standard-mandated parameters, so its output stream is bit-identical on
/// every conforming platform).  Normal variates are produced by an explicit
/// Box-Muller transform written out here, because std::normal_distribution
/// is implementation-defined and would make runs irreproducible across
/// standard libraries.  Given the same seed this class emits the same
/// sequence of doubles everywhere.
class NormalRng {
 public:
  explicit NormalRng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller; generates pairs, caches the spare.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    // u1 in (0,1] so log is finite; u2 in [0,1).
    double u1 = 1.0 - uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;  // 2*pi
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace topo
