#pragma once

#include <cstdint>
#include <random>

namespace warpconn {

/// Seeded generator with a uniform draw that does not depend on the standard
/// library's distribution implementation, so audits replay bit-for-bit.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in the open interval (lo, hi).
  double uniform(double lo, double hi) {
    const double u = (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }

  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace warpconn
