#pragma once

#include <cstdint>
#include <random>

#include "sympca/matrix.hpp"

namespace sympca {

/// Seedable random source. The engine is std::mt19937_64 (a fully specified
/// generator) and the uniform/normal mappings are implemented here rather
/// than with std::*_distribution, whose output is implementation-defined.
/// Identical seeds therefore give identical streams on every platform.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform draw in the open interval (0, 1).
  double uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal draw via Box-Muller; the paired value is cached.
  double normal();

  Matrix gaussian(std::size_t rows, std::size_t cols);

private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

} // namespace sympca
