#pragma once

#include <cstdint>
#include <random>

namespace mvip {

/// Independent random streams per instance component. The stream seed is
/// splitmix64(seed ^ (0x9E3779B97F4A7C15 * stream)), fed to std::mt19937_64,
/// whose output sequence is fixed by the C++ standard.
enum class Stream : std::uint64_t {
  Matrix = 1,
  Support = 2,
  Amplitude = 3,
  Noise = 4,
  Init = 5,
};

std::uint64_t splitmix64(std::uint64_t x);

/// Portable sampler: uniforms take the top 53 bits of a 64-bit draw, normals use
/// Box-Muller with both outputs consumed in order. Avoids std::*_distribution,
/// whose algorithms are implementation-defined.
class StreamRng {
 public:
  StreamRng(std::uint64_t seed, Stream stream);

  /// Uniform on [0, 1).
  double uniform();
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);
  double normal();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace mvip
