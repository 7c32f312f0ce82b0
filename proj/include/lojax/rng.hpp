#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

namespace lojax {

inline std::uint64_t splitmix64_step(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Derives an independent stream seed from a base seed and stream indices.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0,
                                 std::uint64_t c = 0) {
  std::uint64_t s = base;
  splitmix64_step(s);
  s ^= 0xD1B54A32D192ED03ULL * (a + 1);
  splitmix64_step(s);
  s ^= 0x8CB92BA72F3D8DD7ULL * (b + 1);
  splitmix64_step(s);
  s ^= 0xABCC5167CCAD925FULL * (c + 1);
  return splitmix64_step(s);
}

/// Deterministic generator with platform-independent distributions (the
/// standard library distributions are implementation-defined, so all
/// sampling goes through this).
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() { return splitmix64_step(state_); }

  /// Uniform in [0, 1).
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform in [-1, 1).
  double symmetric() { return 2.0 * unit() - 1.0; }

  /// Standard normal via Box-Muller (always consumes two uniforms).
  double gaussian() {
    double u1 = unit(), u2 = unit();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  /// Uniform on the closed disc of the given radius (area measure).
  std::complex<double> disc(double radius) {
    double r = radius * std::sqrt(unit());
    double phi = 6.283185307179586 * unit();
    return {r * std::cos(phi), r * std::sin(phi)};
  }

  /// Uniform point in the polydisc {max_i |z_i| <= radius} in C^n.
  std::vector<std::complex<double>> polydisc(std::size_t n, double radius) {
    std::vector<std::complex<double>> z(n);
    for (auto& zi : z) zi = disc(radius);
    return z;
  }

  /// Uniform direction on the unit sphere of C^n (Euclidean norm 1).
  std::vector<std::complex<double>> sphere_direction(std::size_t n) {
    std::vector<std::complex<double>> z(n);
    double norm2 = 0.0;
    do {
      norm2 = 0.0;
      for (auto& zi : z) {
        zi = {gaussian(), gaussian()};
        norm2 += std::norm(zi);
      }
    } while (norm2 < 1e-12);
    double inv = 1.0 / std::sqrt(norm2);
    for (auto& zi : z) zi *= inv;
    return z;
  }

private:
  std::uint64_t state_;
};

}  // namespace lojax
