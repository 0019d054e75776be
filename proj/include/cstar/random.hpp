#ifndef CSTAR_RANDOM_HPP
#define CSTAR_RANDOM_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

namespace cstar {

struct Seed {
  std::uint64_t value = 0;
  friend bool operator==(Seed, Seed) = default;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Child seed for (stream, index). Used so every sampled case owns its
/// randomness and results do not depend on evaluation order.
inline Seed derive(Seed parent, std::uint64_t stream, std::uint64_t index = 0) {
  return Seed{splitmix64(splitmix64(parent.value ^ splitmix64(stream)) + index)};
}

/// Standard-normal stream over mt19937_64.
///
/// std::normal_distribution is implementation-defined, so the transform
/// (Box-Muller on 53-bit uniforms) is spelled out here to keep sampled
/// instances identical across standard libraries.
class NormalStream {
 public:
  explicit NormalStream(Seed seed) : engine_(seed.value) {}

  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double next() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t);
  }

  std::complex<double> next_complex() {
    const double re = next();
    return {re, next()};
  }

  std::uint64_t bits() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace cstar

#endif  // CSTAR_RANDOM_HPP
