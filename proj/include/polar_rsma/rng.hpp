#pragma once

#include <Eigen/Core>

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstring>
#include <initializer_list>
#include <random>

namespace polar_rsma {

// splitmix64 finalizer; full-avalanche mixing of one 64-bit word.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Folds a list of words into one substream seed. Used to derive
// per-(grid point, trial, purpose) seeds from a master seed so that
// results do not depend on enumeration order or thread count.
inline std::uint64_t mix_words(std::initializer_list<std::uint64_t> words) {
  std::uint64_t s = 0x243f6a8885a308d3ULL;
  for (std::uint64_t w : words) s = mix64(s ^ w);
  return s;
}

inline std::uint64_t bits_of(double x) {
  std::uint64_t u;
  std::memcpy(&u, &x, sizeof(u));
  return u;
}

// Purpose tags keep independent draw streams decoupled: schemes built on
// the same physical channel share the channel stream (paired comparisons),
// while precoder randomness never perturbs channel randomness.
enum : std::uint64_t {
  kTagDpChannel = 0x11,
  kTagDpCommon = 0x12,
  kTagSpChannel = 0x21,
  kTagSpCommon = 0x22,
};

// Deterministic Gaussian source. mt19937_64 is fully specified by the
// standard; uniforms and the Box-Muller transform are done by hand because
// std::normal_distribution is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // Uniform on (0,1].
  double uniform_pos() {
    return 1.0 - static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  // Uniform on [0,1).
  double uniform() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  // One CN(0,1) draw (unit total variance) from exactly two engine calls.
  std::complex<double> cnormal() {
    const double r = std::sqrt(-std::log(uniform_pos()));
    const double t = 6.283185307179586476925286766559 * uniform();
    return {r * std::cos(t), r * std::sin(t)};
  }

  Eigen::VectorXcd cnormal_vector(Eigen::Index n) {
    Eigen::VectorXcd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = cnormal();
    return v;
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace polar_rsma
