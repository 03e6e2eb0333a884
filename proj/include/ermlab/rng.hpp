#ifndef ERMLAB_RNG_HPP
#define ERMLAB_RNG_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <initializer_list>

#include <Eigen/Core>

namespace ermlab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// splitmix64 step; used both as a standalone stream and to expand seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Folds an ordered list of integers into one seed. Used to derive
// per-trial / per-cell streams from (seed, d, n, trial) so that results
// do not depend on scheduling.
inline std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t s = 0x8f1bbcdcbfa53e0bULL;
  for (std::uint64_t p : parts) {
    s ^= p + 0x9e3779b97f4a7c15ULL + (s << 6) + (s >> 2);
    splitmix64(s);
  }
  return splitmix64(s);
}

// xoshiro256** with splitmix64 seeding. All experiment randomness goes
// through this generator so runs are reproducible across platforms and
// thread counts.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t s = seed;
    for (auto& word : state_) word = splitmix64(s);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  int sign() { return (next_u64() >> 63) ? 1 : -1; }

  // Index uniform on [0, n).
  std::size_t index(std::size_t n) {
    return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n;
  }

  // Standard normal via the polar method; second deviate is cached.
  double normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    cached_ = v * m;
    have_cached_ = true;
    return u * m;
  }

  // Uniform direction on the unit sphere in R^d.
  Vec sphere_direction(int dim) {
    Vec x(dim);
    double norm2 = 0.0;
    do {
      for (int i = 0; i < dim; ++i) x[i] = normal();
      norm2 = x.squaredNorm();
    } while (norm2 == 0.0);
    return x / std::sqrt(norm2);
  }

  // Uniform point in the ball of radius `radius` around `center`.
  Vec uniform_in_ball(const Vec& center, double radius) {
    const int d = static_cast<int>(center.size());
    const double r = radius * std::pow(uniform(), 1.0 / d);
    return center + r * sphere_direction(d);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_{};
  double cached_ = 0.0;
  bool have_cached_ = false;
};

}  // namespace ermlab

#endif  // ERMLAB_RNG_HPP
