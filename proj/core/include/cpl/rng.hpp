#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdint>

namespace cpl {

// Counter-based generator: every draw is a pure function of
// (seed, stream, counter), so parallel chunking can never change a sample
// and common-random-number evaluation is just a matter of reusing the key.

inline uint64_t mix64(uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class CounterRng {
 public:
  CounterRng(uint64_t seed, uint64_t stream = 0)
      : key_(mix64(mix64(seed) ^ (0xda942042e4dd58b5ULL * (stream + 1)))) {}

  uint64_t word(uint64_t counter) const {
    return mix64(key_ ^ (counter * 0xd1342543de82ef95ULL));
  }

  // uniform in (0, 1]; never 0 so log() is always safe
  double uniform(uint64_t counter) const {
    return (static_cast<double>(word(counter) >> 11) + 1.0) * 0x1p-53;
  }

  // uniform in [lo, hi)
  double uniform(uint64_t counter, double lo, double hi) const {
    return lo + (hi - lo) * (static_cast<double>(word(counter) >> 11) * 0x1p-53);
  }

  uint64_t index(uint64_t counter, uint64_t bound) const {
    return word(counter) % bound;
  }

  // standard normal via Box-Muller on uniform counters (2c, 2c+1)
  double gaussian(uint64_t counter) const {
    const double u1 = uniform(2 * counter);
    const double u2 = uniform(2 * counter + 1);
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(6.283185307179586476925286766559 * u2);
  }

  Eigen::VectorXd gaussian_vector(int dim, uint64_t base_counter) const {
    Eigen::VectorXd g(dim);
    for (int j = 0; j < dim; ++j) g[j] = gaussian(base_counter + j);
    return g;
  }

  Eigen::VectorXd sphere_vector(int dim, uint64_t base_counter) const {
    Eigen::VectorXd g = gaussian_vector(dim, base_counter);
    double r = g.norm();
    while (r == 0.0) {  // never observed; keeps the map total
      base_counter += dim;
      g = gaussian_vector(dim, base_counter);
      r = g.norm();
    }
    return g / r;
  }

  // deterministic in-place shuffle (Fisher-Yates keyed by the counter space)
  template <typename Vec>
  void shuffle(Vec& v, uint64_t base_counter = 0) const {
    for (size_t i = v.size(); i > 1; --i) {
      const size_t j = static_cast<size_t>(index(base_counter + i, i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  uint64_t key_;
};

}  // namespace cpl
