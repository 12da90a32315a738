#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace icregime::rng {

// Seeded generator with hand-rolled distributions so that identical seeds
// reproduce bit-identical streams across standard libraries.
class Engine {
 public:
  explicit Engine(std::uint64_t seed) : gen_(seed) {}

  // Uniform in (0, 1]; never returns 0, safe under log().
  double uniform01() {
    return (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  int uniform_int(int lo, int hi) {  // inclusive bounds
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(gen_() % span);
  }

  // Box-Muller with a cached spare.
  double normal();

  // Marsaglia-Tsang; shapes below 1 boosted via the power trick.
  double gamma(double shape);

  std::vector<double> dirichlet(std::size_t n, double concentration);

 private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Radical-inverse Halton point, index >= 1, base a small prime.
double halton(std::uint64_t index, int base);

// First `dim` primes, for Halton bases.
std::vector<int> halton_bases(int dim);

}  // namespace icregime::rng
