#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace fdasynth {

// Deterministic random stream. All distribution transforms are implemented
// by hand on top of mt19937_64 so that draws are bit-identical across
// platforms and standard libraries. Substreams keyed by (seed, index) make
// parallel consumers reproducible independently of scheduling.
class Rng {
public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  static uint64_t mix(uint64_t seed, uint64_t index);
  static Rng substream(uint64_t seed, uint64_t index) { return Rng(mix(seed, index)); }

  uint64_t next_u64() { return gen_(); }

  // Uniform in [0,1) with 53 random bits.
  double uniform01() { return (next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in (0,1), never exactly zero.
  double uniform01_open() {
    double u;
    do {
      u = uniform01();
    } while (u == 0.0);
    return u;
  }

  // Standard normal via the Marsaglia polar method.
  double normal();

  // Gamma(alpha, 1) via Marsaglia-Tsang, with the boost transform for alpha < 1.
  double gamma(double alpha);

  std::vector<double> dirichlet(std::span<const double> alphas);

  // Uniform integer in [0, n).
  uint64_t uniform_index(uint64_t n);

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(uniform_index(i));
      std::swap(v[i - 1], v[j]);
    }
  }

private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace fdasynth
