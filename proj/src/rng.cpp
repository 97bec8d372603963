#include "fdasynth/rng.hpp"

#include <cmath>

#include "fdasynth/types.hpp"

namespace fdasynth {

namespace {
uint64_t splitmix64(uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}
}  // namespace

uint64_t Rng::mix(uint64_t seed, uint64_t index) {
  uint64_t state = seed;
  uint64_t a = splitmix64(state);
  state = a ^ (index * 0xD1342543DE82EF95ull + 0x2545F4914F6CDD1Dull);
  uint64_t b = splitmix64(state);
  return splitmix64(state) ^ b;
}

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform01() - 1.0;
    v = 2.0 * uniform01() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  have_spare_ = true;
  return u * f;
}

double Rng::gamma(double alpha) {
  if (!(alpha > 0.0)) throw validation_error("gamma shape must be positive");
  if (alpha < 1.0) {
    // boost: Gamma(a) = Gamma(a+1) * U^(1/a)
    double u = uniform01_open();
    return gamma(alpha + 1.0) * std::pow(u, 1.0 / alpha);
  }
  const double d = alpha - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    double u = uniform01_open();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

std::vector<double> Rng::dirichlet(std::span<const double> alphas) {
  std::vector<double> g(alphas.size());
  double sum = 0.0;
  for (size_t k = 0; k < alphas.size(); ++k) {
    g[k] = gamma(alphas[k]);
    sum += g[k];
  }
  if (sum <= 0.0) {
    // all gamma draws underflowed; fall back to uniform weights
    for (auto& v : g) v = 1.0 / g.size();
    return g;
  }
  for (auto& v : g) v /= sum;
  return g;
}

uint64_t Rng::uniform_index(uint64_t n) {
  if (n == 0) throw validation_error("uniform_index on empty range");
  const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  uint64_t r;
  do {
    r = next_u64();
  } while (r >= limit);
  return r % n;
}

}  // namespace fdasynth
