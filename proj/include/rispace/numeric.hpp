#pragma once

// Small numeric utilities shared by the whole library: compensated summation,
// a portable deterministic RNG, log-domain helpers and input digests.

#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace rispace {

// Neumaier variant of Kahan summation. The correction term is added once at
// the end, so value() is exact to within one rounding of the true sum for
// the magnitudes handled here (cell measures, integrals).
class NeumaierSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double neumaier_total(std::span<const double> xs) {
  NeumaierSum s;
  for (double x : xs) s.add(x);
  return s.value();
}

// SplitMix64. Chosen over std::mt19937 + std::uniform_* because the mapping
// from bits to doubles below is pinned exactly; reports stay comparable
// across compilers and across reimplementations in other languages.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  // Per-trial stream: state = mix64(seed) xor mix64(stream + 1), so trial
  // results are independent of evaluation order.
  Rng(std::uint64_t seed, std::uint64_t stream)
      : state_(mix64(seed) ^ mix64(stream + 1)) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform double in [0,1): top 53 bits scaled by 2^-53.
  double uniform01() { return double(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  // Uniform integer in [0, n): floor of n * uniform01(), clamped. The floor
  // mapping is part of the cross-language reproducibility contract.
  std::uint64_t below(std::uint64_t n) {
    auto k = static_cast<std::uint64_t>(uniform01() * double(n));
    return k >= n ? n - 1 : k;
  }

 private:
  std::uint64_t state_;
};

// log(sum exp(xs)) without overflow; -inf for an empty set.
inline double log_sum_exp(std::span<const double> xs) {
  if (xs.empty()) return -std::numeric_limits<double>::infinity();
  double m = -std::numeric_limits<double>::infinity();
  for (double x : xs) m = std::max(m, x);
  if (std::isinf(m)) return m;
  NeumaierSum s;
  for (double x : xs) s.add(std::exp(x - m));
  return m + std::log(s.value());
}

// FNV-1a over raw little-endian doubles; used to tag report trials with a
// digest of their inputs.
class Fnv1a {
 public:
  void add(double x) {
    std::uint64_t bits;
    std::memcpy(&bits, &x, sizeof bits);
    for (int i = 0; i < 8; ++i) {
      hash_ ^= (bits >> (8 * i)) & 0xFFu;
      hash_ *= 0x100000001B3ull;
    }
  }
  void add(std::span<const double> xs) {
    for (double x : xs) add(x);
  }
  std::uint64_t value() const { return hash_; }

 private:
  std::uint64_t hash_ = 0xCBF29CE484222325ull;
};

inline void require(bool cond, const char* what) {
  if (!cond) throw std::invalid_argument(what);
}

}  // namespace rispace
