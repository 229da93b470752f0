#pragma once

// Deterministic numeric substrate shared by every model: dense row-major
// matrices, activations, a seedable platform-independent PRNG and the
// central-difference gradient oracle.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "careerpred/error.hpp"

namespace careerpred::numkit {

class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), values_(rows * cols, fill) {}
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> values)
      : rows_(rows), cols_(cols), values_(std::move(values)) {
    if (values_.size() != rows_ * cols_) {
      throw Error(ErrorKind::Shape, "matrix value count does not match rows*cols",
                  std::to_string(rows_) + "x" + std::to_string(cols_));
    }
  }

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return values_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {values_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {values_.data() + r * cols_, cols_}; }

  std::vector<double>& values() noexcept { return values_; }
  const std::vector<double>& values() const noexcept { return values_; }

  bool all_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
  }

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

inline DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorKind::Shape, "matmul dimension mismatch",
                std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " * " +
                    std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
  DenseMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto out_row = out.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      auto b_row = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) out_row[j] += aik * b_row[j];
    }
  }
  return out;
}

inline double relu(double x) noexcept { return x > 0.0 ? x : 0.0; }

inline double sigmoid(double x) noexcept {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

/// Max-subtracted softmax; safe for arbitrarily large finite logits.
inline std::vector<double> softmax(std::span<const double> logits) {
  std::vector<double> out(logits.size());
  if (logits.empty()) return out;
  const double peak = *std::max_element(logits.begin(), logits.end());
  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - peak);
    total += out[i];
  }
  for (double& v : out) v /= total;
  return out;
}

/// Smallest index achieving the maximum.
inline std::size_t argmax_tiebreak(std::span<const double> v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// xoshiro256** (Blackman & Vigna) whose 256-bit state is filled by four
/// successive splitmix64 outputs of the seed.
///
///   splitmix64: z = (s += 0x9e3779b97f4a7c15);
///               z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9;
///               z = (z ^ (z >> 27)) * 0x94d049bb133111eb;
///               return z ^ (z >> 31);
///   next():     result = rotl(s1 * 5, 7) * 9;  t = s1 << 17;
///               s2 ^= s0; s3 ^= s1; s1 ^= s2; s0 ^= s3; s2 ^= t; s3 = rotl(s3, 45);
///
/// Only fixed-width unsigned arithmetic is involved, so the stream is the
/// same on every platform. data/prng_vectors.txt pins the first 16 outputs
/// for a handful of seeds.
class SeededRng {
 public:
  static constexpr const char* algorithm = "xoshiro256starstar-splitmix64";

  explicit SeededRng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64(sm);
  }

  std::uint64_t next() noexcept {
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

  /// Uniform double in [0, 1) from the top 53 bits.
  double uniform01() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform01(); }

  /// Unbiased integer in [0, n) by rejection of the short top bucket.
  std::uint64_t uniform_int(std::uint64_t n) {
    if (n == 0) throw Error(ErrorKind::Input, "uniform_int requires n > 0");
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % n;
    }
  }

  static std::uint64_t splitmix64(std::uint64_t& s) noexcept {
    std::uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

  std::uint64_t state_[4]{};
};

/// Fisher-Yates over 0..n-1, drawing from `rng` from the last slot down.
inline std::vector<std::size_t> permutation(std::size_t n, SeededRng& rng) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.uniform_int(i));
    std::swap(perm[i - 1], perm[j]);
  }
  return perm;
}

using ScalarFunction = std::function<double(std::span<const double>)>;

/// Central differences, one coordinate at a time.
inline std::vector<double> finite_difference_gradient(const ScalarFunction& f,
                                                      std::span<const double> x, double eps) {
  if (!(eps > 0.0)) throw Error(ErrorKind::Oracle, "finite difference step must be positive");
  std::vector<double> probe(x.begin(), x.end());
  std::vector<double> grad(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double saved = probe[i];
    probe[i] = saved + eps;
    const double up = f(probe);
    probe[i] = saved - eps;
    const double down = f(probe);
    probe[i] = saved;
    if (!std::isfinite(up) || !std::isfinite(down)) {
      throw Error(ErrorKind::Oracle, "function is not finite near the probe point",
                  "coordinate " + std::to_string(i));
    }
    grad[i] = (up - down) / (2.0 * eps);
  }
  return grad;
}

/// max_i |a_i - b_i| / max(|a_i|, |b_i|, floor). The floor keeps coordinates
/// whose true gradient is ~0 from dominating on rounding noise.
inline double max_relative_error(std::span<const double> a, std::span<const double> b,
                                 double floor = 1e-8) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double scale = std::max({std::abs(a[i]), std::abs(b[i]), floor});
    worst = std::max(worst, std::abs(a[i] - b[i]) / scale);
  }
  return worst;
}

}  // namespace careerpred::numkit
