#pragma once

// Test-only oracles and generators. Nothing here calls into the code under
// test except the matrix containers.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "tmma/matrix.hpp"

namespace tmma::testing {

// Dot-product-order GEMM in int64: independent of both naive_gemm's i-k-j
// loop and the tiled engine, and immune to int32 overflow.
inline std::vector<std::int64_t> dot_gemm_i64(const Int8Matrix& a, const Int8Matrix& b) {
  std::vector<std::int64_t> c(a.rows() * b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j) {
    for (std::size_t i = 0; i < a.rows(); ++i) {
      std::int64_t s = 0;
      for (std::size_t k = 0; k < a.cols(); ++k) s += std::int64_t{a(i, k)} * std::int64_t{b(k, j)};
      c[i * b.cols() + j] = s;
    }
  }
  return c;
}

inline bool equals_i64(const Int32Matrix& c, const std::vector<std::int64_t>& ref) {
  if (c.size() != ref.size()) return false;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    if (std::int64_t{c.data()[i]} != ref[i]) return false;
  }
  return true;
}

// Float GEMM in double precision, returned as double.
inline std::vector<double> float_gemm_f64(const F32Matrix& x, const F32Matrix& w) {
  std::vector<double> c(x.rows() * w.cols(), 0.0);
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t k = 0; k < x.cols(); ++k)
      for (std::size_t j = 0; j < w.cols(); ++j) c[i * w.cols() + j] += double{x(i, k)} * double{w(k, j)};
  return c;
}

inline double rel_frobenius(const F32Matrix& approx, const std::vector<double>& ref) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    const double d = double{approx.data()[i]} - ref[i];
    num += d * d;
    den += ref[i] * ref[i];
  }
  return std::sqrt(num / den);
}

// Int8 matrix with elements in [-limit, limit].
inline Int8Matrix small_int8(std::size_t rows, std::size_t cols, int limit, std::mt19937_64& rng) {
  Int8Matrix m(rows, cols);
  for (auto& v : m.data()) v = static_cast<std::int8_t>(static_cast<int>(rng() % (2 * limit + 1)) - limit);
  return m;
}

inline std::size_t uniform_in(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(rng() % (hi - lo + 1));
}

}  // namespace tmma::testing
