#include "tmma/matrix.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <random>

namespace tmma {

const char* dtype_name(DType dtype) {
  switch (dtype) {
    case DType::int8:
      return "int8";
    case DType::int32:
      return "int32";
    case DType::f32:
      return "f32";
  }
  return "unknown";
}

Int32Matrix naive_gemm(const Int8Matrix& a, const Int8Matrix& b) {
  if (a.cols() != b.rows()) {
    throw ShapeError("naive_gemm: a is " + std::to_string(a.rows()) + "x" +
                     std::to_string(a.cols()) + " but b is " + std::to_string(b.rows()) + "x" +
                     std::to_string(b.cols()));
  }
  if (a.cols() > kMaxSafeAccumulationDepth) {
    throw ShapeError("naive_gemm: K=" + std::to_string(a.cols()) +
                     " can overflow int32 accumulation");
  }
  const std::size_t n = a.rows();
  const std::size_t k_dim = a.cols();
  const std::size_t m = b.cols();
  Int32Matrix c(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    std::int32_t* c_row = c.data().data() + i * m;
    for (std::size_t k = 0; k < k_dim; ++k) {
      const std::int32_t a_ik = a(i, k);
      const std::int8_t* b_row = b.data().data() + k * m;
      for (std::size_t j = 0; j < m; ++j) c_row[j] += a_ik * static_cast<std::int32_t>(b_row[j]);
    }
  }
  return c;
}

namespace {

// Uniform double in (0, 1].
double unit_open_closed(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
}

}  // namespace

template <MatrixElement T>
Matrix<T> random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Matrix<T> m(rows, cols);
  std::mt19937_64 rng(seed);
  auto out = m.data();
  if constexpr (std::is_same_v<T, std::int8_t>) {
    for (auto& v : out) v = static_cast<std::int8_t>(static_cast<std::uint8_t>(rng() >> 56));
  } else if constexpr (std::is_same_v<T, std::int32_t>) {
    for (auto& v : out) v = static_cast<std::int32_t>(static_cast<std::uint32_t>(rng() >> 32));
  } else {
    // Box-Muller, both outputs used.
    std::size_t i = 0;
    while (i < out.size()) {
      const double radius = std::sqrt(-2.0 * std::log(unit_open_closed(rng)));
      const double angle = 2.0 * std::numbers::pi * unit_open_closed(rng);
      out[i++] = static_cast<float>(radius * std::cos(angle));
      if (i < out.size()) out[i++] = static_cast<float>(radius * std::sin(angle));
    }
  }
  return m;
}

template Int8Matrix random_matrix<std::int8_t>(std::size_t, std::size_t, std::uint64_t);
template Int32Matrix random_matrix<std::int32_t>(std::size_t, std::size_t, std::uint64_t);
template F32Matrix random_matrix<float>(std::size_t, std::size_t, std::uint64_t);

AnyMatrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed, DType dtype) {
  switch (dtype) {
    case DType::int8:
      return random_matrix<std::int8_t>(rows, cols, seed);
    case DType::int32:
      return random_matrix<std::int32_t>(rows, cols, seed);
    case DType::f32:
      return random_matrix<float>(rows, cols, seed);
  }
  throw ValueError("random_matrix: unknown dtype");
}

std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes, std::uint64_t state) {
  for (std::uint8_t byte : bytes) {
    state ^= byte;
    state *= 0x100000001b3ULL;
  }
  return state;
}

template <MatrixElement T>
std::uint64_t checksum(const Matrix<T>& m) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (T v : m.data()) {
    std::uint8_t bytes[sizeof(T)];
    if constexpr (std::is_same_v<T, float>) {
      auto bits = std::bit_cast<std::uint32_t>(v);
      for (std::size_t b = 0; b < sizeof(T); ++b) bytes[b] = static_cast<std::uint8_t>(bits >> (8 * b));
    } else {
      auto bits = static_cast<std::make_unsigned_t<T>>(v);
      for (std::size_t b = 0; b < sizeof(T); ++b) bytes[b] = static_cast<std::uint8_t>(bits >> (8 * b));
    }
    h = fnv1a64(bytes, h);
  }
  return h;
}

template std::uint64_t checksum(const Int8Matrix&);
template std::uint64_t checksum(const Int32Matrix&);
template std::uint64_t checksum(const F32Matrix&);

}  // namespace tmma
