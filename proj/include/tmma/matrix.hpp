#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "tmma/errors.hpp"

namespace tmma {

// Element type tag; the numeric values are the on-disk dtype codes.
enum class DType : std::uint8_t { int8 = 0, int32 = 1, f32 = 2 };

const char* dtype_name(DType dtype);

template <typename T>
struct dtype_of;
template <>
struct dtype_of<std::int8_t> {
  static constexpr DType value = DType::int8;
};
template <>
struct dtype_of<std::int32_t> {
  static constexpr DType value = DType::int32;
};
template <>
struct dtype_of<float> {
  static constexpr DType value = DType::f32;
};

template <typename T>
concept MatrixElement = std::is_same_v<T, std::int8_t> ||
                        std::is_same_v<T, std::int32_t> ||
                        std::is_same_v<T, float>;

/// Dense row-major matrix with at least one row and one column.
///
/// Float matrices additionally require every element to be finite; this is
/// checked when a matrix is built from an explicit element vector.
template <MatrixElement T>
class Matrix {
 public:
  using value_type = T;
  static constexpr DType dtype = dtype_of<T>::value;

  /// Zero-filled rows x cols matrix.
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(checked_size(rows, cols), T{}) {}

  Matrix(std::size_t rows, std::size_t cols, std::vector<T> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != checked_size(rows, cols)) {
      throw ShapeError("matrix data length " + std::to_string(data_.size()) +
                       " does not match " + std::to_string(rows) + "x" +
                       std::to_string(cols));
    }
    if constexpr (std::is_floating_point_v<T>) {
      for (T v : data_) {
        if (!std::isfinite(v)) throw ValueError("f32 matrix element is not finite");
      }
    }
  }

  static Matrix from_rows(std::initializer_list<std::initializer_list<T>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.begin()->size();
    std::vector<T> data;
    data.reserve(r * c);
    for (const auto& row : rows) {
      if (row.size() != c) throw ShapeError("ragged row list");
      data.insert(data.end(), row.begin(), row.end());
    }
    return Matrix(r, c, std::move(data));
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }

  T operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }
  T& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }

  std::span<const T> data() const noexcept { return data_; }
  std::span<T> data() noexcept { return data_; }

  std::span<const T> row(std::size_t r) const noexcept {
    return std::span<const T>(data_).subspan(r * cols_, cols_);
  }

  bool operator==(const Matrix&) const = default;

 private:
  static std::size_t checked_size(std::size_t rows, std::size_t cols) {
    if (rows == 0 || cols == 0) {
      throw ShapeError("matrix dimensions must be positive, got " + std::to_string(rows) +
                       "x" + std::to_string(cols));
    }
    return rows * cols;
  }

  std::size_t rows_;
  std::size_t cols_;
  std::vector<T> data_;
};

using Int8Matrix = Matrix<std::int8_t>;
using Int32Matrix = Matrix<std::int32_t>;
using F32Matrix = Matrix<float>;

using AnyMatrix = std::variant<Int8Matrix, Int32Matrix, F32Matrix>;

// Largest K for which an int8 x int8 dot product cannot overflow int32:
// K * 128 * 128 <= 2^31 - 1.
inline constexpr std::size_t kMaxSafeAccumulationDepth = 131071;

/// Reference product C = A x B with int32 accumulation.
///
/// Plain triple loop, deliberately free of any tiling, so it can serve as the
/// oracle for the tiled engine. Throws ShapeError when a.cols != b.rows or when
/// K exceeds kMaxSafeAccumulationDepth.
Int32Matrix naive_gemm(const Int8Matrix& a, const Int8Matrix& b);

/// Deterministic pseudo-random matrix for a given (rows, cols, seed).
///
/// int8 elements are uniform over [-128, 127], int32 elements uniform over the
/// full int32 range, f32 elements standard normal. The generator is
/// mt19937_64 with hand-written sampling, so outputs do not depend on the
/// standard library's distribution implementations.
template <MatrixElement T>
Matrix<T> random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed);

extern template Int8Matrix random_matrix<std::int8_t>(std::size_t, std::size_t, std::uint64_t);
extern template Int32Matrix random_matrix<std::int32_t>(std::size_t, std::size_t, std::uint64_t);
extern template F32Matrix random_matrix<float>(std::size_t, std::size_t, std::uint64_t);

AnyMatrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed, DType dtype);

/// 64-bit FNV-1a over the element bytes (little-endian, row-major).
template <MatrixElement T>
std::uint64_t checksum(const Matrix<T>& m);

/// Same hash over an arbitrary byte range.
std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes,
                      std::uint64_t state = 0xcbf29ce484222325ULL);

}  // namespace tmma
