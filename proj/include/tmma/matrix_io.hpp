#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "tmma/matrix.hpp"

namespace tmma {

// TMM1 container, little-endian:
//   "TMM1" | dtype u8 | 3 reserved zero bytes | rows u32 | cols u32 | payload
// Payload is rows*cols elements, row-major, in the dtype's natural width.
inline constexpr std::size_t kMatrixHeaderBytes = 16;

std::vector<std::uint8_t> encode_matrix(const AnyMatrix& m);

/// Parses a TMM1 image. Throws BadMagicError, UnknownDtypeError,
/// TruncatedError, or FormatError for other malformations (nonzero reserved
/// bytes, zero dimensions, trailing bytes, non-finite f32 elements).
AnyMatrix decode_matrix(std::span<const std::uint8_t> bytes);

void write_matrix(const std::filesystem::path& path, const AnyMatrix& m);
AnyMatrix read_matrix(const std::filesystem::path& path);

/// read_matrix plus a dtype check; a file of another dtype is a FormatError.
template <MatrixElement T>
Matrix<T> read_matrix_as(const std::filesystem::path& path) {
  AnyMatrix any = read_matrix(path);
  if (auto* m = std::get_if<Matrix<T>>(&any)) return std::move(*m);
  throw FormatError(path.string() + ": expected dtype " + dtype_name(Matrix<T>::dtype));
}

}  // namespace tmma
