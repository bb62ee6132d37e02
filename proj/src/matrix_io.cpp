#include "tmma/matrix_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>

namespace tmma {

namespace {

constexpr std::array<std::uint8_t, 4> kMagic{'T', 'M', 'M', '1'};

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> in, std::size_t offset) {
  std::uint32_t v = 0;
  for (int b = 0; b < 4; ++b) v |= static_cast<std::uint32_t>(in[offset + b]) << (8 * b);
  return v;
}

template <MatrixElement T>
void put_payload(std::vector<std::uint8_t>& out, const Matrix<T>& m) {
  for (T v : m.data()) {
    if constexpr (std::is_same_v<T, std::int8_t>) {
      out.push_back(static_cast<std::uint8_t>(v));
    } else if constexpr (std::is_same_v<T, std::int32_t>) {
      put_u32(out, static_cast<std::uint32_t>(v));
    } else {
      put_u32(out, std::bit_cast<std::uint32_t>(v));
    }
  }
}

template <MatrixElement T>
Matrix<T> get_payload(std::span<const std::uint8_t> payload, std::size_t rows, std::size_t cols) {
  std::vector<T> data(rows * cols);
  for (std::size_t i = 0; i < data.size(); ++i) {
    if constexpr (std::is_same_v<T, std::int8_t>) {
      data[i] = static_cast<std::int8_t>(payload[i]);
    } else if constexpr (std::is_same_v<T, std::int32_t>) {
      data[i] = static_cast<std::int32_t>(get_u32(payload, 4 * i));
    } else {
      data[i] = std::bit_cast<float>(get_u32(payload, 4 * i));
      if (!std::isfinite(data[i])) throw FormatError("f32 payload holds a non-finite element");
    }
  }
  return Matrix<T>(rows, cols, std::move(data));
}

std::size_t element_width(DType dtype) { return dtype == DType::int8 ? 1 : 4; }

}  // namespace

std::vector<std::uint8_t> encode_matrix(const AnyMatrix& any) {
  return std::visit(
      [](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        if (m.rows() > UINT32_MAX || m.cols() > UINT32_MAX) {
          throw ShapeError("matrix too large for TMM1 header");
        }
        std::vector<std::uint8_t> out(kMagic.begin(), kMagic.end());
        out.reserve(kMatrixHeaderBytes + m.size() * sizeof(typename M::value_type));
        out.push_back(static_cast<std::uint8_t>(M::dtype));
        out.insert(out.end(), 3, 0);
        put_u32(out, static_cast<std::uint32_t>(m.rows()));
        put_u32(out, static_cast<std::uint32_t>(m.cols()));
        put_payload(out, m);
        return out;
      },
      any);
}

AnyMatrix decode_matrix(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kMagic.size()) throw TruncatedError("file shorter than magic");
  if (!std::equal(kMagic.begin(), kMagic.end(), bytes.begin())) {
    throw BadMagicError("bad magic, expected TMM1");
  }
  if (bytes.size() < kMatrixHeaderBytes) throw TruncatedError("header truncated");
  const std::uint8_t code = bytes[4];
  if (code > static_cast<std::uint8_t>(DType::f32)) {
    throw UnknownDtypeError("unknown dtype code " + std::to_string(code));
  }
  if (bytes[5] != 0 || bytes[6] != 0 || bytes[7] != 0) {
    throw FormatError("reserved header bytes are not zero");
  }
  const auto dtype = static_cast<DType>(code);
  const std::size_t rows = get_u32(bytes, 8);
  const std::size_t cols = get_u32(bytes, 12);
  if (rows == 0 || cols == 0) throw FormatError("header declares an empty matrix");

  const std::size_t expected = rows * cols * element_width(dtype);
  const auto payload = bytes.subspan(kMatrixHeaderBytes);
  if (payload.size() < expected) {
    throw TruncatedError("payload holds " + std::to_string(payload.size()) + " bytes, header needs " +
                         std::to_string(expected));
  }
  if (payload.size() > expected) throw FormatError("trailing bytes after payload");

  switch (dtype) {
    case DType::int8:
      return get_payload<std::int8_t>(payload, rows, cols);
    case DType::int32:
      return get_payload<std::int32_t>(payload, rows, cols);
    case DType::f32:
      return get_payload<float>(payload, rows, cols);
  }
  throw UnknownDtypeError("unknown dtype");
}

void write_matrix(const std::filesystem::path& path, const AnyMatrix& m) {
  const auto bytes = encode_matrix(m);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("short write to " + path.string());
}

AnyMatrix read_matrix(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_matrix(bytes);
}

}  // namespace tmma
