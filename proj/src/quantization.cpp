#include "tmma/quantization.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tmma {

QuantParams::QuantParams(float scale) : scale_(scale) {
  if (!(scale > 0.0f) || !std::isfinite(scale)) {
    throw ValueError("quantization scale must be positive and finite, got " + std::to_string(scale));
  }
}

QuantParams calibrate(const F32Matrix& x) {
  float max_abs = 0.0f;
  for (float v : x.data()) {
    if (!std::isfinite(v)) throw ValueError("calibrate: non-finite input element");
    max_abs = std::max(max_abs, std::fabs(v));
  }
  if (max_abs == 0.0f) return QuantParams(1.0f);
  return QuantParams(max_abs / static_cast<float>(QuantParams::kMaxCode));
}

Int8Matrix quantize(const F32Matrix& x, QuantParams q) {
  Int8Matrix out(x.rows(), x.cols());
  const double scale = q.scale();
  constexpr double kLimit = QuantParams::kMaxCode;
  auto src = x.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < src.size(); ++i) {
    // std::round rounds halfway cases away from zero.
    const double code = std::clamp(std::round(static_cast<double>(src[i]) / scale), -kLimit, kLimit);
    dst[i] = static_cast<std::int8_t>(code);
  }
  return out;
}

F32Matrix dequantize(const Int8Matrix& x, QuantParams q) {
  F32Matrix out(x.rows(), x.cols());
  auto src = x.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < src.size(); ++i) {
    dst[i] = static_cast<float>(static_cast<double>(src[i]) * q.scale());
  }
  return out;
}

F32Matrix dequantize_gemm_output(const Int32Matrix& c, QuantParams qa, QuantParams qb,
                                 std::optional<std::span<const float>> bias) {
  if (bias && bias->size() != c.cols()) {
    throw ShapeError("bias length " + std::to_string(bias->size()) + " does not match " +
                     std::to_string(c.cols()) + " output columns");
  }
  const double scale = static_cast<double>(qa.scale()) * static_cast<double>(qb.scale());
  F32Matrix out(c.rows(), c.cols());
  for (std::size_t i = 0; i < c.rows(); ++i) {
    for (std::size_t j = 0; j < c.cols(); ++j) {
      double v = static_cast<double>(c(i, j)) * scale;
      if (bias) v += (*bias)[j];
      out(i, j) = static_cast<float>(v);
    }
  }
  return out;
}

}  // namespace tmma
