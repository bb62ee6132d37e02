#pragma once

#include <optional>
#include <span>

#include "tmma/matrix.hpp"

namespace tmma {

// Symmetric per-tensor int8 quantization: real ~= scale * code, zero point 0.
class QuantParams {
 public:
  static constexpr int zero_point = 0;
  static constexpr int kMaxCode = 127;

  explicit QuantParams(float scale);

  float scale() const noexcept { return scale_; }

  bool operator==(const QuantParams&) const = default;

 private:
  float scale_;
};

/// scale = max|x| / 127, or 1.0 for an all-zero tensor. Rejects non-finite
/// elements with ValueError.
QuantParams calibrate(const F32Matrix& x);

/// clamp(round_half_away_from_zero(x / scale), -127, 127).
Int8Matrix quantize(const F32Matrix& x, QuantParams q);

F32Matrix dequantize(const Int8Matrix& x, QuantParams q);

/// out[i][j] = c[i][j] * qa.scale * qb.scale (+ bias[j]).
F32Matrix dequantize_gemm_output(const Int32Matrix& c, QuantParams qa, QuantParams qb,
                                 std::optional<std::span<const float>> bias = std::nullopt);

}  // namespace tmma
