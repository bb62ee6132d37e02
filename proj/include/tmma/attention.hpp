#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "tmma/matrix.hpp"
#include "tmma/quantization.hpp"
#include "tmma/tiled_engine.hpp"

namespace tmma {

/// Linear projection y = x W + b with int8 weights, offloaded to the tiled
/// engine. The weight is stored pre-transposed (in_features x out_features) so
/// the activation is the persistent A operand and the weight is the streamed
/// B operand. Immutable once built.
class QuantizedLinear {
 public:
  QuantizedLinear(Int8Matrix weight_q, QuantParams weight_scale,
                  std::optional<std::vector<float>> bias = std::nullopt);

  /// Quantizes a float weight once, with max-abs calibration.
  static QuantizedLinear from_float(const F32Matrix& weight,
                                    std::optional<std::vector<float>> bias = std::nullopt);

  /// Loads a weight from a TMM1 file. An f32 weight is quantized on load; an
  /// int8 weight needs `int8_scale`. The optional bias file holds a 1 x out
  /// f32 matrix.
  static QuantizedLinear load(const std::filesystem::path& weight_path,
                              const std::optional<std::filesystem::path>& bias_path = std::nullopt,
                              std::optional<QuantParams> int8_scale = std::nullopt);

  std::size_t in_features() const noexcept { return weight_q_.rows(); }
  std::size_t out_features() const noexcept { return weight_q_.cols(); }
  const Int8Matrix& weight_q() const noexcept { return weight_q_; }
  QuantParams weight_scale() const noexcept { return weight_scale_; }
  const std::optional<std::vector<float>>& bias() const noexcept { return bias_; }

 private:
  Int8Matrix weight_q_;
  QuantParams weight_scale_;
  std::optional<std::vector<float>> bias_;
};

/// Quantize x, run the GEMM on the engine, dequantize and add bias.
///
/// The activation scale is calibrated from x unless `activation_scale` is
/// given. With `reuse_activation`, the engine is called with UpdateA::no and
/// the resident A must be the quantized x from a previous call (its shape is
/// checked; its contents are the caller's responsibility).
F32Matrix forward(const QuantizedLinear& layer, const F32Matrix& x, AcceleratorState& state,
                  bool reuse_activation, std::optional<QuantParams> activation_scale = std::nullopt);

struct QkvResult {
  F32Matrix q;
  F32Matrix k;
  F32Matrix v;
  TrafficReport traffic;  // delta over the three projections
};

/// Q, K and V projections of one activation with a single A load.
QkvResult qkv_project(const F32Matrix& x, const QuantizedLinear& wq, const QuantizedLinear& wk,
                      const QuantizedLinear& wv, AcceleratorState& state,
                      std::optional<QuantParams> activation_scale = std::nullopt);

/// Float reference x W + b, accumulated in double.
F32Matrix reference_linear(const F32Matrix& x, const F32Matrix& weight,
                           std::optional<std::span<const float>> bias = std::nullopt);

/// ||approx - reference||_F / ||reference||_F.
double relative_frobenius_error(const F32Matrix& approx, const F32Matrix& reference);

}  // namespace tmma
