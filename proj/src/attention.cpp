#include "tmma/attention.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tmma/matrix_io.hpp"

namespace tmma {

QuantizedLinear::QuantizedLinear(Int8Matrix weight_q, QuantParams weight_scale,
                                 std::optional<std::vector<float>> bias)
    : weight_q_(std::move(weight_q)), weight_scale_(weight_scale), bias_(std::move(bias)) {
  if (bias_ && bias_->size() != weight_q_.cols()) {
    throw ShapeError("bias length " + std::to_string(bias_->size()) + " does not match out_features " +
                     std::to_string(weight_q_.cols()));
  }
}

QuantizedLinear QuantizedLinear::from_float(const F32Matrix& weight, std::optional<std::vector<float>> bias) {
  const QuantParams scale = calibrate(weight);
  return QuantizedLinear(quantize(weight, scale), scale, std::move(bias));
}

QuantizedLinear QuantizedLinear::load(const std::filesystem::path& weight_path,
                                      const std::optional<std::filesystem::path>& bias_path,
                                      std::optional<QuantParams> int8_scale) {
  std::optional<std::vector<float>> bias;
  if (bias_path) {
    const F32Matrix b = read_matrix_as<float>(*bias_path);
    if (b.rows() != 1) throw ShapeError("bias file must hold a single row");
    bias.emplace(b.data().begin(), b.data().end());
  }
  AnyMatrix w = read_matrix(weight_path);
  if (auto* wf = std::get_if<F32Matrix>(&w)) return from_float(*wf, std::move(bias));
  if (auto* wq = std::get_if<Int8Matrix>(&w)) {
    if (!int8_scale) throw ValueError(weight_path.string() + ": int8 weight needs an explicit scale");
    return QuantizedLinear(std::move(*wq), *int8_scale, std::move(bias));
  }
  throw FormatError(weight_path.string() + ": weight must be f32 or int8");
}

F32Matrix forward(const QuantizedLinear& layer, const F32Matrix& x, AcceleratorState& state,
                  bool reuse_activation, std::optional<QuantParams> activation_scale) {
  if (x.cols() != layer.in_features()) {
    throw ShapeError("activation has " + std::to_string(x.cols()) + " features, layer expects " +
                     std::to_string(layer.in_features()));
  }
  const QuantParams qa = activation_scale ? *activation_scale : calibrate(x);

  Int32Matrix acc = [&] {
    if (reuse_activation) {
      const auto resident = state.loaded_dims();
      if (resident && resident->rows != x.rows()) {
        throw ShapeError("resident activation has " + std::to_string(resident->rows) + " rows, x has " +
                         std::to_string(x.rows()));
      }
      return state.tiled_gemm(nullptr, layer.weight_q(), UpdateA::no);
    }
    const Int8Matrix xq = quantize(x, qa);
    return state.tiled_gemm(&xq, layer.weight_q(), UpdateA::yes);
  }();

  std::optional<std::span<const float>> bias;
  if (layer.bias()) bias = std::span<const float>(*layer.bias());
  return dequantize_gemm_output(acc, qa, layer.weight_scale(), bias);
}

QkvResult qkv_project(const F32Matrix& x, const QuantizedLinear& wq, const QuantizedLinear& wk,
                      const QuantizedLinear& wv, AcceleratorState& state,
                      std::optional<QuantParams> activation_scale) {
  if (wq.in_features() != x.cols() || wk.in_features() != x.cols() || wv.in_features() != x.cols()) {
    throw ShapeError("Q/K/V layers must all take " + std::to_string(x.cols()) + " input features");
  }
  if (wk.out_features() != wq.out_features() || wv.out_features() != wq.out_features()) {
    throw ShapeError("Q/K/V layers must share out_features");
  }
  const QuantParams qa = activation_scale ? *activation_scale : calibrate(x);
  const TrafficReport before = state.traffic();
  F32Matrix q = forward(wq, x, state, false, qa);
  F32Matrix k = forward(wk, x, state, true, qa);
  F32Matrix v = forward(wv, x, state, true, qa);
  return QkvResult{std::move(q), std::move(k), std::move(v), state.traffic() - before};
}

F32Matrix reference_linear(const F32Matrix& x, const F32Matrix& weight,
                           std::optional<std::span<const float>> bias) {
  if (x.cols() != weight.rows()) throw ShapeError("reference_linear: inner dimensions differ");
  if (bias && bias->size() != weight.cols()) throw ShapeError("reference_linear: bias length mismatch");
  const std::size_t n = x.rows();
  const std::size_t k_dim = x.cols();
  const std::size_t m = weight.cols();
  std::vector<double> acc(m);
  F32Matrix out(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    std::fill(acc.begin(), acc.end(), 0.0);
    for (std::size_t k = 0; k < k_dim; ++k) {
      const double xv = x(i, k);
      auto w_row = weight.row(k);
      for (std::size_t j = 0; j < m; ++j) acc[j] += xv * w_row[j];
    }
    for (std::size_t j = 0; j < m; ++j) out(i, j) = static_cast<float>(acc[j] + (bias ? (*bias)[j] : 0.0f));
  }
  return out;
}

double relative_frobenius_error(const F32Matrix& approx, const F32Matrix& reference) {
  if (approx.rows() != reference.rows() || approx.cols() != reference.cols()) {
    throw ShapeError("relative_frobenius_error: shapes differ");
  }
  double diff = 0.0;
  double norm = 0.0;
  for (std::size_t i = 0; i < approx.size(); ++i) {
    const double r = reference.data()[i];
    const double d = static_cast<double>(approx.data()[i]) - r;
    diff += d * d;
    norm += r * r;
  }
  if (norm == 0.0) return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::sqrt(diff / norm);
}

}  // namespace tmma
