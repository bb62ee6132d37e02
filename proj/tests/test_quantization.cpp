#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "test_support.hpp"
#include "tmma/quantization.hpp"

namespace tmma {
namespace {

TEST(Calibrate, MaxAbsOver127) {
  const auto q = calibrate(F32Matrix::from_rows({{-2.54f, 1.0f}}));
  EXPECT_NEAR(q.scale(), 0.02f, 1e-7f);
  EXPECT_EQ(QuantParams::zero_point, 0);
}

TEST(Calibrate, AllZeroUsesUnitScale) {
  EXPECT_EQ(calibrate(F32Matrix(2, 2)).scale(), 1.0f);
}

TEST(Calibrate, MaxAbsOf127GivesUnitScale) {
  EXPECT_EQ(calibrate(F32Matrix::from_rows({{127.0f}})).scale(), 1.0f);
}

TEST(Calibrate, RejectsNonFinite) {
  F32Matrix x(1, 2);
  x(0, 1) = std::nanf("");
  EXPECT_THROW(calibrate(x), ValueError);
}

TEST(QuantParamsType, RejectsBadScale) {
  EXPECT_THROW(QuantParams(0.0f), ValueError);
  EXPECT_THROW(QuantParams(-1.0f), ValueError);
  EXPECT_THROW(QuantParams{INFINITY}, ValueError);
  EXPECT_THROW(QuantParams(std::nanf("")), ValueError);
}

TEST(Quantize, ZeroMapsToZero) {
  EXPECT_EQ(quantize(F32Matrix::from_rows({{0.0f}}), QuantParams(0.5f)), Int8Matrix::from_rows({{0}}));
}

TEST(Quantize, ExactGridPoints) {
  const auto q = quantize(F32Matrix::from_rows({{1.0f, -1.0f}}), QuantParams(1.0f / 127.0f));
  EXPECT_EQ(q, Int8Matrix::from_rows({{127, -127}}));
}

TEST(Quantize, ClampsToSymmetricRange) {
  const QuantParams q(0.01f);
  EXPECT_EQ(quantize(F32Matrix::from_rows({{1000.0f}}), q), Int8Matrix::from_rows({{127}}));
  EXPECT_EQ(quantize(F32Matrix::from_rows({{-1000.0f}}), q), Int8Matrix::from_rows({{-127}}));
}

TEST(Quantize, HalfwayRoundsAwayFromZero) {
  const auto q = quantize(F32Matrix::from_rows({{0.5f, -0.5f, 1.5f, -2.5f}}), QuantParams(1.0f));
  EXPECT_EQ(q, Int8Matrix::from_rows({{1, -1, 2, -3}}));
}

TEST(Quantize, PreservesShape) {
  const auto q = quantize(random_matrix<float>(3, 9, 4), QuantParams(0.1f));
  EXPECT_EQ(q.rows(), 3u);
  EXPECT_EQ(q.cols(), 9u);
}

TEST(QuantizeProperty, NegationSymmetry) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    auto x = random_matrix<float>(testing::uniform_in(rng, 1, 16), testing::uniform_in(rng, 1, 16), rng());
    const float gain = static_cast<float>(testing::uniform_in(rng, 1, 400)) / 10.0f;
    for (float& v : x.data()) v *= gain;
    F32Matrix neg = x;
    for (float& v : neg.data()) v = -v;
    const QuantParams q = calibrate(x);
    const auto pos_q = quantize(x, q);
    const auto neg_q = quantize(neg, q);
    for (std::size_t i = 0; i < x.size(); ++i) {
      ASSERT_EQ(neg_q.data()[i], -pos_q.data()[i]);
      ASSERT_NE(pos_q.data()[i], -128);
    }
  }
}

TEST(QuantizeProperty, RoundTripWithinHalfStep) {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 50; ++trial) {
    const auto x = random_matrix<float>(testing::uniform_in(rng, 1, 20), testing::uniform_in(rng, 1, 20), rng());
    const QuantParams q = calibrate(x);
    const auto back = dequantize(quantize(x, q), q);
    const double half_step = 0.5 * q.scale();
    for (std::size_t i = 0; i < x.size(); ++i) {
      ASSERT_LE(std::fabs(double{back.data()[i]} - double{x.data()[i]}), half_step * (1 + 1e-6));
    }
  }
}

TEST(DequantizeGemmOutput, ScalesProduct) {
  const auto out = dequantize_gemm_output(Int32Matrix::from_rows({{100}}), QuantParams(0.1f), QuantParams(0.2f));
  EXPECT_NEAR(out(0, 0), 2.0f, 1e-6f);
}

TEST(DequantizeGemmOutput, ZeroAccumulatorYieldsBias) {
  const std::vector<float> bias{3.5f};
  const auto out = dequantize_gemm_output(Int32Matrix(1, 1), QuantParams(0.7f), QuantParams(0.3f),
                                          std::span<const float>(bias));
  EXPECT_EQ(out(0, 0), 3.5f);
}

TEST(DequantizeGemmOutput, BiasLengthMismatch) {
  const std::vector<float> bias{1.0f, 2.0f};
  EXPECT_THROW(dequantize_gemm_output(Int32Matrix(2, 3), QuantParams(1.0f), QuantParams(1.0f),
                                      std::span<const float>(bias)),
               ShapeError);
}

// Quantized pipeline on one 4x4 case. Each element's deviation from the float
// product is bounded by the half-step round-trip error of both operands:
//   |err_ij| <= sum_k (|x_ik| sw/2 + |w_kj| sx/2 + sx sw / 4)
TEST(QuantizedPipeline, SmallCaseWithinRoundTripBound) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto x = random_matrix<float>(4, 4, 100 + seed);
    const auto w = random_matrix<float>(4, 4, 200 + seed);
    const QuantParams qx = calibrate(x);
    const QuantParams qw = calibrate(w);
    const auto out = dequantize_gemm_output(naive_gemm(quantize(x, qx), quantize(w, qw)), qx, qw);
    const auto ref = testing::float_gemm_f64(x, w);
    const double sx = qx.scale();
    const double sw = qw.scale();
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < 4; ++j) {
        double bound = 0.0;
        for (std::size_t k = 0; k < 4; ++k) {
          bound += std::fabs(x(i, k)) * sw / 2 + std::fabs(w(k, j)) * sx / 2 + sx * sw / 4;
        }
        ASSERT_LE(std::fabs(out(i, j) - ref[i * 4 + j]), bound * (1 + 1e-5) + 1e-6) << seed;
      }
    }
  }
}

struct GaussianGemm {
  F32Matrix x;
  F32Matrix w;
  double error;
  double predicted;
};

GaussianGemm run_gaussian_gemm(std::uint64_t seed) {
  auto x = random_matrix<float>(64, 768, seed);
  auto w = random_matrix<float>(768, 768, seed + 1000);
  const QuantParams qx = calibrate(x);
  const QuantParams qw = calibrate(w);
  const auto out = dequantize_gemm_output(naive_gemm(quantize(x, qx), quantize(w, qw)), qx, qw);
  const double error = testing::rel_frobenius(out, testing::float_gemm_f64(x, w));
  auto variance = [](const F32Matrix& m) {
    double s = 0.0;
    double sq = 0.0;
    for (float v : m.data()) {
      s += v;
      sq += double{v} * v;
    }
    const double n = static_cast<double>(m.size());
    return sq / n - (s / n) * (s / n);
  };
  // Uniform rounding noise of variance step^2/12 on each operand.
  const double sx = qx.scale();
  const double sw = qw.scale();
  const double predicted = std::sqrt(sx * sx / 12 / variance(x) + sw * sw / 12 / variance(w));
  return {std::move(x), std::move(w), error, predicted};
}

TEST(QuantizedPipeline, ErrorMatchesRoundingNoiseModel) {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto r = run_gaussian_gemm(seed);
    EXPECT_NEAR(r.error / r.predicted, 1.0, 0.15) << "error " << r.error << " predicted " << r.predicted;
  }
}

// The documented accuracy target for Gaussian operands at (64x768)x(768x768).
// Max-abs per-tensor int8 sits near 1.5% here (see ErrorMatchesRoundingNoiseModel),
// so this is expected to fail until the calibration rule changes.
TEST(QuantizedPipeline, EndToEndErrorBelowHalfPercent) {
  const auto r = run_gaussian_gemm(0);
  EXPECT_LT(r.error, 0.005);
}

}  // namespace
}  // namespace tmma
