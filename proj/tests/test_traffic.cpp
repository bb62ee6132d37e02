#include <gtest/gtest.h>

#include <random>

#include "test_support.hpp"
#include "tmma/traffic_analysis.hpp"

namespace tmma {
namespace {

constexpr GemmDims kAttn{64, 768, 768};

TEST(Dataflow, NamesRoundTrip) {
  for (auto kind : kAllDataflows) EXPECT_EQ(parse_dataflow(dataflow_name(kind)), kind);
  EXPECT_FALSE(parse_dataflow("systolic"));
}

TEST(TrafficFor, PersistentTiledThreeCalls) {
  const auto r = traffic_for(DataflowKind::persistent_tiled, kAttn, 3);
  EXPECT_EQ(r.a_bytes_read, 49152u);
  EXPECT_EQ(r.b_bytes_read, 3u * 589824u);
  EXPECT_EQ(r.c_bytes_written, 3u * 196608u);
  EXPECT_EQ(r.a_loads, 1u);
  EXPECT_EQ(r.b_blocks_streamed, 9u);
}

TEST(TrafficFor, NoPersistenceReloadsA) {
  const auto r = traffic_for(DataflowKind::no_persistence, kAttn, 3);
  EXPECT_EQ(r.a_bytes_read, 147456u);
  EXPECT_EQ(r.a_loads, 3u);
  const auto tiled = traffic_for(DataflowKind::persistent_tiled, kAttn, 3);
  EXPECT_DOUBLE_EQ(static_cast<double>(r.a_bytes_read) / static_cast<double>(tiled.a_bytes_read), 3.0);
  EXPECT_EQ(r.b_bytes_read, tiled.b_bytes_read);
  EXPECT_EQ(r.c_bytes_written, tiled.c_bytes_written);
}

TEST(TrafficFor, UntiledFetchesPerMac) {
  const auto r = traffic_for(DataflowKind::untiled_naive, kAttn, 1);
  EXPECT_EQ(r.a_bytes_read, 64u * 768u * 768u);
  EXPECT_EQ(r.b_bytes_read, 64u * 768u * 768u);
  EXPECT_EQ(r.c_bytes_written, 196608u);
  EXPECT_EQ(r.b_blocks_streamed, 0u);
}

TEST(TrafficFor, SingleCallPersistenceIsIrrelevant) {
  EXPECT_EQ(traffic_for(DataflowKind::persistent_tiled, kAttn, 1), traffic_for(DataflowKind::no_persistence, kAttn, 1));
}

TEST(TrafficFor, RejectsZeroInputs) {
  EXPECT_THROW(traffic_for(DataflowKind::persistent_tiled, kAttn, 0), ValueError);
  EXPECT_THROW(traffic_for(DataflowKind::persistent_tiled, {0, 1, 1}, 1), ValueError);
  EXPECT_THROW(traffic_for(DataflowKind::persistent_tiled, kAttn, 1, 0), ValueError);
}

TEST(ReuseFactor, AttentionShape) {
  EXPECT_DOUBLE_EQ(reuse_factor(DataflowKind::untiled_naive, kAttn, 1), 1.0);
  const double tiled = reuse_factor(DataflowKind::persistent_tiled, kAttn, 1);
  const double expected = (2.0 * 64 * 768 * 768 + 196608) / (49152.0 + 589824 + 196608);
  EXPECT_DOUBLE_EQ(tiled, expected);
  EXPECT_GT(tiled, 90.0);
}

TEST(TrafficProperty, ReuseNonDecreasingInCalls) {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 100; ++trial) {
    const GemmDims d{testing::uniform_in(rng, 1, 128), testing::uniform_in(rng, 1, 2048),
                     testing::uniform_in(rng, 1, 4096)};
    double previous = 0.0;
    for (std::uint64_t calls = 1; calls <= 10; ++calls) {
      const double r = reuse_factor(DataflowKind::persistent_tiled, d, calls);
      EXPECT_GE(r, previous * (1 - 1e-12));
      previous = r;
    }
  }
}

TEST(TrafficProperty, DataflowOrdering) {
  std::mt19937_64 rng(52);
  for (int trial = 0; trial < 200; ++trial) {
    const GemmDims d{testing::uniform_in(rng, 1, 128), testing::uniform_in(rng, 1, 2048),
                     testing::uniform_in(rng, 1, 4096)};
    const std::uint64_t calls = testing::uniform_in(rng, 1, 16);
    const auto tiled = traffic_for(DataflowKind::persistent_tiled, d, calls);
    const auto reload = traffic_for(DataflowKind::no_persistence, d, calls);
    const auto naive = traffic_for(DataflowKind::untiled_naive, d, calls);
    EXPECT_LE(tiled.total_bytes(), reload.total_bytes());
    EXPECT_LE(reload.total_bytes(), naive.total_bytes());
    EXPECT_EQ(reload.total_bytes() - tiled.total_bytes(), (calls - 1) * d.n * d.k);
  }
}

TEST(TrafficProperty, AnalyticMatchesEngineCounters) {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t n = testing::uniform_in(rng, 1, 64);
    const std::size_t k = testing::uniform_in(rng, 1, 768);
    const std::size_t m = testing::uniform_in(rng, 1, 1200);
    const std::size_t calls = testing::uniform_in(rng, 1, 4);
    TileConfig cfg;
    cfg.block_m = testing::uniform_in(rng, 1, 512);
    AcceleratorState state(cfg);
    const auto a = random_matrix<std::int8_t>(n, k, rng());
    for (std::size_t c = 0; c < calls; ++c) {
      const auto b = random_matrix<std::int8_t>(k, m, rng());
      state.tiled_gemm(c == 0 ? &a : nullptr, b, c == 0 ? UpdateA::yes : UpdateA::no);
    }
    EXPECT_EQ(state.traffic(), traffic_for(DataflowKind::persistent_tiled, {n, k, m}, calls, cfg.block_m));

    AcceleratorState reloading(cfg);
    for (std::size_t c = 0; c < calls; ++c) {
      reloading.tiled_gemm(&a, random_matrix<std::int8_t>(k, m, rng()), UpdateA::yes);
    }
    EXPECT_EQ(reloading.traffic(), traffic_for(DataflowKind::no_persistence, {n, k, m}, calls, cfg.block_m));
  }
}

}  // namespace
}  // namespace tmma
