#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

#include "tmma/perf_model.hpp"
#include "tmma/tiled_engine.hpp"

namespace tmma {

// External-memory dataflows compared by the traffic model.
enum class DataflowKind {
  persistent_tiled,  // A resident across calls, B staged in column blocks
  no_persistence,    // same blocking, but A reloaded on every call
  untiled_naive,     // no on-chip reuse: every operand fetched per MAC
};

inline constexpr std::array<DataflowKind, 3> kAllDataflows{
    DataflowKind::persistent_tiled, DataflowKind::no_persistence, DataflowKind::untiled_naive};

std::string_view dataflow_name(DataflowKind kind);
std::optional<DataflowKind> parse_dataflow(std::string_view name);

/// Closed-form traffic for `calls` GEMMs that share one A operand.
///
/// persistent_tiled: A = N*K once, B = calls*K*M, C = calls*4*N*M
/// no_persistence:   A = calls*N*K, B and C as above
/// untiled_naive:    per call A = B = N*K*M (one byte per MAC), C = 4*N*M
///
/// Event counters follow the same conventions: a_loads counts A fetch events
/// (1, calls, calls) and b_blocks_streamed counts staged B blocks of width
/// block_m (untiled streams none).
TrafficReport traffic_for(DataflowKind kind, const GemmDims& dims, std::uint64_t calls_sharing_a,
                          std::size_t block_m = TileConfig{}.block_m);

/// total_bytes(untiled_naive) / total_bytes(kind).
double reuse_factor(DataflowKind kind, const GemmDims& dims, std::uint64_t calls_sharing_a,
                    std::size_t block_m = TileConfig{}.block_m);

}  // namespace tmma
