#include "tmma/traffic_analysis.hpp"

namespace tmma {

std::string_view dataflow_name(DataflowKind kind) {
  switch (kind) {
    case DataflowKind::persistent_tiled:
      return "persistent_tiled";
    case DataflowKind::no_persistence:
      return "no_persistence";
    case DataflowKind::untiled_naive:
      return "untiled_naive";
  }
  return "unknown";
}

std::optional<DataflowKind> parse_dataflow(std::string_view name) {
  for (DataflowKind kind : kAllDataflows) {
    if (dataflow_name(kind) == name) return kind;
  }
  return std::nullopt;
}

TrafficReport traffic_for(DataflowKind kind, const GemmDims& dims, std::uint64_t calls_sharing_a,
                          std::size_t block_m) {
  if (dims.n == 0 || dims.k == 0 || dims.m == 0) throw ValueError("GEMM dims must be positive");
  if (calls_sharing_a == 0) throw ValueError("calls_sharing_a must be at least 1");
  if (block_m == 0) throw ValueError("block_m must be positive");

  const std::uint64_t n = dims.n;
  const std::uint64_t k = dims.k;
  const std::uint64_t m = dims.m;
  const std::uint64_t calls = calls_sharing_a;
  const std::uint64_t blocks_per_call = m / block_m + (m % block_m != 0);

  TrafficReport r;
  r.c_bytes_written = calls * 4 * n * m;
  switch (kind) {
    case DataflowKind::persistent_tiled:
      r.a_bytes_read = n * k;
      r.a_loads = 1;
      r.b_bytes_read = calls * k * m;
      r.b_blocks_streamed = calls * blocks_per_call;
      break;
    case DataflowKind::no_persistence:
      r.a_bytes_read = calls * n * k;
      r.a_loads = calls;
      r.b_bytes_read = calls * k * m;
      r.b_blocks_streamed = calls * blocks_per_call;
      break;
    case DataflowKind::untiled_naive:
      r.a_bytes_read = calls * n * k * m;
      r.a_loads = calls;
      r.b_bytes_read = calls * k * m * n;
      r.b_blocks_streamed = 0;
      break;
  }
  return r;
}

double reuse_factor(DataflowKind kind, const GemmDims& dims, std::uint64_t calls_sharing_a,
                    std::size_t block_m) {
  const auto baseline = traffic_for(DataflowKind::untiled_naive, dims, calls_sharing_a, block_m);
  const auto structured = traffic_for(kind, dims, calls_sharing_a, block_m);
  return static_cast<double>(baseline.total_bytes()) / static_cast<double>(structured.total_bytes());
}

}  // namespace tmma
