#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tmma/tiled_engine.hpp"

namespace tmma {

struct GemmDims {
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t m = 0;

  std::uint64_t mac_count() const noexcept {
    return static_cast<std::uint64_t>(n) * k * m;
  }
  std::uint64_t flop_count() const noexcept { return 2 * mac_count(); }

  bool operator==(const GemmDims&) const = default;
};

// Clock and interface knobs. The bus width is not published for the original
// design; 16 bytes/cycle corresponds to a 128-bit AXI port at the PL clock.
struct HwParams {
  double clock_hz = 100e6;
  std::uint64_t bus_bytes_per_cycle = 16;
  std::uint64_t pipeline_fill = 8;

  void validate() const;
};

/// Multipliers in the fully unrolled T x T array.
inline std::uint64_t macs_per_cycle(const TileConfig& config) noexcept {
  return static_cast<std::uint64_t>(config.tile_size) * config.tile_size;
}

/// 2 * T^2 * clock, in GFLOP/s.
double peak_gflops(const TileConfig& config, const HwParams& hw);

struct PerfEstimate {
  std::uint64_t mac_count = 0;
  std::uint64_t flop_count = 0;

  std::uint64_t compute_cycles = 0;
  std::uint64_t a_load_cycles = 0;
  std::uint64_t b_load_cycles = 0;
  std::uint64_t c_store_cycles = 0;
  std::uint64_t total_cycles_serial = 0;
  std::uint64_t total_cycles_overlapped = 0;

  double latency_compute_s = 0.0;
  double latency_serial_s = 0.0;
  double latency_overlapped_s = 0.0;

  double gflops_compute = 0.0;
  double gflops_serial = 0.0;
  double gflops_overlapped = 0.0;
};

/// Closed-form cycle model.
///
///   compute  = ceil(N/T) * ceil(M/T) * (K + fill)   one pipelined K loop per output tile, II=1
///   a_load   = ceil(N*K / bus)  (only when A is reloaded)
///   b_load   = ceil(K*M / bus)
///   c_store  = ceil(4*N*M / bus)
///   serial     = a_load + compute + b_load + c_store
///   overlapped = a_load + max(compute, b_load) + c_store
///
/// Serial is the dataflow as built; overlapped is a what-if for double
/// buffering of B.
PerfEstimate estimate_cycles(const GemmDims& dims, const TileConfig& config, const HwParams& hw,
                             UpdateA update_a);

struct DeviceProfile {
  std::string name = "xck26";
  std::uint64_t dsp_total = 1248;
  std::uint64_t bram_blocks_total = 144;  // 36 Kbit blocks
  std::uint64_t lut_total = 118800;
  std::uint64_t ff_total = 237600;
  // Fraction of BRAM a routable design can actually use.
  double bram_utilization_margin = 0.88;

  void validate() const;

  std::uint64_t usable_bram_blocks() const;
};

inline constexpr std::uint64_t kBramBlockBytes = 4608;  // 36 Kbit

struct ResourceEstimate {
  std::uint64_t dsp_estimate = 0;
  /// Multipliers that would have to be built from LUTs once DSPs run out.
  std::uint64_t lut_spill = 0;
  /// Persistent A buffer plus one staged K x block_m block of B.
  std::uint64_t bram_bytes = 0;
  std::uint64_t bram_blocks = 0;
  std::uint64_t bram_block_limit = 0;
  /// Fits against the raw device totals.
  bool fits_raw = false;
  /// Fits with the BRAM utilization margin applied.
  bool feasible = false;
};

ResourceEstimate estimate_resources(const TileConfig& config, const DeviceProfile& device = {});

struct DseRow {
  TileConfig config;
  GemmDims dims;
  PerfEstimate perf;
  ResourceEstimate resources;
};

/// Cartesian product dims x tile_sizes x block_ms, with max_n/max_k taken from
/// `base`. A reload of A is charged for every row. Throws std::invalid_argument
/// on an empty list.
std::vector<DseRow> dse_sweep(std::span<const GemmDims> dims, std::span<const std::size_t> tile_sizes,
                              std::span<const std::size_t> block_ms, const TileConfig& base,
                              const HwParams& hw, const DeviceProfile& device);

inline constexpr const char* kDseCsvHeader =
    "t,block_m,n,k,m,compute_cycles,total_cycles,latency_s,gflops,dsp,bram_blocks,feasible";

std::string dse_to_csv(std::span<const DseRow> rows);

}  // namespace tmma
