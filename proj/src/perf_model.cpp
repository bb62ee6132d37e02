#include "tmma/perf_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace tmma {

namespace {

std::uint64_t ceil_div(std::uint64_t num, std::uint64_t den) { return num / den + (num % den != 0); }

double gflops(std::uint64_t flops, double seconds) {
  return seconds > 0.0 ? static_cast<double>(flops) / seconds / 1e9 : 0.0;
}

}  // namespace

void HwParams::validate() const {
  if (!(clock_hz > 0.0) || !std::isfinite(clock_hz)) throw ValueError("clock_hz must be positive");
  if (bus_bytes_per_cycle == 0) throw ValueError("bus_bytes_per_cycle must be positive");
}

double peak_gflops(const TileConfig& config, const HwParams& hw) {
  return 2.0 * static_cast<double>(macs_per_cycle(config)) * hw.clock_hz / 1e9;
}

PerfEstimate estimate_cycles(const GemmDims& dims, const TileConfig& config, const HwParams& hw,
                             UpdateA update_a) {
  if (dims.n == 0 || dims.k == 0 || dims.m == 0) throw ValueError("GEMM dims must be positive");
  config.validate();
  hw.validate();

  const std::uint64_t n = dims.n;
  const std::uint64_t k = dims.k;
  const std::uint64_t m = dims.m;
  const std::uint64_t t = config.tile_size;
  const std::uint64_t bus = hw.bus_bytes_per_cycle;

  PerfEstimate est;
  est.mac_count = dims.mac_count();
  est.flop_count = dims.flop_count();
  est.compute_cycles = ceil_div(n, t) * ceil_div(m, t) * (k + hw.pipeline_fill);
  est.a_load_cycles = update_a == UpdateA::yes ? ceil_div(n * k, bus) : 0;
  est.b_load_cycles = ceil_div(k * m, bus);
  est.c_store_cycles = ceil_div(4 * n * m, bus);
  est.total_cycles_serial = est.a_load_cycles + est.compute_cycles + est.b_load_cycles + est.c_store_cycles;
  est.total_cycles_overlapped =
      est.a_load_cycles + std::max(est.compute_cycles, est.b_load_cycles) + est.c_store_cycles;

  est.latency_compute_s = static_cast<double>(est.compute_cycles) / hw.clock_hz;
  est.latency_serial_s = static_cast<double>(est.total_cycles_serial) / hw.clock_hz;
  est.latency_overlapped_s = static_cast<double>(est.total_cycles_overlapped) / hw.clock_hz;
  est.gflops_compute = gflops(est.flop_count, est.latency_compute_s);
  est.gflops_serial = gflops(est.flop_count, est.latency_serial_s);
  est.gflops_overlapped = gflops(est.flop_count, est.latency_overlapped_s);
  return est;
}

void DeviceProfile::validate() const {
  if (dsp_total == 0 || bram_blocks_total == 0 || lut_total == 0 || ff_total == 0) {
    throw ValueError("device profile totals must be positive");
  }
  if (!(bram_utilization_margin > 0.0) || bram_utilization_margin > 1.0) {
    throw ValueError("bram utilization margin must lie in (0, 1]");
  }
}

std::uint64_t DeviceProfile::usable_bram_blocks() const {
  return static_cast<std::uint64_t>(
      std::floor(static_cast<double>(bram_blocks_total) * bram_utilization_margin));
}

ResourceEstimate estimate_resources(const TileConfig& config, const DeviceProfile& device) {
  config.validate();
  device.validate();
  ResourceEstimate r;
  r.dsp_estimate = macs_per_cycle(config);
  r.lut_spill = r.dsp_estimate > device.dsp_total ? r.dsp_estimate - device.dsp_total : 0;
  r.bram_bytes = static_cast<std::uint64_t>(config.max_n) * config.max_k +
                 static_cast<std::uint64_t>(config.max_k) * config.block_m;
  r.bram_blocks = ceil_div(r.bram_bytes, kBramBlockBytes);
  r.bram_block_limit = device.usable_bram_blocks();
  const bool dsp_ok = r.dsp_estimate <= device.dsp_total;
  r.fits_raw = dsp_ok && r.bram_blocks <= device.bram_blocks_total;
  r.feasible = dsp_ok && r.bram_blocks <= r.bram_block_limit;
  return r;
}

std::vector<DseRow> dse_sweep(std::span<const GemmDims> dims, std::span<const std::size_t> tile_sizes,
                              std::span<const std::size_t> block_ms, const TileConfig& base,
                              const HwParams& hw, const DeviceProfile& device) {
  if (dims.empty() || tile_sizes.empty() || block_ms.empty()) {
    throw std::invalid_argument("dse_sweep: every sweep list must be non-empty");
  }
  std::vector<DseRow> rows;
  rows.reserve(dims.size() * tile_sizes.size() * block_ms.size());
  for (const GemmDims& d : dims) {
    for (std::size_t t : tile_sizes) {
      for (std::size_t bm : block_ms) {
        TileConfig cfg = base;
        cfg.tile_size = t;
        cfg.block_m = bm;
        rows.push_back(DseRow{cfg, d, estimate_cycles(d, cfg, hw, UpdateA::yes),
                              estimate_resources(cfg, device)});
      }
    }
  }
  return rows;
}

std::string dse_to_csv(std::span<const DseRow> rows) {
  std::string out = kDseCsvHeader;
  out += '\n';
  char line[512];
  for (const DseRow& r : rows) {
    std::snprintf(line, sizeof line, "%zu,%zu,%zu,%zu,%zu,%llu,%llu,%.9g,%.9g,%llu,%llu,%s\n",
                  r.config.tile_size, r.config.block_m, r.dims.n, r.dims.k, r.dims.m,
                  static_cast<unsigned long long>(r.perf.compute_cycles),
                  static_cast<unsigned long long>(r.perf.total_cycles_serial), r.perf.latency_serial_s,
                  r.perf.gflops_serial, static_cast<unsigned long long>(r.resources.dsp_estimate),
                  static_cast<unsigned long long>(r.resources.bram_blocks),
                  r.resources.feasible ? "true" : "false");
    out += line;
  }
  return out;
}

}  // namespace tmma
