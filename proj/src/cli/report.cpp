#include "report.hpp"

#include <algorithm>
#include <cstdio>

#include "tmma/cli.hpp"

namespace tmma::cli {

ordered_json to_json(const TileConfig& config) {
  return {{"t", config.tile_size},
          {"block_m", config.block_m},
          {"max_n", config.max_n},
          {"max_k", config.max_k}};
}

ordered_json to_json(const HwParams& hw) {
  return {{"clock_hz", hw.clock_hz},
          {"bus_bytes_per_cycle", hw.bus_bytes_per_cycle},
          {"pipeline_fill", hw.pipeline_fill}};
}

ordered_json to_json(const GemmDims& dims) { return {{"n", dims.n}, {"k", dims.k}, {"m", dims.m}}; }

ordered_json to_json(const PerfEstimate& perf) {
  return {{"mac_count", perf.mac_count},
          {"flop_count", perf.flop_count},
          {"compute_cycles", perf.compute_cycles},
          {"a_load_cycles", perf.a_load_cycles},
          {"b_load_cycles", perf.b_load_cycles},
          {"c_store_cycles", perf.c_store_cycles},
          {"total_cycles_serial", perf.total_cycles_serial},
          {"total_cycles_overlapped", perf.total_cycles_overlapped},
          {"latency_compute_s", perf.latency_compute_s},
          {"latency_serial_s", perf.latency_serial_s},
          {"latency_overlapped_s", perf.latency_overlapped_s},
          {"gflops_compute", perf.gflops_compute},
          {"gflops_serial", perf.gflops_serial},
          {"gflops_overlapped", perf.gflops_overlapped}};
}

ordered_json to_json(const ResourceEstimate& res) {
  return {{"dsp_estimate", res.dsp_estimate},
          {"lut_spill", res.lut_spill},
          {"bram_bytes", res.bram_bytes},
          {"bram_blocks", res.bram_blocks},
          {"bram_block_limit", res.bram_block_limit},
          {"fits_raw", res.fits_raw},
          {"feasible", res.feasible}};
}

ordered_json to_json(const TrafficReport& traffic) {
  return {{"a_bytes_read", traffic.a_bytes_read},
          {"b_bytes_read", traffic.b_bytes_read},
          {"c_bytes_written", traffic.c_bytes_written},
          {"a_loads", traffic.a_loads},
          {"b_blocks_streamed", traffic.b_blocks_streamed},
          {"total_bytes", traffic.total_bytes()}};
}

ordered_json to_json(const DseRow& row) {
  return {{"config", to_json(row.config)},
          {"dims", to_json(row.dims)},
          {"perf", to_json(row.perf)},
          {"resources", to_json(row.resources)}};
}

std::string checksum_hex(std::uint64_t value) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(value));
  return buf;
}

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

ordered_json report_header(const std::string& command, const std::vector<std::string>& args) {
  return {{"schema", kReportSchemaVersion}, {"command", command}, {"argv", args}};
}

}  // namespace tmma::cli
