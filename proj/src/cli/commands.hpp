#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "tmma/cli.hpp"
#include "tmma/perf_model.hpp"

namespace tmma::cli {

// Bad flag combination detected after parsing (exit 2).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The tool caught itself producing a wrong answer (exit 3).
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct CommonOptions {
  TileConfig config;
  HwParams hw;
  std::uint64_t seed = 0;
  bool csv = false;
  std::string out;
};

struct GemmOptions {
  CommonOptions common;
  std::size_t n = 64;
  std::size_t k = 768;
  std::size_t m = 768;
  std::string a_path;
  std::string b_path;
  bool check = false;
};

struct VerifyOptions {
  CommonOptions common;
  std::vector<std::size_t> tile_sizes{32};
  std::vector<std::size_t> block_ms{256};
  std::size_t trials = 50;
  std::size_t n_max = 0;  // 0: use max_n
  std::size_t k_max = 0;  // 0: use max_k
  std::size_t m_max = 3072;
};

struct BenchOptions {
  CommonOptions common;
  std::vector<std::string> cases{"attn", "ffn"};
  std::size_t trials = 3;
};

struct DseOptions {
  CommonOptions common;
  std::vector<std::size_t> tile_sizes{16, 32, 64};
  std::vector<std::size_t> block_ms{256};
  std::vector<std::string> dims{"64x768x3072"};
  DeviceProfile device;
};

struct TrafficOptions {
  CommonOptions common;
  std::size_t n = 64;
  std::size_t k = 768;
  std::size_t m = 768;
  std::uint64_t calls = 1;
};

struct AttnDemoOptions {
  CommonOptions common;
  std::size_t seq = 64;
  std::size_t hidden = 768;
  std::size_t out_features = 768;
};

struct CommandContext {
  const std::vector<std::string>& args;
  std::ostream& out;
  std::ostream& err;
  const Hooks& hooks;
};

int cmd_gemm(const GemmOptions& opts, const CommandContext& ctx);
int cmd_verify(const VerifyOptions& opts, const CommandContext& ctx);
int cmd_bench(const BenchOptions& opts, const CommandContext& ctx);
int cmd_dse(const DseOptions& opts, const CommandContext& ctx);
int cmd_traffic(const TrafficOptions& opts, const CommandContext& ctx);
int cmd_attn_demo(const AttnDemoOptions& opts, const CommandContext& ctx);

/// Parses "NxKxM".
GemmDims parse_dims(const std::string& text);

}  // namespace tmma::cli
