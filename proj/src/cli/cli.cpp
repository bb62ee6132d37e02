#include "tmma/cli.hpp"

#include <algorithm>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

namespace tmma::cli {

GemmEngine default_engine() {
  return [](AcceleratorState& state, const Int8Matrix* a, const Int8Matrix& b, UpdateA update_a) {
    return state.tiled_gemm(a, b, update_a);
  };
}

namespace {

// Flags shared by every subcommand. Tile size and block width are registered
// separately because dse and verify accept lists for them.
void add_common(CLI::App* cmd, CommonOptions& c, bool single_tile_flags, bool tabular) {
  if (single_tile_flags) {
    cmd->add_option("--t", c.config.tile_size, "Inner tile edge T")->check(CLI::PositiveNumber);
    cmd->add_option("--block-m", c.config.block_m, "B columns per staged block")->check(CLI::PositiveNumber);
  }
  cmd->add_option("--max-n", c.config.max_n, "A buffer rows")->check(CLI::PositiveNumber);
  cmd->add_option("--max-k", c.config.max_k, "A buffer columns")->check(CLI::PositiveNumber);
  cmd->add_option("--clock-hz", c.hw.clock_hz, "Modeled clock frequency")->check(CLI::PositiveNumber);
  cmd->add_option("--bus-bytes", c.hw.bus_bytes_per_cycle, "External bus bytes per cycle")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--fill", c.hw.pipeline_fill, "Pipeline fill/drain cycles per output tile");
  cmd->add_option("--seed", c.seed, "Random seed");
  cmd->add_option("--out", c.out, "Output file");
  auto* json = cmd->add_flag("--json", "JSON output (default)");
  if (tabular) {
    auto* csv = cmd->add_flag("--csv", c.csv, "CSV output");
    json->excludes(csv);
  }
}

void add_size_list(CLI::App* cmd, const std::string& name, std::vector<std::size_t>& values,
                   const std::string& help) {
  cmd->add_option(name, values, help)->delimiter(',')->check(CLI::PositiveNumber);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const Hooks& hooks) {
  CLI::App app{"Tiled int8 matrix-multiplication accelerator model", "tmma"};
  app.require_subcommand(1);

  GemmOptions gemm;
  auto* gemm_cmd = app.add_subcommand("gemm", "Run one tiled GEMM on files or seeded random data");
  add_common(gemm_cmd, gemm.common, true, false);
  gemm_cmd->add_option("--n", gemm.n)->check(CLI::PositiveNumber);
  gemm_cmd->add_option("--k", gemm.k)->check(CLI::PositiveNumber);
  gemm_cmd->add_option("--m", gemm.m)->check(CLI::PositiveNumber);
  gemm_cmd->add_option("--a", gemm.a_path, "A matrix file (TMM1, int8)");
  gemm_cmd->add_option("--b", gemm.b_path, "B matrix file (TMM1, int8)");
  gemm_cmd->add_flag("--check", gemm.check, "Compare against the reference GEMM");

  VerifyOptions verify;
  auto* verify_cmd = app.add_subcommand("verify", "Randomized bit-exactness trials against the reference GEMM");
  add_common(verify_cmd, verify.common, false, false);
  add_size_list(verify_cmd, "--t", verify.tile_sizes, "Tile sizes to cycle through");
  add_size_list(verify_cmd, "--block-m", verify.block_ms, "Block widths to cycle through");
  verify_cmd->add_option("--trials", verify.trials)->check(CLI::PositiveNumber);
  verify_cmd->add_option("--n-max", verify.n_max)->check(CLI::PositiveNumber);
  verify_cmd->add_option("--k-max", verify.k_max)->check(CLI::PositiveNumber);
  verify_cmd->add_option("--m-max", verify.m_max)->check(CLI::PositiveNumber);

  BenchOptions bench;
  auto* bench_cmd = app.add_subcommand("bench", "Benchmark the attn (64x768x768) and ffn (64x768x3072) cases");
  add_common(bench_cmd, bench.common, true, false);
  bench_cmd->add_option("--case", bench.cases, "attn, ffn, or both")->delimiter(',');
  bench_cmd->add_option("--trials", bench.trials)->check(CLI::PositiveNumber);

  DseOptions dse;
  auto* dse_cmd = app.add_subcommand("dse", "Design-space sweep over tile size and block width");
  add_common(dse_cmd, dse.common, false, true);
  add_size_list(dse_cmd, "--t", dse.tile_sizes, "Tile sizes");
  add_size_list(dse_cmd, "--block-m", dse.block_ms, "Block widths");
  dse_cmd->add_option("--dims", dse.dims, "GEMM shapes as NxKxM")->delimiter(',');
  dse_cmd->add_option("--dsp-total", dse.device.dsp_total)->check(CLI::PositiveNumber);
  dse_cmd->add_option("--bram-blocks", dse.device.bram_blocks_total)->check(CLI::PositiveNumber);
  dse_cmd->add_option("--bram-margin", dse.device.bram_utilization_margin)->check(CLI::Range(0.0, 1.0));

  TrafficOptions traffic;
  auto* traffic_cmd = app.add_subcommand("traffic", "External-memory traffic per dataflow");
  add_common(traffic_cmd, traffic.common, true, true);
  traffic_cmd->add_option("--n", traffic.n)->check(CLI::PositiveNumber);
  traffic_cmd->add_option("--k", traffic.k)->check(CLI::PositiveNumber);
  traffic_cmd->add_option("--m", traffic.m)->check(CLI::PositiveNumber);
  traffic_cmd->add_option("--calls", traffic.calls, "GEMM calls sharing one A")->check(CLI::PositiveNumber);

  AttnDemoOptions attn;
  auto* attn_cmd = app.add_subcommand("attn-demo", "Quantized Q/K/V projections with one activation load");
  add_common(attn_cmd, attn.common, true, false);
  attn_cmd->add_option("--seq", attn.seq)->check(CLI::PositiveNumber);
  attn_cmd->add_option("--hidden", attn.hidden)->check(CLI::PositiveNumber);
  attn_cmd->add_option("--out-features", attn.out_features)->check(CLI::PositiveNumber);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitSuccess : kExitUsage;
  }

  const CommandContext ctx{args, out, err, hooks};
  try {
    if (gemm_cmd->parsed()) return cmd_gemm(gemm, ctx);
    if (verify_cmd->parsed()) return cmd_verify(verify, ctx);
    if (bench_cmd->parsed()) return cmd_bench(bench, ctx);
    if (dse_cmd->parsed()) return cmd_dse(dse, ctx);
    if (traffic_cmd->parsed()) return cmd_traffic(traffic, ctx);
    if (attn_cmd->parsed()) return cmd_attn_demo(attn, ctx);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ValueError& e) {
    // Only reachable through flag values (e.g. an oversized --max-k).
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  } catch (const std::logic_error& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  err << "no subcommand\n";
  return kExitUsage;
}

}  // namespace tmma::cli
