#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include "report.hpp"
#include "tmma/attention.hpp"
#include "tmma/matrix_io.hpp"
#include "tmma/traffic_analysis.hpp"

namespace tmma::cli {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Report goes to --out when given, stdout otherwise.
void emit(const CommonOptions& common, const CommandContext& ctx, const std::string& text) {
  if (common.out.empty()) {
    ctx.out << text;
    return;
  }
  std::ofstream file(common.out, std::ios::trunc);
  if (!file) throw IoError("cannot open " + common.out + " for writing");
  file << text;
  if (!file) throw IoError("short write to " + common.out);
}

void emit_json(const CommonOptions& common, const CommandContext& ctx, const ordered_json& report) {
  emit(common, ctx, report.dump(2) + "\n");
}

AcceleratorState make_state(const TileConfig& config, const CommandContext& ctx) {
  AcceleratorState state(config);
  std::ostream* err = &ctx.err;
  state.set_warning_sink([err](std::string_view msg) { *err << "warning: " << msg << '\n'; });
  return state;
}

GemmDims dims_for_case(const std::string& name) {
  if (name == "attn") return {64, 768, 768};
  if (name == "ffn") return {64, 768, 3072};
  throw UsageError("unknown bench case '" + name + "' (expected attn or ffn)");
}

}  // namespace

GemmDims parse_dims(const std::string& text) {
  GemmDims d;
  char x1 = 0;
  char x2 = 0;
  std::istringstream in(text);
  if (!(in >> d.n >> x1 >> d.k >> x2 >> d.m) || x1 != 'x' || x2 != 'x' || !in.eof() || d.n == 0 ||
      d.k == 0 || d.m == 0) {
    throw UsageError("bad dims '" + text + "', expected NxKxM with positive entries");
  }
  return d;
}

int cmd_gemm(const GemmOptions& opts, const CommandContext& ctx) {
  if (opts.a_path.empty() != opts.b_path.empty()) throw UsageError("--a and --b must be given together");
  const bool from_files = !opts.a_path.empty();
  const Int8Matrix a = from_files ? read_matrix_as<std::int8_t>(opts.a_path)
                                  : random_matrix<std::int8_t>(opts.n, opts.k, opts.common.seed);
  const Int8Matrix b = from_files ? read_matrix_as<std::int8_t>(opts.b_path)
                                  : random_matrix<std::int8_t>(opts.k, opts.m, opts.common.seed + 1);
  const GemmDims dims{a.rows(), a.cols(), b.cols()};

  AcceleratorState state = make_state(opts.common.config, ctx);
  const auto start = Clock::now();
  const Int32Matrix c = ctx.hooks.engine(state, &a, b, UpdateA::yes);
  const double wall = seconds_since(start);

  std::optional<bool> verified;
  if (opts.check) {
    verified = c == naive_gemm(a, b);
    if (!*verified) throw InternalError("tiled output differs from the reference GEMM");
  }
  if (!opts.common.out.empty()) write_matrix(opts.common.out, c);

  ordered_json report = report_header("gemm", ctx.args);
  report["source"] = from_files ? "files" : "random";
  report["dims"] = to_json(dims);
  report["config"] = to_json(opts.common.config);
  report["hw"] = to_json(opts.common.hw);
  report["wall_time_seconds"] = wall;
  report["checksum"] = checksum_hex(checksum(c));
  report["perf"] = to_json(estimate_cycles(dims, opts.common.config, opts.common.hw, UpdateA::yes));
  report["resources"] = to_json(estimate_resources(opts.common.config));
  report["traffic"] = to_json(state.traffic());
  report["verified"] = verified ? ordered_json(*verified) : ordered_json(nullptr);
  ctx.out << report.dump(2) << '\n';
  return kExitSuccess;
}

int cmd_verify(const VerifyOptions& opts, const CommandContext& ctx) {
  if (opts.trials == 0) throw UsageError("--trials must be at least 1");
  if (opts.tile_sizes.empty() || opts.block_ms.empty()) throw UsageError("--t and --block-m need values");
  const TileConfig& base = opts.common.config;
  const std::size_t n_max = opts.n_max ? opts.n_max : base.max_n;
  const std::size_t k_max = opts.k_max ? opts.k_max : base.max_k;
  if (n_max > base.max_n || k_max > base.max_k) {
    throw UsageError("--n-max/--k-max exceed the A buffer capacity (--max-n/--max-k)");
  }
  if (opts.m_max == 0) throw UsageError("--m-max must be positive");

  std::mt19937_64 rng(opts.common.seed);
  auto uniform = [&](std::size_t hi) { return 1 + static_cast<std::size_t>(rng() % hi); };

  ordered_json trials = ordered_json::array();
  ordered_json first_failure = nullptr;
  std::size_t failures = 0;
  for (std::size_t i = 0; i < opts.trials; ++i) {
    TileConfig cfg = base;
    cfg.tile_size = opts.tile_sizes[i % opts.tile_sizes.size()];
    cfg.block_m = opts.block_ms[(i / opts.tile_sizes.size()) % opts.block_ms.size()];
    const std::size_t t = cfg.tile_size;
    const bool corner = i % 2 == 1;

    // Odd trials draw every dimension from the tile-boundary corner set.
    auto pick = [&](std::size_t hi, bool with_block) {
      if (!corner) return uniform(hi);
      std::vector<std::size_t> candidates;
      std::vector<std::size_t> raw{1, t - 1, t, t + 1, 2 * t - 1};
      if (with_block) raw.insert(raw.end(), {cfg.block_m - 1, cfg.block_m, cfg.block_m + 1});
      for (std::size_t v : raw) {
        if (v >= 1 && v <= hi) candidates.push_back(v);
      }
      if (candidates.empty()) return uniform(hi);
      return candidates[rng() % candidates.size()];
    };
    const std::size_t n = pick(n_max, false);
    const std::size_t k = pick(k_max, false);
    const std::size_t m = pick(opts.m_max, true);
    const std::uint64_t seed = rng();

    const Int8Matrix a = random_matrix<std::int8_t>(n, k, seed);
    const Int8Matrix b = random_matrix<std::int8_t>(k, m, seed + 1);
    AcceleratorState state = make_state(cfg, ctx);
    const bool ok = ctx.hooks.engine(state, &a, b, UpdateA::yes) == naive_gemm(a, b);

    ordered_json trial = {{"index", i}, {"n", n},  {"k", k},       {"m", m},
                          {"t", t},     {"block_m", cfg.block_m}, {"seed", seed}, {"pass", ok}};
    if (!ok) {
      ++failures;
      if (first_failure.is_null()) {
        first_failure = trial;
        ctx.err << "verify: mismatch at trial " << i << " dims " << n << "x" << k << "x" << m << " seed "
                << seed << '\n';
      }
    }
    trials.push_back(std::move(trial));
  }

  ordered_json report = report_header("verify", ctx.args);
  report["config"] = to_json(base);
  report["trials_run"] = opts.trials;
  report["failures"] = failures;
  report["pass"] = failures == 0;
  report["first_failure"] = first_failure;
  report["trials"] = std::move(trials);
  emit_json(opts.common, ctx, report);
  return failures == 0 ? kExitSuccess : kExitFailure;
}

int cmd_bench(const BenchOptions& opts, const CommandContext& ctx) {
  if (opts.trials == 0) throw UsageError("--trials must be at least 1");
  if (opts.cases.empty()) throw UsageError("--case needs at least one value");
  std::vector<GemmDims> case_dims;
  for (const auto& name : opts.cases) case_dims.push_back(dims_for_case(name));

  const TileConfig& config = opts.common.config;
  const HwParams& hw = opts.common.hw;
  ordered_json reports = ordered_json::array();
  for (std::size_t c = 0; c < opts.cases.size(); ++c) {
    const GemmDims dims = case_dims[c];
    const Int8Matrix a = random_matrix<std::int8_t>(dims.n, dims.k, opts.common.seed);
    const Int8Matrix b = random_matrix<std::int8_t>(dims.k, dims.m, opts.common.seed + 1);
    AcceleratorState state = make_state(config, ctx);

    std::vector<double> times;
    std::uint64_t sum = 0;
    for (std::size_t t = 0; t < opts.trials; ++t) {
      state.reset();
      const auto start = Clock::now();
      const Int32Matrix out = ctx.hooks.engine(state, &a, b, UpdateA::yes);
      times.push_back(seconds_since(start));
      sum = checksum(out);
    }

    const PerfEstimate perf = estimate_cycles(dims, config, hw, UpdateA::yes);
    reports.push_back({{"case", opts.cases[c]},
                       {"dims", to_json(dims)},
                       {"mac_count", dims.mac_count()},
                       {"wall_times_seconds", times},
                       {"wall_time_seconds", median(times)},
                       {"checksum", checksum_hex(sum)},
                       {"peak_gflops", peak_gflops(config, hw)},
                       {"perf", to_json(perf)},
                       {"traffic", to_json(state.traffic())}});
  }

  ordered_json report = report_header("bench", ctx.args);
  report["config"] = to_json(config);
  report["hw"] = to_json(hw);
  report["trials"] = opts.trials;
  report["reports"] = std::move(reports);
  emit_json(opts.common, ctx, report);
  return kExitSuccess;
}

int cmd_dse(const DseOptions& opts, const CommandContext& ctx) {
  if (opts.tile_sizes.empty() || opts.block_ms.empty() || opts.dims.empty()) {
    throw UsageError("dse sweep lists must be non-empty");
  }
  std::vector<GemmDims> dims;
  for (const auto& d : opts.dims) dims.push_back(parse_dims(d));
  const auto rows =
      dse_sweep(dims, opts.tile_sizes, opts.block_ms, opts.common.config, opts.common.hw, opts.device);

  if (opts.common.csv) {
    emit(opts.common, ctx, dse_to_csv(rows));
    return kExitSuccess;
  }
  ordered_json report = report_header("dse", ctx.args);
  report["device"] = {{"name", opts.device.name},
                      {"dsp_total", opts.device.dsp_total},
                      {"bram_blocks_total", opts.device.bram_blocks_total},
                      {"bram_utilization_margin", opts.device.bram_utilization_margin}};
  report["hw"] = to_json(opts.common.hw);
  ordered_json out_rows = ordered_json::array();
  for (const auto& r : rows) out_rows.push_back(to_json(r));
  report["rows"] = std::move(out_rows);
  emit_json(opts.common, ctx, report);
  return kExitSuccess;
}

int cmd_traffic(const TrafficOptions& opts, const CommandContext& ctx) {
  if (opts.calls == 0) throw UsageError("--calls must be at least 1");
  const GemmDims dims{opts.n, opts.k, opts.m};
  const std::size_t block_m = opts.common.config.block_m;

  const auto tiled = traffic_for(DataflowKind::persistent_tiled, dims, opts.calls, block_m);
  const auto reload = traffic_for(DataflowKind::no_persistence, dims, opts.calls, block_m);
  const double a_ratio = static_cast<double>(reload.a_bytes_read) / static_cast<double>(tiled.a_bytes_read);

  if (opts.common.csv) {
    std::ostringstream csv;
    csv << "kind,n,k,m,calls,a_bytes,b_bytes,c_bytes,total_bytes,reuse_factor\n";
    for (DataflowKind kind : kAllDataflows) {
      const auto r = traffic_for(kind, dims, opts.calls, block_m);
      char factor[32];
      std::snprintf(factor, sizeof factor, "%.9g", reuse_factor(kind, dims, opts.calls, block_m));
      csv << dataflow_name(kind) << ',' << dims.n << ',' << dims.k << ',' << dims.m << ',' << opts.calls << ','
          << r.a_bytes_read << ',' << r.b_bytes_read << ',' << r.c_bytes_written << ',' << r.total_bytes()
          << ',' << factor << '\n';
    }
    emit(opts.common, ctx, csv.str());
    return kExitSuccess;
  }

  ordered_json report = report_header("traffic", ctx.args);
  report["dims"] = to_json(dims);
  report["calls"] = opts.calls;
  report["block_m"] = block_m;
  ordered_json rows = ordered_json::array();
  for (DataflowKind kind : kAllDataflows) {
    ordered_json row = to_json(traffic_for(kind, dims, opts.calls, block_m));
    row["kind"] = dataflow_name(kind);
    row["reuse_factor"] = reuse_factor(kind, dims, opts.calls, block_m);
    rows.push_back(std::move(row));
  }
  report["rows"] = std::move(rows);
  report["a_traffic_ratio_no_persistence_over_tiled"] = a_ratio;
  emit_json(opts.common, ctx, report);
  return kExitSuccess;
}

int cmd_attn_demo(const AttnDemoOptions& opts, const CommandContext& ctx) {
  const std::uint64_t seed = opts.common.seed;
  const F32Matrix x = random_matrix<float>(opts.seq, opts.hidden, seed);
  const float weight_gain = 1.0f / std::sqrt(static_cast<float>(opts.hidden));

  std::vector<F32Matrix> weights;
  std::vector<std::vector<float>> biases;
  std::vector<QuantizedLinear> layers;
  for (std::uint64_t p = 0; p < 3; ++p) {
    F32Matrix w = random_matrix<float>(opts.hidden, opts.out_features, seed + 1 + p);
    for (float& v : w.data()) v *= weight_gain;
    const F32Matrix b = random_matrix<float>(1, opts.out_features, seed + 4 + p);
    std::vector<float> bias(b.data().begin(), b.data().end());
    for (float& v : bias) v *= 0.02f;
    layers.push_back(QuantizedLinear::from_float(w, bias));
    weights.push_back(std::move(w));
    biases.push_back(std::move(bias));
  }

  AcceleratorState state = make_state(opts.common.config, ctx);
  const auto start = Clock::now();
  const QkvResult res = qkv_project(x, layers[0], layers[1], layers[2], state);
  const double wall = seconds_since(start);

  const F32Matrix* outs[3] = {&res.q, &res.k, &res.v};
  const char* names[3] = {"q", "k", "v"};
  ordered_json errors;
  ordered_json shapes;
  ordered_json sums;
  double max_error = 0.0;
  for (int p = 0; p < 3; ++p) {
    const F32Matrix ref = reference_linear(x, weights[p], std::span<const float>(biases[p]));
    const double e = relative_frobenius_error(*outs[p], ref);
    max_error = std::max(max_error, e);
    errors[names[p]] = e;
    shapes[names[p]] = {outs[p]->rows(), outs[p]->cols()};
    sums[names[p]] = checksum_hex(checksum(*outs[p]));
  }
  errors["max"] = max_error;

  constexpr double kTolerance = 0.005;
  ordered_json report = report_header("attn-demo", ctx.args);
  report["dims"] = {{"seq", opts.seq}, {"hidden", opts.hidden}, {"out_features", opts.out_features}};
  report["config"] = to_json(opts.common.config);
  report["shapes"] = std::move(shapes);
  report["relative_error"] = std::move(errors);
  report["tolerance"] = kTolerance;
  report["within_tolerance"] = max_error < kTolerance;
  report["a_loads"] = res.traffic.a_loads;
  report["traffic"] = to_json(res.traffic);
  report["checksums"] = std::move(sums);
  report["wall_time_seconds"] = wall;
  emit_json(opts.common, ctx, report);
  return kExitSuccess;
}

}  // namespace tmma::cli
