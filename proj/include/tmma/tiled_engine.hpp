#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "tmma/matrix.hpp"

namespace tmma {

/// Dataflow parameters of the accelerator.
///
/// `tile_size` is the edge of the inner compute tile (the unrolled MAC array
/// is tile_size x tile_size), `block_m` the number of B columns staged on chip
/// per outer block, and max_n x max_k the capacity of the persistent A buffer.
struct TileConfig {
  std::size_t tile_size = 32;
  std::size_t block_m = 256;
  std::size_t max_n = 64;
  std::size_t max_k = 768;

  /// Throws ValueError if any field is zero or max_k exceeds the int32-safe
  /// accumulation depth.
  void validate() const;

  std::size_t a_buffer_bytes() const noexcept { return max_n * max_k; }

  bool operator==(const TileConfig&) const = default;
};

/// Cumulative external-memory traffic. Every counter only ever grows over the
/// lifetime of a state (until reset).
struct TrafficReport {
  std::uint64_t a_bytes_read = 0;
  std::uint64_t b_bytes_read = 0;
  std::uint64_t c_bytes_written = 0;
  std::uint64_t a_loads = 0;
  std::uint64_t b_blocks_streamed = 0;

  std::uint64_t total_bytes() const noexcept { return a_bytes_read + b_bytes_read + c_bytes_written; }

  TrafficReport& operator+=(const TrafficReport& other) noexcept;
  friend TrafficReport operator-(const TrafficReport& after, const TrafficReport& before) noexcept;
  bool operator==(const TrafficReport&) const = default;
};

struct MatrixDims {
  std::size_t rows = 0;
  std::size_t cols = 0;
  bool operator==(const MatrixDims&) const = default;
};

enum class UpdateA : bool { no = false, yes = true };

/// Software model of one accelerator device between host calls.
///
/// Holds the persistent A buffer (laid out max_n x max_k, row stride max_k) and
/// the running traffic counters. A state is owned by one caller at a time; it
/// is movable but not copyable, like the hardware it stands for.
class AcceleratorState {
 public:
  using WarningSink = std::function<void(std::string_view)>;

  explicit AcceleratorState(TileConfig config = {});

  AcceleratorState(const AcceleratorState&) = delete;
  AcceleratorState& operator=(const AcceleratorState&) = delete;
  AcceleratorState(AcceleratorState&&) noexcept = default;
  AcceleratorState& operator=(AcceleratorState&&) noexcept = default;

  const TileConfig& config() const noexcept { return config_; }
  std::optional<MatrixDims> loaded_dims() const noexcept { return loaded_dims_; }
  const TrafficReport& traffic() const noexcept { return traffic_; }
  std::span<const std::int8_t> a_buffer() const noexcept { return a_buffer_; }

  /// Replaces the sink that receives non-fatal diagnostics (default: stderr).
  void set_warning_sink(WarningSink sink) { warn_ = std::move(sink); }

  /// C = A x B through the two-level tiled dataflow.
  ///
  /// With UpdateA::yes, `a` is required: it is checked against the buffer
  /// capacity and copied into the persistent buffer. With UpdateA::no, the
  /// resident A is used and `a` is ignored (a warning is emitted if one is
  /// passed). B is staged block by block and every B element is fetched from
  /// external memory exactly once per call.
  ///
  /// Throws ProtocolError, CapacityError or ShapeError on contract violations;
  /// the state is left unchanged in that case.
  Int32Matrix tiled_gemm(const Int8Matrix* a, const Int8Matrix& b, UpdateA update_a);

  /// Forgets the resident A (buffer is zeroed) and clears all counters.
  void reset();

 private:
  void load_a(const Int8Matrix& a);

  TileConfig config_;
  std::vector<std::int8_t> a_buffer_;
  std::optional<MatrixDims> loaded_dims_;
  TrafficReport traffic_;
  WarningSink warn_;
};

}  // namespace tmma
