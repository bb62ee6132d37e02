#include "tmma/tiled_engine.hpp"

#include <algorithm>
#include <iostream>
#include <string>

namespace tmma {

void TileConfig::validate() const {
  if (tile_size == 0 || block_m == 0 || max_n == 0 || max_k == 0) {
    throw ValueError("tile config fields must be positive");
  }
  if (max_k > kMaxSafeAccumulationDepth) {
    throw ValueError("max_k=" + std::to_string(max_k) + " exceeds the int32-safe accumulation depth " +
                     std::to_string(kMaxSafeAccumulationDepth));
  }
}

TrafficReport& TrafficReport::operator+=(const TrafficReport& other) noexcept {
  a_bytes_read += other.a_bytes_read;
  b_bytes_read += other.b_bytes_read;
  c_bytes_written += other.c_bytes_written;
  a_loads += other.a_loads;
  b_blocks_streamed += other.b_blocks_streamed;
  return *this;
}

TrafficReport operator-(const TrafficReport& after, const TrafficReport& before) noexcept {
  return TrafficReport{
      .a_bytes_read = after.a_bytes_read - before.a_bytes_read,
      .b_bytes_read = after.b_bytes_read - before.b_bytes_read,
      .c_bytes_written = after.c_bytes_written - before.c_bytes_written,
      .a_loads = after.a_loads - before.a_loads,
      .b_blocks_streamed = after.b_blocks_streamed - before.b_blocks_streamed,
  };
}

AcceleratorState::AcceleratorState(TileConfig config)
    : config_(config), warn_([](std::string_view msg) { std::cerr << "warning: " << msg << '\n'; }) {
  config_.validate();
  a_buffer_.assign(config_.max_n * config_.max_k, 0);
}

void AcceleratorState::reset() {
  std::fill(a_buffer_.begin(), a_buffer_.end(), std::int8_t{0});
  loaded_dims_.reset();
  traffic_ = TrafficReport{};
}

void AcceleratorState::load_a(const Int8Matrix& a) {
  const std::size_t stride = config_.max_k;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto src = a.row(i);
    std::copy(src.begin(), src.end(), a_buffer_.begin() + static_cast<std::ptrdiff_t>(i * stride));
  }
  loaded_dims_ = MatrixDims{a.rows(), a.cols()};
  traffic_.a_bytes_read += a.size();
  traffic_.a_loads += 1;
}

Int32Matrix AcceleratorState::tiled_gemm(const Int8Matrix* a, const Int8Matrix& b, UpdateA update_a) {
  if (update_a == UpdateA::yes) {
    if (a == nullptr) throw ProtocolError("update_a requested without an A operand");
    if (a->rows() > config_.max_n || a->cols() > config_.max_k) {
      throw CapacityError("A is " + std::to_string(a->rows()) + "x" + std::to_string(a->cols()) +
                          " but the persistent buffer holds " + std::to_string(config_.max_n) + "x" +
                          std::to_string(config_.max_k));
    }
    if (a->cols() != b.rows()) {
      throw ShapeError("A has K=" + std::to_string(a->cols()) + " but B has " + std::to_string(b.rows()) +
                       " rows");
    }
  } else {
    if (!loaded_dims_) throw ProtocolError("no resident A: first call must set update_a");
    if (b.rows() != loaded_dims_->cols) {
      throw ShapeError("resident A has K=" + std::to_string(loaded_dims_->cols) + " but B has " +
                       std::to_string(b.rows()) + " rows");
    }
    if (a != nullptr) warn_("A operand ignored because update_a is not set; using resident A");
  }

  if (update_a == UpdateA::yes) load_a(*a);

  const std::size_t n = loaded_dims_->rows;
  const std::size_t k_dim = loaded_dims_->cols;
  const std::size_t m = b.cols();
  const std::size_t tile = config_.tile_size;
  const std::size_t block_m = config_.block_m;
  const std::size_t a_stride = config_.max_k;

  Int32Matrix c(n, m);
  std::vector<std::int8_t> b_block(k_dim * block_m);
  std::vector<std::int8_t> local_a(tile * tile);
  std::vector<std::int8_t> local_b(tile * tile);
  std::vector<std::int32_t> local_c(tile * tile);

  for (std::size_t j_block = 0; j_block < m; j_block += block_m) {
    const std::size_t current_block_m = std::min(block_m, m - j_block);

    // Stage the column block of B on chip; the only external B reads.
    for (std::size_t k = 0; k < k_dim; ++k) {
      auto src = b.row(k).subspan(j_block, current_block_m);
      std::copy(src.begin(), src.end(), b_block.begin() + static_cast<std::ptrdiff_t>(k * block_m));
    }
    traffic_.b_bytes_read += k_dim * current_block_m;
    traffic_.b_blocks_streamed += 1;

    for (std::size_t i0 = 0; i0 < n; i0 += tile) {
      const std::size_t rows_here = std::min(tile, n - i0);
      for (std::size_t j0 = 0; j0 < current_block_m; j0 += tile) {
        const std::size_t cols_here = std::min(tile, current_block_m - j0);
        std::fill(local_c.begin(), local_c.end(), 0);

        for (std::size_t k0 = 0; k0 < k_dim; k0 += tile) {
          const std::size_t depth_here = std::min(tile, k_dim - k0);

          for (std::size_t ii = 0; ii < rows_here; ++ii) {
            const std::int8_t* src = a_buffer_.data() + (i0 + ii) * a_stride + k0;
            std::copy(src, src + depth_here, local_a.begin() + static_cast<std::ptrdiff_t>(ii * tile));
          }
          for (std::size_t kk = 0; kk < depth_here; ++kk) {
            const std::int8_t* src = b_block.data() + (k0 + kk) * block_m + j0;
            std::copy(src, src + cols_here, local_b.begin() + static_cast<std::ptrdiff_t>(kk * tile));
          }

          for (std::size_t ii = 0; ii < rows_here; ++ii) {
            std::int32_t* acc = local_c.data() + ii * tile;
            for (std::size_t kk = 0; kk < depth_here; ++kk) {
              const std::int32_t a_val = local_a[ii * tile + kk];
              const std::int8_t* b_row = local_b.data() + kk * tile;
              for (std::size_t jj = 0; jj < cols_here; ++jj) acc[jj] += a_val * static_cast<std::int32_t>(b_row[jj]);
            }
          }
        }

        for (std::size_t ii = 0; ii < rows_here; ++ii) {
          const std::int32_t* acc = local_c.data() + ii * tile;
          std::copy(acc, acc + cols_here, c.data().begin() + static_cast<std::ptrdiff_t>((i0 + ii) * m + j_block + j0));
        }
      }
    }
  }
  traffic_.c_bytes_written += static_cast<std::uint64_t>(n) * m * sizeof(std::int32_t);
  return c;
}

}  // namespace tmma
