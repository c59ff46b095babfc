// Copyright (c) 2026 The Sparsefold Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sparsefold/pe_sim.hpp"

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sparsefold {

namespace {

using u64 = std::uint64_t;

constexpr u64 ceil_div(u64 a, u64 b) { return (a + b - 1) / b; }

void require_kind(const LayerSpec& layer, LayerKind kind, const char* op) {
  if (layer.kind() != kind) {
    throw std::invalid_argument(std::string(op) + ": expected a " +
                                std::string(to_string(kind)) + " layer, got " +
                                std::string(to_string(layer.kind())));
  }
}

// Cycles of one dense correlation per input channel: units are
// (output-channel group, row tile); kernels shorter than 3 rows pack several
// output channels into one weight column vector, taller ones need several.
u64 dense_job_cycles(int out_channels, int in_w, int out_h, int out_w,
                     int kernel_h, int kernel_w, int stride, int pad_left,
                     const ArrayConfig& cfg) {
  const int pack = kernel_h < ArrayConfig::kWeightCols ? ArrayConfig::kWeightCols / kernel_h : 1;
  const u64 vectors = kernel_h < ArrayConfig::kWeightCols
                          ? 1
                          : ceil_div(kernel_h, ArrayConfig::kWeightCols);
  const u64 units = ceil_div(out_channels, pack) * ceil_div(out_h, cfg.rows);
  const u64 steps = valid_taps_1d(in_w, out_w, kernel_w, stride, pad_left);
  return ceil_div(units, cfg.blocks) * steps * vectors;
}

CycleReport finish(const LayerSpec& layer, const ArrayConfig& cfg, u64 cycles,
                   ScheduleMode mode) {
  CycleReport r;
  r.cycles = cycles;
  r.macs = count_macs(layer);
  const u64 per_cycle = static_cast<u64>(cfg.macs_per_cycle());
  r.ideal_dense_cycles = ceil_div(r.macs.total, per_cycle);
  r.ideal_sparse_cycles = ceil_div(r.macs.nonzero, per_cycle);
  r.utilization = cycles ? static_cast<double>(r.macs.nonzero) /
                               (static_cast<double>(cycles) * static_cast<double>(per_cycle))
                         : 0.0;
  r.mode = mode;
  return r;
}

}  // namespace

void ArrayConfig::validate() const {
  if (blocks < 1) throw std::invalid_argument("array: blocks must be >= 1");
  if (rows < 1) throw std::invalid_argument("array: rows must be >= 1");
}

std::string_view to_string(ScheduleMode mode) {
  switch (mode) {
    case ScheduleMode::kDense: return "dense";
    case ScheduleMode::kDecomposedDilated: return "decomposed-dilated";
    case ScheduleMode::kPackedTransposed: return "packed-transposed";
    case ScheduleMode::kSequentialTransposed: return "sequential-transposed";
  }
  return "unknown";
}

int weight_vector_count(int col, int block_width) {
  if (block_width < 1 || col < 0 || col >= block_width) {
    throw std::out_of_range("weight_vector_count: column " + std::to_string(col) +
                            " outside block of width " + std::to_string(block_width));
  }
  return 1 + (col > 0 ? 1 : 0) + (col + 1 < block_width ? 1 : 0);
}

std::uint64_t ideal_cycles(const LayerSpec& layer, const ArrayConfig& cfg,
                           IdealMode mode) {
  cfg.validate();
  const MacCount m = count_macs(layer);
  return ceil_div(mode == IdealMode::kDense ? m.total : m.nonzero,
                  static_cast<u64>(cfg.macs_per_cycle()));
}

CycleReport cycles_dense(const LayerSpec& layer, const ArrayConfig& cfg) {
  require_kind(layer, LayerKind::kDense, "cycles_dense");
  layer.validate();
  cfg.validate();
  const auto& p = layer.dense_params();
  const u64 per_channel =
      dense_job_cycles(layer.out_channels, layer.width, layer.output_height(),
                       layer.output_width(), p.kernel_h, p.kernel_w, p.stride,
                       p.pad_w, cfg);
  return finish(layer, cfg, layer.in_channels * per_channel, ScheduleMode::kDense);
}

CycleReport cycles_dilated(const LayerSpec& layer, const ArrayConfig& cfg) {
  require_kind(layer, LayerKind::kDilated, "cycles_dilated");
  layer.validate();
  cfg.validate();
  const int zeros = layer.dilated_params().zeros;
  const int step = zeros + 1;

  // Blocks of equal width issue the same column sequence, so they share
  // rounds; units are (output channel, block, row tile).
  std::vector<std::pair<int, u64>> units_by_width;
  for (int r = 0; r < step && r < layer.height; ++r) {
    const int bh = (layer.height - r + zeros) / step;
    for (int c = 0; c < step && c < layer.width; ++c) {
      const int bw = (layer.width - c + zeros) / step;
      const u64 units = static_cast<u64>(layer.out_channels) * ceil_div(bh, cfg.rows);
      auto it = units_by_width.begin();
      while (it != units_by_width.end() && it->first != bw) ++it;
      if (it == units_by_width.end()) {
        units_by_width.emplace_back(bw, units);
      } else {
        it->second += units;
      }
    }
  }
  u64 per_channel = 0;
  for (const auto& [bw, units] : units_by_width) {
    u64 columns = 0;
    for (int col = 0; col < bw; ++col) columns += weight_vector_count(col, bw);
    per_channel += ceil_div(units, cfg.blocks) * columns;
  }
  return finish(layer, cfg, layer.in_channels * per_channel,
                ScheduleMode::kDecomposedDilated);
}

CycleReport cycles_transposed(const LayerSpec& layer, const ArrayConfig& cfg) {
  require_kind(layer, LayerKind::kTransposed, "cycles_transposed");
  layer.validate();
  cfg.validate();
  const bool even = layer.transposed_params().even_output;
  const int h = layer.height;
  const int w = layer.width;

  if (cfg.blocks >= 3) {
    // One input column per cycle; a group of 3 blocks holds all 9 taps,
    // one kernel column per block.
    const u64 groups = static_cast<u64>(cfg.blocks / 3);
    const u64 units = static_cast<u64>(layer.out_channels) * ceil_div(h, cfg.rows);
    const u64 per_channel = ceil_div(units, groups) * static_cast<u64>(w);
    return finish(layer, cfg, layer.in_channels * per_channel,
                  ScheduleMode::kPackedTransposed);
  }

  const int odd_rows = h - 1 + (even ? 1 : 0);
  const int odd_cols = w - 1 + (even ? 1 : 0);
  struct Sub {
    int out_h, out_w, kh, kw;
  };
  const Sub subs[] = {{h, w, 1, 1}, {h, odd_cols, 1, 2}, {odd_rows, w, 2, 1},
                      {odd_rows, odd_cols, 2, 2}};
  u64 per_channel = 0;
  for (const Sub& s : subs) {
    if (s.out_h == 0 || s.out_w == 0) continue;
    per_channel += dense_job_cycles(layer.out_channels, w, s.out_h, s.out_w, s.kh,
                                    s.kw, 1, 0, cfg);
  }
  return finish(layer, cfg, layer.in_channels * per_channel,
                ScheduleMode::kSequentialTransposed);
}

CycleReport simulate_layer(const LayerSpec& layer, const ArrayConfig& cfg) {
  switch (layer.kind()) {
    case LayerKind::kDense: return cycles_dense(layer, cfg);
    case LayerKind::kDilated: return cycles_dilated(layer, cfg);
    case LayerKind::kTransposed: return cycles_transposed(layer, cfg);
  }
  throw std::invalid_argument("simulate_layer: unknown layer kind");
}

}  // namespace sparsefold
