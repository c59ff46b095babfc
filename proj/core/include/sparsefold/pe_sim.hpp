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

#pragma once

// Compute-issue cycle model of an array of PE blocks. Each block is n MAC
// rows by 3 weight columns: one cycle broadcasts an n-high input column
// vector across the rows and a 3-tap weight column vector down the columns.
//
// Work is cut into units of (output channel group, n-row tile, decomposed
// block). Units run in rounds of B, one unit per block, and every unit in a
// round issues the same number of cycles. Input channels accumulate
// sequentially. Load latency, SRAM bandwidth and pipeline fill are not
// modeled.

#include <cstdint>
#include <string_view>

#include "sparsefold/layer.hpp"

namespace sparsefold {

struct ArrayConfig {
  static constexpr int kWeightCols = 3;

  int blocks = 14;  // B
  int rows = 4;     // n

  int macs_per_cycle() const noexcept { return blocks * rows * kWeightCols; }
  void validate() const;  // throws std::invalid_argument

  friend bool operator==(const ArrayConfig&, const ArrayConfig&) = default;
};

enum class ScheduleMode {
  kDense,
  kDecomposedDilated,
  kPackedTransposed,      // 9 taps over a group of 3 blocks
  kSequentialTransposed,  // fewer than 3 blocks: four sub-convolutions in turn
};

std::string_view to_string(ScheduleMode mode);

struct CycleReport {
  std::uint64_t cycles = 0;
  std::uint64_t ideal_dense_cycles = 0;
  std::uint64_t ideal_sparse_cycles = 0;
  MacCount macs;
  double utilization = 0.0;  // macs.nonzero / (cycles * macs_per_cycle)
  ScheduleMode mode = ScheduleMode::kDense;

  /// The schedule beat the ideal sparse bound; only rounding can cause this,
  /// so reports flag it rather than reject it.
  bool below_sparse_bound() const noexcept { return cycles < ideal_sparse_cycles; }
  double sparse_efficiency() const noexcept {
    return cycles ? static_cast<double>(ideal_sparse_cycles) / static_cast<double>(cycles) : 0.0;
  }
  double speedup() const noexcept {
    return cycles ? static_cast<double>(ideal_dense_cycles) / static_cast<double>(cycles) : 0.0;
  }
};

/// Output columns in [col-1, col+1] ∩ [0, Wb) fed by input column `col` under
/// a same-padded width-3 kernel, i.e. how many weight column vectors it needs.
int weight_vector_count(int col, int block_width);

enum class IdealMode { kDense, kSparse };

/// ceil(MACs / macs_per_cycle) with MACs = total (dense) or nonzero (sparse).
std::uint64_t ideal_cycles(const LayerSpec& layer, const ArrayConfig& cfg,
                           IdealMode mode);

CycleReport cycles_dense(const LayerSpec& layer, const ArrayConfig& cfg);
CycleReport cycles_dilated(const LayerSpec& layer, const ArrayConfig& cfg);
CycleReport cycles_transposed(const LayerSpec& layer, const ArrayConfig& cfg);

/// Dispatches on the layer kind.
CycleReport simulate_layer(const LayerSpec& layer, const ArrayConfig& cfg);

}  // namespace sparsefold
