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

// Cycle-by-cycle enumeration of the PE-array schedule. Built independently
// of the closed-form counts in pe_sim.hpp so the two can check each other.

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sparsefold/layer.hpp"
#include "sparsefold/pe_sim.hpp"
#include "sparsefold/tensor.hpp"

namespace sparsefold {

/// One active MAC: where it ran and which product it computed. Output
/// coordinates are in the layer's full-resolution output; taps index the
/// layer's source kernel.
struct SlotTag {
  std::uint16_t block = 0;
  std::uint16_t row = 0;
  std::uint8_t weight_col = 0;
  std::uint8_t ky = 0;
  std::uint8_t kx = 0;
  std::uint16_t out_channel = 0;
  std::uint16_t in_channel = 0;
  std::uint16_t y = 0;
  std::uint16_t x = 0;

  friend bool operator==(const SlotTag&, const SlotTag&) = default;
};

class ScheduleTrace {
 public:
  ScheduleTrace() : offsets_{0} {}

  void add_slot(const SlotTag& slot) { slots_.push_back(slot); }
  void end_cycle() { offsets_.push_back(slots_.size()); }

  std::uint64_t cycles() const noexcept { return offsets_.size() - 1; }
  std::uint64_t active_slots() const noexcept { return slots_.size(); }
  std::span<const SlotTag> cycle(std::uint64_t i) const {
    if (i >= cycles()) throw std::out_of_range("ScheduleTrace: cycle out of range");
    return std::span<const SlotTag>(slots_).subspan(offsets_[i], offsets_[i + 1] - offsets_[i]);
  }
  std::span<const SlotTag> slots() const noexcept { return slots_; }

  friend bool operator==(const ScheduleTrace&, const ScheduleTrace&) = default;

 private:
  std::vector<SlotTag> slots_;
  std::vector<std::uint64_t> offsets_;
};

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kDefaultScheduleBudget = std::uint64_t{1} << 22;

/// SPARSEFOLD_BUDGET if set to a positive integer, else the default.
std::uint64_t schedule_budget_from_env();

/// Throws BudgetExceeded when the layer needs more than `budget` active
/// slots or cycles.
ScheduleTrace enumerate_schedule(const LayerSpec& layer, const ArrayConfig& cfg,
                                 std::uint64_t budget = schedule_budget_from_env());

/// Description of the first (cycle, block, row, weight column) used twice.
std::optional<std::string> find_double_booking(const ScheduleTrace& trace);

/// Executes the products listed in a trace. The result equals the layer's
/// direct convolution iff the trace covers every nonzero MAC exactly once.
template <typename T>
Tensor3<T> replay_schedule(const ScheduleTrace& trace, const LayerSpec& layer,
                           const Tensor3<T>& input, const KernelStack<T>& weights) {
  Tensor3<T> out(layer.out_channels, layer.output_height(), layer.output_width());
  for (const SlotTag& s : trace.slots()) {
    int iy = 0;
    int ix = 0;
    switch (layer.kind()) {
      case LayerKind::kDense: {
        const auto& p = layer.dense_params();
        iy = s.y * p.stride + s.ky - p.pad_h;
        ix = s.x * p.stride + s.kx - p.pad_w;
        break;
      }
      case LayerKind::kDilated: {
        const int step = layer.dilated_params().zeros + 1;
        iy = s.y + (s.ky - 1) * step;
        ix = s.x + (s.kx - 1) * step;
        break;
      }
      case LayerKind::kTransposed: {
        const int ey = s.y + s.ky - 1;
        const int ex = s.x + s.kx - 1;
        if (ey < 0 || ex < 0 || ey % 2 || ex % 2) {
          throw std::logic_error("replay_schedule: slot reads an inserted zero");
        }
        iy = ey / 2;
        ix = ex / 2;
        break;
      }
    }
    if (!input.contains(s.in_channel, iy, ix)) {
      throw std::logic_error("replay_schedule: slot reads padding at (" +
                             std::to_string(iy) + "," + std::to_string(ix) + ")");
    }
    out(s.out_channel, s.y, s.x) +=
        weights(s.out_channel, s.in_channel, s.ky, s.kx) * input(s.in_channel, iy, ix);
  }
  return out;
}

}  // namespace sparsefold
