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

#include "sparsefold/schedule.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>
#include <tuple>
#include <vector>

namespace sparsefold {

namespace {

using u64 = std::uint64_t;

// A dense correlation placed somewhere in the layer's output. Output cell
// (oy, ox) of the job is layer cell (y0 + oy*ys, x0 + ox*xs); job tap (a, b)
// is source tap (ty0 + a*tys, tx0 + b*txs).
struct Job {
  int in_h, in_w, out_h, out_w;
  int kh, kw, stride, pad_top, pad_left;
  int y0, ys, x0, xs;
  int ty0, tys, tx0, txs;

  // Jobs with equal keys issue the same column sequence.
  auto key() const { return std::tie(kh, kw, stride, pad_left, in_w, out_w); }
};

struct ColumnStep {
  int kx;
  int ox;
};

struct Unit {
  const Job* job;
  int channel_group;
  int tile;
};

class Enumerator {
 public:
  Enumerator(const LayerSpec& layer, const ArrayConfig& cfg)
      : layer_(layer), cfg_(cfg) {}

  ScheduleTrace run_jobs(const std::vector<Job>& jobs) {
    // Group jobs by key, keeping first-appearance order.
    std::vector<std::vector<const Job*>> groups;
    for (const Job& job : jobs) {
      if (job.out_h < 1 || job.out_w < 1) continue;
      bool placed = false;
      for (auto& g : groups) {
        if (g.front()->key() == job.key()) {
          g.push_back(&job);
          placed = true;
          break;
        }
      }
      if (!placed) groups.push_back({&job});
    }

    ScheduleTrace trace;
    for (int ci = 0; ci < layer_.in_channels; ++ci) {
      for (const auto& group : groups) run_group(group, ci, trace);
    }
    return trace;
  }

  ScheduleTrace run_packed_transposed() {
    const bool even = layer_.transposed_params().even_output;
    const int out_h = 2 * layer_.height - 1 + (even ? 1 : 0);
    const int out_w = 2 * layer_.width - 1 + (even ? 1 : 0);
    const int groups = cfg_.blocks / 3;
    const int tiles = (layer_.height + cfg_.rows - 1) / cfg_.rows;

    std::vector<std::pair<int, int>> units;  // (co, tile)
    for (int co = 0; co < layer_.out_channels; ++co)
      for (int t = 0; t < tiles; ++t) units.emplace_back(co, t);

    ScheduleTrace trace;
    for (int ci = 0; ci < layer_.in_channels; ++ci) {
      for (std::size_t start = 0; start < units.size(); start += groups) {
        const std::size_t end = std::min(units.size(), start + groups);
        for (int col = 0; col < layer_.width; ++col) {
          for (std::size_t u = start; u < end; ++u) {
            const auto [co, tile] = units[u];
            const int g = static_cast<int>(u - start);
            // Block k of the group holds kernel column k; input column `col`
            // meets it at output column 2*col + 1 - k.
            for (int k = 0; k < 3; ++k) {
              const int x = 2 * col + 1 - k;
              if (x < 0 || x >= out_w) continue;
              for (int i = 0; i < cfg_.rows; ++i) {
                const int iy = tile * cfg_.rows + i;
                if (iy >= layer_.height) break;
                for (int ky = 0; ky < 3; ++ky) {
                  const int y = 2 * iy + 1 - ky;
                  if (y < 0 || y >= out_h) continue;
                  trace.add_slot(SlotTag{static_cast<std::uint16_t>(3 * g + k),
                                     static_cast<std::uint16_t>(i),
                                     static_cast<std::uint8_t>(ky),
                                     static_cast<std::uint8_t>(ky),
                                     static_cast<std::uint8_t>(k),
                                     static_cast<std::uint16_t>(co),
                                     static_cast<std::uint16_t>(ci),
                                     static_cast<std::uint16_t>(y),
                                     static_cast<std::uint16_t>(x)});
                }
              }
            }
          }
          trace.end_cycle();
        }
      }
    }
    return trace;
  }

 private:
  void run_group(const std::vector<const Job*>& group, int ci, ScheduleTrace& trace) {
    const Job& shape = *group.front();
    const int pack = shape.kh < ArrayConfig::kWeightCols ? ArrayConfig::kWeightCols / shape.kh : 1;
    const int vectors = shape.kh < ArrayConfig::kWeightCols
                            ? 1
                            : (shape.kh + ArrayConfig::kWeightCols - 1) / ArrayConfig::kWeightCols;
    const int channel_groups = (layer_.out_channels + pack - 1) / pack;

    // Input columns stream left to right; each meets the kernel columns
    // that land on a valid output column.
    std::vector<ColumnStep> steps;
    for (int ix = 0; ix < shape.in_w; ++ix) {
      for (int kx = 0; kx < shape.kw; ++kx) {
        const int num = ix - kx + shape.pad_left;
        if (num < 0 || num % shape.stride) continue;
        const int ox = num / shape.stride;
        if (ox < shape.out_w) steps.push_back({kx, ox});
      }
    }

    std::vector<Unit> units;
    for (const Job* job : group) {
      const int tiles = (job->out_h + cfg_.rows - 1) / cfg_.rows;
      for (int g = 0; g < channel_groups; ++g)
        for (int t = 0; t < tiles; ++t) units.push_back({job, g, t});
    }

    const std::size_t blocks = static_cast<std::size_t>(cfg_.blocks);
    for (std::size_t start = 0; start < units.size(); start += blocks) {
      const std::size_t end = std::min(units.size(), start + blocks);
      for (const ColumnStep& step : steps) {
        for (int v = 0; v < vectors; ++v) {
          for (std::size_t u = start; u < end; ++u) {
            issue(units[u], static_cast<int>(u - start), step, v, pack, ci, trace);
          }
          trace.end_cycle();
        }
      }
    }
  }

  void issue(const Unit& unit, int block, const ColumnStep& step, int vector,
             int pack, int ci, ScheduleTrace& trace) {
    const Job& job = *unit.job;
    for (int i = 0; i < cfg_.rows; ++i) {
      const int oy = unit.tile * cfg_.rows + i;
      if (oy >= job.out_h) break;
      for (int j = 0; j < ArrayConfig::kWeightCols; ++j) {
        int co;
        int a;
        if (job.kh < ArrayConfig::kWeightCols) {
          const int slot = j / job.kh;
          if (slot >= pack) continue;
          co = unit.channel_group * pack + slot;
          a = j % job.kh;
        } else {
          co = unit.channel_group;
          a = vector * ArrayConfig::kWeightCols + j;
          if (a >= job.kh) continue;
        }
        if (co >= layer_.out_channels) continue;
        const int iy = oy * job.stride + a - job.pad_top;
        if (iy < 0 || iy >= job.in_h) continue;
        trace.add_slot(SlotTag{static_cast<std::uint16_t>(block),
                           static_cast<std::uint16_t>(i),
                           static_cast<std::uint8_t>(j),
                           static_cast<std::uint8_t>(job.ty0 + a * job.tys),
                           static_cast<std::uint8_t>(job.tx0 + step.kx * job.txs),
                           static_cast<std::uint16_t>(co),
                           static_cast<std::uint16_t>(ci),
                           static_cast<std::uint16_t>(job.y0 + oy * job.ys),
                           static_cast<std::uint16_t>(job.x0 + step.ox * job.xs)});
      }
    }
  }

  const LayerSpec& layer_;
  const ArrayConfig& cfg_;
};

std::vector<Job> dense_jobs(const LayerSpec& layer) {
  const auto& p = layer.dense_params();
  return {Job{layer.height, layer.width, layer.output_height(), layer.output_width(),
              p.kernel_h, p.kernel_w, p.stride, p.pad_h, p.pad_w,
              0, 1, 0, 1, 0, 1, 0, 1}};
}

std::vector<Job> dilated_jobs(const LayerSpec& layer) {
  const int zeros = layer.dilated_params().zeros;
  const int step = zeros + 1;
  std::vector<Job> jobs;
  for (int r = 0; r < step && r < layer.height; ++r) {
    const int bh = (layer.height - r + zeros) / step;
    for (int c = 0; c < step && c < layer.width; ++c) {
      const int bw = (layer.width - c + zeros) / step;
      jobs.push_back(Job{bh, bw, bh, bw, 3, 3, 1, 1, 1, r, step, c, step, 0, 1, 0, 1});
    }
  }
  return jobs;
}

// Sequential fallback: center, hpair, vpair, corner as valid correlations on
// the original input.
std::vector<Job> transposed_jobs(const LayerSpec& layer) {
  const bool even = layer.transposed_params().even_output;
  const int h = layer.height;
  const int w = layer.width;
  const int odd_rows = h - 1 + (even ? 1 : 0);
  const int odd_cols = w - 1 + (even ? 1 : 0);
  return {
      Job{h, w, h, w, 1, 1, 1, 0, 0, 0, 2, 0, 2, 1, 0, 1, 0},
      Job{h, w, h, odd_cols, 1, 2, 1, 0, 0, 0, 2, 1, 2, 1, 0, 0, 2},
      Job{h, w, odd_rows, w, 2, 1, 1, 0, 0, 1, 2, 0, 2, 0, 2, 1, 0},
      Job{h, w, odd_rows, odd_cols, 2, 2, 1, 0, 0, 1, 2, 1, 2, 0, 2, 0, 2},
  };
}

}  // namespace

std::uint64_t schedule_budget_from_env() {
  const char* raw = std::getenv("SPARSEFOLD_BUDGET");
  if (!raw || !*raw) return kDefaultScheduleBudget;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(raw, &end, 10);
  if (*end != '\0' || v == 0) return kDefaultScheduleBudget;
  return v;
}

ScheduleTrace enumerate_schedule(const LayerSpec& layer, const ArrayConfig& cfg,
                                 std::uint64_t budget) {
  layer.validate();
  cfg.validate();
  if (layer.height > 0xFFFF / 2 || layer.width > 0xFFFF / 2 ||
      layer.out_channels > 0xFFFF || layer.in_channels > 0xFFFF ||
      cfg.blocks > 0xFFFF || cfg.rows > 0xFFFF) {
    throw BudgetExceeded("enumerate_schedule: layer extents exceed trace tag range");
  }
  const CycleReport expected = simulate_layer(layer, cfg);
  if (expected.macs.nonzero > budget || expected.cycles > budget) {
    throw BudgetExceeded("enumerate_schedule: layer needs " +
                         std::to_string(expected.macs.nonzero) + " slots over " +
                         std::to_string(expected.cycles) + " cycles, budget is " +
                         std::to_string(budget));
  }

  Enumerator e(layer, cfg);
  switch (layer.kind()) {
    case LayerKind::kDense: return e.run_jobs(dense_jobs(layer));
    case LayerKind::kDilated: return e.run_jobs(dilated_jobs(layer));
    case LayerKind::kTransposed:
      return cfg.blocks >= 3 ? e.run_packed_transposed() : e.run_jobs(transposed_jobs(layer));
  }
  throw std::invalid_argument("enumerate_schedule: unknown layer kind");
}

std::optional<std::string> find_double_booking(const ScheduleTrace& trace) {
  std::vector<std::uint64_t> seen;
  for (std::uint64_t c = 0; c < trace.cycles(); ++c) {
    seen.clear();
    for (const SlotTag& s : trace.cycle(c)) {
      seen.push_back((static_cast<std::uint64_t>(s.block) << 32) |
                     (static_cast<std::uint64_t>(s.row) << 8) | s.weight_col);
    }
    std::sort(seen.begin(), seen.end());
    const auto dup = std::adjacent_find(seen.begin(), seen.end());
    if (dup != seen.end()) {
      return "cycle " + std::to_string(c) + ": block " + std::to_string(*dup >> 32) +
             " row " + std::to_string((*dup >> 8) & 0xFFFFFF) + " weight column " +
             std::to_string(*dup & 0xFF) + " booked twice";
    }
  }
  return std::nullopt;
}

}  // namespace sparsefold
