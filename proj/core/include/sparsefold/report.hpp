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

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "sparsefold/layer.hpp"
#include "sparsefold/network.hpp"
#include "sparsefold/pe_sim.hpp"

namespace sparsefold {

struct LayerRow {
  std::string label;
  LayerKind kind = LayerKind::kDense;
  CycleReport report;
};

/// Sums over a set of rows and the ratios derived from them.
struct Totals {
  std::uint64_t layers = 0;
  std::uint64_t cycles = 0;
  std::uint64_t ideal_dense_cycles = 0;
  std::uint64_t ideal_sparse_cycles = 0;
  MacCount macs;

  double utilization(const ArrayConfig& array) const;
  double speedup() const;              // ideal dense / ours
  double sparse_efficiency() const;    // ideal sparse / ours
  double operations_skipped() const;   // 1 - nonzero MACs / total MACs
  double cycles_skipped() const;       // 1 - ours / ideal dense

  friend bool operator==(const Totals&, const Totals&) = default;
};

struct KindSummary {
  LayerKind kind = LayerKind::kDense;
  Totals totals;
  double ideal_dense_share = 0.0;  // of the network's ideal dense cycles
  double cycle_share = 0.0;        // our cycles over the network's ideal dense cycles
};

struct RunReport {
  std::string name;
  ArrayConfig array;
  std::vector<LayerRow> rows;
  Totals aggregate;
  std::vector<KindSummary> kinds;  // kinds present, in dense/dilated/transposed order
};

RunReport analyze(const NetworkConfig& config);

/// Recomputes aggregate and per-kind summaries from `rows`.
Totals sum_rows(const std::vector<LayerRow>& rows);
std::vector<KindSummary> summarize_kinds(const std::vector<LayerRow>& rows);

/// Throws std::logic_error if the aggregates disagree with the rows.
void check_aggregates(const RunReport& report);

enum class ReportFormat { kJson, kCsv };

ReportFormat report_format_from_string(std::string_view name);

std::string to_csv(const RunReport& report);
std::string to_json(const RunReport& report);

/// Inverse of to_json.
RunReport parse_report_json(std::string_view text);

void write_report(const RunReport& report, ReportFormat format, std::ostream& out);
/// Throws std::runtime_error on I/O failure.
void emit_report(const RunReport& report, ReportFormat format,
                 const std::filesystem::path& path);

}  // namespace sparsefold
