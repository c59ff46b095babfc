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

#include "sparsefold/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace sparsefold {

namespace {

using json = nlohmann::ordered_json;

double ratio(std::uint64_t num, std::uint64_t den) {
  return den ? static_cast<double>(num) / static_cast<double>(den) : 0.0;
}

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

ScheduleMode schedule_mode_from_string(std::string_view name) {
  for (auto m : {ScheduleMode::kDense, ScheduleMode::kDecomposedDilated,
                 ScheduleMode::kPackedTransposed, ScheduleMode::kSequentialTransposed}) {
    if (to_string(m) == name) return m;
  }
  throw std::invalid_argument("unknown schedule mode '" + std::string(name) + "'");
}

constexpr LayerKind kKindOrder[] = {LayerKind::kDense, LayerKind::kDilated,
                                    LayerKind::kTransposed};

json totals_json(const Totals& t) {
  return json{{"layers", t.layers},
              {"cycles", t.cycles},
              {"ideal_dense", t.ideal_dense_cycles},
              {"ideal_sparse", t.ideal_sparse_cycles},
              {"macs_total", t.macs.total},
              {"macs_nonzero", t.macs.nonzero}};
}

Totals totals_from_json(const json& j) {
  Totals t;
  t.layers = j.at("layers").get<std::uint64_t>();
  t.cycles = j.at("cycles").get<std::uint64_t>();
  t.ideal_dense_cycles = j.at("ideal_dense").get<std::uint64_t>();
  t.ideal_sparse_cycles = j.at("ideal_sparse").get<std::uint64_t>();
  t.macs.total = j.at("macs_total").get<std::uint64_t>();
  t.macs.nonzero = j.at("macs_nonzero").get<std::uint64_t>();
  return t;
}

}  // namespace

double Totals::utilization(const ArrayConfig& array) const {
  const double slots = static_cast<double>(cycles) * array.macs_per_cycle();
  return slots > 0 ? static_cast<double>(macs.nonzero) / slots : 0.0;
}
double Totals::speedup() const { return ratio(ideal_dense_cycles, cycles); }
double Totals::sparse_efficiency() const { return ratio(ideal_sparse_cycles, cycles); }
double Totals::operations_skipped() const { return 1.0 - ratio(macs.nonzero, macs.total); }
double Totals::cycles_skipped() const { return 1.0 - ratio(cycles, ideal_dense_cycles); }

Totals sum_rows(const std::vector<LayerRow>& rows) {
  Totals t;
  for (const auto& row : rows) {
    ++t.layers;
    t.cycles += row.report.cycles;
    t.ideal_dense_cycles += row.report.ideal_dense_cycles;
    t.ideal_sparse_cycles += row.report.ideal_sparse_cycles;
    t.macs += row.report.macs;
  }
  return t;
}

std::vector<KindSummary> summarize_kinds(const std::vector<LayerRow>& rows) {
  const Totals all = sum_rows(rows);
  std::vector<KindSummary> out;
  for (LayerKind kind : kKindOrder) {
    std::vector<LayerRow> subset;
    for (const auto& row : rows)
      if (row.kind == kind) subset.push_back(row);
    if (subset.empty()) continue;
    KindSummary s;
    s.kind = kind;
    s.totals = sum_rows(subset);
    s.ideal_dense_share = ratio(s.totals.ideal_dense_cycles, all.ideal_dense_cycles);
    s.cycle_share = ratio(s.totals.cycles, all.ideal_dense_cycles);
    out.push_back(s);
  }
  return out;
}

RunReport analyze(const NetworkConfig& config) {
  validate(config);
  RunReport report;
  report.name = config.name;
  report.array = config.array;
  for (const auto& layer : config.layers) {
    report.rows.push_back({layer.label, layer.spec.kind(), simulate_layer(layer.spec, config.array)});
  }
  report.aggregate = sum_rows(report.rows);
  report.kinds = summarize_kinds(report.rows);
  check_aggregates(report);
  return report;
}

void check_aggregates(const RunReport& report) {
  if (!(sum_rows(report.rows) == report.aggregate)) {
    throw std::logic_error("report aggregate does not match its rows");
  }
  const auto kinds = summarize_kinds(report.rows);
  if (kinds.size() != report.kinds.size()) {
    throw std::logic_error("report kind summaries do not match its rows");
  }
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    if (kinds[i].kind != report.kinds[i].kind || !(kinds[i].totals == report.kinds[i].totals) ||
        kinds[i].ideal_dense_share != report.kinds[i].ideal_dense_share ||
        kinds[i].cycle_share != report.kinds[i].cycle_share) {
      throw std::logic_error("report summary for " + std::string(to_string(kinds[i].kind)) +
                             " layers does not match its rows");
    }
  }
}

ReportFormat report_format_from_string(std::string_view name) {
  if (name == "json") return ReportFormat::kJson;
  if (name == "csv") return ReportFormat::kCsv;
  throw std::invalid_argument("unknown report format '" + std::string(name) +
                              "' (expected json or csv)");
}

std::string to_csv(const RunReport& report) {
  std::ostringstream out;
  out << "label,kind,cycles,ideal_dense,ideal_sparse,utilization,speedup\n";
  for (const auto& row : report.rows) {
    const auto& r = row.report;
    out << row.label << ',' << to_string(row.kind) << ',' << r.cycles << ','
        << r.ideal_dense_cycles << ',' << r.ideal_sparse_cycles << ','
        << fixed6(r.utilization) << ',' << fixed6(r.speedup()) << '\n';
  }
  const Totals& t = report.aggregate;
  out << "AGGREGATE,all," << t.cycles << ',' << t.ideal_dense_cycles << ','
      << t.ideal_sparse_cycles << ',' << fixed6(t.utilization(report.array)) << ','
      << fixed6(t.speedup()) << '\n';
  return out.str();
}

std::string to_json(const RunReport& report) {
  json root;
  root["name"] = report.name;
  root["array"] = {{"blocks", report.array.blocks},
                   {"rows", report.array.rows},
                   {"macs_per_cycle", report.array.macs_per_cycle()}};
  json layers = json::array();
  for (const auto& row : report.rows) {
    const auto& r = row.report;
    layers.push_back(json{{"label", row.label},
                          {"kind", std::string(to_string(row.kind))},
                          {"mode", std::string(to_string(r.mode))},
                          {"cycles", r.cycles},
                          {"ideal_dense", r.ideal_dense_cycles},
                          {"ideal_sparse", r.ideal_sparse_cycles},
                          {"macs_total", r.macs.total},
                          {"macs_nonzero", r.macs.nonzero},
                          {"utilization", r.utilization},
                          {"speedup", r.speedup()},
                          {"sparse_efficiency", r.sparse_efficiency()}});
  }
  root["layers"] = std::move(layers);

  json kinds = json::array();
  for (const auto& k : report.kinds) {
    json j = totals_json(k.totals);
    j["kind"] = std::string(to_string(k.kind));
    j["ideal_dense_share"] = k.ideal_dense_share;
    j["cycle_share"] = k.cycle_share;
    j["speedup"] = k.totals.speedup();
    j["sparse_efficiency"] = k.totals.sparse_efficiency();
    kinds.push_back(std::move(j));
  }
  root["kinds"] = std::move(kinds);

  const Totals& t = report.aggregate;
  json agg = totals_json(t);
  agg["utilization"] = t.utilization(report.array);
  agg["operations_skipped"] = t.operations_skipped();
  agg["cycles_skipped"] = t.cycles_skipped();
  agg["speedup"] = t.speedup();
  agg["sparse_efficiency"] = t.sparse_efficiency();
  root["aggregate"] = std::move(agg);
  return root.dump(2) + "\n";
}

RunReport parse_report_json(std::string_view text) {
  const json root = json::parse(text);
  RunReport report;
  report.name = root.at("name").get<std::string>();
  report.array.blocks = root.at("array").at("blocks").get<int>();
  report.array.rows = root.at("array").at("rows").get<int>();
  for (const auto& j : root.at("layers")) {
    LayerRow row;
    row.label = j.at("label").get<std::string>();
    row.kind = layer_kind_from_string(j.at("kind").get<std::string>());
    row.report.mode = schedule_mode_from_string(j.at("mode").get<std::string>());
    row.report.cycles = j.at("cycles").get<std::uint64_t>();
    row.report.ideal_dense_cycles = j.at("ideal_dense").get<std::uint64_t>();
    row.report.ideal_sparse_cycles = j.at("ideal_sparse").get<std::uint64_t>();
    row.report.macs.total = j.at("macs_total").get<std::uint64_t>();
    row.report.macs.nonzero = j.at("macs_nonzero").get<std::uint64_t>();
    row.report.utilization = j.at("utilization").get<double>();
    report.rows.push_back(std::move(row));
  }
  for (const auto& j : root.at("kinds")) {
    KindSummary k;
    k.kind = layer_kind_from_string(j.at("kind").get<std::string>());
    k.totals = totals_from_json(j);
    k.ideal_dense_share = j.at("ideal_dense_share").get<double>();
    k.cycle_share = j.at("cycle_share").get<double>();
    report.kinds.push_back(k);
  }
  report.aggregate = totals_from_json(root.at("aggregate"));
  return report;
}

void write_report(const RunReport& report, ReportFormat format, std::ostream& out) {
  out << (format == ReportFormat::kJson ? to_json(report) : to_csv(report));
}

void emit_report(const RunReport& report, ReportFormat format,
                 const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
  write_report(report, format, out);
  out.flush();
  if (!out) throw std::runtime_error(path.string() + ": write failed");
}

}  // namespace sparsefold
