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

// netrunner: per-layer cycle analysis, reports and functional verification
// for a network config.
//
//   netrunner analyze --config net.json [--blocks B] [--rows N] [--out PATH]
//   netrunner report  --config net.json [--format json|csv] [--out PATH]
//   netrunner verify  --config net.json [--seed U64]
//
// Exit status: 0 on success, 1 when verification fails, 2 on bad input or
// I/O errors.

#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "sparsefold/network.hpp"
#include "sparsefold/report.hpp"
#include "sparsefold/schedule.hpp"
#include "sparsefold/verify.hpp"

namespace {

using namespace sparsefold;

struct Options {
  std::string config;
  std::optional<int> blocks;
  std::optional<int> rows;
  std::string format = "json";
  std::uint64_t seed = 0;
  std::string out;
};

NetworkConfig load(const Options& opt) {
  NetworkConfig cfg = load_config(opt.config);
  if (opt.blocks) cfg.array.blocks = *opt.blocks;
  if (opt.rows) cfg.array.rows = *opt.rows;
  validate(cfg);
  return cfg;
}

void write_text(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  out.flush();
  if (!out) throw std::runtime_error(path + ": cannot write");
}

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string summary_table(const RunReport& r) {
  std::ostringstream s;
  char line[256];
  s << r.name << " on " << r.array.blocks << " blocks x " << r.array.rows << " rows ("
    << r.array.macs_per_cycle() << " MACs/cycle), " << r.rows.size() << " layers\n\n";
  std::snprintf(line, sizeof line, "%-16s %-10s %-22s %14s %14s %14s %7s %8s %6s\n", "label",
                "kind", "mode", "cycles", "ideal_dense", "ideal_sparse", "util", "speedup",
                "eff");
  s << line;
  for (const auto& row : r.rows) {
    const auto& c = row.report;
    std::snprintf(line, sizeof line,
                  "%-16s %-10s %-22s %14llu %14llu %14llu %7.3f %8.2f %6.3f%s\n",
                  row.label.c_str(), std::string(to_string(row.kind)).c_str(),
                  std::string(to_string(c.mode)).c_str(),
                  static_cast<unsigned long long>(c.cycles),
                  static_cast<unsigned long long>(c.ideal_dense_cycles),
                  static_cast<unsigned long long>(c.ideal_sparse_cycles), c.utilization,
                  c.speedup(), c.sparse_efficiency(), c.below_sparse_bound() ? " *" : "");
    s << line;
  }
  s << "\nby kind:\n";
  for (const auto& k : r.kinds) {
    s << "  " << to_string(k.kind) << ": " << k.totals.layers << " layers, ideal dense share "
      << fmt("%.1f%%", 100 * k.ideal_dense_share) << ", now "
      << fmt("%.1f%%", 100 * k.cycle_share) << ", speedup " << fmt("%.2fX", k.totals.speedup())
      << "\n";
  }
  const Totals& t = r.aggregate;
  s << "\ntotal cycles " << t.cycles << " vs ideal dense " << t.ideal_dense_cycles
    << ", ideal sparse " << t.ideal_sparse_cycles << "\n"
    << "operations skipped " << fmt("%.2f%%", 100 * t.operations_skipped())
    << ", cycles skipped " << fmt("%.2f%%", 100 * t.cycles_skipped()) << ", speedup "
    << fmt("%.2fX", t.speedup()) << ", utilization " << fmt("%.3f", t.utilization(r.array))
    << "\n";
  return s.str();
}

int run_verify(const Options& opt) {
  const NetworkConfig cfg = load(opt);
  VerifyOptions vo;
  vo.seed = opt.seed;
  const VerifyResult result = verify_network(cfg, vo);
  std::ostringstream s;
  for (const auto& k : result.kinds) {
    s << to_string(k.kind) << ": " << (k.failed ? "FAIL" : "pass") << " (" << k.checked
      << " checked";
    if (k.failed) s << ", " << k.failed << " failed";
    s << ")\n";
  }
  if (auto failure = result.first_failure()) s << "error: " << *failure << "\n";
  if (result.layers.size() < cfg.layers.size()) {
    s << "stopped after " << result.layers.size() << " of " << cfg.layers.size() << " layers\n";
  }
  write_text(s.str(), opt.out);
  return result.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cycle analysis and verification of decomposed dilated/transposed convolutions"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config, "Network config (JSON)")->required();
    sub->add_option("--blocks", opt.blocks, "PE blocks B (overrides the config)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--rows", opt.rows, "MAC rows per block n (overrides the config)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--out", opt.out, "Write output here instead of stdout");
  };
  auto* analyze_cmd = app.add_subcommand("analyze", "Per-layer cycle summary table");
  add_common(analyze_cmd);
  auto* report_cmd = app.add_subcommand("report", "Machine-readable per-layer report");
  add_common(report_cmd);
  report_cmd->add_option("--format", opt.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  auto* verify_cmd = app.add_subcommand("verify", "Randomized equivalence checks");
  add_common(verify_cmd);
  verify_cmd->add_option("--seed", opt.seed, "Data seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*verify_cmd) return run_verify(opt);
    const RunReport report = analyze(load(opt));
    if (*analyze_cmd) {
      write_text(summary_table(report), opt.out);
    } else if (opt.out.empty()) {
      write_report(report, report_format_from_string(opt.format), std::cout);
    } else {
      emit_report(report, report_format_from_string(opt.format), opt.out);
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "netrunner: " << e.what() << "\n";
    return 2;
  }
}
