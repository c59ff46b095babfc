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

#include "sparsefold/verify.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <stdexcept>

#include "sparsefold/conv.hpp"
#include "sparsefold/dilated.hpp"
#include "sparsefold/pe_sim.hpp"
#include "sparsefold/schedule.hpp"

namespace sparsefold {

namespace {

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

void fill(std::span<std::int64_t> values, std::mt19937_64& rng) {
  for (auto& v : values) v = static_cast<std::int64_t>(rng() % 256) - 128;
}

// Smallest input extent that still yields one output.
int min_extent(int kernel, int pad) { return std::max(1, kernel - 2 * pad); }

std::string where(const std::string& label, std::uint64_t seed) {
  return "layer '" + label + "' (seed " + std::to_string(seed) + ")";
}

}  // namespace

bool VerifyResult::passed() const {
  return std::all_of(layers.begin(), layers.end(), [](const LayerCheck& c) { return c.passed; });
}

std::optional<std::string> VerifyResult::first_failure() const {
  for (const auto& c : layers)
    if (!c.passed) return c.detail;
  return std::nullopt;
}

LayerSpec reduce_layer(const LayerSpec& layer, int max_extent, int max_channels) {
  if (max_extent < 1 || max_channels < 1) {
    throw std::invalid_argument("reduce_layer: caps must be positive");
  }
  LayerSpec r = layer;
  r.in_channels = std::min(layer.in_channels, max_channels);
  r.out_channels = std::min(layer.out_channels, max_channels);
  int min_h = 1;
  int min_w = 1;
  if (const auto* p = std::get_if<DenseParams>(&layer.params)) {
    min_h = min_extent(p->kernel_h, p->pad_h);
    min_w = min_extent(p->kernel_w, p->pad_w);
  }
  r.height = std::max(std::min(layer.height, max_extent), min_h);
  r.width = std::max(std::min(layer.width, max_extent), min_w);
  r.validate();
  return r;
}

Tensor3i random_tensor(int channels, int height, int width, std::uint64_t seed,
                       std::uint64_t stream) {
  auto rng = make_rng(seed, stream);
  Tensor3i t(channels, height, width);
  fill(t.values(), rng);
  return t;
}

KernelStacki random_kernels(int out_channels, int in_channels, int kh, int kw,
                            std::uint64_t seed, std::uint64_t stream) {
  auto rng = make_rng(seed, stream);
  KernelStacki k(out_channels, in_channels, kh, kw);
  fill(k.values(), rng);
  return k;
}

std::optional<std::string> first_difference(const Tensor3i& expected, const Tensor3i& actual) {
  if (expected.channels() != actual.channels() || expected.height() != actual.height() ||
      expected.width() != actual.width()) {
    std::ostringstream s;
    s << "shape " << actual.channels() << "x" << actual.height() << "x" << actual.width()
      << ", expected " << expected.channels() << "x" << expected.height() << "x"
      << expected.width();
    return s.str();
  }
  for (int c = 0; c < expected.channels(); ++c)
    for (int y = 0; y < expected.height(); ++y)
      for (int x = 0; x < expected.width(); ++x)
        if (expected(c, y, x) != actual(c, y, x)) {
          std::ostringstream s;
          s << "(" << c << "," << y << "," << x << "): expected " << expected(c, y, x)
            << ", got " << actual(c, y, x);
          return s.str();
        }
  return std::nullopt;
}

LayerCheck verify_layer(const std::string& label, const LayerSpec& layer,
                        const ArrayConfig& array, std::uint64_t index,
                        const VerifyOptions& options) {
  LayerCheck check;
  check.label = label;
  check.kind = layer.kind();
  check.reduced = reduce_layer(layer, options.max_extent, options.max_channels);
  const LayerSpec& l = check.reduced;
  const std::string at = where(label, options.seed);
  auto fail = [&](const std::string& what) {
    check.passed = false;
    check.detail = at + ": " + what;
    return check;
  };

  int kh = 3;
  int kw = 3;
  if (const auto* p = std::get_if<DenseParams>(&l.params)) {
    kh = p->kernel_h;
    kw = p->kernel_w;
  }
  const Tensor3i input = random_tensor(l.in_channels, l.height, l.width, options.seed, 2 * index);
  const KernelStacki weights =
      random_kernels(l.out_channels, l.in_channels, kh, kw, options.seed, 2 * index + 1);

  Tensor3i reference;
  std::uint64_t macs = 0;
  switch (l.kind()) {
    case LayerKind::kDense: {
      const auto& p = l.dense_params();
      reference = detail::correlate(input, weights, p.stride, p.pad_h, p.pad_w, l.output_height(),
                                    l.output_width(), &macs);
      break;
    }
    case LayerKind::kDilated: {
      const int zeros = l.dilated_params().zeros;
      reference = conv_dilated_direct(input, weights, zeros);
      const Tensor3i decomposed = conv_dilated_decomposed(input, weights, zeros, &macs);
      if (auto d = first_difference(reference, decomposed)) return fail("decomposed output " + *d);
      break;
    }
    case LayerKind::kTransposed: {
      const bool even = l.transposed_params().even_output;
      reference = conv_transposed_direct(input, weights, even);
      const auto sub = options.weight_decomposer ? options.weight_decomposer(weights)
                                                 : decompose_weight(weights);
      const Tensor3i decomposed = conv_transposed_decomposed(input, sub, even, &macs);
      if (auto d = first_difference(reference, decomposed)) return fail("decomposed output " + *d);
      break;
    }
  }

  const MacCount expected_macs = count_macs(l);
  if (macs != expected_macs.nonzero) {
    return fail("executed " + std::to_string(macs) + " MACs, expected " +
                std::to_string(expected_macs.nonzero));
  }

  const std::uint64_t budget = options.budget ? options.budget : schedule_budget_from_env();
  ScheduleTrace trace;
  try {
    trace = enumerate_schedule(l, array, budget);
  } catch (const BudgetExceeded& e) {
    return fail(std::string("schedule too large: ") + e.what());
  }
  if (auto clash = find_double_booking(trace)) return fail("schedule " + *clash);
  if (trace.active_slots() != expected_macs.nonzero) {
    return fail("schedule issues " + std::to_string(trace.active_slots()) + " MACs, expected " +
                std::to_string(expected_macs.nonzero));
  }
  const std::uint64_t closed_form = simulate_layer(l, array).cycles;
  if (trace.cycles() != closed_form) {
    return fail("schedule takes " + std::to_string(trace.cycles()) +
                " cycles, closed form says " + std::to_string(closed_form));
  }
  try {
    const Tensor3i replayed = replay_schedule(trace, l, input, weights);
    if (auto d = first_difference(reference, replayed)) return fail("schedule replay " + *d);
  } catch (const std::logic_error& e) {
    return fail(e.what());
  }

  check.passed = true;
  return check;
}

VerifyResult verify_network(const NetworkConfig& config, const VerifyOptions& options) {
  VerifyResult result;
  for (LayerKind kind : {LayerKind::kDense, LayerKind::kDilated, LayerKind::kTransposed}) {
    if (std::any_of(config.layers.begin(), config.layers.end(),
                    [&](const LabeledLayer& l) { return l.spec.kind() == kind; })) {
      result.kinds.push_back({kind, 0, 0});
    }
  }
  for (std::size_t i = 0; i < config.layers.size(); ++i) {
    const auto& layer = config.layers[i];
    LayerCheck check = verify_layer(layer.label, layer.spec, config.array, i, options);
    for (auto& tally : result.kinds) {
      if (tally.kind != check.kind) continue;
      ++tally.checked;
      if (!check.passed) ++tally.failed;
    }
    const bool ok = check.passed;
    result.layers.push_back(std::move(check));
    if (!ok) break;
  }
  return result;
}

}  // namespace sparsefold
