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

#include "sparsefold/layer.hpp"

#include <stdexcept>
#include <string>

#include "sparsefold/conv.hpp"

namespace sparsefold {

std::string_view to_string(LayerKind kind) {
  switch (kind) {
    case LayerKind::kDense: return "dense";
    case LayerKind::kDilated: return "dilated";
    case LayerKind::kTransposed: return "transposed";
  }
  return "unknown";
}

LayerKind layer_kind_from_string(std::string_view name) {
  if (name == "dense") return LayerKind::kDense;
  if (name == "dilated") return LayerKind::kDilated;
  if (name == "transposed") return LayerKind::kTransposed;
  throw std::invalid_argument("unknown layer kind '" + std::string(name) + "'");
}

LayerSpec LayerSpec::dense(int ci, int co, int h, int w, DenseParams p) {
  return LayerSpec{ci, co, h, w, p};
}

LayerSpec LayerSpec::dilated(int ci, int co, int h, int w, int zeros) {
  return LayerSpec{ci, co, h, w, DilatedParams{zeros}};
}

LayerSpec LayerSpec::transposed(int ci, int co, int h, int w, bool even_output) {
  return LayerSpec{ci, co, h, w, TransposedParams{even_output}};
}

LayerKind LayerSpec::kind() const noexcept {
  return static_cast<LayerKind>(params.index());
}

int LayerSpec::output_height() const {
  switch (kind()) {
    case LayerKind::kDense: {
      const auto& p = dense_params();
      return conv_output_extent(height, p.kernel_h, p.stride, p.pad_h);
    }
    case LayerKind::kDilated: return height;
    case LayerKind::kTransposed:
      return 2 * height - 1 + (transposed_params().even_output ? 1 : 0);
  }
  return 0;
}

int LayerSpec::output_width() const {
  switch (kind()) {
    case LayerKind::kDense: {
      const auto& p = dense_params();
      return conv_output_extent(width, p.kernel_w, p.stride, p.pad_w);
    }
    case LayerKind::kDilated: return width;
    case LayerKind::kTransposed:
      return 2 * width - 1 + (transposed_params().even_output ? 1 : 0);
  }
  return 0;
}

void LayerSpec::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument(what); };
  if (in_channels < 1 || out_channels < 1) fail("channel counts must be positive");
  if (height < 1 || width < 1) fail("input extents must be positive");
  switch (kind()) {
    case LayerKind::kDense: {
      const auto& p = dense_params();
      if (p.kernel_h < 1 || p.kernel_w < 1) fail("kernel extents must be positive");
      if (p.stride < 1) fail("stride must be >= 1");
      if (p.pad_h < 0 || p.pad_w < 0) fail("padding must be non-negative");
      if (output_height() < 1 || output_width() < 1) fail("kernel does not fit the padded input");
      break;
    }
    case LayerKind::kDilated:
      // D = 0 is accepted here as the degenerate case; network configs
      // require D >= 1.
      if (dilated_params().zeros < 0) fail("dilation zeros must be non-negative");
      break;
    case LayerKind::kTransposed: break;
  }
}

std::uint64_t valid_taps_1d(int in, int out, int kernel, int stride, int pad,
                            int dilation) {
  std::uint64_t n = 0;
  for (int k = 0; k < kernel; ++k) {
    int first, last;
    detail::valid_output_range(in, out, stride, k * dilation, pad, first, last);
    n += static_cast<std::uint64_t>(last - first);
  }
  return n;
}

namespace {

// Per-axis count of (output, tap) pairs of a transposed layer that meet an
// original input cell: every input cell feeds outputs 2i+1-k, k = 0..2.
std::uint64_t transposed_axis_taps(int in, bool even_output) {
  return 3ull * in - (even_output ? 1 : 2);
}

}  // namespace

MacCount count_macs(const LayerSpec& layer, MacAccounting accounting) {
  layer.validate();
  const std::uint64_t channels =
      static_cast<std::uint64_t>(layer.in_channels) * layer.out_channels;
  const std::uint64_t in_cells = static_cast<std::uint64_t>(layer.height) * layer.width;
  const std::uint64_t out_cells =
      static_cast<std::uint64_t>(layer.output_height()) * layer.output_width();
  const bool interior = accounting == MacAccounting::kInterior;

  MacCount m;
  switch (layer.kind()) {
    case LayerKind::kDense: {
      const auto& p = layer.dense_params();
      const std::uint64_t taps = static_cast<std::uint64_t>(p.kernel_h) * p.kernel_w;
      m.total = channels * out_cells * taps;
      m.nonzero = interior ? m.total
                           : channels *
                                 valid_taps_1d(layer.height, layer.output_height(),
                                               p.kernel_h, p.stride, p.pad_h) *
                                 valid_taps_1d(layer.width, layer.output_width(),
                                               p.kernel_w, p.stride, p.pad_w);
      break;
    }
    case LayerKind::kDilated: {
      const int d = layer.dilated_params().zeros;
      const std::uint64_t k = 2ull * d + 3;
      m.total = channels * in_cells * k * k;
      m.nonzero = interior ? channels * in_cells * 9
                           : channels *
                                 valid_taps_1d(layer.height, layer.height, 3, 1, d + 1, d + 1) *
                                 valid_taps_1d(layer.width, layer.width, 3, 1, d + 1, d + 1);
      break;
    }
    case LayerKind::kTransposed: {
      const bool even = layer.transposed_params().even_output;
      if (interior) {
        m.total = channels * 4 * in_cells * 9;
        m.nonzero = channels * in_cells * 9;
      } else {
        m.total = channels * out_cells * 9;
        m.nonzero = channels * transposed_axis_taps(layer.height, even) *
                    transposed_axis_taps(layer.width, even);
      }
      break;
    }
  }
  return m;
}

}  // namespace sparsefold
