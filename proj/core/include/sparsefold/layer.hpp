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
#include <string>
#include <string_view>
#include <variant>

namespace sparsefold {

enum class LayerKind { kDense, kDilated, kTransposed };

std::string_view to_string(LayerKind kind);
LayerKind layer_kind_from_string(std::string_view name);  // throws on unknown

/// Ordinary convolution. Kernel and padding default to a same-size 3x3.
struct DenseParams {
  int kernel_h = 3;
  int kernel_w = 3;
  int stride = 1;
  int pad_h = 1;
  int pad_w = 1;

  friend bool operator==(const DenseParams&, const DenseParams&) = default;
};

/// Same-size 3x3 convolution with `zeros` (D >= 1) inserted between taps.
struct DilatedParams {
  int zeros = 1;

  friend bool operator==(const DilatedParams&, const DilatedParams&) = default;
};

/// Stride-2 3x3 transposed convolution; (2H-1)x(2W-1) output, or 2Hx2W with
/// `even_output`.
struct TransposedParams {
  bool even_output = false;

  friend bool operator==(const TransposedParams&, const TransposedParams&) = default;
};

struct LayerSpec {
  int in_channels = 1;
  int out_channels = 1;
  int height = 1;  // input extent
  int width = 1;
  std::variant<DenseParams, DilatedParams, TransposedParams> params;

  static LayerSpec dense(int ci, int co, int h, int w, DenseParams p = {});
  static LayerSpec dilated(int ci, int co, int h, int w, int zeros);
  static LayerSpec transposed(int ci, int co, int h, int w, bool even_output = false);

  LayerKind kind() const noexcept;
  int output_height() const;
  int output_width() const;

  const DenseParams& dense_params() const { return std::get<DenseParams>(params); }
  const DilatedParams& dilated_params() const { return std::get<DilatedParams>(params); }
  const TransposedParams& transposed_params() const {
    return std::get<TransposedParams>(params);
  }

  /// Throws std::invalid_argument describing the first violated constraint.
  void validate() const;

  friend bool operator==(const LayerSpec&, const LayerSpec&) = default;
};

/// `total` counts every kernel tap at every output position, including taps
/// that land on padding, inserted input zeros or inserted kernel zeros.
/// `nonzero` counts only taps whose weight and input cell are both
/// structurally nonzero. Data values that happen to be 0 are still nonzero.
struct MacCount {
  std::uint64_t total = 0;
  std::uint64_t nonzero = 0;

  friend bool operator==(const MacCount&, const MacCount&) = default;
  MacCount& operator+=(const MacCount& o) {
    total += o.total;
    nonzero += o.nonzero;
    return *this;
  }
};

enum class MacAccounting {
  kExact,
  // Every input cell treated as interior: no tap falls off an edge. Dilated
  // total/nonzero is exactly (2D+3)^2/9 and transposed exactly 4.
  kInterior,
};

MacCount count_macs(const LayerSpec& layer,
                    MacAccounting accounting = MacAccounting::kExact);

/// Number of (output, tap) pairs along one axis whose input index falls
/// inside [0, in): sum over outputs o < out and taps k < kernel of
/// [0 <= o*stride + k*dilation - pad < in].
std::uint64_t valid_taps_1d(int in, int out, int kernel, int stride, int pad,
                            int dilation = 1);

}  // namespace sparsefold
