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

// Reference convolutions. All of them are cross-correlations (no kernel
// flip); padding and inserted zeros are never materialized as reads.

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "sparsefold/tensor.hpp"

namespace sparsefold {

namespace detail {

// ceil(a / b) for a >= 0, b > 0; floor for negative a is handled by callers.
constexpr int ceil_div(int a, int b) { return (a + b - 1) / b; }

// First and one-past-last output index o in [0, out) such that
// 0 <= o*stride + tap - pad < in.
inline void valid_output_range(int in, int out, int stride, int tap, int pad,
                               int& first, int& last) {
  const int lo = pad - tap;  // o*stride >= lo
  const int hi = in - 1 + pad - tap;  // o*stride <= hi
  first = lo <= 0 ? 0 : ceil_div(lo, stride);
  last = hi < 0 ? 0 : std::min(out, hi / stride + 1);
  if (last < first) last = first;
}

/// out(co,y,x) = sum w(co,ci,ky,kx) * in(ci, y*s+ky-pad_top, x*s+kx-pad_left)
/// over in-range reads only. Reads past the bottom/right edge also count as
/// zero, so one-sided padding is expressed through the output extents.
template <typename T>
Tensor3<T> correlate(const Tensor3<T>& input, const KernelStack<T>& weights,
                     int stride, int pad_top, int pad_left, int out_h,
                     int out_w, std::uint64_t* macs = nullptr) {
  if (input.channels() != weights.in_channels()) {
    throw std::invalid_argument(
        "convolution: input has " + std::to_string(input.channels()) +
        " channels but weights expect " +
        std::to_string(weights.in_channels()));
  }
  if (out_h < 1 || out_w < 1) {
    throw std::invalid_argument("convolution: non-positive output extent " +
                                std::to_string(out_h) + "x" +
                                std::to_string(out_w));
  }
  Tensor3<T> out(weights.out_channels(), out_h, out_w);
  std::uint64_t count = 0;
  for (int co = 0; co < weights.out_channels(); ++co) {
    for (int ci = 0; ci < weights.in_channels(); ++ci) {
      for (int ky = 0; ky < weights.kernel_h(); ++ky) {
        int y0, y1;
        valid_output_range(input.height(), out_h, stride, ky, pad_top, y0, y1);
        for (int kx = 0; kx < weights.kernel_w(); ++kx) {
          int x0, x1;
          valid_output_range(input.width(), out_w, stride, kx, pad_left, x0,
                             x1);
          const T w = weights(co, ci, ky, kx);
          for (int y = y0; y < y1; ++y) {
            const T* src = input.row(ci, y * stride + ky - pad_top);
            T* dst = out.row(co, y);
            for (int x = x0; x < x1; ++x) {
              dst[x] += w * src[x * stride + kx - pad_left];
            }
          }
          count += static_cast<std::uint64_t>(y1 - y0) * (x1 - x0);
        }
      }
    }
  }
  if (macs) *macs += count;
  return out;
}

template <typename T>
void require_3x3(const KernelStack<T>& weights, const char* op) {
  if (weights.kernel_h() != 3 || weights.kernel_w() != 3) {
    throw std::invalid_argument(std::string(op) + ": expected a 3x3 kernel, got " +
                                std::to_string(weights.kernel_h()) + "x" +
                                std::to_string(weights.kernel_w()));
  }
}

}  // namespace detail

/// Dense cross-correlation with symmetric zero padding.
///
/// `macs`, when given, is incremented by the number of multiplies whose input
/// cell lies inside the image (padding reads are skipped, not multiplied).
template <typename T>
Tensor3<T> conv2d(const Tensor3<T>& input, const KernelStack<T>& weights,
                  ConvGeometry geom, std::uint64_t* macs = nullptr) {
  if (geom.stride < 1 || geom.pad < 0) {
    throw std::invalid_argument("conv2d: stride must be >= 1 and pad >= 0");
  }
  const int out_h = conv_output_extent(input.height(), weights.kernel_h(),
                                       geom.stride, geom.pad);
  const int out_w = conv_output_extent(input.width(), weights.kernel_w(),
                                       geom.stride, geom.pad);
  return detail::correlate(input, weights, geom.stride, geom.pad, geom.pad,
                           out_h, out_w, macs);
}

/// Expands a 3x3 kernel to (2D+3)x(2D+3) by inserting D zeros between taps.
template <typename T>
KernelStack<T> dilate_kernel(const KernelStack<T>& weights, int zeros) {
  detail::require_3x3(weights, "dilate_kernel");
  if (zeros < 0) {
    throw std::invalid_argument("dilate_kernel: negative dilation " +
                                std::to_string(zeros));
  }
  const int k = 2 * zeros + 3;
  const int step = zeros + 1;
  KernelStack<T> out(weights.out_channels(), weights.in_channels(), k, k);
  for (int co = 0; co < weights.out_channels(); ++co)
    for (int ci = 0; ci < weights.in_channels(); ++ci)
      for (int ky = 0; ky < 3; ++ky)
        for (int kx = 0; kx < 3; ++kx)
          out(co, ci, ky * step, kx * step) = weights(co, ci, ky, kx);
  return out;
}

/// Same-size dilated convolution computed on the zero-inserted kernel.
template <typename T>
Tensor3<T> conv_dilated_direct(const Tensor3<T>& input,
                               const KernelStack<T>& weights, int zeros) {
  return conv2d(input, dilate_kernel(weights, zeros),
                ConvGeometry{1, zeros + 1});
}

/// Inserts one zero between horizontally and vertically adjacent cells:
/// HxW becomes (2H-1)x(2W-1).
template <typename T>
Tensor3<T> zero_insert(const Tensor3<T>& input) {
  if (input.empty()) throw std::invalid_argument("zero_insert: empty tensor");
  Tensor3<T> out(input.channels(), 2 * input.height() - 1,
                 2 * input.width() - 1);
  for (int c = 0; c < input.channels(); ++c)
    for (int y = 0; y < input.height(); ++y)
      for (int x = 0; x < input.width(); ++x)
        out(c, 2 * y, 2 * x) = input(c, y, x);
  return out;
}

/// Stride-2, 3x3 transposed convolution realized on the zero-inserted input
/// with pad 1. The output is (2H-1)x(2W-1), or 2Hx2W when `even_output` adds a
/// trailing zero row and column to the enlarged input.
template <typename T>
Tensor3<T> conv_transposed_direct(const Tensor3<T>& input,
                                  const KernelStack<T>& weights,
                                  bool even_output = false) {
  detail::require_3x3(weights, "conv_transposed_direct");
  if (!even_output) return conv2d(zero_insert(input), weights, ConvGeometry{1, 1});
  Tensor3<T> enlarged(input.channels(), 2 * input.height(), 2 * input.width());
  for (int c = 0; c < input.channels(); ++c)
    for (int y = 0; y < input.height(); ++y)
      for (int x = 0; x < input.width(); ++x)
        enlarged(c, 2 * y, 2 * x) = input(c, y, x);
  // Symmetric pad 1 on a 2H enlarged input gives 2H outputs.
  return conv2d(enlarged, weights, ConvGeometry{1, 1});
}

}  // namespace sparsefold
