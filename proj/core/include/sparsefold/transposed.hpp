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

// Weight decomposition for stride-2 3x3 transposed convolutions. On the
// zero-inserted input only taps with (y+ky) and (x+kx) odd ever meet an
// original cell, so each output parity class sees a fixed subset of the
// kernel and the whole operation becomes four small dense convolutions on
// the original input.

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "sparsefold/conv.hpp"
#include "sparsefold/tensor.hpp"

namespace sparsefold {

/// Output-coordinate parity: first letter is the row, second the column.
enum class ParityClass { EE, EO, OE, OO };

constexpr ParityClass parity_of(int y, int x) {
  const bool oy = y % 2 != 0;
  const bool ox = x % 2 != 0;
  return oy ? (ox ? ParityClass::OO : ParityClass::OE)
            : (ox ? ParityClass::EO : ParityClass::EE);
}

/// The four pieces of a 3x3 kernel.
///   corner(a, b) = w(2a, 2b)   2x2, drives OO outputs
///   hpair(0, b)  = w(1, 2b)    1x2, drives EO outputs
///   vpair(a, 0)  = w(2a, 1)    2x1, drives OE outputs
///   center       = w(1, 1)     1x1, drives EE outputs
template <typename T>
struct SubKernelSet {
  KernelStack<T> corner;
  KernelStack<T> hpair;
  KernelStack<T> vpair;
  KernelStack<T> center;
};

template <typename T>
SubKernelSet<T> decompose_weight(const KernelStack<T>& weights) {
  detail::require_3x3(weights, "decompose_weight");
  const int co_n = weights.out_channels();
  const int ci_n = weights.in_channels();
  SubKernelSet<T> set{KernelStack<T>(co_n, ci_n, 2, 2),
                      KernelStack<T>(co_n, ci_n, 1, 2),
                      KernelStack<T>(co_n, ci_n, 2, 1),
                      KernelStack<T>(co_n, ci_n, 1, 1)};
  for (int co = 0; co < co_n; ++co) {
    for (int ci = 0; ci < ci_n; ++ci) {
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) set.corner(co, ci, a, b) = weights(co, ci, 2 * a, 2 * b);
        set.hpair(co, ci, 0, a) = weights(co, ci, 1, 2 * a);
        set.vpair(co, ci, a, 0) = weights(co, ci, 2 * a, 1);
      }
      set.center(co, ci, 0, 0) = weights(co, ci, 1, 1);
    }
  }
  return set;
}

/// Extents of the four per-class outputs for an HxW input.
struct ParityExtents {
  int height = 0;
  int width = 0;
  bool even_output = false;

  int out_height() const { return 2 * height - 1 + (even_output ? 1 : 0); }
  int out_width() const { return 2 * width - 1 + (even_output ? 1 : 0); }
  int odd_rows() const { return height - 1 + (even_output ? 1 : 0); }
  int odd_cols() const { return width - 1 + (even_output ? 1 : 0); }

  // {rows, cols} of the sub-output for a class.
  std::array<int, 2> of(ParityClass cls) const {
    switch (cls) {
      case ParityClass::EE: return {height, width};
      case ParityClass::EO: return {height, odd_cols()};
      case ParityClass::OE: return {odd_rows(), width};
      case ParityClass::OO: return {odd_rows(), odd_cols()};
    }
    return {0, 0};
  }
};

template <typename T>
struct ParityOutputs {
  Tensor3<T> ee, eo, oe, oo;  // empty where the class has no cells
};

namespace detail {

template <typename T>
void check_parity_block(const Tensor3<T>& t, std::array<int, 2> expected,
                        int channels, const char* name) {
  const bool should_be_empty = expected[0] == 0 || expected[1] == 0;
  if (t.empty()) {
    if (!should_be_empty) {
      throw std::invalid_argument(std::string("interleave_outputs: ") + name +
                                  " is empty but should be " +
                                  std::to_string(expected[0]) + "x" +
                                  std::to_string(expected[1]));
    }
    return;
  }
  if (t.height() != expected[0] || t.width() != expected[1] ||
      t.channels() != channels) {
    throw std::invalid_argument(
        std::string("interleave_outputs: ") + name + " is " +
        std::to_string(t.channels()) + "x" + std::to_string(t.height()) + "x" +
        std::to_string(t.width()) + ", expected " + std::to_string(channels) +
        "x" + std::to_string(expected[0]) + "x" + std::to_string(expected[1]));
  }
}

}  // namespace detail

/// out(2i,2j)=ee, out(2i,2j+1)=eo, out(2i+1,2j)=oe, out(2i+1,2j+1)=oo.
template <typename T>
Tensor3<T> interleave_outputs(const Tensor3<T>& ee, const Tensor3<T>& eo,
                              const Tensor3<T>& oe, const Tensor3<T>& oo,
                              int height, int width, bool even_output = false) {
  if (height < 1 || width < 1) {
    throw std::invalid_argument("interleave_outputs: non-positive input extent");
  }
  if (ee.empty()) throw std::invalid_argument("interleave_outputs: ee is empty");
  const ParityExtents ext{height, width, even_output};
  const int channels = ee.channels();
  detail::check_parity_block(ee, ext.of(ParityClass::EE), channels, "ee");
  detail::check_parity_block(eo, ext.of(ParityClass::EO), channels, "eo");
  detail::check_parity_block(oe, ext.of(ParityClass::OE), channels, "oe");
  detail::check_parity_block(oo, ext.of(ParityClass::OO), channels, "oo");

  Tensor3<T> out(channels, ext.out_height(), ext.out_width());
  auto place = [&](const Tensor3<T>& src, int dy, int dx) {
    if (src.empty()) return;
    for (int c = 0; c < channels; ++c)
      for (int i = 0; i < src.height(); ++i)
        for (int j = 0; j < src.width(); ++j)
          out(c, 2 * i + dy, 2 * j + dx) = src(c, i, j);
  };
  place(ee, 0, 0);
  place(eo, 0, 1);
  place(oe, 1, 0);
  place(oo, 1, 1);
  return out;
}

template <typename T>
Tensor3<T> interleave_outputs(const ParityOutputs<T>& parts, int height,
                              int width, bool even_output = false) {
  return interleave_outputs(parts.ee, parts.eo, parts.oe, parts.oo, height,
                            width, even_output);
}

/// Inverse of interleave_outputs.
template <typename T>
ParityOutputs<T> split_by_parity(const Tensor3<T>& full, int height, int width,
                                 bool even_output = false) {
  const ParityExtents ext{height, width, even_output};
  if (full.height() != ext.out_height() || full.width() != ext.out_width()) {
    throw std::invalid_argument("split_by_parity: tensor is " +
                                std::to_string(full.height()) + "x" +
                                std::to_string(full.width()) + ", expected " +
                                std::to_string(ext.out_height()) + "x" +
                                std::to_string(ext.out_width()));
  }
  auto take = [&](ParityClass cls, int dy, int dx) {
    const auto [h, w] = ext.of(cls);
    if (h == 0 || w == 0) return Tensor3<T>();
    Tensor3<T> t(full.channels(), h, w);
    for (int c = 0; c < full.channels(); ++c)
      for (int i = 0; i < h; ++i)
        for (int j = 0; j < w; ++j) t(c, i, j) = full(c, 2 * i + dy, 2 * j + dx);
    return t;
  };
  return {take(ParityClass::EE, 0, 0), take(ParityClass::EO, 0, 1),
          take(ParityClass::OE, 1, 0), take(ParityClass::OO, 1, 1)};
}

/// Transposed convolution from pre-split sub-kernels. Each class is a valid
/// (unpadded) correlation on the original input; the even-output variant
/// lets the trailing row/column read one cell past the edge as zero.
template <typename T>
Tensor3<T> conv_transposed_decomposed(const Tensor3<T>& input,
                                      const SubKernelSet<T>& sub,
                                      bool even_output = false,
                                      std::uint64_t* macs = nullptr) {
  if (input.empty()) throw std::invalid_argument("conv_transposed_decomposed: empty input");
  const ParityExtents ext{input.height(), input.width(), even_output};
  auto run = [&](const KernelStack<T>& k, ParityClass cls) {
    const auto [h, w] = ext.of(cls);
    if (h == 0 || w == 0) return Tensor3<T>();
    return detail::correlate(input, k, 1, 0, 0, h, w, macs);
  };
  ParityOutputs<T> parts{run(sub.center, ParityClass::EE),
                         run(sub.hpair, ParityClass::EO),
                         run(sub.vpair, ParityClass::OE),
                         run(sub.corner, ParityClass::OO)};
  return interleave_outputs(parts, input.height(), input.width(), even_output);
}

template <typename T>
Tensor3<T> conv_transposed_decomposed(const Tensor3<T>& input,
                                      const KernelStack<T>& weights,
                                      bool even_output = false,
                                      std::uint64_t* macs = nullptr) {
  return conv_transposed_decomposed(input, decompose_weight(weights),
                                    even_output, macs);
}

}  // namespace sparsefold
