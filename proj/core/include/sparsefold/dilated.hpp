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

// Input decomposition for dilated convolutions. A dilated 3x3 convolution
// with D inserted zeros only ever combines cells whose coordinates agree
// modulo D+1, so the input splits into (D+1)^2 subsampled blocks that each
// take a plain 3x3, pad-1 convolution.

#include <compare>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sparsefold/conv.hpp"
#include "sparsefold/tensor.hpp"

namespace sparsefold {

struct BlockIndex {
  int row_offset = 0;
  int col_offset = 0;

  friend auto operator<=>(const BlockIndex&, const BlockIndex&) = default;
};

/// Number of cells at positions offset, offset+(D+1), ... below `extent`.
constexpr int block_extent(int extent, int offset, int zeros) {
  return extent > offset ? (extent - offset + zeros) / (zeros + 1) : 0;
}

template <typename T>
struct InputBlock {
  BlockIndex index;
  int height = 0;
  int width = 0;
  Tensor3<T> tensor;  // empty when height or width is zero

  bool empty() const noexcept { return height == 0 || width == 0; }
};

/// Splits `input` into (D+1)^2 blocks in row-major BlockIndex order.
/// block(c, i, j) = input(c, r + i(D+1), c0 + j(D+1)).
template <typename T>
std::vector<InputBlock<T>> decompose_input(const Tensor3<T>& input,
                                           int zeros) {
  if (zeros < 0) {
    throw std::invalid_argument("decompose_input: negative dilation " +
                                std::to_string(zeros));
  }
  if (input.empty()) throw std::invalid_argument("decompose_input: empty input");
  const int step = zeros + 1;
  std::vector<InputBlock<T>> blocks;
  blocks.reserve(static_cast<std::size_t>(step) * step);
  for (int r = 0; r < step; ++r) {
    for (int c = 0; c < step; ++c) {
      InputBlock<T> block;
      block.index = {r, c};
      block.height = block_extent(input.height(), r, zeros);
      block.width = block_extent(input.width(), c, zeros);
      if (!block.empty()) {
        block.tensor = Tensor3<T>(input.channels(), block.height, block.width);
        for (int ch = 0; ch < input.channels(); ++ch)
          for (int i = 0; i < block.height; ++i)
            for (int j = 0; j < block.width; ++j)
              block.tensor(ch, i, j) = input(ch, r + i * step, c + j * step);
      }
      blocks.push_back(std::move(block));
    }
  }
  return blocks;
}

/// Writes per-block outputs back to their strided positions. Blocks whose
/// expected extent is zero may be omitted or passed as empty tensors.
template <typename T>
Tensor3<T> stitch_outputs(std::span<const std::pair<BlockIndex, Tensor3<T>>> blocks,
                          int zeros, int height, int width) {
  if (zeros < 0) throw std::invalid_argument("stitch_outputs: negative dilation");
  if (height < 1 || width < 1) {
    throw std::invalid_argument("stitch_outputs: non-positive output extent");
  }
  const int step = zeros + 1;
  int channels = 0;
  for (const auto& [index, t] : blocks) {
    if (t.empty()) continue;
    if (channels == 0) channels = t.channels();
    if (t.channels() != channels) {
      throw std::invalid_argument("stitch_outputs: blocks disagree on channel count");
    }
  }
  if (channels == 0) throw std::invalid_argument("stitch_outputs: no non-empty blocks");

  Tensor3<T> out(channels, height, width);
  std::vector<std::uint8_t> written(static_cast<std::size_t>(height) * width, 0);
  for (const auto& [index, t] : blocks) {
    const auto [r, c] = index;
    if (r < 0 || r >= step || c < 0 || c >= step) {
      throw std::invalid_argument("stitch_outputs: block index (" +
                                  std::to_string(r) + "," + std::to_string(c) +
                                  ") outside the decomposition");
    }
    const int bh = block_extent(height, r, zeros);
    const int bw = block_extent(width, c, zeros);
    if (t.empty()) {
      if (bh != 0 && bw != 0) {
        throw std::invalid_argument("stitch_outputs: block (" + std::to_string(r) +
                                    "," + std::to_string(c) + ") is empty but should be " +
                                    std::to_string(bh) + "x" + std::to_string(bw));
      }
      continue;
    }
    if (t.height() != bh || t.width() != bw) {
      throw std::invalid_argument(
          "stitch_outputs: block (" + std::to_string(r) + "," + std::to_string(c) +
          ") is " + std::to_string(t.height()) + "x" + std::to_string(t.width()) +
          ", expected " + std::to_string(bh) + "x" + std::to_string(bw));
    }
    for (int i = 0; i < bh; ++i) {
      for (int j = 0; j < bw; ++j) {
        const int y = r + i * step;
        const int x = c + j * step;
        auto& mark = written[static_cast<std::size_t>(y) * width + x];
        if (mark) {
          throw std::invalid_argument("stitch_outputs: cell (" + std::to_string(y) +
                                      "," + std::to_string(x) + ") written twice");
        }
        mark = 1;
        for (int ch = 0; ch < channels; ++ch) out(ch, y, x) = t(ch, i, j);
      }
    }
  }
  for (std::size_t k = 0; k < written.size(); ++k) {
    if (!written[k]) {
      throw std::invalid_argument(
          "stitch_outputs: cell (" + std::to_string(k / width) + "," +
          std::to_string(k % width) + ") not covered by any block");
    }
  }
  return out;
}

template <typename T>
Tensor3<T> stitch_outputs(const std::vector<std::pair<BlockIndex, Tensor3<T>>>& blocks,
                          int zeros, int height, int width) {
  return stitch_outputs(std::span<const std::pair<BlockIndex, Tensor3<T>>>(blocks),
                        zeros, height, width);
}

/// Dilated convolution as (D+1)^2 dense 3x3 convolutions on subsampled
/// blocks. Bit-identical to conv_dilated_direct for integer element types.
template <typename T>
Tensor3<T> conv_dilated_decomposed(const Tensor3<T>& input,
                                   const KernelStack<T>& weights, int zeros,
                                   std::uint64_t* macs = nullptr) {
  detail::require_3x3(weights, "conv_dilated_decomposed");
  if (input.channels() != weights.in_channels()) {
    throw std::invalid_argument("conv_dilated_decomposed: channel mismatch");
  }
  std::vector<std::pair<BlockIndex, Tensor3<T>>> outputs;
  for (auto& block : decompose_input(input, zeros)) {
    if (block.empty()) continue;
    outputs.emplace_back(block.index,
                         conv2d(block.tensor, weights, ConvGeometry{1, 1}, macs));
  }
  return stitch_outputs(outputs, zeros, input.height(), input.width());
}

}  // namespace sparsefold
