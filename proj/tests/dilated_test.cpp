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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <array>
#include <random>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "oracle.hpp"
#include "sparsefold/dilated.hpp"

namespace sparsefold {
namespace {

using testing::random_input;
using testing::random_weights;

Tensor3i iota(int c, int h, int w) {
  Tensor3i t(c, h, w);
  std::int64_t v = 0;
  for (auto& x : t.values()) x = v++;
  return t;
}

std::vector<std::array<int, 2>> dims(const std::vector<InputBlock<std::int64_t>>& blocks) {
  std::vector<std::array<int, 2>> out;
  for (const auto& b : blocks) out.push_back({b.height, b.width});
  return out;
}

TEST(DecomposeInput, SevenBySevenOneZero) {
  const auto blocks = decompose_input(iota(1, 7, 7), 1);
  EXPECT_EQ(dims(blocks),
            (std::vector<std::array<int, 2>>{{4, 4}, {4, 3}, {3, 4}, {3, 3}}));
}

TEST(DecomposeInput, SevenBySevenTwoZeros) {
  const auto blocks = decompose_input(iota(1, 7, 7), 2);
  EXPECT_EQ(dims(blocks), (std::vector<std::array<int, 2>>{
                              {3, 3}, {3, 2}, {3, 2}, {2, 3}, {2, 2}, {2, 2}, {2, 3}, {2, 2}, {2, 2}}));
}

TEST(DecomposeInput, NoZerosIsOneBlock) {
  const auto in = iota(2, 5, 3);
  const auto blocks = decompose_input(in, 0);
  ASSERT_EQ(blocks.size(), 1u);
  EXPECT_EQ(blocks[0].tensor, in);
}

TEST(DecomposeInput, KeepsEmptyBlocksWhenStepExceedsExtent) {
  const auto blocks = decompose_input(iota(1, 2, 3), 3);
  ASSERT_EQ(blocks.size(), 16u);
  int nonempty = 0;
  for (const auto& b : blocks) {
    if (!b.empty()) {
      ++nonempty;
      EXPECT_EQ(b.height, 1);
      EXPECT_EQ(b.width, 1);
    } else {
      EXPECT_TRUE(b.tensor.empty());
    }
  }
  EXPECT_EQ(nonempty, 6);
}

TEST(DecomposeInput, RejectsNegativeDilation) {
  EXPECT_THROW(decompose_input(iota(1, 3, 3), -1), std::invalid_argument);
}

// Every input cell lands in exactly one block.
TEST(DecomposeInput, PartitionsTheInput) {
  for (int h = 1; h <= 12; ++h)
    for (int w = 1; w <= 12; w += 3)
      for (int d = 0; d <= 6; ++d) {
        const auto in = iota(1, h, w);
        std::multiset<std::int64_t> seen;
        for (const auto& b : decompose_input(in, d))
          if (!b.empty())
            for (auto v : b.tensor.values()) seen.insert(v);
        ASSERT_EQ(seen.size(), in.size());
        ASSERT_EQ(std::set<std::int64_t>(seen.begin(), seen.end()).size(), in.size());
      }
}

std::vector<std::pair<BlockIndex, Tensor3i>> as_outputs(const Tensor3i& in, int d) {
  std::vector<std::pair<BlockIndex, Tensor3i>> out;
  for (auto& b : decompose_input(in, d)) out.emplace_back(b.index, b.tensor);
  return out;
}

TEST(StitchOutputs, InvertsDecomposition) {
  std::mt19937_64 rng(1);
  for (int d = 0; d <= 16; ++d) {
    const auto in = random_input(rng, 2, testing::uniform(rng, 1, 20), testing::uniform(rng, 1, 20));
    EXPECT_EQ(stitch_outputs(as_outputs(in, d), d, in.height(), in.width()), in) << "D=" << d;
  }
}

TEST(StitchOutputs, TargetAddresses) {
  {
    auto blocks = as_outputs(Tensor3i(1, 7, 7), 1);
    blocks[0].second(0, 1, 2) = 42;
    EXPECT_EQ(stitch_outputs(blocks, 1, 7, 7)(0, 2, 4), 42);
  }
  {
    auto blocks = as_outputs(Tensor3i(1, 7, 7), 2);
    auto it = std::find_if(blocks.begin(), blocks.end(), [](const auto& b) {
      return b.first == BlockIndex{2, 1};
    });
    ASSERT_NE(it, blocks.end());
    it->second(0, 0, 0) = 42;
    EXPECT_EQ(stitch_outputs(blocks, 2, 7, 7)(0, 2, 1), 42);
  }
}

TEST(StitchOutputs, RejectsWrongShapesAndGaps) {
  auto blocks = as_outputs(iota(1, 7, 7), 1);
  auto wrong = blocks;
  wrong[1].second = Tensor3i(1, 4, 4);
  EXPECT_THROW(stitch_outputs(wrong, 1, 7, 7), std::invalid_argument);

  auto missing = blocks;
  missing.pop_back();
  EXPECT_THROW(stitch_outputs(missing, 1, 7, 7), std::invalid_argument);

  auto twice = blocks;
  twice.push_back(blocks[0]);
  EXPECT_THROW(stitch_outputs(twice, 1, 7, 7), std::invalid_argument);

  auto channels = blocks;
  channels[2].second = Tensor3i(2, 3, 4);
  EXPECT_THROW(stitch_outputs(channels, 1, 7, 7), std::invalid_argument);

  auto outside = blocks;
  outside[0].first = {2, 0};
  EXPECT_THROW(stitch_outputs(outside, 1, 7, 7), std::invalid_argument);
}

TEST(ConvDilatedDecomposed, MatchesDirectOnRandomInputs) {
  std::mt19937_64 rng(29);
  const auto in = random_input(rng, 2, 13, 13);
  const auto w = random_weights(rng, 3, 2);
  for (int d : {1, 2, 3, 7, 15}) {
    EXPECT_EQ(conv_dilated_decomposed(in, w, d), conv_dilated_direct(in, w, d)) << "D=" << d;
  }
}

TEST(ConvDilatedDecomposed, ZeroDilationIsPlainConv) {
  std::mt19937_64 rng(31);
  const auto in = random_input(rng, 2, 9, 11);
  const auto w = random_weights(rng, 2, 2);
  EXPECT_EQ(conv_dilated_decomposed(in, w, 0), conv2d(in, w, {1, 1}));
}

TEST(ConvDilatedDecomposed, AllOnesTapCounts) {
  const auto out = conv_dilated_decomposed(Tensor3i(1, 5, 5, 1), KernelStacki(1, 1, 3, 3, 1), 1);
  EXPECT_EQ(out(0, 0, 0), 4);
  EXPECT_EQ(out(0, 2, 2), 9);
}

TEST(ConvDilatedDecomposed, EquivalenceProperty) {
  std::mt19937_64 rng(37);
  for (int i = 0; i < 300; ++i) {
    const int d = testing::uniform(rng, 0, 16);
    const int c = testing::uniform(rng, 1, 3);
    const auto in = random_input(rng, c, testing::uniform(rng, 1, 33), testing::uniform(rng, 1, 33));
    const auto w = random_weights(rng, testing::uniform(rng, 1, 3), c);
    ASSERT_EQ(conv_dilated_decomposed(in, w, d), testing::naive_dilated(in, w, d))
        << "case " << i << " D=" << d;
  }
}

TEST(ConvDilatedDecomposed, RealValuedWithinTolerance) {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Tensor3d in(3, 21, 17);
  KernelStackd w(2, 3, 3, 3);
  for (auto& v : in.values()) v = u(rng);
  for (auto& v : w.values()) v = u(rng);
  for (int d : {1, 4, 9}) {
    const auto a = conv_dilated_decomposed(in, w, d);
    const auto b = conv_dilated_direct(in, w, d);
    for (std::size_t i = 0; i < a.size(); ++i)
      ASSERT_NEAR(a.values()[i], b.values()[i], 1e-6 * std::max(1.0, std::abs(b.values()[i])));
  }
}

// Padding reads are skipped on both paths, so the executed multiplies match.
TEST(ConvDilatedDecomposed, ExecutesOnlyInImageMultiplies) {
  std::mt19937_64 rng(41);
  for (int d : {1, 2, 5}) {
    const auto in = random_input(rng, 1, 10, 9);
    const auto w = random_weights(rng, 1, 1);
    std::uint64_t decomposed = 0;
    std::uint64_t direct = 0;
    conv_dilated_decomposed(in, w, d, &decomposed);
    conv2d(in, dilate_kernel(w, d), {1, d + 1}, &direct);
    // The direct path also multiplies the inserted kernel zeros.
    std::uint64_t nonzero_taps = 0;
    for (int y = 0; y < 10; ++y)
      for (int x = 0; x < 9; ++x)
        for (int ky = -1; ky <= 1; ++ky)
          for (int kx = -1; kx <= 1; ++kx) {
            const int iy = y + ky * (d + 1);
            const int ix = x + kx * (d + 1);
            nonzero_taps += iy >= 0 && iy < 10 && ix >= 0 && ix < 9;
          }
    EXPECT_EQ(decomposed, nonzero_taps);
    EXPECT_GT(direct, decomposed);
  }
}

}  // namespace
}  // namespace sparsefold
