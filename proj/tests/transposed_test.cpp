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
#include <random>
#include <stdexcept>

#include "oracle.hpp"
#include "sparsefold/transposed.hpp"

namespace sparsefold {
namespace {

using testing::random_input;
using testing::random_weights;

const KernelStacki kRaster(1, 1, 3, 3, {1, 2, 3, 4, 5, 6, 7, 8, 9});

TEST(ParityOf, Classes) {
  EXPECT_EQ(parity_of(0, 0), ParityClass::EE);
  EXPECT_EQ(parity_of(0, 1), ParityClass::EO);
  EXPECT_EQ(parity_of(1, 0), ParityClass::OE);
  EXPECT_EQ(parity_of(3, 5), ParityClass::OO);
}

TEST(DecomposeWeight, TapMap) {
  const auto s = decompose_weight(kRaster);
  EXPECT_EQ(s.corner, KernelStacki(1, 1, 2, 2, {1, 3, 7, 9}));
  EXPECT_EQ(s.hpair, KernelStacki(1, 1, 1, 2, {4, 6}));
  EXPECT_EQ(s.vpair, KernelStacki(1, 1, 2, 1, {2, 8}));
  EXPECT_EQ(s.center, KernelStacki(1, 1, 1, 1, {5}));
}

TEST(DecomposeWeight, ZeroAndCenterOnlyKernels) {
  const auto z = decompose_weight(KernelStacki(2, 3, 3, 3));
  for (const auto* k : {&z.corner, &z.hpair, &z.vpair, &z.center})
    for (auto v : k->values()) EXPECT_EQ(v, 0);

  KernelStacki c(1, 1, 3, 3);
  c(0, 0, 1, 1) = 1;
  const auto s = decompose_weight(c);
  EXPECT_EQ(s.center, KernelStacki(1, 1, 1, 1, 1));
  for (const auto* k : {&s.corner, &s.hpair, &s.vpair})
    for (auto v : k->values()) EXPECT_EQ(v, 0);
}

TEST(DecomposeWeight, RejectsNon3x3) {
  EXPECT_THROW(decompose_weight(KernelStacki(1, 1, 2, 2)), std::invalid_argument);
}

TEST(InterleaveOutputs, ThreeByThreeBecomesFiveByFive) {
  const auto out = interleave_outputs(Tensor3i(1, 3, 3, 1), Tensor3i(1, 3, 2, 2),
                                      Tensor3i(1, 2, 3, 3), Tensor3i(1, 2, 2, 4), 3, 3);
  ASSERT_EQ(out.height(), 5);
  ASSERT_EQ(out.width(), 5);
  // Each cell's value names its source class; check it against the parity.
  for (int y = 0; y < 5; ++y)
    for (int x = 0; x < 5; ++x) {
      const auto expected = static_cast<std::int64_t>(parity_of(y, x)) + 1;
      EXPECT_EQ(out(0, y, x), expected) << y << "," << x;
    }
}

TEST(InterleaveOutputs, SingleCellIsEE) {
  const Tensor3i ee(2, 1, 1, 7);
  EXPECT_EQ(interleave_outputs(ee, Tensor3i(), Tensor3i(), Tensor3i(), 1, 1), ee);
}

TEST(InterleaveOutputs, RejectsWrongShapes) {
  EXPECT_THROW(interleave_outputs(Tensor3i(1, 3, 3), Tensor3i(1, 3, 3), Tensor3i(1, 2, 3),
                                  Tensor3i(1, 2, 2), 3, 3),
               std::invalid_argument);
  EXPECT_THROW(interleave_outputs(Tensor3i(1, 3, 3), Tensor3i(1, 3, 2), Tensor3i(), Tensor3i(1, 2, 2),
                                  3, 3),
               std::invalid_argument);
}

TEST(SplitByParity, RoundTrips) {
  std::mt19937_64 rng(43);
  for (int i = 0; i < 60; ++i) {
    const bool even = i % 2;
    const int h = testing::uniform(rng, 1, 9);
    const int w = testing::uniform(rng, 1, 9);
    const auto full = random_input(rng, 2, 2 * h - 1 + even, 2 * w - 1 + even);
    EXPECT_EQ(interleave_outputs(split_by_parity(full, h, w, even), h, w, even), full);
  }
  EXPECT_THROW(split_by_parity(Tensor3i(1, 4, 5), 3, 3), std::invalid_argument);
}

TEST(ConvTransposedDecomposed, AllOnesPattern) {
  const auto out = conv_transposed_decomposed(Tensor3i(1, 3, 3, 1), KernelStacki(1, 1, 3, 3, 1));
  EXPECT_EQ(out, Tensor3i(1, 5, 5, {1, 2, 1, 2, 1,  //
                                   2, 4, 2, 4, 2,  //
                                   1, 2, 1, 2, 1,  //
                                   2, 4, 2, 4, 2,  //
                                   1, 2, 1, 2, 1}));
}

TEST(ConvTransposedDecomposed, SingleCellUsesCenterOnly) {
  std::uint64_t macs = 0;
  const auto out = conv_transposed_decomposed(Tensor3i(1, 1, 1, 3), kRaster, false, &macs);
  EXPECT_EQ(out, Tensor3i(1, 1, 1, 15));
  EXPECT_EQ(macs, 1u);
}

TEST(ConvTransposedDecomposed, MatchesDirectOnRandomInput) {
  std::mt19937_64 rng(47);
  const auto in = random_input(rng, 3, 8, 8);
  const auto w = random_weights(rng, 2, 3);
  EXPECT_EQ(conv_transposed_decomposed(in, w), conv_transposed_direct(in, w));
  EXPECT_EQ(conv_transposed_decomposed(in, w, true), conv_transposed_direct(in, w, true));
}

TEST(ConvTransposedDecomposed, EquivalenceProperty) {
  std::mt19937_64 rng(53);
  for (int i = 0; i < 300; ++i) {
    const bool even = i % 2;
    const int c = testing::uniform(rng, 1, 4);
    const auto in = random_input(rng, c, testing::uniform(rng, 1, 32), testing::uniform(rng, 1, 32));
    const auto w = random_weights(rng, testing::uniform(rng, 1, 4), c);
    ASSERT_EQ(conv_transposed_decomposed(in, w, even), testing::naive_transposed(in, w, even))
        << "case " << i;
  }
}

TEST(ConvTransposedDecomposed, RealValuedWithinTolerance) {
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Tensor3d in(2, 11, 14);
  KernelStackd w(3, 2, 3, 3);
  for (auto& v : in.values()) v = u(rng);
  for (auto& v : w.values()) v = u(rng);
  for (bool even : {false, true}) {
    const auto a = conv_transposed_decomposed(in, w, even);
    const auto b = conv_transposed_direct(in, w, even);
    for (std::size_t i = 0; i < a.size(); ++i)
      ASSERT_NEAR(a.values()[i], b.values()[i], 1e-6 * std::max(1.0, std::abs(b.values()[i])));
  }
}

// Only real input cells are multiplied: nine taps per input cell, minus the
// ones that would land outside the output.
TEST(ConvTransposedDecomposed, ExecutesOnlyNonzeroProducts) {
  for (bool even : {false, true}) {
    std::uint64_t macs = 0;
    conv_transposed_decomposed(Tensor3i(1, 6, 4, 1), KernelStacki(1, 1, 3, 3, 1), even, &macs);
    const std::uint64_t per_axis_h = even ? 3 * 6 - 1 : 3 * 6 - 2;
    const std::uint64_t per_axis_w = even ? 3 * 4 - 1 : 3 * 4 - 2;
    EXPECT_EQ(macs, per_axis_h * per_axis_w);
  }
}

TEST(ConvTransposedDecomposed, WrongTapMapIsDetected) {
  std::mt19937_64 rng(59);
  const auto in = random_input(rng, 1, 5, 5);
  const auto w = random_weights(rng, 1, 1);
  auto swapped = decompose_weight(w);
  std::swap(swapped.hpair, swapped.vpair);
  EXPECT_NE(conv_transposed_decomposed(in, swapped), conv_transposed_direct(in, w));
  auto flipped = decompose_weight(w);
  std::swap(flipped.corner(0, 0, 0, 0), flipped.corner(0, 0, 1, 1));
  if (w(0, 0, 0, 0) != w(0, 0, 2, 2)) {
    EXPECT_NE(conv_transposed_decomposed(in, flipped), conv_transposed_direct(in, w));
  }
}

}  // namespace
}  // namespace sparsefold
