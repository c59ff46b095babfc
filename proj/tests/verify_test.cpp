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

#include <string>

#include "sparsefold/verify.hpp"

namespace sparsefold {
namespace {

const std::string kConfigDir = SPARSEFOLD_CONFIG_DIR;

TEST(ReduceLayer, CapsAndStaysValid) {
  const auto r = reduce_layer(LayerSpec::dense(128, 64, 512, 300, {3, 3, 2, 1, 1}), 32, 4);
  EXPECT_EQ(r.in_channels, 4);
  EXPECT_EQ(r.out_channels, 4);
  EXPECT_EQ(r.height, 32);
  EXPECT_EQ(r.width, 32);
  const auto small = reduce_layer(LayerSpec::dense(1, 1, 8, 8, {9, 9, 1, 0, 0}), 4, 4);
  EXPECT_EQ(small.height, 9);
  EXPECT_EQ(reduce_layer(LayerSpec::dilated(2, 2, 10, 12, 7), 32, 4),
            LayerSpec::dilated(2, 2, 10, 12, 7));
}

TEST(RandomData, SeededAndInRange) {
  const auto a = random_tensor(3, 5, 7, 42, 0);
  EXPECT_EQ(a, random_tensor(3, 5, 7, 42, 0));
  EXPECT_NE(a, random_tensor(3, 5, 7, 42, 1));
  EXPECT_NE(a, random_tensor(3, 5, 7, 43, 0));
  for (auto v : a.values()) {
    EXPECT_GE(v, -128);
    EXPECT_LE(v, 127);
  }
}

TEST(FirstDifference, LocatesCell) {
  Tensor3i a(2, 3, 3);
  Tensor3i b = a;
  EXPECT_EQ(first_difference(a, b), std::nullopt);
  b(1, 2, 0) = 5;
  EXPECT_EQ(first_difference(a, b), "(1,2,0): expected 0, got 5");
  EXPECT_TRUE(first_difference(a, Tensor3i(2, 3, 4)).has_value());
}

TEST(VerifyNetwork, ShippedNetworkPasses) {
  const auto result = verify_network(load_config(kConfigDir + "/enet512.json"));
  ASSERT_TRUE(result.passed()) << result.first_failure().value_or("");
  ASSERT_EQ(result.kinds.size(), 3u);
  EXPECT_EQ(result.kinds[0].checked, 76);
  EXPECT_EQ(result.kinds[1].checked, 8);
  EXPECT_EQ(result.kinds[2].checked, 3);
  for (const auto& k : result.kinds) EXPECT_EQ(k.failed, 0);
}

TEST(VerifyNetwork, ManySeedsPass) {
  const auto cfg = load_config(kConfigDir + "/enet512.json");
  for (std::uint64_t seed : {1ull, 2ull, 0xdeadbeefull}) {
    VerifyOptions opt;
    opt.seed = seed;
    const auto result = verify_network(cfg, opt);
    EXPECT_TRUE(result.passed()) << result.first_failure().value_or("");
  }
}

TEST(VerifyNetwork, SixteenZeroStressLayer) {
  NetworkConfig cfg;
  cfg.name = "stress";
  cfg.layers.push_back({"wide", LayerSpec::dilated(8, 8, 64, 64, 16), ""});
  cfg.layers.push_back({"narrow", LayerSpec::dilated(3, 2, 40, 9, 16), ""});
  const auto result = verify_network(cfg);
  EXPECT_TRUE(result.passed()) << result.first_failure().value_or("");
  EXPECT_EQ(result.layers.size(), 2u);
}

TEST(VerifyNetwork, WrongTapMapFailsWithLocatedCell) {
  NetworkConfig cfg;
  cfg.name = "negative";
  cfg.layers.push_back({"pre", LayerSpec::dense(2, 2, 8, 8), ""});
  cfg.layers.push_back({"up", LayerSpec::transposed(2, 2, 5, 5), ""});
  cfg.layers.push_back({"post", LayerSpec::dense(2, 2, 8, 8), ""});
  VerifyOptions opt;
  opt.seed = 9;
  opt.weight_decomposer = [](const KernelStacki& w) {
    // Corner taps read with rows and columns exchanged.
    auto sub = decompose_weight(w);
    for (int co = 0; co < w.out_channels(); ++co)
      for (int ci = 0; ci < w.in_channels(); ++ci)
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b) sub.corner(co, ci, a, b) = w(co, ci, 2 * b, 2 * a);
    return sub;
  };
  const auto result = verify_network(cfg, opt);
  EXPECT_FALSE(result.passed());
  ASSERT_EQ(result.layers.size(), 2u) << "verification should stop at the first failure";
  const auto msg = result.first_failure().value_or("");
  EXPECT_NE(msg.find("layer 'up'"), std::string::npos) << msg;
  EXPECT_NE(msg.find("seed 9"), std::string::npos) << msg;
  EXPECT_NE(msg.find("): expected "), std::string::npos) << msg;
  ASSERT_EQ(result.kinds.size(), 2u);
  EXPECT_EQ(result.kinds[1].kind, LayerKind::kTransposed);
  EXPECT_EQ(result.kinds[1].failed, 1);
}

}  // namespace
}  // namespace sparsefold
