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

// End-to-end numerical check of a network config: every layer is shrunk to
// a small size, filled with seeded integer data, and run through the direct
// convolution, the decomposed path and a replay of the enumerated schedule.
// Integer arithmetic makes every comparison exact.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sparsefold/layer.hpp"
#include "sparsefold/network.hpp"
#include "sparsefold/pe_sim.hpp"
#include "sparsefold/tensor.hpp"
#include "sparsefold/transposed.hpp"

namespace sparsefold {

using WeightDecomposer = std::function<SubKernelSet<std::int64_t>(const KernelStacki&)>;

struct VerifyOptions {
  std::uint64_t seed = 0;
  int max_extent = 32;
  int max_channels = 4;
  std::uint64_t budget = 0;  // 0: schedule_budget_from_env()
  // Replaces decompose_weight on the transposed path when set.
  WeightDecomposer weight_decomposer;
};

struct LayerCheck {
  std::string label;
  LayerKind kind = LayerKind::kDense;
  LayerSpec reduced;
  bool passed = false;
  std::string detail;  // empty on success
};

struct KindTally {
  LayerKind kind = LayerKind::kDense;
  int checked = 0;
  int failed = 0;
};

struct VerifyResult {
  std::vector<LayerCheck> layers;  // stops after the first failure
  std::vector<KindTally> kinds;    // kinds present, dense/dilated/transposed order

  bool passed() const;
  std::optional<std::string> first_failure() const;
};

/// Caps channels and spatial extents while keeping the layer valid.
LayerSpec reduce_layer(const LayerSpec& layer, int max_extent, int max_channels);

/// Deterministic data in [-128, 127] drawn from (seed, stream).
Tensor3i random_tensor(int channels, int height, int width, std::uint64_t seed,
                       std::uint64_t stream);
KernelStacki random_kernels(int out_channels, int in_channels, int kh, int kw,
                            std::uint64_t seed, std::uint64_t stream);

/// Checks one layer; `index` selects the data stream.
LayerCheck verify_layer(const std::string& label, const LayerSpec& layer,
                        const ArrayConfig& array, std::uint64_t index,
                        const VerifyOptions& options);

VerifyResult verify_network(const NetworkConfig& config, const VerifyOptions& options = {});

/// "(c,y,x): expected E, got G" for the first mismatch, nullopt if equal.
std::optional<std::string> first_difference(const Tensor3i& expected, const Tensor3i& actual);

}  // namespace sparsefold
