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

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sparsefold/layer.hpp"
#include "sparsefold/pe_sim.hpp"

namespace sparsefold {

struct LabeledLayer {
  std::string label;
  LayerSpec spec;
  std::string note;  // provenance, free text

  friend bool operator==(const LabeledLayer&, const LabeledLayer&) = default;
};

struct NetworkConfig {
  std::string name;
  ArrayConfig array;
  std::vector<LabeledLayer> layers;

  friend bool operator==(const NetworkConfig&, const NetworkConfig&) = default;
};

/// Parse or schema failure. The message starts with the source name and the
/// JSON location of the offending value, e.g. "net.json: layers[3] ('b2.2'):".
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Network description schema (JSON):
///
///   {
///     "name": "enet512",
///     "description": "...",                    optional
///     "array": {"blocks": 14, "rows": 4},       optional, either field
///     "layers": [
///       {"label": "initial", "kind": "dense",
///        "in_channels": 3, "out_channels": 13, "height": 512, "width": 512,
///        "kernel": [3, 3], "stride": 2, "pad": [1, 1],   dense only, optional
///        "note": "..."},                                  optional
///       {"label": "b2.2", "kind": "dilated", ..., "dilation_zeros": 1},
///       {"label": "up", "kind": "transposed", ..., "even_output": true}
///     ]
///   }
///
/// Unknown fields and fields that do not apply to the layer kind are errors.
/// Dense padding defaults to (kernel - 1) / 2 per axis.
NetworkConfig parse_config(std::string_view text, std::string_view source = "<config>");
NetworkConfig load_config(const std::filesystem::path& path);

/// Labels unique and CSV-safe, at least one layer, every layer valid.
void validate(const NetworkConfig& config);

std::string to_json(const NetworkConfig& config);

}  // namespace sparsefold
