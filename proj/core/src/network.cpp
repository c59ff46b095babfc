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

#include "sparsefold/network.hpp"

#include <array>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include "json.hpp"

namespace sparsefold {

namespace {

using json = nlohmann::ordered_json;

class Parser {
 public:
  explicit Parser(std::string_view source) : source_(source) {}

  [[noreturn]] void fail(const std::string& where, const std::string& what) const {
    throw ConfigError(source_ + ": " + (where.empty() ? "" : where + ": ") + what);
  }

  void allow_only(const json& obj, const std::string& where,
                  std::initializer_list<std::string_view> allowed) const {
    for (const auto& [key, value] : obj.items()) {
      bool ok = false;
      for (auto a : allowed) ok = ok || key == a;
      if (!ok) fail(where, "unknown field '" + key + "'");
    }
  }

  int positive_int(const json& obj, const std::string& where, const char* field,
                   int min_value = 1) const {
    if (!obj.contains(field)) fail(where, std::string("missing field '") + field + "'");
    const json& v = obj.at(field);
    if (!v.is_number_integer()) fail(where, std::string("'") + field + "' must be an integer");
    const auto n = v.get<long long>();
    if (n < min_value || n > 1'000'000) {
      fail(where, std::string("'") + field + "' must be in [" + std::to_string(min_value) +
                      ", 1000000], got " + std::to_string(n));
    }
    return static_cast<int>(n);
  }

  std::string string_field(const json& obj, const std::string& where, const char* field,
                           bool required) const {
    if (!obj.contains(field)) {
      if (required) fail(where, std::string("missing field '") + field + "'");
      return {};
    }
    if (!obj.at(field).is_string()) fail(where, std::string("'") + field + "' must be a string");
    return obj.at(field).get<std::string>();
  }

  std::array<int, 2> int_pair(const json& obj, const std::string& where, const char* field,
                              int min_value) const {
    const json& v = obj.at(field);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() ||
        !v[1].is_number_integer()) {
      fail(where, std::string("'") + field + "' must be a pair of integers [h, w]");
    }
    std::array<int, 2> out{};
    for (int i = 0; i < 2; ++i) {
      const auto n = v[i].get<long long>();
      if (n < min_value || n > 1'000'000) {
        fail(where, std::string("'") + field + "' entries must be >= " +
                        std::to_string(min_value));
      }
      out[i] = static_cast<int>(n);
    }
    return out;
  }

  ArrayConfig array(const json& obj) const {
    const std::string where = "array";
    if (!obj.is_object()) fail(where, "must be an object");
    allow_only(obj, where, {"blocks", "rows"});
    ArrayConfig cfg;
    if (obj.contains("blocks")) cfg.blocks = positive_int(obj, where, "blocks");
    if (obj.contains("rows")) cfg.rows = positive_int(obj, where, "rows");
    return cfg;
  }

  LabeledLayer layer(const json& obj, std::size_t index) const {
    std::string where = "layers[" + std::to_string(index) + "]";
    if (!obj.is_object()) fail(where, "must be an object");
    LabeledLayer out;
    out.label = string_field(obj, where, "label", true);
    where += " ('" + out.label + "')";
    const std::string kind_name = string_field(obj, where, "kind", true);
    out.note = string_field(obj, where, "note", false);

    LayerKind kind;
    try {
      kind = layer_kind_from_string(kind_name);
    } catch (const std::invalid_argument& e) {
      fail(where, e.what());
    }

    switch (kind) {
      case LayerKind::kDense:
        allow_only(obj, where, {"label", "kind", "note", "in_channels", "out_channels",
                                "height", "width", "kernel", "stride", "pad"});
        break;
      case LayerKind::kDilated:
        allow_only(obj, where, {"label", "kind", "note", "in_channels", "out_channels",
                                "height", "width", "dilation_zeros"});
        break;
      case LayerKind::kTransposed:
        allow_only(obj, where, {"label", "kind", "note", "in_channels", "out_channels",
                                "height", "width", "even_output"});
        break;
    }

    const int ci = positive_int(obj, where, "in_channels");
    const int co = positive_int(obj, where, "out_channels");
    const int h = positive_int(obj, where, "height");
    const int w = positive_int(obj, where, "width");

    switch (kind) {
      case LayerKind::kDense: {
        DenseParams p;
        if (obj.contains("kernel")) {
          const auto k = int_pair(obj, where, "kernel", 1);
          p.kernel_h = k[0];
          p.kernel_w = k[1];
        }
        p.pad_h = (p.kernel_h - 1) / 2;
        p.pad_w = (p.kernel_w - 1) / 2;
        if (obj.contains("stride")) p.stride = positive_int(obj, where, "stride");
        if (obj.contains("pad")) {
          const auto pad = int_pair(obj, where, "pad", 0);
          p.pad_h = pad[0];
          p.pad_w = pad[1];
        }
        out.spec = LayerSpec::dense(ci, co, h, w, p);
        break;
      }
      case LayerKind::kDilated:
        out.spec = LayerSpec::dilated(ci, co, h, w, positive_int(obj, where, "dilation_zeros"));
        break;
      case LayerKind::kTransposed: {
        bool even = false;
        if (obj.contains("even_output")) {
          if (!obj.at("even_output").is_boolean()) fail(where, "'even_output' must be a boolean");
          even = obj.at("even_output").get<bool>();
        }
        out.spec = LayerSpec::transposed(ci, co, h, w, even);
        break;
      }
    }
    try {
      out.spec.validate();
    } catch (const std::invalid_argument& e) {
      fail(where, e.what());
    }
    return out;
  }

  NetworkConfig network(const json& root) const {
    if (!root.is_object()) fail("", "top level must be an object");
    allow_only(root, "", {"name", "description", "array", "layers"});
    NetworkConfig cfg;
    cfg.name = string_field(root, "", "name", true);
    string_field(root, "", "description", false);
    if (root.contains("array")) cfg.array = array(root.at("array"));
    if (!root.contains("layers")) fail("", "missing field 'layers'");
    const json& layers = root.at("layers");
    if (!layers.is_array()) fail("layers", "must be an array");
    if (layers.empty()) fail("layers", "at least one layer is required");
    std::set<std::string> labels;
    for (std::size_t i = 0; i < layers.size(); ++i) {
      LabeledLayer l = layer(layers[i], i);
      if (!labels.insert(l.label).second) {
        fail("layers[" + std::to_string(i) + "]", "duplicate label '" + l.label + "'");
      }
      cfg.layers.push_back(std::move(l));
    }
    try {
      validate(cfg);
    } catch (const std::invalid_argument& e) {
      fail("", e.what());
    }
    return cfg;
  }

 private:
  std::string source_;
};

}  // namespace

void validate(const NetworkConfig& config) {
  config.array.validate();
  if (config.layers.empty()) throw std::invalid_argument("network has no layers");
  std::set<std::string_view> seen;
  for (const auto& l : config.layers) {
    if (l.label.empty()) throw std::invalid_argument("empty layer label");
    if (l.label.find_first_of(",\"\n\r") != std::string::npos) {
      throw std::invalid_argument("layer label '" + l.label +
                                  "' contains a comma, quote or newline");
    }
    if (l.label == "AGGREGATE") throw std::invalid_argument("layer label 'AGGREGATE' is reserved");
    if (!seen.insert(l.label).second) {
      throw std::invalid_argument("duplicate label '" + l.label + "'");
    }
    l.spec.validate();
  }
}

NetworkConfig parse_config(std::string_view text, std::string_view source) {
  Parser parser(source);
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    parser.fail("", std::string("parse error at byte ") + std::to_string(e.byte) + ": " +
                        e.what());
  }
  return parser.network(root);
}

NetworkConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string() + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string());
}

std::string to_json(const NetworkConfig& config) {
  json root;
  root["name"] = config.name;
  root["array"] = {{"blocks", config.array.blocks}, {"rows", config.array.rows}};
  json layers = json::array();
  for (const auto& l : config.layers) {
    json j;
    j["label"] = l.label;
    j["kind"] = std::string(to_string(l.spec.kind()));
    j["in_channels"] = l.spec.in_channels;
    j["out_channels"] = l.spec.out_channels;
    j["height"] = l.spec.height;
    j["width"] = l.spec.width;
    switch (l.spec.kind()) {
      case LayerKind::kDense: {
        const auto& p = l.spec.dense_params();
        j["kernel"] = {p.kernel_h, p.kernel_w};
        j["stride"] = p.stride;
        j["pad"] = {p.pad_h, p.pad_w};
        break;
      }
      case LayerKind::kDilated: j["dilation_zeros"] = l.spec.dilated_params().zeros; break;
      case LayerKind::kTransposed: j["even_output"] = l.spec.transposed_params().even_output; break;
    }
    if (!l.note.empty()) j["note"] = l.note;
    layers.push_back(std::move(j));
  }
  root["layers"] = std::move(layers);
  return root.dump(2) + "\n";
}

}  // namespace sparsefold
