// Copyright 2026 The graphdist Authors.
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

#include "graphdist/checkpoint.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>

namespace graphdist {

namespace {

nlohmann::json tensor(const std::string& name, const Eigen::MatrixXd& m) {
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) values.push_back(m(r, c));
  return {{"name", name}, {"shape", {m.rows(), m.cols()}}, {"values", values}};
}

std::string versioned(const std::string& msg) {
  return "checkpoint (format_version " + std::to_string(kCheckpointFormatVersion) + "): " + msg;
}

}  // namespace

nlohmann::json checkpoint_to_json(const ModelParams& params, const std::string& created_at) {
  params.validate();
  nlohmann::json tensors = nlohmann::json::array();
  for (std::size_t k = 0; k < params.encoders.size(); ++k) {
    const auto& layers = params.encoders[k].layers;
    for (std::size_t l = 0; l < layers.size(); ++l) {
      const std::string p = "encoder" + std::to_string(k) + ".layer" + std::to_string(l);
      tensors.push_back(tensor(p + ".weight", layers[l].weight));
      tensors.push_back(tensor(p + ".bias", layers[l].bias));
    }
  }
  for (std::size_t k = 0; k < params.attention.size(); ++k)
    tensors.push_back(tensor("attention" + std::to_string(k + 1), params.attention[k]));
  for (std::size_t l = 0; l < params.readout.layers.size(); ++l) {
    const std::string p = "readout.layer" + std::to_string(l);
    tensors.push_back(tensor(p + ".weight", params.readout.layers[l].weight));
    tensors.push_back(tensor(p + ".bias", params.readout.layers[l].bias));
  }
  return {{"format_version", kCheckpointFormatVersion},
          {"d_h", params.config.hidden},
          {"K", params.config.layers},
          {"slope", params.config.slope},
          {"mlp_width", params.config.mlp_width},
          {"mlp_hidden_layers", params.config.mlp_hidden_layers},
          {"seed", params.seed},
          {"created_at", created_at},
          {"tensors", tensors}};
}

ModelParams checkpoint_from_json(const nlohmann::json& j) {
  try {
    const int version = j.at("format_version").get<int>();
    if (version != kCheckpointFormatVersion)
      throw FormatError(versioned("unsupported file version " + std::to_string(version)));
    ModelConfig config;
    config.hidden = j.at("d_h").get<int>();
    config.layers = j.at("K").get<int>();
    config.slope = j.at("slope").get<double>();
    config.mlp_width = j.value("mlp_width", config.mlp_width);
    config.mlp_hidden_layers = j.value("mlp_hidden_layers", config.mlp_hidden_layers);
    ModelParams params = ModelParams::initialize(config, j.at("seed").get<std::uint64_t>());
    // initialize() fixes every shape; the file must supply exactly those tensors.
    const nlohmann::json reference = checkpoint_to_json(params, "")["tensors"];
    const auto& tensors = j.at("tensors");
    if (tensors.size() != reference.size())
      throw FormatError(versioned("expected " + std::to_string(reference.size()) + " tensors, found " +
                                  std::to_string(tensors.size())));
    Eigen::VectorXd flat(static_cast<Eigen::Index>(params.parameter_count()));
    Eigen::Index offset = 0;
    for (std::size_t t = 0; t < tensors.size(); ++t) {
      const auto& got = tensors[t];
      const auto& want = reference[t];
      if (got.at("name") != want.at("name") || got.at("shape") != want.at("shape"))
        throw FormatError(versioned("tensor " + std::to_string(t) + " is " + got.at("name").dump() + " " +
                                    got.at("shape").dump() + ", expected " + want.at("name").dump() + " " +
                                    want.at("shape").dump()));
      const auto values = got.at("values").get<std::vector<double>>();
      if (values.size() != want.at("values").size())
        throw FormatError(versioned("tensor " + got.at("name").get<std::string>() + " has the wrong value count"));
      for (double v : values) flat(offset++) = v;
    }
    params.assign(flat);
    params.validate();
    return params;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(versioned(std::string("malformed: ") + e.what()));
  } catch (const DimensionError& e) {
    throw FormatError(versioned(e.what()));
  }
}

void save_checkpoint(const std::string& path, const ModelParams& params, const std::string& created_at) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write checkpoint " + path);
  out << checkpoint_to_json(params, created_at).dump() << "\n";
  if (!out) throw IoError("failed writing checkpoint " + path);
}

ModelParams load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open checkpoint " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(versioned(path + ": " + e.what()));
  }
  return checkpoint_from_json(j);
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace graphdist
