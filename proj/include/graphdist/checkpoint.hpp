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

#ifndef GRAPHDIST_CHECKPOINT_HPP
#define GRAPHDIST_CHECKPOINT_HPP

#include <nlohmann/json.hpp>

#include <string>

#include "graphdist/model.hpp"

namespace graphdist {

inline constexpr int kCheckpointFormatVersion = 1;

// Envelope {format_version, d_h, K, slope, seed, created_at, ...} plus one
// entry per parameter tensor in flatten() order.
nlohmann::json checkpoint_to_json(const ModelParams& params, const std::string& created_at);
ModelParams checkpoint_from_json(const nlohmann::json& j);

void save_checkpoint(const std::string& path, const ModelParams& params, const std::string& created_at);
ModelParams load_checkpoint(const std::string& path);

// UTC timestamp, ISO 8601.
std::string utc_timestamp();

}  // namespace graphdist

#endif  // GRAPHDIST_CHECKPOINT_HPP
