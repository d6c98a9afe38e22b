// Copyright 2026 The Authors.
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

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "regen/codec.hpp"

namespace regen {

// A saved system state: enough to verify it (fast tier) and, when the
// repair records are present, to re-derive every stage from the seed
// (strict tier).
struct StateSnapshot {
  uint64_t seed = 0;
  EncodingState state;
  FailureHistory history;
  std::vector<RepairRecord> records;  // may be empty for fast-only snapshots
};

nlohmann::json SnapshotToJson(const StateSnapshot& snapshot);
StateSnapshot SnapshotFromJson(const nlohmann::json& j);

// Replay text: one stage per line, "t F_t p_t(1) ... p_t(n)".
std::string ToReplayText(const FailureHistory& history);
FailureHistory FromReplayText(std::istream& is, int alpha);

nlohmann::json ParamsToJson(const SystemParams& params);
SystemParams ParamsFromJson(const nlohmann::json& j);

}  // namespace regen
