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

#include <optional>
#include <string>
#include <vector>

#include "regen/io.hpp"
#include "regen/oracle.hpp"

namespace regen {

enum class FailureModel {
  kScripted,
  kUniformRandom,
  kRoundRobin,
  kAdversarialWorstNode,
};

enum class VerificationTier { kFast, kStrict };

struct RunConfig {
  int n = 0;
  int k = 0;
  int ell = 0;
  uint32_t q = 0;  // ignored when auto_q is set
  bool auto_q = false;
  bool allow_small_field = false;
  int rounds = 0;
  FailureModel model = FailureModel::kUniformRandom;
  std::vector<int> scripted;  // failure sequence for kScripted
  uint64_t seed = 1;
  VerificationTier tier = VerificationTier::kFast;
  AcceptGate gate = AcceptGate::kMatroidAgreement;
  int collector_sample = 0;  // 0 checks every k-subset
  int max_retries = 64;
  bool timings = false;  // timings make reports non-reproducible; default off
  int max_strict_ground_set = kDefaultMaxStrictGroundSet;
};

struct IoStats {
  int symbols_read = 0;
  int symbols_sent = 0;
  uint64_t helper_field_ops = 0;
};

struct StageReport {
  int t = 0;
  int failed = 0;
  std::vector<int> choice;
  int retries = 0;
  bool fast_ok = false;
  std::optional<bool> strict_ok;
  bool payload_ok = false;
  IoStats io;
  std::optional<double> elapsed_ms;
};

struct RunResult {
  bool ok = false;
  bool init_ok = false;
  uint64_t seed = 0;
  SystemParams params;
  std::vector<uint32_t> message;
  std::vector<NodePayload> payloads;  // after the last round
  std::vector<StageReport> reports;
  EncodingState final_state;
  FailureHistory history;
  std::vector<RepairRecord> records;
};

// Drives `rounds` repair iterations from a fresh state: picks failures per
// the model, repairs, moves the real payload symbols through helpers and
// newcomer, and verifies the recovery invariant each stage. ok is true iff
// every enabled verification passed.
RunResult RunSimulation(const RunConfig& config);

// Resolves (n, k, ell, q/auto) into validated params.
SystemParams ResolveParams(const RunConfig& config);

std::string InitReportLine(const RunResult& result);
std::string ReportLine(const StageReport& report);
StateSnapshot MakeSnapshot(const RunResult& result);

struct VerifyOutcome {
  bool ok = false;
  nlohmann::json details;
};

// Fast tier: recovery ranks of the stored state plus the choice-spread
// condition over its history. Strict tier additionally replays the records
// from the seeded initial state, confirming the stored state is reproduced
// and the matroid agreement holds at every stage.
VerifyOutcome VerifySnapshot(const StateSnapshot& snapshot, VerificationTier tier,
                             int max_ground_set = kDefaultMaxStrictGroundSet);

// Structural validation plus the choice-spread condition for a bare replay.
VerifyOutcome VerifyReplay(const FailureHistory& history, bool all_windows = false);

}  // namespace regen
