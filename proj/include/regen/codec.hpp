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

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "regen/choice.hpp"
#include "regen/field.hpp"
#include "regen/params.hpp"

namespace regen {

// Global encoding vectors at one stage: column (i-1)*alpha + (j-1) of E is
// the vector of packet j on node i. Immutable; a repair produces the next
// state.
struct EncodingState {
  SystemParams params;
  int t = 0;
  Matrix global;  // B x (n*alpha)

  int ColumnOf(int node, int slot) const {
    return (node - 1) * params.alpha + (slot - 1);
  }
};

// Everything one repair decided: the failed node, the per-node choice row,
// and the alpha x (n-1) local coefficient matrix (helper columns ascending
// by node index).
struct RepairRecord {
  int t = 0;
  int failed = 0;  // 0 is the test-only identity record
  std::vector<int> choice;
  Matrix local;
};

// The alpha symbols one node actually stores.
struct NodePayload {
  int node = 0;
  std::vector<uint32_t> symbols;
};

struct RecoveryCheck {
  bool ok = true;
  std::vector<int> witness_collectors;  // first failing k-subset, lexicographic
};

// Stage-0 state: a B x (n*alpha) Vandermonde on n*alpha distinct nonzero
// points, so every B-subset of columns is independent and every k-node
// group has rank B. The seed picks the evaluation points. Throws
// FieldTooSmall when q <= n*alpha.
EncodingState InitState(const SystemParams& params, uint64_t seed);

// What a sampled coefficient matrix must satisfy to be accepted. Collector
// ranks alone are not self-sustaining: a sample can pass every k-node rank
// check yet collapse a smaller column subset, leaving some later repair with
// no acceptable coefficients at all. The matroid-agreement gate maintains
// the full linear/graph correspondence and is the default; the rank-only
// gate remains for experiments probing that failure mode.
enum class AcceptGate { kMatroidAgreement, kRecoveryRanksOnly };

struct RepairOptions {
  int max_retries = 64;
  AcceptGate gate = AcceptGate::kMatroidAgreement;
  // Extra acceptance predicate (before-state, candidate-after-state, record).
  std::function<bool(const EncodingState&, const EncodingState&, const RepairRecord&)>
      accept_extra;
};

struct RepairOutcome {
  EncodingState state;
  RepairRecord record;
  int retries = 0;  // rejected samples before the accepted one
};

// One repair round: appends the stage to the history, assigns choices,
// then samples local coefficients until the successor state keeps every
// k-node group at rank B (and satisfies accept_extra, when set). Throws
// CoefficientSearchExhausted after max_retries rejected samples, leaving
// the history unchanged.
RepairOutcome Repair(const EncodingState& state, int failed,
                     FailureHistory& history, std::mt19937_64& rng,
                     const RepairOptions& options = {});

// The successor state a record describes: surviving columns copied, the
// replaced node's columns rebuilt from the transferred ones.
EncodingState ApplyRepair(const EncodingState& state, const RepairRecord& record);

// The helpers' side of a repair: each surviving node reads exactly the one
// symbol its choice names and emits it unchanged (no field arithmetic).
// Symbols are ordered by ascending helper node index.
std::vector<uint32_t> HelperExtract(const std::vector<NodePayload>& payloads,
                                    int failed, const std::vector<int>& choice);

// The newcomer's side: each stored symbol is one local-coefficient row
// applied to the received symbols.
NodePayload NewcomerCompute(const std::vector<uint32_t>& received,
                            const Matrix& local, int failed);

// Payloads for all n nodes from a B-symbol message.
std::vector<NodePayload> EncodeFile(const std::vector<uint32_t>& message,
                                    const EncodingState& state);

// Recovers the message from the payloads of k collector nodes. Throws
// SingularSystem when the collectors' columns do not determine it.
std::vector<uint32_t> Reconstruct(const std::vector<int>& collectors,
                                  const std::vector<NodePayload>& payloads,
                                  const EncodingState& state);

// The stage-transition matrix H_t: identity on surviving (i,j) positions,
// local coefficients routed from each helper's transferred slot into the
// replaced node's columns. Satisfies next.global = Multiply(prev.global, H).
Matrix BuildTransferMatrix(const RepairRecord& record, const SystemParams& params);

// Recovery invariant: every k-node column group of the state has rank B.
// The witness is the lexicographically first failing collector set. The
// unqualified version fans the C(n,k) rank computations out over OpenMP;
// the serial one is the reference it is tested against.
RecoveryCheck CheckRecoveryRanks(const EncodingState& state);
RecoveryCheck CheckRecoveryRanksSerial(const EncodingState& state);

// Same check restricted to the groups containing `node` (the only ones a
// repair of `node` can disturb).
RecoveryCheck CheckRecoveryRanksTouching(const EncodingState& state, int node);

// A subset of the stage-t/t+1 ground set in reduced form: any old-stage
// columns plus new-stage slots of the replaced node only, total size <= B.
// old_cols holds flat column indices (node-1)*alpha + slot-1; new_mask bit
// j-1 selects the replaced node's slot j at the new stage.
struct ReducedSubset {
  uint32_t new_mask = 0;
  std::vector<int> old_cols;
};

// All reduced subsets in a fixed lexicographic order (new mask ascending,
// then old columns by size and combination order). With skip_old_only set,
// subsets without new-stage elements are omitted.
std::vector<ReducedSubset> EnumerateReducedSubsets(int n, int alpha, int64_t file_size,
                                                   bool skip_old_only = false);

// Whether the candidate successor keeps linear independence aligned with
// graph independence on every reduced subset. The graph side is evaluated
// through the one-step recursion on the current state's columns (each
// new-stage element trades for an unused transferred slot), which is exact
// as long as the agreement has held on every previous stage, so no flow
// graph is needed. Old-only subsets are untouched by the repair and skipped.
bool CheckMatroidAgreement(const EncodingState& state, const EncodingState& next,
                           const RepairRecord& record);

}  // namespace regen
