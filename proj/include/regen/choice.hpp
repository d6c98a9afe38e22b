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
#include <vector>

#include "regen/errors.hpp"

namespace regen {

// Record of which node failed at each stage and which symbol index every
// helper transferred. choices[t][i-1] = p_t(i) in [1, alpha] for i != F_t,
// and 0 (the undefined placeholder) for the failed node itself.
struct FailureHistory {
  int num_nodes = 0;
  int alpha = 0;
  std::vector<int> failures;
  std::vector<std::vector<int>> choices;

  int stages() const { return static_cast<int>(failures.size()); }
  int FailedAt(int t) const { return failures[t]; }
  int ChoiceAt(int t, int node) const { return choices[t][node - 1]; }

  // Structural validation; throws InvalidHistory.
  void Validate() const;
};

// The cutoff stage C(t): the unique stage with exactly alpha distinct
// failures in {F_{C(t)}, ..., F_{t-1}} and fewer than alpha strictly after
// it. Throws NotEnoughHistory when fewer than alpha distinct nodes failed
// before stage t.
int CutoffStage(const FailureHistory& history, int t, int alpha);

// The choice function p_t(node). Requires failures[0..t] recorded and
// choices[0..t-1] assigned. Scans back to the nearest stage s with
// F_s in {F_t, node} (or s = -1); below alpha distinct intermediate
// failures it reuses p_s(node) when defined, otherwise picks the smallest
// unused index; at exactly alpha it repeats p_{C(t)}(node).
int ComputeChoice(int node, int t, const FailureHistory& history, int alpha);

// Appends stage t = history.stages() with the given failed node and fills
// the whole choice row via ComputeChoice. Returns the row.
const std::vector<int>& AppendStage(FailureHistory& history, int failed);

struct FPairWitness {
  int pair_left = 0;    // s, or -1 for a virtual left endpoint
  int pair_right = 0;   // t, or N for a virtual right endpoint
  int node = 0;         // the pair's failed node
  int window_begin = 0; // first stage of the violating window
  int window_end = 0;   // last stage of the violating window (inclusive)
  int distinct_failures = 0;
  int distinct_choices = 0;
};

struct FPairVerdict {
  bool ok = true;
  std::optional<FPairWitness> witness;
};

// Checks the choice-spread condition: for every adjacent identical F-pair
// (s, t) -- including virtual pairs (-1, t) and (s, N) -- and every window
// of consecutive intermediate stages ending at t-1 whose distinct-failure
// count is at most alpha, the pair's node must have as many distinct choice
// values over the window as there are distinct failures in it. With
// all_windows set, every consecutive sub-window is checked, not only the
// suffix-aligned ones.
FPairVerdict VerifyFPairCondition(const FailureHistory& history, int alpha,
                                  int num_stages, bool all_windows = false);

}  // namespace regen
