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

#include "regen/choice.hpp"

#include <algorithm>
#include <string>

namespace regen {

namespace {

int DistinctFailures(const FailureHistory& h, int begin, int end_exclusive) {
  std::vector<int> seen;
  for (int m = begin; m < end_exclusive; ++m) {
    int f = h.failures[m];
    if (std::find(seen.begin(), seen.end(), f) == seen.end()) seen.push_back(f);
  }
  return static_cast<int>(seen.size());
}

}  // namespace

void FailureHistory::Validate() const {
  if (num_nodes < 2 || alpha < 1) {
    throw InvalidHistory("history needs num_nodes >= 2 and alpha >= 1");
  }
  if (choices.size() != failures.size()) {
    throw InvalidHistory("history has " + std::to_string(failures.size()) +
                         " failures but " + std::to_string(choices.size()) +
                         " choice rows");
  }
  for (int t = 0; t < stages(); ++t) {
    int f = failures[t];
    if (f < 1 || f > num_nodes) {
      throw InvalidHistory("stage " + std::to_string(t) + ": failed node " +
                           std::to_string(f) + " out of range");
    }
    if (static_cast<int>(choices[t].size()) != num_nodes) {
      throw InvalidHistory("stage " + std::to_string(t) + ": choice row has wrong width");
    }
    for (int i = 1; i <= num_nodes; ++i) {
      int p = choices[t][i - 1];
      if (i == f ? p != 0 : (p < 1 || p > alpha)) {
        throw InvalidHistory("stage " + std::to_string(t) + ": p(" +
                             std::to_string(i) + ") = " + std::to_string(p) +
                             " is invalid");
      }
    }
  }
}

int CutoffStage(const FailureHistory& history, int t, int alpha) {
  if (t > history.stages()) {
    throw InvalidHistory("cutoff stage beyond recorded history");
  }
  std::vector<int> seen;
  for (int s = t - 1; s >= 0; --s) {
    int f = history.failures[s];
    if (std::find(seen.begin(), seen.end(), f) == seen.end()) seen.push_back(f);
    if (static_cast<int>(seen.size()) == alpha) return s;
  }
  throw NotEnoughHistory("fewer than alpha = " + std::to_string(alpha) +
                         " distinct failures before stage " + std::to_string(t));
}

int ComputeChoice(int node, int t, const FailureHistory& history, int alpha) {
  if (t >= static_cast<int>(history.failures.size()) ||
      t > static_cast<int>(history.choices.size())) {
    throw InvalidHistory("choice requested past the recorded history");
  }
  int failed = history.failures[t];
  if (node == failed) return 0;

  int s = t - 1;
  while (s >= 0 && history.failures[s] != failed && history.failures[s] != node) {
    --s;
  }
  int distinct = DistinctFailures(history, s + 1, t);
  if (distinct < alpha) {
    if (s >= 0 && history.choices[s][node - 1] != 0) {
      return history.choices[s][node - 1];
    }
    std::vector<bool> used(alpha + 1, false);
    for (int m = s + 1; m < t; ++m) used[history.choices[m][node - 1]] = true;
    for (int j = 1; j <= alpha; ++j) {
      if (!used[j]) return j;
    }
    throw ExhaustedIndices("no free symbol index for node " + std::to_string(node) +
                           " at stage " + std::to_string(t));
  }
  return history.choices[CutoffStage(history, t, alpha)][node - 1];
}

const std::vector<int>& AppendStage(FailureHistory& history, int failed) {
  if (failed < 1 || failed > history.num_nodes) {
    throw InvalidHistory("failed node " + std::to_string(failed) + " out of range");
  }
  int t = history.stages();
  history.failures.push_back(failed);
  std::vector<int> row(history.num_nodes, 0);
  for (int i = 1; i <= history.num_nodes; ++i) {
    row[i - 1] = ComputeChoice(i, t, history, history.alpha);
  }
  history.choices.push_back(std::move(row));
  return history.choices.back();
}

namespace {

// Checks all required windows inside one pair (left, right) with failed
// node `node`. Intermediate stages are left+1 .. right_end (inclusive).
std::optional<FPairWitness> CheckPairWindows(const FailureHistory& h, int alpha,
                                             int left, int right, int node,
                                             int right_end, bool all_windows) {
  int last_end = all_windows ? left + 1 : right_end;
  for (int end = right_end; end >= last_end; --end) {
    std::vector<int> fail_seen, choice_seen;
    for (int begin = end; begin > left; --begin) {
      int f = h.failures[begin];
      if (std::find(fail_seen.begin(), fail_seen.end(), f) == fail_seen.end()) {
        fail_seen.push_back(f);
      }
      if (static_cast<int>(fail_seen.size()) > alpha) break;
      int p = h.choices[begin][node - 1];
      if (std::find(choice_seen.begin(), choice_seen.end(), p) == choice_seen.end()) {
        choice_seen.push_back(p);
      }
      if (choice_seen.size() != fail_seen.size()) {
        return FPairWitness{left, right, node, begin, end,
                            static_cast<int>(fail_seen.size()),
                            static_cast<int>(choice_seen.size())};
      }
    }
    if (!all_windows) break;
  }
  return std::nullopt;
}

}  // namespace

FPairVerdict VerifyFPairCondition(const FailureHistory& history, int alpha,
                                  int num_stages, bool all_windows) {
  history.Validate();
  if (num_stages > history.stages()) {
    throw InvalidHistory("verification horizon beyond recorded history");
  }
  const int n_stages = num_stages;
  for (int t = 0; t < n_stages; ++t) {
    int node = history.failures[t];
    // Interior pair (s, t), or virtual pair (-1, t) when node has not
    // failed before.
    int s = t - 1;
    while (s >= 0 && history.failures[s] != node) --s;
    if (auto w = CheckPairWindows(history, alpha, s, t, node, t - 1, all_windows)) {
      return {false, w};
    }
    // Virtual pair (t, N) when node never fails again.
    bool fails_again = false;
    for (int m = t + 1; m < n_stages; ++m) {
      if (history.failures[m] == node) {
        fails_again = true;
        break;
      }
    }
    if (!fails_again) {
      if (auto w = CheckPairWindows(history, alpha, t, n_stages, node,
                                    n_stages - 1, all_windows)) {
        return {false, w};
      }
    }
  }
  return {true, std::nullopt};
}

}  // namespace regen
