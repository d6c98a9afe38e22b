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

#include "regen/codec.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <string>
#include <utility>

namespace regen {

namespace {

uint32_t UniformFieldElement(std::mt19937_64& rng, uint32_t q) {
  return static_cast<uint32_t>(rng() % q);
}

RecoveryCheck CheckGroups(const EncodingState& state,
                          const std::vector<std::vector<int>>& groups,
                          bool parallel) {
  const int64_t file_size = state.params.file_size;
  const int total = static_cast<int>(groups.size());
  std::vector<char> failed(groups.size(), 0);

  auto group_fails = [&](int g) {
    std::vector<int> cols;
    cols.reserve(static_cast<size_t>(state.params.k) * state.params.alpha);
    for (int node : groups[g]) {
      for (int j = 1; j <= state.params.alpha; ++j) {
        cols.push_back(state.ColumnOf(node, j));
      }
    }
    return Rank(SelectColumns(state.global, cols)) != file_size;
  };

  if (parallel) {
#pragma omp parallel for schedule(static)
    for (int g = 0; g < total; ++g) {
      failed[g] = group_fails(g) ? 1 : 0;
    }
  } else {
    for (int g = 0; g < total; ++g) {
      failed[g] = group_fails(g) ? 1 : 0;
      if (failed[g]) break;  // lexicographic order, first failure suffices
    }
  }
  for (int g = 0; g < total; ++g) {
    if (failed[g]) return {false, groups[g]};
  }
  return {true, {}};
}

}  // namespace

EncodingState InitState(const SystemParams& params, uint64_t seed) {
  const FieldContext ctx(params.q);
  const int width = params.n * params.alpha;
  if (static_cast<int64_t>(params.q) <= width) {
    throw FieldTooSmall("q = " + std::to_string(params.q) + " provides fewer than " +
                        std::to_string(width) + " distinct nonzero evaluation points");
  }
  // Seeded draw of distinct nonzero points.
  std::mt19937_64 rng(seed);
  std::vector<uint32_t> points;
  std::set<uint32_t> used;
  while (static_cast<int>(points.size()) < width) {
    uint32_t x = 1 + UniformFieldElement(rng, params.q - 1);
    if (used.insert(x).second) points.push_back(x);
  }

  Matrix e(static_cast<int>(params.file_size), width, params.q);
  for (int col = 0; col < width; ++col) {
    uint32_t acc = 1;
    for (int b = 0; b < params.file_size; ++b) {
      e.Set(b, col, acc);
      acc = ctx.Mul(acc, points[col]);
    }
  }
  return EncodingState{params, 0, std::move(e)};
}

RepairOutcome Repair(const EncodingState& state, int failed,
                     FailureHistory& history, std::mt19937_64& rng,
                     const RepairOptions& options) {
  const SystemParams& p = state.params;
  if (failed < 1 || failed > p.n) {
    throw InvalidParams("failed node " + std::to_string(failed) + " out of range");
  }
  if (history.stages() != state.t) {
    throw InvalidHistory("history covers " + std::to_string(history.stages()) +
                         " stages but the state is at stage " + std::to_string(state.t));
  }
  const FieldContext ctx(p.q);

  std::vector<int> choice = AppendStage(history, failed);

  for (int attempt = 0; attempt < options.max_retries; ++attempt) {
    Matrix local(p.alpha, p.n - 1, p.q);
    for (uint32_t& v : local.data()) v = UniformFieldElement(rng, p.q);

    RepairRecord record{state.t, failed, choice, local};
    EncodingState next = ApplyRepair(state, record);
    // The rank check is the cheap pre-filter; the agreement sweep follows.
    if (!CheckRecoveryRanksTouching(next, failed).ok) continue;
    if (options.gate == AcceptGate::kMatroidAgreement &&
        !CheckMatroidAgreement(state, next, record)) {
      continue;
    }
    if (options.accept_extra && !options.accept_extra(state, next, record)) continue;
    return RepairOutcome{std::move(next), std::move(record), attempt};
  }

  history.failures.pop_back();
  history.choices.pop_back();
  throw CoefficientSearchExhausted(
      "no acceptable local coefficients for node " + std::to_string(failed) +
      " at stage " + std::to_string(state.t) + " after " +
      std::to_string(options.max_retries) + " samples (field too small?)",
      options.max_retries);
}

EncodingState ApplyRepair(const EncodingState& state, const RepairRecord& record) {
  const SystemParams& p = state.params;
  const FieldContext ctx(p.q);
  EncodingState next{p, state.t + 1, state.global};
  if (record.failed == 0) return next;

  std::vector<int> transfer_cols;
  transfer_cols.reserve(p.n - 1);
  for (int i = 1; i <= p.n; ++i) {
    if (i != record.failed) transfer_cols.push_back(state.ColumnOf(i, record.choice[i - 1]));
  }
  for (int j = 1; j <= p.alpha; ++j) {
    int col = next.ColumnOf(record.failed, j);
    for (int b = 0; b < p.file_size; ++b) {
      uint32_t acc = 0;
      for (int h = 0; h < p.n - 1; ++h) {
        acc = ctx.Add(acc, ctx.Mul(record.local.At(j - 1, h),
                                   state.global.At(b, transfer_cols[h])));
      }
      next.global.Set(b, col, acc);
    }
  }
  return next;
}

std::vector<uint32_t> HelperExtract(const std::vector<NodePayload>& payloads,
                                    int failed, const std::vector<int>& choice) {
  std::vector<const NodePayload*> by_node(choice.size() + 1, nullptr);
  for (const NodePayload& p : payloads) {
    if (p.node >= 1 && p.node < static_cast<int>(by_node.size())) {
      by_node[p.node] = &p;
    }
  }
  std::vector<uint32_t> out;
  out.reserve(choice.size() - 1);
  for (int i = 1; i <= static_cast<int>(choice.size()); ++i) {
    if (i == failed) continue;
    if (by_node[i] == nullptr) {
      throw MissingHelper("no payload for helper node " + std::to_string(i));
    }
    // A verbatim read of the one chosen symbol; no arithmetic happens here.
    out.push_back(by_node[i]->symbols.at(choice[i - 1] - 1));
  }
  return out;
}

NodePayload NewcomerCompute(const std::vector<uint32_t>& received,
                            const Matrix& local, int failed) {
  if (static_cast<int>(received.size()) != local.cols()) {
    throw InvalidParams("newcomer expected " + std::to_string(local.cols()) +
                        " symbols, got " + std::to_string(received.size()));
  }
  const FieldContext ctx(local.modulus());
  NodePayload out{failed, std::vector<uint32_t>(local.rows(), 0)};
  for (int j = 0; j < local.rows(); ++j) {
    uint32_t acc = 0;
    for (int h = 0; h < local.cols(); ++h) {
      acc = ctx.Add(acc, ctx.Mul(local.At(j, h), received[h]));
    }
    out.symbols[j] = acc;
  }
  return out;
}

std::vector<NodePayload> EncodeFile(const std::vector<uint32_t>& message,
                                    const EncodingState& state) {
  const SystemParams& p = state.params;
  if (static_cast<int64_t>(message.size()) != p.file_size) {
    throw InvalidParams("message must contain exactly B symbols");
  }
  const FieldContext ctx(p.q);
  std::vector<NodePayload> out;
  out.reserve(p.n);
  for (int i = 1; i <= p.n; ++i) {
    NodePayload payload{i, std::vector<uint32_t>(p.alpha, 0)};
    for (int j = 1; j <= p.alpha; ++j) {
      uint32_t acc = 0;
      for (int b = 0; b < p.file_size; ++b) {
        acc = ctx.Add(acc, ctx.Mul(message[b], state.global.At(b, state.ColumnOf(i, j))));
      }
      payload.symbols[j - 1] = acc;
    }
    out.push_back(std::move(payload));
  }
  return out;
}

std::vector<uint32_t> Reconstruct(const std::vector<int>& collectors,
                                  const std::vector<NodePayload>& payloads,
                                  const EncodingState& state) {
  const SystemParams& p = state.params;
  std::vector<int> cols;
  std::vector<uint32_t> symbols;
  for (int node : collectors) {
    const NodePayload* found = nullptr;
    for (const NodePayload& pl : payloads) {
      if (pl.node == node) {
        found = &pl;
        break;
      }
    }
    if (found == nullptr || static_cast<int>(found->symbols.size()) != p.alpha) {
      throw InvalidParams("no payload for collector node " + std::to_string(node));
    }
    for (int j = 1; j <= p.alpha; ++j) {
      cols.push_back(state.ColumnOf(node, j));
      symbols.push_back(found->symbols[j - 1]);
    }
  }
  // m . E_C = s  <=>  E_C^T m^T = s^T, solvable iff the columns span F^B.
  Matrix a = Transpose(SelectColumns(state.global, cols));
  Matrix rhs(static_cast<int>(symbols.size()), 1, p.q);
  for (size_t r = 0; r < symbols.size(); ++r) rhs.Set(static_cast<int>(r), 0, symbols[r]);
  Matrix x = Solve(a, rhs);
  std::vector<uint32_t> message(p.file_size);
  for (int b = 0; b < p.file_size; ++b) message[b] = x.At(b, 0);
  return message;
}

Matrix BuildTransferMatrix(const RepairRecord& record, const SystemParams& params) {
  const int width = params.n * params.alpha;
  Matrix h = Matrix::Identity(width, params.q);
  if (record.failed == 0) return h;

  auto column_of = [&](int node, int slot) { return (node - 1) * params.alpha + slot - 1; };
  // The replaced node's columns are rebuilt from scratch.
  for (int j = 1; j <= params.alpha; ++j) {
    int col = column_of(record.failed, j);
    for (int r = 0; r < width; ++r) h.Set(r, col, 0);
  }
  int helper_index = 0;
  for (int i = 1; i <= params.n; ++i) {
    if (i == record.failed) continue;
    int from = column_of(i, record.choice[i - 1]);
    for (int j = 1; j <= params.alpha; ++j) {
      h.Set(from, column_of(record.failed, j), record.local.At(j - 1, helper_index));
    }
    ++helper_index;
  }
  return h;
}

std::vector<ReducedSubset> EnumerateReducedSubsets(int n, int alpha, int64_t file_size,
                                                   bool skip_old_only) {
  std::vector<ReducedSubset> out;
  const int width = n * alpha;
  for (uint32_t new_mask = 0; new_mask < (1u << alpha); ++new_mask) {
    int o = std::popcount(new_mask);
    if (skip_old_only && o == 0) continue;
    if (o > file_size) continue;
    int max_old = std::min<int>(static_cast<int>(file_size) - o, width);
    for (int u = 0; u <= max_old; ++u) {
      for (const std::vector<int>& comb : KSubsets(width, u)) {
        ReducedSubset s;
        s.new_mask = new_mask;
        for (int flat : comb) s.old_cols.push_back(flat - 1);
        out.push_back(std::move(s));
      }
    }
  }
  return out;
}

bool CheckMatroidAgreement(const EncodingState& state, const EncodingState& next,
                           const RepairRecord& record) {
  const SystemParams& p = state.params;
  const int failed = record.failed;

  std::vector<int> transfer_cols;
  for (int i = 1; i <= p.n; ++i) {
    if (i != failed) transfer_cols.push_back((i - 1) * p.alpha + record.choice[i - 1] - 1);
  }

  // Rank of a column subset, old columns drawn from the current state and
  // new-stage slots of the replaced node from the candidate successor.
  auto mixed_rank = [&](const std::vector<int>& old_cols, uint32_t new_mask) {
    int o = std::popcount(new_mask);
    Matrix vectors(static_cast<int>(p.file_size),
                   static_cast<int>(old_cols.size()) + o, p.q);
    int c = 0;
    for (int col : old_cols) {
      for (int b = 0; b < p.file_size; ++b) vectors.Set(b, c, state.global.At(b, col));
      ++c;
    }
    for (int j = 1; j <= p.alpha; ++j) {
      if (!(new_mask >> (j - 1) & 1)) continue;
      int col = (failed - 1) * p.alpha + j - 1;
      for (int b = 0; b < p.file_size; ++b) vectors.Set(b, c, next.global.At(b, col));
      ++c;
    }
    return Rank(vectors);
  };
  auto state_rank = [&](const std::vector<int>& cols) {
    return Rank(SelectColumns(state.global, cols));
  };

  for (const ReducedSubset& subset :
       EnumerateReducedSubsets(p.n, p.alpha, p.file_size, /*skip_old_only=*/true)) {
    const int o = std::popcount(subset.new_mask);
    const int size = static_cast<int>(subset.old_cols.size()) + o;

    // Graph independence via the recursion: trade the new-stage elements for
    // distinct transferred slots outside the subset, independent (on the
    // current state, where linear and graph independence already coincide)
    // together with the old part.
    std::vector<int> pool;
    for (int col : transfer_cols) {
      if (std::find(subset.old_cols.begin(), subset.old_cols.end(), col) ==
          subset.old_cols.end()) {
        pool.push_back(col);
      }
    }
    bool graph_independent = false;
    if (o <= static_cast<int>(pool.size())) {
      for (const std::vector<int>& pick : KSubsets(static_cast<int>(pool.size()), o)) {
        std::vector<int> cols = subset.old_cols;
        for (int idx : pick) cols.push_back(pool[idx - 1]);
        if (state_rank(cols) == static_cast<int>(cols.size())) {
          graph_independent = true;
          break;
        }
      }
    }

    bool linear_independent = mixed_rank(subset.old_cols, subset.new_mask) == size;
    if (graph_independent != linear_independent) return false;
  }
  return true;
}

RecoveryCheck CheckRecoveryRanks(const EncodingState& state) {
  return CheckGroups(state, KSubsets(state.params.n, state.params.k), true);
}

RecoveryCheck CheckRecoveryRanksSerial(const EncodingState& state) {
  return CheckGroups(state, KSubsets(state.params.n, state.params.k), false);
}

RecoveryCheck CheckRecoveryRanksTouching(const EncodingState& state, int node) {
  std::vector<std::vector<int>> groups;
  for (const std::vector<int>& g : KSubsets(state.params.n, state.params.k)) {
    if (std::find(g.begin(), g.end(), node) != g.end()) groups.push_back(g);
  }
  return CheckGroups(state, groups, false);
}

}  // namespace regen
