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

#include "regen/oracle.hpp"

#include <algorithm>
#include <bit>

namespace regen {

namespace {

struct LinkingSearch {
  std::vector<std::vector<int>> in_edges;
  std::vector<uint64_t> source_bit;  // bit set when the vertex is a start point
  const std::vector<int>* targets = nullptr;

  // Max number of targets from index `idx` on that can still be linked,
  // given the vertices already consumed.
  int Best(size_t idx, uint64_t used) {
    if (idx == targets->size()) return 0;
    int best = Best(idx + 1, used);  // leave this target unlinked
    int v = (*targets)[idx];
    if (!(used >> v & 1)) {
      best = std::max(best, GrowPath(v, used | (1ull << v), idx));
    }
    return best;
  }

  // Extends a path backward from v (already marked used). The path may stop
  // at any start vertex or keep walking through it.
  int GrowPath(int v, uint64_t used, size_t idx) {
    int best = 0;
    if (source_bit[v]) best = 1 + Best(idx + 1, used);
    for (int u : in_edges[v]) {
      if (used >> u & 1) continue;
      best = std::max(best, GrowPath(u, used | (1ull << u), idx));
    }
    return best;
  }
};

}  // namespace

int BruteLinkingRank(const Digraph& g, const std::vector<int>& from,
                     const std::vector<int>& to) {
  if (g.num_vertices() > kBruteForceVertexLimit) {
    throw TooLarge("brute-force linking limited to " +
                   std::to_string(kBruteForceVertexLimit) + " vertices, got " +
                   std::to_string(g.num_vertices()));
  }
  LinkingSearch search;
  search.in_edges.resize(g.num_vertices());
  for (int v = 0; v < g.num_vertices(); ++v) {
    for (int w : g.out[v]) search.in_edges[w].push_back(v);
  }
  search.source_bit.assign(g.num_vertices(), 0);
  for (int v : from) search.source_bit[v] = 1;
  search.targets = &to;
  return search.Best(0, 0);
}

MatroidSnapshot::MatroidSnapshot(int ground_size,
                                 const std::function<bool(uint32_t)>& independent,
                                 int max_subset_size, std::string source)
    : ground_size_(ground_size),
      max_subset_size_(max_subset_size < 0 ? ground_size : max_subset_size),
      source_(std::move(source)) {
  if (ground_size > 20) {
    throw TooLarge("matroid snapshot limited to 20 ground elements");
  }
  uint32_t total = 1u << ground_size;
  table_.assign(total, false);
  for (uint32_t mask = 0; mask < total; ++mask) {
    if (std::popcount(mask) <= max_subset_size_) table_[mask] = independent(mask);
  }

  if (!table_[0]) throw Error(source_ + ": empty set not independent");
  for (uint32_t mask = 1; mask < total; ++mask) {
    if (!table_[mask]) continue;
    for (int b = 0; b < ground_size; ++b) {
      if ((mask >> b & 1) && !table_[mask & ~(1u << b)]) {
        throw Error(source_ + ": independence is not downward closed");
      }
    }
  }
  std::vector<uint32_t> members = Members();
  for (uint32_t a : members) {
    for (uint32_t b : members) {
      if (std::popcount(a) >= std::popcount(b)) continue;
      bool extended = false;
      uint32_t candidates = b & ~a;
      while (candidates && !extended) {
        uint32_t bit = candidates & -candidates;
        candidates ^= bit;
        extended = table_[a | bit];
      }
      if (!extended) throw Error(source_ + ": exchange axiom fails");
    }
  }
}

std::vector<uint32_t> MatroidSnapshot::Members() const {
  std::vector<uint32_t> out;
  for (uint32_t mask = 0; mask < table_.size(); ++mask) {
    if (table_[mask]) out.push_back(mask);
  }
  return out;
}

namespace {

std::vector<GroundElem> ToGroundElems(const ReducedSubset& s, int t, int failed, int alpha) {
  std::vector<GroundElem> elems;
  for (int flat : s.old_cols) {
    elems.push_back(GroundElem{flat / alpha + 1, flat % alpha + 1, t});
  }
  for (int j = 1; j <= alpha; ++j) {
    if (s.new_mask >> (j - 1) & 1) elems.push_back(GroundElem{failed, j, t + 1});
  }
  return elems;
}

IsoVerdict RunIsomorphismCheck(const EncodingState& before, const EncodingState& after,
                               const FlowGraph& graph, int t, int max_ground_set,
                               bool parallel) {
  const SystemParams& p = before.params;
  if (2 * p.n * p.alpha > max_ground_set) {
    throw TooLarge("strict ground set of " + std::to_string(2 * p.n * p.alpha) +
                   " exceeds the cap " + std::to_string(max_ground_set));
  }
  if (before.t != t || after.t != t + 1 || graph.top_stage() < t + 1) {
    throw InvalidParams("isomorphism check needs states at t and t+1 and a graph through t+1");
  }
  const int failed = graph.history().FailedAt(t);

  std::vector<ReducedSubset> subsets = EnumerateReducedSubsets(p.n, p.alpha, p.file_size);
  const int total = static_cast<int>(subsets.size());
  std::vector<char> mismatch(subsets.size(), 0);

  auto subset_mismatch = [&](int idx) {
    const ReducedSubset& s = subsets[idx];
    std::vector<GroundElem> elems = ToGroundElems(s, t, failed, p.alpha);
    bool gammoid = IsIndependent(graph, t, elems);

    Matrix vectors(static_cast<int>(p.file_size), static_cast<int>(elems.size()), p.q);
    for (size_t c = 0; c < elems.size(); ++c) {
      const Matrix& src = elems[c].stage == t ? before.global : after.global;
      int col = (elems[c].node - 1) * p.alpha + elems[c].slot - 1;
      for (int b = 0; b < p.file_size; ++b) {
        vectors.Set(b, static_cast<int>(c), src.At(b, col));
      }
    }
    bool linear = Rank(vectors) == static_cast<int>(elems.size());
    return gammoid != linear;
  };

  if (parallel) {
#pragma omp parallel for schedule(dynamic, 16)
    for (int i = 0; i < total; ++i) {
      mismatch[i] = subset_mismatch(i) ? 1 : 0;
    }
  } else {
    for (int i = 0; i < total; ++i) {
      mismatch[i] = subset_mismatch(i) ? 1 : 0;
      if (mismatch[i]) break;
    }
  }

  IsoVerdict verdict;
  verdict.subsets_checked = total;
  for (int i = 0; i < total; ++i) {
    if (!mismatch[i]) continue;
    std::vector<GroundElem> elems = ToGroundElems(subsets[i], t, failed, p.alpha);
    Matrix vectors(static_cast<int>(p.file_size), static_cast<int>(elems.size()), p.q);
    for (size_t c = 0; c < elems.size(); ++c) {
      const Matrix& src = elems[c].stage == t ? before.global : after.global;
      int col = (elems[c].node - 1) * p.alpha + elems[c].slot - 1;
      for (int b = 0; b < p.file_size; ++b) {
        vectors.Set(b, static_cast<int>(c), src.At(b, col));
      }
    }
    verdict.ok = false;
    verdict.witness = IsoWitness{elems, IsIndependent(graph, t, elems), Rank(vectors)};
    break;
  }
  return verdict;
}

}  // namespace

IsoVerdict IsomorphismCheck(const EncodingState& before, const EncodingState& after,
                            const FlowGraph& graph, int t, int max_ground_set) {
  return RunIsomorphismCheck(before, after, graph, t, max_ground_set, true);
}

IsoVerdict IsomorphismCheckSerial(const EncodingState& before, const EncodingState& after,
                                  const FlowGraph& graph, int t, int max_ground_set) {
  return RunIsomorphismCheck(before, after, graph, t, max_ground_set, false);
}

bool IndependenceRecursionCheck(const FlowGraph& graph, int t,
                                const std::vector<GroundElem>& subset) {
  const SystemParams& p = graph.params();
  const int failed = graph.history().FailedAt(t);

  std::vector<GroundElem> new_elems, old_elems;
  for (const GroundElem& e : subset) {
    if (e.stage == t + 1) {
      if (e.node != failed) {
        throw InvalidParams("recursion check needs reduced subsets: new-stage "
                            "elements must belong to the replaced node");
      }
      new_elems.push_back(e);
    } else if (e.stage == t) {
      old_elems.push_back(e);
    } else {
      throw InvalidParams("ground element outside stages {t, t+1}");
    }
  }

  // Transferred slots not already claimed by the old-stage part.
  std::vector<GroundElem> pool;
  for (int i = 1; i <= p.n; ++i) {
    if (i == failed) continue;
    GroundElem e{i, graph.history().ChoiceAt(t, i), t};
    if (std::find(old_elems.begin(), old_elems.end(), e) == old_elems.end()) {
      pool.push_back(e);
    }
  }

  bool criterion = false;
  int want = static_cast<int>(new_elems.size());
  if (want <= static_cast<int>(pool.size())) {
    for (const std::vector<int>& pick :
         KSubsets(static_cast<int>(pool.size()), want)) {
      std::vector<int> ids;
      for (const GroundElem& e : old_elems) ids.push_back(graph.VertexOf(e));
      for (int idx : pick) ids.push_back(graph.VertexOf(pool[idx - 1]));
      if (GammoidRank(graph, ids) == static_cast<int>(ids.size())) {
        criterion = true;
        break;
      }
    }
  }
  return criterion == IsIndependent(graph, t, subset);
}

}  // namespace regen
