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

#include <bit>
#include <random>

#include <doctest.h>

#include "regen/oracle.hpp"

using namespace regen;

namespace {

SystemParams SmallParams() { return NormalizedParams(4, 3, 2, 53); }

FailureHistory GeneratedHistory(int n, int alpha, int stages, std::mt19937_64& rng) {
  FailureHistory h{n, alpha, {}, {}};
  for (int t = 0; t < stages; ++t) AppendStage(h, 1 + static_cast<int>(rng() % n));
  return h;
}

Digraph PathGraph() {
  Digraph g(4);
  g.AddEdge(0, 1);
  g.AddEdge(1, 2);
  g.AddEdge(2, 3);
  return g;
}

struct StrictStep {
  EncodingState before;
  EncodingState after;
  FlowGraph graph;
  int t;
};

StrictStep OneStrictRepair(uint64_t seed) {
  SystemParams p = SmallParams();
  EncodingState state = InitState(p, seed);
  FailureHistory history{p.n, p.alpha, {}, {}};
  std::mt19937_64 rng(seed);
  RepairOutcome outcome = Repair(state, 2, history, rng);
  FlowGraph graph = BuildGraph(p, history, 1);
  return StrictStep{std::move(state), std::move(outcome.state), std::move(graph), 0};
}

}  // namespace

TEST_CASE("exhaustive linking matches max-flow on every subset of small graphs") {
  Digraph path = PathGraph();
  std::vector<int> sinks{0, 3};
  for (uint32_t mask = 0; mask < 16; ++mask) {
    std::vector<int> subset;
    for (int v = 0; v < 4; ++v) {
      if (mask >> v & 1) subset.push_back(v);
    }
    CHECK(BruteLinkingRank(path, subset, sinks) == DisjointPathCount(path, subset, sinks));
  }

  // Random truncated graphs, sampled subsets.
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 3; ++trial) {
    SystemParams p = NormalizedParams(3, 2, 2, 5);
    FailureHistory h = GeneratedHistory(3, 1, 2 + static_cast<int>(rng() % 2), rng);
    FlowGraph g = BuildGraph(p, h, h.stages());
    int v_count = g.graph().num_vertices();
    REQUIRE(v_count <= 14);
    for (uint32_t mask = 0; mask < (1u << v_count); mask += 1 + rng() % 7) {
      std::vector<int> subset;
      for (int v = 0; v < v_count; ++v) {
        if (mask >> v & 1) subset.push_back(v);
      }
      CHECK(BruteLinkingRank(g.graph(), g.source_vertices(), subset) ==
            DisjointPathCount(g.graph(), g.source_vertices(), subset));
    }
  }
}

TEST_CASE("oversized graphs are refused by the exhaustive oracle") {
  Digraph big(40);
  CHECK_THROWS_AS(BruteLinkingRank(big, {0}, {1}), TooLarge);
}

TEST_CASE("exhaustive rank satisfies the rank axioms") {
  Digraph path = PathGraph();
  std::vector<int> sinks{0, 3};
  auto rank_of = [&](uint32_t mask) {
    std::vector<int> subset;
    for (int v = 0; v < 4; ++v) {
      if (mask >> v & 1) subset.push_back(v);
    }
    return BruteLinkingRank(path, subset, sinks);
  };
  for (uint32_t a = 0; a < 16; ++a) {
    CHECK(rank_of(a) >= 0);
    CHECK(rank_of(a) <= std::popcount(a));
    for (uint32_t b = 0; b < 16; ++b) {
      if ((a & b) == a) CHECK(rank_of(a) <= rank_of(b));
      CHECK(rank_of(a) + rank_of(b) >= rank_of(a | b) + rank_of(a & b));
    }
  }
}

TEST_CASE("matroid snapshots verify the independence axioms") {
  Digraph path = PathGraph();
  std::vector<int> sinks{0, 3};
  MatroidSnapshot snapshot(
      4,
      [&](uint32_t mask) {
        std::vector<int> subset;
        for (int v = 0; v < 4; ++v) {
          if (mask >> v & 1) subset.push_back(v);
        }
        return BruteLinkingRank(path, subset, sinks) == static_cast<int>(subset.size());
      },
      -1, "gammoid");
  CHECK(snapshot.Members().size() == 8);

  // A family that is not downward closed must be rejected.
  CHECK_THROWS_AS(MatroidSnapshot(3, [](uint32_t mask) { return mask != 1; }, -1, "broken"),
                  Error);
}

TEST_CASE("strict repairs pass the matroid agreement sweep") {
  StrictStep step = OneStrictRepair(17);
  IsoVerdict serial = IsomorphismCheckSerial(step.before, step.after, step.graph, step.t);
  IsoVerdict parallel = IsomorphismCheck(step.before, step.after, step.graph, step.t);
  CHECK(serial.ok);
  CHECK(parallel.ok);
  CHECK(serial.subsets_checked == parallel.subsets_checked);
  CHECK(serial.subsets_checked > 600);
}

TEST_CASE("zeroed coefficients fail the sweep with the smallest witness") {
  SystemParams p = SmallParams();
  EncodingState state = InitState(p, 19);
  FailureHistory history{p.n, p.alpha, {}, {}};
  std::vector<int> choice = AppendStage(history, 2);
  RepairRecord zero{0, 2, choice, Matrix(p.alpha, p.n - 1, p.q)};
  EncodingState broken = ApplyRepair(state, zero);
  FlowGraph graph = BuildGraph(p, history, 1);

  IsoVerdict verdict = IsomorphismCheck(state, broken, graph, 0);
  REQUIRE(!verdict.ok);
  REQUIRE(verdict.witness.has_value());
  // First mismatch in enumeration order: the rebuilt node's first slot alone,
  // gammoid-independent but linearly zero.
  REQUIRE(verdict.witness->subset.size() == 1);
  CHECK(verdict.witness->subset[0] == GroundElem{2, 1, 1});
  CHECK(verdict.witness->gammoid_independent);
  CHECK(verdict.witness->linear_rank == 0);

  IsoVerdict serial = IsomorphismCheckSerial(state, broken, graph, 0);
  CHECK(!serial.ok);
  CHECK(serial.witness->subset == verdict.witness->subset);
}

TEST_CASE("graph-dependent subsets are linearly dependent for every coefficient") {
  SystemParams p = SmallParams();
  EncodingState state = InitState(p, 23);
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    FailureHistory history{p.n, p.alpha, {}, {}};
    std::vector<int> choice = AppendStage(history, 2);
    Matrix local(p.alpha, p.n - 1, p.q);
    for (uint32_t& v : local.data()) v = static_cast<uint32_t>(rng() % p.q);
    EncodingState next = ApplyRepair(state, RepairRecord{0, 2, choice, local});

    // All transferred slots plus one rebuilt slot: dependent in the gammoid,
    // so the vectors must be dependent no matter which local matrix we drew.
    Matrix vectors(static_cast<int>(p.file_size), p.n, p.q);
    int c = 0;
    for (int i = 1; i <= p.n; ++i) {
      if (i == 2) continue;
      int col = state.ColumnOf(i, choice[i - 1]);
      for (int b = 0; b < p.file_size; ++b) vectors.Set(b, c, state.global.At(b, col));
      ++c;
    }
    for (int b = 0; b < p.file_size; ++b) {
      vectors.Set(b, c, next.global.At(b, next.ColumnOf(2, 1)));
    }
    CHECK(Rank(vectors) < p.n);
  }
}

TEST_CASE("the stepwise independence recursion agrees with direct linking") {
  StrictStep step = OneStrictRepair(29);
  const SystemParams& p = step.before.params;

  // Exhaustive sweep over reduced subsets at stage 0.
  int agreements = 0;
  for (uint32_t new_mask = 0; new_mask < (1u << p.alpha); ++new_mask) {
    for (int u = 0; u <= static_cast<int>(p.file_size); ++u) {
      for (const std::vector<int>& comb : KSubsets(p.n * p.alpha, u)) {
        std::vector<GroundElem> subset;
        for (int flat : comb) {
          subset.push_back(GroundElem{(flat - 1) / p.alpha + 1, (flat - 1) % p.alpha + 1, 0});
        }
        for (int j = 1; j <= p.alpha; ++j) {
          if (new_mask >> (j - 1) & 1) subset.push_back(GroundElem{2, j, 1});
        }
        CHECK(IndependenceRecursionCheck(step.graph, 0, subset));
        ++agreements;
      }
    }
  }
  CHECK(agreements == 876);  // 4 masks x sum_{u<=5} C(8,u)

  CHECK_THROWS_AS(IndependenceRecursionCheck(step.graph, 0, {GroundElem{1, 1, 1}}),
                  InvalidParams);
}

TEST_CASE("the strict sweep respects the ground-set cap") {
  StrictStep step = OneStrictRepair(31);
  CHECK_THROWS_AS(IsomorphismCheck(step.before, step.after, step.graph, step.t,
                                   /*max_ground_set=*/8),
                  TooLarge);
}
