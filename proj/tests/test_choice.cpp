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

#include <random>

#include <doctest.h>

#include "regen/choice.hpp"

using namespace regen;

namespace {

FailureHistory HistoryFromFailures(int n, int alpha, const std::vector<int>& failures) {
  FailureHistory h{n, alpha, {}, {}};
  for (int f : failures) AppendStage(h, f);
  return h;
}

// A history where every helper transfers slot 1 at every stage.
FailureHistory ConstantChoiceHistory(int n, int alpha, const std::vector<int>& failures) {
  FailureHistory h{n, alpha, {}, {}};
  for (int f : failures) {
    h.failures.push_back(f);
    std::vector<int> row(n, 1);
    row[f - 1] = 0;
    h.choices.push_back(std::move(row));
  }
  return h;
}

}  // namespace

TEST_CASE("cutoff stage finds the alpha-distinct window") {
  FailureHistory h{5, 2, {2, 3, 4, 2}, {}};
  h.choices.resize(4, std::vector<int>(5, 1));
  CHECK(CutoffStage(h, 3, 2) == 1);

  FailureHistory two{5, 2, {1, 2}, {}};
  two.choices.resize(2, std::vector<int>(5, 1));
  CHECK(CutoffStage(two, 2, 2) == 0);

  FailureHistory ones{5, 2, {1, 1, 1}, {}};
  ones.choices.resize(3, std::vector<int>(5, 1));
  CHECK_THROWS_AS(CutoffStage(ones, 3, 2), NotEnoughHistory);
}

TEST_CASE("the failed node's own choice is the undefined marker") {
  FailureHistory h = HistoryFromFailures(4, 2, {2});
  CHECK(h.ChoiceAt(0, 2) == 0);
  for (int i : {1, 3, 4}) CHECK(h.ChoiceAt(0, i) == 1);
}

TEST_CASE("fresh picks avoid indices used since the last own failure") {
  // After F_0 = 2 everyone chose slot 1; at F_1 = 3 node 1 has no anchor
  // stage, one distinct intermediate failure < alpha, so it picks slot 2.
  FailureHistory h = HistoryFromFailures(4, 2, {2, 3});
  CHECK(h.ChoiceAt(1, 1) == 2);
  CHECK(h.ChoiceAt(1, 3) == 0);
  // Node 2 failed at stage 0, so its scan anchors there and restarts.
  CHECK(h.ChoiceAt(1, 2) == 1);
}

TEST_CASE("a repeated failure reuses the anchored choice") {
  // Hand trace for F = (2,3,4,3): at t=3 node 1 anchors at s=1 where
  // F_1 = F_3 = 3, sees one distinct failure in between, and p_1(1) = 2.
  FailureHistory h = HistoryFromFailures(4, 2, {2, 3, 4, 3});
  CHECK(h.ChoiceAt(1, 1) == 2);
  CHECK(h.ChoiceAt(3, 1) == 2);
}

TEST_CASE("choices depend only on the past") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<int> failures;
    for (int t = 0; t < 12; ++t) failures.push_back(1 + static_cast<int>(rng() % 4));
    FailureHistory base = HistoryFromFailures(4, 2, failures);

    std::vector<int> extended = failures;
    for (int t = 0; t < 5; ++t) extended.push_back(1 + static_cast<int>(rng() % 4));
    FailureHistory more = HistoryFromFailures(4, 2, extended);

    for (int t = 0; t < base.stages(); ++t) CHECK(base.choices[t] == more.choices[t]);
  }
}

TEST_CASE("identical histories yield identical choices") {
  std::vector<int> failures{1, 4, 2, 2, 3, 1, 4, 3, 2, 1};
  FailureHistory a = HistoryFromFailures(4, 2, failures);
  FailureHistory b = HistoryFromFailures(4, 2, failures);
  CHECK(a.choices == b.choices);
}

TEST_CASE("empty history satisfies the pair condition") {
  FailureHistory h{4, 2, {}, {}};
  CHECK(VerifyFPairCondition(h, 2, 0).ok);
}

TEST_CASE("generated histories satisfy the pair condition") {
  std::mt19937_64 rng(7);
  for (auto [n, alpha] : std::vector<std::pair<int, int>>{{4, 2}, {5, 2}, {5, 4}, {6, 3}}) {
    for (int trial = 0; trial < 40; ++trial) {
      std::vector<int> failures;
      for (int t = 0; t < 30; ++t) failures.push_back(1 + static_cast<int>(rng() % n));
      FailureHistory h = HistoryFromFailures(n, alpha, failures);
      FPairVerdict suffix = VerifyFPairCondition(h, alpha, h.stages());
      CHECK(suffix.ok);
      FPairVerdict all = VerifyFPairCondition(h, alpha, h.stages(), /*all_windows=*/true);
      CHECK(all.ok);
    }
  }
}

TEST_CASE("constant choices across a failure cycle violate the condition") {
  // Cycling through alpha+1 distinct nodes puts two distinct failures
  // between consecutive failures of node 1, but a constant choice gives
  // only one distinct value over that window.
  FailureHistory bad = ConstantChoiceHistory(4, 2, {1, 2, 3, 1});
  FPairVerdict verdict = VerifyFPairCondition(bad, 2, bad.stages());
  REQUIRE(!verdict.ok);
  const FPairWitness& w = *verdict.witness;
  CHECK(w.distinct_failures > w.distinct_choices);
  CHECK(w.distinct_failures == 2);

  // Alternating failures of just two nodes keep every window at a single
  // distinct failure, so a constant choice is still conforming.
  FailureHistory alternating = ConstantChoiceHistory(4, 2, {1, 2, 1, 2, 1});
  CHECK(VerifyFPairCondition(alternating, 2, alternating.stages()).ok);
  CHECK(VerifyFPairCondition(alternating, 2, alternating.stages(), true).ok);
}

TEST_CASE("the witness names a concrete window") {
  FailureHistory bad = ConstantChoiceHistory(5, 3, {1, 2, 3, 4, 1});
  FPairVerdict verdict = VerifyFPairCondition(bad, 3, bad.stages());
  REQUIRE(!verdict.ok);
  const FPairWitness& w = *verdict.witness;
  CHECK(w.window_begin >= w.pair_left + 1);
  CHECK(w.window_end <= w.pair_right - 1);
  CHECK(w.distinct_choices == 1);
}

TEST_CASE("invalid histories are rejected") {
  FailureHistory h{4, 2, {1}, {{1, 1, 1, 1}}};  // p(F_t) must be 0
  CHECK_THROWS_AS(VerifyFPairCondition(h, 2, 1), InvalidHistory);
  FailureHistory range{4, 2, {9}, {{0, 1, 1, 1}}};
  CHECK_THROWS_AS(range.Validate(), InvalidHistory);
}

TEST_CASE("exhausted fresh picks surface as an error") {
  // A corrupted history where node 1 burned all three slots across a window
  // with only two distinct failures: the fresh-pick set is empty, which a
  // conforming history can never produce.
  FailureHistory burned{5, 3, {}, {}};
  burned.failures = {2, 3, 2, 4};
  burned.choices = {{1, 0, 1, 1, 1}, {2, 1, 0, 1, 1}, {3, 0, 1, 1, 1}};
  CHECK_THROWS_AS(ComputeChoice(1, 3, burned, 3), ExhaustedIndices);
}
