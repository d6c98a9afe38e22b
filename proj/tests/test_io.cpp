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
#include <sstream>

#include <doctest.h>

#include "regen/io.hpp"

using namespace regen;

namespace {

StateSnapshot BuildSnapshot(uint64_t seed, int rounds) {
  SystemParams p = NormalizedParams(4, 3, 2, 53);
  EncodingState state = InitState(p, seed);
  FailureHistory history{p.n, p.alpha, {}, {}};
  std::mt19937_64 rng(seed);
  std::vector<RepairRecord> records;
  for (int t = 0; t < rounds; ++t) {
    RepairOutcome outcome = Repair(state, 1 + static_cast<int>(rng() % p.n), history, rng);
    records.push_back(outcome.record);
    state = std::move(outcome.state);
  }
  return StateSnapshot{seed, std::move(state), std::move(history), std::move(records)};
}

}  // namespace

TEST_CASE("params JSON round trip") {
  SystemParams p = NormalizedParams(5, 3, 3, 191);
  CHECK(ParamsFromJson(ParamsToJson(p)) == p);

  nlohmann::json bad = ParamsToJson(p);
  bad["alpha"] = 7;  // not a normalized instance anymore
  CHECK_THROWS_AS(ParamsFromJson(bad), InvalidParams);
}

TEST_CASE("snapshot JSON round trip preserves everything") {
  StateSnapshot snapshot = BuildSnapshot(33, 5);
  nlohmann::json j = SnapshotToJson(snapshot);
  StateSnapshot loaded = SnapshotFromJson(j);

  CHECK(loaded.seed == snapshot.seed);
  CHECK(loaded.state.t == snapshot.state.t);
  CHECK(loaded.state.params == snapshot.state.params);
  CHECK(loaded.state.global == snapshot.state.global);
  CHECK(loaded.history.failures == snapshot.history.failures);
  CHECK(loaded.history.choices == snapshot.history.choices);
  REQUIRE(loaded.records.size() == snapshot.records.size());
  for (size_t i = 0; i < loaded.records.size(); ++i) {
    CHECK(loaded.records[i].t == snapshot.records[i].t);
    CHECK(loaded.records[i].failed == snapshot.records[i].failed);
    CHECK(loaded.records[i].local == snapshot.records[i].local);
    CHECK(loaded.records[i].choice == snapshot.records[i].choice);
  }
}

TEST_CASE("snapshot loading validates its pieces") {
  StateSnapshot snapshot = BuildSnapshot(35, 3);
  nlohmann::json j = SnapshotToJson(snapshot);

  nlohmann::json wrong_format = j;
  wrong_format["format"] = "something-else";
  CHECK_THROWS_AS(SnapshotFromJson(wrong_format), InvalidParams);

  nlohmann::json wrong_stage = j;
  wrong_stage["t"] = 99;
  CHECK_THROWS_AS(SnapshotFromJson(wrong_stage), InvalidParams);

  nlohmann::json wrong_record = j;
  wrong_record["records"][0]["failed"] =
      (snapshot.records[0].failed % snapshot.state.params.n) + 1;
  CHECK_THROWS_AS(SnapshotFromJson(wrong_record), InvalidParams);
}

TEST_CASE("replay text round trip") {
  FailureHistory h{4, 2, {}, {}};
  for (int f : {2, 3, 4, 3, 1}) AppendStage(h, f);
  std::string text = ToReplayText(h);

  std::istringstream is(text);
  FailureHistory loaded = FromReplayText(is, 2);
  CHECK(loaded.num_nodes == 4);
  CHECK(loaded.failures == h.failures);
  CHECK(loaded.choices == h.choices);
}

TEST_CASE("replay parsing flags malformed input") {
  std::istringstream gap("0 2 1 0 1 1\n2 3 2 2 0 2\n");
  CHECK_THROWS_AS(FromReplayText(gap, 2), InvalidHistory);

  std::istringstream ragged("0 2 1 0 1 1\n1 3 2 2 0\n");
  CHECK_THROWS_AS(FromReplayText(ragged, 2), InvalidHistory);

  std::istringstream bad_choice("0 2 9 0 1 1\n");
  CHECK_THROWS_AS(FromReplayText(bad_choice, 2), InvalidHistory);

  std::istringstream with_comment("# two repairs\n0 2 1 0 1 1\n1 3 2 2 0 2\n");
  FailureHistory h = FromReplayText(with_comment, 2);
  CHECK(h.stages() == 2);
  CHECK(h.ChoiceAt(1, 1) == 2);
}
