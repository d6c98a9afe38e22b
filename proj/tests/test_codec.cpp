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

#include "regen/codec.hpp"

using namespace regen;

namespace {

SystemParams SmallParams() { return NormalizedParams(4, 3, 2, 53); }

std::vector<uint32_t> RandomMessage(const SystemParams& p, std::mt19937_64& rng) {
  std::vector<uint32_t> m(p.file_size);
  for (uint32_t& v : m) v = static_cast<uint32_t>(rng() % p.q);
  return m;
}

uint32_t DotColumn(const std::vector<uint32_t>& message, const EncodingState& state,
                   int node, int slot) {
  FieldContext ctx(state.params.q);
  uint32_t acc = 0;
  int col = state.ColumnOf(node, slot);
  for (int b = 0; b < state.params.file_size; ++b) {
    acc = ctx.Add(acc, ctx.Mul(message[b], state.global.At(b, col)));
  }
  return acc;
}

}  // namespace

TEST_CASE("initial state has every B-subset of columns independent") {
  SystemParams p = SmallParams();
  EncodingState state = InitState(p, 1);
  CHECK(state.t == 0);
  int checked = 0;
  for (const std::vector<int>& subset : KSubsets(8, 5)) {
    std::vector<int> cols;
    for (int c : subset) cols.push_back(c - 1);
    CHECK(Rank(SelectColumns(state.global, cols)) == 5);
    ++checked;
  }
  CHECK(checked == 56);
  CHECK(CheckRecoveryRanks(state).ok);
}

TEST_CASE("a single-symbol file still initializes") {
  // n=2, k=1, ell=1: alpha = 1, B = 1.
  SystemParams p = NormalizedParams(2, 1, 1, 5, /*allow_small_field=*/true);
  CHECK(p.file_size == 1);
  EncodingState state = InitState(p, 9);
  for (int c = 0; c < 2; ++c) CHECK(state.global.At(0, c) != 0);
}

TEST_CASE("too few evaluation points is an error") {
  // n=5, k=4, ell=4: alpha = 1, n*alpha = 5 = q.
  SystemParams p = NormalizedParams(5, 4, 4, 5, /*allow_small_field=*/true);
  CHECK_THROWS_AS(InitState(p, 1), FieldTooSmall);
}

TEST_CASE("one repair keeps all collector groups at rank B") {
  SystemParams p = SmallParams();
  EncodingState state = InitState(p, 2);
  FailureHistory history{p.n, p.alpha, {}, {}};
  std::mt19937_64 rng(2);
  RepairOutcome outcome = Repair(state, 2, history, rng);
  CHECK(outcome.state.t == 1);
  CHECK(history.stages() == 1);
  CHECK(CheckRecoveryRanks(outcome.state).ok);
  CHECK(CheckRecoveryRanksSerial(outcome.state).ok);
}

TEST_CASE("all-zero coefficients are rejected by the rank gate") {
  SystemParams p = SmallParams();
  EncodingState state = InitState(p, 3);
  FailureHistory history{p.n, p.alpha, {}, {}};
  std::vector<int> choice = AppendStage(history, 2);
  RepairRecord zero{0, 2, choice, Matrix(p.alpha, p.n - 1, p.q)};
  EncodingState broken = ApplyRepair(state, zero);
  RecoveryCheck check = CheckRecoveryRanksTouching(broken, 2);
  CHECK(!check.ok);
  CHECK(!check.witness_collectors.empty());
}

TEST_CASE("repair tolerates a long random failure sequence") {
  SystemParams p = SmallParams();
  EncodingState state = InitState(p, 4);
  FailureHistory history{p.n, p.alpha, {}, {}};
  std::mt19937_64 rng(4);
  for (int t = 0; t < 100; ++t) {
    int failed = 1 + static_cast<int>(rng() % p.n);
    RepairOutcome outcome = Repair(state, failed, history, rng);
    REQUIRE(CheckRecoveryRanks(outcome.state).ok);
    state = std::move(outcome.state);
  }
  CHECK(state.t == 100);
}

TEST_CASE("helpers copy exactly one symbol each and do no arithmetic") {
  SystemParams p = SmallParams();
  EncodingState state = InitState(p, 5);
  std::mt19937_64 rng(5);
  std::vector<uint32_t> message = RandomMessage(p, rng);
  std::vector<NodePayload> payloads = EncodeFile(message, state);

  std::vector<int> choice{1, 0, 1, 1};  // node 2 replaced, everyone sends slot 1
  uint64_t before = FieldOpCount();
  std::vector<uint32_t> received = HelperExtract(payloads, 2, choice);
  CHECK(FieldOpCount() - before == 0);

  REQUIRE(received.size() == 3);
  CHECK(received[0] == payloads[0].symbols[0]);
  CHECK(received[1] == payloads[2].symbols[0]);
  CHECK(received[2] == payloads[3].symbols[0]);

  std::vector<NodePayload> missing{payloads[0], payloads[2]};
  CHECK_THROWS_AS(HelperExtract(missing, 2, choice), MissingHelper);
}

TEST_CASE("the newcomer combines received symbols row by row") {
  SystemParams p = SmallParams();
  // Identity-padded coefficients store a subset of the received symbols.
  Matrix local(p.alpha, p.n - 1, p.q);
  local.Set(0, 0, 1);
  local.Set(1, 1, 1);
  std::vector<uint32_t> received{7, 11, 13};
  NodePayload out = NewcomerCompute(received, local, 2);
  CHECK(out.node == 2);
  CHECK(out.symbols == std::vector<uint32_t>{7, 11});

  NodePayload zero = NewcomerCompute({0, 0, 0}, local, 2);
  CHECK(zero.symbols == std::vector<uint32_t>{0, 0});
  CHECK_THROWS_AS(NewcomerCompute({1, 2}, local, 2), InvalidParams);
}

TEST_CASE("encoding a basis vector reads off one row of the state") {
  SystemParams p = SmallParams();
  EncodingState state = InitState(p, 6);
  for (int b = 0; b < p.file_size; ++b) {
    std::vector<uint32_t> basis(p.file_size, 0);
    basis[b] = 1;
    std::vector<NodePayload> payloads = EncodeFile(basis, state);
    for (int i = 1; i <= p.n; ++i) {
      for (int j = 1; j <= p.alpha; ++j) {
        CHECK(payloads[i - 1].symbols[j - 1] == state.global.At(b, state.ColumnOf(i, j)));
      }
    }
  }
  std::vector<NodePayload> zeros = EncodeFile(std::vector<uint32_t>(p.file_size, 0), state);
  for (const NodePayload& pl : zeros) {
    for (uint32_t s : pl.symbols) CHECK(s == 0);
  }
}

TEST_CASE("round trip through encode and reconstruct") {
  SystemParams p = SmallParams();
  EncodingState state = InitState(p, 7);
  std::mt19937_64 rng(7);
  std::vector<uint32_t> message = RandomMessage(p, rng);
  std::vector<NodePayload> payloads = EncodeFile(message, state);
  for (const std::vector<int>& collectors : KSubsets(p.n, p.k)) {
    CHECK(Reconstruct(collectors, payloads, state) == message);
  }
  // k-1 nodes leave the system underdetermined.
  CHECK_THROWS_AS(Reconstruct({1, 2}, payloads, state), SingularSystem);
}

TEST_CASE("payloads track the message through repairs") {
  SystemParams p = SmallParams();
  EncodingState state = InitState(p, 8);
  FailureHistory history{p.n, p.alpha, {}, {}};
  std::mt19937_64 rng(8);
  std::vector<uint32_t> message = RandomMessage(p, rng);
  std::vector<NodePayload> payloads = EncodeFile(message, state);

  for (int t = 0; t < 50; ++t) {
    int failed = 1 + static_cast<int>(rng() % p.n);
    RepairOutcome outcome = Repair(state, failed, history, rng);
    std::vector<uint32_t> received = HelperExtract(payloads, failed, outcome.record.choice);
    payloads[failed - 1] = NewcomerCompute(received, outcome.record.local, failed);
    state = std::move(outcome.state);

    for (int i = 1; i <= p.n; ++i) {
      for (int j = 1; j <= p.alpha; ++j) {
        CHECK(payloads[i - 1].symbols[j - 1] == DotColumn(message, state, i, j));
      }
    }
  }
  for (const std::vector<int>& collectors : KSubsets(p.n, p.k)) {
    CHECK(Reconstruct(collectors, payloads, state) == message);
  }
}

TEST_CASE("the transfer matrix reproduces the repair recursion") {
  SystemParams p = SmallParams();
  RepairRecord identity{0, 0, {}, Matrix()};
  CHECK(BuildTransferMatrix(identity, p) == Matrix::Identity(8, 53));

  EncodingState state = InitState(p, 9);
  FailureHistory history{p.n, p.alpha, {}, {}};
  std::mt19937_64 rng(9);
  for (int t = 0; t < 20; ++t) {
    int failed = 1 + static_cast<int>(rng() % p.n);
    RepairOutcome outcome = Repair(state, failed, history, rng);
    Matrix h = BuildTransferMatrix(outcome.record, p);
    CHECK(Multiply(state.global, h) == outcome.state.global);

    // The replaced node's columns hold one coefficient per helper.
    for (int j = 1; j <= p.alpha; ++j) {
      int nonzero = 0;
      for (int r = 0; r < h.rows(); ++r) {
        if (h.At(r, outcome.state.ColumnOf(failed, j)) != 0) ++nonzero;
      }
      CHECK(nonzero <= p.n - 1);
    }
    state = std::move(outcome.state);
  }
}

TEST_CASE("parallel and serial recovery checks agree") {
  SystemParams p = SmallParams();
  EncodingState state = InitState(p, 10);
  RecoveryCheck parallel = CheckRecoveryRanks(state);
  RecoveryCheck serial = CheckRecoveryRanksSerial(state);
  CHECK(parallel.ok == serial.ok);
  CHECK(parallel.witness_collectors == serial.witness_collectors);

  // Corrupt one node's columns and compare the witnesses again.
  EncodingState broken = state;
  for (int b = 0; b < p.file_size; ++b) {
    broken.global.Set(b, broken.ColumnOf(1, 1), 0);
    broken.global.Set(b, broken.ColumnOf(1, 2), 0);
  }
  RecoveryCheck bp = CheckRecoveryRanks(broken);
  RecoveryCheck bs = CheckRecoveryRanksSerial(broken);
  CHECK(!bp.ok);
  CHECK(bp.ok == bs.ok);
  CHECK(bp.witness_collectors == bs.witness_collectors);
  CHECK(bp.witness_collectors == std::vector<int>{1, 2, 3});
}

TEST_CASE("rank-only acceptance can paint the system into a corner") {
  // A sample can satisfy every k-node rank check while collapsing a smaller
  // column subset; some later repair then has no acceptable coefficients at
  // all. The default matroid-agreement gate never hits this.
  SystemParams p = SmallParams();
  int dead_ends = 0;
  for (uint64_t seed = 1; seed <= 10 && dead_ends == 0; ++seed) {
    EncodingState state = InitState(p, seed);
    FailureHistory history{p.n, p.alpha, {}, {}};
    std::mt19937_64 rng(seed);
    RepairOptions ranks_only;
    ranks_only.gate = AcceptGate::kRecoveryRanksOnly;
    ranks_only.max_retries = 512;
    try {
      for (int t = 0; t < 40; ++t) {
        RepairOutcome out =
            Repair(state, 1 + static_cast<int>(rng() % p.n), history, rng, ranks_only);
        state = std::move(out.state);
      }
    } catch (const CoefficientSearchExhausted&) {
      ++dead_ends;
    }
  }
  CHECK(dead_ends > 0);
}

TEST_CASE("agreement-gated repairs never exhaust on the same seeds") {
  SystemParams p = SmallParams();
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    EncodingState state = InitState(p, seed);
    FailureHistory history{p.n, p.alpha, {}, {}};
    std::mt19937_64 rng(seed);
    for (int t = 0; t < 40; ++t) {
      RepairOutcome out = Repair(state, 1 + static_cast<int>(rng() % p.n), history, rng);
      state = std::move(out.state);
    }
    CHECK(CheckRecoveryRanks(state).ok);
  }
}

TEST_CASE("coefficient search reports exhaustion below the field bound") {
  SystemParams p = NormalizedParams(3, 2, 1, 7, /*allow_small_field=*/true);
  CHECK(p.alpha == 2);
  EncodingState state = InitState(p, 11);
  FailureHistory history{p.n, p.alpha, {}, {}};
  std::mt19937_64 rng(11);
  RepairOptions options;
  options.max_retries = 4;
  options.accept_extra = [](const EncodingState&, const EncodingState&,
                            const RepairRecord&) { return false; };
  try {
    Repair(state, 1, history, rng, options);
    FAIL("expected CoefficientSearchExhausted");
  } catch (const CoefficientSearchExhausted& e) {
    CHECK(e.retries() == 4);
    CHECK(history.stages() == 0);  // the failed stage was rolled back
  }
}
