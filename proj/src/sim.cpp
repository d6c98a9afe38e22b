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

#include "regen/sim.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <random>

namespace regen {

namespace {

uint32_t UniformBelow(std::mt19937_64& rng, uint32_t bound) {
  return static_cast<uint32_t>(rng() % bound);
}

// Smallest rank over the k-subsets that contain `node`, for a candidate
// successor state.
int MinTouchedRank(const EncodingState& state, int node) {
  int best = std::numeric_limits<int>::max();
  for (const std::vector<int>& group : KSubsets(state.params.n, state.params.k)) {
    if (std::find(group.begin(), group.end(), node) == group.end()) continue;
    std::vector<int> cols;
    for (int i : group) {
      for (int j = 1; j <= state.params.alpha; ++j) cols.push_back(state.ColumnOf(i, j));
    }
    best = std::min(best, Rank(SelectColumns(state.global, cols)));
  }
  return best;
}

// Greedy adversary: try one tentative coefficient sample per candidate node
// and fail the node whose repair leaves the smallest collector-rank margin.
int PickWorstNode(const EncodingState& state, const FailureHistory& history,
                  uint64_t seed, int t) {
  int worst_node = 1;
  int worst_rank = std::numeric_limits<int>::max();
  for (int candidate = 1; candidate <= state.params.n; ++candidate) {
    FailureHistory scratch = history;
    std::vector<int> choice = AppendStage(scratch, candidate);
    std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ull * (t * 31 + candidate)));
    Matrix local(state.params.alpha, state.params.n - 1, state.params.q);
    for (uint32_t& v : local.data()) v = UniformBelow(rng, state.params.q);
    EncodingState tentative =
        ApplyRepair(state, RepairRecord{t, candidate, choice, local});
    int rank = MinTouchedRank(tentative, candidate);
    if (rank < worst_rank) {
      worst_rank = rank;
      worst_node = candidate;
    }
  }
  return worst_node;
}

RecoveryCheck CheckSampledCollectors(const EncodingState& state, int sample,
                                     std::mt19937_64& rng) {
  std::vector<std::vector<int>> all = KSubsets(state.params.n, state.params.k);
  for (int s = 0; s < sample; ++s) {
    const std::vector<int>& group = all[rng() % all.size()];
    std::vector<int> cols;
    for (int i : group) {
      for (int j = 1; j <= state.params.alpha; ++j) cols.push_back(state.ColumnOf(i, j));
    }
    if (Rank(SelectColumns(state.global, cols)) != state.params.file_size) {
      return {false, group};
    }
  }
  return {true, {}};
}

}  // namespace

SystemParams ResolveParams(const RunConfig& config) {
  uint32_t q = config.q;
  if (config.auto_q) {
    SystemParams shape = NormalizedParams(config.n, config.k, config.ell, 2,
                                          /*allow_small_field=*/true);
    int64_t bound = MinFieldSize(config.n, shape.alpha, shape.file_size);
    q = SmallestPrimeAtLeast(std::max<uint64_t>(
        static_cast<uint64_t>(bound),
        static_cast<uint64_t>(config.n) * shape.alpha + 1));
  }
  return NormalizedParams(config.n, config.k, config.ell, q, config.allow_small_field);
}

RunResult RunSimulation(const RunConfig& config) {
  RunResult result;
  result.seed = config.seed;
  result.params = ResolveParams(config);
  const SystemParams& p = result.params;

  std::mt19937_64 rng(config.seed);
  EncodingState state = InitState(p, config.seed);
  result.message.resize(p.file_size);
  for (uint32_t& v : result.message) v = UniformBelow(rng, p.q);
  result.payloads = EncodeFile(result.message, state);
  result.history.num_nodes = p.n;
  result.history.alpha = p.alpha;

  result.init_ok = CheckRecoveryRanks(state).ok;
  result.ok = result.init_ok;

  RepairOptions options;
  options.max_retries = config.max_retries;
  options.gate = config.gate;

  const FieldContext ctx(p.q);
  for (int t = 0; t < config.rounds; ++t) {
    auto started = std::chrono::steady_clock::now();
    int failed = 0;
    switch (config.model) {
      case FailureModel::kScripted:
        if (t >= static_cast<int>(config.scripted.size())) {
          throw InvalidParams("scripted failure sequence shorter than the round count");
        }
        failed = config.scripted[t];
        break;
      case FailureModel::kUniformRandom:
        failed = 1 + static_cast<int>(rng() % p.n);
        break;
      case FailureModel::kRoundRobin:
        failed = t % p.n + 1;
        break;
      case FailureModel::kAdversarialWorstNode:
        failed = PickWorstNode(state, result.history, config.seed, t);
        break;
    }

    RepairOutcome outcome = Repair(state, failed, result.history, rng, options);

    StageReport report;
    report.t = t;
    report.failed = failed;
    report.choice = outcome.record.choice;
    report.retries = outcome.retries;
    if (config.tier == VerificationTier::kStrict) {
      // Certify the accepted transition against the graph-based oracle; the
      // accept gate's recursion route and this one must always agree.
      FlowGraph graph = BuildGraph(p, result.history, t + 1);
      report.strict_ok = IsomorphismCheck(state, outcome.state, graph, t,
                                          config.max_strict_ground_set)
                             .ok;
    }

    // Move the real payload through the repair: helpers copy, newcomer
    // combines. The op counter confirms helpers did no arithmetic.
    uint64_t ops_before = FieldOpCount();
    std::vector<uint32_t> received =
        HelperExtract(result.payloads, failed, outcome.record.choice);
    report.io.helper_field_ops = FieldOpCount() - ops_before;
    report.io.symbols_read = static_cast<int>(received.size());
    report.io.symbols_sent = static_cast<int>(received.size());
    NodePayload regenerated = NewcomerCompute(received, outcome.record.local, failed);

    // The regenerated symbols must match the message under the new vectors.
    report.payload_ok = true;
    for (int j = 1; j <= p.alpha; ++j) {
      uint32_t expect = 0;
      int col = outcome.state.ColumnOf(failed, j);
      for (int b = 0; b < p.file_size; ++b) {
        expect = ctx.Add(expect, ctx.Mul(result.message[b], outcome.state.global.At(b, col)));
      }
      if (expect != regenerated.symbols[j - 1]) report.payload_ok = false;
    }
    result.payloads[failed - 1] = std::move(regenerated);

    RecoveryCheck check = config.collector_sample > 0
                              ? CheckSampledCollectors(outcome.state,
                                                       config.collector_sample, rng)
                              : CheckRecoveryRanks(outcome.state);
    report.fast_ok = check.ok;

    if (config.timings) {
      report.elapsed_ms = std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - started)
                              .count();
    }
    result.ok = result.ok && report.fast_ok && report.payload_ok &&
                report.strict_ok.value_or(true);
    result.reports.push_back(std::move(report));
    state = std::move(outcome.state);
    result.records.push_back(std::move(outcome.record));
  }
  result.final_state = std::move(state);
  return result;
}

std::string InitReportLine(const RunResult& result) {
  nlohmann::json j{{"event", "init"},
                   {"params", ParamsToJson(result.params)},
                   {"seed", result.seed},
                   {"fast_ok", result.init_ok}};
  return j.dump();
}

std::string ReportLine(const StageReport& report) {
  nlohmann::json j{{"event", "repair"},
                   {"t", report.t},
                   {"failed", report.failed},
                   {"choice", report.choice},
                   {"retries", report.retries},
                   {"fast_ok", report.fast_ok},
                   {"payload_ok", report.payload_ok},
                   {"io",
                    {{"read", report.io.symbols_read},
                     {"sent", report.io.symbols_sent},
                     {"helper_field_ops", report.io.helper_field_ops}}}};
  if (report.strict_ok) j["strict_ok"] = *report.strict_ok;
  if (report.elapsed_ms) j["elapsed_ms"] = *report.elapsed_ms;
  return j.dump();
}

StateSnapshot MakeSnapshot(const RunResult& result) {
  return StateSnapshot{result.seed, result.final_state, result.history, result.records};
}

VerifyOutcome VerifySnapshot(const StateSnapshot& snapshot, VerificationTier tier,
                             int max_ground_set) {
  VerifyOutcome out;
  out.ok = true;
  const SystemParams& p = snapshot.state.params;

  RecoveryCheck recovery = CheckRecoveryRanks(snapshot.state);
  out.details["recovery_ranks_ok"] = recovery.ok;
  if (!recovery.ok) {
    out.details["failing_collectors"] = recovery.witness_collectors;
    out.ok = false;
  }

  FPairVerdict spread = VerifyFPairCondition(snapshot.history, p.alpha,
                                             snapshot.history.stages());
  out.details["choice_condition_ok"] = spread.ok;
  if (!spread.ok) {
    const FPairWitness& w = *spread.witness;
    out.details["choice_condition_witness"] = {
        {"pair", {w.pair_left, w.pair_right}},
        {"node", w.node},
        {"window", {w.window_begin, w.window_end}},
        {"distinct_failures", w.distinct_failures},
        {"distinct_choices", w.distinct_choices}};
    out.ok = false;
  }

  if (tier == VerificationTier::kStrict) {
    if (static_cast<int>(snapshot.records.size()) != snapshot.history.stages()) {
      out.details["strict_ok"] = false;
      out.details["strict_error"] = "snapshot carries no complete record chain";
      out.ok = false;
      return out;
    }
    EncodingState current = InitState(p, snapshot.seed);
    bool strict_ok = true;
    for (const RepairRecord& record : snapshot.records) {
      EncodingState next = ApplyRepair(current, record);
      FlowGraph graph = BuildGraph(p, snapshot.history, record.t + 1);
      IsoVerdict verdict =
          IsomorphismCheck(current, next, graph, record.t, max_ground_set);
      if (!verdict.ok) {
        strict_ok = false;
        nlohmann::json subset = nlohmann::json::array();
        for (const GroundElem& e : verdict.witness->subset) {
          subset.push_back({{"node", e.node}, {"slot", e.slot}, {"stage", e.stage}});
        }
        out.details["strict_witness"] = {
            {"t", record.t},
            {"subset", subset},
            {"gammoid_independent", verdict.witness->gammoid_independent},
            {"linear_rank", verdict.witness->linear_rank}};
        break;
      }
      current = std::move(next);
    }
    if (strict_ok && !(current.global == snapshot.state.global)) {
      strict_ok = false;
      out.details["strict_error"] = "replayed state does not match the stored one";
    }
    out.details["strict_ok"] = strict_ok;
    out.ok = out.ok && strict_ok;
  }
  return out;
}

VerifyOutcome VerifyReplay(const FailureHistory& history, bool all_windows) {
  VerifyOutcome out;
  FPairVerdict verdict =
      VerifyFPairCondition(history, history.alpha, history.stages(), all_windows);
  out.ok = verdict.ok;
  out.details["choice_condition_ok"] = verdict.ok;
  out.details["stages"] = history.stages();
  out.details["failures"] = history.failures;
  out.details["choices"] = history.choices;
  if (!verdict.ok) {
    const FPairWitness& w = *verdict.witness;
    out.details["choice_condition_witness"] = {
        {"pair", {w.pair_left, w.pair_right}},
        {"node", w.node},
        {"window", {w.window_begin, w.window_end}},
        {"distinct_failures", w.distinct_failures},
        {"distinct_choices", w.distinct_choices}};
  }
  return out;
}

}  // namespace regen
