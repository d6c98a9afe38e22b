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

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "regen/io.hpp"
#include "regen/sim.hpp"

namespace {

using regen::RunConfig;

int StrictGroundSetCap() {
  if (const char* env = std::getenv("REGEN_SIM_MAX_STRICT_GROUND_SET")) {
    return std::atoi(env);
  }
  return regen::kDefaultMaxStrictGroundSet;
}

std::string FormatRational(const regen::Rational& r) {
  std::ostringstream os;
  os << r.numerator();
  if (r.denominator() != 1) os << "/" << r.denominator();
  return os.str();
}

std::string FormatDecimal(const regen::Rational& r) {
  std::ostringstream os;
  os.precision(12);
  os << boost::rational_cast<double>(r);
  return os.str();
}

int CmdTradeoff(int64_t file_size, int k, int d, const std::string& out_path) {
  std::ostringstream csv;
  csv << "ell,alpha,beta,alpha_decimal,beta_decimal\n";
  for (int ell = 1; ell <= k; ++ell) {
    regen::TradeoffPoint pt = regen::VertexPoint(ell, regen::Rational(file_size), k, d);
    csv << ell << "," << FormatRational(pt.alpha) << "," << FormatRational(pt.beta)
        << "," << FormatDecimal(pt.alpha) << "," << FormatDecimal(pt.beta) << "\n";
  }
  if (out_path.empty() || out_path == "-") {
    std::cout << csv.str();
  } else {
    std::ofstream os(out_path);
    if (!os) throw regen::Error("cannot open " + out_path);
    os << csv.str();
  }
  return 0;
}

int CmdSimulate(const RunConfig& config, const std::string& out_prefix) {
  regen::RunResult result = regen::RunSimulation(config);

  std::ostringstream report;
  report << regen::InitReportLine(result) << "\n";
  for (const regen::StageReport& r : result.reports) {
    report << regen::ReportLine(r) << "\n";
  }
  std::string snapshot = regen::SnapshotToJson(regen::MakeSnapshot(result)).dump(2);

  if (out_prefix.empty()) {
    std::cout << report.str();
  } else {
    std::ofstream rs(out_prefix + ".report.jsonl");
    std::ofstream ss(out_prefix + ".snapshot.json");
    if (!rs || !ss) throw regen::Error("cannot write outputs with prefix " + out_prefix);
    rs << report.str();
    ss << snapshot << "\n";
  }

  nlohmann::json summary{{"rounds", static_cast<int>(result.reports.size())},
                         {"ok", result.ok},
                         {"seed", result.seed},
                         {"params", regen::ParamsToJson(result.params)}};
  std::cerr << summary.dump() << "\n";
  return result.ok ? 0 : 1;
}

int CmdVerify(const std::string& snapshot_path, const std::string& replay_path,
              int alpha, bool all_windows, regen::VerificationTier tier) {
  regen::VerifyOutcome outcome;
  if (!snapshot_path.empty()) {
    std::ifstream is(snapshot_path);
    if (!is) throw regen::Error("cannot open " + snapshot_path);
    nlohmann::json j;
    is >> j;
    outcome = regen::VerifySnapshot(regen::SnapshotFromJson(j), tier, StrictGroundSetCap());
  } else {
    std::ifstream is(replay_path);
    if (!is) throw regen::Error("cannot open " + replay_path);
    regen::FailureHistory history = regen::FromReplayText(is, alpha);
    outcome = regen::VerifyReplay(history, all_windows);
  }
  outcome.details["ok"] = outcome.ok;
  std::cout << outcome.details.dump(2) << "\n";
  return outcome.ok ? 0 : 1;
}

int CmdExportGraph(const std::string& snapshot_path, const std::string& out_path) {
  std::ifstream is(snapshot_path);
  if (!is) throw regen::Error("cannot open " + snapshot_path);
  nlohmann::json j;
  is >> j;
  regen::StateSnapshot snapshot = regen::SnapshotFromJson(j);
  regen::FlowGraph graph = regen::BuildGraph(snapshot.state.params, snapshot.history,
                                             snapshot.history.stages());
  std::vector<regen::Matrix> locals;
  for (const regen::RepairRecord& r : snapshot.records) locals.push_back(r.local);

  if (out_path.empty() || out_path == "-") {
    regen::ExportGraph(graph, locals.empty() ? nullptr : &locals, std::cout);
  } else {
    std::ofstream os(out_path);
    if (!os) throw regen::Error("cannot open " + out_path);
    regen::ExportGraph(graph, locals.empty() ? nullptr : &locals, os);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Functional-repair regenerating code simulator"};
  app.require_subcommand(1);

  // tradeoff
  int64_t t_file_size = 1;
  int t_k = 0, t_d = 0;
  std::string t_out;
  CLI::App* tradeoff = app.add_subcommand("tradeoff", "Emit the tradeoff curve vertices as CSV");
  tradeoff->add_option("--B", t_file_size, "File size")->required();
  tradeoff->add_option("--k", t_k, "Recovery degree")->required();
  tradeoff->add_option("--d", t_d, "Repair degree")->required();
  tradeoff->add_option("--out", t_out, "Output path (default stdout)");

  // simulate
  RunConfig config;
  std::string failure_model = "uniform-random";
  std::string collectors = "all";
  std::string tier = "fast";
  std::string s_out;
  CLI::App* simulate = app.add_subcommand("simulate", "Run repair rounds and verify");
  simulate->add_option("--n", config.n, "Storage nodes")->required();
  simulate->add_option("--k", config.k, "Recovery degree")->required();
  simulate->add_option("--ell", config.ell, "Tradeoff vertex index")->required();
  CLI::Option* q_opt = simulate->add_option("--q", config.q, "Field modulus (prime)");
  simulate->add_flag("--auto-q", config.auto_q, "Pick the smallest admissible prime")
      ->excludes(q_opt);
  simulate->add_option("--rounds", config.rounds, "Repair rounds")->required();
  simulate->add_option("--failure-model", failure_model,
                       "uniform-random | round-robin | adversarial-worst-node | scripted:<file>");
  simulate->add_option("--seed", config.seed, "RNG seed");
  simulate->add_option("--tier", tier, "fast | strict");
  simulate->add_option("--collectors", collectors, "all | sample:<m>");
  std::string accept_gate = "matroid";
  simulate->add_option("--accept-gate", accept_gate,
                       "matroid | ranks-only (ranks-only can dead-end; for probing)");
  simulate->add_flag("--allow-small-field", config.allow_small_field,
                     "Probe below the field-size bound");
  simulate->add_option("--max-retries", config.max_retries, "Coefficient samples per repair");
  simulate->add_flag("--timings", config.timings, "Include elapsed_ms in reports");
  simulate->add_option("--out", s_out, "Output prefix for .report.jsonl and .snapshot.json");

  // verify
  std::string v_snapshot, v_replay, v_tier = "fast";
  int v_alpha = 0;
  bool v_all_windows = false;
  CLI::App* verify = app.add_subcommand("verify", "Check a snapshot or a replay file");
  CLI::Option* vs = verify->add_option("--snapshot", v_snapshot, "Snapshot JSON path");
  CLI::Option* vr = verify->add_option("--replay", v_replay, "Replay text path");
  verify->add_option("--alpha", v_alpha, "Symbols per node (replay mode)");
  verify->add_flag("--all-windows", v_all_windows,
                   "Check every consecutive window, not only suffix-aligned ones");
  verify->add_option("--tier", v_tier, "fast | strict");
  vs->excludes(vr);

  // export-graph
  std::string g_snapshot, g_out;
  CLI::App* export_graph = app.add_subcommand("export-graph",
                                              "Write the signal flow graph as an edge list");
  export_graph->add_option("--snapshot", g_snapshot, "Snapshot JSON path")->required();
  export_graph->add_option("--out", g_out, "Output path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (tradeoff->parsed()) return CmdTradeoff(t_file_size, t_k, t_d, t_out);

    if (simulate->parsed()) {
      if (!config.auto_q && config.q == 0) {
        throw regen::InvalidParams("pass --q <prime> or --auto-q");
      }
      config.max_strict_ground_set = StrictGroundSetCap();
      if (tier == "strict") {
        config.tier = regen::VerificationTier::kStrict;
      } else if (tier != "fast") {
        throw regen::InvalidParams("unknown tier: " + tier);
      }
      if (accept_gate == "ranks-only") {
        config.gate = regen::AcceptGate::kRecoveryRanksOnly;
      } else if (accept_gate != "matroid") {
        throw regen::InvalidParams("unknown accept gate: " + accept_gate);
      }
      if (failure_model == "uniform-random") {
        config.model = regen::FailureModel::kUniformRandom;
      } else if (failure_model == "round-robin") {
        config.model = regen::FailureModel::kRoundRobin;
      } else if (failure_model == "adversarial-worst-node") {
        config.model = regen::FailureModel::kAdversarialWorstNode;
      } else if (failure_model.rfind("scripted:", 0) == 0) {
        config.model = regen::FailureModel::kScripted;
        std::ifstream fs(failure_model.substr(9));
        if (!fs) throw regen::Error("cannot open failure script");
        int node = 0;
        while (fs >> node) config.scripted.push_back(node);
      } else {
        throw regen::InvalidParams("unknown failure model: " + failure_model);
      }
      if (collectors.rfind("sample:", 0) == 0) {
        config.collector_sample = std::stoi(collectors.substr(7));
      } else if (collectors != "all") {
        throw regen::InvalidParams("unknown collectors mode: " + collectors);
      }
      return CmdSimulate(config, s_out);
    }

    if (verify->parsed()) {
      if (v_snapshot.empty() == v_replay.empty()) {
        throw regen::InvalidParams("pass exactly one of --snapshot or --replay");
      }
      if (!v_replay.empty() && v_alpha < 1) {
        throw regen::InvalidParams("replay mode needs --alpha");
      }
      regen::VerificationTier vt = v_tier == "strict" ? regen::VerificationTier::kStrict
                                                      : regen::VerificationTier::kFast;
      return CmdVerify(v_snapshot, v_replay, v_alpha, v_all_windows, vt);
    }

    if (export_graph->parsed()) return CmdExportGraph(g_snapshot, g_out);
  } catch (const regen::CoefficientSearchExhausted& e) {
    std::cerr << "error: " << e.what() << " (retries: " << e.retries() << ")\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
