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

#include "regen/io.hpp"

#include <istream>
#include <sstream>

namespace regen {

namespace {

constexpr const char* kSnapshotFormat = "regen-sim/state-v1";

nlohmann::json MatrixToJson(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (int r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m.At(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix MatrixFromJson(const nlohmann::json& j, uint32_t modulus) {
  if (!j.is_array() || j.empty()) throw InvalidParams("matrix JSON must be a nonempty array");
  int rows = static_cast<int>(j.size());
  int cols = static_cast<int>(j.at(0).size());
  Matrix m(rows, cols, modulus);
  for (int r = 0; r < rows; ++r) {
    if (static_cast<int>(j.at(r).size()) != cols) {
      throw InvalidParams("matrix JSON rows have uneven width");
    }
    for (int c = 0; c < cols; ++c) {
      m.Set(r, c, j.at(r).at(c).get<uint32_t>() % modulus);
    }
  }
  return m;
}

}  // namespace

nlohmann::json ParamsToJson(const SystemParams& p) {
  return nlohmann::json{{"n", p.n},         {"k", p.k},       {"ell", p.ell},
                        {"d", p.d},         {"alpha", p.alpha}, {"beta", p.beta},
                        {"B", p.file_size}, {"q", p.q}};
}

SystemParams ParamsFromJson(const nlohmann::json& j) {
  SystemParams p;
  p.n = j.at("n").get<int>();
  p.k = j.at("k").get<int>();
  p.ell = j.at("ell").get<int>();
  p.d = j.at("d").get<int>();
  p.alpha = j.at("alpha").get<int>();
  p.beta = j.at("beta").get<int>();
  p.file_size = j.at("B").get<int64_t>();
  p.q = j.at("q").get<uint32_t>();
  SystemParams expect = NormalizedParams(p.n, p.k, p.ell, p.q, /*allow_small_field=*/true);
  if (expect != p) throw InvalidParams("params JSON is not a normalized instance");
  return p;
}

nlohmann::json SnapshotToJson(const StateSnapshot& snapshot) {
  nlohmann::json j;
  j["format"] = kSnapshotFormat;
  j["params"] = ParamsToJson(snapshot.state.params);
  j["seed"] = snapshot.seed;
  j["t"] = snapshot.state.t;
  j["E"] = MatrixToJson(snapshot.state.global);
  j["history"] = {{"failures", snapshot.history.failures},
                  {"choices", snapshot.history.choices}};
  nlohmann::json records = nlohmann::json::array();
  for (const RepairRecord& r : snapshot.records) {
    records.push_back({{"t", r.t}, {"failed", r.failed}, {"local", MatrixToJson(r.local)}});
  }
  j["records"] = std::move(records);
  return j;
}

StateSnapshot SnapshotFromJson(const nlohmann::json& j) {
  if (j.value("format", "") != kSnapshotFormat) {
    throw InvalidParams("unrecognized snapshot format");
  }
  StateSnapshot s;
  SystemParams params = ParamsFromJson(j.at("params"));
  s.seed = j.at("seed").get<uint64_t>();
  s.state.params = params;
  s.state.t = j.at("t").get<int>();
  s.state.global = MatrixFromJson(j.at("E"), params.q);
  if (s.state.global.rows() != params.file_size ||
      s.state.global.cols() != params.n * params.alpha) {
    throw InvalidParams("snapshot E has the wrong shape");
  }

  s.history.num_nodes = params.n;
  s.history.alpha = params.alpha;
  s.history.failures = j.at("history").at("failures").get<std::vector<int>>();
  s.history.choices = j.at("history").at("choices").get<std::vector<std::vector<int>>>();
  s.history.Validate();
  if (s.history.stages() != s.state.t) {
    throw InvalidParams("snapshot history length does not match its stage");
  }

  for (const nlohmann::json& rj : j.at("records")) {
    RepairRecord r;
    r.t = rj.at("t").get<int>();
    r.failed = rj.at("failed").get<int>();
    r.local = MatrixFromJson(rj.at("local"), params.q);
    if (r.t < 0 || r.t >= s.history.stages() || r.failed != s.history.FailedAt(r.t) ||
        r.local.rows() != params.alpha || r.local.cols() != params.n - 1) {
      throw InvalidParams("snapshot record at stage " + std::to_string(r.t) +
                          " is inconsistent with the history");
    }
    r.choice = s.history.choices[r.t];
    s.records.push_back(std::move(r));
  }
  return s;
}

std::string ToReplayText(const FailureHistory& history) {
  std::ostringstream os;
  for (int t = 0; t < history.stages(); ++t) {
    os << t << " " << history.failures[t];
    for (int p : history.choices[t]) os << " " << p;
    os << "\n";
  }
  return os.str();
}

FailureHistory FromReplayText(std::istream& is, int alpha) {
  FailureHistory h;
  h.alpha = alpha;
  std::string line;
  int expect_t = 0;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    int t = 0, failed = 0;
    if (!(ls >> t >> failed)) throw InvalidHistory("malformed replay line: " + line);
    if (t != expect_t) {
      throw InvalidHistory("replay stages must be consecutive from 0; saw " +
                           std::to_string(t) + " expecting " + std::to_string(expect_t));
    }
    std::vector<int> row;
    int p = 0;
    while (ls >> p) row.push_back(p);
    if (h.num_nodes == 0) {
      h.num_nodes = static_cast<int>(row.size());
    }
    if (row.empty() || static_cast<int>(row.size()) != h.num_nodes) {
      throw InvalidHistory("replay line has inconsistent node count: " + line);
    }
    h.failures.push_back(failed);
    h.choices.push_back(std::move(row));
    ++expect_t;
  }
  h.Validate();
  return h;
}

}  // namespace regen
