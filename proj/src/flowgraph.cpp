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

#include "regen/flowgraph.hpp"

#include <algorithm>
#include <limits>
#include <ostream>
#include <queue>
#include <set>
#include <string>

namespace regen {

namespace {

// Dinic with unit capacities; small graphs, no scaling needed.
class MaxFlow {
 public:
  explicit MaxFlow(int n) : head_(n), level_(n), iter_(n) {}

  void AddEdge(int from, int to, int cap) {
    head_[from].push_back(static_cast<int>(edges_.size()));
    edges_.push_back({to, cap});
    head_[to].push_back(static_cast<int>(edges_.size()));
    edges_.push_back({from, 0});
  }

  int Run(int source, int sink) {
    int flow = 0;
    while (Bfs(source, sink)) {
      std::fill(iter_.begin(), iter_.end(), 0);
      int f;
      while ((f = Dfs(source, sink, std::numeric_limits<int>::max())) > 0) flow += f;
    }
    return flow;
  }

 private:
  struct Edge {
    int to;
    int cap;
  };

  bool Bfs(int source, int sink) {
    std::fill(level_.begin(), level_.end(), -1);
    std::queue<int> que;
    que.push(source);
    level_[source] = 0;
    while (!que.empty()) {
      int v = que.front();
      que.pop();
      for (int id : head_[v]) {
        const Edge& e = edges_[id];
        if (e.cap > 0 && level_[e.to] < 0) {
          level_[e.to] = level_[v] + 1;
          que.push(e.to);
        }
      }
    }
    return level_[sink] >= 0;
  }

  int Dfs(int v, int sink, int limit) {
    if (v == sink) return limit;
    for (int& i = iter_[v]; i < static_cast<int>(head_[v].size()); ++i) {
      int id = head_[v][i];
      Edge& e = edges_[id];
      if (e.cap > 0 && level_[e.to] == level_[v] + 1) {
        int got = Dfs(e.to, sink, std::min(limit, e.cap));
        if (got > 0) {
          e.cap -= got;
          edges_[id ^ 1].cap += got;
          return got;
        }
      }
    }
    return 0;
  }

  std::vector<Edge> edges_;
  std::vector<std::vector<int>> head_;
  std::vector<int> level_;
  std::vector<int> iter_;
};

}  // namespace

int DisjointPathCount(const Digraph& g, const std::vector<int>& from,
                      const std::vector<int>& to) {
  // Split every vertex v into v_in = 2v and v_out = 2v+1 with a unit arc, so
  // each vertex carries at most one path.
  int n = g.num_vertices();
  MaxFlow flow(2 * n + 2);
  int source = 2 * n;
  int sink = 2 * n + 1;
  for (int v = 0; v < n; ++v) {
    flow.AddEdge(2 * v, 2 * v + 1, 1);
    for (int w : g.out[v]) flow.AddEdge(2 * v + 1, 2 * w, 1);
  }
  for (int v : from) flow.AddEdge(source, 2 * v, 1);
  for (int v : to) flow.AddEdge(2 * v + 1, sink, 1);
  return flow.Run(source, sink);
}

FlowGraph::FlowGraph(const SystemParams& params, const FailureHistory& history,
                     int top_stage)
    : params_(params), history_(history), top_stage_(top_stage),
      graph_(static_cast<int>(params.file_size) +
             (top_stage + 1) * params.n * params.alpha) {
  history_.Validate();
  if (top_stage < 0 || top_stage > history.stages()) {
    throw InvalidHistory("graph truncation stage " + std::to_string(top_stage) +
                         " needs 0 <= stage <= recorded history length " +
                         std::to_string(history.stages()));
  }
  if (history.num_nodes != params.n || history.alpha != params.alpha) {
    throw InvalidHistory("history geometry does not match params");
  }
  const int b_total = static_cast<int>(params.file_size);
  sources_.resize(b_total);
  for (int b = 1; b <= b_total; ++b) sources_[b - 1] = SourceVertex(b);

  // Initialization layer: every source feeds every stage-0 vertex.
  for (int b = 1; b <= b_total; ++b) {
    for (int i = 1; i <= params.n; ++i) {
      for (int j = 1; j <= params.alpha; ++j) {
        graph_.AddEdge(SourceVertex(b), StageVertex(0, i, j));
      }
    }
  }
  for (int t = 0; t < top_stage; ++t) {
    int failed = history.FailedAt(t);
    for (int i = 1; i <= params.n; ++i) {
      if (i == failed) continue;
      for (int j = 1; j <= params.alpha; ++j) {
        graph_.AddEdge(StageVertex(t, i, j), StageVertex(t + 1, i, j));
      }
    }
    for (int j = 1; j <= params.alpha; ++j) {
      for (int i = 1; i <= params.n; ++i) {
        if (i == failed) continue;
        graph_.AddEdge(StageVertex(t, i, history.ChoiceAt(t, i)),
                       StageVertex(t + 1, failed, j));
      }
    }
  }
}

int FlowGraph::SourceVertex(int b) const {
  if (b < 1 || b > params_.file_size) throw InvalidParams("source index out of range");
  return b - 1;
}

int FlowGraph::StageVertex(int stage, int node, int slot) const {
  if (stage < 0 || stage > top_stage_ || node < 1 || node > params_.n ||
      slot < 1 || slot > params_.alpha) {
    throw InvalidParams("stage vertex (" + std::to_string(stage) + ", " +
                        std::to_string(node) + ", " + std::to_string(slot) +
                        ") out of range");
  }
  return static_cast<int>(params_.file_size) + stage * params_.n * params_.alpha +
         (node - 1) * params_.alpha + (slot - 1);
}

FlowGraph BuildGraph(const SystemParams& params, const FailureHistory& history,
                     int top_stage) {
  return FlowGraph(params, history, top_stage);
}

int GammoidRank(const FlowGraph& graph, const std::vector<int>& vertices) {
  return DisjointPathCount(graph.graph(), graph.source_vertices(), vertices);
}

bool IsIndependent(const FlowGraph& graph, int t, const std::vector<GroundElem>& subset) {
  std::vector<int> ids;
  ids.reserve(subset.size());
  for (const GroundElem& e : subset) {
    if (e.stage != t && e.stage != t + 1) {
      throw InvalidParams("ground element outside stages {t, t+1}");
    }
    ids.push_back(graph.VertexOf(e));
  }
  std::set<int> distinct(ids.begin(), ids.end());
  if (distinct.size() != ids.size()) {
    throw InvalidParams("ground subset has repeated elements");
  }
  return GammoidRank(graph, ids) == static_cast<int>(ids.size());
}

int RecoveryRankAtStage(const FlowGraph& graph, const std::vector<int>& collectors,
                        int stage) {
  if (stage < 0) stage = graph.top_stage();
  std::vector<int> ids;
  for (int node : collectors) {
    for (int j = 1; j <= graph.params().alpha; ++j) {
      ids.push_back(graph.StageVertex(stage, node, j));
    }
  }
  return GammoidRank(graph, ids);
}

std::vector<int> ActiveVertexTrace(const FlowGraph& graph,
                                   const std::vector<int>& collectors) {
  const SystemParams& p = graph.params();
  const FailureHistory& h = graph.history();
  const int top = graph.top_stage();
  if (static_cast<int>(collectors.size()) != p.k) {
    throw InvalidParams("active vertex trace needs exactly k collectors");
  }

  // Active set as (node, slot) pairs for the stage currently processed.
  std::set<std::pair<int, int>> active;
  for (int node : collectors) {
    for (int j = 1; j <= p.alpha; ++j) active.insert({node, j});
  }
  std::vector<int> sizes{static_cast<int>(active.size())};

  for (int s = top - 1; s >= 0; --s) {
    int failed = h.FailedAt(s);
    std::set<std::pair<int, int>> next;
    int failed_count = 0;
    for (const auto& [node, slot] : active) {
      if (node == failed) {
        ++failed_count;
      } else {
        next.insert({node, slot});
      }
    }
    // Helpers whose transferred slot is not pinned by a surviving member
    // can absorb one re-routed member each.
    std::vector<int> available;
    for (int i = 1; i <= p.n; ++i) {
      if (i == failed) continue;
      if (!active.count({i, h.ChoiceAt(s, i)})) available.push_back(i);
    }
    int matched = std::min<int>(failed_count, static_cast<int>(available.size()));
    for (int m = 0; m < matched; ++m) {
      next.insert({available[m], h.ChoiceAt(s, available[m])});
    }

    // Size the construction guarantees at this stage: equal when the node
    // fails again later or is no collector; otherwise the documented drop.
    int guaranteed = static_cast<int>(active.size());
    bool fails_again = false;
    for (int m = s + 1; m < top; ++m) {
      if (h.FailedAt(m) == failed) {
        fails_again = true;
        break;
      }
    }
    if (!fails_again &&
        std::find(collectors.begin(), collectors.end(), failed) != collectors.end()) {
      std::set<int> pool;
      for (int m = s + 1; m < top; ++m) pool.insert(h.FailedAt(m));
      for (int i = 1; i <= p.n; ++i) {
        if (std::find(collectors.begin(), collectors.end(), i) == collectors.end()) {
          pool.insert(i);
        }
      }
      int o = std::min<int>(p.alpha, static_cast<int>(pool.size()));
      guaranteed = static_cast<int>(active.size()) - (p.alpha - o);
    }
    active = std::move(next);
    if (static_cast<int>(active.size()) < guaranteed) {
      throw InfeasibleLinking("active vertices at stage " + std::to_string(s) +
                              " fell to " + std::to_string(active.size()) +
                              " below the guaranteed " + std::to_string(guaranteed));
    }
    sizes.push_back(static_cast<int>(active.size()));
  }
  return sizes;
}

namespace {

std::string VertexName(const FlowGraph& g, int id) {
  const SystemParams& p = g.params();
  int b_total = static_cast<int>(p.file_size);
  if (id < b_total) return "-1:" + std::to_string(id + 1);
  int rest = id - b_total;
  int per_stage = p.n * p.alpha;
  int stage = rest / per_stage;
  int node = rest % per_stage / p.alpha + 1;
  int slot = rest % p.alpha + 1;
  return std::to_string(stage) + ":" + std::to_string(node) + "." + std::to_string(slot);
}

}  // namespace

void ExportGraph(const FlowGraph& graph, const std::vector<Matrix>* locals,
                 std::ostream& os) {
  const SystemParams& p = graph.params();
  const FailureHistory& h = graph.history();
  const Digraph& g = graph.graph();
  int b_total = static_cast<int>(p.file_size);

  auto label_of = [&](int from, int to) -> std::string {
    if (from < b_total) return "1";
    int per_stage = p.n * p.alpha;
    int stage = (from - b_total) / per_stage;
    int to_node = (to - b_total) % per_stage / p.alpha + 1;
    int to_slot = (to - b_total) % p.alpha + 1;
    if (to_node != h.FailedAt(stage)) return "1";
    if (locals == nullptr || stage >= static_cast<int>(locals->size())) return "1";
    int from_node = (from - b_total) % per_stage / p.alpha + 1;
    int helper_col = from_node - (from_node > h.FailedAt(stage) ? 2 : 1);
    return std::to_string((*locals)[stage].At(to_slot - 1, helper_col));
  };

  for (int v = 0; v < g.num_vertices(); ++v) {
    for (int w : g.out[v]) {
      os << VertexName(graph, v) << " -> " << VertexName(graph, w) << " "
         << label_of(v, w) << "\n";
    }
  }
}

}  // namespace regen
