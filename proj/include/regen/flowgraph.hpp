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

#pragma once

#include <iosfwd>
#include <vector>

#include "regen/choice.hpp"
#include "regen/field.hpp"
#include "regen/params.hpp"

namespace regen {

// Plain directed graph on vertices 0..n-1.
struct Digraph {
  explicit Digraph(int n) : out(n) {}
  int num_vertices() const { return static_cast<int>(out.size()); }
  void AddEdge(int from, int to) { out[from].push_back(to); }
  std::vector<std::vector<int>> out;
};

// Maximum number of vertex-disjoint paths that start at distinct vertices
// of `from` and end at distinct vertices of `to` (zero-length paths count
// when a vertex lies in both sets). Unit vertex capacities via splitting,
// then max flow.
int DisjointPathCount(const Digraph& g, const std::vector<int>& from,
                      const std::vector<int>& to);

// One element (i, j)_m of a gammoid ground set: slot j of node i at stage m.
struct GroundElem {
  int node = 0;
  int slot = 0;
  int stage = 0;

  friend bool operator==(const GroundElem&, const GroundElem&) = default;
};

// The signal flow graph of a repair history, truncated at a chosen stage.
// Stage -1 holds B source vertices; every stage t >= 0 holds n*alpha
// vertices, one per (node, slot). Edges run stage to stage only:
//   - stage -1 -> stage 0 is complete bipartite;
//   - a surviving (i, j) keeps an identity edge to itself at t+1;
//   - the replaced node's vertices receive one edge from each helper's
//     transferred slot (i, p_t(i)).
class FlowGraph {
 public:
  FlowGraph(const SystemParams& params, const FailureHistory& history,
            int top_stage);

  int top_stage() const { return top_stage_; }
  const SystemParams& params() const { return params_; }
  const FailureHistory& history() const { return history_; }
  const Digraph& graph() const { return graph_; }
  const std::vector<int>& source_vertices() const { return sources_; }

  int SourceVertex(int b) const;                       // b in 1..B
  int StageVertex(int stage, int node, int slot) const;
  int VertexOf(const GroundElem& e) const { return StageVertex(e.stage, e.node, e.slot); }

 private:
  SystemParams params_;
  FailureHistory history_;
  int top_stage_;
  Digraph graph_;
  std::vector<int> sources_;
};

FlowGraph BuildGraph(const SystemParams& params, const FailureHistory& history,
                     int top_stage);

// Rank of a vertex set in the strict gammoid over the reversed graph with
// the source layer as sink set: the largest subset linkable to stage -1 by
// vertex-disjoint paths.
int GammoidRank(const FlowGraph& graph, const std::vector<int>& vertices);

// Whether a subset of the ground set {(i,j)_m : m in {t, t+1}} is
// independent in the stage-t gammoid. Elements must be distinct and lie in
// the two admissible stages.
bool IsIndependent(const FlowGraph& graph, int t, const std::vector<GroundElem>& subset);

// Rank of the collectors' vertex group at one stage (default: the top
// stage). Equals B exactly when the graph supports recovery from these k
// nodes.
int RecoveryRankAtStage(const FlowGraph& graph, const std::vector<int>& collectors,
                        int stage = -1);

// Sizes |AV_N|, ..., |AV_0| of the active-vertex sets built backward from
// the collectors: surviving members are carried over, and members of the
// replaced node are re-routed onto available helpers (smallest node index
// first). Throws InfeasibleLinking if a stage falls short of the size the
// construction guarantees.
std::vector<int> ActiveVertexTrace(const FlowGraph& graph,
                                   const std::vector<int>& collectors);

// Writes one edge per line: "stage:vertex -> stage:vertex label". Labels
// are 1 for survivor and initialization edges; repair edges take their
// local coefficient from `locals` (per-stage alpha x (n-1) matrices,
// helper columns in ascending node order) when provided.
void ExportGraph(const FlowGraph& graph, const std::vector<Matrix>* locals,
                 std::ostream& os);

}  // namespace regen
