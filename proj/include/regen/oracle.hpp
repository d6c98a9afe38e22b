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

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "regen/codec.hpp"
#include "regen/flowgraph.hpp"

namespace regen {

inline constexpr int kBruteForceVertexLimit = 30;
inline constexpr int kDefaultMaxStrictGroundSet = 32;

// Ground truth for DisjointPathCount: exhaustive backtracking over all
// vertex-disjoint path systems. Throws TooLarge above
// kBruteForceVertexLimit vertices.
int BruteLinkingRank(const Digraph& g, const std::vector<int>& from,
                     const std::vector<int>& to);

// Exhaustive independence table of a matroid given by a predicate over
// subset bitmasks, restricted to subsets of size at most max_subset_size
// (unrestricted when negative). The I1-I3 axioms are verified on
// construction; a violation throws Error, since it means the predicate is
// not a matroid.
class MatroidSnapshot {
 public:
  MatroidSnapshot(int ground_size, const std::function<bool(uint32_t)>& independent,
                  int max_subset_size, std::string source);

  int ground_size() const { return ground_size_; }
  const std::string& source() const { return source_; }
  bool Contains(uint32_t mask) const { return table_[mask]; }
  std::vector<uint32_t> Members() const;

 private:
  int ground_size_;
  int max_subset_size_;
  std::string source_;
  std::vector<bool> table_;
};

struct IsoWitness {
  std::vector<GroundElem> subset;
  bool gammoid_independent = false;
  int linear_rank = 0;
};

struct IsoVerdict {
  bool ok = true;
  std::optional<IsoWitness> witness;  // first mismatch in enumeration order
  int64_t subsets_checked = 0;
};

// Checks that the linear matroid of the global encoding vectors across one
// repair agrees with the stage-t gammoid on every reduced subset of size at
// most B: new-stage elements restricted to the replaced node, combined with
// any old-stage elements. Enumeration is lexicographic so witnesses are
// stable. The unqualified version partitions the enumeration over OpenMP;
// the serial one is the reference.
IsoVerdict IsomorphismCheck(const EncodingState& before, const EncodingState& after,
                            const FlowGraph& graph, int t,
                            int max_ground_set = kDefaultMaxStrictGroundSet);
IsoVerdict IsomorphismCheckSerial(const EncodingState& before, const EncodingState& after,
                                  const FlowGraph& graph, int t,
                                  int max_ground_set = kDefaultMaxStrictGroundSet);

// Evaluates the one-step recursion for gammoid independence: a reduced
// subset is independent iff the new-stage elements can be traded for
// distinct transferred slots outside the subset that remain independent
// together with the old-stage elements. Returns whether the recursion
// agrees with the direct linking answer.
bool IndependenceRecursionCheck(const FlowGraph& graph, int t,
                                const std::vector<GroundElem>& subset);

}  // namespace regen
