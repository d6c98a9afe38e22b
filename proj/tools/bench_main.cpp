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

// Compares the OpenMP verification kernels against their serial reference
// implementations on representative instances.

#include <chrono>
#include <cstdio>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "regen/oracle.hpp"
#include "regen/sim.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double MsPerCall(const std::function<void()>& fn, int reps) {
  fn();  // warm up
  auto start = Clock::now();
  for (int i = 0; i < reps; ++i) fn();
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count() / reps;
}

void Report(const char* kernel, double serial_ms, double parallel_ms) {
  std::printf("%-28s %10.3f %10.3f %8.2fx\n", kernel, serial_ms, parallel_ms,
              serial_ms / parallel_ms);
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (built without OpenMP)\n");
#endif
  std::printf("%-28s %10s %10s %9s\n", "kernel", "serial/ms", "omp/ms", "speedup");

  {
    // Recovery-rank sweep: C(12,6) = 924 column groups of a 36x72 state.
    regen::SystemParams params =
        regen::NormalizedParams(12, 6, 6, 1009, /*allow_small_field=*/true);
    regen::EncodingState state = regen::InitState(params, 7);
    double serial = MsPerCall([&] { regen::CheckRecoveryRanksSerial(state); }, 3);
    double parallel = MsPerCall([&] { regen::CheckRecoveryRanks(state); }, 3);
    Report("recovery ranks n=12 k=6", serial, parallel);
  }

  {
    // Matroid agreement sweep after one repair on the small instance.
    regen::SystemParams params = regen::NormalizedParams(4, 3, 2, 53);
    regen::EncodingState state = regen::InitState(params, 7);
    regen::FailureHistory history{params.n, params.alpha, {}, {}};
    std::mt19937_64 rng(7);
    regen::RepairOutcome outcome = regen::Repair(state, 2, history, rng);
    regen::FlowGraph graph = regen::BuildGraph(params, history, 1);
    double serial = MsPerCall(
        [&] { regen::IsomorphismCheckSerial(state, outcome.state, graph, 0); }, 3);
    double parallel =
        MsPerCall([&] { regen::IsomorphismCheck(state, outcome.state, graph, 0); }, 3);
    Report("matroid agreement n=4", serial, parallel);
  }

  {
    // Same sweep on the wider n=5 instance (2510 subsets per stage).
    regen::SystemParams params = regen::NormalizedParams(5, 3, 3, 191);
    regen::EncodingState state = regen::InitState(params, 7);
    regen::FailureHistory history{params.n, params.alpha, {}, {}};
    std::mt19937_64 rng(7);
    regen::RepairOutcome outcome = regen::Repair(state, 1, history, rng);
    regen::FlowGraph graph = regen::BuildGraph(params, history, 1);
    double serial = MsPerCall(
        [&] { regen::IsomorphismCheckSerial(state, outcome.state, graph, 0); }, 3);
    double parallel =
        MsPerCall([&] { regen::IsomorphismCheck(state, outcome.state, graph, 0); }, 3);
    Report("matroid agreement n=5", serial, parallel);
  }
  return 0;
}
