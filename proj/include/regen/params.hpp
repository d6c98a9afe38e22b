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
#include <vector>

#include <boost/rational.hpp>

#include "regen/errors.hpp"

namespace regen {

// Tradeoff quantities are exact rationals; field arithmetic stays in the
// codec. int64 components are ample at the instance sizes this tool runs.
using Rational = boost::rational<int64_t>;

// One validated code instance with the normalized geometry: d = n-1,
// beta = 1, alpha = n-ell, B = k*alpha - (1 + ... + (k-ell)).
struct SystemParams {
  int n = 0;      // storage nodes
  int k = 0;      // recovery degree
  int d = 0;      // repair degree, always n-1
  int ell = 0;    // vertex index on the tradeoff curve (1 = MBR, k = MSR)
  int alpha = 0;  // symbols stored per node
  int beta = 1;   // symbols sent per helper per repair
  int64_t file_size = 0;  // B, symbols per encoded chunk
  uint32_t q = 0;         // field modulus

  friend bool operator==(const SystemParams&, const SystemParams&) = default;
};

// One vertex of the storage/repair-bandwidth tradeoff, exact.
struct TradeoffPoint {
  Rational alpha;
  Rational beta;
  int ell = 0;
};

// Maximum file size supportable at (alpha, beta):
// sum_{i=1..k} min{alpha, (d-i+1) beta}.
Rational TradeoffBound(const Rational& alpha, const Rational& beta, int k, int d);

// The ell-th vertex of the tradeoff curve for file size B:
// (alpha, beta) = 2B / (2k(d-ell+1) - (k-ell)(k-ell+1)) * (d-ell+1, 1).
TradeoffPoint VertexPoint(int ell, const Rational& file_size, int k, int d);

// Smallest field size for which independence-preserving local coefficients
// are guaranteed to exist: C(n*alpha, B) - C((n-1)*alpha, B).
int64_t MinFieldSize(int n, int alpha, int64_t file_size);

// Builds the normalized SystemParams for (n, k, ell) over F_q. Throws
// FieldTooSmall when q is below the MinFieldSize bound unless
// allow_small_field is set (the bound is sufficient, not necessary, so
// experiments may probe below it).
SystemParams NormalizedParams(int n, int k, int ell, uint32_t q,
                              bool allow_small_field = false);

// C(n, r) with overflow checking; throws InvalidParams past int64 range.
int64_t Binomial(int64_t n, int64_t r);

uint32_t SmallestPrimeAtLeast(uint64_t n);

// All r-subsets of {1, ..., n} in lexicographic order.
std::vector<std::vector<int>> KSubsets(int n, int r);

}  // namespace regen
