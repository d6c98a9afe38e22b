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

#include "regen/params.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "regen/field.hpp"

namespace regen {

Rational TradeoffBound(const Rational& alpha, const Rational& beta, int k, int d) {
  if (alpha <= 0 || beta <= 0 || k < 1 || k > d) {
    throw InvalidParams("tradeoff bound requires alpha, beta > 0 and 1 <= k <= d");
  }
  Rational total(0);
  for (int i = 1; i <= k; ++i) {
    total += std::min(alpha, Rational(d - i + 1) * beta);
  }
  return total;
}

TradeoffPoint VertexPoint(int ell, const Rational& file_size, int k, int d) {
  if (ell < 1 || ell > k || k > d || file_size <= 0) {
    throw InvalidParams("vertex point requires 1 <= ell <= k <= d and B > 0");
  }
  int64_t denom = 2ll * k * (d - ell + 1) - static_cast<int64_t>(k - ell) * (k - ell + 1);
  Rational scale = Rational(2) * file_size / Rational(denom);
  return TradeoffPoint{scale * Rational(d - ell + 1), scale, ell};
}

int64_t Binomial(int64_t n, int64_t r) {
  if (n < 0 || r < 0) throw InvalidParams("binomial with negative argument");
  if (r > n) return 0;
  r = std::min(r, n - r);
  __int128 acc = 1;
  for (int64_t i = 1; i <= r; ++i) {
    acc = acc * (n - r + i) / i;
    if (acc > std::numeric_limits<int64_t>::max()) {
      throw InvalidParams("binomial overflows int64");
    }
  }
  return static_cast<int64_t>(acc);
}

int64_t MinFieldSize(int n, int alpha, int64_t file_size) {
  if (n < 1 || alpha < 1 || file_size < 0 ||
      file_size > static_cast<int64_t>(n) * alpha) {
    throw InvalidParams("min field size requires B <= n*alpha");
  }
  return Binomial(static_cast<int64_t>(n) * alpha, file_size) -
         Binomial(static_cast<int64_t>(n - 1) * alpha, file_size);
}

SystemParams NormalizedParams(int n, int k, int ell, uint32_t q,
                              bool allow_small_field) {
  if (n < 2 || ell < 1 || ell > k || k > n - 1) {
    throw InvalidParams("normalized params require 1 <= ell <= k <= n-1");
  }
  SystemParams p;
  p.n = n;
  p.k = k;
  p.d = n - 1;
  p.ell = ell;
  p.alpha = n - ell;
  p.beta = 1;
  int64_t tail = static_cast<int64_t>(k - ell) * (k - ell + 1) / 2;
  p.file_size = static_cast<int64_t>(k) * p.alpha - tail;
  p.q = q;

  if (!IsPrime(q)) {
    throw NonPrimeModulus("q = " + std::to_string(q) + " is not prime");
  }
  if (!allow_small_field) {
    int64_t bound = MinFieldSize(n, p.alpha, p.file_size);
    if (static_cast<int64_t>(q) < bound) {
      throw FieldTooSmall("q = " + std::to_string(q) + " is below the required bound " +
                          std::to_string(bound) + " for (n=" + std::to_string(n) +
                          ", k=" + std::to_string(k) + ", ell=" + std::to_string(ell) + ")");
    }
  }

  // The normalization is tight: the bound of the tradeoff inequality equals
  // B exactly at every vertex.
  Rational rhs = TradeoffBound(Rational(p.alpha), Rational(1), k, p.d);
  if (rhs != Rational(p.file_size)) {
    throw InvalidParams("internal: normalized parameters do not sit on the tradeoff curve");
  }
  return p;
}

uint32_t SmallestPrimeAtLeast(uint64_t n) {
  uint64_t c = std::max<uint64_t>(n, 2);
  while (!IsPrime(c)) ++c;
  if (c >= (1ull << 31)) throw InvalidParams("prime search exceeded 2^31");
  return static_cast<uint32_t>(c);
}

std::vector<std::vector<int>> KSubsets(int n, int r) {
  std::vector<std::vector<int>> out;
  if (r < 0 || r > n) return out;
  std::vector<int> cur(r);
  for (int i = 0; i < r; ++i) cur[i] = i + 1;
  while (true) {
    out.push_back(cur);
    int i = r - 1;
    while (i >= 0 && cur[i] == n - r + i + 1) --i;
    if (i < 0) break;
    ++cur[i];
    for (int j = i + 1; j < r; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

}  // namespace regen
