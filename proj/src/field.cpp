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

#include "regen/field.hpp"

#include <string>
#include <utility>

namespace regen {

uint64_t& FieldOpCount() {
  thread_local uint64_t count = 0;
  return count;
}

bool IsPrime(uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  if (n % 3 == 0) return n == 3;
  for (uint64_t p = 5; p * p <= n; p += 6) {
    if (n % p == 0 || n % (p + 2) == 0) return false;
  }
  return true;
}

FieldContext::FieldContext(uint32_t modulus) : q_(modulus) {
  if (modulus >= (1u << 31)) {
    throw NonPrimeModulus("modulus " + std::to_string(modulus) + " exceeds 2^31");
  }
  if (!IsPrime(modulus)) {
    throw NonPrimeModulus("modulus " + std::to_string(modulus) + " is not prime");
  }
}

uint32_t FieldContext::Inv(uint32_t a) const {
  if (a == 0) throw DivideByZero("inverse of zero");
  // Extended Euclid on (a, q); q prime guarantees gcd 1.
  int64_t t = 0, new_t = 1;
  int64_t r = q_, new_r = a % q_;
  while (new_r != 0) {
    int64_t quot = r / new_r;
    t = std::exchange(new_t, t - quot * new_t);
    r = std::exchange(new_r, r - quot * new_r);
  }
  ++FieldOpCount();
  return static_cast<uint32_t>(t < 0 ? t + q_ : t);
}

uint32_t FieldContext::Div(uint32_t a, uint32_t b) const {
  if (b == 0) throw DivideByZero("division by zero");
  return Mul(a, Inv(b));
}

uint32_t FieldContext::Pow(uint32_t base, uint64_t exp) const {
  uint64_t result = 1;
  uint64_t b = base % q_;
  while (exp > 0) {
    if (exp & 1) result = result * b % q_;
    b = b * b % q_;
    exp >>= 1;
  }
  ++FieldOpCount();
  return static_cast<uint32_t>(result);
}

Matrix::Matrix(int rows, int cols, uint32_t modulus)
    : rows_(rows), cols_(cols), q_(modulus),
      v_(static_cast<size_t>(rows) * cols, 0) {}

Matrix Matrix::Identity(int n, uint32_t modulus) {
  Matrix m(n, n, modulus);
  for (int i = 0; i < n; ++i) m.Set(i, i, 1);
  return m;
}

namespace {

// Forward elimination in place. Returns the pivot columns.
std::vector<int> Eliminate(Matrix& m, const FieldContext& ctx) {
  std::vector<int> pivots;
  int row = 0;
  for (int col = 0; col < m.cols() && row < m.rows(); ++col) {
    int pivot = -1;
    for (int r = row; r < m.rows(); ++r) {
      if (m.At(r, col) != 0) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) continue;
    if (pivot != row) {
      for (int c = 0; c < m.cols(); ++c) {
        uint32_t tmp = m.At(row, c);
        m.Set(row, c, m.At(pivot, c));
        m.Set(pivot, c, tmp);
      }
    }
    uint32_t inv = ctx.Inv(m.At(row, col));
    for (int c = col; c < m.cols(); ++c) {
      m.Set(row, c, ctx.Mul(m.At(row, c), inv));
    }
    for (int r = row + 1; r < m.rows(); ++r) {
      uint32_t factor = m.At(r, col);
      if (factor == 0) continue;
      for (int c = col; c < m.cols(); ++c) {
        m.Set(r, c, ctx.Sub(m.At(r, c), ctx.Mul(factor, m.At(row, c))));
      }
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

}  // namespace

int Rank(const Matrix& m) {
  Matrix work = m;
  FieldContext ctx(m.modulus());
  return static_cast<int>(Eliminate(work, ctx).size());
}

Matrix Solve(const Matrix& a, const Matrix& rhs) {
  if (a.rows() != rhs.rows()) {
    throw InvalidParams("solve: dimension mismatch");
  }
  FieldContext ctx(a.modulus());
  // Augment [a | rhs] and run the same elimination.
  Matrix aug(a.rows(), a.cols() + rhs.cols(), a.modulus());
  for (int r = 0; r < a.rows(); ++r) {
    for (int c = 0; c < a.cols(); ++c) aug.Set(r, c, a.At(r, c));
    for (int c = 0; c < rhs.cols(); ++c) aug.Set(r, a.cols() + c, rhs.At(r, c));
  }
  std::vector<int> pivots = Eliminate(aug, ctx);
  int rank = 0;
  for (int p : pivots) {
    if (p < a.cols()) ++rank;
  }
  if (rank < a.cols()) {
    throw SingularSystem("solve: coefficient matrix is rank deficient (rank " +
                         std::to_string(rank) + " of " + std::to_string(a.cols()) + ")");
  }
  // Any pivot inside the rhs block means the system is inconsistent.
  if (static_cast<int>(pivots.size()) > rank) {
    throw SingularSystem("solve: inconsistent right-hand side");
  }
  // Back substitution; pivot row i has its pivot on column i since the
  // left block has full column rank.
  Matrix x(a.cols(), rhs.cols(), a.modulus());
  for (int i = a.cols() - 1; i >= 0; --i) {
    for (int j = 0; j < rhs.cols(); ++j) {
      uint32_t acc = aug.At(i, a.cols() + j);
      for (int c = i + 1; c < a.cols(); ++c) {
        acc = ctx.Sub(acc, ctx.Mul(aug.At(i, c), x.At(c, j)));
      }
      x.Set(i, j, acc);
    }
  }
  return x;
}

Matrix Multiply(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows() || a.modulus() != b.modulus()) {
    throw InvalidParams("multiply: dimension or modulus mismatch");
  }
  FieldContext ctx(a.modulus());
  Matrix out(a.rows(), b.cols(), a.modulus());
  for (int i = 0; i < a.rows(); ++i) {
    for (int k = 0; k < a.cols(); ++k) {
      uint32_t aik = a.At(i, k);
      if (aik == 0) continue;
      for (int j = 0; j < b.cols(); ++j) {
        out.Set(i, j, ctx.Add(out.At(i, j), ctx.Mul(aik, b.At(k, j))));
      }
    }
  }
  return out;
}

Matrix Transpose(const Matrix& m) {
  Matrix out(m.cols(), m.rows(), m.modulus());
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) out.Set(c, r, m.At(r, c));
  }
  return out;
}

Matrix SelectColumns(const Matrix& m, std::span<const int> cols) {
  Matrix out(m.rows(), static_cast<int>(cols.size()), m.modulus());
  for (int r = 0; r < m.rows(); ++r) {
    for (size_t j = 0; j < cols.size(); ++j) {
      out.Set(r, static_cast<int>(j), m.At(r, cols[j]));
    }
  }
  return out;
}

}  // namespace regen
