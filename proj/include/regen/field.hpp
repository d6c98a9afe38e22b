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
#include <span>
#include <vector>

#include "regen/errors.hpp"

namespace regen {

// Running count of field operations performed by the calling thread.
// Probes read the counter before and after a code path to assert that the
// path performs no arithmetic (uncoded repair must only copy symbols).
uint64_t& FieldOpCount();

// Arithmetic in the prime field Z/qZ. Values are plain uint32_t in [0, q);
// the context supplies the modulus. q must be prime and below 2^31 so that
// a*b fits in 64 bits.
class FieldContext {
 public:
  explicit FieldContext(uint32_t modulus);  // throws NonPrimeModulus

  uint32_t modulus() const { return q_; }

  uint32_t Add(uint32_t a, uint32_t b) const {
    ++FieldOpCount();
    uint32_t s = a + b;
    return s >= q_ ? s - q_ : s;
  }
  uint32_t Sub(uint32_t a, uint32_t b) const {
    ++FieldOpCount();
    return a >= b ? a - b : a + q_ - b;
  }
  uint32_t Mul(uint32_t a, uint32_t b) const {
    ++FieldOpCount();
    return static_cast<uint32_t>(uint64_t{a} * b % q_);
  }
  uint32_t Div(uint32_t a, uint32_t b) const;  // throws DivideByZero
  uint32_t Neg(uint32_t a) const { return a == 0 ? 0 : q_ - a; }
  uint32_t Inv(uint32_t a) const;  // throws DivideByZero
  uint32_t Pow(uint32_t base, uint64_t exp) const;

  // Maps an arbitrary signed value into [0, q).
  uint32_t Reduce(int64_t v) const {
    int64_t r = v % static_cast<int64_t>(q_);
    return static_cast<uint32_t>(r < 0 ? r + q_ : r);
  }

 private:
  uint32_t q_;
};

bool IsPrime(uint64_t n);

// Dense row-major matrix over a prime field. All entries share one modulus.
class Matrix {
 public:
  Matrix() : Matrix(0, 0, 0) {}
  Matrix(int rows, int cols, uint32_t modulus);

  static Matrix Identity(int n, uint32_t modulus);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  uint32_t modulus() const { return q_; }

  uint32_t At(int r, int c) const { return v_[static_cast<size_t>(r) * cols_ + c]; }
  void Set(int r, int c, uint32_t value) { v_[static_cast<size_t>(r) * cols_ + c] = value; }

  std::span<const uint32_t> Row(int r) const {
    return {v_.data() + static_cast<size_t>(r) * cols_, static_cast<size_t>(cols_)};
  }
  const std::vector<uint32_t>& data() const { return v_; }
  std::vector<uint32_t>& data() { return v_; }

  friend bool operator==(const Matrix& a, const Matrix& b) = default;

 private:
  int rows_;
  int cols_;
  uint32_t q_;
  std::vector<uint32_t> v_;
};

// Rank over F_q by Gaussian elimination with a fixed pivot rule (leftmost
// column first, topmost nonzero row), so reduced forms are reproducible.
int Rank(const Matrix& m);

// Solves a * x = rhs for a with full column rank (rows >= cols). Throws
// SingularSystem when the rank is deficient or the system is inconsistent.
Matrix Solve(const Matrix& a, const Matrix& rhs);

Matrix Multiply(const Matrix& a, const Matrix& b);
Matrix Transpose(const Matrix& m);

// Copies the selected columns, in the given order.
Matrix SelectColumns(const Matrix& m, std::span<const int> cols);

}  // namespace regen
