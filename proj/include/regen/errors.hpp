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

#include <stdexcept>
#include <string>

namespace regen {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonPrimeModulus : public Error {
 public:
  using Error::Error;
};

class DivideByZero : public Error {
 public:
  using Error::Error;
};

class SingularSystem : public Error {
 public:
  using Error::Error;
};

class InvalidParams : public Error {
 public:
  using Error::Error;
};

class FieldTooSmall : public Error {
 public:
  using Error::Error;
};

class NotEnoughHistory : public Error {
 public:
  using Error::Error;
};

class ExhaustedIndices : public Error {
 public:
  using Error::Error;
};

class InvalidHistory : public Error {
 public:
  using Error::Error;
};

class MissingHelper : public Error {
 public:
  using Error::Error;
};

class TooLarge : public Error {
 public:
  using Error::Error;
};

class InfeasibleLinking : public Error {
 public:
  using Error::Error;
};

// Thrown when the randomized coefficient search gives up; carries the number
// of rejected samples so callers can report how hard the search tried.
class CoefficientSearchExhausted : public Error {
 public:
  CoefficientSearchExhausted(const std::string& what, int retries)
      : Error(what), retries_(retries) {}
  int retries() const { return retries_; }

 private:
  int retries_;
};

}  // namespace regen
