// Copyright 2026 The tensor-reid Authors
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

namespace treid {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes or dimensions disagree.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// An index or requested size lies outside its valid range.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file or model blob.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Input data violates a semantic precondition (duplicate ids, no pairs, ...).
class DataError : public Error {
 public:
  using Error::Error;
};

/// A factorization failed, typically an under-regularized scatter matrix.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace treid
