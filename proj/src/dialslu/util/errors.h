// dialslu/util/errors.h

// Copyright 2026  dialslu project contributors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DIALSLU_UTIL_ERRORS_H_
#define DIALSLU_UTIL_ERRORS_H_

#include <stdexcept>
#include <string>

namespace dialslu {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid configuration value or key.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Tensor or sequence dimensions do not match.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Argument outside its mathematical domain (zero factor, empty reference).
class DomainError : public Error {
 public:
  using Error::Error;
};

class EmptyInputError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Out-of-range index (e.g. turn index).
class IndexError : public Error {
 public:
  using Error::Error;
};

// Raw sequence exceeds the model's maximum length.
class LengthError : public Error {
 public:
  using Error::Error;
};

// A call violates a model-state contract (history on a non-history model,
// double surgery, ...).
class ContractError : public Error {
 public:
  using Error::Error;
};

// No valid alignment exists, or aligned inputs differ in length.
class AlignmentError : public Error {
 public:
  using Error::Error;
};

// Non-finite values where finite ones are required.
class NumericError : public Error {
 public:
  using Error::Error;
};

// A REF/DEC regime demand cannot be met (missing cache, missing baseline).
class RegimeError : public Error {
 public:
  using Error::Error;
};

// Records that must agree (fingerprints) do not.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace dialslu

#endif  // DIALSLU_UTIL_ERRORS_H_
