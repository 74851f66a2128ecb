// Copyright 2026 The kbrefactor Authors. All rights reserved.
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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kbr {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed knowledge-base text. Line and column are 1-based.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error("line " + std::to_string(line) + ", column " +
              std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// A predicate symbol used with two different arities.
class ArityError : public Error {
 public:
  using Error::Error;
};

/// A predicate role declared twice.
class RoleError : public Error {
 public:
  using Error::Error;
};

/// Recursion through non-primitive predicates; unfolding would not terminate.
class CycleError : public Error {
 public:
  using Error::Error;
};

/// A non-primitive predicate is called but has no defining clause.
class MissingDefinitionError : public Error {
 public:
  using Error::Error;
};

/// A configured size cap (unfold count, model size, enumeration size) was hit.
class LimitError : public Error {
 public:
  using Error::Error;
};

/// Bottom-up evaluation was requested without a finite domain or depth.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A refactored program failed the equivalence check against its input.
class VerificationError : public Error {
 public:
  using Error::Error;
};

/// Broken internal invariant, e.g. a solver assignment violating the model.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace kbr
