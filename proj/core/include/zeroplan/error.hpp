// Copyright 2026 The zeroplan Authors
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

#ifndef ZEROPLAN_ERROR_HPP_
#define ZEROPLAN_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace zeroplan {

/// Base class for all zeroplan errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Bad arguments or a malformed spec document. Maps to exit code 1.
class InvalidInputError : public Error {
 public:
  explicit InvalidInputError(const std::string& what) : Error(what) {}
};

/// No feasible plan exists, or the model does not fit the cluster even at
/// ZeRO stage 3. Maps to exit code 2.
class InfeasibleError : public Error {
 public:
  explicit InfeasibleError(const std::string& what) : Error(what) {}
};

/// A broken internal invariant, e.g. a plan that OOMs against its own
/// cluster. Indicates a bug rather than bad input.
class InternalError : public Error {
 public:
  explicit InternalError(const std::string& what) : Error(what) {}
};

}  // namespace zeroplan

#endif  // ZEROPLAN_ERROR_HPP_
