// Copyright 2026 The PeerArena Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PEERARENA_TYPES_H_
#define PEERARENA_TYPES_H_

#include <compare>
#include <stdexcept>
#include <string>

namespace peerarena {

// Index of a model within its pool. Stable for the lifetime of a run.
struct ModelId {
  int value = 0;

  friend auto operator<=>(const ModelId&, const ModelId&) = default;
};

// Raised for invalid configuration or parameter ranges.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when a combat has no usable judgment (all abstained or zero weight).
class VoidJudgment : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when Pearson correlation is undefined for the given series.
class UndefinedCorrelation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when the external trainer hook exits with a nonzero status.
class TrainerFailure : public std::runtime_error {
 public:
  TrainerFailure(const std::string& what, int iteration, int exit_code)
      : std::runtime_error(what), iteration_(iteration), exit_code_(exit_code) {}
  int iteration() const { return iteration_; }
  int exit_code() const { return exit_code_; }

 private:
  int iteration_;
  int exit_code_;
};

}  // namespace peerarena

#endif  // PEERARENA_TYPES_H_
