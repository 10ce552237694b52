// Copyright 2026 The mchain authors
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

namespace mchain {

/// Normalizing (or projecting onto) a numerically zero vector. A zero
/// projected vector is never silently renormalized; it diagnoses an
/// invalid pin set or a support violation.
class ZeroStateError : public std::runtime_error {
  public:
    explicit ZeroStateError(const std::string &what) : std::runtime_error(what) {}
};

/// Projector-based retrodiction demands that every measurement family in
/// the chain is a PVM. Grouped non-PVM families are rejected up front.
class PVMRequiredError : public std::runtime_error {
  public:
    explicit PVMRequiredError(const std::string &what) : std::runtime_error(what) {}
};

/// Recursive retrodiction only proceeds through intermediate states that
/// factor as (system part) x (pinned apparatus finals) x (remaining inits).
class RecursionBlockedError : public std::runtime_error {
  public:
    explicit RecursionBlockedError(const std::string &what) : std::runtime_error(what) {}
};

}  // namespace mchain
