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

#include <optional>
#include <string>

#include <json.hpp>

#include "mchain/scenarios.hpp"

namespace mchain {

/// Scenario files and reports carry this version; loading rejects others.
inline constexpr int kSchemaVersion = 1;

// Complex numbers serialize as two-element [re, im] arrays in all payloads.
nlohmann::json to_json(Complex z);
Complex complex_from_json(const nlohmann::json &j);

nlohmann::json to_json(const StateVector &v);
StateVector state_from_json(const nlohmann::json &j);

nlohmann::json to_json(const Operator &m);
Operator operator_from_json(const nlohmann::json &j);

nlohmann::json to_json(const ChainLayout &layout);
ChainLayout layout_from_json(const nlohmann::json &j);

nlohmann::json to_json(const MeasurementFamily &family);
MeasurementFamily family_from_json(const nlohmann::json &j);

/// Scenario files are parsed strictly: unknown keys are rejected, as are
/// version mismatches and structural errors, all as std::invalid_argument
/// with a location-bearing message.
nlohmann::json scenario_to_json(const ScenarioSpec &spec);
ScenarioSpec scenario_from_json(const nlohmann::json &j);
ScenarioSpec load_scenario_file(const std::string &path);

nlohmann::json to_json(const FiniteProbabilitySpace &fps);

/// Finite-level tests serialize as {"levels": {"n": [[symbol indices]]}}.
nlohmann::json to_json(const MLTestFinite &test);
MLTestFinite ml_test_from_json(const nlohmann::json &j);

nlohmann::json to_json(const LlnReport &report);
nlohmann::json to_json(const ConfirmingPoint &point);
nlohmann::json to_json(const ConfirmingReport &report);
nlohmann::json to_json(const Prop1Report &report);
nlohmann::json to_json(const Remark1Report &report);
nlohmann::json to_json(const Remark2Report &report);
nlohmann::json to_json(const RetrodictedStates &states);

/// The machine-readable run report; includes the oracle diff when one was
/// computed.
nlohmann::json report_to_json(const ScenarioReport &report, const std::optional<CompareResult> &compare);

/// One sampled tuple per line, each a JSON array of outcome labels.
std::string world_to_jsonl(const WorldPrefix &world);

}  // namespace mchain
