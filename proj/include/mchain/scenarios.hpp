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

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mchain/measurement.hpp"
#include "mchain/probability.hpp"
#include "mchain/retrodiction.hpp"
#include "mchain/typicality.hpp"

namespace mchain {

/// A runnable scenario: a chain plus an optional count of leading
/// families to pre-apply as plain unitary evolution. A pre-applied
/// apparatus is a mere quantum system: it keeps its slot in the state
/// space but contributes no outcome coordinate.
struct ScenarioSpec {
    std::string name;
    ChainLayout layout;
    StateVector initial;
    std::vector<MeasurementFamily> families;
    std::size_t mere_system_prefix = 0;
};

/// Names of the built-in scenarios, in canonical order: wigner_friend,
/// deutsch, deutsch_mere_f, wdc, wdc_mere_f.
const std::vector<std::string> &builtin_scenario_names();
bool is_builtin_scenario(const std::string &name);

/// The exact operator matrices of the named built-in scenario. Rejects
/// unknown names.
ScenarioSpec build_scenario(const std::string &name);

/// Resolves the mere-system prefix: pre-evolves the initial state through
/// the dilation isometries of the first mere_system_prefix families and
/// merges those factors into the system slot, leaving a shorter chain over
/// the remaining apparatuses.
MeasurementChain effective_chain(const ScenarioSpec &spec);

/// Everything a scenario run derives: the world distribution, sampled
/// statistics, confirming points, per-branch retrodiction, the
/// verification report, and (for the three-apparatus collaboration) the
/// two consistency demonstrations.
struct ScenarioReport {
    std::string name;
    MeasurementChain chain;  // effective chain, after any mere-prefix merge
    std::vector<Branch> branches;
    FiniteProbabilitySpace table;
    WorldPrefix world;
    bool support_ok = false;
    LlnReport lln;
    ConfirmingReport confirming;
    std::map<OutcomeTuple, RetrodictedStates> retrodicted;          // nonzero tuples
    std::map<OutcomeTuple, std::vector<AgreementEntry>> agreement;  // backtracking vs projector routes
    Prop1Report prop1;
    std::optional<Remark1Report> remark1;
    std::optional<Remark2Report> remark2;
};

ScenarioReport run_scenario(const ScenarioSpec &spec, std::size_t samples, std::uint64_t seed,
                            double stat_tol = 0.01, double alg_tol = 1e-10);

/// Exact-value oracle for one built-in scenario: the probability table,
/// the normalized post-chain branch states, the retrodicted total states
/// per step, and the confirming points. States are recorded without the
/// branch sign functions; comparisons are phase-insensitive.
struct ExpectedReport {
    FiniteProbabilitySpace table;
    std::map<OutcomeTuple, StateVector> branch_states;
    std::map<std::pair<OutcomeTuple, std::size_t>, StateVector> retrodicted;
    ConfirmingPoint system_point;
    std::vector<std::size_t> apparatus_points;
};

ExpectedReport expected_report(const std::string &name);

/// Branch sign of the collaboration chain: -1 iff the first two records
/// disagree and the third is "-".
int wdc_sign_f(const std::string &k, const std::string &l, const std::string &m);
/// Branch sign of its mere-system variant: -1 iff the record pair is
/// ("1", "-").
int wdc_sign_g(const std::string &l, const std::string &m);

/// Entrywise table and phase-insensitive state comparison of a run
/// against its oracle.
struct CompareResult {
    bool pass = true;
    std::vector<std::string> diffs;
};

CompareResult compare_expected(const ScenarioReport &report, const ExpectedReport &oracle, double tol = 1e-10);

}  // namespace mchain
