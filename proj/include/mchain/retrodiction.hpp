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

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mchain/measurement.hpp"
#include "mchain/typicality.hpp"

namespace mchain {

// The operator-identity readings of the paper's vector-quantified
// "unchanged" conditions:
//
//  * The system's states are unchanged after measurement j iff each
//    M^j_m, restricted to the final-subspace domain, equals I_S (x) K_m
//    for some K_m on the apparatus factors. The vector condition forces
//    this by linearity: matching tensor components of the outputs on
//    basis superpositions forces a common right factor, so a per-input
//    right factor is automatically a single operator K_m.
//
//  * Apparatus i's final states are unchanged after measurement j iff
//    every M^j_m preserves each pinned-|Phi^i[m_i]> slice of the
//    final-subspace domain, i.e. (I - P_i(m_i)) M^j_m P_i(m_i) = 0 there.

/// Def-10 check for the family at slot j, probed on the final-restricted
/// domain basis.
bool system_unchanged_after(const MeasurementChain &chain, std::size_t j, double tol = kDefaultTol);

/// Def-12 check: apparatus i's pinned final-state slices are preserved by
/// every operator of the family at slot j (requires i < j).
bool apparatus_unchanged_after(const MeasurementChain &chain, std::size_t i, std::size_t j,
                               double tol = kDefaultTol);

/// Unchanged after every measurement from j onward.
bool system_confirmed_before(const MeasurementChain &chain, std::size_t j, double tol = kDefaultTol);
bool apparatus_confirmed_before(const MeasurementChain &chain, std::size_t i, std::size_t j,
                                double tol = kDefaultTol);

/// A confirming point: the system itself, or one of the apparatuses.
struct ConfirmingPoint {
    bool system_itself = false;
    std::size_t apparatus = 0;  // valid when !system_itself

    bool operator==(const ConfirmingPoint &other) const = default;
};

ConfirmingPoint confirming_point_for_system(const MeasurementChain &chain, double tol = kDefaultTol);
/// Always an apparatus index; apparatus n confirms itself.
std::size_t confirming_point_for_apparatus(const MeasurementChain &chain, std::size_t i, double tol = kDefaultTol);

/// The unchanged grid plus the min-V confirming points derived from it.
struct ConfirmingReport {
    ConfirmingPoint system_point;
    std::vector<std::size_t> apparatus_points;           // [i-1] -> confirming apparatus for A_i
    std::vector<bool> system_unchanged;                  // [j-1] -> unchanged after M^j
    std::vector<std::vector<bool>> apparatus_unchanged;  // [i-1][j-1], meaningful for j > i
};

ConfirmingReport confirming_report(const MeasurementChain &chain, double tol = kDefaultTol);

/// A total-space state decomposed as (system part) x (finals for slots
/// 1..active) x (inits for the rest).
struct ProductBranch {
    StateVector system_part = StateVector(1);  // unnormalized system-factor part
    std::vector<std::size_t> outcome_indices;  // per apparatus 1..active
    OutcomeTuple tuple;                        // the same, as labels
};

/// Attempts the product decomposition above; nullopt when some factor is
/// not pinned to a single final (or init) state.
std::optional<ProductBranch> decompose_product_branch(const MeasurementChain &chain, const StateVector &total,
                                                      std::size_t active, double tol = kDefaultTol);

/// If the state factorizes across (factor i) x (everything else), returns
/// the normalized factor-i state; nullopt otherwise.
std::optional<StateVector> extract_factor_state(const std::vector<std::size_t> &dims, const StateVector &state,
                                                std::size_t factor_index, double tol = kDefaultTol);

/// Which factor a retrodiction query addresses.
struct RetrodictionQuery {
    bool system = false;
    std::size_t apparatus = 0;

    static RetrodictionQuery for_system() { return RetrodictionQuery{true, 0}; }
    static RetrodictionQuery for_apparatus(std::size_t i) { return RetrodictionQuery{false, i}; }
};

/// Backtracking along a confirming point: given the final product branch,
/// returns the queried factor's state immediately before measurement j.
/// The relevant confirmed-before predicate must hold; otherwise the
/// inference is not licensed and the query is rejected.
StateVector backtrack_cf(const MeasurementChain &chain, const StateVector &final_total, RetrodictionQuery query,
                         std::size_t j, double tol = kDefaultTol);

/// One projector-retrodiction step: from the total state after measurement
/// `active` (a product branch), derives the total state after measurement
/// active-1 by pinning every apparatus whose finals survive measurement
/// `active` and projecting the virtual pre-final state. Families 1..active
/// must form PVMs unless require_pvm is false (used only to demonstrate
/// why the naive rule fails). Throws ZeroStateError when the projected
/// vector is numerically zero.
StateVector ru_step(const MeasurementChain &chain, const StateVector &final_total, std::size_t active,
                    bool require_pvm = true, double tol = kDefaultTol);

/// Total states after each measurement, recovered by applying ru_step
/// repeatedly, plus per-factor states wherever the product structure holds.
struct RetrodictedStates {
    std::vector<StateVector> total_after_step;                       // [k-1] -> after M^k, k = 1..n
    std::vector<std::vector<std::optional<StateVector>>> factor_states;  // [k-1][factor]

    const StateVector &after_step(std::size_t k) const { return total_after_step[k - 1]; }
};

/// Recursive projector retrodiction down to the first measurement. Each
/// intermediate input must again decompose as a product branch over the
/// truncated chain; otherwise RecursionBlockedError is thrown rather than
/// extrapolating beyond what the recursion covers.
RetrodictedStates ru_recursive(const MeasurementChain &chain, const StateVector &final_total,
                               double tol = kDefaultTol);

/// One (target, step) comparison of the two retrodiction routes.
struct AgreementEntry {
    std::string target;  // "system" or apparatus label
    std::size_t step_j = 0;
    bool ok = false;
};

/// Compares backtracking against projector retrodiction at every (target,
/// step) where the confirmed-before predicate licenses backtracking.
std::vector<AgreementEntry> cf_ru_agreement(const MeasurementChain &chain, const StateVector &final_total,
                                            double tol = kDefaultTol);

struct Prop1Violation {
    OutcomeTuple final_tuple;
    OutcomeTuple prefix_tuple;
    std::string target;
    std::size_t step_j = 0;
    std::string detail;
};

struct Prop1Report {
    std::size_t checks_run = 0;
    std::vector<Prop1Violation> violations;

    bool passed() const { return violations.empty(); }
};

/// Mechanical verification of the confirmed-before backtracking claim:
/// for every nonzero final branch and every (target, step j) where the
/// predicate holds, every nonzero step-(j-1) branch whose forward
/// evolution reaches that final tuple already carries the final branch's
/// target-factor state. Requires the domain condition on every family.
Prop1Report verify_proposition1(const MeasurementChain &chain, double tol = 1e-10);

/// Two-pin projector diagnostics over a sampled world: pinning both the
/// first and second apparatus at the sampled outcomes annihilates the
/// virtual post-second-measurement state exactly on the mismatched
/// repetitions.
struct Remark1Report {
    std::size_t samples = 0;
    std::size_t annihilated = 0;
    double rate = 0.0;
    /// Annihilation occurred exactly on the samples with differing first
    /// and second outcomes.
    bool matches_mismatch_exactly = false;
};

Remark1Report two_pin_annihilation(const MeasurementChain &chain, const WorldPrefix &world, double tol = 1e-10);

/// The grouped-measurement contradiction: fusing the last two apparatuses
/// of the three-step chain into one family breaks the PVM premise, and
/// projector retrodiction without that premise contradicts the
/// backtracking route.
struct Remark2Report {
    bool grouped_family_complete = false;
    bool grouped_family_pvm = false;        // expected false
    OutcomeTuple witness_tuple;             // three-chain tuple used as the final record
    StateVector naive_state = StateVector(1);  // S+F state retrodicted by the naive rule
    StateVector cf_state = StateVector(1);     // S+F state from the backtracking route
    double overlap_squared = 0.0;           // |<naive|cf>|^2, 1/2 for the built-in chain
    bool contradiction = false;             // overlap_squared differs from 1
};

Remark2Report demonstrate_naive_ru_failure(const MeasurementChain &chain, double tol = 1e-10);

}  // namespace mchain
