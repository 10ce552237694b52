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
#include <map>
#include <string>
#include <vector>

#include "mchain/linalg.hpp"
#include "mchain/spaces.hpp"

namespace mchain {

/// A tuple of outcome labels, one per apparatus in chain order.
using OutcomeTuple = std::vector<std::string>;

/// Human-readable form "(a,b,c)" used in tables and JSON keys.
std::string tuple_label(const OutcomeTuple &tuple);

/// One measurement in the chain: an outcome alphabet plus one operator per
/// outcome. The operators of the family at slot k act on factors 0..k-1
/// (full factor dimensions, init directions included) and must satisfy the
/// completeness equation.
class MeasurementFamily {
  public:
    /// Validates the completeness equation at construction.
    MeasurementFamily(std::size_t slot, std::vector<std::string> outcomes, std::vector<Operator> operators,
                      double tol = kDefaultTol);
    /// Skips the completeness check; for deliberately broken fixtures.
    static MeasurementFamily deferred(std::size_t slot, std::vector<std::string> outcomes,
                                      std::vector<Operator> operators);

    std::size_t slot() const { return slot_; }
    const std::vector<std::string> &outcomes() const { return outcomes_; }
    std::size_t outcome_count() const { return outcomes_.size(); }
    const Operator &op(std::size_t outcome_idx) const { return operators_[outcome_idx]; }
    const Operator &op(const std::string &outcome) const;
    std::size_t domain_dim() const { return operators_.front().rows(); }

  private:
    MeasurementFamily() = default;

    std::size_t slot_ = 0;
    std::vector<std::string> outcomes_;
    std::vector<Operator> operators_;
};

/// One tensor component of the evolved total state: the outcome tuple
/// together with the (unnormalized) vector on the measured prefix of the
/// chain, i.e. the system factor tensored with the final apparatus states.
struct Branch {
    OutcomeTuple tuple;
    StateVector vector;
    /// Squared norm of the component; the tuple's world weight.
    double weight() const { return norm_squared(vector); }
};

/// A complete chain: layout, the system's initial state, and the family of
/// each apparatus in slot order 1..n.
struct MeasurementChain {
    ChainLayout layout;
    StateVector initial;
    std::vector<MeasurementFamily> families;

    std::size_t length() const { return families.size(); }
    const MeasurementFamily &family(std::size_t slot) const { return families[slot - 1]; }
};

/// Checks that the chain's families are slotted 1..n in order, act on the
/// right prefix dimensions, use the layout's outcome alphabets, and that
/// the initial state is a unit vector on the system factor.
void validate_chain(const MeasurementChain &chain, double tol = kDefaultTol);

/// The leftover outcome operator I - sum_i P_i for a family of pairwise
/// orthogonal projectors. This is the only case where the square root
/// sqrt(I - sum P_i^dag P_i) is needed, and there it reduces to the
/// complement itself; non-projector or non-orthogonal inputs are rejected
/// rather than routed through a general operator square root.
Operator projector_complement(const std::vector<Operator> &projectors, double tol = kDefaultTol);

/// Sum_m M_m^dag M_m == I within tol.
bool check_completeness(const MeasurementFamily &family, double tol = kDefaultTol);

/// Every operator Hermitian and idempotent, operators mutually orthogonal
/// (M_a M_b = delta_ab M_a), and the family sums to I, all within tol.
bool check_pvm(const MeasurementFamily &family, double tol = kDefaultTol);

/// Each operator of the family at slot k maps the final-restricted domain
/// H_S (x) H_1 (x) ... (x) H_{k-1} into itself, verified by probing that
/// subspace's basis.
bool check_domain_condition(const ChainLayout &layout, const MeasurementFamily &family, double tol = kDefaultTol);

/// The dilation isometry of one measurement: maps a state on factors
/// 0..k-1 to its per-outcome components on factors 0..k, with component m
/// equal to (M_m state) (x) |Phi^k[m]>. The summed output has the norm of
/// the input. The unitary U_k is never materialized; only its action on
/// H (x) |Phi^k_init> is needed.
std::vector<StateVector> measurement_step(const ChainLayout &layout, const StateVector &state,
                                          const MeasurementFamily &family, double tol = kDefaultTol);

/// Applies the dilation isometries of families first_slot..last_slot in
/// order, starting from a state on factors 0..first_slot-1, and returns
/// the summed state on factors 0..last_slot.
StateVector evolve_through(const ChainLayout &layout, const StateVector &state,
                           const std::vector<MeasurementFamily> &families, std::size_t first_slot,
                           std::size_t last_slot);

/// The virtual total state |Psi^k_Total>: the chain evolved through the
/// first k families, tensored with the init states of apparatuses k+1..n.
StateVector virtual_total_state(const MeasurementChain &chain, std::size_t k);

/// Contracts one apparatus factor of a multi-factor state against a bra
/// vector, removing that factor. dims lists the factor dimensions of the
/// state in order; factor_index selects the one to contract.
StateVector contract_factor(const StateVector &state, const std::vector<std::size_t> &dims, std::size_t factor_index,
                            const StateVector &bra);

/// Runs the full chain on the initial state and decomposes the result into
/// one Branch per outcome tuple (all tuples of Omega_1 x ... x Omega_n,
/// enumerated with the last outcome fastest). The branch weights must sum
/// to one within tol; a larger defect signals an incomplete chain or a
/// domain-condition leak.
std::vector<Branch> compose_chain(const MeasurementChain &chain, double tol = kDefaultTol);

/// As compose_chain, but running only families 1..k.
std::vector<Branch> compose_chain_prefix(const MeasurementChain &chain, std::size_t k, double tol = kDefaultTol);

/// The unique composed measurement operator M^{1..n}_tuple on the system
/// space, built column-by-column by running the chain on each system basis
/// vector and contracting the tuple's component against the final states.
Operator extract_composed_operator(const MeasurementChain &chain, const OutcomeTuple &tuple, double tol = kDefaultTol);

/// Strips the final apparatus states off a branch vector, recovering the
/// system-space part M^{1..k}_tuple |Psi>.
StateVector branch_system_part(const ChainLayout &layout, const Branch &branch);

/// Enumerates all outcome tuples of the chain (last outcome fastest).
std::vector<OutcomeTuple> enumerate_tuples(const ChainLayout &layout, std::size_t n_apparatuses);

/// Outcome indices of a tuple in the layout's alphabets.
std::vector<std::size_t> tuple_indices(const ChainLayout &layout, const OutcomeTuple &tuple);

}  // namespace mchain
